//! Independent numerical checks of the closed forms: a finite-difference
//! beam-on-Winkler-foundation solver, a compensated summation of the peak
//! deflection series, and a table comparing both against the closed forms.

use std::f64::consts::PI;

use serde::Serialize;

use crate::brazier::{brazier_flattening, curvature_from_stress, equivalent_restraint_force};
use crate::error::{Error, Result};
use crate::harmonics::{
    harmonic_beam, harmonic_deflection, peak_deflection_series, series_coefficient,
    total_peak_deflection, SeriesMode, CLOSED_FORM_SERIES_FACTOR,
};
use crate::ringload::{attenuation_params, ring_load_peak};
use crate::section::{Material, PipeSection};

pub const MIN_FD_NODES: usize = 101;
pub const DEFAULT_FD_NODES: usize = 4001;
/// Domain length in decay lengths (4B/m)^{1/4}.
pub const DOMAIN_DECAY_LENGTHS: f64 = 8.0;
/// Ratios outside [1 − band, 1 + band] are flagged.
pub const RATIO_BAND: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundaryTag {
    /// w' = 0 with half the point load carried as shear
    Symmetry,
    /// w = w' = 0
    Clamped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FdSolution {
    pub nodes: usize,
    /// mm
    pub spacing: f64,
    /// Deflection at x_i = i·spacing (mm); the last node is the clamped end.
    pub w: Vec<f64>,
    /// mm
    pub length: f64,
    /// Boundary conditions at x = 0 and x = length.
    pub boundaries: [BoundaryTag; 2],
    /// Largest residual of the discrete equations, relative to |P|/h.
    pub residual: f64,
}

impl FdSolution {
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.spacing
    }

    pub fn peak(&self) -> f64 {
        self.w[0]
    }
}

/// Solves B·w'''' + m·w = P·δ(x) on the half line [0, L] with central
/// differences: symmetry at x = 0, clamped at x = L.
pub fn fd_winkler(
    rigidity: f64,
    foundation: f64,
    load: f64,
    length: f64,
    nodes: usize,
) -> Result<FdSolution> {
    if !(rigidity > 0.0 && foundation > 0.0) {
        return Err(Error::InvalidInput(format!(
            "beam rigidity and foundation stiffness must be positive (got {rigidity}, {foundation})"
        )));
    }
    if nodes < MIN_FD_NODES {
        return Err(Error::InvalidInput(format!(
            "at least {MIN_FD_NODES} nodes are required (got {nodes})"
        )));
    }
    let required = DOMAIN_DECAY_LENGTHS * (4.0 * rigidity / foundation).powf(0.25);
    if !(length >= required * (1.0 - 1e-12)) {
        return Err(Error::DomainTooShort { length, required });
    }

    let h = length / (nodes - 1) as f64;
    let c = rigidity / h.powi(4);
    // unknowns 0..=last; the clamped end node is fixed at zero
    let size = nodes - 1;
    let last = nodes - 1;
    let mut band = Pentadiagonal::zeros(size);
    for i in 0..size {
        for (offset, coeff) in [(-2i64, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)] {
            let mut j = (i as i64 + offset).unsigned_abs() as usize;
            if j > last {
                j = 2 * last - j;
            }
            if j == last {
                continue;
            }
            band.add(i, j, c * coeff);
        }
        band.add(i, i, foundation);
    }
    let mut rhs = vec![0.0; size];
    rhs[0] = load / h;
    let original = band.clone();
    // halving the symmetry row makes the operator symmetric
    band.scale_row(0, 0.5);
    rhs[0] *= 0.5;

    let mut w = band.solve(rhs)?;
    let scale = load.abs() / h;
    let residual = original
        .residual(&w, load / h)
        .into_iter()
        .fold(0.0f64, |acc, r| acc.max(r.abs()));
    w.push(0.0);
    Ok(FdSolution {
        nodes,
        spacing: h,
        w,
        length,
        boundaries: [BoundaryTag::Symmetry, BoundaryTag::Clamped],
        residual: if scale > 0.0 { residual / scale } else { residual },
    })
}

/// Banded matrix with bandwidth two on each side.
#[derive(Debug, Clone)]
struct Pentadiagonal {
    // rows[i][k] holds column i + k − 2
    rows: Vec<[f64; 5]>,
}

impl Pentadiagonal {
    fn zeros(n: usize) -> Self {
        Self {
            rows: vec![[0.0; 5]; n],
        }
    }

    fn add(&mut self, i: usize, j: usize, value: f64) {
        let k = j as i64 - i as i64 + 2;
        debug_assert!((0..5).contains(&k));
        self.rows[i][k as usize] += value;
    }

    fn scale_row(&mut self, i: usize, factor: f64) {
        for v in &mut self.rows[i] {
            *v *= factor;
        }
    }

    fn residual(&self, x: &[f64], first_rhs: f64) -> Vec<f64> {
        let n = self.rows.len();
        (0..n)
            .map(|i| {
                let ax: f64 = (0..5)
                    .filter_map(|k| {
                        let j = i as i64 + k as i64 - 2;
                        (0..n as i64)
                            .contains(&j)
                            .then(|| self.rows[i][k] * x[j as usize])
                    })
                    .sum();
                ax - if i == 0 { first_rhs } else { 0.0 }
            })
            .collect()
    }

    /// Gaussian elimination without pivoting; the matrices built here are
    /// symmetric positive definite.
    fn solve(mut self, mut rhs: Vec<f64>) -> Result<Vec<f64>> {
        let n = self.rows.len();
        for i in 0..n {
            let pivot = self.rows[i][2];
            if pivot.abs() < f64::MIN_POSITIVE || !pivot.is_finite() {
                return Err(Error::SingularSystem(i));
            }
            for below in 1..=2 {
                let r = i + below;
                if r >= n {
                    break;
                }
                let factor = self.rows[r][2 - below] / pivot;
                if factor == 0.0 {
                    continue;
                }
                for k in 0..=2 {
                    // column i + k of row i sits at index k + 2 in row i, k + 2 − below in row r
                    if k + 2 - below < 5 && k + 2 < 5 {
                        self.rows[r][k + 2 - below] -= factor * self.rows[i][k + 2];
                    }
                }
                rhs[r] -= factor * rhs[i];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            for k in 1..=2 {
                if i + k < n {
                    acc -= self.rows[i][2 + k] * x[i + k];
                }
            }
            x[i] = acc / self.rows[i][2];
        }
        Ok(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesSum {
    pub value: f64,
    /// Last harmonic included.
    pub n_reached: u64,
    /// Integral bound on the omitted terms.
    pub tail_bound: f64,
}

/// Σ n/(n²−1)^{3/2} over even n ≥ 2, stopping once the remainder bound
/// 1/(2√(n²−1)) drops to `tail_tol`. Neumaier-compensated, ascending n.
pub fn series_sum(tail_tol: f64) -> Result<SeriesSum> {
    if !(tail_tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tail tolerance must be positive (got {tail_tol})"
        )));
    }
    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    let mut n: u64 = 2;
    loop {
        let nf = n as f64;
        let q = nf * nf - 1.0;
        let term = nf / (q * q.sqrt());
        let t = sum + term;
        compensation += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
        let bound = 0.5 / q.sqrt();
        if bound <= tail_tol {
            return Ok(SeriesSum {
                value: sum + compensation,
                n_reached: n,
                tail_bound: bound,
            });
        }
        n += 2;
    }
}

/// Value of the series implied by the closed-form 1/1.244 factor.
pub fn implied_series_value() -> f64 {
    CLOSED_FORM_SERIES_FACTOR / series_coefficient()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub quantity: String,
    pub paper_value: f64,
    pub oracle_value: f64,
    pub ratio: f64,
    /// Ratio outside the band (or profile mismatch for the beam rows).
    pub flagged: bool,
    /// Explanation for flags that reflect a known property of the closed form.
    pub note: Option<String>,
}

impl VerifyRow {
    fn new(quantity: impl Into<String>, paper_value: f64, oracle_value: f64) -> Self {
        let ratio = paper_value / oracle_value;
        Self {
            quantity: quantity.into(),
            paper_value,
            oracle_value,
            ratio,
            flagged: (ratio - 1.0).abs() > RATIO_BAND,
            note: None,
        }
    }

    fn noted(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }

    /// Flagged and without an explanatory note.
    pub fn is_failure(&self) -> bool {
        self.flagged && self.note.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    /// Beam load used for the deflection rows (N).
    pub reference_load: f64,
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &VerifyRow> {
        self.rows.iter().filter(|r| r.is_failure())
    }
}

/// Largest |closed − fd| over the nodes relative to the closed-form peak.
pub fn harmonic_max_norm_error(
    pipe: &PipeSection,
    mat: &Material,
    n: u32,
    load: f64,
    fd_nodes: usize,
) -> Result<(f64, FdSolution)> {
    let beam = harmonic_beam(pipe, mat, n)?;
    let length = DOMAIN_DECAY_LENGTHS / beam.psi;
    let fd = fd_winkler(beam.rigidity, beam.foundation, load, length, fd_nodes)?;
    let peak = harmonic_deflection(&beam, load, 0.0).w.abs();
    let err = fd
        .w
        .iter()
        .enumerate()
        .map(|(i, &w)| (w - harmonic_deflection(&beam, load, fd.x(i)).w).abs())
        .fold(0.0f64, f64::max);
    Ok((err / peak, fd))
}

/// Peak ring-load deflection from the FD solver: a unit-width wall strip of
/// plate rigidity δ on the hoop foundation Et/R², loaded by the uniform
/// Fourier part F/(πR) of the force pair.
pub fn fd_ring_load_peak(
    pipe: &PipeSection,
    mat: &Material,
    force: f64,
    fd_nodes: usize,
) -> Result<f64> {
    let params = attenuation_params(pipe, mat);
    let r = pipe.radius();
    let hoop = mat.youngs_modulus() * pipe.wall_thickness() / (r * r);
    let line_load = force / (PI * r);
    let length = DOMAIN_DECAY_LENGTHS * (4.0 * params.delta / hoop).powf(0.25);
    Ok(fd_winkler(params.delta, hoop, line_load, length, fd_nodes)?.peak())
}

/// Σ over harmonics of the equivalent-beam peak deflections: FD for
/// n ≤ `fd_harmonics`, the compensated series for the remainder.
pub fn fd_harmonic_peak_sum(
    pipe: &PipeSection,
    mat: &Material,
    load: f64,
    fd_harmonics: u32,
    fd_nodes: usize,
) -> Result<f64> {
    let mut total = 0.0;
    let mut partial = 0.0;
    for n in (2..=fd_harmonics).step_by(2) {
        let beam = harmonic_beam(pipe, mat, n)?;
        let length = DOMAIN_DECAY_LENGTHS / beam.psi;
        total += fd_winkler(beam.rigidity, beam.foundation, load, length, fd_nodes)?.peak();
        let nf = n as f64;
        partial += nf / (nf * nf - 1.0).powf(1.5);
    }
    // Pψ/(2m) = (3^{3/4}/π)·P(1−ν²)/(ER)·(R/t)^{5/2}·n/(n²−1)^{3/2}
    let r = pipe.radius();
    let scale = load * mat.plate_factor() / (mat.youngs_modulus() * r)
        * (r / pipe.wall_thickness()).powf(2.5);
    let remainder = series_sum(1e-9)?.value - partial;
    Ok(total + 3f64.powf(0.75) / PI * scale * remainder)
}

/// Bisection root of total_peak_deflection(P) = flattening w0.
pub fn equivalent_force_by_bisection(pipe: &PipeSection, mat: &Material, curvature: f64) -> f64 {
    let target = brazier_flattening(curvature, pipe, mat).w0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while total_peak_deflection(pipe, mat, hi) < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total_peak_deflection(pipe, mat, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

const RING_NOTE: &str = "ring-load peak; profile shape not compared";
const SERIES_NOTE: &str =
    "printed series coefficient 2*3^(3/4)/pi is twice the direct sum of harmonic beam peaks P*psi/(2m)";
const TOTAL_NOTE: &str =
    "total deflection carries the same factor 2: both terms equal the direct result for a pair of forces P";

/// Closed forms against the oracles for the given section, using the
/// equivalent restraint force at the yield stress as reference load.
pub fn verify_report(pipe: &PipeSection, mat: &Material, fd_nodes: usize) -> Result<VerifyReport> {
    let chi = curvature_from_stress(mat.yield_stress(), mat, pipe)?;
    let load = equivalent_restraint_force(chi, pipe, mat);
    let force = load / 2.0;
    let mut rows = Vec::new();

    let params = attenuation_params(pipe, mat);
    rows.push(
        VerifyRow::new(
            "ring-load peak w_I(0) [mm], F = P/2",
            ring_load_peak(force, &params, pipe),
            fd_ring_load_peak(pipe, mat, force, fd_nodes)?,
        )
        .noted(RING_NOTE),
    );
    // the note only matters when the row is flagged
    if !rows[0].flagged {
        rows[0].note = None;
    }

    for n in (2..=10).step_by(2) {
        let (err, fd) = harmonic_max_norm_error(pipe, mat, n, load, fd_nodes)?;
        let beam = harmonic_beam(pipe, mat, n)?;
        let mut row = VerifyRow::new(
            format!("harmonic n={n} peak w(0) [mm]"),
            harmonic_deflection(&beam, load, 0.0).w,
            fd.peak(),
        );
        row.flagged |= err > RATIO_BAND;
        row.quantity.push_str(&format!(" (max-norm rel. error {err:.2e})"));
        rows.push(row);
    }

    let sum = series_sum(1e-9)?;
    rows.push(VerifyRow::new(
        "series sum n/(n^2-1)^(3/2) implied by 1/1.244",
        implied_series_value(),
        sum.value,
    ));

    let direct_harmonic = fd_harmonic_peak_sum(pipe, mat, load, 10, fd_nodes)?;
    rows.push(
        VerifyRow::new(
            "harmonic peak deflection w_II(0), printed series [mm]",
            peak_deflection_series(
                pipe,
                mat,
                load,
                SeriesMode::TruncatedSeries {
                    n_max: 2_000_000,
                    tail_tol: 1e-6,
                },
            )?,
            direct_harmonic,
        )
        .noted(SERIES_NOTE),
    );
    rows.push(
        VerifyRow::new(
            "harmonic peak deflection w_II(0), 1/1.244 closed form [mm]",
            peak_deflection_series(pipe, mat, load, SeriesMode::ClosedForm)?,
            direct_harmonic,
        )
        .noted(SERIES_NOTE),
    );
    rows.push(
        VerifyRow::new(
            "total peak deflection w0 [mm]",
            total_peak_deflection(pipe, mat, load),
            fd_ring_load_peak(pipe, mat, force, fd_nodes)? + direct_harmonic,
        )
        .noted(TOTAL_NOTE),
    );
    rows.push(VerifyRow::new(
        "equivalent restraint force P_eq [N] at yield",
        load,
        equivalent_force_by_bisection(pipe, mat, chi),
    ));

    for row in &mut rows {
        if !row.flagged {
            row.note = None;
        }
    }
    Ok(VerifyReport {
        reference_load: load,
        rows,
    })
}
