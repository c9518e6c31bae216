//! Fourier decomposition of a diametral force pair and the per-harmonic
//! beam-on-elastic-foundation model of the long-wave shell response.
//!
//! Sign conventions: θ is measured from the loaded meridian, w is positive
//! outward, and an inward (ovalisation-imposing) force pair carries F < 0.
//! Each harmonic n behaves as an infinite beam of rigidity B on a Winkler
//! foundation of stiffness m loaded by P = 2F.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ringload::{attenuation_params, ring_load_peak};
use crate::section::{Material, PipeSection};

/// 2·3^{3/4}/π, the printed coefficient of the peak-deflection series.
pub fn series_coefficient() -> f64 {
    2.0 * 3f64.powf(0.75) / PI
}

/// Closed-form value standing in for `series_coefficient() · Σ n/(n²−1)^{3/2}`.
pub const CLOSED_FORM_SERIES_FACTOR: f64 = 1.0 / 1.244;

/// Coefficient of the axisymmetric term in the total peak deflection.
pub const RING_TERM_FACTOR: f64 = 1.0 / 4.774;

pub const DEFAULT_N_MAX: u32 = 20;
pub const DEFAULT_TAIL_TOL: f64 = 1e-6;

/// Fourier split of two opposite radial forces F into a uniform part p0 and a
/// common amplitude pn carried by every even harmonic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierLoad {
    /// N/mm
    pub p0: f64,
    /// N/mm
    pub pn: f64,
}

impl FourierLoad {
    pub fn harmonics(n_max: u32) -> impl Iterator<Item = u32> {
        (2..=n_max).step_by(2)
    }

    /// Partial sum p0 + pn·Σ cos nθ over even n ≤ n_max.
    pub fn evaluate(&self, theta: f64, n_max: u32) -> f64 {
        self.p0
            + self.pn
                * Self::harmonics(n_max)
                    .map(|n| (n as f64 * theta).cos())
                    .sum::<f64>()
    }
}

pub fn fourier_load(force: f64, radius: f64) -> Result<FourierLoad> {
    if !(radius > 0.0) {
        return Err(Error::NonPositiveDimension {
            name: "radius",
            value: radius,
        });
    }
    let p0 = force / (PI * radius);
    Ok(FourierLoad { p0, pn: 2.0 * p0 })
}

/// Equivalent beam for circumferential harmonic `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarmonicBeam {
    pub n: u32,
    /// flexural rigidity B (N·mm²)
    pub rigidity: f64,
    /// foundation stiffness m (N/mm²)
    pub foundation: f64,
    /// ψ = (m/(4B))^{1/4} (1/mm)
    pub psi: f64,
}

pub fn harmonic_beam(pipe: &PipeSection, mat: &Material, n: u32) -> Result<HarmonicBeam> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::OddOrSmallHarmonic(n));
    }
    let d = pipe.outer_diameter();
    let nf = n as f64;
    let delta = attenuation_params(pipe, mat).delta;
    let rigidity = PI * mat.youngs_modulus() * pipe.wall_thickness() * d.powi(3)
        / (8.0 * mat.plate_factor() * nf.powi(4));
    let foundation = 8.0 * PI * delta * (nf * nf - 1.0).powi(2) / d.powi(3);
    Ok(HarmonicBeam {
        n,
        rigidity,
        foundation,
        psi: (foundation / (4.0 * rigidity)).powf(0.25),
    })
}

/// Axial position of a diametral force pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OvalisationStation {
    /// mm
    pub x0: f64,
    /// Force per side (N): negative inward (imposed), positive outward (restraint).
    pub force: f64,
}

impl OvalisationStation {
    pub fn new(x0: f64, force: f64) -> Self {
        Self { x0, force }
    }

    /// Point load on the equivalent beam, P = 2F.
    pub fn beam_load(&self) -> f64 {
        2.0 * self.force
    }
}

/// Deflection of one harmonic beam and its first two axial derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarmonicDeflection {
    /// mm
    pub w: f64,
    /// dimensionless
    pub dw: f64,
    /// 1/mm
    pub d2w: f64,
}

/// Infinite-beam response to a central point load `p` at signed distance `x`.
pub fn harmonic_deflection(beam: &HarmonicBeam, p: f64, x: f64) -> HarmonicDeflection {
    let psi = beam.psi;
    let m = beam.foundation;
    let s = psi * x.abs();
    let decay = (-s).exp();
    let (sin, cos) = s.sin_cos();
    HarmonicDeflection {
        w: p * psi / (2.0 * m) * decay * (cos + sin),
        dw: -x.signum() * p * psi * psi / m * decay * sin,
        d2w: -p * psi.powi(3) / m * decay * (cos - sin),
    }
}

/// Σ n/(n²−1)^{3/2} over even n ≤ n_max, summed in ascending n.
pub fn peak_series_partial(n_max: u32) -> f64 {
    FourierLoad::harmonics(n_max)
        .map(|n| {
            let n = n as f64;
            n / (n * n - 1.0).powf(1.5)
        })
        .sum()
}

/// Integral bound on the series remainder beyond n_max: 1/(2√(n_max²−1)).
pub fn peak_series_tail_bound(n_max: u32) -> f64 {
    let n = n_max as f64;
    0.5 / (n * n - 1.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesMode {
    TruncatedSeries { n_max: u32, tail_tol: f64 },
    ClosedForm,
}

/// Harmonic (n ≥ 2) part of the radial displacement under the load (mm).
pub fn peak_deflection_series(
    pipe: &PipeSection,
    mat: &Material,
    p: f64,
    mode: SeriesMode,
) -> Result<f64> {
    let factor = match mode {
        SeriesMode::ClosedForm => CLOSED_FORM_SERIES_FACTOR,
        SeriesMode::TruncatedSeries { n_max, tail_tol } => {
            if n_max < 2 || !n_max.is_multiple_of(2) {
                return Err(Error::OddOrSmallHarmonic(n_max));
            }
            let bound = peak_series_tail_bound(n_max);
            if bound > tail_tol {
                return Err(Error::TailNotConverged {
                    n_max,
                    bound,
                    tolerance: tail_tol,
                });
            }
            series_coefficient() * peak_series_partial(n_max)
        }
    };
    Ok(factor * deflection_scale(pipe, mat, p))
}

/// P(1−ν²)/(ER)·(R/t)^{5/2}
fn deflection_scale(pipe: &PipeSection, mat: &Material, p: f64) -> f64 {
    let r = pipe.radius();
    p * mat.plate_factor() / (mat.youngs_modulus() * r) * (r / pipe.wall_thickness()).powf(2.5)
}

/// Bracketed factor of the total peak deflection, 1/1.244 + (1/4.774)·t/(R(1−ν²)^{3/4}).
pub fn total_deflection_factor(pipe: &PipeSection, mat: &Material) -> f64 {
    CLOSED_FORM_SERIES_FACTOR
        + RING_TERM_FACTOR * pipe.wall_thickness()
            / (pipe.radius() * mat.plate_factor().powf(0.75))
}

/// Total radial displacement under the load, axisymmetric plus harmonic parts (mm).
pub fn total_peak_deflection(pipe: &PipeSection, mat: &Material, p: f64) -> f64 {
    deflection_scale(pipe, mat, p) * total_deflection_factor(pipe, mat)
}

/// Ring-load peak expressed through the same scale as [`total_peak_deflection`]
/// with F taken equal to `p`; matches its second term.
pub fn ring_term_of_total(pipe: &PipeSection, mat: &Material, p: f64) -> f64 {
    ring_load_peak(p, &attenuation_params(pipe, mat), pipe)
}

/// Axial and circumferential displacements of harmonic `n` that keep the
/// hoop strain and in-plane shear strain zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceDisplacements {
    pub u: f64,
    pub v: f64,
}

pub fn surface_displacements(
    n: u32,
    w_n: f64,
    dw_n: f64,
    theta: f64,
    diameter: f64,
) -> Result<SurfaceDisplacements> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::OddOrSmallHarmonic(n));
    }
    let nf = n as f64;
    let (sin, cos) = (nf * theta).sin_cos();
    Ok(SurfaceDisplacements {
        u: -diameter / (2.0 * nf * nf) * dw_n * cos,
        v: -w_n / nf * sin,
    })
}

/// Truncation settings for the harmonic sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesControl {
    pub n_max: u32,
    /// Tail bound allowed, relative to the n = 2 peak strain of the loads.
    pub tail_tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            n_max: DEFAULT_N_MAX,
            tail_tol: DEFAULT_TAIL_TOL,
        }
    }
}

impl SeriesControl {
    pub fn validate(&self) -> Result<()> {
        if self.n_max < 2 || !self.n_max.is_multiple_of(2) {
            return Err(Error::OddOrSmallHarmonic(self.n_max));
        }
        if !(self.tail_tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tail_tol must be positive (got {})",
                self.tail_tol
            )));
        }
        Ok(())
    }
}

/// Truncated longitudinal-strain series with its remainder bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrainSeries {
    /// με
    pub value: f64,
    /// Upper bound on the omitted harmonics (με).
    pub tail_bound: f64,
    /// Σ over stations of the n = 2 peak strain magnitude (με).
    pub scale: f64,
}

impl StrainSeries {
    pub fn converged(&self, tail_tol: f64) -> bool {
        self.tail_bound <= tail_tol * self.scale
    }
}

// hard stop for the remainder bound when the decay is too slow to matter
const TAIL_HARMONIC_LIMIT: u32 = 200_000;

/// Longitudinal strain envelope magnitude of harmonic `n` at distance `d`:
/// (D/(2n²))·|P|ψ³/m·√2·e^{−ψd}.
fn strain_envelope(beam: &HarmonicBeam, diameter: f64, p: f64, d: f64) -> f64 {
    let n = beam.n as f64;
    diameter / (2.0 * n * n) * p.abs() * beam.psi.powi(3) / beam.foundation
        * SQRT_2
        * (-beam.psi * d).exp()
}

/// Longitudinal strain (με) of all stations evaluated without convergence checks.
pub fn ovalisation_series(
    pipe: &PipeSection,
    mat: &Material,
    stations: &[OvalisationStation],
    x: f64,
    theta: f64,
    n_max: u32,
) -> Result<StrainSeries> {
    if n_max < 2 || !n_max.is_multiple_of(2) {
        return Err(Error::OddOrSmallHarmonic(n_max));
    }
    let d = pipe.outer_diameter();
    let beams = FourierLoad::harmonics(n_max)
        .map(|n| harmonic_beam(pipe, mat, n))
        .collect::<Result<Vec<_>>>()?;
    let first = &beams[0];
    let mut value = 0.0;
    let mut tail_bound = 0.0;
    let mut scale = 0.0;
    for station in stations {
        let p = station.beam_load();
        let dist = (x - station.x0).abs();
        for beam in &beams {
            let n = beam.n as f64;
            let d2w = harmonic_deflection(beam, p, dist).d2w;
            value += -d / (2.0 * n * n) * d2w * (n * theta).cos();
        }
        scale += strain_envelope(first, d, p, 0.0) / SQRT_2;
        tail_bound += strain_tail(pipe, mat, p, dist, n_max)?;
    }
    Ok(StrainSeries {
        value: value * 1e6,
        tail_bound: tail_bound * 1e6,
        scale: scale * 1e6,
    })
}

fn strain_tail(pipe: &PipeSection, mat: &Material, p: f64, dist: f64, n_max: u32) -> Result<f64> {
    if p == 0.0 {
        return Ok(0.0);
    }
    if dist == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mut sum = 0.0;
    let mut n = n_max + 2;
    while n <= TAIL_HARMONIC_LIMIT {
        let term = strain_envelope(&harmonic_beam(pipe, mat, n)?, pipe.outer_diameter(), p, dist);
        sum += term;
        if term <= 1e-17 * sum {
            return Ok(sum);
        }
        n += 2;
    }
    Ok(f64::INFINITY)
}

/// Longitudinal strain (με) at (x, θ) superposed over all stations, harmonics 2..=n_max.
pub fn ovalisation_strain(
    pipe: &PipeSection,
    mat: &Material,
    stations: &[OvalisationStation],
    x: f64,
    theta: f64,
    control: SeriesControl,
) -> Result<f64> {
    control.validate()?;
    if stations.is_empty() {
        return Err(Error::InvalidInput("at least one station is required".into()));
    }
    let series = ovalisation_series(pipe, mat, stations, x, theta, control.n_max)?;
    if !series.converged(control.tail_tol) {
        return Err(Error::TailNotConverged {
            n_max: control.n_max,
            bound: series.tail_bound / series.scale,
            tolerance: control.tail_tol,
        });
    }
    Ok(series.value)
}

/// Harmonic radial displacement (mm) at (x, θ) superposed over all stations.
pub fn ovalisation_displacement(
    pipe: &PipeSection,
    mat: &Material,
    stations: &[OvalisationStation],
    x: f64,
    theta: f64,
    n_max: u32,
) -> Result<f64> {
    let mut w = 0.0;
    for station in stations {
        for n in FourierLoad::harmonics(n_max) {
            let beam = harmonic_beam(pipe, mat, n)?;
            w += harmonic_deflection(&beam, station.beam_load(), x - station.x0).w
                * (n as f64 * theta).cos();
        }
    }
    Ok(w)
}
