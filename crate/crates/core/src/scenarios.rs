//! Navier bending superposed with the ovalisation perturbation at the top
//! (θ = 0) and bottom (θ = π) fibres.
//!
//! Even harmonics give the same perturbation at both fibres, so it is added
//! with a single sign to a bending field that is tensile at the top.

use serde::Serialize;

use crate::brazier::{curvature_from_stress, equivalent_restraint_force};
use crate::error::{Error, Result};
use crate::harmonics::{
    ovalisation_displacement, ovalisation_series, OvalisationStation, SeriesControl,
};
use crate::section::{Material, PipeSection};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrainSample {
    /// mm
    pub x: f64,
    /// Harmonic radial displacement at the top fibre (mm, positive outward).
    pub w: f64,
    /// με
    pub eps_bend: f64,
    /// με
    pub eps_oval: f64,
    /// με
    pub eps_top: f64,
    /// με
    pub eps_bot: f64,
    /// MPa
    pub sigma_top: f64,
    /// MPa
    pub sigma_bot: f64,
    /// |eps_top| / |eps_bot|
    pub ratio: f64,
    /// False when the harmonic remainder bound exceeds the tolerance, e.g. at a station.
    pub converged: bool,
}

impl StrainSample {
    /// Superposes a bending strain magnitude and an ovalisation strain (both με).
    pub fn combine(x: f64, eps_bend: f64, eps_oval: f64, w: f64, mat: &Material) -> Self {
        let eps_top = eps_bend + eps_oval;
        let eps_bot = -eps_bend + eps_oval;
        let e = mat.youngs_modulus();
        Self {
            x,
            w,
            eps_bend,
            eps_oval,
            eps_top,
            eps_bot,
            sigma_top: e * eps_top * 1e-6,
            sigma_bot: e * eps_bot * 1e-6,
            ratio: eps_top.abs() / eps_bot.abs(),
            converged: true,
        }
    }
}

/// Extreme-fibre bending strain |M/(EI)·D/2| (με).
pub fn navier_strain(moment: f64, pipe: &PipeSection, mat: &Material) -> f64 {
    (moment / (mat.youngs_modulus() * pipe.second_moment()) * pipe.radius()).abs() * 1e6
}

/// Moment producing a given extreme-fibre strain (N·mm).
pub fn moment_for_strain(eps_bend: f64, pipe: &PipeSection, mat: &Material) -> f64 {
    eps_bend * 1e-6 * mat.youngs_modulus() * pipe.second_moment() / pipe.radius()
}

/// Samples at every x without failing on unconverged points.
pub fn strain_profile(
    pipe: &PipeSection,
    mat: &Material,
    eps_bend: f64,
    stations: &[OvalisationStation],
    x_grid: &[f64],
    control: SeriesControl,
) -> Result<Vec<StrainSample>> {
    control.validate()?;
    if stations.is_empty() {
        return Err(Error::InvalidInput("at least one station is required".into()));
    }
    x_grid
        .iter()
        .map(|&x| {
            let series = ovalisation_series(pipe, mat, stations, x, 0.0, control.n_max)?;
            let w = ovalisation_displacement(pipe, mat, stations, x, 0.0, control.n_max)?;
            let mut sample = StrainSample::combine(x, eps_bend, series.value, w, mat);
            sample.converged = series.converged(control.tail_tol);
            Ok(sample)
        })
        .collect()
}

/// Bending plus the strain of inward force pairs, evaluated at `x_eval`.
pub fn imposed_ovalisation_case(
    pipe: &PipeSection,
    mat: &Material,
    eps_bend: f64,
    stations: &[OvalisationStation],
    x_eval: f64,
    control: SeriesControl,
) -> Result<StrainSample> {
    strain_sample(pipe, mat, eps_bend, stations, x_eval, control)
}

/// Single sample; fails with `TailNotConverged` where the strain series does not converge.
pub fn strain_sample(
    pipe: &PipeSection,
    mat: &Material,
    eps_bend: f64,
    stations: &[OvalisationStation],
    x_eval: f64,
    control: SeriesControl,
) -> Result<StrainSample> {
    let sample = strain_profile(pipe, mat, eps_bend, stations, &[x_eval], control)?[0];
    if !sample.converged {
        let series = ovalisation_series(pipe, mat, stations, x_eval, 0.0, control.n_max)?;
        return Err(Error::TailNotConverged {
            n_max: control.n_max,
            bound: series.tail_bound / series.scale,
            tolerance: control.tail_tol,
        });
    }
    Ok(sample)
}

/// Bending at `target_stress` with ovalisation prevented at x = 0.
///
/// The restraint force pair is the equivalent force of a section bent to
/// `restraint_stress`; the two stresses coincide unless set apart on purpose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RestrainedCase {
    /// MPa
    pub target_stress: f64,
    /// MPa
    pub restraint_stress: f64,
}

impl RestrainedCase {
    pub fn at_stress(stress: f64) -> Self {
        Self {
            target_stress: stress,
            restraint_stress: stress,
        }
    }
}

/// Outward force pair at x = 0 equal to the equivalent restraint force.
pub fn restraint_station(
    pipe: &PipeSection,
    mat: &Material,
    restraint_stress: f64,
) -> Result<OvalisationStation> {
    let chi = curvature_from_stress(restraint_stress, mat, pipe)?;
    Ok(OvalisationStation::new(
        0.0,
        equivalent_restraint_force(chi, pipe, mat),
    ))
}

pub fn restrained_profile(
    pipe: &PipeSection,
    mat: &Material,
    case: RestrainedCase,
    x_grid: &[f64],
    control: SeriesControl,
) -> Result<Vec<StrainSample>> {
    curvature_from_stress(case.target_stress, mat, pipe)?;
    let station = restraint_station(pipe, mat, case.restraint_stress)?;
    let eps_bend = case.target_stress.abs() / mat.youngs_modulus() * 1e6;
    strain_profile(pipe, mat, eps_bend, &[station], x_grid, control)
}
