//! Axisymmetric (n = 0) part of the diametral load: a uniform radial ring load.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::section::{Material, PipeSection};

/// Decay length μ and plate rigidity δ of the axisymmetric shell response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AttenuationParams {
    /// μ (mm)
    pub mu: f64,
    /// δ = E t μ⁴ / D² (N·mm)
    pub delta: f64,
}

pub fn attenuation_params(pipe: &PipeSection, mat: &Material) -> AttenuationParams {
    let d = pipe.outer_diameter();
    let t = pipe.wall_thickness();
    let mu4 = d * d * t * t / (12.0 * mat.plate_factor());
    AttenuationParams {
        mu: mu4.powf(0.25),
        delta: mat.youngs_modulus() * t * mu4 / (d * d),
    }
}

/// Radial displacement under the ring load at the loaded section (mm), signed like F.
pub fn ring_load_peak(force: f64, params: &AttenuationParams, pipe: &PipeSection) -> f64 {
    force * params.mu.powi(3) / (4.0 * PI * pipe.outer_diameter() * params.delta)
}

/// Radial displacement at axial distance `x` from the loaded section.
///
/// The phase is chosen so the profile starts at [`ring_load_peak`] and oscillates
/// under the envelope e^{−x/μ}: w(x) = w(0)·e^{−x/μ}·cos(x/μ).
pub fn ring_load_profile(
    force: f64,
    x: f64,
    params: &AttenuationParams,
    pipe: &PipeSection,
) -> Result<f64> {
    if x < 0.0 || x.is_nan() {
        return Err(Error::NegativeAxialCoordinate(x));
    }
    let s = x / params.mu;
    Ok(-ring_load_peak(force, params, pipe) * (-s).exp() * (s - PI / 2.0).sin())
}

/// Mid-surface longitudinal strain of the ring-load response (με).
///
/// With no axial resultant the hoop strain w/R induces −ν·w/R axially. Reported
/// for information only; it is not part of the ovalisation superposition.
pub fn ring_load_longitudinal_strain(
    force: f64,
    x: f64,
    params: &AttenuationParams,
    pipe: &PipeSection,
    mat: &Material,
) -> Result<f64> {
    let w = ring_load_profile(force, x, params, pipe)?;
    Ok(-mat.poisson_ratio() * w / pipe.radius() * 1e6)
}
