//! Brazier ovalising pressure, the resulting flattening, and the diametral
//! force pair that would hold the section round.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harmonics::total_deflection_factor;
use crate::section::{Material, PipeSection};

/// Fraction of the yield stress above which elastic results deserve a warning.
pub const NEAR_YIELD_FRACTION: f64 = 0.95;

/// Extreme-fibre stress, longitudinal curvature and bending moment of a bent pipe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BendingState {
    /// MPa
    pub stress: f64,
    /// 1/mm
    pub curvature: f64,
    /// N·mm
    pub moment: f64,
}

impl BendingState {
    pub fn from_stress(stress: f64, mat: &Material, pipe: &PipeSection) -> Result<Self> {
        let curvature = curvature_from_stress(stress, mat, pipe)?;
        Ok(Self {
            stress,
            curvature,
            moment: curvature * mat.youngs_modulus() * pipe.second_moment(),
        })
    }
}

/// χ = 2σ/(ED); errors above the yield stress.
pub fn curvature_from_stress(stress: f64, mat: &Material, pipe: &PipeSection) -> Result<f64> {
    if stress.abs() > mat.yield_stress() || stress.is_nan() {
        return Err(Error::BeyondYield {
            stress,
            yield_stress: mat.yield_stress(),
        });
    }
    Ok(2.0 * stress / (mat.youngs_modulus() * pipe.outer_diameter()))
}

pub fn near_yield(stress: f64, mat: &Material) -> bool {
    stress.abs() > NEAR_YIELD_FRACTION * mat.yield_stress()
}

/// Ovalising pressure q = χ²·E·t·ζ with lever arm ζ = (D/2)·sin α (MPa).
pub fn ovalising_pressure(curvature: f64, mat: &Material, pipe: &PipeSection, alpha: f64) -> f64 {
    let lever_arm = pipe.radius() * alpha.sin();
    curvature * curvature * mat.youngs_modulus() * pipe.wall_thickness() * lever_arm
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlatteningResult {
    /// Radial flattening at the load meridian (mm).
    pub w0: f64,
    /// Loss of vertical diameter, 2·w0 (mm).
    pub diameter_shortening: f64,
    /// D − 2·w0 (mm).
    pub deformed_diameter: f64,
}

pub fn brazier_flattening(curvature: f64, pipe: &PipeSection, mat: &Material) -> FlatteningResult {
    let d = pipe.outer_diameter();
    let t = pipe.wall_thickness();
    let w0 = curvature * curvature * d.powi(5) * mat.plate_factor() / (32.0 * t * t);
    FlatteningResult {
        w0,
        diameter_shortening: 2.0 * w0,
        deformed_diameter: d - 2.0 * w0,
    }
}

/// Force P that produces, through the total peak deflection, the same flattening
/// as the Brazier pressure at curvature χ (N).
pub fn equivalent_restraint_force(curvature: f64, pipe: &PipeSection, mat: &Material) -> f64 {
    let r = pipe.radius();
    let t = pipe.wall_thickness();
    mat.youngs_modulus() * r.powi(4) * curvature * curvature * (t / r).sqrt()
        / total_deflection_factor(pipe, mat)
}
