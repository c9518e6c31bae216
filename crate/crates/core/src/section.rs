//! Pipe geometry, material constants and the long-wave regime classifier.
//!
//! All quantities use the N–mm–MPa system; strains elsewhere in the crate are
//! reported in microstrain.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Circular cylindrical shell segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PipeSection {
    outer_diameter: f64,
    wall_thickness: f64,
    length: f64,
    radius: f64,
    inner_diameter: f64,
    second_moment: f64,
}

impl PipeSection {
    /// Builds a section from outer diameter, wall thickness and segment length (mm).
    pub fn new(outer_diameter: f64, wall_thickness: f64, length: f64) -> Result<Self> {
        positive("outer_diameter", outer_diameter)?;
        positive("wall_thickness", wall_thickness)?;
        positive("length", length)?;
        if outer_diameter <= 2.0 * wall_thickness {
            return Err(Error::WallExceedsDiameter {
                diameter: outer_diameter,
                thickness: wall_thickness,
            });
        }
        let inner_diameter = outer_diameter - 2.0 * wall_thickness;
        let second_moment = PI * (outer_diameter.powi(4) - inner_diameter.powi(4)) / 64.0;
        Ok(Self {
            outer_diameter,
            wall_thickness,
            length,
            radius: outer_diameter / 2.0,
            inner_diameter,
            second_moment,
        })
    }

    pub fn outer_diameter(&self) -> f64 {
        self.outer_diameter
    }

    pub fn wall_thickness(&self) -> f64 {
        self.wall_thickness
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// R = D/2, the radius used throughout the shell formulae.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn inner_diameter(&self) -> f64 {
        self.inner_diameter
    }

    /// Exact annulus second moment of area (mm⁴).
    pub fn second_moment(&self) -> f64 {
        self.second_moment
    }

    /// Same section with a different segment length.
    pub fn with_length(&self, length: f64) -> Result<Self> {
        Self::new(self.outer_diameter, self.wall_thickness, length)
    }
}

/// Linear elastic isotropic material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Material {
    youngs_modulus: f64,
    poisson_ratio: f64,
    yield_stress: f64,
}

impl Material {
    pub fn new(youngs_modulus: f64, poisson_ratio: f64, yield_stress: f64) -> Result<Self> {
        if !(youngs_modulus > 0.0 && youngs_modulus.is_finite()) {
            return Err(Error::InvalidMaterial(format!(
                "youngs_modulus must be positive (got {youngs_modulus})"
            )));
        }
        if !(0.0..0.5).contains(&poisson_ratio) {
            return Err(Error::InvalidMaterial(format!(
                "poissons_ratio must satisfy 0 <= nu < 0.5 (got {poisson_ratio})"
            )));
        }
        if !(yield_stress > 0.0 && yield_stress.is_finite()) {
            return Err(Error::InvalidMaterial(format!(
                "yield_stress must be positive (got {yield_stress})"
            )));
        }
        Ok(Self {
            youngs_modulus,
            poisson_ratio,
            yield_stress,
        })
    }

    pub fn youngs_modulus(&self) -> f64 {
        self.youngs_modulus
    }

    pub fn poisson_ratio(&self) -> f64 {
        self.poisson_ratio
    }

    pub fn yield_stress(&self) -> f64 {
        self.yield_stress
    }

    /// 1 − ν²
    pub fn plate_factor(&self) -> f64 {
        1.0 - self.poisson_ratio * self.poisson_ratio
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    ShortWave,
    Intermediate,
    LongWave,
}

impl Regime {
    /// λ < 0.5 is short-wave, λ > 1 long-wave; both boundaries are intermediate.
    pub fn from_lambda(lambda: f64) -> Self {
        if lambda < 0.5 {
            Regime::ShortWave
        } else if lambda > 1.0 {
            Regime::LongWave
        } else {
            Regime::Intermediate
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::ShortWave => "short-wave",
            Regime::Intermediate => "intermediate",
            Regime::LongWave => "long-wave",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    pub lambda: f64,
    pub regime: Regime,
}

/// Dimensionless half-wavelength λ = √t·ℓ / √((D/2)³).
pub fn half_wavelength_parameter(pipe: &PipeSection) -> f64 {
    pipe.wall_thickness().sqrt() * pipe.length() / pipe.radius().powi(3).sqrt()
}

pub fn classify_regime(pipe: &PipeSection) -> RegimeReport {
    let lambda = half_wavelength_parameter(pipe);
    RegimeReport {
        lambda,
        regime: Regime::from_lambda(lambda),
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveDimension { name, value })
    }
}
