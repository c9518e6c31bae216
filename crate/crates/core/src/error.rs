use thiserror::Error;

/// Everything that can go wrong while building inputs or evaluating a model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be positive (got {value})")]
    NonPositiveDimension { name: &'static str, value: f64 },

    #[error("wall thickness {thickness} mm leaves no bore in outer diameter {diameter} mm (need D > 2t)")]
    WallExceedsDiameter { diameter: f64, thickness: f64 },

    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    #[error("axial coordinate must be non-negative (got {0} mm)")]
    NegativeAxialCoordinate(f64),

    #[error("harmonic number must be even and at least 2 (got {0})")]
    OddOrSmallHarmonic(u32),

    #[error("harmonic series not converged at n_max = {n_max}: tail bound {bound:.3e} exceeds {tolerance:.3e}")]
    TailNotConverged {
        n_max: u32,
        bound: f64,
        tolerance: f64,
    },

    #[error("|stress| {stress} MPa exceeds the yield stress {yield_stress} MPa")]
    BeyondYield { stress: f64, yield_stress: f64 },

    #[error("finite-difference system is singular (zero pivot at row {0})")]
    SingularSystem(usize),

    #[error("finite-difference domain {length} mm is shorter than {required} mm (8 decay lengths)")]
    DomainTooShort { length: f64, required: f64 },

    #[error("invalid numerical input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures of a numerical procedure rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::TailNotConverged { .. } | Error::SingularSystem(_) | Error::DomainTooShort { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
