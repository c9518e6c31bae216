// Guards of the form `!(x > 0.0)` are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Longitudinal strain perturbations of bent circular cylindrical shells whose
//! cross-section ovalisation is imposed by diametral forces or prevented by
//! stiff rings.
//!
//! The shell response to a pair of opposite radial forces is split into a
//! uniform ring load and even circumferential harmonics, each harmonic acting
//! as a beam on an elastic foundation. Prevented Brazier flattening is
//! represented by the outward force pair that would cancel it.

pub mod brazier;
pub mod cli;
pub mod error;
pub mod harmonics;
pub mod oracle;
pub mod ringload;
pub mod scenario_file;
pub mod scenarios;
pub mod section;

pub use error::{Error, Result};
pub use harmonics::{OvalisationStation, SeriesControl};
pub use scenarios::StrainSample;
pub use section::{Material, PipeSection, Regime, RegimeReport};
