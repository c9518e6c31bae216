//! Scenario files: a TOML document with `[pipe]`, `[material]`, `[loading]`,
//! and optional `[numerics]` and `[report]` tables.
//!
//! ```toml
//! [pipe]
//! outer_diameter_mm = 608.6
//! wall_thickness_mm = 18.9
//! length_mm = 2750.0
//!
//! [material]
//! youngs_modulus_mpa = 208000.0
//! poissons_ratio = 0.3
//! yield_stress_mpa = 450.0
//!
//! [loading]
//! mode = "restrained"
//! target_stress_mpa = 440.0
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::harmonics::{OvalisationStation, SeriesControl, DEFAULT_N_MAX, DEFAULT_TAIL_TOL};
use crate::oracle::{DEFAULT_FD_NODES, MIN_FD_NODES};
use crate::scenarios::RestrainedCase;
use crate::section::{Material, PipeSection};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid scenario: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipeBlock {
    pub outer_diameter_mm: f64,
    pub wall_thickness_mm: f64,
    pub length_mm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialBlock {
    pub youngs_modulus_mpa: f64,
    pub poissons_ratio: f64,
    pub yield_stress_mpa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoadingMode {
    Imposed,
    Restrained,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationBlock {
    pub x_mm: f64,
    pub force_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadingBlock {
    pub mode: LoadingMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bending_strain_ue: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_stress_mpa: Option<f64>,
    /// Stress whose Brazier flattening the restraint prevents; defaults to the target.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restraint_stress_mpa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stations: Option<Vec<StationBlock>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsBlock {
    #[serde(default = "default_n_max")]
    pub n_max: u32,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
    #[serde(default = "default_fd_nodes")]
    pub fd_nodes: usize,
}

fn default_n_max() -> u32 {
    DEFAULT_N_MAX
}

fn default_tail_tol() -> f64 {
    DEFAULT_TAIL_TOL
}

fn default_fd_nodes() -> usize {
    DEFAULT_FD_NODES
}

impl Default for NumericsBlock {
    fn default() -> Self {
        Self {
            n_max: DEFAULT_N_MAX,
            tail_tol: DEFAULT_TAIL_TOL,
            fd_nodes: DEFAULT_FD_NODES,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportBlock {
    /// Axial positions for the strain table of `analyze`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval_x_mm: Option<Vec<f64>>,
}

/// The document as written, with numerics defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub pipe: PipeBlock,
    pub material: MaterialBlock,
    pub loading: LoadingBlock,
    #[serde(default)]
    pub numerics: NumericsBlock,
    #[serde(default)]
    pub report: ReportBlock,
}

/// Scalar keys accepted by [`ScenarioFile::with_param`].
pub const SWEEP_KEYS: &[&str] = &[
    "outer_diameter_mm",
    "wall_thickness_mm",
    "length_mm",
    "youngs_modulus_mpa",
    "poissons_ratio",
    "yield_stress_mpa",
    "bending_strain_ue",
    "target_stress_mpa",
    "restraint_stress_mpa",
];

impl ScenarioFile {
    pub fn from_toml(text: &str) -> Result<Self, ScenarioError> {
        toml::from_str(text).map_err(|e| {
            let (line, column) = e
                .span()
                .map(|span| line_column(text, span.start))
                .unwrap_or((0, 0));
            ScenarioError::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serialises")
    }

    /// Copy with one scalar key replaced.
    pub fn with_param(&self, key: &str, value: f64) -> Result<Self, ScenarioError> {
        let mut out = self.clone();
        match key {
            "outer_diameter_mm" => out.pipe.outer_diameter_mm = value,
            "wall_thickness_mm" => out.pipe.wall_thickness_mm = value,
            "length_mm" => out.pipe.length_mm = value,
            "youngs_modulus_mpa" => out.material.youngs_modulus_mpa = value,
            "poissons_ratio" => out.material.poissons_ratio = value,
            "yield_stress_mpa" => out.material.yield_stress_mpa = value,
            "bending_strain_ue" => out.loading.bending_strain_ue = Some(value),
            "target_stress_mpa" => out.loading.target_stress_mpa = Some(value),
            "restraint_stress_mpa" => out.loading.restraint_stress_mpa = Some(value),
            _ => {
                return Err(ScenarioError::Validation(format!(
                    "unknown sweep parameter `{key}` (expected one of {})",
                    SWEEP_KEYS.join(", ")
                )))
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<Scenario, ScenarioError> {
        let invalid = |e: crate::Error| ScenarioError::Validation(e.to_string());
        let pipe = PipeSection::new(
            self.pipe.outer_diameter_mm,
            self.pipe.wall_thickness_mm,
            self.pipe.length_mm,
        )
        .map_err(invalid)?;
        let material = Material::new(
            self.material.youngs_modulus_mpa,
            self.material.poissons_ratio,
            self.material.yield_stress_mpa,
        )
        .map_err(invalid)?;

        let control = SeriesControl {
            n_max: self.numerics.n_max,
            tail_tol: self.numerics.tail_tol,
        };
        control
            .validate()
            .map_err(|e| ScenarioError::Validation(format!("numerics.n_max/tail_tol: {e}")))?;
        if self.numerics.fd_nodes < MIN_FD_NODES {
            return Err(ScenarioError::Validation(format!(
                "numerics.fd_nodes must be at least {MIN_FD_NODES} (got {})",
                self.numerics.fd_nodes
            )));
        }

        let l = &self.loading;
        let imposed_keys = l.stations.is_some() || l.bending_strain_ue.is_some();
        let restrained_keys = l.target_stress_mpa.is_some() || l.restraint_stress_mpa.is_some();
        if imposed_keys && restrained_keys {
            return Err(ScenarioError::Validation(
                "loading mixes imposed (stations, bending_strain_ue) and restrained \
                 (target_stress_mpa, restraint_stress_mpa) keys; exactly one mode is allowed"
                    .into(),
            ));
        }
        let loading = match l.mode {
            LoadingMode::Imposed => {
                let stations = l.stations.as_deref().unwrap_or_default();
                if stations.is_empty() {
                    return Err(ScenarioError::Validation(
                        "imposed loading needs at least one [[loading.stations]] entry".into(),
                    ));
                }
                let stations = stations
                    .iter()
                    .map(|s| {
                        if !(s.force_n <= 0.0 && s.x_mm.is_finite()) {
                            Err(ScenarioError::Validation(format!(
                                "imposed station at x = {} mm must carry an inward force_n <= 0 (got {})",
                                s.x_mm, s.force_n
                            )))
                        } else {
                            Ok(OvalisationStation::new(s.x_mm, s.force_n))
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let bending_strain_ue = l.bending_strain_ue.ok_or_else(|| {
                    ScenarioError::Validation("imposed loading needs bending_strain_ue".into())
                })?;
                if !(bending_strain_ue >= 0.0 && bending_strain_ue.is_finite()) {
                    return Err(ScenarioError::Validation(format!(
                        "bending_strain_ue must be a non-negative magnitude (got {bending_strain_ue})"
                    )));
                }
                Loading::Imposed {
                    stations,
                    bending_strain_ue,
                }
            }
            LoadingMode::Restrained => {
                let target = l.target_stress_mpa.ok_or_else(|| {
                    ScenarioError::Validation("restrained loading needs target_stress_mpa".into())
                })?;
                let restraint = l.restraint_stress_mpa.unwrap_or(target);
                for (name, value) in [("target_stress_mpa", target), ("restraint_stress_mpa", restraint)] {
                    if !(value.abs() <= material.yield_stress()) {
                        return Err(ScenarioError::Validation(format!(
                            "{name} = {value} MPa exceeds yield_stress_mpa = {} MPa",
                            material.yield_stress()
                        )));
                    }
                }
                Loading::Restrained(RestrainedCase {
                    target_stress: target,
                    restraint_stress: restraint,
                })
            }
        };

        let eval_x = match &self.report.eval_x_mm {
            Some(xs) if xs.is_empty() => {
                return Err(ScenarioError::Validation("report.eval_x_mm is empty".into()))
            }
            Some(xs) => xs.clone(),
            None => match &loading {
                Loading::Imposed { stations, .. } => {
                    vec![stations.iter().map(|s| s.x0).sum::<f64>() / stations.len() as f64]
                }
                Loading::Restrained(_) => vec![pipe.length()],
            },
        };

        Ok(Scenario {
            pipe,
            material,
            loading,
            control,
            fd_nodes: self.numerics.fd_nodes,
            eval_x,
            source: self.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Loading {
    Imposed {
        stations: Vec<OvalisationStation>,
        bending_strain_ue: f64,
    },
    Restrained(RestrainedCase),
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub pipe: PipeSection,
    pub material: Material,
    pub loading: Loading,
    pub control: SeriesControl,
    pub fd_nodes: usize,
    pub eval_x: Vec<f64>,
    pub source: ScenarioFile,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self, ScenarioError> {
        ScenarioFile::from_toml(text)?.validate()
    }

    /// Overrides `numerics.n_max` and revalidates.
    pub fn with_n_max(&self, n_max: u32) -> Result<Self, ScenarioError> {
        let mut file = self.source.clone();
        file.numerics.n_max = n_max;
        file.validate()
    }
}

pub fn parse_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Scenario::from_toml(&text)
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}
