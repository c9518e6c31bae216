//! Command-line front end: reports, CSV profiles, verification tables and
//! one-parameter sweeps driven by scenario files.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::brazier::{
    brazier_flattening, curvature_from_stress, equivalent_restraint_force, near_yield,
    FlatteningResult,
};
use crate::harmonics::{total_peak_deflection, OvalisationStation};
use crate::oracle::verify_report;
use crate::ringload::{attenuation_params, ring_load_peak, AttenuationParams};
use crate::scenario_file::{parse_scenario, Loading, Scenario, ScenarioError, ScenarioFile};
use crate::scenarios::{
    moment_for_strain, restraint_station, strain_profile, strain_sample, StrainSample,
};
use crate::section::{classify_regime, Regime, RegimeReport};

pub const NMAX_ENV: &str = "OVALSHELL_NMAX";

pub const PROFILE_COLUMNS: [&str; 8] = [
    "x_mm",
    "w_mm",
    "eps_bend_ue",
    "eps_oval_ue",
    "eps_top_ue",
    "eps_bot_ue",
    "sigma_top_mpa",
    "sigma_bot_mpa",
];

pub const SWEEP_COLUMNS: [&str; 15] = [
    "lambda",
    "regime",
    "curvature_per_mm",
    "p_eq_n",
    "w0_mm",
    "shortening_mm",
    "x_mm",
    "eps_bend_ue",
    "eps_oval_ue",
    "eps_top_ue",
    "eps_bot_ue",
    "sigma_top_mpa",
    "sigma_bot_mpa",
    "ratio",
    "converged",
];

#[derive(Debug, Parser)]
#[command(name = "ovalshell", version, about = "Ovalisation effects on bent cylindrical shells")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full report for a scenario
    Analyze {
        /// Scenario TOML file
        #[arg(long)]
        scenario: PathBuf,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Top/bottom strain profile along the axis as CSV
    Profile {
        /// Scenario TOML file
        #[arg(long)]
        scenario: PathBuf,
        /// First axial position (mm)
        #[arg(long, allow_hyphen_values = true)]
        x_start: f64,
        /// Last axial position (mm), inclusive
        #[arg(long, allow_hyphen_values = true)]
        x_end: f64,
        /// Axial spacing (mm)
        #[arg(long)]
        x_step: f64,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Closed forms against the finite-difference and series oracles
    Verify {
        /// Scenario TOML file
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Vary one scalar of the scenario and tabulate the summary
    Sweep {
        /// Scenario TOML file
        #[arg(long)]
        scenario: PathBuf,
        /// Scenario key to vary, e.g. wall_thickness_mm
        #[arg(long)]
        param: String,
        /// First value
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        /// Last value, inclusive
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        /// Number of rows (at least 2 unless from equals to)
        #[arg(long)]
        steps: usize,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Model(#[from] crate::Error),
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Scenario(ScenarioError::Io { .. }) | CliError::Io(_) | CliError::Csv(_) => 1,
            CliError::Scenario(_) | CliError::Usage(_) => 2,
            CliError::Model(e) if e.is_numerical() => 3,
            CliError::Model(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

/// Brazier quantities of the curvature whose flattening matters for the case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BrazierSummary {
    /// MPa
    pub stress: f64,
    /// 1/mm
    pub curvature: f64,
    pub flattening: FlatteningResult,
    /// N
    pub p_eq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub regime: RegimeReport,
    pub attenuation: AttenuationParams,
    /// Bending strain magnitude (με).
    pub eps_bend: f64,
    /// N·mm
    pub moment: f64,
    pub brazier: BrazierSummary,
    pub stations: Vec<OvalisationStation>,
    pub samples: Vec<StrainSample>,
}

/// Everything `analyze` reports, also used for sweep rows.
pub fn summarize(scenario: &Scenario) -> Result<Summary, crate::Error> {
    let pipe = &scenario.pipe;
    let mat = &scenario.material;
    let (eps_bend, brazier, stations) = match &scenario.loading {
        Loading::Restrained(case) => {
            curvature_from_stress(case.target_stress, mat, pipe)?;
            let curvature = curvature_from_stress(case.restraint_stress, mat, pipe)?;
            let station = restraint_station(pipe, mat, case.restraint_stress)?;
            let brazier = BrazierSummary {
                stress: case.restraint_stress,
                curvature,
                flattening: brazier_flattening(curvature, pipe, mat),
                p_eq: station.force,
            };
            (case.target_stress.abs() / mat.youngs_modulus() * 1e6, brazier, vec![station])
        }
        Loading::Imposed {
            stations,
            bending_strain_ue,
        } => {
            // χ = ε/R; no yield check, the bending strain is an input here
            let curvature = bending_strain_ue * 1e-6 / pipe.radius();
            let brazier = BrazierSummary {
                stress: bending_strain_ue * 1e-6 * mat.youngs_modulus(),
                curvature,
                flattening: brazier_flattening(curvature, pipe, mat),
                p_eq: equivalent_restraint_force(curvature, pipe, mat),
            };
            (*bending_strain_ue, brazier, stations.clone())
        }
    };
    let samples = scenario
        .eval_x
        .iter()
        .map(|&x| strain_sample(pipe, mat, eps_bend, &stations, x, scenario.control))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Summary {
        regime: classify_regime(pipe),
        attenuation: attenuation_params(pipe, mat),
        eps_bend,
        moment: moment_for_strain(eps_bend, pipe, mat),
        brazier,
        stations,
        samples,
    })
}

/// Parses arguments from the process and runs; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Analyze { scenario, out } => {
            let scenario = load(&scenario)?;
            warn_for(&scenario);
            let report = analyze_report(&scenario)?;
            write_text(out.as_deref(), &report)
        }
        Command::Profile {
            scenario,
            x_start,
            x_end,
            x_step,
            out,
        } => {
            let scenario = load(&scenario)?;
            warn_for(&scenario);
            let grid = axial_grid(x_start, x_end, x_step)?;
            let samples = profile_samples(&scenario, &grid)?;
            for s in samples.iter().filter(|s| !s.converged) {
                eprintln!(
                    "warning: strain series not converged at x = {} mm (load station); value is the n_max = {} partial sum",
                    s.x, scenario.control.n_max
                );
            }
            let file = fs::File::create(&out)?;
            write_profile_csv(file, &samples)
        }
        Command::Verify { scenario } => {
            let scenario = load(&scenario)?;
            warn_for(&scenario);
            let report = verify_report(&scenario.pipe, &scenario.material, scenario.fd_nodes)?;
            let text = verify_text(&report);
            write_text(None, &text)?;
            let failures: Vec<_> = report.failures().map(|r| r.quantity.clone()).collect();
            if failures.is_empty() {
                Ok(())
            } else {
                Err(CliError::Verification(failures.join("; ")))
            }
        }
        Command::Sweep {
            scenario,
            param,
            from,
            to,
            steps,
            out,
        } => {
            let base = load(&scenario)?;
            warn_for(&base);
            let values = sweep_values(from, to, steps)?;
            let file = fs::File::create(&out)?;
            write_sweep_csv(file, &base.source, &param, &values, env_n_max()?)
        }
    }
}

fn env_n_max() -> Result<Option<u32>, CliError> {
    match std::env::var(NMAX_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{NMAX_ENV} must be an even integer (got `{v}`)"))),
        Err(_) => Ok(None),
    }
}

/// Reads and validates a scenario, applying the n_max override from the environment.
pub fn load(path: &Path) -> Result<Scenario, CliError> {
    let scenario = parse_scenario(path)?;
    Ok(match env_n_max()? {
        Some(n_max) => scenario.with_n_max(n_max)?,
        None => scenario,
    })
}

fn warn_for(scenario: &Scenario) {
    let regime = classify_regime(&scenario.pipe);
    if regime.regime != Regime::LongWave {
        eprintln!(
            "warning: lambda = {:.4} is in the {} regime; the beam-on-foundation reduction assumes long-wave behaviour",
            regime.lambda, regime.regime
        );
    }
    let stresses: Vec<f64> = match &scenario.loading {
        Loading::Restrained(case) => vec![case.target_stress, case.restraint_stress],
        Loading::Imposed {
            bending_strain_ue, ..
        } => vec![bending_strain_ue * 1e-6 * scenario.material.youngs_modulus()],
    };
    if stresses.iter().any(|&s| near_yield(s, &scenario.material)) {
        eprintln!(
            "warning: bending stress within 5% of the yield stress {} MPa; results are elastic only",
            scenario.material.yield_stress()
        );
    }
}

fn write_text(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Inclusive grid start, start + step, … up to `end`.
pub fn axial_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0) || !(end >= start) || !start.is_finite() || !end.is_finite() {
        return Err(CliError::Usage(format!(
            "need x_step > 0 and x_end >= x_start (got {start}..{end} step {step})"
        )));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// `steps` evenly spaced values from `from` to `to`; a zero-width range gives one value.
pub fn sweep_values(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if from == to {
        return Ok(vec![from]);
    }
    if steps < 2 {
        return Err(CliError::Usage(format!(
            "a sweep from {from} to {to} needs --steps >= 2"
        )));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| from + (to - from) * i as f64 / last)
        .collect())
}

pub fn profile_samples(scenario: &Scenario, grid: &[f64]) -> Result<Vec<StrainSample>, CliError> {
    let pipe = &scenario.pipe;
    let mat = &scenario.material;
    let samples = match &scenario.loading {
        Loading::Imposed {
            stations,
            bending_strain_ue,
        } => strain_profile(pipe, mat, *bending_strain_ue, stations, grid, scenario.control)?,
        Loading::Restrained(case) => {
            crate::scenarios::restrained_profile(pipe, mat, *case, grid, scenario.control)?
        }
    };
    Ok(samples)
}

pub fn write_profile_csv<W: Write>(writer: W, samples: &[StrainSample]) -> Result<(), CliError> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(PROFILE_COLUMNS)?;
    for s in samples {
        csv.write_record(
            [
                s.x,
                s.w,
                s.eps_bend,
                s.eps_oval,
                s.eps_top,
                s.eps_bot,
                s.sigma_top,
                s.sigma_bot,
            ]
            .map(format_sig6),
        )?;
    }
    csv.flush()?;
    Ok(())
}

pub fn sweep_row(param_value: f64, summary: &Summary) -> Vec<String> {
    let s = &summary.samples[0];
    let b = &summary.brazier;
    let mut row = vec![format_sig6(param_value), format_sig6(summary.regime.lambda)];
    row.push(summary.regime.regime.to_string());
    row.extend(
        [
            b.curvature,
            b.p_eq,
            b.flattening.w0,
            b.flattening.diameter_shortening,
            s.x,
            s.eps_bend,
            s.eps_oval,
            s.eps_top,
            s.eps_bot,
            s.sigma_top,
            s.sigma_bot,
            s.ratio,
        ]
        .map(format_sig6),
    );
    row.push(s.converged.to_string());
    row
}

pub fn write_sweep_csv<W: Write>(
    writer: W,
    base: &ScenarioFile,
    param: &str,
    values: &[f64],
    n_max_override: Option<u32>,
) -> Result<(), CliError> {
    let mut rows = Vec::with_capacity(values.len());
    for &value in values {
        let mut file = base.with_param(param, value)?;
        if let Some(n_max) = n_max_override {
            file.numerics.n_max = n_max;
        }
        let scenario = file.validate()?;
        rows.push(sweep_row(value, &summarize(&scenario)?));
    }
    let mut csv = csv::Writer::from_writer(writer);
    let mut header = vec![param.to_string()];
    header.extend(SWEEP_COLUMNS.iter().map(|c| c.to_string()));
    csv.write_record(&header)?;
    for row in rows {
        csv.write_record(&row)?;
    }
    csv.flush()?;
    Ok(())
}

/// Six significant digits, fixed notation for moderate magnitudes and
/// exponent notation otherwise, trailing zeros removed.
pub fn format_sig6(value: f64) -> String {
    if value == 0.0 {
        return "0".into();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let sci = format!("{value:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (5 - exp) as usize;
    trim_zeros(&format!("{value:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn analyze_report(scenario: &Scenario) -> Result<String, CliError> {
    let summary = summarize(scenario)?;
    let pipe = &scenario.pipe;
    let mat = &scenario.material;
    let mut r = String::new();
    let b = &summary.brazier;

    let _ = writeln!(r, "# ovalshell analyze\n");
    let _ = writeln!(r, "## Scenario (resolved)\n");
    let _ = writeln!(r, "{}", scenario.source_with_resolved_numerics().to_toml());
    let _ = writeln!(r, "## Section\n");
    let _ = writeln!(r, "radius R                 {:>14.6} mm", pipe.radius());
    let _ = writeln!(r, "inner diameter           {:>14.6} mm", pipe.inner_diameter());
    let _ = writeln!(r, "second moment I          {:>14.6e} mm^4", pipe.second_moment());
    let _ = writeln!(r, "lambda                   {:>14.6}", summary.regime.lambda);
    let _ = writeln!(r, "regime                   {:>14}", summary.regime.regime.to_string());
    let _ = writeln!(r, "ring decay length mu     {:>14.6} mm", summary.attenuation.mu);
    let _ = writeln!(r, "plate rigidity delta     {:>14.6e} N mm", summary.attenuation.delta);
    let _ = writeln!(r);

    let _ = writeln!(r, "## Bending\n");
    let _ = writeln!(r, "bending strain           {:>14.6} ue", summary.eps_bend);
    let _ = writeln!(r, "bending stress           {:>14.6} MPa", summary.eps_bend * 1e-6 * mat.youngs_modulus());
    let _ = writeln!(r, "bending moment M         {:>14.6e} N mm", summary.moment);
    let _ = writeln!(r);

    let _ = writeln!(r, "## Brazier flattening\n");
    let _ = writeln!(r, "stress                   {:>14.6} MPa", b.stress);
    let _ = writeln!(r, "curvature chi            {:>14.6e} 1/mm", b.curvature);
    let _ = writeln!(r, "flattening w0            {:>14.6} mm", b.flattening.w0);
    let _ = writeln!(r, "diameter shortening 2w0  {:>14.6} mm", b.flattening.diameter_shortening);
    let _ = writeln!(r, "deformed diameter D-2w0  {:>14.6} mm", b.flattening.deformed_diameter);
    let _ = writeln!(r, "equivalent force P_eq    {:>14.6} N", b.p_eq);
    let _ = writeln!(r);

    let params = attenuation_params(pipe, mat);
    let _ = writeln!(r, "## Stations\n");
    let _ = writeln!(r, "{:>12} {:>14} {:>14} {:>14} {:>14}", "x0_mm", "force_n", "beam_load_n", "w0_total_mm", "w_ring_mm");
    for s in &summary.stations {
        let _ = writeln!(
            r,
            "{:>12.3} {:>14.6} {:>14.6} {:>14.6} {:>14.6e}",
            s.x0,
            s.force,
            s.beam_load(),
            total_peak_deflection(pipe, mat, s.force),
            ring_load_peak(s.force, &params, pipe),
        );
    }
    let _ = writeln!(r);

    let _ = writeln!(r, "## Longitudinal strain (top theta = 0, bottom theta = pi)\n");
    let _ = writeln!(
        r,
        "{:>10} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>10}",
        "x_mm", "eps_bend_ue", "eps_oval_ue", "eps_top_ue", "eps_bot_ue", "sig_top_mpa", "sig_bot_mpa", "ratio"
    );
    for s in &summary.samples {
        let _ = writeln!(
            r,
            "{:>10.2} {:>12.4} {:>12.4} {:>12.4} {:>12.4} {:>12.4} {:>12.4} {:>10.5}",
            s.x, s.eps_bend, s.eps_oval, s.eps_top, s.eps_bot, s.sigma_top, s.sigma_bot, s.ratio
        );
    }
    Ok(r)
}

impl Scenario {
    /// Source document with the numerics actually in force.
    pub fn source_with_resolved_numerics(&self) -> ScenarioFile {
        let mut file = self.source.clone();
        file.numerics.n_max = self.control.n_max;
        file.numerics.tail_tol = self.control.tail_tol;
        file.numerics.fd_nodes = self.fd_nodes;
        file.report.eval_x_mm = Some(self.eval_x.clone());
        file
    }
}

pub fn verify_text(report: &crate::oracle::VerifyReport) -> String {
    let mut r = String::new();
    let _ = writeln!(r, "# ovalshell verify (reference beam load P = {:.6} N)\n", report.reference_load);
    let _ = writeln!(r, "{:<72} {:>14} {:>14} {:>10} {:>8}", "quantity", "closed_form", "oracle", "ratio", "status");
    for row in &report.rows {
        let status = match (row.flagged, row.note.is_some()) {
            (false, _) => "ok",
            (true, true) => "noted",
            (true, false) => "FAIL",
        };
        let _ = writeln!(
            r,
            "{:<72} {:>14.6e} {:>14.6e} {:>10.6} {:>8}",
            row.quantity, row.paper_value, row.oracle_value, row.ratio, status
        );
        if let Some(note) = &row.note {
            let _ = writeln!(r, "    note: {note}");
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(2107.83529), "2107.84");
        assert_eq!(format_sig6(-7.549_709), "-7.54971");
        assert_eq!(format_sig6(100.0), "100");
        assert_eq!(format_sig6(27471.772857), "27471.8");
        assert_eq!(format_sig6(1.0e-7), "1e-7");
        assert_eq!(format_sig6(6.952_1e-6), "6.9521e-6");
        assert_eq!(format_sig6(1_234_567.0), "1.23457e6");
        assert_eq!(format_sig6(999_999.7), "1e6");
        assert_eq!(format_sig6(0.000_123_456_78), "0.000123457");
    }

    #[test]
    fn grid_and_sweep_values() {
        assert_eq!(axial_grid(0.0, 3000.0, 100.0).unwrap().len(), 31);
        assert_eq!(axial_grid(0.0, 0.0, 1.0).unwrap(), vec![0.0]);
        assert!(axial_grid(0.0, 1.0, 0.0).is_err());
        assert_eq!(sweep_values(5.0, 5.0, 9).unwrap(), vec![5.0]);
        assert_eq!(sweep_values(0.0, 1.0, 3).unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(sweep_values(0.0, 1.0, 1).is_err());
    }
}
