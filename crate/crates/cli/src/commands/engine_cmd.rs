//! `engine`: entropy budget, Carnot bound and flux inequality for a
//! two-reservoir maser scenario loaded from JSON.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use bosonstat::engine::{
    carnot_quantum_bound, cycle_entropy_budget, flux_inequality, EngineScenario, ReservoirPhoton,
};

use crate::constants::{photon_energy_ev_from_hz, thermal_energy_ev_from_kelvin};
use crate::error::{CliError, CliResult};
use crate::output::{self, Format};

#[derive(Args, Debug)]
pub struct EngineArgs {
    /// Scenario JSON file
    #[arg(long)]
    scenario: PathBuf,
    /// Per-photon maser entropy: zero, above-threshold (1/2n),
    /// below-threshold (1/n), or an explicit value in k_B
    #[arg(long, default_value = "above-threshold")]
    delta_s_maser: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ReservoirFile {
    photon_energy_ev: Option<f64>,
    frequency_hz: Option<f64>,
    temperature_ev: Option<f64>,
    temperature_k: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default)]
    schema_version: Option<u32>,
    hot: ReservoirFile,
    cold: ReservoirFile,
    /// Optional: validated against nu_h - nu_c when present
    maser_frequency_ev: Option<f64>,
    maser_occupation: f64,
    photon_rate: f64,
}

impl ReservoirFile {
    fn to_core(&self, label: &str) -> CliResult<ReservoirPhoton> {
        let energy = match (self.photon_energy_ev, self.frequency_hz) {
            (Some(ev), None) => ev,
            (None, Some(hz)) => photon_energy_ev_from_hz(hz),
            _ => {
                return Err(CliError::Validation(format!(
                    "{label} reservoir needs exactly one of photon_energy_ev or frequency_hz"
                )))
            }
        };
        let temperature = match (self.temperature_ev, self.temperature_k) {
            (Some(ev), None) => ev,
            (None, Some(k)) => thermal_energy_ev_from_kelvin(k),
            _ => {
                return Err(CliError::Validation(format!(
                    "{label} reservoir needs exactly one of temperature_ev or temperature_k"
                )))
            }
        };
        ReservoirPhoton::new(energy, temperature).map_err(|e| CliError::Validation(e.to_string()))
    }
}

#[derive(Serialize)]
struct ReservoirReport {
    photon_energy_ev: f64,
    temperature_ev: f64,
    x: f64,
    high_t_occupancy: f64,
}

#[derive(Serialize)]
struct EngineReport {
    schema_version: u32,
    command: &'static str,
    hot: ReservoirReport,
    cold: ReservoirReport,
    maser_frequency_ev: f64,
    maser_occupation: f64,
    photon_rate: f64,
    delta_s_maser_mode: String,
    delta_s_maser: f64,
    delta_s_qhe: f64,
    carnot: bosonstat::engine::CarnotAssessment,
    flux: bosonstat::engine::FluxAssessment,
    maser_term_verdict: &'static str,
}

fn reservoir_report(r: &ReservoirPhoton) -> ReservoirReport {
    ReservoirReport {
        photon_energy_ev: r.frequency(),
        temperature_ev: r.temperature(),
        x: r.x(),
        high_t_occupancy: r.high_t_occupancy(),
    }
}

fn load_scenario(path: &Path) -> CliResult<(EngineScenario, ScenarioFile)> {
    let text = std::fs::read_to_string(path)?;
    let file: ScenarioFile = serde_json::from_str(&text).map_err(|e| {
        // serde_json includes line and column in its Display output
        CliError::Validation(format!("scenario {}: {e}", path.display()))
    })?;
    if let Some(v) = file.schema_version {
        if v != output::SCHEMA_VERSION {
            return Err(CliError::Validation(format!(
                "scenario {} has schema_version {v}, this build reads {}",
                path.display(),
                output::SCHEMA_VERSION
            )));
        }
    }
    let hot = file.hot.to_core("hot")?;
    let cold = file.cold.to_core("cold")?;
    if hot.temperature() <= cold.temperature() {
        return Err(CliError::Validation(format!(
            "hot temperature {} eV must exceed cold temperature {} eV",
            hot.temperature(),
            cold.temperature()
        )));
    }
    let scenario = match file.maser_frequency_ev {
        Some(nu_m) => EngineScenario::with_maser_frequency(
            hot,
            cold,
            nu_m,
            file.maser_occupation,
            file.photon_rate,
        ),
        None => EngineScenario::new(hot, cold, file.maser_occupation, file.photon_rate),
    }
    .map_err(|e| CliError::Validation(e.to_string()))?;
    Ok((scenario, file))
}

pub fn run(args: EngineArgs) -> CliResult<()> {
    let (scenario, _) = load_scenario(&args.scenario)?;

    let (mode, delta_s) = match args.delta_s_maser.as_str() {
        "zero" => ("zero".to_string(), 0.0),
        "above-threshold" => (
            "above-threshold".to_string(),
            1.0 / (2.0 * scenario.maser_occupation()),
        ),
        "below-threshold" => (
            "below-threshold".to_string(),
            1.0 / scenario.maser_occupation(),
        ),
        other => {
            let v: f64 = other.parse().map_err(|_| {
                CliError::Usage(format!(
                    "--delta-s-maser takes zero, above-threshold, below-threshold or a number, got '{other}'"
                ))
            })?;
            (format!("explicit:{other}"), v)
        }
    };

    let flux = flux_inequality(&scenario);
    let report = EngineReport {
        schema_version: output::SCHEMA_VERSION,
        command: "engine",
        hot: reservoir_report(scenario.hot()),
        cold: reservoir_report(scenario.cold()),
        maser_frequency_ev: scenario.maser_frequency(),
        maser_occupation: scenario.maser_occupation(),
        photon_rate: scenario.photon_rate(),
        delta_s_maser_mode: mode,
        delta_s_maser: delta_s,
        delta_s_qhe: cycle_entropy_budget(&scenario, delta_s),
        carnot: carnot_quantum_bound(&scenario),
        flux,
        maser_term_verdict: if flux.maser_negligible {
            "negligible"
        } else {
            "comparable"
        },
    };

    // only JSON carries the nested structure faithfully; CSV flattens
    let text = match args.format {
        Format::Json => output::to_json(&report)?,
        Format::Csv => {
            let mut t = crate::output::CsvTable::new([
                "x_h",
                "x_c",
                "maser_frequency_ev",
                "maser_occupation",
                "delta_s_maser",
                "delta_s_qhe",
                "carnot_efficiency",
                "carnot_bound",
                "carnot_satisfied",
                "flux_lhs",
                "flux_satisfied",
                "maser_term_verdict",
            ]);
            t.push_row(vec![
                crate::output::cell(report.hot.x),
                crate::output::cell(report.cold.x),
                crate::output::cell(report.maser_frequency_ev),
                crate::output::cell(report.maser_occupation),
                crate::output::cell(report.delta_s_maser),
                crate::output::cell(report.delta_s_qhe),
                crate::output::cell(report.carnot.efficiency),
                crate::output::cell(report.carnot.bound),
                report.carnot.satisfied.to_string(),
                crate::output::cell(report.flux.lhs),
                report.flux.satisfied.to_string(),
                report.maser_term_verdict.to_string(),
            ]);
            t.render()
        }
    };
    output::emit(&text, args.out.as_deref())
}
