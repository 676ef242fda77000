//! `sweep`: march one parameter across a range and emit a row per point.
//! Rows straddling a singular point (the laser threshold) carry empty
//! cells for the singular quantities and a status marker instead of
//! aborting the sweep.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use bosonstat::dynamics::{linewidth, ThresholdRegime};
use bosonstat::entropy::{
    bec_ground_entropy_closed_form, bulk_bose_gas_entropy, entropy_flux_maser,
    entropy_flux_thermal, laser_entropy_closed_form, thermal_entropy_closed_form,
    thermal_entropy_high_t, von_neumann_entropy,
};
use bosonstat::fock::{
    bec_ground_distribution, laser_exact_distribution, moments, BecParams, LaserParams,
};

use crate::config::{require, resolve, FileConfig};
use crate::error::{CliError, CliResult};
use crate::output::{self, cell, CsvTable, Format};

/// Pump ratios this close to one are reported as singular rows.
const THRESHOLD_EPS: f64 = 1e-9;

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Swept parameter: pump-ratio, t-reduced, or n-bar
    #[arg(long)]
    parameter: Option<String>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    stop: Option<f64>,
    #[arg(long)]
    steps: Option<u64>,
    /// Fixed cavity loss for pump-ratio sweeps
    #[arg(long)]
    gamma: Option<f64>,
    /// Fixed saturation for pump-ratio sweeps
    #[arg(long)]
    beta: Option<f64>,
    /// Fixed atom count for t-reduced sweeps
    #[arg(long)]
    n: Option<u64>,
    /// Condensate-fraction exponent for t-reduced sweeps
    #[arg(long)]
    exponent: Option<f64>,
    /// Photon throughput for flux columns
    #[arg(long)]
    kappa: Option<f64>,
    /// Comma-separated subset of output columns
    #[arg(long)]
    outputs: Option<String>,
    #[arg(long)]
    trunc_tol: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SweepReport {
    schema_version: u32,
    command: &'static str,
    parameter: String,
    columns: Vec<String>,
    rows: Vec<Vec<Option<String>>>,
}

struct Grid {
    values: Vec<f64>,
}

fn grid(start: f64, stop: f64, steps: u64) -> CliResult<Grid> {
    if steps < 2 || !(start < stop) {
        return Err(CliError::Validation(format!(
            "sweep needs steps >= 2 and start < stop, got start = {start}, stop = {stop}, steps = {steps}"
        )));
    }
    Ok(Grid {
        values: (0..steps)
            .map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64)
            .collect(),
    })
}

fn pump_ratio_row(
    ratio: f64,
    gamma: f64,
    beta: f64,
    kappa: f64,
    trunc_tol: f64,
) -> CliResult<Vec<Option<String>>> {
    let alpha = ratio * gamma;
    let p = LaserParams::new(alpha, beta, gamma)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let at_threshold = (ratio - 1.0).abs() < THRESHOLD_EPS;

    let d = laser_exact_distribution(&p, trunc_tol)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let m = moments(&d);
    let s_direct = von_neumann_entropy(&d).value();

    let mut n_bar = None;
    let mut s_closed = None;
    let mut lw = None;
    let mut flux = None;
    if !at_threshold {
        if p.is_above_threshold() {
            let nb = p.mean_photons_above();
            n_bar = Some(nb);
            s_closed = Some(laser_entropy_closed_form(&p).value());
            lw = linewidth(&p, ThresholdRegime::AboveThreshold)
                .ok()
                .map(|s| s.fwhm);
            flux = Some(entropy_flux_maser(nb, kappa).value());
        } else {
            let nb = p.mean_photons_below().unwrap();
            n_bar = Some(nb);
            s_closed = Some(thermal_entropy_closed_form(nb).value());
            lw = linewidth(&p, ThresholdRegime::BelowThreshold)
                .ok()
                .map(|s| s.fwhm);
            flux = Some(entropy_flux_thermal(nb, kappa).value());
        }
    }

    Ok(vec![
        Some(cell(ratio)),
        Some(cell(alpha)),
        Some(cell(p.photon_number_scale())),
        Some(cell(p.saturation_number())),
        n_bar.map(cell),
        Some(cell(m.mean)),
        Some(cell(m.variance)),
        Some(cell(s_direct)),
        s_closed.map(cell),
        lw.map(cell),
        flux.map(cell),
        Some(if at_threshold { "at-threshold" } else { "ok" }.to_string()),
    ])
}

fn t_reduced_row(t: f64, n: u64, exponent: f64, kappa: f64) -> CliResult<Vec<Option<String>>> {
    let p = BecParams::new(n, t, kappa)
        .map_err(|e| CliError::Validation(e.to_string()))?
        .with_condensate_exponent(exponent);
    let d = bec_ground_distribution(&p).map_err(|e| CliError::Numerical(e.to_string()))?;
    let s_direct = von_neumann_entropy(&d).value();
    let s_closed =
        bec_ground_entropy_closed_form(&p).map_err(|e| CliError::Numerical(e.to_string()))?;
    let s_bulk = bulk_bose_gas_entropy(n as f64, t).value();
    Ok(vec![
        Some(cell(t)),
        Some(cell(p.noncondensed_mean())),
        Some(cell(s_direct)),
        Some(cell(s_closed.value())),
        Some(cell(s_bulk)),
        (s_bulk > 0.0).then(|| cell(s_closed.value() / s_bulk)),
        Some(d.deficit_flagged().to_string()),
    ])
}

fn n_bar_row(n_bar: f64, kappa: f64) -> Vec<Option<String>> {
    vec![
        Some(cell(n_bar)),
        Some(cell(thermal_entropy_closed_form(n_bar).value())),
        (n_bar > 0.0).then(|| cell(thermal_entropy_high_t(n_bar).value())),
        (n_bar > 0.0).then(|| cell(entropy_flux_thermal(n_bar, kappa).value())),
        (n_bar > 0.0).then(|| cell(entropy_flux_maser(n_bar, kappa).value())),
    ]
}

pub fn run(args: SweepArgs) -> CliResult<()> {
    let cfg = FileConfig::load(args.config.as_deref())?;
    let parameter = require("parameter", args.parameter.clone(), cfg.string("parameter"))?;
    let start = require("start", args.start, cfg.f64("start"))?;
    let stop = require("stop", args.stop, cfg.f64("stop"))?;
    let steps = require("steps", args.steps, cfg.u64("steps"))?;
    let kappa = resolve(args.kappa, cfg.f64("kappa"), Some(1.0)).unwrap();
    let trunc_tol = resolve(args.trunc_tol, cfg.f64("trunc-tol"), Some(1e-12)).unwrap();
    let grid = grid(start, stop, steps)?;

    let (columns, rows): (Vec<&str>, Vec<Vec<Option<String>>>) = match parameter.as_str() {
        "pump-ratio" => {
            let gamma = require("gamma", args.gamma, cfg.f64("gamma"))?;
            let beta = require("beta", args.beta, cfg.f64("beta"))?;
            let cols = vec![
                "pump_ratio",
                "alpha",
                "photon_number_scale",
                "saturation_number",
                "n_bar",
                "mean",
                "variance",
                "s_direct",
                "s_closed",
                "linewidth_fwhm",
                "entropy_flux",
                "status",
            ];
            let mut rows = Vec::with_capacity(grid.values.len());
            for &ratio in &grid.values {
                rows.push(pump_ratio_row(ratio, gamma, beta, kappa, trunc_tol)?);
            }
            (cols, rows)
        }
        "t-reduced" => {
            let n = require("n", args.n, cfg.u64("n"))?;
            let exponent = resolve(args.exponent, cfg.f64("exponent"), Some(3.0)).unwrap();
            if !(stop < 1.0) || start < 0.0 {
                return Err(CliError::Validation(
                    "t-reduced sweeps need 0 <= start < stop < 1".to_string(),
                ));
            }
            let cols = vec![
                "t_reduced",
                "noncondensed_mean",
                "s_direct",
                "s_closed",
                "s_bulk",
                "ground_to_bulk_ratio",
                "deficit_flagged",
            ];
            let mut rows = Vec::with_capacity(grid.values.len());
            for &t in &grid.values {
                rows.push(t_reduced_row(t, n, exponent, kappa)?);
            }
            (cols, rows)
        }
        "n-bar" => {
            if start < 0.0 {
                return Err(CliError::Validation(
                    "n-bar sweeps need start >= 0".to_string(),
                ));
            }
            let cols = vec![
                "n_bar",
                "s_thermal",
                "s_high_t",
                "flux_thermal",
                "flux_maser",
            ];
            let rows = grid.values.iter().map(|&nb| n_bar_row(nb, kappa)).collect();
            (cols, rows)
        }
        other => {
            return Err(CliError::Usage(format!(
                "--parameter takes pump-ratio, t-reduced or n-bar, got '{other}'"
            )))
        }
    };

    // optional column filter
    let (columns, rows) = match args.outputs.clone().or(cfg.string("outputs")) {
        Some(spec) => {
            let wanted: Vec<&str> = spec.split(',').map(str::trim).collect();
            let mut keep = Vec::new();
            for w in &wanted {
                match columns.iter().position(|c| c == w) {
                    Some(i) => keep.push(i),
                    None => {
                        return Err(CliError::Validation(format!(
                            "unknown output column '{w}'; available: {}",
                            columns.join(", ")
                        )))
                    }
                }
            }
            let cols: Vec<&str> = keep.iter().map(|&i| columns[i]).collect();
            let rows = rows
                .into_iter()
                .map(|r| keep.iter().map(|&i| r[i].clone()).collect())
                .collect();
            (cols, rows)
        }
        None => (columns, rows),
    };

    let text = match args.format {
        Format::Csv => {
            let mut t = CsvTable::new(columns.iter().copied());
            for row in &rows {
                t.push_row(row.iter().map(|c| c.clone().unwrap_or_default()).collect());
            }
            t.render()
        }
        Format::Json => {
            let report = SweepReport {
                schema_version: output::SCHEMA_VERSION,
                command: "sweep",
                parameter,
                columns: columns.iter().map(|s| s.to_string()).collect(),
                rows,
            };
            output::to_json(&report)?
        }
    };
    output::emit(&text, args.out.as_deref())
}
