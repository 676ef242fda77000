//! `evolve`: integrate the diagonal master equation for a chosen ladder,
//! dump the (t, mean, variance, entropy) trajectory, and report how close
//! the final state sits to the detailed-balance steady state.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;

use bosonstat::dynamics::{
    evolve_observed, steady_state, LadderModel, DEFAULT_DT_SAFETY,
};
use bosonstat::entropy::von_neumann_entropy;
use bosonstat::fock::{
    moments, thermal_distribution, BecParams, FockDistribution, LaserParams,
};

use crate::config::{require, resolve, FileConfig};
use crate::error::{CliError, CliResult};
use crate::output::{self, cell, Format};

#[derive(Args, Debug)]
pub struct EvolveArgs {
    /// Ladder model: laser, bec, or custom
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    /// CSV rate table for the custom model: columns n,gain,loss
    #[arg(long)]
    rate_table: Option<PathBuf>,
    /// Initial state: vacuum, point:<n>, or thermal:<nbar>
    #[arg(long)]
    initial: Option<String>,
    #[arg(long)]
    t_final: Option<f64>,
    /// Integrator step; defaults to the stability bound over the safety
    /// factor
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    safety: Option<f64>,
    /// Steps between trajectory samples
    #[arg(long)]
    stride: Option<u64>,
    /// Trajectory CSV destination
    #[arg(long)]
    traj: Option<PathBuf>,
    #[arg(long)]
    trunc_tol: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct EvolveReport {
    schema_version: u32,
    command: &'static str,
    model: String,
    n_max: usize,
    dt: f64,
    t_final: f64,
    final_mean: f64,
    final_variance: f64,
    final_entropy: f64,
    steady_state_tv: f64,
}

fn load_rate_table(path: &Path) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path)?;
    let mut gain = Vec::new();
    let mut loss = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 && line.starts_with('n') {
            continue; // header
        }
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(CliError::Validation(format!(
                "{}:{}: rate table rows are n,gain,loss",
                path.display(),
                i + 1
            )));
        }
        let n: usize = cols[0].trim().parse().map_err(|_| {
            CliError::Validation(format!("{}:{}: bad rung index", path.display(), i + 1))
        })?;
        if n != gain.len() {
            return Err(CliError::Validation(format!(
                "{}:{}: rungs must be consecutive from 0",
                path.display(),
                i + 1
            )));
        }
        let g: f64 = cols[1].trim().parse().map_err(|_| {
            CliError::Validation(format!("{}:{}: bad gain", path.display(), i + 1))
        })?;
        let l: f64 = cols[2].trim().parse().map_err(|_| {
            CliError::Validation(format!("{}:{}: bad loss", path.display(), i + 1))
        })?;
        gain.push(g);
        loss.push(l);
    }
    Ok((gain, loss))
}

fn initial_state(spec: &str, trunc_tol: f64) -> CliResult<FockDistribution> {
    if spec == "vacuum" {
        return Ok(FockDistribution::from_weights(vec![1.0], 0.0));
    }
    if let Some(n) = spec.strip_prefix("point:") {
        let n: usize = n.parse().map_err(|_| {
            CliError::Usage(format!("--initial point:<n> needs an integer, got '{spec}'"))
        })?;
        let mut w = vec![0.0; n + 1];
        w[n] = 1.0;
        return Ok(FockDistribution::from_weights(w, 0.0));
    }
    if let Some(nbar) = spec.strip_prefix("thermal:") {
        let nbar: f64 = nbar.parse().map_err(|_| {
            CliError::Usage(format!(
                "--initial thermal:<nbar> needs a number, got '{spec}'"
            ))
        })?;
        return thermal_distribution(nbar, trunc_tol)
            .map_err(|e| CliError::Validation(e.to_string()));
    }
    Err(CliError::Usage(format!(
        "--initial takes vacuum, point:<n> or thermal:<nbar>, got '{spec}'"
    )))
}

pub fn run(args: EvolveArgs) -> CliResult<()> {
    let cfg = FileConfig::load(args.config.as_deref())?;
    let model_name = require("model", args.model.clone(), cfg.string("model"))?;
    let trunc_tol = resolve(args.trunc_tol, cfg.f64("trunc-tol"), Some(1e-12)).unwrap();
    let t_final = require("t-final", args.t_final, cfg.f64("t-final"))?;
    let safety = resolve(args.safety, cfg.f64("safety"), Some(DEFAULT_DT_SAFETY)).unwrap();
    let stride = resolve(args.stride, cfg.u64("stride"), Some(100)).unwrap() as usize;

    let model = match model_name.as_str() {
        "laser" => {
            let alpha = require("alpha", args.alpha, cfg.f64("alpha"))?;
            let beta = require("beta", args.beta, cfg.f64("beta"))?;
            let gamma = require("gamma", args.gamma, cfg.f64("gamma"))?;
            let p = LaserParams::new(alpha, beta, gamma)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            LadderModel::laser_auto(&p, trunc_tol)
                .map_err(|e| CliError::Numerical(e.to_string()))?
        }
        "bec" => {
            let n = require("n", args.n, cfg.u64("n"))?;
            let t = require("t", args.t, cfg.f64("t"))?;
            let kappa = resolve(args.kappa, cfg.f64("kappa"), Some(1.0)).unwrap();
            let p = BecParams::new(n, t, kappa)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            LadderModel::bec(&p)
        }
        "custom" => {
            let path = args.rate_table.clone().ok_or_else(|| {
                CliError::Usage("custom model needs --rate-table".to_string())
            })?;
            let (gain, loss) = load_rate_table(&path)?;
            LadderModel::from_rate_tables(gain, loss)
                .map_err(|e| CliError::Validation(e.to_string()))?
        }
        other => {
            return Err(CliError::Usage(format!(
                "--model takes laser, bec or custom, got '{other}'"
            )))
        }
    };

    let initial_spec =
        resolve(args.initial.clone(), cfg.string("initial"), Some("vacuum".into())).unwrap();
    let initial = initial_state(&initial_spec, trunc_tol)?;
    if initial.len() > model.n_max() + 1 {
        return Err(CliError::Validation(format!(
            "initial state spans {} rungs but the ladder holds {}",
            initial.len(),
            model.n_max() + 1
        )));
    }

    let dt = resolve(args.dt, cfg.f64("dt"), Some(model.stability_dt() / safety)).unwrap();

    let mut traj = String::from("t,mean,variance,entropy\n");
    let final_state = evolve_observed(&model, &initial, t_final, dt, stride, |t, state| {
        let d = FockDistribution::from_weights(state.iter().map(|v| v.max(0.0)).collect(), 0.0);
        let m = moments(&d);
        let s = von_neumann_entropy(&d).value();
        traj.push_str(&format!("{t},{},{},{}\n", m.mean, m.variance, s));
    })
    .map_err(|e| CliError::Numerical(e.to_string()))?;

    if let Some(path) = &args.traj {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        std::fs::write(path, &traj)?;
    }

    let ss = steady_state(&model).map_err(|e| CliError::Numerical(e.to_string()))?;
    let fm = moments(&final_state);
    let report = EvolveReport {
        schema_version: output::SCHEMA_VERSION,
        command: "evolve",
        model: model_name,
        n_max: model.n_max(),
        dt,
        t_final,
        final_mean: fm.mean,
        final_variance: fm.variance,
        final_entropy: von_neumann_entropy(&final_state).value(),
        steady_state_tv: final_state.total_variation(&ss),
    };

    let text = match args.format {
        Format::Json => output::to_json(&report)?,
        Format::Csv => {
            let mut t = crate::output::CsvTable::new([
                "model",
                "n_max",
                "dt",
                "t_final",
                "final_mean",
                "final_variance",
                "final_entropy",
                "steady_state_tv",
            ]);
            t.push_row(vec![
                report.model.clone(),
                report.n_max.to_string(),
                cell(report.dt),
                cell(report.t_final),
                cell(report.final_mean),
                cell(report.final_variance),
                cell(report.final_entropy),
                cell(report.steady_state_tv),
            ]);
            t.render()
        }
    };
    output::emit(&text, args.out.as_deref())
}
