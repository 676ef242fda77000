//! `bec`: condensate ground-state statistics, both entropy routes, and
//! the bulk-gas comparison; optionally swept over reduced temperature.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use bosonstat::entropy::{
    bec_ground_entropy_closed_form, bulk_bose_gas_entropy, von_neumann_entropy, EntropyMethod,
};
use bosonstat::fock::{bec_ground_distribution, moments, BecParams};

use crate::config::{require, resolve, FileConfig};
use crate::error::{CliError, CliResult};
use crate::output::{self, cell, CsvTable, Format};

#[derive(Args, Debug)]
pub struct BecArgs {
    /// Total atom count
    #[arg(long)]
    n: Option<u64>,
    /// Reduced temperature T/T_c in [0, 1)
    #[arg(long)]
    t: Option<f64>,
    /// Wall collision rate
    #[arg(long)]
    kappa: Option<f64>,
    /// Condensate-fraction exponent (3 for a parabolic trap)
    #[arg(long)]
    exponent: Option<f64>,
    /// Sweep T/T_c instead of a single point: START:STOP:STEPS
    #[arg(long, value_name = "START:STOP:STEPS")]
    sweep_t: Option<String>,
    /// Write the ground-state distribution CSV here
    #[arg(long)]
    dist_out: Option<PathBuf>,
    /// JSON file mirroring these flags
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct BecPoint {
    t_reduced: f64,
    noncondensed_mean: f64,
    condensate_mean: f64,
    mean: f64,
    variance: f64,
    mode: usize,
    pre_norm_deficit: f64,
    deficit_flagged: bool,
    s_direct: f64,
    s_closed: f64,
    s_closed_method: &'static str,
    s_bulk: f64,
    ground_to_bulk_ratio: f64,
}

#[derive(Serialize)]
struct BecReport {
    schema_version: u32,
    command: &'static str,
    n_total: u64,
    kappa: f64,
    condensate_exponent: f64,
    points: Vec<BecPoint>,
}

fn method_name(m: EntropyMethod) -> &'static str {
    match m {
        EntropyMethod::DirectSum => "direct_sum",
        EntropyMethod::ClosedFormBec => "closed_form_bec",
        _ => "other",
    }
}

fn compute_point(p: &BecParams) -> CliResult<BecPoint> {
    let d = bec_ground_distribution(p).map_err(|e| CliError::Numerical(e.to_string()))?;
    let m = moments(&d);
    let s_direct = von_neumann_entropy(&d).value();
    let s_closed = bec_ground_entropy_closed_form(p)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let s_bulk = bulk_bose_gas_entropy(p.n_total() as f64, p.t_reduced()).value();
    Ok(BecPoint {
        t_reduced: p.t_reduced(),
        noncondensed_mean: p.noncondensed_mean(),
        condensate_mean: p.condensate_mean(),
        mean: m.mean,
        variance: m.variance,
        mode: m.mode,
        pre_norm_deficit: d.pre_norm_deficit(),
        deficit_flagged: d.deficit_flagged(),
        s_direct,
        s_closed: s_closed.value(),
        s_closed_method: method_name(s_closed.method()),
        s_bulk,
        ground_to_bulk_ratio: if s_bulk > 0.0 {
            s_closed.value() / s_bulk
        } else {
            f64::NAN
        },
    })
}

fn parse_sweep(spec: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Usage(format!("--sweep-t needs START:STOP:STEPS, got '{spec}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].parse().map_err(|_| bad())?;
    let steps: usize = parts[2].parse().map_err(|_| bad())?;
    if steps < 2 || !(start < stop) {
        return Err(CliError::Validation(format!(
            "sweep needs steps >= 2 and start < stop, got {spec}"
        )));
    }
    Ok((0..steps)
        .map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64)
        .collect())
}

pub fn run(args: BecArgs) -> CliResult<()> {
    let cfg = FileConfig::load(args.config.as_deref())?;
    let n_total = require("n", args.n, cfg.u64("n"))?;
    let kappa = resolve(args.kappa, cfg.f64("kappa"), Some(1.0)).unwrap();
    let exponent = resolve(args.exponent, cfg.f64("exponent"), Some(3.0)).unwrap();
    let sweep = args.sweep_t.clone().or(cfg.string("sweep-t"));

    let t_values = match &sweep {
        Some(spec) => parse_sweep(spec)?,
        None => vec![require("t", args.t, cfg.f64("t"))?],
    };

    let mut points = Vec::with_capacity(t_values.len());
    for &t in &t_values {
        let p = BecParams::new(n_total, t, kappa)
            .map_err(|e| CliError::Validation(e.to_string()))?
            .with_condensate_exponent(exponent);
        points.push(compute_point(&p)?);

        if let Some(dist_out) = &args.dist_out {
            if t_values.len() == 1 {
                let d =
                    bec_ground_distribution(&p).map_err(|e| CliError::Numerical(e.to_string()))?;
                let f = std::fs::File::create(dist_out)?;
                d.write_csv(std::io::BufWriter::new(f))?;
            }
        }
    }

    let report = BecReport {
        schema_version: output::SCHEMA_VERSION,
        command: "bec",
        n_total,
        kappa,
        condensate_exponent: exponent,
        points,
    };

    let text = match args.format {
        Format::Json => output::to_json(&report)?,
        Format::Csv => {
            let mut table = CsvTable::new([
                "t_reduced",
                "noncondensed_mean",
                "condensate_mean",
                "mean",
                "variance",
                "s_direct",
                "s_closed",
                "s_closed_method",
                "s_bulk",
                "ground_to_bulk_ratio",
                "deficit_flagged",
            ]);
            for pt in &report.points {
                table.push_row(vec![
                    cell(pt.t_reduced),
                    cell(pt.noncondensed_mean),
                    cell(pt.condensate_mean),
                    cell(pt.mean),
                    cell(pt.variance),
                    cell(pt.s_direct),
                    cell(pt.s_closed),
                    pt.s_closed_method.to_string(),
                    cell(pt.s_bulk),
                    cell(pt.ground_to_bulk_ratio),
                    pt.deficit_flagged.to_string(),
                ]);
            }
            table.render()
        }
    };
    output::emit(&text, args.out.as_deref())
}
