//! `laser`: full report for one operating point, with the distribution
//! files on request.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use bosonstat::dynamics::{linewidth, ThresholdRegime};
use bosonstat::entropy::{
    entropy_flux_maser, entropy_flux_thermal, laser_entropy_closed_form,
    thermal_entropy_closed_form, von_neumann_entropy,
};
use bosonstat::fock::{
    laser_exact_distribution, laser_gaussian, laser_shifted_poisson, moments, FockDistribution,
    LaserParams, Moments,
};

use crate::config::{require, resolve, FileConfig};
use crate::error::{CliError, CliResult};
use crate::output::{self, cell, CsvTable, Format};

/// Pump margin below which the above-threshold closed forms are reported
/// with a warning attached.
const VALIDITY_MARGIN: f64 = 0.1;

#[derive(Args, Debug)]
pub struct LaserArgs {
    /// Linear gain rate
    #[arg(long)]
    alpha: Option<f64>,
    /// Saturation rate
    #[arg(long)]
    beta: Option<f64>,
    /// Cavity loss rate
    #[arg(long)]
    gamma: Option<f64>,
    /// Relative tail-mass tolerance for ladder truncation
    #[arg(long)]
    trunc_tol: Option<f64>,
    /// Photon throughput for the entropy flux (defaults to loss rate
    /// times mean occupation, the steady-state emission rate)
    #[arg(long)]
    kappa: Option<f64>,
    /// Directory for distribution CSV/JSON dumps
    #[arg(long)]
    dist_dir: Option<PathBuf>,
    /// JSON file mirroring these flags
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ParamsReport {
    alpha: f64,
    beta: f64,
    gamma: f64,
    photon_number_scale: f64,
    saturation_number: f64,
    pump_margin: f64,
    regime: &'static str,
}

#[derive(Serialize)]
struct DistReport {
    mean: f64,
    variance: f64,
    mode: usize,
    n_max: usize,
    tail_mass_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    file: Option<String>,
}

#[derive(Serialize)]
struct EntropyReport {
    direct_sum: f64,
    closed_form: f64,
    closed_form_method: &'static str,
    difference: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    validity_warning: Option<String>,
}

#[derive(Serialize)]
struct LinewidthReport {
    fwhm: f64,
    regime: &'static str,
}

#[derive(Serialize)]
struct FluxReport {
    kappa: f64,
    value: f64,
}

#[derive(Serialize)]
struct LaserReport {
    schema_version: u32,
    command: &'static str,
    params: ParamsReport,
    n_bar: f64,
    distributions: std::collections::BTreeMap<&'static str, DistReport>,
    entropy: EntropyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    linewidth: Option<LinewidthReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    linewidth_error: Option<String>,
    entropy_flux: FluxReport,
}

#[derive(Serialize)]
struct DistDump<'a> {
    schema_version: u32,
    kind: &'a str,
    params: &'a LaserParams,
    n_max: usize,
    tail_mass_bound: f64,
    probs: &'a [f64],
}

fn dist_report(
    d: &FockDistribution,
    m: &Moments,
    p: &LaserParams,
    args: &LaserArgs,
    name: &str,
) -> CliResult<DistReport> {
    let file = match &args.dist_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let csv_path = dir.join(format!("{name}.csv"));
            let f = std::fs::File::create(&csv_path)?;
            d.write_csv(std::io::BufWriter::new(f))?;
            let dump = DistDump {
                schema_version: output::SCHEMA_VERSION,
                kind: name,
                params: p,
                n_max: d.n_max(),
                tail_mass_bound: d.tail_mass_bound(),
                probs: d.probs(),
            };
            std::fs::write(dir.join(format!("{name}.json")), output::to_json(&dump)?)?;
            Some(format!("{name}.csv"))
        }
        None => None,
    };
    Ok(DistReport {
        mean: m.mean,
        variance: m.variance,
        mode: m.mode,
        n_max: d.n_max(),
        tail_mass_bound: d.tail_mass_bound(),
        file,
    })
}

pub fn run(args: LaserArgs) -> CliResult<()> {
    let cfg = FileConfig::load(args.config.as_deref())?;
    let alpha = require("alpha", args.alpha, cfg.f64("alpha"))?;
    let beta = require("beta", args.beta, cfg.f64("beta"))?;
    let gamma = require("gamma", args.gamma, cfg.f64("gamma"))?;
    let trunc_tol = resolve(args.trunc_tol, cfg.f64("trunc-tol"), Some(1e-12)).unwrap();

    let p = LaserParams::new(alpha, beta, gamma)
        .map_err(|e| CliError::Validation(e.to_string()))?;

    let exact = laser_exact_distribution(&p, trunc_tol)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let exact_m = moments(&exact);
    let s_direct = von_neumann_entropy(&exact);

    let above = p.is_above_threshold();
    let (n_bar, s_closed, method, warning) = if above {
        let warn = (p.pump_margin() < VALIDITY_MARGIN).then(|| {
            format!(
                "pump margin {:.4} is below {VALIDITY_MARGIN}; the closed forms degrade near threshold",
                p.pump_margin()
            )
        });
        (
            p.mean_photons_above(),
            laser_entropy_closed_form(&p).value(),
            "closed_form_laser",
            warn,
        )
    } else if let Some(n_below) = p.mean_photons_below() {
        (
            n_below,
            thermal_entropy_closed_form(n_below).value(),
            "closed_form_thermal",
            None,
        )
    } else {
        // exactly at threshold: no closed form applies
        (
            exact_m.mean,
            f64::NAN,
            "none",
            Some("operating exactly at threshold: closed forms singular".to_string()),
        )
    };

    let mut distributions = std::collections::BTreeMap::new();
    distributions.insert("exact", dist_report(&exact, &exact_m, &p, &args, "exact")?);
    if above {
        let sp = laser_shifted_poisson(&p, trunc_tol)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        let g = laser_gaussian(&p, trunc_tol).map_err(|e| CliError::Numerical(e.to_string()))?;
        let sp_m = moments(&sp);
        let g_m = moments(&g);
        distributions.insert(
            "shifted_poisson",
            dist_report(&sp, &sp_m, &p, &args, "shifted_poisson")?,
        );
        distributions.insert("gaussian", dist_report(&g, &g_m, &p, &args, "gaussian")?);
    }

    let regime = if above {
        ThresholdRegime::AboveThreshold
    } else {
        ThresholdRegime::BelowThreshold
    };
    let (lw, lw_err) = match linewidth(&p, regime) {
        Ok(sp) => (
            Some(LinewidthReport {
                fwhm: sp.fwhm,
                regime: if above {
                    "above_threshold"
                } else {
                    "below_threshold"
                },
            }),
            None,
        ),
        Err(e) => (None, Some(e.to_string())),
    };

    let kappa = resolve(args.kappa, cfg.f64("kappa"), Some(gamma * n_bar)).unwrap();
    let flux = if above {
        entropy_flux_maser(n_bar, kappa)
    } else {
        entropy_flux_thermal(n_bar, kappa)
    };

    let report = LaserReport {
        schema_version: output::SCHEMA_VERSION,
        command: "laser",
        params: ParamsReport {
            alpha,
            beta,
            gamma,
            photon_number_scale: p.photon_number_scale(),
            saturation_number: p.saturation_number(),
            pump_margin: p.pump_margin(),
            regime: if above {
                "above_threshold"
            } else {
                "below_threshold"
            },
        },
        n_bar,
        distributions,
        entropy: EntropyReport {
            direct_sum: s_direct.value(),
            closed_form: s_closed,
            closed_form_method: method,
            difference: s_closed - s_direct.value(),
            validity_warning: warning,
        },
        linewidth: lw,
        linewidth_error: lw_err,
        entropy_flux: FluxReport {
            kappa,
            value: flux.value(),
        },
    };

    let text = match args.format {
        Format::Json => output::to_json(&report)?,
        Format::Csv => {
            let mut t = CsvTable::new([
                "alpha",
                "beta",
                "gamma",
                "photon_number_scale",
                "saturation_number",
                "regime",
                "n_bar",
                "mean",
                "variance",
                "mode",
                "s_direct",
                "s_closed",
                "s_difference",
                "linewidth_fwhm",
                "entropy_flux",
            ]);
            t.push_row(vec![
                cell(alpha),
                cell(beta),
                cell(gamma),
                cell(report.params.photon_number_scale),
                cell(report.params.saturation_number),
                report.params.regime.to_string(),
                cell(n_bar),
                cell(exact_m.mean),
                cell(exact_m.variance),
                exact_m.mode.to_string(),
                cell(report.entropy.direct_sum),
                cell(report.entropy.closed_form),
                cell(report.entropy.difference),
                report
                    .linewidth
                    .as_ref()
                    .map(|l| cell(l.fwhm))
                    .unwrap_or_default(),
                cell(report.entropy_flux.value),
            ]);
            t.render()
        }
    };
    output::emit(&text, args.out.as_deref())
}
