//! Occupation-number distributions on a truncated ladder.
//!
//! Every distribution in this crate lives here: the exact laser steady
//! state built by detailed-balance recursion, its shifted-Poisson and
//! Gaussian approximations, single-mode thermal light, and the condensate
//! ground state. Construction happens in the log domain and the result is
//! stored linearly, with underflowed rungs as exact zeros so entropy sums
//! can skip them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::log_gamma;

/// Hard cap on ladder length. Distributions with means around 10^6 need
/// millions of rungs; anything past this cap is reported, not silently
/// truncated.
pub const LADDER_HARD_CAP: usize = 10_000_000;

/// Default relative tail-mass tolerance for adaptive truncation.
pub const DEFAULT_TRUNC_TOL: f64 = 1e-12;

/// Renormalization deficit above which the condensate constructor flags
/// the closed-form distribution as breaking down (reduced temperature
/// approaching one).
pub const BEC_DEFICIT_FLAG_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("rates must be strictly positive and finite: alpha = {alpha}, beta = {beta}, gamma = {gamma}")]
    InvalidLaserParams { alpha: f64, beta: f64, gamma: f64 },
    #[error("condensate parameters need n_total >= 1, 0 <= t < 1 and kappa > 0: n = {n_total}, t = {t_reduced}, kappa = {kappa}")]
    InvalidBecParams {
        n_total: u64,
        t_reduced: f64,
        kappa: f64,
    },
    #[error("truncation tolerance must lie in (0, 1e-3), got {0}")]
    InvalidTruncTol(f64),
    #[error("ladder exceeded the hard cap of {cap} rungs (tail bound reached {tail_bound:.3e})")]
    TruncationExceeded { cap: usize, tail_bound: f64 },
    #[error("occupancy argument must be positive, got {0}")]
    NonPositiveOccupancyArg(f64),
    #[error("mean occupation must be nonnegative and finite, got {0}")]
    InvalidMeanOccupation(f64),
    #[error("distribution support would exceed the hard cap of {cap} rungs (requested {requested})")]
    SupportTooLarge { cap: usize, requested: usize },
}

/// Normalized probability vector over occupation number n = 0..=n_max.
#[derive(Debug, Clone, Serialize)]
pub struct FockDistribution {
    probs: Vec<f64>,
    tail_mass_bound: f64,
    /// Probability mass the defining formula put outside the stored
    /// support, absorbed by renormalization. Zero for adaptively
    /// truncated ladders; meaningful for the condensate constructor.
    pre_norm_deficit: f64,
    /// Set when `pre_norm_deficit` exceeds [`BEC_DEFICIT_FLAG_THRESHOLD`].
    deficit_flagged: bool,
}

impl FockDistribution {
    fn from_normalized(probs: Vec<f64>, tail_mass_bound: f64) -> Self {
        FockDistribution {
            probs,
            tail_mass_bound,
            pre_norm_deficit: 0.0,
            deficit_flagged: false,
        }
    }

    /// Build from raw nonnegative weights, normalizing to unit mass.
    /// Weights that underflowed to zero stay exactly zero.
    pub fn from_weights(weights: Vec<f64>, tail_mass_bound: f64) -> Self {
        let total: f64 = weights.iter().sum();
        debug_assert!(total > 0.0, "weights must carry positive mass");
        let probs = weights.into_iter().map(|w| w / total).collect();
        Self::from_normalized(probs, tail_mass_bound)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of occupation n; zero beyond the stored ladder.
    pub fn prob(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn tail_mass_bound(&self) -> f64 {
        self.tail_mass_bound
    }

    pub fn pre_norm_deficit(&self) -> f64 {
        self.pre_norm_deficit
    }

    pub fn deficit_flagged(&self) -> bool {
        self.deficit_flagged
    }

    /// Total-variation distance, treating rungs past either support as 0.
    pub fn total_variation(&self, other: &FockDistribution) -> f64 {
        let n = self.len().max(other.len());
        let mut acc = 0.0;
        for i in 0..n {
            acc += (self.prob(i) - other.prob(i)).abs();
        }
        0.5 * acc
    }

    /// Write the distribution as CSV with columns `n,prob`.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n,prob")?;
        for (n, p) in self.probs.iter().enumerate() {
            writeln!(w, "{n},{p}")?;
        }
        Ok(())
    }
}

/// First two moments plus the mode (lowest index on ties).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub mode: usize,
}

/// Exact moment sums over the ladder.
pub fn moments(d: &FockDistribution) -> Moments {
    let mean: f64 = d
        .probs()
        .iter()
        .enumerate()
        .map(|(n, p)| n as f64 * p)
        .sum();
    let variance: f64 = d
        .probs()
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let dev = n as f64 - mean;
            dev * dev * p
        })
        .sum();
    let mode = d
        .probs()
        .iter()
        .enumerate()
        .fold((0usize, f64::NEG_INFINITY), |(im, pm), (i, &p)| {
            if p > pm {
                (i, p)
            } else {
                (im, pm)
            }
        })
        .0;
    Moments {
        mean,
        variance,
        mode,
    }
}

/// Laser rate constants: linear gain alpha, saturation beta, cavity loss
/// gamma, all in units of 1/time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaserParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl LaserParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self, FockError> {
        let ok = alpha > 0.0
            && beta > 0.0
            && gamma > 0.0
            && alpha.is_finite()
            && beta.is_finite()
            && gamma.is_finite();
        if !ok {
            return Err(FockError::InvalidLaserParams { alpha, beta, gamma });
        }
        Ok(LaserParams { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// alpha^2 / (beta gamma). Sets the number scale of the distribution
    /// above threshold: the variance of the Gaussian form equals this.
    pub fn photon_number_scale(&self) -> f64 {
        self.alpha * self.alpha / (self.beta * self.gamma)
    }

    /// alpha / beta: the occupation at which the saturable gain has
    /// dropped to half its linear value.
    pub fn saturation_number(&self) -> f64 {
        self.alpha / self.beta
    }

    /// Mean photon number above threshold: the number scale minus the
    /// saturation number, equal to (alpha/gamma)(alpha-gamma)/gamma.
    pub fn mean_photons_above(&self) -> f64 {
        self.photon_number_scale() - self.saturation_number()
    }

    /// (alpha - gamma)/gamma. The closed forms hold for margins >~ 0.1.
    pub fn pump_margin(&self) -> f64 {
        (self.alpha - self.gamma) / self.gamma
    }

    pub fn is_above_threshold(&self) -> bool {
        self.alpha > self.gamma
    }

    /// Mean photon number below threshold, [(gamma/alpha) - 1]^-1.
    /// None at or above threshold.
    pub fn mean_photons_below(&self) -> Option<f64> {
        (self.alpha < self.gamma).then(|| self.alpha / (self.gamma - self.alpha))
    }

    /// Saturated gain coefficient alpha / (1 + (beta/alpha) n).
    pub fn saturated_gain(&self, n: f64) -> f64 {
        self.alpha / (1.0 + self.beta * n / self.alpha)
    }

    /// Phase diffusion coefficient alpha / (4 n_mean) above threshold.
    pub fn phase_diffusion(&self) -> Option<f64> {
        self.is_above_threshold()
            .then(|| self.alpha / (4.0 * self.mean_photons_above()))
    }
}

/// Condensate parameters: total atom count, reduced temperature T/T_c and
/// the wall collision rate. The condensate-fraction exponent defaults to
/// 3 (parabolic trap) but is configurable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BecParams {
    n_total: u64,
    t_reduced: f64,
    kappa_wall: f64,
    condensate_exponent: f64,
}

impl BecParams {
    pub fn new(n_total: u64, t_reduced: f64, kappa_wall: f64) -> Result<Self, FockError> {
        let ok = n_total >= 1
            && (0.0..1.0).contains(&t_reduced)
            && kappa_wall > 0.0
            && kappa_wall.is_finite();
        if !ok {
            return Err(FockError::InvalidBecParams {
                n_total,
                t_reduced,
                kappa: kappa_wall,
            });
        }
        Ok(BecParams {
            n_total,
            t_reduced,
            kappa_wall,
            condensate_exponent: 3.0,
        })
    }

    /// Override the condensate-fraction exponent (3 for a parabolic trap).
    pub fn with_condensate_exponent(mut self, exponent: f64) -> Self {
        debug_assert!(exponent > 0.0);
        self.condensate_exponent = exponent;
        self
    }

    pub fn n_total(&self) -> u64 {
        self.n_total
    }

    pub fn t_reduced(&self) -> f64 {
        self.t_reduced
    }

    pub fn kappa_wall(&self) -> f64 {
        self.kappa_wall
    }

    pub fn condensate_exponent(&self) -> f64 {
        self.condensate_exponent
    }

    /// Mean number of non-condensed atoms, N (T/T_c)^3. Also the variance
    /// scale of the ground-state distribution.
    pub fn noncondensed_mean(&self) -> f64 {
        self.n_total as f64 * self.t_reduced.powf(self.condensate_exponent)
    }

    /// Mean condensate occupation N (1 - (T/T_c)^3).
    pub fn condensate_mean(&self) -> f64 {
        self.n_total as f64 - self.noncondensed_mean()
    }
}

fn check_trunc_tol(trunc_tol: f64) -> Result<(), FockError> {
    if !(trunc_tol > 0.0 && trunc_tol < 1e-3) {
        return Err(FockError::InvalidTruncTol(trunc_tol));
    }
    Ok(())
}

/// Build a ladder from successive log weight increments.
///
/// `log_ratio(n)` is ln(w_{n+1} / w_n); the ratios must be non-increasing
/// so the geometric bound w_n r / (1 - r) caps the discarded tail. The
/// ladder stops once that bound drops below `trunc_tol` of the
/// accumulated mass, and errors out at the hard cap.
fn build_from_log_ratios(
    mut log_ratio: impl FnMut(usize) -> f64,
    trunc_tol: f64,
) -> Result<(Vec<f64>, f64), FockError> {
    let mut log_w = vec![0.0_f64];
    let mut log_max = 0.0_f64;
    // running sum of w_n / exp(log_max), rescaled whenever a new maximum
    // appears, so the linear accumulation never overflows
    let mut scaled_sum = 1.0_f64;
    let mut tail_rel;

    loop {
        let n = log_w.len() - 1;
        let lr = log_ratio(n);
        let r = lr.exp();
        let w_rel = (log_w[n] - log_max).exp();
        if r < 1.0 {
            let tail_bound = w_rel * r / (1.0 - r);
            tail_rel = tail_bound / scaled_sum;
            if tail_rel < trunc_tol {
                break;
            }
        }
        if r == 0.0 {
            // ladder ends exactly (e.g. finite support)
            tail_rel = 0.0;
            break;
        }
        let next = log_w[n] + lr;
        if next > log_max {
            let shift = (log_max - next).exp();
            scaled_sum = scaled_sum * shift + 1.0;
            log_max = next;
        } else {
            scaled_sum += (next - log_max).exp();
        }
        log_w.push(next);
        if log_w.len() > LADDER_HARD_CAP {
            let r_now = log_ratio(log_w.len() - 1).exp();
            let bound = if r_now < 1.0 {
                (log_w[log_w.len() - 1] - log_max).exp() * r_now / (1.0 - r_now) / scaled_sum
            } else {
                f64::INFINITY
            };
            return Err(FockError::TruncationExceeded {
                cap: LADDER_HARD_CAP,
                tail_bound: bound,
            });
        }
    }

    let weights: Vec<f64> = log_w.iter().map(|&lw| (lw - log_max).exp()).collect();
    Ok((weights, tail_rel))
}

/// Exact laser photon distribution from the detailed-balance recursion
/// p_{n+1}/p_n = a / (n + 1 + b) with a = alpha^2/(beta gamma) and
/// b = alpha/beta, adaptively truncated and normalized.
pub fn laser_exact_distribution(
    p: &LaserParams,
    trunc_tol: f64,
) -> Result<FockDistribution, FockError> {
    check_trunc_tol(trunc_tol)?;
    let a = p.photon_number_scale();
    let b = p.saturation_number();
    let (weights, tail) =
        build_from_log_ratios(|n| (a / (b + n as f64 + 1.0)).ln(), trunc_tol)?;
    Ok(FockDistribution::from_weights(weights, tail))
}

/// Log of the normalization sum Z = sum_n b! a^n / (n+b)! accumulated from
/// the same recursion that builds [`laser_exact_distribution`]. This is an
/// evaluation route independent of the series implementation in
/// [`crate::numerics::hypergeometric_1f1_1`]; the two must agree.
pub fn laser_log_partition(p: &LaserParams, trunc_tol: f64) -> Result<f64, FockError> {
    check_trunc_tol(trunc_tol)?;
    let a = p.photon_number_scale();
    let b = p.saturation_number();

    let mut log_w = 0.0_f64;
    let mut log_max = 0.0_f64;
    let mut scaled_sum = 1.0_f64;
    let mut n = 0usize;
    loop {
        let r = a / (b + n as f64 + 1.0);
        if r < 1.0 {
            let tail = (log_w - log_max).exp() * r / (1.0 - r);
            if tail / scaled_sum < trunc_tol {
                break;
            }
        }
        log_w += r.ln();
        if log_w > log_max {
            scaled_sum = scaled_sum * (log_max - log_w).exp() + 1.0;
            log_max = log_w;
        } else {
            scaled_sum += (log_w - log_max).exp();
        }
        n += 1;
        if n > LADDER_HARD_CAP {
            return Err(FockError::TruncationExceeded {
                cap: LADDER_HARD_CAP,
                tail_bound: f64::NAN,
            });
        }
    }
    Ok(log_max + scaled_sum.ln())
}

/// Shifted-Poisson approximation p_n = a^(n+b) e^(-a) / (n+b)!, evaluated
/// per rung in the log domain (non-integer b goes through log-gamma) and
/// renormalized over the truncated ladder. Valid far enough above
/// threshold, pump margin >~ 0.1; callers probing outside that region get
/// the distribution anyway and should warn downstream.
pub fn laser_shifted_poisson(
    p: &LaserParams,
    trunc_tol: f64,
) -> Result<FockDistribution, FockError> {
    check_trunc_tol(trunc_tol)?;
    let a = p.photon_number_scale();
    let b = p.saturation_number();
    let log_a = a.ln();

    // direct per-rung formula; the ratio a/(n+b+1) still governs the tail
    let mut log_w = Vec::new();
    let mut log_max = f64::NEG_INFINITY;
    let mut scaled_sum = 0.0_f64;
    let mut n = 0usize;
    loop {
        let lw = (n as f64 + b) * log_a - a - log_gamma(n as f64 + b + 1.0);
        if lw > log_max {
            scaled_sum = scaled_sum * (log_max - lw).exp() + 1.0;
            log_max = lw;
        } else {
            scaled_sum += (lw - log_max).exp();
        }
        log_w.push(lw);
        let r = a / (b + n as f64 + 1.0);
        if r < 1.0 {
            let tail = (lw - log_max).exp() * r / (1.0 - r);
            if tail / scaled_sum < trunc_tol {
                break;
            }
        }
        n += 1;
        if n >= LADDER_HARD_CAP {
            return Err(FockError::TruncationExceeded {
                cap: LADDER_HARD_CAP,
                tail_bound: f64::NAN,
            });
        }
    }
    let weights: Vec<f64> = log_w.iter().map(|&lw| (lw - log_max).exp()).collect();
    let tail = {
        let r = a / (b + (weights.len() - 1) as f64 + 1.0);
        weights.last().unwrap() * r / (1.0 - r) / scaled_sum
    };
    Ok(FockDistribution::from_weights(weights, tail))
}

/// Gaussian approximation p_n ~ exp(-(n - n_mean)^2 / (2 a)) with
/// n_mean = a - b, discretized on the integer ladder and renormalized.
pub fn laser_gaussian(p: &LaserParams, trunc_tol: f64) -> Result<FockDistribution, FockError> {
    check_trunc_tol(trunc_tol)?;
    let a = p.photon_number_scale();
    let n_mean = p.mean_photons_above();
    // window where the Gaussian weight stays above trunc_tol relative to
    // the peak, padded by a couple of rungs
    let half_width = (2.0 * a * (1.0 / trunc_tol).ln()).sqrt().ceil() + 2.0;
    let top = n_mean + half_width;
    if !(top < LADDER_HARD_CAP as f64) {
        return Err(FockError::SupportTooLarge {
            cap: LADDER_HARD_CAP,
            requested: top as usize,
        });
    }
    let n_top = top as usize;
    let weights: Vec<f64> = (0..=n_top)
        .map(|n| {
            let dev = n as f64 - n_mean;
            (-(dev * dev) / (2.0 * a)).exp()
        })
        .collect();
    // the discarded upper tail is below the Gaussian tail estimate at the
    // window edge; same order as trunc_tol by construction
    Ok(FockDistribution::from_weights(weights, trunc_tol))
}

/// Single-mode thermal distribution p_n = nbar^n / (nbar+1)^(n+1)
/// (geometric), truncated where the exact tail drops below `trunc_tol`.
pub fn thermal_distribution(n_bar: f64, trunc_tol: f64) -> Result<FockDistribution, FockError> {
    check_trunc_tol(trunc_tol)?;
    if !(n_bar >= 0.0) || !n_bar.is_finite() {
        return Err(FockError::InvalidMeanOccupation(n_bar));
    }
    if n_bar == 0.0 {
        return Ok(FockDistribution::from_normalized(vec![1.0], 0.0));
    }
    let r = n_bar / (n_bar + 1.0);
    let (weights, tail) = build_from_log_ratios(|_| r.ln(), trunc_tol)?;
    Ok(FockDistribution::from_weights(weights, tail))
}

/// Planck occupancy 1 / (e^x - 1) for x = (photon energy)/(k_B T) > 0.
pub fn planck_occupancy(x: f64) -> Result<f64, FockError> {
    if !(x > 0.0) {
        return Err(FockError::NonPositiveOccupancyArg(x));
    }
    Ok(1.0 / x.exp_m1())
}

/// Condensate ground-state distribution: p(n0) proportional to
/// h^(N - n0) e^(-h) / (N - n0)! on the full support n0 = 0..=N, with
/// h = N (T/T_c)^3. A Poisson law in the number of excited atoms,
/// renormalized over the finite support; the renormalization deficit is
/// recorded and flagged past [`BEC_DEFICIT_FLAG_THRESHOLD`] so the
/// breakdown of the closed form near T = T_c stays visible.
pub fn bec_ground_distribution(p: &BecParams) -> Result<FockDistribution, FockError> {
    let n_total = p.n_total() as usize;
    if n_total + 1 > LADDER_HARD_CAP {
        return Err(FockError::SupportTooLarge {
            cap: LADDER_HARD_CAP,
            requested: n_total + 1,
        });
    }
    let h = p.noncondensed_mean();
    if h == 0.0 {
        // T = 0: every atom in the condensate
        let mut probs = vec![0.0; n_total + 1];
        probs[n_total] = 1.0;
        return Ok(FockDistribution::from_normalized(probs, 0.0));
    }

    let log_h = h.ln();
    let mut log_max = f64::NEG_INFINITY;
    let log_w: Vec<f64> = (0..=n_total)
        .map(|n0| {
            let excited = (n_total - n0) as f64;
            let lw = excited * log_h - log_gamma(excited + 1.0);
            if lw > log_max {
                log_max = lw;
            }
            lw
        })
        .collect();
    let weights: Vec<f64> = log_w.iter().map(|&lw| (lw - log_max).exp()).collect();

    // deficit of the untruncated Poisson mass beyond N excited atoms,
    // in the e^(-h)-normalized convention of the defining formula
    let captured: f64 = weights
        .iter()
        .map(|w| w * (log_max - h).exp())
        .sum();
    let deficit = (1.0 - captured).max(0.0);

    let mut d = FockDistribution::from_weights(weights, 0.0);
    d.pre_norm_deficit = deficit;
    d.deficit_flagged = deficit > BEC_DEFICIT_FLAG_THRESHOLD;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::hypergeometric_1f1_1;

    fn params(alpha: f64, beta: f64, gamma: f64) -> LaserParams {
        LaserParams::new(alpha, beta, gamma).unwrap()
    }

    #[test]
    fn laser_params_derived_quantities() {
        // alpha = 2 gamma, beta chosen so the above-threshold mean is 50
        let p = params(2.0, 0.04, 1.0);
        assert!((p.photon_number_scale() - 100.0).abs() < 1e-12);
        assert!((p.saturation_number() - 50.0).abs() < 1e-12);
        assert!((p.mean_photons_above() - 50.0).abs() < 1e-12);
        assert!(LaserParams::new(0.0, 1.0, 1.0).is_err());
        assert!(LaserParams::new(1.0, -1.0, 1.0).is_err());
        assert!(LaserParams::new(1.0, 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn laser_exact_mean_matches_above_threshold() {
        let p = params(2.0, 0.04, 1.0); // a = 100, b = 50, mean 50
        let d = laser_exact_distribution(&p, 1e-12).unwrap();
        let m = moments(&d);
        assert!((m.mean - 50.0).abs() <= 1.0, "mean {}", m.mean);
        let total: f64 = d.probs().iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn laser_exact_detailed_balance_identity() {
        // gain flux up equals loss flux down at every rung:
        // G(n+1)(n+1) p_n = gamma (n+1) p_{n+1}
        let p = params(2.0, 0.04, 1.0);
        let d = laser_exact_distribution(&p, 1e-12).unwrap();
        for n in 0..d.n_max() {
            let pn = d.prob(n);
            let pn1 = d.prob(n + 1);
            if pn < 1e-280 || pn1 <= 0.0 {
                continue;
            }
            let up = p.saturated_gain(n as f64 + 1.0) * (n as f64 + 1.0) * pn;
            let down = p.gamma() * (n as f64 + 1.0) * pn1;
            assert!(
                ((up - down) / down).abs() < 1e-10,
                "detailed balance broken at rung {n}"
            );
        }
    }

    #[test]
    fn laser_exact_pointwise_ratio() {
        let p = params(1.5, 0.002, 1.0);
        let a = p.photon_number_scale();
        let b = p.saturation_number();
        let d = laser_exact_distribution(&p, 1e-12).unwrap();
        for n in 0..d.n_max().min(2000) {
            let (pn, pn1) = (d.prob(n), d.prob(n + 1));
            if pn < 1e-280 || pn1 <= 0.0 {
                continue;
            }
            let expect = a / (n as f64 + 1.0 + b);
            assert!(((pn1 / pn) / expect - 1.0).abs() < 1e-12, "rung {n}");
        }
    }

    #[test]
    fn laser_exact_below_threshold_is_thermal() {
        // alpha = gamma/2 with tiny beta: mean [(gamma/alpha) - 1]^-1 = 1
        let p = params(0.5, 1e-9, 1.0);
        let d = laser_exact_distribution(&p, 1e-13).unwrap();
        let th = thermal_distribution(1.0, 1e-13).unwrap();
        for n in 0..=20 {
            assert!(
                (d.prob(n) - th.prob(n)).abs() < 1e-3,
                "rung {n}: {} vs {}",
                d.prob(n),
                th.prob(n)
            );
        }
        assert!(d.total_variation(&th) < 1e-6);
    }

    #[test]
    fn partition_matches_hypergeometric_series() {
        let p = params(2.0, 0.04, 1.0); // a = 100, b = 50
        let log_z = laser_log_partition(&p, 1e-12).unwrap();
        let series = hypergeometric_1f1_1(51.0, 100.0).unwrap();
        assert!(series.converged);
        let rel = (log_z - series.log_value).exp_m1().abs();
        assert!(rel < 1e-8, "relative error {rel}");
    }

    #[test]
    fn shifted_poisson_close_to_exact() {
        // margin 0.2 at a ~ 1e4
        let gamma = 1.0;
        let alpha = 1.2;
        let a = 1e4;
        let beta = alpha * alpha / (a * gamma);
        let p = params(alpha, beta, gamma);
        let sp = laser_shifted_poisson(&p, 1e-12).unwrap();
        let ex = laser_exact_distribution(&p, 1e-12).unwrap();
        assert!(sp.total_variation(&ex) < 1e-2);
        let m = moments(&sp);
        let expect_mode = p.mean_photons_above().round();
        assert!(
            (m.mode as f64 - expect_mode).abs() <= 1.0,
            "mode {} vs {}",
            m.mode,
            expect_mode
        );
    }

    #[test]
    fn shifted_poisson_reduces_to_poisson_at_tiny_saturation_number() {
        // b -> 0 leaves a plain Poisson with mean a = 50
        let beta = 1e10;
        let a = 50.0;
        let alpha = 1.0;
        let gamma = alpha * alpha / (beta * a);
        let p = params(alpha, beta, gamma);
        assert!(p.saturation_number() < 1e-9);
        let d = laser_shifted_poisson(&p, 1e-12).unwrap();
        let m = moments(&d);
        assert!((m.mean - 50.0).abs() < 1e-3, "mean {}", m.mean);
        assert!((m.variance - 50.0).abs() / 50.0 < 1e-3);
    }

    #[test]
    fn gaussian_moments() {
        // a = 1e4 at margin 0.5
        let gamma = 1.0;
        let alpha = 1.5;
        let a = 1e4;
        let beta = alpha * alpha / (a * gamma);
        let p = params(alpha, beta, gamma);
        let d = laser_gaussian(&p, 1e-12).unwrap();
        let m = moments(&d);
        assert!((m.variance - a).abs() / a < 0.02, "variance {}", m.variance);
        let n_mean = p.mean_photons_above();
        assert!((m.mean - n_mean).abs() / n_mean < 0.01);
        let ex = laser_exact_distribution(&p, 1e-12).unwrap();
        assert!(d.total_variation(&ex) < 2e-2);
    }

    #[test]
    fn thermal_point_mass_and_geometric_values() {
        let d0 = thermal_distribution(0.0, 1e-12).unwrap();
        assert_eq!(d0.len(), 1);
        assert_eq!(d0.prob(0), 1.0);

        let d1 = thermal_distribution(1.0, 1e-12).unwrap();
        for n in 0..10 {
            let expect = 0.5_f64.powi(n as i32 + 1);
            assert!((d1.prob(n) - expect).abs() < 1e-12, "rung {n}");
        }

        let d25 = thermal_distribution(25.0, 1e-12).unwrap();
        let m = moments(&d25);
        assert!((m.mean - 25.0).abs() < 1e-9, "mean {}", m.mean);
    }

    #[test]
    fn planck_occupancy_values() {
        assert!((planck_occupancy(std::f64::consts::LN_2).unwrap() - 1.0).abs() < 1e-12);
        let v = planck_occupancy(10.0).unwrap();
        assert!((v - 4.5401991009687765e-5).abs() / v < 1e-12);
        // high-temperature limit: 1/x to 0.01%
        let hv = planck_occupancy(1e-6).unwrap();
        assert!((hv - 1e6).abs() / 1e6 < 1e-4);
        assert!(planck_occupancy(0.0).is_err());
        assert!(planck_occupancy(-1.0).is_err());
    }

    #[test]
    fn bec_zero_temperature_is_point_mass() {
        let p = BecParams::new(1000, 0.0, 1.0).unwrap();
        let d = bec_ground_distribution(&p).unwrap();
        assert_eq!(d.prob(1000), 1.0);
        assert_eq!(moments(&d).mode, 1000);
    }

    #[test]
    fn bec_mesoscopic_mean_and_variance() {
        // N = 1000, t = 0.1: h = 1, mean condensate 999
        let p = BecParams::new(1000, 0.1, 1.0).unwrap();
        assert!((p.noncondensed_mean() - 1.0).abs() < 1e-12);
        let d = bec_ground_distribution(&p).unwrap();
        let m = moments(&d);
        assert!((m.mean - 999.0).abs() < 0.1, "mean {}", m.mean);

        // variance tracks h = N t^3 well below t = 1
        let p2 = BecParams::new(1000, 0.3, 1.0).unwrap();
        let h = p2.noncondensed_mean();
        let d2 = bec_ground_distribution(&p2).unwrap();
        let m2 = moments(&d2);
        assert!((m2.variance - h).abs() / h < 0.01, "variance {}", m2.variance);
    }

    #[test]
    fn bec_mean_plus_depletion_is_total() {
        for &t in &[0.2, 0.3, 0.5] {
            let p = BecParams::new(2000, t, 1.0).unwrap();
            let h = p.noncondensed_mean();
            assert!(h > 5.0 && h < 1000.0);
            let d = bec_ground_distribution(&p).unwrap();
            let m = moments(&d);
            let rel = ((m.mean + h) - 2000.0).abs() / 2000.0;
            assert!(rel < 1e-6, "t = {t}: relative gap {rel}");
        }
    }

    #[test]
    fn bec_deficit_flag_near_critical_temperature() {
        let cold = BecParams::new(1000, 0.9, 1.0).unwrap();
        let d = bec_ground_distribution(&cold).unwrap();
        assert!(!d.deficit_flagged(), "deficit {}", d.pre_norm_deficit());

        let hot = BecParams::new(1000, 0.99, 1.0).unwrap();
        let d = bec_ground_distribution(&hot).unwrap();
        assert!(d.deficit_flagged(), "deficit {}", d.pre_norm_deficit());
        assert!(d.pre_norm_deficit() > 0.1);
    }

    #[test]
    fn bec_condensate_exponent_is_configurable() {
        let p = BecParams::new(1000, 0.5, 1.0)
            .unwrap()
            .with_condensate_exponent(2.0);
        assert!((p.noncondensed_mean() - 250.0).abs() < 1e-9);
    }

    #[test]
    fn moments_point_mass_and_thermal() {
        let mut probs = vec![0.0; 8];
        probs[5] = 1.0;
        let d = FockDistribution::from_normalized(probs, 0.0);
        let m = moments(&d);
        assert_eq!((m.mean, m.variance, m.mode), (5.0, 0.0, 5));

        let th = thermal_distribution(1.0, 1e-12).unwrap();
        let m = moments(&th);
        assert!((m.mean - 1.0).abs() < 1e-9);
        // geometric variance nbar (nbar + 1); the n^2 weighting makes the
        // truncation error an order larger than on the mean
        assert!((m.variance - 2.0).abs() < 1e-7);
        assert_eq!(m.mode, 0);
    }

    #[test]
    fn trunc_tol_validation() {
        let p = params(2.0, 0.04, 1.0);
        assert!(laser_exact_distribution(&p, 0.0).is_err());
        assert!(laser_exact_distribution(&p, 1e-2).is_err());
    }

    #[test]
    fn csv_round_trip_shape() {
        let d = thermal_distribution(2.0, 1e-9).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("n,prob"));
        assert_eq!(lines.count(), d.len());
    }
}
