//! Time evolution of the diagonal master equation on a gain/loss ladder,
//! steady-state extraction by detailed balance, the off-diagonal
//! coherence decay law, and the Lorentzian linewidth on both sides of
//! threshold.
//!
//! The master equation couples only neighbouring diagonal elements:
//!
//! ```text
//! dp_n/dt = -u(n) p_n + u(n-1) p_{n-1} - d(n) p_n + d(n+1) p_{n+1}
//! ```
//!
//! where `u(n)` is the upward rate out of rung n and `d(n)` the downward
//! rate. The physical gain coefficient G enters the upward rate evaluated
//! at whichever occupation the emission process actually sees: for the
//! laser the saturation depends on the photon number after the emission,
//! u(n) = G(n+1)(n+1); for the condensate the gain is proportional to the
//! excited-atom pool before the jump, u(n0) = kappa (N - n0)(n0 + 1).
//! Only the second form reproduces the known condensate ground-state
//! distribution, so the constructors encode the convention per model.

use serde::Serialize;
use thiserror::Error;

use crate::fock::{BecParams, FockDistribution, LaserParams};

/// Fraction of the inverse peak rate used as the default integrator step:
/// dt = 1 / (safety * max_n(u(n) + d(n))).
pub const DEFAULT_DT_SAFETY: f64 = 2.0;

/// Norm drift beyond which the integrator aborts as unstable.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("steady-state ladder is non-normalizable: up/down ratio {ratio:.6} >= 1 at the cap n = {at}")]
    NonNormalizable { at: usize, ratio: f64 },
    #[error("ladder top n_max = {n_max} truncates the steady state: relative tail bound {tail_bound:.3e}")]
    LadderTooShort { n_max: usize, tail_bound: f64 },
    #[error("downward rate vanishes at rung {0}; detailed balance needs loss > 0 above the ground rung")]
    DegenerateLoss(usize),
    #[error("integration unstable at t = {t:.6}: norm drift {drift:.3e} (try dt <= {suggested_dt:.3e})")]
    Unstable {
        t: f64,
        drift: f64,
        suggested_dt: f64,
    },
    #[error("initial distribution spans {initial_len} rungs but the ladder holds {ladder_len}")]
    InitialTooWide {
        initial_len: usize,
        ladder_len: usize,
    },
    #[error("time step and horizon must be positive, got dt = {dt}, t_final = {t_final}")]
    InvalidTimeStep { dt: f64, t_final: f64 },
    #[error("operation requires {required} operation point, but alpha = {alpha}, gamma = {gamma}")]
    WrongRegime {
        required: &'static str,
        alpha: f64,
        gamma: f64,
    },
    #[error("threshold alpha = gamma is singular for the linewidth formulas")]
    AtThreshold,
    #[error("rate table must cover at least two rungs and carry nonnegative rates")]
    InvalidRateTable,
}

/// Birth-death ladder with per-rung transition rates.
///
/// `up_rate(n)` is the total rate of n -> n+1 jumps out of rung n and
/// `down_rate(n)` the rate of n -> n-1 jumps; both already include the
/// occupation factors.
pub struct LadderModel {
    up: Box<dyn Fn(usize) -> f64 + Send + Sync>,
    down: Box<dyn Fn(usize) -> f64 + Send + Sync>,
    n_max: usize,
}

impl LadderModel {
    /// Laser ladder: u(n) = G(n+1)(n+1) with the saturated gain
    /// G(n) = alpha / (1 + (beta/alpha) n), d(n) = gamma n.
    pub fn laser(p: &LaserParams, n_max: usize) -> Self {
        let p = *p;
        LadderModel {
            up: Box::new(move |n| p.saturated_gain(n as f64 + 1.0) * (n as f64 + 1.0)),
            down: Box::new(move |n| p.gamma() * n as f64),
            n_max,
        }
    }

    /// Laser ladder sized from the steady-state support: the adaptive
    /// truncation of the exact distribution plus a 25% margin.
    pub fn laser_auto(p: &LaserParams, trunc_tol: f64) -> Result<Self, crate::fock::FockError> {
        let d = crate::fock::laser_exact_distribution(p, trunc_tol)?;
        let n_max = d.n_max() + d.n_max() / 4 + 8;
        Ok(Self::laser(p, n_max))
    }

    /// Condensate ladder: u(n0) = kappa (N - n0)(n0 + 1) feeds the ground
    /// state from the excited pool, d(n0) = kappa N (T/T_c)^3 n0 removes
    /// atoms through wall heating. Support ends naturally at n0 = N.
    pub fn bec(p: &BecParams) -> Self {
        let kappa = p.kappa_wall();
        let n_total = p.n_total() as f64;
        let h = p.noncondensed_mean();
        LadderModel {
            up: Box::new(move |n| {
                let n = n as f64;
                if n >= n_total {
                    0.0
                } else {
                    kappa * (n_total - n) * (n + 1.0)
                }
            }),
            down: Box::new(move |n| kappa * h * n as f64),
            n_max: p.n_total() as usize,
        }
    }

    /// Generic ladder from gain/loss coefficient functions following the
    /// laser convention: u(n) = gain(n+1)(n+1), d(n) = loss(n) n.
    pub fn custom<G, L>(gain: G, loss: L, n_max: usize) -> Self
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        L: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        LadderModel {
            up: Box::new(move |n| gain(n as f64 + 1.0) * (n as f64 + 1.0)),
            down: Box::new(move |n| loss(n as f64) * n as f64),
            n_max,
        }
    }

    /// Ladder from tabulated per-rung gain/loss coefficients (same
    /// convention as [`LadderModel::custom`]). The tables must have equal
    /// length >= 2; rung n_max is the last table row.
    pub fn from_rate_tables(gain: Vec<f64>, loss: Vec<f64>) -> Result<Self, DynamicsError> {
        if gain.len() != loss.len()
            || gain.len() < 2
            || gain.iter().chain(loss.iter()).any(|r| !(*r >= 0.0))
        {
            return Err(DynamicsError::InvalidRateTable);
        }
        let n_max = gain.len() - 1;
        Ok(LadderModel {
            up: Box::new(move |n| {
                if n < n_max {
                    gain[n + 1] * (n as f64 + 1.0)
                } else {
                    0.0
                }
            }),
            down: Box::new(move |n| loss[n] * n as f64),
            n_max,
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Upward rate with the reflecting boundary applied at the top rung.
    pub fn up_rate(&self, n: usize) -> f64 {
        if n >= self.n_max {
            0.0
        } else {
            (self.up)(n)
        }
    }

    pub fn down_rate(&self, n: usize) -> f64 {
        if n == 0 {
            0.0
        } else {
            (self.down)(n)
        }
    }

    /// Inverse of the peak total rate on the ladder; divide by a safety
    /// factor (e.g. [`DEFAULT_DT_SAFETY`]) to get a stable explicit step.
    pub fn stability_dt(&self) -> f64 {
        let mut max_rate = 0.0_f64;
        for n in 0..=self.n_max {
            let r = self.up_rate(n) + self.down_rate(n);
            if r > max_rate {
                max_rate = r;
            }
        }
        1.0 / max_rate
    }
}

/// Steady state by detailed balance: p_{n+1} = p_n u(n) / d(n+1), built in
/// the log domain and normalized.
///
/// Fails when the ratio is still >= 1 at the top of the ladder (the flux
/// balance has no normalizable solution on this support) or when the top
/// rung truncates a tail heavier than the builder tolerance.
pub fn steady_state(m: &LadderModel) -> Result<FockDistribution, DynamicsError> {
    const TAIL_TOL: f64 = 1e-12;

    let mut log_w = Vec::with_capacity(m.n_max + 1);
    log_w.push(0.0_f64);
    let mut log_max = 0.0_f64;
    let mut scaled_sum = 1.0_f64;
    let mut divergent_ratio = None;

    for n in 0..m.n_max {
        let up = m.up_rate(n);
        if up == 0.0 {
            // support ends here; rest of the ladder carries no mass
            break;
        }
        let down = m.down_rate(n + 1);
        if down <= 0.0 {
            return Err(DynamicsError::DegenerateLoss(n + 1));
        }
        let ratio = up / down;
        divergent_ratio = (ratio >= 1.0).then_some(ratio);
        let next = log_w[log_w.len() - 1] + ratio.ln();
        if next > log_max {
            scaled_sum = scaled_sum * (log_max - next).exp() + 1.0;
            log_max = next;
        } else {
            scaled_sum += (next - log_max).exp();
        }
        log_w.push(next);
    }

    if log_w.len() == m.n_max + 1 {
        if let Some(ratio) = divergent_ratio {
            return Err(DynamicsError::NonNormalizable {
                at: m.n_max,
                ratio,
            });
        }
        // the ladder may continue past the stored top (the reflecting
        // boundary is an artifact of n_max, not of the rates): bound the
        // cut-off tail geometrically unless the raw up rate vanishes
        let up_next = (m.up)(m.n_max);
        if up_next > 0.0 {
            let down_next = (m.down)(m.n_max + 1);
            if down_next <= 0.0 {
                return Err(DynamicsError::DegenerateLoss(m.n_max + 1));
            }
            let r = up_next / down_next;
            if r >= 1.0 {
                return Err(DynamicsError::NonNormalizable { at: m.n_max, ratio: r });
            }
            let tail = (log_w[m.n_max] - log_max).exp() * r / (1.0 - r) / scaled_sum;
            if tail > TAIL_TOL {
                return Err(DynamicsError::LadderTooShort {
                    n_max: m.n_max,
                    tail_bound: tail,
                });
            }
        }
    }

    let mut weights: Vec<f64> = log_w.iter().map(|&lw| (lw - log_max).exp()).collect();
    weights.resize(m.n_max + 1, 0.0);
    Ok(FockDistribution::from_weights(weights, 0.0))
}

fn generator_apply(up: &[f64], down: &[f64], state: &[f64], out: &mut [f64]) {
    let n = state.len();
    for i in 0..n {
        let mut v = -(up[i] + down[i]) * state[i];
        if i > 0 {
            v += up[i - 1] * state[i - 1];
        }
        if i + 1 < n {
            v += down[i + 1] * state[i + 1];
        }
        out[i] = v;
    }
}

/// Classic fixed-step 4th-order integration of the diagonal master
/// equation with a reflecting boundary at the ladder top, reporting to
/// `observer(t, state)` at `stride`-step intervals (and at t = 0 and the
/// final time).
///
/// The step must respect the stability bound: dt below
/// `m.stability_dt() / safety` with safety around 2. Norm drift beyond
/// [`NORM_DRIFT_LIMIT`] aborts with a halved-step suggestion. The final
/// state has any tiny negative rungs (>= -1e-12) clipped to zero and is
/// renormalized; the clipped mass stays within the drift bound.
pub fn evolve_observed(
    m: &LadderModel,
    initial: &FockDistribution,
    t_final: f64,
    dt: f64,
    stride: usize,
    mut observer: impl FnMut(f64, &[f64]),
) -> Result<FockDistribution, DynamicsError> {
    if !(dt > 0.0) || !(t_final >= 0.0) {
        return Err(DynamicsError::InvalidTimeStep { dt, t_final });
    }
    let len = m.n_max + 1;
    if initial.len() > len {
        return Err(DynamicsError::InitialTooWide {
            initial_len: initial.len(),
            ladder_len: len,
        });
    }

    let up: Vec<f64> = (0..len).map(|n| m.up_rate(n)).collect();
    let down: Vec<f64> = (0..len).map(|n| m.down_rate(n)).collect();

    let mut state = vec![0.0_f64; len];
    state[..initial.len()].copy_from_slice(initial.probs());

    let mut k1 = vec![0.0_f64; len];
    let mut k2 = vec![0.0_f64; len];
    let mut k3 = vec![0.0_f64; len];
    let mut k4 = vec![0.0_f64; len];
    let mut tmp = vec![0.0_f64; len];

    let steps = (t_final / dt).ceil() as u64;
    let stride = stride.max(1);
    const DRIFT_CHECK_STRIDE: u64 = 64;

    observer(0.0, &state);
    let mut t = 0.0_f64;
    for step in 0..steps {
        let h = dt.min(t_final - t);
        if h <= 0.0 {
            break;
        }

        generator_apply(&up, &down, &state, &mut k1);
        for i in 0..len {
            tmp[i] = state[i] + 0.5 * h * k1[i];
        }
        generator_apply(&up, &down, &tmp, &mut k2);
        for i in 0..len {
            tmp[i] = state[i] + 0.5 * h * k2[i];
        }
        generator_apply(&up, &down, &tmp, &mut k3);
        for i in 0..len {
            tmp[i] = state[i] + h * k3[i];
        }
        generator_apply(&up, &down, &tmp, &mut k4);
        for i in 0..len {
            state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += h;

        if step % DRIFT_CHECK_STRIDE == DRIFT_CHECK_STRIDE - 1 || step + 1 == steps {
            let norm: f64 = state.iter().sum();
            let min = state.iter().cloned().fold(f64::INFINITY, f64::min);
            let drift = (norm - 1.0).abs();
            if drift > NORM_DRIFT_LIMIT || min < -NORM_DRIFT_LIMIT {
                return Err(DynamicsError::Unstable {
                    t,
                    drift: drift.max(-min),
                    suggested_dt: dt / 2.0,
                });
            }
        }
        if (step + 1) % stride as u64 == 0 && step + 1 != steps {
            observer(t, &state);
        }
    }

    // clip roundoff negatives and renormalize
    for v in state.iter_mut() {
        if *v < 0.0 {
            debug_assert!(*v >= -1e-12, "negative rung {v} beyond clip budget");
            *v = 0.0;
        }
    }
    observer(t, &state);
    Ok(FockDistribution::from_weights(state, 0.0))
}

/// [`evolve_observed`] without sampling.
pub fn evolve_diagonal(
    m: &LadderModel,
    initial: &FockDistribution,
    t_final: f64,
    dt: f64,
) -> Result<FockDistribution, DynamicsError> {
    evolve_observed(m, initial, t_final, dt, usize::MAX, |_, _| {})
}

/// Off-diagonal decay descriptor: the matrix element rho_{n,n+eta} decays
/// at rate eta^2 D, with D the phase diffusion coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherenceDecay {
    eta: u32,
    d_coefficient: f64,
}

impl CoherenceDecay {
    pub fn new(eta: u32, d_coefficient: f64) -> Self {
        debug_assert!(d_coefficient >= 0.0);
        CoherenceDecay {
            eta,
            d_coefficient,
        }
    }

    /// Above-threshold laser coherence: D = alpha / (4 n_mean).
    pub fn for_laser(p: &LaserParams, eta: u32) -> Result<Self, DynamicsError> {
        let d = p.phase_diffusion().ok_or(DynamicsError::WrongRegime {
            required: "above-threshold",
            alpha: p.alpha(),
            gamma: p.gamma(),
        })?;
        Ok(CoherenceDecay::new(eta, d))
    }

    pub fn eta(&self) -> u32 {
        self.eta
    }

    pub fn d_coefficient(&self) -> f64 {
        self.d_coefficient
    }

    /// eta^2 D.
    pub fn decay_rate(&self) -> f64 {
        (self.eta as f64) * (self.eta as f64) * self.d_coefficient
    }
}

/// e^(-eta^2 D t): the surviving fraction of an off-diagonal element.
pub fn coherence_decay_factor(c: &CoherenceDecay, t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    (-c.decay_rate() * t).exp()
}

/// Mean-field envelope |<E>(t)| = e0 e^(-D t) with D = alpha/(4 n_mean).
/// The optical phase factor e^(i nu t) is bookkeeping the caller adds; it
/// never enters the envelope.
pub fn mean_field_envelope(p: &LaserParams, e0: f64, t: f64) -> Result<f64, DynamicsError> {
    let c = CoherenceDecay::for_laser(p, 1)?;
    Ok(e0 * coherence_decay_factor(&c, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdRegime {
    AboveThreshold,
    BelowThreshold,
}

/// Lorentzian line descriptor. The centre frequency is optional because
/// the rate constants alone never fix it; callers that know the optical
/// frequency can attach it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spectrum {
    pub center_frequency: Option<f64>,
    pub fwhm: f64,
    pub regime: ThresholdRegime,
}

impl Spectrum {
    pub fn with_center(mut self, nu: f64) -> Self {
        self.center_frequency = Some(nu);
        self
    }
}

/// Full width at half maximum of the field power spectrum.
///
/// Above threshold: 2D = alpha / (2 n_mean). Below threshold the mean
/// occupation obeys alpha (n+1) - gamma n = 0, so n = alpha/(gamma-alpha)
/// and the width doubles to alpha / n. Exactly at threshold both formulas
/// are singular and the call is rejected.
pub fn linewidth(p: &LaserParams, regime: ThresholdRegime) -> Result<Spectrum, DynamicsError> {
    if p.alpha() == p.gamma() {
        return Err(DynamicsError::AtThreshold);
    }
    let fwhm = match regime {
        ThresholdRegime::AboveThreshold => {
            if !p.is_above_threshold() {
                return Err(DynamicsError::WrongRegime {
                    required: "above-threshold",
                    alpha: p.alpha(),
                    gamma: p.gamma(),
                });
            }
            p.alpha() / (2.0 * p.mean_photons_above())
        }
        ThresholdRegime::BelowThreshold => {
            let n_bar = p.mean_photons_below().ok_or(DynamicsError::WrongRegime {
                required: "below-threshold",
                alpha: p.alpha(),
                gamma: p.gamma(),
            })?;
            p.alpha() / n_bar
        }
    };
    Ok(Spectrum {
        center_frequency: None,
        fwhm,
        regime,
    })
}

/// Field amplitude rate below threshold, (alpha - gamma)/2 (negative).
///
/// Writing the same rate through the steady-state occupation,
/// -alpha / (2 n) with n = alpha/(gamma - alpha), is an algebraic
/// identity; both are computed and cross-checked. Note the magnitude
/// convention: the occupation balance fixes gamma - alpha = alpha/n (the
/// decaying side of threshold), so the rate is negative.
pub fn below_threshold_field_rate(p: &LaserParams) -> Result<f64, DynamicsError> {
    let n_bar = p.mean_photons_below().ok_or(DynamicsError::WrongRegime {
        required: "below-threshold",
        alpha: p.alpha(),
        gamma: p.gamma(),
    })?;
    let direct = 0.5 * (p.alpha() - p.gamma());
    let via_occupation = -p.alpha() / (2.0 * n_bar);
    debug_assert!(
        (direct - via_occupation).abs() <= 1e-12 * direct.abs().max(1e-300),
        "field-rate identity violated: {direct} vs {via_occupation}"
    );
    Ok(direct)
}
