//! Heat-engine entropy accounting for a maser driven by hot and cold
//! monochromatic reservoirs: per-cycle entropy budget, the entropy-flux
//! inequality, and the quantum Carnot bound.
//!
//! The module is unit-free: photon energies and temperatures are both
//! expressed in the same energy unit, so the reservoir ratio
//! x = (photon energy)/(thermal energy) is dimensionless and every
//! entropy comes out in k_B.

use serde::Serialize;
use thiserror::Error;

/// Per-photon maser entropy below this fraction of the hot-reservoir
/// entropy quantum counts as negligible for the Carnot-bound discussion.
pub const MASER_TERM_NEGLIGIBLE_RATIO: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("reservoir needs positive frequency and temperature, got nu = {frequency}, T = {temperature}")]
    InvalidReservoir { frequency: f64, temperature: f64 },
    #[error("hot photon energy {nu_h} must exceed the cold photon energy {nu_c} so the maser line is positive")]
    NonPositiveMaserFrequency { nu_h: f64, nu_c: f64 },
    #[error("maser frequency {nu_m} violates energy conservation nu_h - nu_c = {expected} (relative gap {rel_gap:.3e})")]
    EnergyConservation {
        nu_m: f64,
        expected: f64,
        rel_gap: f64,
    },
    #[error("maser occupation must be positive, got {0}")]
    InvalidOccupation(f64),
}

/// One monochromatic reservoir: photon energy and temperature in a common
/// energy unit (hbar = k_B = 1 bookkeeping).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReservoirPhoton {
    frequency: f64,
    temperature: f64,
}

impl ReservoirPhoton {
    pub fn new(frequency: f64, temperature: f64) -> Result<Self, EngineError> {
        if !(frequency > 0.0 && frequency.is_finite())
            || !(temperature > 0.0 && temperature.is_finite())
        {
            return Err(EngineError::InvalidReservoir {
                frequency,
                temperature,
            });
        }
        Ok(ReservoirPhoton {
            frequency,
            temperature,
        })
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// x = (photon energy)/(thermal energy): the per-photon entropy
    /// quantum of this reservoir in k_B.
    pub fn x(&self) -> f64 {
        self.frequency / self.temperature
    }

    /// High-temperature occupancy, 1/x.
    pub fn high_t_occupancy(&self) -> f64 {
        self.temperature / self.frequency
    }
}

/// A maser cycle between two reservoirs: one hot photon absorbed, one
/// maser photon emitted, one cold photon dumped, at `photon_rate` cycles
/// per unit time (-dn_h/dt = dn_m/dt = dn_c/dt).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EngineScenario {
    hot: ReservoirPhoton,
    cold: ReservoirPhoton,
    maser_frequency: f64,
    maser_occupation: f64,
    photon_rate: f64,
}

impl EngineScenario {
    /// Builds the scenario with the maser frequency fixed by energy
    /// conservation, nu_m = nu_h - nu_c.
    pub fn new(
        hot: ReservoirPhoton,
        cold: ReservoirPhoton,
        maser_occupation: f64,
        photon_rate: f64,
    ) -> Result<Self, EngineError> {
        if hot.frequency() <= cold.frequency() {
            return Err(EngineError::NonPositiveMaserFrequency {
                nu_h: hot.frequency(),
                nu_c: cold.frequency(),
            });
        }
        if !(maser_occupation > 0.0 && maser_occupation.is_finite()) {
            return Err(EngineError::InvalidOccupation(maser_occupation));
        }
        Ok(EngineScenario {
            hot,
            cold,
            maser_frequency: hot.frequency() - cold.frequency(),
            maser_occupation,
            photon_rate,
        })
    }

    /// As [`EngineScenario::new`] but validating an externally supplied
    /// maser frequency against nu_h - nu_c to relative 1e-12.
    pub fn with_maser_frequency(
        hot: ReservoirPhoton,
        cold: ReservoirPhoton,
        maser_frequency: f64,
        maser_occupation: f64,
        photon_rate: f64,
    ) -> Result<Self, EngineError> {
        let s = Self::new(hot, cold, maser_occupation, photon_rate)?;
        let expected = s.maser_frequency;
        let rel_gap = ((maser_frequency - expected) / expected).abs();
        if rel_gap > 1e-12 {
            return Err(EngineError::EnergyConservation {
                nu_m: maser_frequency,
                expected,
                rel_gap,
            });
        }
        Ok(s)
    }

    pub fn hot(&self) -> &ReservoirPhoton {
        &self.hot
    }

    pub fn cold(&self) -> &ReservoirPhoton {
        &self.cold
    }

    pub fn maser_frequency(&self) -> f64 {
        self.maser_frequency
    }

    pub fn maser_occupation(&self) -> f64 {
        self.maser_occupation
    }

    pub fn photon_rate(&self) -> f64 {
        self.photon_rate
    }
}

/// Entropy change of the universe per cycle, in k_B:
/// -x_h + delta_s_maser + x_c.
///
/// The hot term is negative because drawing a photon lowers the source
/// entropy. `delta_s_maser` stays an explicit argument: the right value
/// is regime dependent (0 in the infinite-temperature idealization,
/// 1/(2 n) above threshold, 1/n for thermal-like maser light).
pub fn cycle_entropy_budget(s: &EngineScenario, delta_s_maser: f64) -> f64 {
    -s.hot.x() + delta_s_maser + s.cold.x()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CarnotAssessment {
    /// nu_m / nu_h
    pub efficiency: f64,
    /// 1 - T_c / T_h
    pub bound: f64,
    /// efficiency - bound (negative inside the bound)
    pub slack: f64,
    pub satisfied: bool,
}

/// Quantum Carnot bound: nu_m/nu_h <= 1 - T_c/T_h, with equality exactly
/// when nu_c/nu_h = T_c/T_h.
pub fn carnot_quantum_bound(s: &EngineScenario) -> CarnotAssessment {
    let efficiency = s.maser_frequency / s.hot.frequency();
    let bound = 1.0 - s.cold.temperature() / s.hot.temperature();
    let slack = efficiency - bound;
    CarnotAssessment {
        efficiency,
        bound,
        slack,
        satisfied: slack <= 1e-12,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxAssessment {
    /// x_h dn_h/dt + dn_m/dt /(2 n_m) + x_c dn_c/dt, in k_B per time
    pub lhs: f64,
    pub satisfied: bool,
    pub hot_term: f64,
    pub maser_term: f64,
    pub cold_term: f64,
    /// Hot occupancy in the high-temperature reading x_h = 1/n_h
    pub hot_high_t_occupancy: f64,
    /// Per-photon maser entropy under MASER_TERM_NEGLIGIBLE_RATIO of the
    /// hot quantum (n_m >> n_h regime)
    pub maser_negligible: bool,
}

/// Second-law flux inequality for the driven maser. Signs follow the
/// cycle bookkeeping: the hot reservoir loses photons, the maser mode and
/// the cold reservoir gain them.
pub fn flux_inequality(s: &EngineScenario) -> FluxAssessment {
    let rate = s.photon_rate;
    let hot_term = -rate * s.hot.x();
    let maser_term = rate / (2.0 * s.maser_occupation);
    let cold_term = rate * s.cold.x();
    let lhs = hot_term + maser_term + cold_term;
    let scale = hot_term.abs().max(maser_term.abs()).max(cold_term.abs());
    let per_photon_ratio = (1.0 / (2.0 * s.maser_occupation)) / s.hot.x();
    FluxAssessment {
        lhs,
        satisfied: lhs >= -1e-12 * scale.max(1e-300),
        hot_term,
        maser_term,
        cold_term,
        hot_high_t_occupancy: s.hot.high_t_occupancy(),
        maser_negligible: per_photon_ratio < MASER_TERM_NEGLIGIBLE_RATIO,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CarnotBudget {
    /// -q_in/T_h + s_engine + q_out/T_c
    pub delta_s: f64,
    /// q_in - q_out
    pub work: f64,
    pub efficiency: f64,
    /// 1 - T_c/T_h
    pub bound: f64,
}

/// Classical Carnot bookkeeping. The hot term carries a minus sign (heat
/// drawn from the source removes entropy there); a reversible cycle with
/// s_engine = 0 closes the budget at zero and sits exactly on the bound.
pub fn classical_carnot_check(
    q_in: f64,
    q_out: f64,
    t_h: f64,
    t_c: f64,
    s_engine: f64,
) -> CarnotBudget {
    debug_assert!(q_in > 0.0 && t_h > 0.0 && t_c >= 0.0);
    let delta_s = -q_in / t_h + s_engine + q_out / t_c.max(f64::MIN_POSITIVE);
    let work = q_in - q_out;
    CarnotBudget {
        delta_s,
        work,
        efficiency: work / q_in,
        bound: 1.0 - t_c / t_h,
    }
}
