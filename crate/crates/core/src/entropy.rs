//! Von Neumann entropy of occupation distributions, the closed-form
//! entropy expressions, and entropy fluxes. All values are in units of
//! k_B (the Boltzmann constant is factored out everywhere; a display
//! layer can multiply it back in).

use serde::Serialize;

use crate::fock::{bec_ground_distribution, BecParams, FockDistribution, FockError, LaserParams};

/// Depletion scale below which the condensate closed form is invalid and
/// the direct sum is substituted (flagged through the returned method).
pub const BEC_CLOSED_FORM_FLOOR: f64 = 1.0;

/// How an entropy value was obtained. Closed forms never silently fall
/// back to the direct sum (the single flagged exception being the
/// condensate near T = 0), so comparison reports stay honest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyMethod {
    DirectSum,
    ClosedFormLaser,
    ClosedFormThermal,
    ClosedFormHighT,
    ClosedFormBec,
    ClosedFormBulkGas,
}

/// Entropy in units of k_B, tagged with the evaluation route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyValue {
    value: f64,
    method: EntropyMethod,
}

impl EntropyValue {
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn method(&self) -> EntropyMethod {
        self.method
    }
}

/// Entropy flux in k_B per unit time, driven by an occupation change
/// rate kappa (photon throughput in k_B units per time; its sign sets the
/// flux direction).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyFlux {
    value: f64,
    kappa: f64,
}

impl EntropyFlux {
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// S = -sum_n p_n ln p_n with the 0 ln 0 := 0 convention (exact-zero
/// rungs are skipped).
pub fn von_neumann_entropy(d: &FockDistribution) -> EntropyValue {
    let value = -d
        .probs()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>();
    EntropyValue {
        // a point mass sums to -0.0; keep entropy on the nonnegative branch
        value: if value == 0.0 { 0.0 } else { value },
        method: EntropyMethod::DirectSum,
    }
}

/// Closed-form laser entropy above threshold: ln sqrt(2 pi a) + 1/2 with
/// a = alpha^2/(beta gamma).
///
/// The equivalent form ln sqrt(2 pi (alpha/(alpha-gamma)) n_mean) + 1/2
/// is the same number because a = n_mean alpha/(alpha - gamma); the tests
/// assert the identity. Valid for pump margins >~ 0.1; closer to
/// threshold the expression overestimates the direct sum and callers
/// should surface a warning.
pub fn laser_entropy_closed_form(p: &LaserParams) -> EntropyValue {
    let a = p.photon_number_scale();
    EntropyValue {
        value: (2.0 * std::f64::consts::PI * a).sqrt().ln() + 0.5,
        method: EntropyMethod::ClosedFormLaser,
    }
}

/// Black-body entropy of a thermal mode:
/// (nbar + 1) ln(nbar + 1) - nbar ln nbar, with the nbar = 0 limit 0.
pub fn thermal_entropy_closed_form(n_bar: f64) -> EntropyValue {
    debug_assert!(n_bar >= 0.0);
    let value = if n_bar == 0.0 {
        0.0
    } else {
        (n_bar + 1.0) * (n_bar + 1.0).ln() - n_bar * n_bar.ln()
    };
    EntropyValue {
        value,
        method: EntropyMethod::ClosedFormThermal,
    }
}

/// High-temperature limit of the thermal entropy: ln nbar + 1.
pub fn thermal_entropy_high_t(n_bar_high: f64) -> EntropyValue {
    debug_assert!(n_bar_high > 0.0);
    EntropyValue {
        value: n_bar_high.ln() + 1.0,
        method: EntropyMethod::ClosedFormHighT,
    }
}

/// Entropy flux of maser light: kappa / (2 nbar_m). With a single-photon
/// change (kappa = +-1) this is the per-photon entropy change k_B/(2 nbar).
pub fn entropy_flux_maser(n_bar_m: f64, kappa: f64) -> EntropyFlux {
    debug_assert!(n_bar_m > 0.0);
    EntropyFlux {
        value: kappa / (2.0 * n_bar_m),
        kappa,
    }
}

/// Entropy flux of hot thermal light: kappa / nbar_high, twice the maser
/// flux at equal occupation.
pub fn entropy_flux_thermal(n_bar_high: f64, kappa: f64) -> EntropyFlux {
    debug_assert!(n_bar_high > 0.0);
    EntropyFlux {
        value: kappa / n_bar_high,
        kappa,
    }
}

/// Condensate ground-state entropy, closed form ln sqrt(2 pi h) + 1/2
/// with h = N (T/T_c)^3.
///
/// Below [`BEC_CLOSED_FORM_FLOOR`] the Gaussian picture behind the closed
/// form has collapsed (it would even go negative), so the direct sum over
/// the ground-state distribution is returned instead, flagged by
/// `method() == DirectSum`.
pub fn bec_ground_entropy_closed_form(p: &BecParams) -> Result<EntropyValue, FockError> {
    let h = p.noncondensed_mean();
    if h < BEC_CLOSED_FORM_FLOOR {
        let d = bec_ground_distribution(p)?;
        return Ok(von_neumann_entropy(&d));
    }
    Ok(EntropyValue {
        value: (2.0 * std::f64::consts::PI * h).sqrt().ln() + 0.5,
        method: EntropyMethod::ClosedFormBec,
    })
}

/// Bulk Bose-gas entropy in the thermodynamic limit: 3.6 N (T/T_c)^3.
pub fn bulk_bose_gas_entropy(n_total: f64, t_reduced: f64) -> EntropyValue {
    debug_assert!(n_total > 0.0 && (0.0..1.0).contains(&t_reduced));
    EntropyValue {
        value: 3.6 * n_total * t_reduced.powi(3),
        method: EntropyMethod::ClosedFormBulkGas,
    }
}
