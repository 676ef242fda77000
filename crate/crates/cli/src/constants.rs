//! Physical constants (CODATA 2018 / exact SI) and the unit conversions
//! that turn user-facing quantities into the dimensionless ratios the
//! core library works with. This is the only place units exist.

/// Planck constant, J s (exact).
pub const PLANCK_JS: f64 = 6.626_070_15e-34;

/// Boltzmann constant, J/K (exact).
pub const BOLTZMANN_J_PER_K: f64 = 1.380_649e-23;

/// Electron volt, J (exact).
pub const ELECTRON_VOLT_J: f64 = 1.602_176_634e-19;

/// Photon energy in eV from an ordinary (cycles per second) frequency.
pub fn photon_energy_ev_from_hz(frequency_hz: f64) -> f64 {
    PLANCK_JS * frequency_hz / ELECTRON_VOLT_J
}

/// Thermal energy k_B T in eV from a temperature in kelvin.
pub fn thermal_energy_ev_from_kelvin(temperature_k: f64) -> f64 {
    BOLTZMANN_J_PER_K * temperature_k / ELECTRON_VOLT_J
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn room_temperature_is_about_25_mev() {
        let ev = thermal_energy_ev_from_kelvin(293.15);
        assert!((ev - 0.02526).abs() < 1e-4, "{ev}");
    }

    #[test]
    fn optical_photon_energy() {
        // 500 THz green light ~ 2.07 eV
        let ev = photon_energy_ev_from_hz(5e14);
        assert!((ev - 2.0678).abs() < 1e-3, "{ev}");
    }
}
