//! Unit conventions.
//!
//! Frequencies, couplings and rates are carried in cm⁻¹ everywhere in the
//! public API. Propagation happens in angular frequency per picosecond.

use std::f64::consts::PI;

/// Speed of light in cm/ps.
pub const SPEED_OF_LIGHT_CM_PER_PS: f64 = 2.997_924_58e-2;

/// 1 cm⁻¹ expressed as an angular frequency in rad/ps (2πc).
pub const CM_TO_RAD_PER_PS: f64 = 2.0 * PI * SPEED_OF_LIGHT_CM_PER_PS;

/// Boltzmann constant in cm⁻¹/K.
pub const BOLTZMANN_CM_PER_K: f64 = 0.695_034_800_4;

/// Converts a wavenumber (cm⁻¹) to rad/ps.
#[inline]
pub fn cm_to_rad_ps(x: f64) -> f64 {
    x * CM_TO_RAD_PER_PS
}

/// Converts rad/ps to cm⁻¹.
#[inline]
pub fn rad_ps_to_cm(x: f64) -> f64 {
    x / CM_TO_RAD_PER_PS
}

/// Bose-Einstein occupation of a mode with gap `gap_cm` at `temperature_k`.
pub fn bose_occupation(gap_cm: f64, temperature_k: f64) -> f64 {
    1.0 / (gap_cm / (BOLTZMANN_CM_PER_K * temperature_k)).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_pi_c() {
        assert!((CM_TO_RAD_PER_PS - 0.188_365_2).abs() < 1e-7);
        assert!((cm_to_rad_ps(0.04) - 0.007_534_6).abs() < 1e-6);
        assert!((rad_ps_to_cm(cm_to_rad_ps(17.3)) - 17.3).abs() < 1e-12);
    }

    #[test]
    fn thermal_occupation_at_room_temperature() {
        // k_B T at 300 K is 208.5 cm^-1
        assert!((BOLTZMANN_CM_PER_K * 300.0 - 208.5).abs() < 0.05);
        let n = bose_occupation(62.0, 300.0);
        assert!((n - 2.89).abs() < 0.01, "{n}");
    }
}
