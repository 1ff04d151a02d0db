use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spectral envelope of one laser pulse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    /// Carrier frequency in the lab frame (cm⁻¹).
    pub center: f64,
    /// Spectral width (cm⁻¹).
    pub sigma: f64,
    /// Unit polarization vector.
    pub polarization: [f64; 3],
    pub amplitude: f64,
}

impl Pulse {
    pub fn new(center: f64, sigma: f64, polarization: [f64; 3], amplitude: f64) -> Result<Self> {
        let p = Pulse {
            center,
            sigma,
            polarization,
            amplitude,
        };
        p.validate()?;
        Ok(p)
    }

    /// x-polarized, unit amplitude.
    pub fn gaussian(center: f64, sigma: f64) -> Self {
        Pulse {
            center,
            sigma,
            polarization: [1.0, 0.0, 0.0],
            amplitude: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::param("pulse.sigma", "must be finite and > 0"));
        }
        if !self.center.is_finite() || !self.amplitude.is_finite() {
            return Err(Error::param("pulse", "center and amplitude must be finite"));
        }
        let norm = self.polarization.iter().map(|e| e * e).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::param(
                "pulse.polarization",
                format!("must be a unit vector, |e| = {norm}"),
            ));
        }
        Ok(())
    }

    /// Envelope at a rotating-frame frequency ω, see [`gaussian_envelope`].
    pub fn envelope(&self, omega: f64, cavity_frequency: f64) -> f64 {
        gaussian_envelope(omega, self, cavity_frequency)
    }
}

/// ℰ₀ exp[−(ω − (center − ω_c))² / 2σ²] with ω measured from the cavity frequency.
pub fn gaussian_envelope(omega: f64, pulse: &Pulse, cavity_frequency: f64) -> f64 {
    let x = omega - (pulse.center - cavity_frequency);
    pulse.amplitude * (-x * x / (2.0 * pulse.sigma * pulse.sigma)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_and_e_fold() {
        let p = Pulse::gaussian(1993.0, 50.0);
        assert_eq!(gaussian_envelope(10.0, &p, 1983.0), 1.0);
        let s2 = 50.0 * 2f64.sqrt();
        for x in [10.0 + s2, 10.0 - s2] {
            assert!((gaussian_envelope(x, &p, 1983.0) - (-1f64).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn flat_over_the_polariton_window() {
        let p = Pulse::gaussian(1993.0, 50.0);
        // within ±10 of the carrier and across the ±g√3 polariton pair
        for k in 0..=200 {
            let w = -10.0 + 20.0 * k as f64 / 200.0;
            assert!(gaussian_envelope(10.0 + w, &p, 1983.0) > 0.95);
        }
        for w in [-3.64, 0.0, 3.64, 18.0] {
            assert!(gaussian_envelope(w, &p, 1983.0) > 0.95);
        }
    }

    #[test]
    fn rejects_bad_pulses() {
        assert!(Pulse::new(1983.0, 0.0, [1.0, 0.0, 0.0], 1.0).is_err());
        assert!(Pulse::new(1983.0, 10.0, [1.0, 1.0, 0.0], 1.0).is_err());
        assert!(Pulse::new(1983.0, 10.0, [0.6, 0.8, 0.0], 1.0).is_ok());
    }
}
