//! Physical parameters of the molecules, the cavity mode and the solvent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{bose_occupation, cm_to_rad_ps};

/// One vibrational mode coupled to the cavity and to its own two-state solvent coordinate.
///
/// Frequencies, couplings and rates are in cm⁻¹, the dipole in Debye, lengths in nm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Molecule {
    /// Bare vibrational frequency.
    pub frequency: f64,
    /// Frequency shift when the solvent coordinate is in state 1.
    pub disorder_shift: f64,
    /// Anharmonicity. Inert in the single-excitation manifold.
    pub anharmonicity: f64,
    /// Vibration-photon coupling.
    pub coupling: f64,
    /// Transition dipole vector.
    pub dipole: [f64; 3],
    /// Position along the cavity axis.
    pub position: f64,
    /// Localization length of the vibrational wavefunction.
    pub localization: f64,
    /// Energy gap between the two solvent states.
    pub solvent_gap: f64,
    /// Solvent jump rate.
    pub solvent_rate: f64,
}

/// Single cavity mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cavity {
    /// Photon frequency (cm⁻¹).
    pub frequency: f64,
    /// Quality factor. `f64::INFINITY` switches leakage off.
    pub quality: f64,
}

impl Cavity {
    /// Photon loss rate ω_c/Q in cm⁻¹.
    pub fn loss_rate(&self) -> f64 {
        self.frequency / self.quality
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    molecules: Vec<Molecule>,
    cavity: Cavity,
    /// Temperature in K.
    temperature: f64,
}

impl SystemParams {
    pub fn new(molecules: Vec<Molecule>, cavity: Cavity, temperature: f64) -> Result<Self> {
        let params = SystemParams {
            molecules,
            cavity,
            temperature,
        };
        params.validate()?;
        Ok(params)
    }

    /// `n` identical molecules placed `spacing` nm apart starting at the origin.
    pub fn uniform(
        n: usize,
        template: Molecule,
        spacing: f64,
        cavity: Cavity,
        temperature: f64,
    ) -> Result<Self> {
        let molecules = (0..n)
            .map(|i| Molecule {
                position: i as f64 * spacing,
                ..template.clone()
            })
            .collect();
        Self::new(molecules, cavity, temperature)
    }

    /// The CO-stretch of W(CO)₆ at room temperature: three resonant molecules,
    /// 18 cm⁻¹ solvent shift, g = 2.1 cm⁻¹, ω_c/Q = 0.04 cm⁻¹.
    pub fn wco6_trimer() -> Self {
        Self::uniform(3, Molecule::wco6(), 0.5, Cavity::wco6(), 300.0)
            .expect("reference parameters are valid")
    }

    fn validate(&self) -> Result<()> {
        if self.molecules.is_empty() {
            return Err(Error::param("molecules", "at least one molecule is required"));
        }
        positive("cavity.frequency", self.cavity.frequency)?;
        if !(self.cavity.quality > 0.0) {
            return Err(Error::param("cavity.quality", "must be > 0"));
        }
        positive("temperature", self.temperature)?;
        for (i, m) in self.molecules.iter().enumerate() {
            let name = |f: &str| format!("molecules[{i}].{f}");
            positive(&name("frequency"), m.frequency)?;
            positive(&name("localization"), m.localization)?;
            positive(&name("solvent_gap"), m.solvent_gap)?;
            finite(&name("disorder_shift"), m.disorder_shift)?;
            finite(&name("anharmonicity"), m.anharmonicity)?;
            finite(&name("coupling"), m.coupling)?;
            finite(&name("position"), m.position)?;
            for &d in &m.dipole {
                finite(&name("dipole"), d)?;
            }
            // zero rates are allowed: they give the closed-system limit
            if !(m.solvent_rate >= 0.0) || !m.solvent_rate.is_finite() {
                return Err(Error::param(name("solvent_rate"), "must be finite and >= 0"));
            }
        }
        for i in 0..self.n() {
            let nbar = self.thermal_occupation(i);
            if !(nbar >= 0.0 && nbar.is_finite()) {
                return Err(Error::param(
                    format!("molecules[{i}].solvent_gap"),
                    "thermal occupation is not finite",
                ));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.molecules.len()
    }

    pub fn molecules(&self) -> &[Molecule] {
        &self.molecules
    }

    pub fn molecule(&self, i: usize) -> &Molecule {
        &self.molecules[i]
    }

    pub fn cavity(&self) -> &Cavity {
        &self.cavity
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// Mean thermal occupation n̄ of the solvent mode of molecule `i`.
    pub fn thermal_occupation(&self, i: usize) -> f64 {
        bose_occupation(self.molecules[i].solvent_gap, self.temperature)
    }

    /// Upward (0 → 1) solvent jump rate in rad/ps.
    pub fn solvent_up_rate(&self, i: usize) -> f64 {
        cm_to_rad_ps(self.molecules[i].solvent_rate * self.thermal_occupation(i))
    }

    /// Downward (1 → 0) solvent jump rate in rad/ps.
    pub fn solvent_down_rate(&self, i: usize) -> f64 {
        cm_to_rad_ps(self.molecules[i].solvent_rate * (self.thermal_occupation(i) + 1.0))
    }

    /// Photon population decay rate ω_c/Q in rad/ps.
    pub fn photon_decay_rate(&self) -> f64 {
        if self.cavity.quality.is_infinite() {
            0.0
        } else {
            cm_to_rad_ps(self.cavity.loss_rate())
        }
    }

    pub fn dipoles(&self) -> Vec<[f64; 3]> {
        self.molecules.iter().map(|m| m.dipole).collect()
    }

    /// Collective coupling sqrt(Σ g_i²); equals g√N for identical molecules.
    pub fn collective_coupling(&self) -> f64 {
        self.molecules
            .iter()
            .map(|m| m.coupling * m.coupling)
            .sum::<f64>()
            .sqrt()
    }

    /// Copy with every solvent rate replaced.
    pub fn with_solvent_rate(&self, rate: f64) -> Result<Self> {
        let mut p = self.clone();
        for m in &mut p.molecules {
            m.solvent_rate = rate;
        }
        p.validate()?;
        Ok(p)
    }

    /// Copy with a different cavity quality factor.
    pub fn with_quality(&self, quality: f64) -> Result<Self> {
        let mut p = self.clone();
        p.cavity.quality = quality;
        p.validate()?;
        Ok(p)
    }

    /// Copy with every transition dipole scaled by `factor`.
    pub fn with_scaled_dipoles(&self, factor: f64) -> Result<Self> {
        let mut p = self.clone();
        for m in &mut p.molecules {
            for d in &mut m.dipole {
                *d *= factor;
            }
        }
        p.validate()?;
        Ok(p)
    }
}

impl Molecule {
    /// W(CO)₆ CO-stretch mode, dipole along x.
    pub fn wco6() -> Self {
        Molecule {
            frequency: 1983.0,
            disorder_shift: 18.0,
            anharmonicity: 0.0,
            coupling: 2.1,
            dipole: [0.122, 0.0, 0.0],
            position: 0.0,
            localization: 0.05,
            solvent_gap: 62.0,
            solvent_rate: 0.18,
        }
    }
}

impl Cavity {
    /// Resonant with the W(CO)₆ mode, ω_c/Q = 0.04 cm⁻¹.
    pub fn wco6() -> Self {
        Cavity {
            frequency: 1983.0,
            quality: 1983.0 / 0.04,
        }
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be finite and > 0, got {x}")))
    }
}

fn finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, "must be finite"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_trimer() {
        let p = SystemParams::wco6_trimer();
        assert_eq!(p.n(), 3);
        assert!((p.cavity().loss_rate() - 0.04).abs() < 1e-12);
        assert!((p.photon_decay_rate() - 0.007_534_6).abs() < 1e-6);
        assert!((p.collective_coupling() - 2.1 * 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(p.molecule(2).position, 1.0);
    }

    #[test]
    fn rejects_bad_values() {
        let m = Molecule::wco6();
        assert!(SystemParams::new(vec![], Cavity::wco6(), 300.0).is_err());
        assert!(SystemParams::new(vec![m.clone()], Cavity::wco6(), 0.0).is_err());
        let bad = Molecule {
            localization: 0.0,
            ..m.clone()
        };
        assert!(SystemParams::new(vec![bad], Cavity::wco6(), 300.0).is_err());
        let bad = Molecule {
            solvent_rate: -1.0,
            ..m
        };
        assert!(SystemParams::new(vec![bad], Cavity::wco6(), 300.0).is_err());
    }

    #[test]
    fn infinite_quality_disables_leakage() {
        let p = SystemParams::wco6_trimer().with_quality(f64::INFINITY).unwrap();
        assert_eq!(p.photon_decay_rate(), 0.0);
    }
}
