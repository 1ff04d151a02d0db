//! Dipole-strength distribution of one large configuration block.
//!
//! With identical molecules split into a resonant and a detuned group the
//! block is an arrowhead matrix: deflating the degenerate groups leaves a
//! secular equation λ = Σ_k n_k g²/(λ − d_k) whose roots are the only
//! eigenstates carrying photon weight or transition dipole.

use faer::{Mat, Side};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Largest ensemble accepted.
pub const MAX_ENSEMBLE: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LargeEnsemble {
    pub n: usize,
    /// g√N (cm⁻¹).
    pub collective_coupling: f64,
    pub detuned_count: usize,
    /// Shift of the detuned molecules (cm⁻¹).
    pub detuning: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stick {
    /// Rotating-frame frequency (cm⁻¹).
    pub frequency: f64,
    /// |e · V_k|² (D²).
    pub strength: f64,
    pub photon_weight: f64,
    /// Number of degenerate states represented.
    pub multiplicity: usize,
}

struct Group {
    offset: f64,
    count: usize,
}

fn groups(ensemble: &LargeEnsemble, base: f64) -> Result<(Vec<Group>, f64)> {
    if ensemble.n == 0 || ensemble.n > MAX_ENSEMBLE {
        return Err(Error::param(
            "n",
            format!("must be in 1..={MAX_ENSEMBLE}, got {}", ensemble.n),
        ));
    }
    if ensemble.detuned_count > ensemble.n {
        return Err(Error::param(
            "detuned_count",
            format!("{} exceeds N = {}", ensemble.detuned_count, ensemble.n),
        ));
    }
    if !(ensemble.collective_coupling >= 0.0) || !ensemble.detuning.is_finite() {
        return Err(Error::param("ensemble", "coupling must be >= 0 and detuning finite"));
    }
    let g = ensemble.collective_coupling / (ensemble.n as f64).sqrt();
    let mut out = vec![Group {
        offset: base,
        count: ensemble.n - ensemble.detuned_count,
    }];
    if ensemble.detuning == 0.0 {
        out[0].count = ensemble.n;
    } else {
        out.push(Group {
            offset: base + ensemble.detuning,
            count: ensemble.detuned_count,
        });
    }
    out.retain(|g| g.count > 0);
    out.sort_by(|a, b| a.offset.total_cmp(&b.offset));
    Ok((out, g))
}

fn secular(lambda: f64, groups: &[Group], g2: f64) -> f64 {
    lambda
        - groups
            .iter()
            .map(|k| k.count as f64 * g2 / (lambda - k.offset))
            .sum::<f64>()
}

/// Root of the increasing function `f` on the open interval (lo, hi).
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Stick spectrum of one block with `detuned_count` molecules shifted by
/// `detuning`; molecule properties come from the first molecule of `params`
/// and the dipoles are projected on `polarization`.
pub fn dipole_distribution(
    ensemble: &LargeEnsemble,
    params: &SystemParams,
    polarization: &[f64; 3],
) -> Result<Vec<Stick>> {
    let m = params.molecule(0);
    let base = m.frequency - params.cavity().frequency;
    let mu: f64 = m.dipole.iter().zip(polarization).map(|(a, b)| a * b).sum();
    let (groups, g) = groups(ensemble, base)?;
    let g2 = g * g;
    let total: f64 = groups.iter().map(|k| k.count as f64 * g2).sum();
    let f = |x: f64| secular(x, &groups, g2);

    let mut sticks = Vec::new();
    if g == 0.0 {
        for k in &groups {
            sticks.push(Stick {
                frequency: k.offset,
                strength: if k.count > 0 { mu * mu } else { 0.0 },
                photon_weight: 0.0,
                multiplicity: k.count,
            });
        }
        sticks.push(Stick {
            frequency: 0.0,
            strength: 0.0,
            photon_weight: 1.0,
            multiplicity: 1,
        });
        sticks.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));
        return Ok(sticks);
    }

    // one root below the first pole, one between each pair, one above the last
    let first = groups[0].offset;
    let last = groups[groups.len() - 1].offset;
    let reach = first.abs().max(last.abs()) + total.sqrt() + 1.0;
    let mut brackets = vec![(first.min(0.0) - reach, first)];
    for w in groups.windows(2) {
        brackets.push((w[0].offset, w[1].offset));
    }
    brackets.push((last, last.max(0.0) + reach));
    for (lo, hi) in brackets {
        let lambda = bisect(f, lo, hi);
        let mut amp = 0.0;
        let mut norm2 = 1.0;
        for k in &groups {
            let c = g / (lambda - k.offset);
            amp += k.count as f64 * c;
            norm2 += k.count as f64 * c * c;
        }
        sticks.push(Stick {
            frequency: lambda,
            strength: mu * mu * amp * amp / norm2,
            photon_weight: 1.0 / norm2,
            multiplicity: 1,
        });
    }
    // deflated states: orthogonal to the coupling vector within each group
    for k in &groups {
        if k.count > 1 {
            sticks.push(Stick {
                frequency: k.offset,
                strength: 0.0,
                photon_weight: 0.0,
                multiplicity: k.count - 1,
            });
        }
    }
    sticks.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));
    Ok(sticks)
}

/// Same spectrum from a dense Hermitian eigensolve of the full block.
pub fn dipole_distribution_dense(
    ensemble: &LargeEnsemble,
    params: &SystemParams,
    polarization: &[f64; 3],
) -> Result<Vec<Stick>> {
    let m = params.molecule(0);
    let base = m.frequency - params.cavity().frequency;
    let mu: f64 = m.dipole.iter().zip(polarization).map(|(a, b)| a * b).sum();
    let (_, g) = groups(ensemble, base)?;
    let n = ensemble.n;
    let mut h = Mat::<f64>::zeros(n + 1, n + 1);
    for i in 0..n {
        let shift = if i < ensemble.detuned_count { ensemble.detuning } else { 0.0 };
        h[(i, i)] = base + shift;
        h[(i, n)] = g;
        h[(n, i)] = g;
    }
    let evd = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let u = evd.U();
    Ok((0..=n)
        .map(|k| {
            let amp: f64 = (0..n).map(|s| u[(s, k)]).sum();
            Stick {
                frequency: evd.S()[k],
                strength: mu * mu * amp * amp,
                photon_weight: u[(n, k)] * u[(n, k)],
                multiplicity: 1,
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Broadening {
    #[default]
    Lorentzian,
    Gaussian,
}

/// Sticks convolved with unit-area line shapes of half width `width`.
pub fn broaden(sticks: &[Stick], omega: &[f64], width: f64, shape: Broadening) -> Result<Vec<f64>> {
    if !(width > 0.0) {
        return Err(Error::param("width", "must be > 0"));
    }
    let sigma = width / (2.0 * 2f64.ln()).sqrt();
    Ok(omega
        .iter()
        .map(|&w| {
            sticks
                .iter()
                .filter(|s| s.strength > 0.0)
                .map(|s| {
                    let x = w - s.frequency;
                    let line = match shape {
                        Broadening::Lorentzian => width / std::f64::consts::PI / (x * x + width * width),
                        Broadening::Gaussian => {
                            (-x * x / (2.0 * sigma * sigma)).exp()
                                / (sigma * (2.0 * std::f64::consts::PI).sqrt())
                        }
                    };
                    s.strength * s.multiplicity as f64 * line
                })
                .sum()
        })
        .collect())
}

/// Polariton pair and the strongest feature between them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DipoleFeatures {
    pub lower: Stick,
    pub upper: Stick,
    pub central: Option<Stick>,
}

impl DipoleFeatures {
    pub fn splitting(&self) -> f64 {
        self.upper.frequency - self.lower.frequency
    }
}

/// Lowest and highest sticks above `threshold` × max strength, plus the
/// strongest stick strictly between them.
pub fn features(sticks: &[Stick], threshold: f64) -> Option<DipoleFeatures> {
    let max = sticks.iter().map(|s| s.strength).fold(0.0, f64::max);
    if max == 0.0 {
        return None;
    }
    let bright: Vec<&Stick> = sticks
        .iter()
        .filter(|s| s.strength > threshold * max)
        .collect();
    let lower = **bright.iter().min_by(|a, b| a.frequency.total_cmp(&b.frequency))?;
    let upper = **bright.iter().max_by(|a, b| a.frequency.total_cmp(&b.frequency))?;
    let central = sticks
        .iter()
        .filter(|s| s.frequency > lower.frequency && s.frequency < upper.frequency && s.strength > 0.0)
        .max_by(|a, b| a.strength.total_cmp(&b.strength))
        .copied();
    Some(DipoleFeatures {
        lower,
        upper,
        central,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const X: [f64; 3] = [1.0, 0.0, 0.0];

    fn ensemble(n: usize, detuned: usize) -> LargeEnsemble {
        LargeEnsemble {
            n,
            collective_coupling: 19.0,
            detuned_count: detuned,
            detuning: 18.0,
        }
    }

    #[test]
    fn degenerate_ensemble_has_two_bright_sticks() {
        let p = SystemParams::wco6_trimer();
        let s = dipole_distribution(&ensemble(4137, 0), &p, &X).unwrap();
        let bright: Vec<_> = s.iter().filter(|s| s.strength > 0.0).collect();
        assert_eq!(bright.len(), 2);
        assert!((bright[0].frequency + 19.0).abs() < 1e-9);
        assert!((bright[1].frequency - 19.0).abs() < 1e-9);
        let states: usize = s.iter().map(|s| s.multiplicity).sum();
        assert_eq!(states, 4138);
    }

    #[test]
    fn secular_solution_matches_dense_eigensolve() {
        let p = SystemParams::wco6_trimer();
        for detuned in [0, 7, 60] {
            let e = ensemble(300, detuned);
            let fast = dipole_distribution(&e, &p, &X).unwrap();
            let dense = dipole_distribution_dense(&e, &p, &X).unwrap();
            let mut expanded: Vec<Stick> = Vec::new();
            for s in &fast {
                for _ in 0..s.multiplicity {
                    expanded.push(*s);
                }
            }
            assert_eq!(expanded.len(), dense.len());
            for (a, b) in expanded.iter().zip(&dense) {
                assert!((a.frequency - b.frequency).abs() < 1e-9);
            }
            // strengths agree for non-degenerate levels; total sum rule everywhere
            let ta: f64 = fast.iter().map(|s| s.strength * s.multiplicity as f64).sum();
            let tb: f64 = dense.iter().map(|s| s.strength).sum();
            assert!((ta - tb).abs() < 1e-12);
            assert!((ta - 300.0 * 0.122f64.powi(2)).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_oversized_detuned_group() {
        let p = SystemParams::wco6_trimer();
        assert!(dipole_distribution(&ensemble(10, 11), &p, &X).is_err());
    }

    #[test]
    fn broadened_area_equals_total_strength() {
        let p = SystemParams::wco6_trimer();
        let s = dipole_distribution(&ensemble(4137, 30), &p, &X).unwrap();
        let grid: Vec<f64> = (0..40_001).map(|k| -100.0 + k as f64 * 0.005).collect();
        let y = broaden(&s, &grid, 0.5, Broadening::Gaussian).unwrap();
        let area: f64 = y.iter().sum::<f64>() * 0.005;
        let total: f64 = s.iter().map(|s| s.strength).sum();
        assert!((area - total).abs() < 1e-6 * total);
    }
}
