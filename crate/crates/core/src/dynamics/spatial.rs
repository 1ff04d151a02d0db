use log::warn;
use num_complex::Complex64 as c64;
use serde::Serialize;

use super::state::DensityState;
use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Molecules closer than this (nm) make site-resolved densities ambiguous.
pub const OVERLAP_DISTANCE: f64 = 0.01;

/// φ(x) = sqrt(2/(ℓ³√π)) x e^{−x²/2ℓ²}, the first excited oscillator state.
pub fn vibrational_orbital(x: f64, ell: f64) -> f64 {
    let norm = (2.0 / (ell.powi(3) * std::f64::consts::PI.sqrt())).sqrt();
    norm * x * (-x * x / (2.0 * ell * ell)).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpatialGrid {
    /// nm
    pub x: Vec<f64>,
    /// ρ(x, x).
    pub density: Vec<f64>,
}

impl SpatialGrid {
    /// Trapezoid rule over the grid.
    pub fn integral(&self) -> f64 {
        self.x
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(x, d)| 0.5 * (x[1] - x[0]) * (d[0] + d[1]))
            .sum()
    }
}

fn check_grid(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::param("x", "grid must be strictly increasing"));
    }
    Ok(())
}

fn warn_overlaps(params: &SystemParams) {
    let m = params.molecules();
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            if (m[i].position - m[j].position).abs() < OVERLAP_DISTANCE {
                warn!(
                    "molecules {} and {} are {:.3e} nm apart; site densities overlap",
                    i + 1,
                    j + 1,
                    (m[i].position - m[j].position).abs()
                );
            }
        }
    }
}

/// Orbital values [point][molecule].
fn orbitals(params: &SystemParams, x: &[f64]) -> Vec<Vec<f64>> {
    x.iter()
        .map(|&xi| {
            params
                .molecules()
                .iter()
                .map(|m| vibrational_orbital(xi - m.position, m.localization))
                .collect()
        })
        .collect()
}

/// ρ(x, x′) = Σ_ij ρ_ij φ(x − a_i) φ(x′ − a_j), photon row excluded.
pub fn spatial_coherence_map(
    state: &DensityState,
    params: &SystemParams,
    x: &[f64],
) -> Result<Vec<Vec<c64>>> {
    check_grid(x)?;
    if params.n() != state.n_molecules() {
        return Err(Error::LengthMismatch {
            what: "molecules",
            expected: state.n_molecules(),
            actual: params.n(),
        });
    }
    warn_overlaps(params);
    let rho = state.summed_block();
    let phi = orbitals(params, x);
    let n = params.n();
    Ok(phi
        .iter()
        .map(|pa| {
            phi.iter()
                .map(|pb| {
                    let mut acc = c64::new(0.0, 0.0);
                    for i in 0..n {
                        for j in 0..n {
                            acc += rho[(i, j)] * pa[i] * pb[j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect())
}

/// Diagonal ρ(x, x) of the excitation density.
pub fn spatial_density(state: &DensityState, params: &SystemParams, x: &[f64]) -> Result<SpatialGrid> {
    check_grid(x)?;
    if params.n() != state.n_molecules() {
        return Err(Error::LengthMismatch {
            what: "molecules",
            expected: state.n_molecules(),
            actual: params.n(),
        });
    }
    warn_overlaps(params);
    let rho = state.summed_block();
    let n = params.n();
    let density = orbitals(params, x)
        .iter()
        .map(|p| {
            let mut acc = c64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    acc += rho[(i, j)] * p[i] * p[j];
                }
            }
            acc.re
        })
        .collect();
    Ok(SpatialGrid {
        x: x.to_vec(),
        density,
    })
}

/// Uniform grid covering every molecule with `margin` nm on each side.
pub fn default_grid(params: &SystemParams, points: usize, margin: f64) -> Vec<f64> {
    let lo = params
        .molecules()
        .iter()
        .map(|m| m.position)
        .fold(f64::INFINITY, f64::min)
        - margin;
    let hi = params
        .molecules()
        .iter()
        .map(|m| m.position)
        .fold(f64::NEG_INFINITY, f64::max)
        + margin;
    let points = points.max(2);
    (0..points)
        .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbital_is_normalized() {
        let ell = 0.05;
        let n = 40_001;
        let (lo, hi) = (-1.0, 1.0);
        let h = (hi - lo) / (n - 1) as f64;
        let mut acc = 0.0;
        for k in 0..n {
            let x = lo + k as f64 * h;
            let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            acc += w * vibrational_orbital(x, ell).powi(2);
        }
        assert!((acc * h - 1.0).abs() < 1e-6);
    }

    #[test]
    fn single_site_density_integrates_to_population() {
        let p = SystemParams::wco6_trimer();
        let mut s = DensityState::zeros(3);
        s.set_element(0, 0, 0, c64::new(1.0, 0.0));
        let x = default_grid(&p, 2001, 0.5);
        let g = spatial_density(&s, &p, &x).unwrap();
        assert!((g.integral() - 1.0).abs() < 0.01);
        assert!(g.density.iter().all(|&d| d >= -1e-10));
        // lobes straddle a_1 = 0
        let peak = g
            .x
            .iter()
            .zip(&g.density)
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(peak.abs() < 0.1);
    }

    #[test]
    fn zero_state_gives_zero_grid() {
        let p = SystemParams::wco6_trimer();
        let s = DensityState::zeros(3);
        let g = spatial_density(&s, &p, &default_grid(&p, 101, 0.3)).unwrap();
        assert!(g.density.iter().all(|&d| d == 0.0));
    }
}
