//! Closed-form propagation in the vibrational ground manifold.
//!
//! Each solvent coordinate is an independent two-state Markov chain, so the
//! ground-sector propagator factorizes into 2×2 blocks of the form
//! `A + B e^{-λt}` with λ = γ(2n̄+1). Leakage of photon population into the
//! ground manifold is a convolution of that propagator with the excited-sector
//! modes e^{νt}, which is done analytically.

use faer::Mat;
use num_complex::Complex64 as c64;

use super::indexing::SectorIndexing;
use super::spectrum::LiouvillianSpectrum;
use crate::error::{Error, Result};
use crate::hamiltonian::BlockEigensystem;
use crate::params::SystemParams;

/// Stationary and transient parts of a single-molecule solvent propagator.
#[derive(Clone, Copy, Debug)]
struct TwoState {
    stationary: [[f64; 2]; 2],
    transient: [[f64; 2]; 2],
    rate: f64,
}

impl TwoState {
    fn new(params: &SystemParams, s: usize) -> Self {
        let nbar = params.thermal_occupation(s);
        let norm = 2.0 * nbar + 1.0;
        TwoState {
            stationary: [
                [(nbar + 1.0) / norm, (nbar + 1.0) / norm],
                [nbar / norm, nbar / norm],
            ],
            transient: [
                [nbar / norm, -(nbar + 1.0) / norm],
                [-nbar / norm, (nbar + 1.0) / norm],
            ],
            rate: params.solvent_up_rate(s) + params.solvent_down_rate(s),
        }
    }

    fn at(&self, t: f64) -> [[f64; 2]; 2] {
        let e = (-self.rate * t).exp();
        let mut g = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                g[i][j] = self.stationary[i][j] + e * self.transient[i][j];
            }
        }
        g
    }
}

/// 𝒢_s^{(gg)}(t) in the basis (l=0, l=1); column j is the initial state.
pub fn solvent_gg(params: &SystemParams, s: usize, t: f64) -> [[f64; 2]; 2] {
    TwoState::new(params, s).at(t)
}

/// ∫₀ᵗ e^{-decay (t-τ)} e^{ν τ} dτ, stable when ν ≈ -decay.
pub fn exp_convolution(decay: f64, nu: c64, t: f64) -> c64 {
    let a = nu + decay;
    let z = a * t;
    if z.norm() < 1e-3 {
        // e^{-decay t} t φ₁(z), φ₁(z) = (e^z - 1)/z
        let phi = 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
        (-decay * t).exp() * t * phi
    } else {
        ((nu * t).exp() - (-decay * t).exp()) / a
    }
}

/// Exact propagator of the 2^N ground populations as a sum of exponentials.
#[derive(Clone, Debug)]
pub struct GroundPropagator {
    configs: usize,
    /// (Λ_K, weights[r·configs + P]) for every subset K of molecules.
    modes: Vec<(f64, Vec<f64>)>,
}

impl GroundPropagator {
    pub fn new(params: &SystemParams) -> Self {
        let n = params.n();
        let configs = 1usize << n;
        let parts: Vec<TwoState> = (0..n).map(|s| TwoState::new(params, s)).collect();
        let modes = (0..configs)
            .map(|subset| {
                let rate: f64 = (0..n)
                    .filter(|s| (subset >> s) & 1 == 1)
                    .map(|s| parts[s].rate)
                    .sum();
                let mut w = vec![0.0; configs * configs];
                for r in 0..configs {
                    for p in 0..configs {
                        let mut prod = 1.0;
                        for (s, part) in parts.iter().enumerate() {
                            let (rs, ps) = ((r >> s) & 1, (p >> s) & 1);
                            prod *= if (subset >> s) & 1 == 1 {
                                part.transient[rs][ps]
                            } else {
                                part.stationary[rs][ps]
                            };
                        }
                        w[r * configs + p] = prod;
                    }
                }
                (rate, w)
            })
            .collect();
        GroundPropagator { configs, modes }
    }

    pub fn configs(&self) -> usize {
        self.configs
    }

    /// Row-major [r][P] propagator at time t.
    pub fn matrix(&self, t: f64) -> Vec<f64> {
        let mut g = vec![0.0; self.configs * self.configs];
        for (rate, w) in &self.modes {
            let e = (-rate * t).exp();
            for (gi, wi) in g.iter_mut().zip(w) {
                *gi += e * wi;
            }
        }
        g
    }

    pub fn apply(&self, t: f64, ground: &[f64]) -> Vec<f64> {
        let g = self.matrix(t);
        (0..self.configs)
            .map(|r| {
                (0..self.configs)
                    .map(|p| g[r * self.configs + p] * ground[p])
                    .sum()
            })
            .collect()
    }

    /// M[r, u]: ground population of r at time t produced by unit amplitude
    /// in Liouvillian mode u at t = 0.
    ///
    /// M[r,u] = κ Σ_P Σ_K W_K[r,P] S[(ph,ph,P), u] ∫₀ᵗ e^{-Λ_K(t-τ)} e^{ν_u τ} dτ
    pub fn leakage_matrix(&self, spec: &LiouvillianSpectrum, kappa: f64, t: f64) -> Mat<c64> {
        let ix = SectorIndexing::new(self.configs.trailing_zeros() as usize);
        let dim = spec.dim();
        let mut out = Mat::<c64>::zeros(self.configs, dim);
        if kappa == 0.0 || t == 0.0 {
            return out;
        }
        let photon_rows: Vec<usize> = (0..self.configs)
            .map(|p| ix.excited(ix.photon(), ix.photon(), p))
            .collect();
        for (rate, w) in &self.modes {
            for u in 0..dim {
                let integral = kappa * exp_convolution(*rate, spec.eigenvalues[u], t);
                for r in 0..self.configs {
                    let mut acc = c64::new(0.0, 0.0);
                    for (p, &row) in photon_rows.iter().enumerate() {
                        let wk = w[r * self.configs + p];
                        if wk != 0.0 {
                            acc += spec.vectors[(row, u)] * wk;
                        }
                    }
                    out[(r, u)] += acc * integral;
                }
            }
        }
        out
    }
}

/// ⟨⟨G^{(r)},G^{(r)}|𝒢(T₂)|e_k e_l; J⟩⟩ over the site basis: ground population
/// of configuration r reached through cavity leakage from each excited element.
#[derive(Clone, Debug)]
pub struct EsdGreen {
    /// configs × excited_dim.
    pub matrix: Mat<c64>,
    indexing: SectorIndexing,
}

impl EsdGreen {
    /// ⟨⟨G^{(r)},G^{(r)}|𝒢|ψ_{j'}^{(J)}, ψ_j^{(J)}⟩⟩ for the initial coherence |ψ_{j'}⟩⟨ψ_j|.
    pub fn element(&self, r: usize, eig: &BlockEigensystem, jp: usize, j: usize) -> c64 {
        let d = self.indexing.sites();
        let cfg = eig.config.index();
        let mut acc = c64::new(0.0, 0.0);
        for k in 0..d {
            for l in 0..d {
                let coeff = eig.vectors[(k, jp)] * eig.vectors[(l, j)].conj();
                acc += self.matrix[(r, self.indexing.excited(k, l, cfg))] * coeff;
            }
        }
        acc
    }

    /// Ground populations reached from an arbitrary excited-sector state.
    pub fn apply(&self, excited: &[c64]) -> Vec<c64> {
        super::spectrum::mat_vec(&self.matrix, excited)
    }
}

/// Leakage Green's function during the waiting time T₂.
///
/// The solvent acts on the ground manifold after the photon is lost, so the
/// pathway is the forward convolution 𝒢^{(gg)}(T₂ − t′)·(ω_c/Q)·e^{ν_u t′}.
pub fn esd_green(spec: &LiouvillianSpectrum, params: &SystemParams, t2: f64) -> Result<EsdGreen> {
    if !(t2 >= 0.0) {
        return Err(Error::NegativeTime(t2));
    }
    let ix = SectorIndexing::new(params.n());
    if spec.dim() != ix.excited_dim() {
        return Err(Error::LengthMismatch {
            what: "spectrum dimension",
            expected: ix.excited_dim(),
            actual: spec.dim(),
        });
    }
    let ground = GroundPropagator::new(params);
    let leak = ground.leakage_matrix(spec, params.photon_decay_rate(), t2);
    Ok(EsdGreen {
        matrix: &leak * &spec.inverse,
        indexing: ix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solvent_propagator_limits() {
        let p = SystemParams::wco6_trimer();
        let g0 = solvent_gg(&p, 0, 0.0);
        assert_eq!(g0, [[1.0, 0.0], [0.0, 1.0]]);
        let nbar = p.thermal_occupation(0);
        let ginf = solvent_gg(&p, 0, 1e4);
        for j in 0..2 {
            assert!((ginf[0][j] - (nbar + 1.0) / (2.0 * nbar + 1.0)).abs() < 1e-12);
            assert!((ginf[1][j] - nbar / (2.0 * nbar + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn solvent_propagator_columns_and_semigroup() {
        let p = SystemParams::wco6_trimer();
        for &t in &[0.1, 1.0, 10.0, 100.0] {
            let g = solvent_gg(&p, 1, t);
            for j in 0..2 {
                assert!((g[0][j] + g[1][j] - 1.0).abs() < 1e-12);
            }
        }
        let (a, b) = (solvent_gg(&p, 0, 1.3), solvent_gg(&p, 0, 2.9));
        let ab = solvent_gg(&p, 0, 4.2);
        for i in 0..2 {
            for j in 0..2 {
                let prod = a[i][0] * b[0][j] + a[i][1] * b[1][j];
                assert!((prod - ab[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn convolution_matches_quadrature() {
        // composite Simpson reference
        let simpson = |decay: f64, nu: c64, t: f64| {
            let n = 20_000;
            let h = t / n as f64;
            let f = |s: f64| (-decay * (t - s)).exp() * (nu * s).exp();
            let mut acc = f(0.0) + f(t);
            for k in 1..n {
                acc += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
            }
            acc * h / 3.0
        };
        for &(decay, nu, t) in &[
            (0.3, c64::new(-0.05, 1.3), 7.0),
            (0.0, c64::new(-0.01, 0.0), 30.0),
            (0.2, c64::new(-0.2, 0.0), 5.0),
            (0.2, c64::new(-0.2 + 1e-12, 1e-13), 5.0),
            (0.0, c64::new(0.0, 0.0), 3.0),
        ] {
            let exact = exp_convolution(decay, nu, t);
            let quad = simpson(decay, nu, t);
            assert!((exact - quad).norm() < 1e-9 * (1.0 + quad.norm()), "{decay} {nu} {exact} {quad}");
        }
    }

    #[test]
    fn ground_propagator_matches_product_of_two_state_blocks() {
        let p = SystemParams::wco6_trimer();
        let g = GroundPropagator::new(&p);
        let t = 3.7;
        let m = g.matrix(t);
        let blocks: Vec<_> = (0..3).map(|s| solvent_gg(&p, s, t)).collect();
        for r in 0..8 {
            for q in 0..8 {
                let mut prod = 1.0;
                for (s, b) in blocks.iter().enumerate() {
                    prod *= b[(r >> s) & 1][(q >> s) & 1];
                }
                assert!((m[r * 8 + q] - prod).abs() < 1e-14);
            }
        }
    }
}
