//! Matrix elements of the Lindblad generator in the M = 0 and M = 1 manifolds.
//!
//! All entries are in rad/ps.

use num_complex::Complex64 as c64;

use super::indexing::SectorIndexing;
use super::sparse::SparseMatrix;
use crate::configuration::enumerate_configs;
use crate::hamiltonian::build_block_hamiltonian;
use crate::params::SystemParams;
use crate::units::cm_to_rad_ps;

/// Rate matrix of the solvent coordinate of molecule `s` in the basis (l=0, l=1).
///
/// Column j is the initial state, so columns sum to zero.
pub fn solvent_rate_matrix(params: &SystemParams, s: usize) -> [[f64; 2]; 2] {
    let up = params.solvent_up_rate(s);
    let down = params.solvent_down_rate(s);
    [[-up, down], [up, -down]]
}

/// Rate leaving configuration `config` through flips of molecule `s`.
fn escape_rate(params: &SystemParams, config: usize, s: usize) -> f64 {
    if (config >> s) & 1 == 0 {
        params.solvent_up_rate(s)
    } else {
        params.solvent_down_rate(s)
    }
}

/// Rate arriving in `config` from the configuration with bit `s` flipped.
fn arrival_rate(params: &SystemParams, config: usize, s: usize) -> f64 {
    if (config >> s) & 1 == 1 {
        params.solvent_up_rate(s)
    } else {
        params.solvent_down_rate(s)
    }
}

fn excited_triplets(params: &SystemParams, offset: usize) -> Vec<(usize, usize, c64)> {
    let n = params.n();
    let ix = SectorIndexing::new(n);
    let d = ix.sites();
    let photon = ix.photon();
    let half_loss = 0.5 * params.photon_decay_rate();
    let mut t = Vec::new();

    for config in enumerate_configs(n).expect("validated size") {
        let p = config.index();
        let h = build_block_hamiltonian(params, config);
        let escape: f64 = (0..n).map(|s| escape_rate(params, p, s)).sum();
        for a in 0..d {
            for b in 0..d {
                let row = offset + ix.excited(a, b, p);
                // -i [H, ρ]_{ab} = -i Σ_k (H_ak ρ_kb - ρ_ak H_kb)
                for k in 0..d {
                    let hak = h[(a, k)];
                    if hak.norm() != 0.0 {
                        let v = c64::new(0.0, -cm_to_rad_ps(1.0)) * hak;
                        t.push((row, offset + ix.excited(k, b, p), v));
                    }
                    let hkb = h[(k, b)];
                    if hkb.norm() != 0.0 {
                        let v = c64::new(0.0, cm_to_rad_ps(1.0)) * hkb;
                        t.push((row, offset + ix.excited(a, k, p), v));
                    }
                }
                // cavity anticommutator and solvent escape
                let mut diag = escape;
                if a == photon {
                    diag += half_loss;
                }
                if b == photon {
                    diag += half_loss;
                }
                t.push((row, row, c64::new(-diag, 0.0)));
                // solvent jumps feed this block from neighbouring configurations
                for s in 0..n {
                    let src = p ^ (1 << s);
                    let rate = arrival_rate(params, p, s);
                    t.push((row, offset + ix.excited(a, b, src), c64::new(rate, 0.0)));
                }
            }
        }
    }
    t
}

/// Generator of the config-diagonal excited sector, dimension (N+1)²·2^N.
pub fn assemble_excited_generator(params: &SystemParams) -> SparseMatrix<c64> {
    let dim = SectorIndexing::new(params.n()).excited_dim();
    SparseMatrix::from_triplets(dim, dim, excited_triplets(params, 0))
}

/// Ground-sector dynamics: solvent jumps plus the photon-leakage feed.
#[derive(Clone, Debug)]
pub struct GroundGenerator {
    /// 2^N × 2^N solvent rate matrix.
    pub rates: SparseMatrix<f64>,
    /// (ground config, excited index, rate): photon population of P feeds ground P.
    pub feed: Vec<(usize, usize, f64)>,
}

impl GroundGenerator {
    /// dg/dt = rates·g + feed(ρ_excited).
    pub fn derivative(&self, ground: &[f64], excited: &[c64]) -> Vec<f64> {
        let mut dg = self.rates.mul_vec(ground);
        for &(g, e, rate) in &self.feed {
            dg[g] += rate * excited[e].re;
        }
        dg
    }
}

fn ground_rate_triplets(params: &SystemParams) -> Vec<(usize, usize, f64)> {
    let n = params.n();
    let mut t = Vec::new();
    for p in 0..1usize << n {
        let escape: f64 = (0..n).map(|s| escape_rate(params, p, s)).sum();
        t.push((p, p, -escape));
        for s in 0..n {
            t.push((p, p ^ (1 << s), arrival_rate(params, p, s)));
        }
    }
    t
}

pub fn assemble_ground_generator(params: &SystemParams) -> GroundGenerator {
    let ix = SectorIndexing::new(params.n());
    let g = ix.ground_dim();
    let kappa = params.photon_decay_rate();
    let feed = if kappa > 0.0 {
        (0..g)
            .map(|p| (p, ix.excited(ix.photon(), ix.photon(), p), kappa))
            .collect()
    } else {
        Vec::new()
    };
    GroundGenerator {
        rates: SparseMatrix::from_triplets(g, g, ground_rate_triplets(params)),
        feed,
    }
}

/// Combined generator over [excited | ground], trace preserving.
pub fn assemble_full_generator(params: &SystemParams) -> SparseMatrix<c64> {
    let ix = SectorIndexing::new(params.n());
    let e = ix.excited_dim();
    let dim = e + ix.ground_dim();
    let mut t = excited_triplets(params, 0);
    let ground = assemble_ground_generator(params);
    for (r, c, v) in ground.rates.triplets() {
        t.push((e + r, e + c, c64::new(v, 0.0)));
    }
    for &(g, x, rate) in &ground.feed {
        t.push((e + g, x, c64::new(rate, 0.0)));
    }
    SparseMatrix::from_triplets(dim, dim, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{Cavity, Molecule};

    fn single(coupling: f64) -> SystemParams {
        let m = Molecule {
            coupling,
            ..Molecule::wco6()
        };
        SystemParams::uniform(1, m, 0.5, Cavity::wco6(), 300.0).unwrap()
    }

    #[test]
    fn photon_population_decay_rate() {
        let p = single(0.0);
        let l = assemble_excited_generator(&p);
        let ix = SectorIndexing::new(1);
        let u = ix.excited(1, 1, 0);
        // total loss minus solvent escape
        let diag = l.get(u, u).re + p.solvent_up_rate(0);
        assert!((diag + 0.007_534_6).abs() < 1e-6, "{diag}");
        let coh = ix.excited(0, 1, 0);
        assert!((l.get(coh, coh).re + p.solvent_up_rate(0) + 0.5 * 0.007_534_6).abs() < 1e-6);
    }

    #[test]
    fn site_population_rate_matrix() {
        // hand-assembled 2x2 rate matrix on {e_1 (l=0), e_1 (l=1)}
        let p = single(2.1);
        let l = assemble_excited_generator(&p);
        let ix = SectorIndexing::new(1);
        let a = ix.excited(0, 0, 0);
        let b = ix.excited(0, 0, 1);
        let g = cm_to_rad_ps(0.18);
        let nbar = p.thermal_occupation(0);
        assert!((l.get(b, a).re - g * nbar).abs() < 1e-14);
        assert!((l.get(a, b).re - g * (nbar + 1.0)).abs() < 1e-14);
        assert!((l.get(a, a).re + g * nbar).abs() < 1e-14);
        assert!((l.get(b, b).re + g * (nbar + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn closed_system_is_block_diagonal_commutator() {
        let p = SystemParams::wco6_trimer()
            .with_solvent_rate(0.0)
            .unwrap()
            .with_quality(f64::INFINITY)
            .unwrap();
        let l = assemble_excited_generator(&p);
        let ix = SectorIndexing::new(3);
        for (r, c, v) in l.triplets() {
            assert_eq!(ix.decompose(r).2, ix.decompose(c).2);
            assert_eq!(v.re, 0.0);
        }
        // anti-Hermitian
        for (r, c, v) in l.triplets() {
            assert!((v + l.get(c, r).conj()).norm() < 1e-15);
        }
        assert!(assemble_ground_generator(&p).feed.is_empty());
    }

    #[test]
    fn full_generator_preserves_trace() {
        let p = SystemParams::wco6_trimer();
        let l = assemble_full_generator(&p);
        let ix = SectorIndexing::new(3);
        let e = ix.excited_dim();
        // trace functional: diagonal excited entries + all ground entries
        let mut col_sums = vec![c64::new(0.0, 0.0); l.ncols()];
        for (r, c, v) in l.triplets() {
            let counts = if r >= e {
                true
            } else {
                let (m, n, _) = ix.decompose(r);
                m == n
            };
            if counts {
                col_sums[c] += v;
            }
        }
        assert!(col_sums.iter().all(|s| s.norm() < 1e-12));
    }

    #[test]
    fn ground_rates_columns_sum_to_zero() {
        let p = SystemParams::wco6_trimer();
        let g = assemble_ground_generator(&p);
        let mut sums = [0.0; 8];
        for (_, c, v) in g.rates.triplets() {
            sums[c] += v;
        }
        assert!(sums.iter().all(|s| s.abs() < 1e-14));
        assert_eq!(g.feed.len(), 8);
    }
}
