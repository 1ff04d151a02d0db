//! Single-excitation block Hamiltonians and their eigensystems.
//!
//! For a fixed solvent configuration the M = 1 manifold is spanned by
//! `e_1 … e_N` (one vibrational quantum on molecule i) and `e_{N+1}` (one
//! photon). All energies are detunings from the cavity frequency in cm⁻¹.

use faer::{Mat, MatRef, Side};
use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

use crate::configuration::{enumerate_configs, SolventConfig};
use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Tolerance on |H - H†| accepted by [`diagonalize_block`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateLabel {
    #[serde(rename = "LP")]
    LowerPolariton,
    #[serde(rename = "UP")]
    UpperPolariton,
    #[serde(rename = "DARK")]
    Dark,
}

/// Eigenstates of one configuration block.
#[derive(Clone, Debug)]
pub struct BlockEigensystem {
    pub config: SolventConfig,
    /// Ascending eigenfrequencies (cm⁻¹, rotating frame).
    pub frequencies: Vec<f64>,
    /// Column k is eigenvector k over `e_1 … e_N, photon`.
    pub vectors: Mat<c64>,
    /// Transition dipole of each eigenstate (Debye).
    pub dipoles: Vec<[c64; 3]>,
    pub labels: Vec<StateLabel>,
}

impl BlockEigensystem {
    pub fn dim(&self) -> usize {
        self.frequencies.len()
    }

    pub fn n_molecules(&self) -> usize {
        self.dim() - 1
    }

    /// |C_{N+1,k}|².
    pub fn photon_weight(&self, k: usize) -> f64 {
        self.vectors[(self.dim() - 1, k)].norm_sqr()
    }

    pub fn lower_polariton(&self) -> usize {
        self.find(StateLabel::LowerPolariton)
    }

    pub fn upper_polariton(&self) -> usize {
        self.find(StateLabel::UpperPolariton)
    }

    pub fn dark_states(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&k| self.labels[k] == StateLabel::Dark)
            .collect()
    }

    fn find(&self, label: StateLabel) -> usize {
        self.labels
            .iter()
            .position(|&l| l == label)
            .expect("every block carries one LP and one UP")
    }

    /// e · V_k for a polarization vector `e`.
    pub fn projected_dipole(&self, k: usize, polarization: &[f64; 3]) -> c64 {
        self.dipoles[k]
            .iter()
            .zip(polarization)
            .map(|(v, e)| v * e)
            .sum()
    }

    /// Eigenvector k as a plain vector.
    pub fn vector(&self, k: usize) -> Vec<c64> {
        (0..self.dim()).map(|s| self.vectors[(s, k)]).collect()
    }
}

/// Hamiltonian of one solvent configuration in cm⁻¹.
///
/// The anharmonicity does not enter: b†b†bb vanishes on singly excited states.
pub fn build_block_hamiltonian(params: &SystemParams, config: SolventConfig) -> Mat<c64> {
    let n = params.n();
    let wc = params.cavity().frequency;
    let mut h = Mat::<c64>::zeros(n + 1, n + 1);
    for (i, m) in params.molecules().iter().enumerate() {
        let shift = m.disorder_shift * config.bit(i) as f64;
        h[(i, i)] = c64::new(m.frequency + shift - wc, 0.0);
        h[(i, n)] = c64::new(m.coupling, 0.0);
        h[(n, i)] = c64::new(m.coupling, 0.0);
    }
    h
}

/// V_k = Σ_{s ≤ N} μ_s C_{s,k}. The photon row carries no dipole.
pub fn transition_dipoles(vectors: MatRef<'_, c64>, mu: &[[f64; 3]]) -> Result<Vec<[c64; 3]>> {
    if vectors.nrows() != mu.len() + 1 {
        return Err(Error::LengthMismatch {
            what: "dipole list vs eigenvector rows",
            expected: vectors.nrows() - 1,
            actual: mu.len(),
        });
    }
    Ok((0..vectors.ncols())
        .map(|k| {
            let mut v = [c64::new(0.0, 0.0); 3];
            for (s, m) in mu.iter().enumerate() {
                let c = vectors[(s, k)];
                for a in 0..3 {
                    v[a] += c * m[a];
                }
            }
            v
        })
        .collect())
}

pub fn hermiticity_error(h: MatRef<'_, c64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..h.nrows() {
        for j in 0..h.ncols() {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn diagonalize_block(
    h: &Mat<c64>,
    params: &SystemParams,
    config: SolventConfig,
) -> Result<BlockEigensystem> {
    let dim = params.n() + 1;
    if h.nrows() != dim || h.ncols() != dim {
        return Err(Error::LengthMismatch {
            what: "Hamiltonian dimension",
            expected: dim,
            actual: h.nrows(),
        });
    }
    let dev = hermiticity_error(h.as_ref());
    if dev > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let evd = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let frequencies: Vec<f64> = (0..dim).map(|k| evd.S()[k].re).collect();
    let mut vectors = evd.U().to_owned();
    fix_phases(&mut vectors);

    let dipoles = transition_dipoles(vectors.as_ref(), &params.dipoles())?;
    let labels = label_states(&vectors, &frequencies);
    Ok(BlockEigensystem {
        config,
        frequencies,
        vectors,
        dipoles,
        labels,
    })
}

/// Rotate each column so its largest-magnitude entry is real and positive.
fn fix_phases(v: &mut Mat<c64>) {
    for k in 0..v.ncols() {
        let max = (0..v.nrows()).map(|s| v[(s, k)].norm()).fold(0.0, f64::max);
        let pivot = (0..v.nrows())
            .find(|&s| v[(s, k)].norm() >= max * (1.0 - 1e-10))
            .unwrap_or(0);
        let c = v[(pivot, k)];
        if c.norm() == 0.0 {
            continue;
        }
        let phase = c.conj() / c.norm();
        for s in 0..v.nrows() {
            v[(s, k)] *= phase;
        }
        v[(pivot, k)] = c64::new(v[(pivot, k)].re, 0.0);
    }
}

/// The two states with the largest photon weight are the polaritons.
fn label_states(v: &Mat<c64>, frequencies: &[f64]) -> Vec<StateLabel> {
    let dim = frequencies.len();
    let photon = dim - 1;
    let mut order: Vec<usize> = (0..dim).collect();
    // stable: ties resolved by ascending index
    order.sort_by(|&a, &b| {
        v[(photon, b)]
            .norm_sqr()
            .partial_cmp(&v[(photon, a)].norm_sqr())
            .unwrap()
    });
    let mut labels = vec![StateLabel::Dark; dim];
    let (a, b) = (order[0], order[1]);
    let (lo, hi) = if frequencies[a] <= frequencies[b] { (a, b) } else { (b, a) };
    labels[lo] = StateLabel::LowerPolariton;
    labels[hi] = StateLabel::UpperPolariton;
    labels
}

/// Eigensystems of all 2^N blocks in configuration order.
pub fn block_eigensystems(params: &SystemParams) -> Result<Vec<BlockEigensystem>> {
    enumerate_configs(params.n())?
        .into_iter()
        .map(|c| diagonalize_block(&build_block_hamiltonian(params, c), params, c))
        .collect()
}
