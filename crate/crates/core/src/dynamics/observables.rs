use num_complex::Complex64 as c64;
use serde::Serialize;

use super::state::DensityState;
use crate::error::{Error, Result};
use crate::hamiltonian::{BlockEigensystem, StateLabel};

/// Config-summed diagonal of the excited sector; the last entry is the photon.
pub fn site_populations(state: &DensityState) -> Vec<f64> {
    let ix = state.indexing();
    (0..ix.sites())
        .map(|m| (0..ix.configs()).map(|p| state.element(m, m, p).re).sum())
        .collect()
}

/// |Σ_P ⟨e_i|ρ|e_j⟩| for molecules i ≠ j (0-based).
pub fn intermolecule_coherence(state: &DensityState, i: usize, j: usize) -> Result<f64> {
    let n = state.n_molecules();
    if i == j {
        return Err(Error::param("coherence", "molecule indices must differ"));
    }
    for &k in &[i, j] {
        if k >= n {
            return Err(Error::IndexOutOfRange {
                what: "molecule",
                index: k,
                limit: n,
            });
        }
    }
    let sum: c64 = (0..state.indexing().configs())
        .map(|p| state.element(i, j, p))
        .sum();
    Ok(sum.norm())
}

/// Eigenstate populations of every configuration block.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolaritonPopulations {
    /// [config][eigenstate], ascending frequency order.
    pub per_config: Vec<Vec<f64>>,
    pub lower: f64,
    pub upper: f64,
    pub dark: f64,
    pub ground: f64,
}

/// ⟨ψ_k|ρ_P|ψ_k⟩ for each block, summed by label.
pub fn polariton_populations(
    state: &DensityState,
    eigensystems: &[BlockEigensystem],
) -> Result<PolaritonPopulations> {
    let ix = state.indexing();
    if eigensystems.len() != ix.configs() {
        return Err(Error::LengthMismatch {
            what: "eigensystems",
            expected: ix.configs(),
            actual: eigensystems.len(),
        });
    }
    let d = ix.sites();
    let mut out = PolaritonPopulations {
        per_config: Vec::with_capacity(ix.configs()),
        lower: 0.0,
        upper: 0.0,
        dark: 0.0,
        ground: state.ground_trace(),
    };
    for (p, eig) in eigensystems.iter().enumerate() {
        let block = state.block(p);
        let pops: Vec<f64> = (0..d)
            .map(|k| {
                let mut acc = c64::new(0.0, 0.0);
                for m in 0..d {
                    let cm = eig.vectors[(m, k)].conj();
                    for n in 0..d {
                        acc += cm * block[(m, n)] * eig.vectors[(n, k)];
                    }
                }
                acc.re
            })
            .collect();
        for (k, &pk) in pops.iter().enumerate() {
            match eig.labels[k] {
                StateLabel::LowerPolariton => out.lower += pk,
                StateLabel::UpperPolariton => out.upper += pk,
                StateLabel::Dark => out.dark += pk,
            }
        }
        out.per_config.push(pops);
    }
    Ok(out)
}

/// Everything recorded per time point of a trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Snapshot {
    pub time: f64,
    /// Molecular site populations.
    pub sites: Vec<f64>,
    pub photon: f64,
    /// ((i, j), |coherence|) for i < j, 0-based.
    pub coherences: Vec<((usize, usize), f64)>,
    pub lower: f64,
    pub upper: f64,
    pub dark: f64,
    pub ground: f64,
}

impl Snapshot {
    pub fn new(state: &DensityState, eigensystems: &[BlockEigensystem]) -> Result<Self> {
        let n = state.n_molecules();
        let mut sites = site_populations(state);
        let photon = sites.pop().unwrap_or(0.0);
        let mut coherences = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                coherences.push(((i, j), intermolecule_coherence(state, i, j)?));
            }
        }
        let pol = polariton_populations(state, eigensystems)?;
        Ok(Snapshot {
            time: state.time,
            sites,
            photon,
            coherences,
            lower: pol.lower,
            upper: pol.upper,
            dark: pol.dark,
            ground: pol.ground,
        })
    }
}
