use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

use super::grid::{check_axis, parameter_hash, SpectrumGrid, SpectrumMetadata};
use super::linewidth::{eigenstate_widths, LinewidthModel};
use super::pulse::Pulse;
use crate::dynamics::DensityState;
use crate::error::{Error, Result};
use crate::hamiltonian::BlockEigensystem;
use crate::params::SystemParams;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrpsOptions {
    /// Subtract the ground-population (cavity leakage) term.
    pub include_leakage_term: bool,
    pub linewidth: LinewidthModel,
}

impl Default for TrpsOptions {
    fn default() -> Self {
        TrpsOptions {
            include_leakage_term: true,
            linewidth: LinewidthModel::WithCavity,
        }
    }
}

/// Time-resolved photoluminescence of `state` on the rotating-frame axis `omega`.
///
/// S(Ω) = −Im Σ_Y Σ_i F_i/(Ω − ω_i + iγ_i) · [Σ_j V*_lo,i V_pr,j ⟨ψ_i|ρ_Y|ψ_j⟩ − |·|² p_Y]
/// with F_i = ℰ_lo(ω_i) ℰ_pr(ω_i) and p_Y the ground population of Y.
pub fn trps(
    params: &SystemParams,
    eigensystems: &[BlockEigensystem],
    state: &DensityState,
    probe: &Pulse,
    lo: &Pulse,
    omega: &[f64],
    options: &TrpsOptions,
) -> Result<SpectrumGrid> {
    check_axis(omega)?;
    probe.validate()?;
    lo.validate()?;
    let ix = state.indexing();
    if eigensystems.len() != ix.configs() || params.n() != state.n_molecules() {
        return Err(Error::LengthMismatch {
            what: "eigensystems vs state configurations",
            expected: ix.configs(),
            actual: eigensystems.len(),
        });
    }
    let wc = params.cavity().frequency;
    let d = ix.sites();

    // residues r_{Y,i} and poles ω_i − iγ_i
    let mut poles: Vec<(c64, c64)> = Vec::with_capacity(ix.configs() * d);
    for (y, eig) in eigensystems.iter().enumerate() {
        let widths = eigenstate_widths(params, eig, options.linewidth);
        let block = state.block(y);
        let vlo: Vec<c64> = (0..d).map(|k| eig.projected_dipole(k, &lo.polarization)).collect();
        let vpr: Vec<c64> = (0..d).map(|k| eig.projected_dipole(k, &probe.polarization)).collect();
        // ρ in the eigenbasis: R = C† ρ C
        let r = eig.vectors.adjoint() * &block * &eig.vectors;
        let ground = if options.include_leakage_term {
            state.ground[y]
        } else {
            0.0
        };
        for i in 0..d {
            let filter = lo.envelope(eig.frequencies[i], wc) * probe.envelope(eig.frequencies[i], wc);
            let mut residue = c64::new(0.0, 0.0);
            for j in 0..d {
                residue += vlo[i].conj() * vpr[j] * r[(i, j)];
            }
            residue -= vlo[i].conj() * vpr[i] * ground;
            poles.push((
                residue * filter,
                c64::new(eig.frequencies[i], -widths[i]),
            ));
        }
    }
    let values: Vec<f64> = omega
        .iter()
        .map(|&w| {
            let s: c64 = poles.iter().map(|(res, pole)| res / (w - pole)).sum();
            -s.im
        })
        .collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("TRPS"));
    }
    Ok(SpectrumGrid {
        axes: vec![omega.to_vec()],
        values,
        components: None,
        metadata: SpectrumMetadata {
            delay: state.time,
            parameter_hash: parameter_hash(params),
        },
    })
}
