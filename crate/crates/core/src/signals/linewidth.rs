use serde::{Deserialize, Serialize};

use crate::hamiltonian::BlockEigensystem;
use crate::params::SystemParams;

/// Which damping channels enter the Lorentzian widths.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinewidthModel {
    /// Solvent escape plus photon-weighted cavity loss.
    #[default]
    WithCavity,
    SolventOnly,
}

/// γ_k (cm⁻¹) for every eigenstate of a block.
///
/// Optical coherences of configuration P decay by solvent escape,
/// Σ_m γ_m(n̄_m + l_m), plus ω_c/2Q times the photon content.
pub fn eigenstate_widths(
    params: &SystemParams,
    eig: &BlockEigensystem,
    model: LinewidthModel,
) -> Vec<f64> {
    let solvent: f64 = params
        .molecules()
        .iter()
        .enumerate()
        .map(|(m, mol)| mol.solvent_rate * (params.thermal_occupation(m) + eig.config.bit(m) as f64))
        .sum();
    let half_loss = if params.cavity().quality.is_infinite() {
        0.0
    } else {
        0.5 * params.cavity().loss_rate()
    };
    (0..eig.dim())
        .map(|k| match model {
            LinewidthModel::WithCavity => solvent + eig.photon_weight(k) * half_loss,
            LinewidthModel::SolventOnly => solvent,
        })
        .collect()
}
