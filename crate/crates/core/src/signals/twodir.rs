use num_complex::Complex64 as c64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{check_axis, parameter_hash, Pathways, SpectrumGrid, SpectrumMetadata};
use super::linewidth::{eigenstate_widths, LinewidthModel};
use super::pulse::Pulse;
use crate::dynamics::{thermal_config_weights, Dynamics};
use crate::error::{Error, Result};
use crate::hamiltonian::BlockEigensystem;
use crate::liouvillian::{esd_green, SectorIndexing};

/// Solvent state before the pulses arrive.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialPopulation {
    /// All solvent coordinates in state 0.
    #[default]
    PureGround,
    /// Boltzmann-weighted configurations.
    Thermal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EchoPulses {
    pub k1: Pulse,
    pub k2: Pulse,
    pub k3: Pulse,
    pub lo: Pulse,
}

impl EchoPulses {
    /// Same envelope for all four fields.
    pub fn identical(pulse: Pulse) -> Self {
        EchoPulses {
            k1: pulse.clone(),
            k2: pulse.clone(),
            k3: pulse.clone(),
            lo: pulse,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoDimOptions {
    pub subtract_gsb: bool,
    /// Keep the per-pathway grids.
    pub components: bool,
    pub linewidth: LinewidthModel,
}

impl Default for TwoDimOptions {
    fn default() -> Self {
        TwoDimOptions {
            subtract_gsb: false,
            components: false,
            linewidth: LinewidthModel::WithCavity,
        }
    }
}

/// Residue matrices K[(r,i), (J,j)] of the three pathways at fixed T₂.
struct Residues {
    ese: Vec<c64>,
    gsb: Vec<c64>,
    esd: Vec<c64>,
    /// Ω₃ poles ω_i^{(r)} − iγ, Ω₁ poles −ω_j^{(J)} − iγ.
    emit: Vec<c64>,
    absorb: Vec<c64>,
}

fn projected(eig: &BlockEigensystem, pulse: &Pulse) -> Vec<c64> {
    (0..eig.dim())
        .map(|k| eig.projected_dipole(k, &pulse.polarization))
        .collect()
}

/// Σ_k V_k |ψ_k⟩ in the site basis.
fn dipole_ket(eig: &BlockEigensystem, v: &[c64]) -> Vec<c64> {
    (0..eig.dim())
        .map(|s| (0..eig.dim()).map(|k| v[k] * eig.vectors[(s, k)]).sum())
        .collect()
}

fn residues(
    dynamics: &Dynamics,
    pulses: &EchoPulses,
    t2: f64,
    weights: &[f64],
    options: &TwoDimOptions,
) -> Result<Residues> {
    let params = &dynamics.params;
    let eigs = &dynamics.eigensystems;
    let spec = &dynamics.spectrum;
    let ix = SectorIndexing::new(params.n());
    let d = ix.sites();
    let nc = ix.configs();
    let rows = nc * d;
    let wc = params.cavity().frequency;

    spec.require_well_conditioned()?;
    let esd = esd_green(spec, params, t2)?;
    let ground = dynamics.ground.matrix(t2);

    let mut emit = Vec::with_capacity(rows);
    let mut absorb = Vec::with_capacity(rows);
    // per (r,i): V*_lo,i, V_3,i, detection filter
    let mut det = Vec::with_capacity(rows);
    // per (J,j): V_2,j, V*_1,j, excitation filter
    let mut exc = Vec::with_capacity(rows);
    let mut phi3 = Vec::with_capacity(nc);
    for eig in eigs {
        let widths = eigenstate_widths(params, eig, options.linewidth);
        let (vlo, v3) = (projected(eig, &pulses.lo), projected(eig, &pulses.k3));
        let (v2, v1) = (projected(eig, &pulses.k2), projected(eig, &pulses.k1));
        for k in 0..d {
            let w = eig.frequencies[k];
            emit.push(c64::new(w, -widths[k]));
            absorb.push(c64::new(-w, -widths[k]));
            det.push((
                vlo[k].conj(),
                v3[k],
                pulses.lo.envelope(w, wc) * pulses.k3.envelope(w, wc),
            ));
            exc.push((
                v2[k],
                v1[k].conj(),
                pulses.k2.envelope(w, wc) * pulses.k1.envelope(w, wc),
            ));
        }
        phi3.push(dipole_ket(eig, &v3));
    }

    let zero = c64::new(0.0, 0.0);
    let mut ese = vec![zero; rows * rows];
    let mut gsb = vec![zero; rows * rows];
    let mut esd_k = vec![zero; rows * rows];

    for (jc, eig_j) in eigs.iter().enumerate() {
        let pj = weights[jc];
        if pj == 0.0 {
            continue;
        }
        let v2 = projected(eig_j, &pulses.k2);
        let phi2 = dipole_ket(eig_j, &v2);
        for j in 0..d {
            let col = jc * d + j;
            let (v2j, v1j, fj) = exc[col];
            // |φ₂⟩⟨ψ_j| V*_1,j P_J in config J
            let mut x = vec![zero; ix.excited_dim()];
            for k in 0..d {
                for l in 0..d {
                    x[ix.excited(k, l, jc)] = phi2[k] * eig_j.vectors[(l, j)].conj() * v1j * pj;
                }
            }
            let coeff = spec.modal_coefficients(&x)?;
            let y = spec.reconstruct(&coeff, t2);
            let leaked = esd.apply(&x);
            for (rc, eig_r) in eigs.iter().enumerate() {
                for i in 0..d {
                    let row = rc * d + i;
                    let (vloi, v3i, fi) = det[row];
                    // Σ_mn C*_mi y_mn φ3_n
                    let mut proj = zero;
                    for m in 0..d {
                        let cm = eig_r.vectors[(m, i)].conj();
                        for n in 0..d {
                            proj += cm * y[ix.excited(m, n, rc)] * phi3[rc][n];
                        }
                    }
                    ese[row * rows + col] = vloi * proj * fi * fj;
                    esd_k[row * rows + col] = -vloi * v3i * leaked[rc] * fi * fj;
                    gsb[row * rows + col] =
                        vloi * v3i * v2j * v1j * pj * ground[rc * nc + jc] * fi * fj;
                }
            }
        }
    }
    Ok(Residues {
        ese,
        gsb,
        esd: esd_k,
        emit,
        absorb,
    })
}

/// Re Σ a_{ri}(Ω₃) K b_{Jj}(Ω₁) over the grid, row-major in Ω₁.
fn contract(k: &[c64], emit: &[c64], absorb: &[c64], omega1: &[f64], omega3: &[f64]) -> Vec<f64> {
    let rows = emit.len();
    omega1
        .par_iter()
        .flat_map_iter(|&w1| {
            let b: Vec<c64> = absorb.iter().map(|p| 1.0 / (w1 - p)).collect();
            let kb: Vec<c64> = (0..rows)
                .map(|r| (0..rows).map(|c| k[r * rows + c] * b[c]).sum())
                .collect();
            omega3
                .iter()
                .map(|&w3| {
                    emit.iter()
                        .zip(&kb)
                        .map(|(p, v)| v / (w3 - p))
                        .sum::<c64>()
                        .re
                })
                .collect::<Vec<f64>>()
        })
        .collect()
}

/// Rephasing photon-echo spectrum S_I(Ω₃, T₂, Ω₁).
///
/// Ω₁ peaks sit at −ω_j (rephasing), Ω₃ peaks at +ω_i.
pub fn twodir(
    dynamics: &Dynamics,
    pulses: &EchoPulses,
    t2: f64,
    omega1: &[f64],
    omega3: &[f64],
    initial: InitialPopulation,
    options: &TwoDimOptions,
) -> Result<SpectrumGrid> {
    if !(t2 >= 0.0) {
        return Err(Error::NegativeTime(t2));
    }
    check_axis(omega1)?;
    check_axis(omega3)?;
    for p in [&pulses.k1, &pulses.k2, &pulses.k3, &pulses.lo] {
        p.validate()?;
    }
    let nc = dynamics.eigensystems.len();
    let weights = match initial {
        InitialPopulation::PureGround => {
            let mut w = vec![0.0; nc];
            w[0] = 1.0;
            w
        }
        InitialPopulation::Thermal => thermal_config_weights(&dynamics.params)?,
    };
    let res = residues(dynamics, pulses, t2, &weights, options)?;
    let grid = |k: &[c64], name: &'static str| -> Result<Vec<f64>> {
        let v = contract(k, &res.emit, &res.absorb, omega1, omega3);
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite(name));
        }
        Ok(v)
    };
    let ese = grid(&res.ese, "ESE")?;
    let esd = grid(&res.esd, "ESD")?;
    let gsb = if options.subtract_gsb {
        vec![0.0; ese.len()]
    } else {
        grid(&res.gsb, "GSB")?
    };
    let values = ese
        .iter()
        .zip(&gsb)
        .zip(&esd)
        .map(|((a, b), c)| a + b + c)
        .collect();
    Ok(SpectrumGrid {
        axes: vec![omega1.to_vec(), omega3.to_vec()],
        values,
        components: options.components.then_some(Pathways { ese, gsb, esd }),
        metadata: SpectrumMetadata {
            delay: t2,
            parameter_hash: parameter_hash(&dynamics.params),
        },
    })
}
