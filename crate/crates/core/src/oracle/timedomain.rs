//! TRPS built from the time-domain emission of the probe-created optical
//! coherence, transformed numerically.

use num_complex::Complex64 as c64;

use crate::dynamics::DensityState;
use crate::error::{Error, Result};
use crate::hamiltonian::build_block_hamiltonian;
use crate::liouvillian::SectorIndexing;
use crate::params::SystemParams;
use crate::signals::{parameter_hash, Pulse, SpectrumGrid, SpectrumMetadata};
use crate::units::cm_to_rad_ps;
use crate::SolventConfig;

/// Stop once the coherence norm has fallen by this factor.
const DECAY_CUTOFF: f64 = 1e-10;
/// Longest emission window integrated (ps).
const MAX_WINDOW: f64 = 20_000.0;

/// ⟨μ_lo⟩(T) sampled on a uniform grid of step `dt`.
fn emission(params: &SystemParams, state: &DensityState, probe: &Pulse, lo: &Pulse) -> Result<(Vec<c64>, f64)> {
    let ix = SectorIndexing::new(1);
    let d = ix.sites();
    let photon = ix.photon();
    let mu = params.molecule(0).dipole;
    let proj = |e: &[f64; 3]| mu.iter().zip(e).map(|(a, b)| a * b).sum::<f64>();
    let (mu_pr, mu_lo) = (proj(&probe.polarization), proj(&lo.polarization));
    let half_loss = 0.5 * params.photon_decay_rate();

    let mut series: Vec<Vec<c64>> = Vec::new();
    let mut dt = f64::INFINITY;
    let mut blocks = Vec::new();
    for p in 0..ix.configs() {
        let h = build_block_hamiltonian(params, SolventConfig::from_index(p, 1)?);
        let hmax = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| h[(i, j)].norm())
            .fold(0.0, f64::max);
        dt = dt.min(0.01 / cm_to_rad_ps(hmax).max(half_loss).max(1e-12));
        blocks.push(h);
    }
    if half_loss == 0.0 {
        return Err(Error::Unsupported("time-domain TRPS without cavity loss".into()));
    }
    for (p, h) in blocks.iter().enumerate() {
        // x_m = Σ_n ρ_mn μ_n − p_g μ_m over molecular sites
        let mut x = vec![c64::new(0.0, 0.0); d];
        for m in 0..d {
            for n in 0..photon {
                x[m] += state.element(m, n, p) * mu_pr;
            }
        }
        x[0] -= c64::new(state.ground[p] * mu_pr, 0.0);
        let rhs = |v: &[c64]| -> Vec<c64> {
            (0..d)
                .map(|m| {
                    let hv: c64 = (0..d).map(|n| h[(m, n)] * v[n]).sum();
                    let mut out = c64::new(0.0, -cm_to_rad_ps(1.0)) * hv;
                    if m == photon {
                        out -= v[m] * half_loss;
                    }
                    out
                })
                .collect()
        };
        let norm0 = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let mut s = vec![x[0] * mu_lo];
        let mut t = 0.0;
        if norm0 > 0.0 {
            loop {
                let k1 = rhs(&x);
                let a: Vec<c64> = (0..d).map(|i| x[i] + k1[i] * (0.5 * dt)).collect();
                let k2 = rhs(&a);
                let b: Vec<c64> = (0..d).map(|i| x[i] + k2[i] * (0.5 * dt)).collect();
                let k3 = rhs(&b);
                let c: Vec<c64> = (0..d).map(|i| x[i] + k3[i] * dt).collect();
                let k4 = rhs(&c);
                for i in 0..d {
                    x[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
                }
                t += dt;
                s.push(x[0] * mu_lo);
                let norm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                if norm < DECAY_CUTOFF * norm0 {
                    break;
                }
                if t > MAX_WINDOW {
                    return Err(Error::Unsupported(
                        "time-domain TRPS: coherence does not decay within the window".into(),
                    ));
                }
            }
        }
        series.push(s);
    }
    let len = series.iter().map(Vec::len).max().unwrap_or(1);
    let mut total = vec![c64::new(0.0, 0.0); len];
    for s in series {
        for (k, v) in s.into_iter().enumerate() {
            total[k] += v;
        }
    }
    Ok((total, dt))
}

/// Independent TRPS for a single molecule with frozen solvent.
///
/// The emitted field is transformed with the trapezoid rule and weighted by
/// the lo/probe envelopes evaluated at the emission frequency.
pub fn timedomain_trps_oracle(
    params: &SystemParams,
    state: &DensityState,
    probe: &Pulse,
    lo: &Pulse,
    omega: &[f64],
) -> Result<SpectrumGrid> {
    if params.n() != 1 || state.n_molecules() != 1 {
        return Err(Error::Unsupported(format!(
            "time-domain TRPS oracle for N = {}",
            params.n()
        )));
    }
    if params.molecule(0).solvent_rate != 0.0 {
        return Err(Error::Unsupported(
            "time-domain TRPS oracle with solvent jumps".into(),
        ));
    }
    if omega.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let (s, dt) = emission(params, state, probe, lo)?;
    let wc = params.cavity().frequency;
    let last = s.len() - 1;
    let values = omega
        .iter()
        .map(|&w| {
            let rot = c64::new(0.0, cm_to_rad_ps(w) * dt).exp();
            let mut phase = c64::new(1.0, 0.0);
            let mut acc = c64::new(0.0, 0.0);
            for (k, v) in s.iter().enumerate() {
                let weight = if k == 0 || k == last { 0.5 } else { 1.0 };
                acc += v * phase * weight;
                phase *= rot;
            }
            let f = acc * dt;
            cm_to_rad_ps(1.0) * f.re * lo.envelope(w, wc) * probe.envelope(w, wc)
        })
        .collect();
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

/// Half width at half maximum of the peak nearest `center`, by linear interpolation.
pub fn half_width_at_half_max(grid: &SpectrumGrid, center: f64) -> Option<f64> {
    let (x, y) = (grid.omega(), &grid.values);
    let k = x
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - center).abs().total_cmp(&(b.1 - center).abs()))?
        .0;
    // climb to the local maximum
    let mut k = k;
    while k + 1 < y.len() && y[k + 1] > y[k] {
        k += 1;
    }
    while k > 0 && y[k - 1] > y[k] {
        k -= 1;
    }
    let half = 0.5 * y[k];
    let mut r = k;
    while r + 1 < y.len() && y[r] > half {
        r += 1;
    }
    let mut l = k;
    while l > 0 && y[l] > half {
        l -= 1;
    }
    if y[r] > half || y[l] > half {
        return None;
    }
    let right = x[r - 1] + (half - y[r - 1]) / (y[r] - y[r - 1]) * (x[r] - x[r - 1]);
    let left = x[l] + (half - y[l]) / (y[l + 1] - y[l]) * (x[l + 1] - x[l]);
    Some(0.5 * (right - left))
}
