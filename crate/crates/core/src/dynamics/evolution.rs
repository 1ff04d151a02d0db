use num_complex::Complex64 as c64;

use super::state::DensityState;
use crate::configuration::SolventConfig;
use crate::error::{Error, Result};
use crate::hamiltonian::{block_eigensystems, BlockEigensystem};
use crate::liouvillian::{
    assemble_excited_generator, spectral_decompose, GroundPropagator, LiouvillianSpectrum,
};
use crate::params::SystemParams;

/// Initial condition of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialSelector {
    LowerPolariton,
    UpperPolariton,
    /// k-th dark state (0-based, ascending frequency).
    Dark(usize),
    /// Equal mixture of all dark states.
    DarkUniform,
    /// Site i (0-based; i = N is the photon).
    Site(usize),
    /// Ground population of the block's configuration.
    Ground,
}

fn pure_state(eig: &BlockEigensystem, amplitudes: &[c64], weight: f64, state: &mut DensityState) {
    let cfg = eig.config.index();
    for (m, am) in amplitudes.iter().enumerate() {
        for (n, an) in amplitudes.iter().enumerate() {
            let current = state.element(m, n, cfg);
            state.set_element(m, n, cfg, current + am * an.conj() * weight);
        }
    }
}

/// ρ₀ = |ψ_a⟩⟨ψ_a| of configuration `eig.config`, expanded in the site basis.
pub fn prepare_initial(selector: InitialSelector, eig: &BlockEigensystem) -> Result<DensityState> {
    let n = eig.n_molecules();
    let mut state = DensityState::zeros(n);
    match selector {
        InitialSelector::LowerPolariton => {
            pure_state(eig, &eig.vector(eig.lower_polariton()), 1.0, &mut state)
        }
        InitialSelector::UpperPolariton => {
            pure_state(eig, &eig.vector(eig.upper_polariton()), 1.0, &mut state)
        }
        InitialSelector::Dark(k) => {
            let dark = eig.dark_states();
            let &a = dark.get(k).ok_or(Error::IndexOutOfRange {
                what: "dark state",
                index: k,
                limit: dark.len(),
            })?;
            pure_state(eig, &eig.vector(a), 1.0, &mut state)
        }
        InitialSelector::DarkUniform => {
            let dark = eig.dark_states();
            if dark.is_empty() {
                return Err(Error::IndexOutOfRange {
                    what: "dark state",
                    index: 0,
                    limit: 0,
                });
            }
            let w = 1.0 / dark.len() as f64;
            for a in dark {
                pure_state(eig, &eig.vector(a), w, &mut state);
            }
        }
        InitialSelector::Site(i) => {
            if i > n {
                return Err(Error::IndexOutOfRange {
                    what: "site",
                    index: i,
                    limit: n + 1,
                });
            }
            state.set_element(i, i, eig.config.index(), c64::new(1.0, 0.0));
        }
        InitialSelector::Ground => {
            state.ground[eig.config.index()] = 1.0;
        }
    }
    Ok(state)
}

/// Propagates both sectors: the excited sector through the Liouvillian
/// eigenmodes, the ground sector through its exact propagator plus the
/// analytically integrated photon-leakage feed.
pub fn evolve(
    state: &DensityState,
    times: &[f64],
    spec: &LiouvillianSpectrum,
    ground: &GroundPropagator,
    photon_decay_rate: f64,
) -> Result<Vec<DensityState>> {
    spec.require_well_conditioned()?;
    let trace0 = state.trace();
    let traj = evolve_unchecked(state, times, spec, ground, photon_decay_rate)?;
    for snapshot in &traj {
        snapshot.check_invariants(trace0, 1e-8)?;
    }
    Ok(traj)
}

/// [`evolve`] without the conditioning gate and invariant checks.
pub fn evolve_unchecked(
    state: &DensityState,
    times: &[f64],
    spec: &LiouvillianSpectrum,
    ground: &GroundPropagator,
    photon_decay_rate: f64,
) -> Result<Vec<DensityState>> {
    if times.iter().any(|&t| !(t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::UnorderedTimes);
    }
    let n = state.n_molecules();
    let coefficients = spec.modal_coefficients(&state.excited)?;
    times
        .iter()
        .map(|&t| {
            let excited = spec.reconstruct(&coefficients, t);
            let mut g = ground.apply(t, &state.ground);
            let leak = ground.leakage_matrix(spec, photon_decay_rate, t);
            for (r, gr) in g.iter_mut().enumerate() {
                let fed: c64 = (0..spec.dim()).map(|u| leak[(r, u)] * coefficients[u]).sum();
                *gr += fed.re;
            }
            DensityState::from_parts(n, excited, g, state.time + t)
        })
        .collect()
}

/// Everything needed to run trajectories for one parameter set.
#[derive(Clone, Debug)]
pub struct Dynamics {
    pub params: SystemParams,
    pub eigensystems: Vec<BlockEigensystem>,
    pub spectrum: LiouvillianSpectrum,
    pub ground: GroundPropagator,
}

impl Dynamics {
    pub fn new(params: &SystemParams) -> Result<Self> {
        let eigensystems = block_eigensystems(params)?;
        let spectrum = spectral_decompose(&assemble_excited_generator(params))?;
        Ok(Dynamics {
            params: params.clone(),
            eigensystems,
            spectrum,
            ground: GroundPropagator::new(params),
        })
    }

    pub fn prepare(&self, selector: InitialSelector, config: SolventConfig) -> Result<DensityState> {
        let eig = self.eigensystems.get(config.index()).ok_or(Error::ConfigOutOfRange {
            index: config.index(),
            n: self.params.n(),
            bound: self.eigensystems.len(),
        })?;
        prepare_initial(selector, eig)
    }

    pub fn evolve(&self, state: &DensityState, times: &[f64]) -> Result<Vec<DensityState>> {
        evolve(
            state,
            times,
            &self.spectrum,
            &self.ground,
            self.params.photon_decay_rate(),
        )
    }

    pub fn evolve_to(&self, state: &DensityState, t: f64) -> Result<DensityState> {
        Ok(self.evolve(state, &[t])?.remove(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{intermolecule_coherence, polariton_populations, site_populations};

    #[test]
    fn lower_polariton_in_resonant_block() {
        let d = Dynamics::new(&SystemParams::wco6_trimer()).unwrap();
        let s = d
            .prepare(InitialSelector::LowerPolariton, SolventConfig::ground(3).unwrap())
            .unwrap();
        let pops = site_populations(&s);
        for p in &pops[..3] {
            assert!((p - 1.0 / 6.0).abs() < 1e-12);
        }
        assert!((pops[3] - 0.5).abs() < 1e-12);
        assert!((intermolecule_coherence(&s, 0, 1).unwrap() - 1.0 / 6.0).abs() < 1e-12);
        let pol = polariton_populations(&s, &d.eigensystems).unwrap();
        assert!((pol.lower - 1.0).abs() < 1e-12 && pol.upper.abs() < 1e-12 && pol.dark.abs() < 1e-12);
        assert!((s.trace() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trajectory_conserves_trace_and_starts_at_input() {
        let d = Dynamics::new(&SystemParams::wco6_trimer()).unwrap();
        let s = d
            .prepare(InitialSelector::LowerPolariton, SolventConfig::ground(3).unwrap())
            .unwrap();
        let traj = d.evolve(&s, &[0.0, 10.0, 50.0, 100.0, 1000.0]).unwrap();
        assert!(traj[0].max_deviation(&s) < 1e-10);
        for snap in &traj {
            assert!((snap.trace() - 1.0).abs() < 1e-8, "{}", snap.trace());
        }
        assert!(traj.windows(2).all(|w| w[1].ground_trace() > w[0].ground_trace() - 1e-12));
        assert!(traj[4].ground_trace() > 0.5);
    }

    #[test]
    fn selectors_validate_indices() {
        let d = Dynamics::new(&SystemParams::wco6_trimer()).unwrap();
        let g = SolventConfig::ground(3).unwrap();
        assert!(d.prepare(InitialSelector::Dark(2), g).is_err());
        assert!(d.prepare(InitialSelector::Site(4), g).is_err());
        let mix = d.prepare(InitialSelector::DarkUniform, g).unwrap();
        assert!((mix.trace() - 1.0).abs() < 1e-12);
        let ground = d.prepare(InitialSelector::Ground, g).unwrap();
        assert_eq!(ground.ground[0], 1.0);
    }

    #[test]
    fn negative_or_unordered_times_rejected() {
        let d = Dynamics::new(&SystemParams::wco6_trimer()).unwrap();
        let s = d
            .prepare(InitialSelector::UpperPolariton, SolventConfig::ground(3).unwrap())
            .unwrap();
        assert!(d.evolve(&s, &[1.0, 0.5]).is_err());
        assert!(d.evolve(&s, &[-1.0]).is_err());
    }
}
