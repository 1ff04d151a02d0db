use std::time::Instant;

use serde::Serialize;

use super::rk4::Rk4Integrator;
use crate::dynamics::{evolve_unchecked, DensityState};
use crate::error::Result;
use crate::liouvillian::{
    assemble_excited_generator, spectral_decompose, GroundPropagator, LiouvillianSpectrum,
};
use crate::params::SystemParams;

/// Default agreement required between propagators.
pub const PROPAGATOR_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub quantity: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Wall time in seconds.
    pub runtime: f64,
}

impl OracleReport {
    pub fn new(quantity: impl Into<String>, deviation: f64, tolerance: f64, runtime: f64) -> Self {
        OracleReport {
            quantity: quantity.into(),
            deviation,
            tolerance,
            pass: deviation <= tolerance,
            runtime,
        }
    }
}

/// Spectral propagation against RK4 on the same initial state.
pub fn compare_propagators(
    params: &SystemParams,
    rho0: &DensityState,
    times: &[f64],
) -> Result<OracleReport> {
    let spec = spectral_decompose(&assemble_excited_generator(params))?;
    compare_with_spectrum(params, &spec, rho0, times)
}

/// As [`compare_propagators`] with a caller-supplied spectrum.
pub fn compare_with_spectrum(
    params: &SystemParams,
    spec: &LiouvillianSpectrum,
    rho0: &DensityState,
    times: &[f64],
) -> Result<OracleReport> {
    let start = Instant::now();
    let ground = GroundPropagator::new(params);
    let spectral = evolve_unchecked(rho0, times, spec, &ground, params.photon_decay_rate())?;
    let rk = Rk4Integrator::new(params)?;
    let brute = rk.propagate(rho0, rk.max_dt(), times)?;
    let deviation = spectral
        .iter()
        .zip(&brute)
        .map(|(a, b)| a.max_deviation(b))
        .fold(0.0, f64::max);
    Ok(OracleReport::new(
        format!("spectral vs RK4 propagation, N = {}", params.n()),
        deviation,
        PROPAGATOR_TOLERANCE,
        start.elapsed().as_secs_f64(),
    ))
}
