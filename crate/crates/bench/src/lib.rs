//! Shared fixtures for the criterion benches.

use polariton_core::signals::{frequency_axis, EchoPulses, Pulse};
use polariton_core::{Dynamics, InitialSelector, SolventConfig, SystemParams};

/// Three-molecule reference system.
pub fn reference() -> SystemParams {
    SystemParams::wco6_trimer()
}

pub fn reference_dynamics() -> Dynamics {
    Dynamics::new(&reference()).expect("reference system is well conditioned")
}

pub fn lower_polariton_start(d: &Dynamics) -> polariton_core::DensityState {
    d.prepare(InitialSelector::LowerPolariton, SolventConfig::ground(d.params.n()).unwrap())
        .unwrap()
}

/// Pump pair on the molecular line, probe and local oscillator 10 cm^-1 above.
pub fn echo_pulses() -> EchoPulses {
    let pump = Pulse::gaussian(1983.0, 50.0);
    let probe = Pulse::gaussian(1993.0, 50.0);
    EchoPulses {
        k1: pump.clone(),
        k2: pump,
        k3: probe.clone(),
        lo: probe,
    }
}

pub fn axis(points: usize) -> Vec<f64> {
    frequency_axis(-30.0, 30.0, points).unwrap()
}
