//! Brute-force references used to validate the spectral machinery.

mod compare;
mod rk4;
mod timedomain;

pub use compare::{compare_propagators, compare_with_spectrum, OracleReport, PROPAGATOR_TOLERANCE};
pub use rk4::{rk4_propagate, Rk4Integrator, MAX_ORACLE_MOLECULES};
pub use timedomain::{half_width_at_half_max, timedomain_trps_oracle};
