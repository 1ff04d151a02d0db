//! Cavity-coupled molecular vibrations under two-state solvent disorder.
// NaN-rejecting range checks read as `!(x >= 0.0)`; index loops mirror the matrix algebra.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod configuration;
pub mod dynamics;
pub mod error;
pub mod hamiltonian;
pub mod liouvillian;
pub mod oracle;
pub mod params;
pub mod signals;
pub mod units;

pub use configuration::{enumerate_configs, SolventConfig};
pub use dynamics::{DensityState, Dynamics, InitialSelector};
pub use error::{Error, Result};
pub use hamiltonian::{BlockEigensystem, StateLabel};
pub use params::{Cavity, Molecule, SystemParams};
