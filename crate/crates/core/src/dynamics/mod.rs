//! Initial states, trajectories and the observables extracted from them.

pub mod analysis;
mod evolution;
mod observables;
mod spatial;
mod state;
mod thermal;

pub use evolution::{evolve, evolve_unchecked, prepare_initial, Dynamics, InitialSelector};
pub use observables::{
    intermolecule_coherence, polariton_populations, site_populations, PolaritonPopulations,
    Snapshot,
};
pub use spatial::{
    default_grid, spatial_coherence_map, spatial_density, vibrational_orbital, SpatialGrid,
    OVERLAP_DISTANCE,
};
pub use state::DensityState;
pub use thermal::{stationary_distribution, thermal_config_weights};
