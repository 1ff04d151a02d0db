//! Closed-form heterodyne signals: time-resolved photoluminescence, the
//! rephasing 2D-IR photon echo, and large-ensemble dipole distributions.

mod dipoles;
mod grid;
mod linewidth;
mod pulse;
mod trps;
mod twodir;

pub use dipoles::{
    broaden, dipole_distribution, dipole_distribution_dense, features, Broadening,
    DipoleFeatures, LargeEnsemble, Stick, MAX_ENSEMBLE,
};
pub use grid::{frequency_axis, parameter_hash, Pathways, SpectrumGrid, SpectrumMetadata};
pub use linewidth::{eigenstate_widths, LinewidthModel};
pub use pulse::{gaussian_envelope, Pulse};
pub use trps::{trps, TrpsOptions};
pub use twodir::{twodir, EchoPulses, InitialPopulation, TwoDimOptions};
