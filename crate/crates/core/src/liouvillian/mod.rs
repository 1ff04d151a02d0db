//! Lindblad generator of the joint vibration/photon/solvent density matrix,
//! its spectral decomposition and the waiting-time Green's functions.

mod generator;
mod ground;
mod indexing;
mod sparse;
mod spectrum;

pub use generator::{
    assemble_excited_generator, assemble_full_generator, assemble_ground_generator,
    solvent_rate_matrix, GroundGenerator,
};
pub use ground::{esd_green, exp_convolution, solvent_gg, EsdGreen, GroundPropagator};
pub use indexing::SectorIndexing;
pub use sparse::SparseMatrix;
pub use spectrum::{
    propagate_excited, spectral_decompose, LiouvillianSpectrum, CONDITION_LIMIT, MAX_DENSE_DIM,
};
