//! Symmetry-averaging channels: the rotation twirl, the time average, and the
//! noiseless-subsystem bookkeeping that goes with them.

mod decompose;
mod oracle;
mod time;
mod twirl;

pub use decompose::{decompose_su2, decompose_tree, sequential_tree, IrrepDecomposition, Sector};
pub use oracle::rotation_twirl_oracle;
pub use time::{energy_clusters, time_average, time_average_diagonal, TimeAverage, COMMENSURABILITY_TOL, ENERGY_TOL};
pub use twirl::{
    condition_on_labels, conditional_update, embed, extract_noiseless, rotation_twirl, rotation_twirl_state, twirl,
    PhysicalSector, PhysicalState, SectorReport, SECTOR_CUTOFF,
};
