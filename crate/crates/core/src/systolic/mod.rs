//! Cycle-level model of the hardware core: a linear array of processing
//! elements computing the distance matrix by anti-diagonals, followed by the
//! occurrence-tracking unit, plus timing and resource models.

pub mod pe;
pub mod resources;
pub mod sim;
pub mod timing;

pub use pe::{l_comb, ProcessingElement};
pub use resources::{le_estimate, le_model, LeEstimate, LeModel};
pub use sim::{ram_word, simulate_core, CoreConfig, CycleRecord, CycleTrace, SimReport};
pub use timing::{exec_time_model, fit_measurements, step_search, HwMeasurement, ProportionalFit};
