//! Time-domain simulation of the sampled-data teleoperator, with an energy
//! monitor and tracking metrics over the resulting trace.

mod energy;
mod metrics;
mod plant;
mod runner;

pub use energy::{energy_monitor, EnergyReport, DEFAULT_ENERGY_THRESHOLD};
pub use metrics::{tracking_metrics, TrackingMetrics};
pub use plant::{advance_axis, plant_substep, AxisLoad, PlantState, Propagator};
pub use runner::{
    run_simulation, run_simulation_observed, scenario_hash, SimulationTrace, SubstepRecord,
    TraceRecord, DIVERGENCE_LIMIT,
};
