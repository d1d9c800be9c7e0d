//! Frequency-domain passivity analysis: the sampled-data sufficient
//! condition and its closed forms, hybrid/scattering matrices, wave
//! variables, and auxiliary gain conditions.

mod gains;
mod passivity;
mod scattering;
mod wave;

pub use gains::{
    check_gain_conditions, virtual_wall_bound, GainDiagnostic, DISSIPATION_MATCH_TOLERANCE,
};
pub use passivity::{
    closed_form_bound, passivity_margin_sweep, passivity_rhs, FrequencyGrid, PassivityReport,
    DEFAULT_GRID_POINTS, DEFAULT_OMEGA_MIN, DISCREPANCY_TOLERANCE, SINGULARITY_THRESHOLD,
};
pub use scattering::{
    hybrid_from_parts, hybrid_matrix, identity, mat_add, mat_det, mat_inv, mat_mul, mat_sub,
    max_singular_value_2x2, scattering_matrix, scattering_sweep, scattering_sweep_with,
    CouplingDomain, Mat2, ScatterInputs, ScatterSweep, ScatteringSample, SIGMA_TOLERANCE,
};
pub use wave::{wave_transform, wave_transform_port, Port, WavePair, WaveVariables};
