//! The relational spin toy model: textbook baseline, magnet dynamics, the
//! closed-form relational state and the finite exact pipeline.

mod config;
mod envelope;
mod exact;
mod magnet;
mod orthodox;
mod relational;

pub use config::{uniform_theta_grid, ClockReadout, GyroscopeMode, ToyModelConfig};
pub use envelope::{decoherence_envelope, EnvelopePoint, Smearing, TimeDistribution};
pub use exact::{exact_demo, exact_physical_state, exact_reduced_state, ExactComparison, ExactDemoConfig};
pub use magnet::{
    correction_amplitude, correction_amplitude_closed_form, log_log_slope, magnet_dynamics_closed_form,
    magnet_dynamics_exact, magnet_dynamics_state, magnet_gap, x_basis_state,
};
pub use orthodox::{
    orthodox_amplitudes, orthodox_down_symmetric, orthodox_measurement_joint, parallel_probability,
    parallel_probability_closed_form, system_gyroscope_state,
};
pub use relational::{
    fig1a_distribution, fig1b_curve, reading_angle, relational_state_scg, snap_reading, RelationalBlock,
    RelationalSpectrumTable, RelationalState, SpectrumRow, MAX_CLOCK, NULL_READING,
};
