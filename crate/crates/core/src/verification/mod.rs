//! Manufactured solutions, error norms, convergence and theta studies, and the
//! energy functional with its decay fit.

pub mod consistency;
pub mod energy;
pub mod manufactured;
pub mod norms;
pub mod study;

pub use consistency::{weak_strong_residual, ClampedTrig, ConsistencyMode};
pub use energy::{decay_fit, discrete_velocity, energy, energy_series, time_to_level, DecayFit};
pub use manufactured::{
    manufactured_load, manufactured_source, CaseId, Derivative, ManufacturedCase, BOX_HI, BOX_LO,
};
pub use norms::{error_norms, spatial_errors, ErrorNorms, ErrorReport, StepError};
pub use study::{
    convergence_study, theta_sweep, ConvergenceRow, ConvergenceTable, Experiment, Simulation,
    StudyMode, SweepCell,
};
