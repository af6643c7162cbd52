//! Two-level quantum dynamics.

pub mod analytic;
pub mod heff;
pub mod numeric;
pub mod observables;
pub mod system;

pub use analytic::{
    analytic_flat_top_amplitudes, analytic_flat_top_trajectory, analytic_momentum_spectrum,
    analytic_momentum_time, detuning, momentum_coefficients, rabi_amplitudes, FlatTopDrive,
    MomentumCoefficients,
};
pub use heff::{
    build_effective_hamiltonian, heff_eigensystem, heff_momentum_spectrum, heff_momentum_time,
    EffectiveHamiltonian, HeffEigensystem, HeffShifts, HeffSolution,
};
pub use numeric::propagate_numeric;
pub use observables::{acceleration, derivative, momentum_expectation, populations};
pub use system::{AmplitudeTrajectory, InitialState, ModelTag, TwoLevelSystem};
