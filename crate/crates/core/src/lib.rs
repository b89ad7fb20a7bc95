//! Metric-adjusted skew information for finite-dimensional quantum systems and
//! the sum-uncertainty lower bounds built on it.
//!
//! The crate covers Wigner–Yanase–Dyson, quantum Fisher (SLD) and user-supplied
//! Morozova–Chentsov metrics, evaluated for observables, general operators,
//! Kraus channels and unitaries.
//!
//! ```
//! use skewinfo::{equatorial_state, MCFunction, Observable, pauli_x, skew_observable};
//!
//! let rho = equatorial_state(0.5, 0.0).unwrap();
//! let c = MCFunction::wyd(1.0 / 3.0).unwrap();
//! let a = Observable::new(pauli_x()).unwrap();
//! // ρ commutes with σx here
//! assert!(skew_observable(&rho, &a, &c).unwrap().value() < 1e-15);
//! ```

#![forbid(unsafe_code)]

pub mod bounds;
pub mod error;
pub mod fuzz;
pub mod matrix;
pub mod metric;
pub mod operators;
pub mod random;
pub mod scenarios;
pub mod skew;
pub mod state;

pub use bounds::{
    channel_bounds, observable_bounds, ren_obs_bound, thm1_bound, tightness_check, unitary_bounds, variance_bounds,
    variance_ren_bound, variance_thm1_bound, BoundName, BoundReport, BranchSelector, ChannelBoundOptions,
    PermutationAssignment, RenAggregation, Witness,
};
pub use error::{Error, Result};
pub use matrix::{pauli_exp, pauli_x, pauli_y, pauli_z, Axis, ComplexMatrix, C64};
pub use metric::{c_value, kernel, validate_custom_f, MCFunction, SpectralKernel};
pub use operators::{KrausChannel, Observable, UnitaryOperator};
pub use skew::{
    skew_channel, skew_observable, skew_operator, skew_unitary, sld, variance, wyd_direct, SkewEngine, SkewValue,
};
pub use state::{bloch_state, commutant, equatorial_state, EigenDecomposition, QuantumState};
