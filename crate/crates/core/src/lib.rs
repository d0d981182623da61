//! Numerical kernels for two-qubit quantum correlations in a graphene
//! pseudo-spin/valley model.
//!
//! The crate is organized in four layers:
//!
//! - [`cmatrix`]: dense 2x2/4x4 complex-matrix operations — Hermitian
//!   eigendecomposition, spectral functions, trace norm, tensor products,
//!   partial traces — plus validated state types.
//! - [`fano`]: Bloch-vector/correlation-matrix parametrization and its
//!   canonical diagonal form under local rotations.
//! - [`graphene`]: the effective Hamiltonian, its closed-form eigensystem,
//!   ground-state selection and Gibbs thermal states.
//! - [`measures`] and [`teleport`]: correlation measures (concurrence,
//!   Bures entanglement, trace MIN, UIN) with closed-form and brute-force
//!   oracle routes, and the teleportation channel with its averaged
//!   fidelity.
//!
//! All operations are pure functions of their inputs; values are immutable
//! after construction and safe to share across threads.

pub mod cmatrix;
pub mod error;
pub mod fano;
pub mod graphene;
pub mod measures;
pub mod quadrature;
pub mod teleport;

pub use cmatrix::{
    hermitian_eig, hermitian_function, kron, partial_trace, sqrtm_psd, trace_norm, CMatrix,
    DensityMatrix, EigenSystem, PureState, Subsystem,
};
pub use num_complex::Complex64;
pub use error::{Error, Result};
pub use fano::{canonicalize_fano, pauli_decompose, FanoForm};
pub use graphene::{
    analytic_eigensystem, analytic_modes, build_hamiltonian, ground_state, thermal_closed_elements,
    thermal_state, GrapheneParams, GroundState, GroundStateKind, ThermalClosedForm,
};
pub use measures::{
    bures_entanglement, concurrence_mixed, concurrence_pure, full_report, skew_information,
    tmin_closed, tmin_oracle, uin_closed, uin_oracle, CorrelationReport,
};
pub use teleport::{
    average_fidelity, average_fidelity_channel, bell_projectors, channel_probabilities,
    classical_threshold_check, fidelity_pure, output_closed_ab, output_numeric_ab,
    teleport_output, teleport_summary, InputState, TeleportResult,
};
