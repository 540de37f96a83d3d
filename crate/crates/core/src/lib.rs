//! Verification workbench for the dual-symmetric classical solutions of the
//! free field in a 1-D cavity and their canonical quantizations.
//!
//! The crate is organized around five concerns:
//!
//! * [`cavity`] -- geometry, physical constants, per-mode constants;
//! * [`classical`] -- the two closed-form partial solutions, duality
//!   rotations, Hamiltonians, and finite-difference curl residuals;
//! * [`fock`] -- truncated Fock-space matrices, states, tensor products;
//! * [`quantize`] -- quadrature/ladder operators for the time and space
//!   quantization schemes, assembled field operators, G(z), and
//!   commutation-relation reports;
//! * [`local`] -- general-form fields, the energy density W, and the
//!   space-and-time-indexed ladder harness.
//!
//! Everything is a pure function over immutable values; all types are safe
//! to share across threads.

pub mod cavity;
pub mod classical;
pub mod error;
pub mod fock;
pub mod local;
pub mod profiles;
pub mod quadrature;
pub mod quantize;
pub mod report;

pub use cavity::{make_mode, make_mode_with_mass, mode_bank, CavityConfig, ModeSpec, UnitSystem};
pub use classical::{
    combine_complex, duality_rotate, f_alpha, f_alpha_integrand, fields_sol1, fields_sol2,
    hamiltonian_sol1, hamiltonian_sol2, maxwell_residual, verify_oscillator_ode, FieldFrame,
    FrameKind, HamiltonianValue, MaxwellResidual, TimeAmplitude,
};
pub use error::{CoreError, Result};
pub use fock::{
    coherent_state, coherent_truncation_adequate, expectation, partial_expectation, tensor_state,
    FockSpace, HilbertSpace, OperatorMatrix, StateVector,
};
pub use local::{
    energy_density_w, general_fields, local_commutator_check, local_ladder, DensityReport,
    GeneralFieldSpec, GeneralMode, LocalCommutatorReport, LocalLadderPair,
};
pub use profiles::SpatialProfile;
pub use quantize::{
    ccr_report, field_ops_combined, field_ops_sol1, field_ops_sol2, field_ops_space,
    fields_space_scheme, g_identity_residual, g_number_form, g_of_z_classical, g_operator,
    hamiltonian_operator, heisenberg_evolve, ladder_from_quadratures, quadratures_from_ladder,
    CcrEntry, CcrReport, FieldOperatorFrame, FieldOperatorKind, GSplit, LadderKind, QuadraturePair,
    Scheme, SchemeKind,
};
pub use report::{CheckStatus, ResidualEntry, VerificationReport};
