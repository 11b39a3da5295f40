//! Differential forms, their parity decomposition, and the integral
//! identities linking solutions of the equation.

mod checks;
mod field;
mod form;

pub use checks::{
    check_commutativity, check_composite, check_corollary, check_orthogonality, corollary_closed_form,
    forced_cutoff_integral, term_screen, IdentityId, IdentityReport, IdentityTolerances, Target,
};
pub use field::{
    apply_form, finite_difference, fornberg_weights, partial_derivative, FnField, RadialField, ScalarField,
    MAX_FD_ORDER,
};
pub use form::{DifferentialForm, MultiIndex};
