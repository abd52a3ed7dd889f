//! Symmetry algebras, noncommutative integration and special-function
//! solutions of the Klein-Gordon equation in external electromagnetic fields
//! on three-dimensional de Sitter space.
//!
//! Modules, bottom-up:
//! - [`jet`]: truncated Taylor jets used for every derivative in the crate.
//! - [`lie`]: so(1,3), the subalgebra catalog, cocycles, index, integrability.
//! - [`geometry`]: rectifying charts, induced metrics, pushforwards, the
//!   matrix-exponential rectification construction.
//! - [`fields`]: invariant 2-forms, potentials, the functions chi_A, cocycles.
//! - [`operators`]: first/second order operators, commutators, the
//!   Klein-Gordon operator and symmetry checks.
//! - [`integrate`]: lambda-representations, ansaetze, reduced ODEs and their
//!   special-function solution bases.
//! - [`specfun`]: gamma, confluent and Gauss hypergeometric functions,
//!   Whittaker, Bessel and Legendre functions, and a DOPRI5 integrator.

#![allow(clippy::needless_range_loop, clippy::type_complexity, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fields;
pub mod geometry;
pub mod integrate;
pub mod jet;
pub mod lie;
pub mod operators;
pub mod report;
pub mod specfun;

pub use error::{Error, Result};
pub use jet::Jet;
pub use lie::{Case, CaseId};
pub use num_complex::Complex64;
