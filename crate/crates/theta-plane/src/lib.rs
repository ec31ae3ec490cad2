//! Exact and floating-point arithmetic for twisted polynomial algebras:
//! noncommutative deformations of complex affine space in which the
//! coordinates commute up to fixed unit phases. The crate keeps every element
//! in a normal form (coordinate powers in a fixed order times a phase-scalar
//! coefficient), provides the star operation and matrix algebra over the
//! coordinate ring, analyzes projector matrices, builds the unitaries that
//! trivialize them degree by degree, and computes the resulting K-theory
//! classes.
//!
//! The `exact` coefficient mode works over Gaussian rationals extended by
//! formal phase units `L[k,l]`, so identities hold on the nose; the `numeric`
//! mode fixes a deformation angle matrix and works in `f64` complex
//! arithmetic.

pub mod element;
pub mod error;
pub mod index;
pub mod k0;
pub mod matrix;
pub mod phase;
pub mod projector;
pub mod rational;
pub mod rewrite;
pub mod scalar;
pub mod scalar_matrix;
pub mod text;
pub mod theta;
pub mod trivialize;

pub use element::{AlgebraSignature, Element, Mode};
pub use error::{Error, Result};
pub use index::MultiIndex;
pub use k0::{equivalent, k0_class, K0Class};
pub use matrix::{format_matrix, parse_matrix, AlgMatrix, JetContext};
pub use phase::PhaseWord;
pub use projector::{assert_scalar_projector_poly, rigidity_scan, top_gram_check, RigidityReport};
pub use rational::GaussianRational;
pub use scalar::{Coeff, ExactScalar, NumericScalar};
pub use scalar_matrix::{diagonalize_scalar_projector, scalar_part, ScalarMatrix};
pub use text::{
    format_coeff, format_element, format_named_elements, parse_element, parse_named_elements,
};
pub use theta::{Angle, ThetaMatrix};
pub use trivialize::{make_test_projector, trivialize, Residual, TrivializationResult};
