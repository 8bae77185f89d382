//! Hochschild cohomology of filtered Koszul algebras through their curved Koszul duals.
//!
//! The pipeline is: a [`presentation::Presentation`] is checked for PBW confluence, its
//! quadratic dual `Λ` is computed together with the curved structure
//! ([`dual::CurvedDualTable`]), and the small complex `Λ ⊗ M` is sliced by weight,
//! cohomology-reduced and multiplied ([`complexes`], [`cup`]).
//!
//! Everything is generic over the exact [`scalar::Scalar`]; the aliases below fix the
//! two supported fields.

pub mod check;
pub mod complexes;
pub mod cup;
pub mod dual;
pub mod linalg;
pub mod presentation;
pub mod scalar;

pub use check::Check;
pub use scalar::{Field, NumberFieldElement, Scalar};

/// Rational scalars.
pub type Rational = num_rational::BigRational;

pub type RationalPresentation = presentation::Presentation<Rational>;
pub type RationalAlgebra = presentation::Algebra<Rational>;
pub type RationalDual = dual::CurvedDualTable<Rational>;

pub type NumberFieldPresentation = presentation::Presentation<NumberFieldElement>;
pub type NumberFieldAlgebra = presentation::Algebra<NumberFieldElement>;
pub type NumberFieldDual = dual::CurvedDualTable<NumberFieldElement>;
