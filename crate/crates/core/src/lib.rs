pub mod algebra;
pub mod error;
pub mod lattice;
pub mod operators;
pub mod wire;
pub mod functionals;
pub mod recurrence;
pub mod families;
pub mod structure;
pub mod identities;
pub mod harness;

/// Exact rational scalar used throughout the front end.
pub type Scalar = num_rational::BigRational;
pub type DensePoly = algebra::Poly<Scalar>;
pub type LaurentPoly = algebra::Laurent<Scalar>;
pub type Lattice = lattice::LatticeSpec<Scalar>;
pub type Functional = functionals::MomentFunctional<Scalar>;
pub type Recurrence = recurrence::RecurrenceData<Scalar>;
