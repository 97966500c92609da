//! Exact computations for the equivariant intersection pairing on the homology of the
//! universal abelian cover of a closed surface.
//!
//! * [`groupring`]: the group ring ℚ[Z^{2g}].
//! * [`surfacegroup`]: reduced words, homology classes, commutator projection, Fox derivatives.
//! * [`reidemeister`]: the closed-form pairing, a fat-graph intersection oracle, and the
//!   commutator-symbol rewriting algebra.
//! * [`xcalculus`]: the X(h,x,y) relation calculus with its reductions and projections.
//! * [`symkernel`]: ∧²H, the symplectic contraction and its kernel.
//! * [`suites`]: seeded verification suites shared by the CLI and the acceptance tests.
//!
//! All arithmetic is exact. Generic code is written against [`scalar::Scalar`]; the aliases
//! below fix the rational instantiation used throughout.

pub mod error;
pub mod groupring;
pub mod lattice;
pub mod linalg;
pub mod reidemeister;
pub mod sample;
pub mod scalar;
pub mod suites;
pub mod surfacegroup;
pub mod symkernel;
pub mod xcalculus;

pub use error::{Error, Result};
pub use lattice::LatticeVector;
pub use surfacegroup::{Letter, Word};

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;
/// ℚ[H_Z] with rational coefficients.
pub type GroupRing = groupring::GroupRingElem<Rational>;
/// ℚ[H_Z] reduced mod p.
pub type GroupRingFp = groupring::GroupRingElem<scalar::Fp>;

/// The rational `n / d`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
