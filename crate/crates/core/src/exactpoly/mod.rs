//! Exact univariate polynomial arithmetic.
//!
//! Three dense representations are provided: [`IntPoly`] over the integers,
//! [`RatPoly`] over the rationals and [`ModPoly`] over a prime field. All
//! of them store coefficients in ascending order of degree and strip
//! trailing zeros, so the zero polynomial is the empty coefficient list.

mod intpoly;
mod irreducible;
mod modpoly;
mod ratpoly;
mod resultant;
mod sturm;

pub use intpoly::{is_squarefree, IntPoly};
pub use irreducible::{verify_irreducible_over_q, IrreducibilityVerdict};
pub use modpoly::{count_roots_mod_p, is_irreducible_mod_ell, ModPoly};
pub use ratpoly::{poly_gcd, RatPoly};
pub use resultant::{discriminant, resultant};
pub use sturm::{count_real_roots, sturm_chain, variations_at};

/// Arbitrary-precision rational; always kept in lowest terms with a
/// positive denominator.
pub type BigRat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial must have degree at least {required}, got {actual}")]
    DegreeTooSmall { required: usize, actual: usize },
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial vanishes identically modulo {0}")]
    VanishesModP(u64),
    #[error("modulus {0} is not a prime")]
    BadModulus(u64),
    #[error("leading coefficient is not invertible modulo {0}")]
    LeadingCoeffNotInvertible(u64),
}
