use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{discriminant, is_irreducible_mod_ell, BigRat, IntPoly};
use crate::numtheory::{divisors_big, first_primes, is_rational_square};

/// Outcome of the semi-decision irreducibility check over Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IrreducibilityVerdict {
    Confirmed,
    Refuted,
    Unknown,
}

/// `Some(true)` if a rational root exists, `Some(false)` if none does,
/// `None` when the coefficients could not be factored.
fn has_rational_root(f: &IntPoly) -> Option<bool> {
    let a0 = f.constant_term();
    if a0.is_zero() {
        return Some(true);
    }
    let lc = f.leading_coeff().unwrap();
    let numers = divisors_big(&a0)?;
    let denoms = divisors_big(lc)?;
    for q in &denoms {
        for p in &numers {
            for sign in [1, -1] {
                let x = BigRat::new(p * BigInt::from(sign), q.clone());
                if f.eval_rat(&x).is_zero() {
                    return Some(true);
                }
            }
        }
    }
    Some(false)
}

/// Semi-decides irreducibility over Q: rational-root and (degree 2)
/// discriminant tests refute; degree at most 2 or irreducibility modulo a
/// good prime among the first `trial_prime_budget` primes confirms.
pub fn verify_irreducible_over_q(f: &IntPoly, trial_prime_budget: usize) -> IrreducibilityVerdict {
    let f = f.primitive_part();
    let Some(d) = f.degree() else {
        return IrreducibilityVerdict::Refuted;
    };
    match d {
        0 => return IrreducibilityVerdict::Refuted,
        1 => return IrreducibilityVerdict::Confirmed,
        _ => {}
    }
    let root_test = has_rational_root(&f);
    if root_test == Some(true) {
        return IrreducibilityVerdict::Refuted;
    }
    let disc = discriminant(&f).expect("degree >= 2");
    if d == 2 {
        return if is_rational_square(&disc) {
            IrreducibilityVerdict::Refuted
        } else {
            IrreducibilityVerdict::Confirmed
        };
    }
    if disc.is_zero() {
        // Repeated factor: reducible.
        return IrreducibilityVerdict::Refuted;
    }
    let bad = f.leading_coeff().unwrap() * disc.to_integer();
    for ell in first_primes(trial_prime_budget) {
        if (&bad % BigInt::from(ell)).is_zero() {
            continue;
        }
        if is_irreducible_mod_ell(&f.reduce_mod(ell)) == Ok(true) {
            return IrreducibilityVerdict::Confirmed;
        }
    }
    IrreducibilityVerdict::Unknown
}
