use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::{BigRat, IntPoly, PolyError, RatPoly};

/// Sturm chain `f, f', -rem(f, f'), ...` over the rationals.
pub fn sturm_chain(f: &IntPoly) -> Vec<RatPoly> {
    let mut chain = vec![f.to_rat()];
    let d = f.to_rat().derivative();
    if d.is_zero() {
        return chain;
    }
    chain.push(d);
    loop {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.neg());
    }
    chain
}

fn sign_changes(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = None;
    let mut changes = 0;
    for s in signs.filter(|s| *s != Ordering::Equal) {
        if last.is_some_and(|l| l != s) {
            changes += 1;
        }
        last = Some(s);
    }
    changes
}

fn sign_at_infinity(p: &RatPoly, positive: bool) -> Ordering {
    let lc = p.leading_coeff().expect("chain members are nonzero");
    let s = if lc.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    };
    let odd = p.degree().unwrap() % 2 == 1;
    if !positive && odd {
        s.reverse()
    } else {
        s
    }
}

/// Number of sign variations of the chain at the rational point `x`.
pub fn variations_at(chain: &[RatPoly], x: &BigRat) -> usize {
    sign_changes(chain.iter().map(|p| p.eval(x).cmp(&BigRat::zero())))
}

/// Number of distinct real roots of a squarefree polynomial.
pub fn count_real_roots(f: &IntPoly) -> Result<usize, PolyError> {
    let d = f.degree().ok_or(PolyError::ZeroPolynomial)?;
    if d == 0 {
        return Err(PolyError::DegreeTooSmall {
            required: 1,
            actual: 0,
        });
    }
    let chain = sturm_chain(f);
    if chain.last().and_then(RatPoly::degree) != Some(0) {
        return Err(PolyError::NotSquarefree);
    }
    let at_minus = sign_changes(chain.iter().map(|p| sign_at_infinity(p, false)));
    let at_plus = sign_changes(chain.iter().map(|p| sign_at_infinity(p, true)));
    Ok(at_minus - at_plus)
}
