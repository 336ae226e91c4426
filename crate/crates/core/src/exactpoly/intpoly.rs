use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{BigRat, PolyError, RatPoly};

/// Dense polynomial with integer coefficients, `coeffs[i]` multiplying `x^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::serde_util::bigint_vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        crate::serde_util::bigint_vec::deserialize(d).map(Self::new)
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `x - root`.
    pub fn linear_root(root: i64) -> Self {
        Self::from_i64s(&[-root, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// gcd of the coefficients (nonnegative); zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading_coeff().is_some_and(Signed::is_negative) {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rat(&self, x: &BigRat) -> BigRat {
        self.coeffs.iter().rev().fold(BigRat::zero(), |acc, c| {
            acc * x + BigRat::from_integer(c.clone())
        })
    }

    /// Value at `x` reduced into `[0, p)`.
    pub fn eval_mod(&self, x: u64, p: u64) -> u64 {
        let p_big = BigInt::from(p);
        self.coeffs.iter().rev().fold(0u64, |acc, c| {
            let c = c.mod_floor(&p_big);
            let c = u64::try_from(c).expect("residue fits in u64");
            ((acc as u128 * x as u128 + c as u128) % p as u128) as u64
        })
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRat::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`, computed
    /// without leaving the integers.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo-division by zero polynomial");
        let Some(da) = self.degree() else {
            return Self::zero();
        };
        if da < db {
            return self.clone();
        }
        let lb = b.leading_coeff().unwrap().clone();
        let mut r = self.coeffs.clone();
        let mut steps = da - db + 1;
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[dr - db + j] -= &lr * bc;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            steps -= 1;
        }
        // Bring the multiplier up to the full lc(b)^(da-db+1).
        let fix = num_traits::pow(lb, steps);
        Self::new(r.into_iter().map(|c| c * &fix).collect())
    }

    /// Reduction modulo `p` into a [`super::ModPoly`].
    pub fn reduce_mod(&self, p: u64) -> super::ModPoly {
        let p_big = BigInt::from(p);
        super::ModPoly::new(
            p,
            self.coeffs
                .iter()
                .map(|c| u64::try_from(c.mod_floor(&p_big)).expect("residue fits in u64"))
                .collect(),
        )
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !abs.is_one() || i == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// True iff `gcd(f, f')` is a constant.
pub fn is_squarefree(f: &IntPoly) -> Result<bool, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if f.degree() == Some(0) {
        return Ok(true);
    }
    let g = super::poly_gcd(&f.to_rat(), &f.derivative().to_rat());
    Ok(g.degree() == Some(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_trailing_zeros() {
        let p = IntPoly::from_i64s(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(IntPoly::from_i64s(&[0, 0]).is_zero());
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(&IntPoly::from_i64s(&[1, 0, 0, 0, 0, 1])).unwrap());
        assert!(!is_squarefree(&IntPoly::from_i64s(&[1, -2, 1])).unwrap());
        assert!(is_squarefree(&IntPoly::from_i64s(&[0, 1])).unwrap());
        assert_eq!(
            is_squarefree(&IntPoly::zero()),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn pseudo_remainder_matches_rational_remainder() {
        let a = IntPoly::from_i64s(&[3, 0, 2, 5]);
        let b = IntPoly::from_i64s(&[1, 3]);
        let prem = a.pseudo_rem(&b);
        // 3^3 * a mod (3x+1) = 27 * a(-1/3)
        let v = a.eval_rat(&BigRat::new(BigInt::from(-1), BigInt::from(3)));
        assert_eq!(
            BigRat::from_integer(prem.coeff(0)),
            v * BigRat::from_integer(27.into())
        );
    }

    #[test]
    fn display() {
        assert_eq!(
            IntPoly::from_i64s(&[1, 1, 0, 0, 0, 0, -1]).to_string(),
            "-x^6 + x + 1"
        );
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn eval_mod_handles_negative_coefficients() {
        let f = IntPoly::from_i64s(&[-1, 0, 1]);
        assert_eq!(f.eval_mod(0, 7), 6);
        assert_eq!(f.eval_mod(1, 7), 0);
    }
}
