use super::{IntPoly, PolyError};
use crate::numtheory::{is_prime, powmod, prime_factors_small};

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Dense polynomial over the prime field `F_modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPoly {
    modulus: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    /// Builds a polynomial, reducing every coefficient into `[0, modulus)`.
    pub fn new(modulus: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % modulus).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { modulus, coeffs }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn x(modulus: u64) -> Self {
        Self::new(modulus, vec![0, 1])
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.modulus;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mulmod(acc, x, p) + c) % p)
    }

    pub fn derivative(&self) -> Self {
        let p = self.modulus;
        Self::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mulmod(c, i as u64 % p, p))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lc) => {
                let inv = invmod(lc, self.modulus);
                Self::new(
                    self.modulus,
                    self.coeffs
                        .iter()
                        .map(|&c| mulmod(c, inv, self.modulus))
                        .collect(),
                )
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            p,
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).copied().unwrap_or(0);
                    let b = other.coeffs.get(i).copied().unwrap_or(0);
                    (a + p - b) % p
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(self.modulus, vec![]);
        }
        let p = self.modulus;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(a, b, p)) % p;
            }
        }
        Self::new(p, out)
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        let dd = divisor.degree().expect("division by zero polynomial");
        let p = self.modulus;
        let inv = invmod(*divisor.coeffs.last().unwrap(), p);
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let top = r.len() - 1;
            let q = mulmod(r[top], inv, p);
            if q != 0 {
                for (j, &c) in divisor.coeffs.iter().enumerate() {
                    let k = top - dd + j;
                    r[k] = (r[k] + p - mulmod(q, c, p)) % p;
                }
            }
            r.pop();
        }
        Self::new(p, r)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^exp mod modulus_poly` by square-and-multiply.
    pub fn pow_mod(&self, mut exp: u64, modulus_poly: &Self) -> Self {
        let mut base = self.rem(modulus_poly);
        let mut acc = Self::new(self.modulus, vec![1]).rem(modulus_poly);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(modulus_poly);
            }
            base = base.mul(&base).rem(modulus_poly);
            exp >>= 1;
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Number of distinct roots in the prime field.
    pub fn count_distinct_roots(&self) -> usize {
        let Some(d) = self.degree() else {
            return self.modulus as usize;
        };
        if d == 0 {
            return 0;
        }
        let x = Self::x(self.modulus);
        let frob = x.pow_mod(self.modulus, self).sub(&x);
        self.gcd(&frob).degree().unwrap_or(d)
    }
}

/// Distinct roots of `f` in `F_p`, via `deg gcd(x^p - x, f)`.
pub fn count_roots_mod_p(f: &IntPoly, p: u64) -> Result<usize, PolyError> {
    if !is_prime(p) {
        return Err(PolyError::BadModulus(p));
    }
    let fp = f.reduce_mod(p);
    if fp.is_zero() {
        return Err(PolyError::VanishesModP(p));
    }
    Ok(fp.count_distinct_roots())
}

/// Rabin's irreducibility test over `F_ell`.
pub fn is_irreducible_mod_ell(f: &ModPoly) -> Result<bool, PolyError> {
    let ell = f.modulus();
    if !is_prime(ell) {
        return Err(PolyError::BadModulus(ell));
    }
    let d = f.degree().ok_or(PolyError::ZeroPolynomial)?;
    if d == 0 {
        return Err(PolyError::DegreeTooSmall {
            required: 1,
            actual: 0,
        });
    }
    if d == 1 {
        return Ok(true);
    }
    let f = f.monic();
    let x = ModPoly::x(ell);
    // frob[k] = x^(ell^k) mod f
    let mut frob = vec![x.rem(&f)];
    for k in 1..=d {
        let next = frob[k - 1].pow_mod(ell, &f);
        frob.push(next);
    }
    if !frob[d].sub(&x).rem(&f).is_zero() {
        return Ok(false);
    }
    let (qs, rest) = prime_factors_small(d as u64);
    debug_assert_eq!(rest, 1);
    for (q, _) in qs {
        let k = d / q as usize;
        if f.gcd(&frob[k].sub(&x)).degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_roots(f: &IntPoly, p: u64) -> usize {
        (0..p).filter(|&x| f.eval_mod(x, p) == 0).count()
    }

    /// All monic polynomials of degree `deg` over F_ell.
    fn monics(ell: u64, deg: usize) -> Vec<ModPoly> {
        let total = ell.pow(deg as u32);
        (0..total)
            .map(|mut idx| {
                let mut c = Vec::with_capacity(deg + 1);
                for _ in 0..deg {
                    c.push(idx % ell);
                    idx /= ell;
                }
                c.push(1);
                ModPoly::new(ell, c)
            })
            .collect()
    }

    fn brute_irreducible(f: &ModPoly) -> bool {
        let d = f.degree().unwrap();
        (1..=d / 2).all(|k| monics(f.modulus(), k).iter().all(|g| !f.rem(g).is_zero()))
    }

    #[test]
    fn root_count_examples() {
        let f = IntPoly::from_i64s(&[1, 0, 1]);
        assert_eq!(brute_roots(&f, 5), 2);
        assert_eq!(count_roots_mod_p(&f, 5).unwrap(), 2);
        assert_eq!(brute_roots(&f, 7), 0);
        assert_eq!(count_roots_mod_p(&f, 7).unwrap(), 0);
        for p in [2, 3, 101] {
            assert_eq!(
                count_roots_mod_p(&IntPoly::from_i64s(&[0, 1]), p).unwrap(),
                1
            );
        }
    }

    #[test]
    fn root_count_errors() {
        let f = IntPoly::from_i64s(&[3, 0, 3]);
        assert_eq!(count_roots_mod_p(&f, 3), Err(PolyError::VanishesModP(3)));
        assert_eq!(count_roots_mod_p(&f, 9), Err(PolyError::BadModulus(9)));
    }

    #[test]
    fn rabin_examples() {
        let f = ModPoly::new(2, vec![1, 1, 1]);
        assert!(brute_irreducible(&f));
        assert!(is_irreducible_mod_ell(&f).unwrap());
        let g = ModPoly::new(5, vec![1, 0, 1]);
        assert!(!brute_irreducible(&g));
        assert!(!is_irreducible_mod_ell(&g).unwrap());
        assert!(is_irreducible_mod_ell(&ModPoly::new(7, vec![3, 4])).unwrap());
        assert_eq!(
            is_irreducible_mod_ell(&ModPoly::new(4, vec![1, 1])),
            Err(PolyError::BadModulus(4))
        );
        assert_eq!(
            is_irreducible_mod_ell(&ModPoly::new(5, vec![])),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn rabin_matches_trial_division_exhaustively() {
        for ell in [2u64, 3, 5, 7] {
            for deg in 1..=4usize {
                if ell == 7 && deg == 4 {
                    // 2401 candidates; sampled below by proptest instead.
                    continue;
                }
                for f in monics(ell, deg) {
                    assert_eq!(
                        is_irreducible_mod_ell(&f).unwrap(),
                        brute_irreducible(&f),
                        "{f:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn squarefree_mod_p() {
        assert!(!ModPoly::new(3, vec![1, 2, 1]).is_squarefree());
        assert!(ModPoly::new(3, vec![1, 0, 1]).is_squarefree());
    }

    fn small_prime() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![
            2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
            83, 89, 97,
        ])
    }

    proptest! {
        #[test]
        fn frobenius_root_count_matches_brute_force(
            c in prop::collection::vec(-50i64..=50, 1..=7),
            p in small_prime(),
        ) {
            let f = IntPoly::from_i64s(&c);
            prop_assume!(!f.reduce_mod(p).is_zero());
            prop_assert_eq!(count_roots_mod_p(&f, p).unwrap(), brute_roots(&f, p));
        }

        #[test]
        fn rabin_matches_trial_division_deg4_mod7(c in prop::collection::vec(0u64..7, 4)) {
            let mut c = c;
            c.push(1);
            let f = ModPoly::new(7, c);
            prop_assert_eq!(is_irreducible_mod_ell(&f).unwrap(), brute_irreducible(&f));
        }

        #[test]
        fn discriminant_detects_squarefreeness_mod_p(
            c in prop::collection::vec(-20i64..=20, 2..=6),
            p in small_prime(),
        ) {
            let f = IntPoly::from_i64s(&c);
            prop_assume!(f.degree().unwrap_or(0) >= 1);
            prop_assume!(f.leading_coeff().is_some_and(|lc| (lc % p as i64) != 0.into()));
            let disc = crate::exactpoly::discriminant(&f).unwrap().to_integer();
            let disc_zero = (disc % p as i64) == 0.into();
            prop_assert_eq!(disc_zero, !f.reduce_mod(p).is_squarefree());
        }
    }
}
