//! Truncated power series with big-integer coefficients and the global and
//! local Hilbert series of a quotient descriptor.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactpoly::IntPoly;
use crate::selmerdims::QuotientDescriptor;

/// Truncation used by the weight-2 Coleman test.
pub const DEFAULT_TRUNCATION: usize = 2;
/// Largest truncation accepted from the command line.
pub const MAX_TRUNCATION: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("denominator must have constant term 1")]
    BadDenominator,
    #[error("degree {upto} exceeds the truncation {truncation}")]
    BeyondTruncation { upto: usize, truncation: usize },
}

/// `c_0 + c_1 t + ... + c_m t^m + O(t^(m+1))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    #[serde(with = "crate::serde_util::bigint_vec")]
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn one(truncation: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); truncation + 1];
        coeffs[0] = BigInt::one();
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series has at least c_0");
        Self { coeffs }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    /// Product truncated at the smaller of the two truncations.
    pub fn mul(&self, other: &Self) -> Self {
        let m = self.truncation().min(other.truncation());
        let mut out = vec![BigInt::zero(); m + 1];
        for (i, a) in self.coeffs.iter().take(m + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(m + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// `c_0 + ... + c_upto`.
    pub fn partial_sum(&self, upto: usize) -> Result<BigInt, SeriesError> {
        if upto > self.truncation() {
            return Err(SeriesError::BeyondTruncation {
                upto,
                truncation: self.truncation(),
            });
        }
        Ok(self.coeffs[..=upto].iter().sum())
    }
}

/// `(1 - t^k)^(-e)`: the coefficient of `t^(ik)` is `C(i + e - 1, i)`.
pub fn binom_neg_power(k: usize, e: u64, m: usize) -> TruncatedSeries {
    assert!(k >= 1, "k must be positive");
    let mut s = TruncatedSeries::one(m);
    if e == 0 {
        return s;
    }
    let mut c = BigInt::one();
    let mut i = 1usize;
    while i * k <= m {
        c = c * BigInt::from(i as u64 - 1 + e) / BigInt::from(i);
        s.coeffs[i * k] = c.clone();
        i += 1;
    }
    s
}

fn weighted_product(dims: impl Iterator<Item = (usize, u64)>, m: usize) -> TruncatedSeries {
    dims.fold(TruncatedSeries::one(m), |acc, (k, e)| {
        acc.mul(&binom_neg_power(k, e, m))
    })
}

fn weight_index(weight: i8) -> usize {
    usize::try_from(-(weight as i32)).expect("graded pieces have negative weight")
}

/// `HS_glob = (1 - t^2)^(-s) prod_k (1 - t^k)^(-dim H^1_f(G_Q, gr_-k))`.
pub fn hs_global(desc: &QuotientDescriptor, s: u64, m: usize) -> TruncatedSeries {
    weighted_product(
        std::iter::once((2, s)).chain(
            desc.pieces
                .iter()
                .map(|p| (weight_index(p.weight), p.dim_global)),
        ),
        m,
    )
}

/// `HS_loc = prod_k (1 - t^k)^(-dim H^1_f(G_p, gr_-k))`.
pub fn hs_local(desc: &QuotientDescriptor, m: usize) -> TruncatedSeries {
    weighted_product(
        desc.pieces
            .iter()
            .map(|p| (weight_index(p.weight), p.dim_local)),
        m,
    )
}

/// Expansion of `numer / denom` where `denom(0) = 1`.
pub fn rational_series(
    numer: &IntPoly,
    denom: &IntPoly,
    m: usize,
) -> Result<TruncatedSeries, SeriesError> {
    if !denom.constant_term().is_one() {
        return Err(SeriesError::BadDenominator);
    }
    // c_j = a_j - sum_{i=1..j} q_i c_{j-i}
    let mut c: Vec<BigInt> = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let mut v = numer.coeff(j);
        for i in 1..=j {
            let q = denom.coeff(i);
            if !q.is_zero() {
                v -= q * &c[j - i];
            }
        }
        c.push(v);
    }
    Ok(TruncatedSeries { coeffs: c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvemodel::GeometricInvariants;
    use crate::selmerdims::{build_quotient, ArithmeticInputs, QuotientKind};
    use proptest::prelude::*;

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Number of multisets of size `size` drawn from `kinds` labels, by
    /// explicit enumeration of nondecreasing sequences.
    fn multisets(kinds: u64, size: usize) -> u64 {
        fn go(kinds: u64, left: usize, min: u64) -> u64 {
            if left == 0 {
                return 1;
            }
            (min..kinds).map(|x| go(kinds, left - 1, x)).sum()
        }
        go(kinds, size, 0)
    }

    #[test]
    fn binomial_series_examples() {
        assert_eq!(
            binom_neg_power(1, 2, 2).coeffs(),
            ints(&[1, 2, 3]).as_slice()
        );
        assert_eq!(
            binom_neg_power(2, 1, 3).coeffs(),
            ints(&[1, 0, 1, 0]).as_slice()
        );
        assert_eq!(
            binom_neg_power(3, 0, 4).coeffs(),
            ints(&[1, 0, 0, 0, 0]).as_slice()
        );
        for g in 0..6u64 {
            for c in 0..6u64 {
                let s = binom_neg_power(1, g, 2).mul(&binom_neg_power(2, c, 2));
                assert_eq!(*s.coeff(2), BigInt::from(g * (g + 1) / 2 + c));
            }
        }
    }

    #[test]
    fn binomial_series_counts_multisets() {
        for k in 1..=3usize {
            for e in 0..=4u64 {
                let s = binom_neg_power(k, e, 9);
                for j in 0..=9 {
                    let expected = if j % k == 0 { multisets(e, j / k) } else { 0 };
                    assert_eq!(*s.coeff(j), BigInt::from(expected), "k={k} e={e} j={j}");
                }
            }
        }
    }

    #[test]
    fn hilbert_series_examples() {
        let line = GeometricInvariants::new(0, 3, 3, 0, 3).unwrap();
        let full = build_quotient(
            QuotientKind::FullWeightTwo,
            &line,
            &ArithmeticInputs::genus_zero(),
        )
        .unwrap();
        // (1 - t^2)^(-1)
        assert_eq!(hs_global(&full, 1, 2).coeffs(), ints(&[1, 0, 1]).as_slice());

        let hyp = GeometricInvariants::new(2, 2, 0, 1, 1).unwrap();
        let arith = ArithmeticInputs::exact(2, 2, 1, 1, 1, 0);
        let abat = build_quotient(QuotientKind::AbelianByArtinTate, &hyp, &arith).unwrap();
        // (1 - t)^(-2)
        assert_eq!(hs_global(&abat, 0, 2).coeffs(), ints(&[1, 2, 3]).as_slice());
        // dim W + n - 1 + g(g+1)/2 = 1 + 1 + 3
        assert_eq!(hs_local(&abat, 2).coeffs(), ints(&[1, 2, 5]).as_slice());

        let sup = GeometricInvariants::new(2, 1, 1, 0, 1).unwrap();
        let arith = ArithmeticInputs::exact(2, 2, 1, 1, 1, 0);
        let full = build_quotient(QuotientKind::FullWeightTwo, &sup, &arith).unwrap();
        // 2g^2 + n - 1 = 8
        let loc = hs_local(&full, 2);
        assert_eq!(loc.coeffs(), ints(&[1, 2, 8]).as_slice());
        assert_eq!(loc.partial_sum(2).unwrap(), BigInt::from(11));
    }

    #[test]
    fn zero_dims_give_constant_series() {
        let inv = GeometricInvariants::new(1, 1, 1, 0, 1).unwrap();
        let arith = ArithmeticInputs::exact(0, 0, 1, 1, 1, 0);
        let d = build_quotient(QuotientKind::Abelianized, &inv, &arith).unwrap();
        assert_eq!(hs_global(&d, 0, 3).coeffs(), ints(&[1, 0, 0, 0]).as_slice());
    }

    #[test]
    fn rational_series_examples() {
        let one_minus_t = IntPoly::from_i64s(&[1, -1]);
        // Long division by hand: (1 - t)(1 + 2t + 4t^2 + ...)/(1 - 2t) gives 1, 1, 2, 4.
        let s = rational_series(&one_minus_t, &IntPoly::from_i64s(&[1, -2]), 3).unwrap();
        assert_eq!(s.coeffs(), ints(&[1, 1, 2, 4]).as_slice());
        let s = rational_series(&IntPoly::from_i64s(&[1]), &one_minus_t, 4).unwrap();
        assert_eq!(s.coeffs(), ints(&[1, 1, 1, 1, 1]).as_slice());
        let s = rational_series(&one_minus_t, &IntPoly::from_i64s(&[1, -2, -1]), 3).unwrap();
        assert_eq!(s.coeffs(), ints(&[1, 1, 3, 7]).as_slice());
        assert_eq!(
            rational_series(&one_minus_t, &IntPoly::from_i64s(&[2, 1]), 3),
            Err(SeriesError::BadDenominator)
        );
    }

    #[test]
    fn partial_sums() {
        let s = TruncatedSeries::from_coeffs(ints(&[1, 2, 3]));
        assert_eq!(s.partial_sum(2).unwrap(), BigInt::from(6));
        let s = TruncatedSeries::from_coeffs(ints(&[1, 0, 1]));
        assert_eq!(s.partial_sum(1).unwrap(), BigInt::from(1));
        assert!(matches!(
            s.partial_sum(3),
            Err(SeriesError::BeyondTruncation { .. })
        ));
    }

    fn series() -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec(-20i64..=20, 5).prop_map(|c| TruncatedSeries::from_coeffs(ints(&c)))
    }

    proptest! {
        #[test]
        fn product_is_commutative_and_associative(a in series(), b in series(), c in series()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn series_inverse_round_trips(q in prop::collection::vec(-5i64..=5, 1..4)) {
            // (1/denom) * denom == 1 through the truncation.
            let mut d = vec![1i64];
            d.extend(q);
            let denom = IntPoly::from_i64s(&d);
            let inv = rational_series(&IntPoly::from_i64s(&[1]), &denom, 6).unwrap();
            let mut dc: Vec<BigInt> = (0..=6).map(|i| denom.coeff(i)).collect();
            dc.truncate(7);
            let prod = inv.mul(&TruncatedSeries::from_coeffs(dc));
            prop_assert_eq!(prod, TruncatedSeries::one(6));
        }
    }
}
