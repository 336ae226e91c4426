//! Admissibility of the auxiliary prime and exact point counts over `F_p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvemodel::{CurveError, CurveSpec, GeometricInvariants, ValidatedCurve};
use crate::exactpoly::{discriminant, IntPoly, PolyError};
use crate::numtheory::{is_nonzero_square_mod, is_prime, powmod};

/// Below this many residues the sum runs on the calling thread.
const PARALLEL_THRESHOLD: u64 = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Violation {
    InS,
    DividesM,
    DividesLeadingCoeff,
    DividesDiscriminant,
    CuspsNotEtale,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeAdmissibility {
    pub p: u64,
    pub admissible: bool,
    pub reasons: Vec<Violation>,
}

impl PrimeAdmissibility {
    fn from_reasons(p: u64, reasons: Vec<Violation>) -> Self {
        Self {
            p,
            admissible: reasons.is_empty(),
            reasons,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCount {
    /// `#Y(F_p)`
    pub y_count: u64,
    /// `#X(F_p)`
    pub x_count: u64,
    /// `#D(F_p)`
    pub cusp_count: u64,
}

impl PointCount {
    pub fn new(y_count: u64, cusp_count: u64) -> Self {
        Self {
            y_count,
            x_count: y_count + cusp_count,
            cusp_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PointCountError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {p} is inadmissible: {reasons:?}")]
    Inadmissible { p: u64, reasons: Vec<Violation> },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

impl From<PolyError> for PointCountError {
    fn from(e: PolyError) -> Self {
        PointCountError::Curve(e.into())
    }
}

fn divides(p: u64, n: &BigInt) -> bool {
    (n % BigInt::from(p)).is_zero()
}

fn check_polynomial(f: &IntPoly, p: u64, reasons: &mut Vec<Violation>) -> Result<(), PolyError> {
    if divides(
        p,
        f.leading_coeff().expect("validated polynomial is nonzero"),
    ) {
        reasons.push(Violation::DividesLeadingCoeff);
    }
    let disc = discriminant(f)?.to_integer();
    if divides(p, &disc) {
        reasons.push(Violation::DividesDiscriminant);
    }
    Ok(())
}

/// Checks `p` against the good-reduction hypotheses: `p` outside `S`,
/// smooth reduction of the model and étale reduction of the cusps.
pub fn admissible_prime(
    curve: &ValidatedCurve,
    p: u64,
    s: &[u64],
) -> Result<PrimeAdmissibility, PointCountError> {
    if !is_prime(p) {
        return Err(PointCountError::NotPrime(p));
    }
    let mut reasons = Vec::new();
    if s.contains(&p) {
        reasons.push(Violation::InS);
    }
    match curve.spec() {
        CurveSpec::Superelliptic { m, f } => {
            if m % p == 0 {
                reasons.push(Violation::DividesM);
            }
            check_polynomial(f, p, &mut reasons)?;
        }
        CurveSpec::HyperellipticEven { f } => {
            if p == 2 {
                reasons.push(Violation::DividesM);
            }
            check_polynomial(f, p, &mut reasons)?;
        }
        CurveSpec::PuncturedLine { .. } => {}
        CurveSpec::Generic { .. } => {
            return Err(CurveError::Unsupported(
                "admissibility of p must be asserted for generic curves".into(),
            )
            .into())
        }
    }
    if !curve.cusp_reduction_profile(p)?.etale {
        reasons.push(Violation::CuspsNotEtale);
    }
    reasons.sort();
    reasons.dedup();
    Ok(PrimeAdmissibility::from_reasons(p, reasons))
}

/// Number of `y` in `F_p` with `y^m = a`.
pub fn mth_roots_count(a: u64, m: u64, p: u64) -> u64 {
    if a.is_multiple_of(p) {
        return 1;
    }
    let g = m.gcd(&(p - 1));
    if powmod(a, (p - 1) / g, p) == 1 {
        g
    } else {
        0
    }
}

fn residues(f: &IntPoly, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    f.coeffs()
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits"))
        .collect()
}

fn horner(coeffs: &[u64], x: u64, p: u64) -> u64 {
    coeffs.iter().rev().fold(0u64, |acc, &c| {
        ((acc as u128 * x as u128 + c as u128) % p as u128) as u64
    })
}

/// `#{(x, y) in F_p^2 : y^m = f(x)}`.
pub fn count_affine_superelliptic(f: &IntPoly, m: u64, p: u64) -> u64 {
    let coeffs = residues(f, p);
    let term = |x: u64| mth_roots_count(horner(&coeffs, x, p), m, p);
    if p < PARALLEL_THRESHOLD {
        (0..p).map(term).sum()
    } else {
        (0..p).into_par_iter().map(term).sum()
    }
}

/// Exact `#Y(F_p)`, `#X(F_p)` and `#D(F_p)` at an admissible prime.
pub fn count_points(curve: &ValidatedCurve, p: u64) -> Result<PointCount, PointCountError> {
    let adm = admissible_prime(curve, p, &[])?;
    if !adm.admissible {
        return Err(PointCountError::Inadmissible {
            p,
            reasons: adm.reasons,
        });
    }
    let cusps = curve.cusp_reduction_profile(p)?.d_points_mod_ell;
    match curve.spec() {
        CurveSpec::Superelliptic { m, f } => {
            Ok(PointCount::new(count_affine_superelliptic(f, *m, p), 1))
        }
        CurveSpec::HyperellipticEven { f } => {
            let lc = f.leading_coeff().unwrap();
            let cusp_count = if is_nonzero_square_mod(lc, p) { 2 } else { 0 };
            debug_assert_eq!(cusp_count, cusps);
            Ok(PointCount::new(
                count_affine_superelliptic(f, 2, p),
                cusp_count,
            ))
        }
        CurveSpec::PuncturedLine { .. } => Ok(PointCount::new(p + 1 - cusps, cusps)),
        CurveSpec::Generic { .. } => unreachable!("rejected by admissible_prime"),
    }
}

/// `2g sqrt(p) - |#X(F_p) - (p + 1)|`; negative values contradict the
/// Hasse-Weil bound.
pub fn hasse_weil_margin(inv: &GeometricInvariants, pc: &PointCount, p: u64) -> f64 {
    let deviation = (pc.x_count as i128 - (p as i128 + 1)).unsigned_abs() as f64;
    2.0 * inv.g as f64 * (p as f64).sqrt() - deviation
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvemodel::validate;

    fn x5p1() -> ValidatedCurve {
        validate(&CurveSpec::Superelliptic {
            m: 2,
            f: IntPoly::from_i64s(&[1, 0, 0, 0, 0, 1]),
        })
        .unwrap()
    }

    fn brute_affine(f: &IntPoly, m: u32, p: u64) -> u64 {
        let mut count = 0;
        for x in 0..p {
            let fx = f.eval_mod(x, p);
            for y in 0..p {
                if powmod(y, m as u64, p) == fx {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn admissibility_examples() {
        let c = x5p1();
        let a = admissible_prime(&c, 2, &[]).unwrap();
        assert!(!a.admissible);
        assert!(a.reasons.contains(&Violation::DividesM));
        let a = admissible_prime(&c, 5, &[]).unwrap();
        assert_eq!(a.reasons, vec![Violation::DividesDiscriminant]);
        let line = validate(&CurveSpec::thrice_punctured_line()).unwrap();
        assert!(admissible_prime(&line, 3, &[2]).unwrap().admissible);
        assert_eq!(
            admissible_prime(&line, 2, &[2]).unwrap().reasons,
            vec![Violation::InS]
        );
        assert_eq!(
            admissible_prime(&line, 4, &[]),
            Err(PointCountError::NotPrime(4))
        );
    }

    #[test]
    fn counts_for_worked_examples() {
        let line = validate(&CurveSpec::thrice_punctured_line()).unwrap();
        assert_eq!(count_points(&line, 5).unwrap().y_count, 3);
        assert_eq!(count_points(&line, 11).unwrap().y_count, 9);

        let c = x5p1();
        let f = IntPoly::from_i64s(&[1, 0, 0, 0, 0, 1]);
        assert_eq!(brute_affine(&f, 2, 7), 7);
        let pc = count_points(&c, 7).unwrap();
        assert_eq!(pc, PointCount::new(7, 1));

        let f = IntPoly::from_i64s(&[1, 1, 0, 0, 0, 0, 1]);
        let hyp = validate(&CurveSpec::HyperellipticEven { f: f.clone() }).unwrap();
        let pc = count_points(&hyp, 11).unwrap();
        assert_eq!(pc.y_count, brute_affine(&f, 2, 11));
        assert_eq!(pc.cusp_count, 2);
    }

    #[test]
    fn inadmissible_count_is_an_error() {
        assert!(matches!(
            count_points(&x5p1(), 5),
            Err(PointCountError::Inadmissible { p: 5, .. })
        ));
    }

    #[test]
    fn mth_root_fibres_partition_the_field() {
        for p in [2u64, 3, 5, 7, 11, 13, 31, 97] {
            for m in 1..=12 {
                let total: u64 = (0..p).map(|a| mth_roots_count(a, m, p)).sum();
                assert_eq!(total, p, "m = {m}, p = {p}");
                for a in 0..p {
                    let brute = (0..p).filter(|&y| powmod(y, m, p) == a).count() as u64;
                    assert_eq!(mth_roots_count(a, m, p), brute);
                }
            }
        }
    }

    #[test]
    fn hasse_weil_examples() {
        let line_inv = GeometricInvariants::new(0, 3, 3, 0, 3).unwrap();
        assert_eq!(hasse_weil_margin(&line_inv, &PointCount::new(3, 3), 5), 0.0);
        let inv = GeometricInvariants::new(2, 1, 1, 0, 1).unwrap();
        let m = hasse_weil_margin(&inv, &PointCount::new(7, 1), 7);
        assert!((m - 4.0 * 7f64.sqrt()).abs() < 1e-12);
        assert!(hasse_weil_margin(&inv, &PointCount::new(40, 1), 7) < 0.0);
    }

    #[test]
    fn parallel_path_agrees_with_serial() {
        let f = IntPoly::from_i64s(&[3, 1, 0, 1]);
        let p = 40_009;
        let serial: u64 = {
            let coeffs = residues(&f, p);
            (0..p)
                .map(|x| mth_roots_count(horner(&coeffs, x, p), 3, p))
                .sum()
        };
        assert_eq!(count_affine_superelliptic(&f, 3, p), serial);
    }
}
