//! Curve families, their hypotheses, and the geometric invariants
//! `(g, n, n1, n2, #|D|, b)` of the punctured curve.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactpoly::{
    count_real_roots, count_roots_mod_p, discriminant, is_squarefree, poly_gcd,
    verify_irreducible_over_q, IntPoly, IrreducibilityVerdict, PolyError,
};
use crate::numtheory::{is_nonzero_square_mod, is_perfect_square, is_prime, prime_divisors_big};

/// Number of small primes tried when confirming irreducibility of a puncture.
pub const IRREDUCIBILITY_PRIME_BUDGET: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("NotSquarefree: {0} is not squarefree")]
    NotSquarefree(String),
    #[error("GcdViolation: gcd(deg f = {d}, m = {m}) = {gcd}, must be 1")]
    GcdViolation { d: usize, m: u64, gcd: u64 },
    #[error("NotHyperbolic: 2 - 2g - n = {euler} is not negative (g = {g}, n = {n})")]
    NotHyperbolic { g: u64, n: u64, euler: i64 },
    #[error("ReduciblePuncture: minimal polynomial {0} of a closed point is reducible over Q")]
    ReduciblePuncture(String),
    #[error("InconsistentGeneric: {0}")]
    InconsistentGeneric(String),
    #[error("BadDegree: {0}")]
    BadDegree(String),
    #[error("PuncturesNotCoprime: {0} and {1} share a root")]
    PuncturesNotCoprime(String, String),
    #[error("Unsupported: {0}")]
    Unsupported(String),
    #[error("polynomial error: {0}")]
    Poly(#[from] PolyError),
}

/// A closed point of the affine line, given by its minimal polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "ClosedPointRepr", into = "ClosedPointRepr")]
pub struct ClosedPoint {
    pub minimal_poly: IntPoly,
    pub claimed_irreducible: bool,
}

/// Input form: an integer `a` is shorthand for the rational point `x - a`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ClosedPointRepr {
    Rational(i64),
    Poly {
        minimal_poly: IntPoly,
        #[serde(default = "yes")]
        claimed_irreducible: bool,
    },
}

fn yes() -> bool {
    true
}

impl From<ClosedPointRepr> for ClosedPoint {
    fn from(r: ClosedPointRepr) -> Self {
        match r {
            ClosedPointRepr::Rational(a) => ClosedPoint::rational(a),
            ClosedPointRepr::Poly {
                minimal_poly,
                claimed_irreducible,
            } => ClosedPoint {
                minimal_poly,
                claimed_irreducible,
            },
        }
    }
}

impl From<ClosedPoint> for ClosedPointRepr {
    fn from(p: ClosedPoint) -> Self {
        ClosedPointRepr::Poly {
            minimal_poly: p.minimal_poly,
            claimed_irreducible: p.claimed_irreducible,
        }
    }
}

impl ClosedPoint {
    pub fn rational(a: i64) -> Self {
        Self {
            minimal_poly: IntPoly::linear_root(a),
            claimed_irreducible: true,
        }
    }

    pub fn from_poly(p: IntPoly) -> Self {
        Self {
            minimal_poly: p,
            claimed_irreducible: true,
        }
    }

    pub fn degree(&self) -> usize {
        self.minimal_poly.degree().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CurveSpec {
    /// `y^m = f(x)` with `f` squarefree of degree `d > 2`, `gcd(d, m) = 1`.
    Superelliptic { m: u64, f: IntPoly },
    /// `y^2 = f(x)` with `f` squarefree of even degree `2g + 2 >= 4`.
    HyperellipticEven { f: IntPoly },
    /// `P^1` minus finitely many closed points (and optionally infinity).
    PuncturedLine {
        finite_punctures: Vec<ClosedPoint>,
        #[serde(default)]
        include_infinity: bool,
    },
    /// Invariants supplied directly for curves outside the built-in families.
    Generic {
        g: u64,
        n: u64,
        n1: u64,
        n2: u64,
        d_closed: u64,
    },
}

impl CurveSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            CurveSpec::Superelliptic { .. } => "superelliptic",
            CurveSpec::HyperellipticEven { .. } => "hyperelliptic_even",
            CurveSpec::PuncturedLine { .. } => "punctured_line",
            CurveSpec::Generic { .. } => "generic",
        }
    }

    /// `P^1 \ {0, 1, oo}`.
    pub fn thrice_punctured_line() -> Self {
        CurveSpec::PuncturedLine {
            finite_punctures: vec![ClosedPoint::rational(0), ClosedPoint::rational(1)],
            include_infinity: true,
        }
    }

    /// Product of the finite puncture polynomials (punctured lines only).
    pub(crate) fn puncture_product(&self) -> Option<IntPoly> {
        match self {
            CurveSpec::PuncturedLine {
                finite_punctures, ..
            } => Some(
                finite_punctures
                    .iter()
                    .fold(IntPoly::from_i64s(&[1]), |acc, p| acc.mul(&p.minimal_poly)),
            ),
            _ => None,
        }
    }
}

/// The invariants `(g, n, n1, n2, #|D|, b)` of `Y = X \ D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeometricInvariants {
    pub g: u64,
    pub n: u64,
    pub n1: u64,
    pub n2: u64,
    pub d_closed: u64,
    pub b: u64,
}

impl GeometricInvariants {
    /// Checks `n = n1 + 2 n2`, `1 <= #|D| <= n`, hyperbolicity, and derives
    /// `b = #|D| + n2 - 1`.
    pub fn new(g: u64, n: u64, n1: u64, n2: u64, d_closed: u64) -> Result<Self, CurveError> {
        if n != n1 + 2 * n2 {
            return Err(CurveError::InconsistentGeneric(format!(
                "n = {n} but n1 + 2 n2 = {}",
                n1 + 2 * n2
            )));
        }
        if n == 0 || d_closed == 0 {
            return Err(CurveError::InconsistentGeneric(
                "the curve must be affine: n >= 1 and #|D| >= 1".into(),
            ));
        }
        if d_closed > n {
            return Err(CurveError::InconsistentGeneric(format!(
                "#|D| = {d_closed} exceeds n = {n}"
            )));
        }
        // Each closed point is either real (one geometric point) or has at
        // least one conjugate pair, so #|D| <= n1 + n2.
        if d_closed > n1 + n2 {
            return Err(CurveError::InconsistentGeneric(format!(
                "#|D| = {d_closed} exceeds n1 + n2 = {}",
                n1 + n2
            )));
        }
        let euler = 2 - 2 * g as i64 - n as i64;
        if euler >= 0 {
            return Err(CurveError::NotHyperbolic { g, n, euler });
        }
        Ok(Self {
            g,
            n,
            n1,
            n2,
            d_closed,
            b: d_closed + n2 - 1,
        })
    }

    /// Euler characteristic `2 - 2g - n`.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.g as i64 - self.n as i64
    }
}

/// A spec that passed [`validate`], with per-puncture irreducibility verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidatedCurve {
    pub spec: CurveSpec,
    pub puncture_verdicts: Vec<IrreducibilityVerdict>,
    pub warnings: Vec<String>,
}

fn require_squarefree(f: &IntPoly) -> Result<(), CurveError> {
    if !is_squarefree(f)? {
        return Err(CurveError::NotSquarefree(f.to_string()));
    }
    Ok(())
}

/// Checks every hypothesis of the curve family.
pub fn validate(spec: &CurveSpec) -> Result<ValidatedCurve, CurveError> {
    let mut verdicts = Vec::new();
    let mut warnings = Vec::new();
    match spec {
        CurveSpec::Superelliptic { m, f } => {
            if *m < 2 {
                return Err(CurveError::BadDegree(format!("m = {m} must exceed 1")));
            }
            let d = f.degree().ok_or(PolyError::ZeroPolynomial)?;
            if d <= 2 {
                return Err(CurveError::BadDegree(format!("deg f = {d} must exceed 2")));
            }
            require_squarefree(f)?;
            let gcd = (d as u64).gcd(m);
            if gcd != 1 {
                return Err(CurveError::GcdViolation { d, m: *m, gcd });
            }
        }
        CurveSpec::HyperellipticEven { f } => {
            let d = f.degree().ok_or(PolyError::ZeroPolynomial)?;
            if d < 4 || d % 2 == 1 {
                return Err(CurveError::BadDegree(format!(
                    "deg f = {d} must be even and at least 4"
                )));
            }
            require_squarefree(f)?;
        }
        CurveSpec::PuncturedLine {
            finite_punctures,
            include_infinity,
        } => {
            for p in finite_punctures {
                let poly = &p.minimal_poly;
                if poly.degree().unwrap_or(0) == 0 {
                    return Err(CurveError::BadDegree(format!(
                        "puncture polynomial {poly} must have degree >= 1"
                    )));
                }
                if !poly.is_primitive() {
                    return Err(CurveError::BadDegree(format!(
                        "puncture polynomial {poly} must be primitive"
                    )));
                }
                require_squarefree(poly)?;
                let verdict = verify_irreducible_over_q(poly, IRREDUCIBILITY_PRIME_BUDGET);
                match verdict {
                    IrreducibilityVerdict::Refuted => {
                        return Err(CurveError::ReduciblePuncture(poly.to_string()))
                    }
                    IrreducibilityVerdict::Unknown => warnings.push(format!(
                        "irreducibility of puncture {poly} could not be confirmed; \
                         counted as one closed point as claimed"
                    )),
                    IrreducibilityVerdict::Confirmed => {}
                }
                verdicts.push(verdict);
            }
            for (i, a) in finite_punctures.iter().enumerate() {
                for b in &finite_punctures[i + 1..] {
                    let g = poly_gcd(&a.minimal_poly.to_rat(), &b.minimal_poly.to_rat());
                    if g.degree() != Some(0) {
                        return Err(CurveError::PuncturesNotCoprime(
                            a.minimal_poly.to_string(),
                            b.minimal_poly.to_string(),
                        ));
                    }
                }
            }
            let n: usize = finite_punctures
                .iter()
                .map(ClosedPoint::degree)
                .sum::<usize>()
                + usize::from(*include_infinity);
            if n < 3 {
                return Err(CurveError::NotHyperbolic {
                    g: 0,
                    n: n as u64,
                    euler: 2 - n as i64,
                });
            }
        }
        CurveSpec::Generic {
            g,
            n,
            n1,
            n2,
            d_closed,
        } => {
            GeometricInvariants::new(*g, *n, *n1, *n2, *d_closed)?;
        }
    }
    Ok(ValidatedCurve {
        spec: spec.clone(),
        puncture_verdicts: verdicts,
        warnings,
    })
}

/// Validates `spec` and extracts its geometric invariants.
pub fn invariants(spec: &CurveSpec) -> Result<GeometricInvariants, CurveError> {
    validate(spec)?.invariants()
}

/// `#D(F_ell)` and whether the cusp divisor stays étale modulo `ell`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspProfile {
    pub d_points_mod_ell: u64,
    pub etale: bool,
}

impl ValidatedCurve {
    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn invariants(&self) -> Result<GeometricInvariants, CurveError> {
        match &self.spec {
            CurveSpec::Superelliptic { m, f } => {
                let d = f.degree().unwrap() as u64;
                // Totally ramified at infinity: 2g = (d - 1)(m - 1).
                let g = (d - 1) * (m - 1) / 2;
                GeometricInvariants::new(g, 1, 1, 0, 1)
            }
            CurveSpec::HyperellipticEven { f } => {
                let g = (f.degree().unwrap() as u64 - 2) / 2;
                let lc = f.leading_coeff().unwrap();
                if lc.is_negative() {
                    GeometricInvariants::new(g, 2, 0, 1, 1)
                } else if is_perfect_square(lc) {
                    GeometricInvariants::new(g, 2, 2, 0, 2)
                } else {
                    GeometricInvariants::new(g, 2, 2, 0, 1)
                }
            }
            CurveSpec::PuncturedLine {
                finite_punctures,
                include_infinity,
            } => {
                let inf = u64::from(*include_infinity);
                let mut n = inf;
                let mut n1 = inf;
                for p in finite_punctures {
                    n += p.degree() as u64;
                    n1 += count_real_roots(&p.minimal_poly)? as u64;
                }
                let d_closed = finite_punctures.len() as u64 + inf;
                GeometricInvariants::new(0, n, n1, (n - n1) / 2, d_closed)
            }
            CurveSpec::Generic {
                g,
                n,
                n1,
                n2,
                d_closed,
            } => GeometricInvariants::new(*g, *n, *n1, *n2, *d_closed),
        }
    }

    /// Reduction of the cusp divisor modulo a prime `ell`.
    pub fn cusp_reduction_profile(&self, ell: u64) -> Result<CuspProfile, CurveError> {
        if !is_prime(ell) {
            return Err(PolyError::BadModulus(ell).into());
        }
        match &self.spec {
            CurveSpec::Superelliptic { .. } => Ok(CuspProfile {
                d_points_mod_ell: 1,
                etale: true,
            }),
            CurveSpec::HyperellipticEven { f } => {
                let lc = f.leading_coeff().unwrap();
                if ell == 2 || (lc % BigInt::from(ell)).is_zero() {
                    return Ok(CuspProfile {
                        d_points_mod_ell: 1,
                        etale: false,
                    });
                }
                let pts = if is_nonzero_square_mod(lc, ell) { 2 } else { 0 };
                Ok(CuspProfile {
                    d_points_mod_ell: pts,
                    etale: true,
                })
            }
            CurveSpec::PuncturedLine {
                include_infinity, ..
            } => {
                let product = self.spec.puncture_product().unwrap();
                let reduced = product.reduce_mod(ell);
                let full_deg = product.degree().unwrap_or(0);
                let red_deg = reduced.degree().unwrap_or(0);
                // Roots whose reduction escapes to infinity.
                let escaped = full_deg - red_deg;
                let at_infinity = usize::from(*include_infinity) + escaped;
                let affine_ok = red_deg == 0 || reduced.is_squarefree();
                let etale = affine_ok && at_infinity <= 1;
                let affine_roots = if red_deg == 0 {
                    0
                } else {
                    count_roots_mod_p(&product, ell)?
                };
                Ok(CuspProfile {
                    d_points_mod_ell: (affine_roots + usize::from(at_infinity > 0)) as u64,
                    etale,
                })
            }
            CurveSpec::Generic { .. } => Err(CurveError::Unsupported(
                "cusp reduction needs an explicit curve family".into(),
            )),
        }
    }

    /// Primes at which the given model may have bad reduction (always
    /// including 2 for hyperelliptic curves). The flag is false when a large
    /// cofactor could not be factored.
    pub fn candidate_bad_primes(&self) -> (Vec<u64>, bool) {
        let (n, extra): (BigInt, Vec<u64>) = match &self.spec {
            CurveSpec::Superelliptic { m, f } => (
                BigInt::from(*m) * f.leading_coeff().unwrap() * disc_int(f),
                vec![],
            ),
            CurveSpec::HyperellipticEven { f } => {
                (f.leading_coeff().unwrap() * disc_int(f), vec![2])
            }
            CurveSpec::PuncturedLine { .. } => {
                let p = self.spec.puncture_product().unwrap();
                let disc = if p.degree().unwrap_or(0) >= 1 {
                    disc_int(&p)
                } else {
                    BigInt::from(1)
                };
                (
                    p.leading_coeff().cloned().unwrap_or(1.into()) * disc,
                    vec![],
                )
            }
            CurveSpec::Generic { .. } => return (vec![], false),
        };
        let (ps, complete) = prime_divisors_big(&n);
        let mut out: Vec<u64> = ps
            .iter()
            .filter_map(|p| u64::try_from(p).ok())
            .chain(extra)
            .collect();
        out.sort_unstable();
        out.dedup();
        (out, complete)
    }
}

fn disc_int(f: &IntPoly) -> BigInt {
    let d = discriminant(f).expect("validated polynomial has degree >= 1");
    let v = d.to_integer();
    if v.is_zero() {
        BigInt::from(1)
    } else {
        v
    }
}
