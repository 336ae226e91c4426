//! Finiteness criteria, Coleman-function tests, reduction-type counts and
//! the explicit bound on the refined Chabauty-Kim locus.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::curvemodel::{CurveSpec, GeometricInvariants, ValidatedCurve};
use crate::hilbert::{hs_global, hs_local};
use crate::pointcount::{admissible_prime, count_points, PointCountError};
use crate::selmerdims::{ArithmeticInputs, ConditionalFlag, QuotientDescriptor};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CriteriaError {
    #[error("Unsupported: {0}")]
    Unsupported(String),
    #[error("invalid bound inputs: {0}")]
    InvalidBoundInputs(String),
    #[error("reduction-type count overflows 64 bits")]
    Overflow,
    #[error(transparent)]
    PointCount(#[from] PointCountError),
}

/// `kappa_p = 1 + (p - 1)/((p - 2) log p)` for odd `p`, `kappa_2 = 2 + 2/log 2`.
pub fn kappa(p: u64) -> f64 {
    if p == 2 {
        2.0 + 2.0 / 2f64.ln()
    } else {
        let pf = p as f64;
        1.0 + (pf - 1.0) / ((pf - 2.0) * pf.ln())
    }
}

/// Which rank enters the criteria: the Selmer rank `r_p` or, with the
/// Balakrishnan-Dogra modification of the Selmer scheme, the Mordell-Weil
/// rank `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Selmer,
    #[serde(rename = "bd")]
    BalakrishnanDogra,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Selmer => write!(f, "selmer"),
            Variant::BalakrishnanDogra => write!(f, "bd"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Alpha1,
    Alpha2,
    Beta,
    Gamma,
    Delta,
    /// `beta - rho_f`, governing the depth-1 bound.
    Depth1,
}

impl Criterion {
    pub const ALL: [Criterion; 6] = [
        Criterion::Alpha1,
        Criterion::Alpha2,
        Criterion::Beta,
        Criterion::Gamma,
        Criterion::Delta,
        Criterion::Depth1,
    ];

    pub fn symbol(self, variant: Variant) -> String {
        let base = match self {
            Criterion::Alpha1 => "alpha1",
            Criterion::Alpha2 => "alpha2",
            Criterion::Beta => "beta",
            Criterion::Gamma => "gamma",
            Criterion::Delta => "delta",
            Criterion::Depth1 => "beta-rho_f",
        };
        match variant {
            Variant::Selmer => base.to_string(),
            Variant::BalakrishnanDogra => match self {
                Criterion::Depth1 => "beta'-rho_f".into(),
                _ => format!("{base}'"),
            },
        }
    }

    fn uses_h_bk(self) -> bool {
        matches!(self, Criterion::Gamma | Criterion::Delta)
    }
}

/// A criterion value with its verdict (`value > 0`) and the conditional
/// facts it rests on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionValue {
    pub value: i64,
    pub holds: bool,
    pub flags: BTreeSet<ConditionalFlag>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub variant: Variant,
    pub rank_used: u64,
    pub alpha1: i64,
    pub alpha2: i64,
    pub beta: i64,
    pub gamma: i64,
    pub delta: i64,
    pub depth1: i64,
    pub conditional_flags: BTreeSet<ConditionalFlag>,
    pub verdicts: BTreeMap<Criterion, CriterionValue>,
}

impl CriteriaReport {
    pub fn value(&self, c: Criterion) -> i64 {
        self.verdicts[&c].value
    }

    pub fn holds(&self, c: Criterion) -> bool {
        self.verdicts[&c].holds
    }
}

/// Evaluates all criteria for `s = #S` with the rank chosen by `variant`.
pub fn criteria_values(
    inv: &GeometricInvariants,
    arith: &ArithmeticInputs,
    s: u64,
    variant: Variant,
) -> CriteriaReport {
    let rank = match variant {
        Variant::Selmer => arith.r_p,
        Variant::BalakrishnanDogra => arith.r,
    } as i64;
    let g = inv.g as i64;
    let b = inv.b as i64;
    let s = s as i64;
    let rho = arith.rho as i64;
    let rho_f = arith.rho_f as i64;
    let h = arith.h_bk as i64;

    let alpha1 = g - rank + b - s;
    let alpha2 = alpha1 + rho_f;
    let beta = g * (g + 3) / 2 - rank * (rank + 3) / 2 + rho_f + b - s;
    let gamma = g * g - rank + rho + b - s - h;
    let delta = g * (3 * g + 1) / 2 - rank * (rank + 3) / 2 + rho + b - s - h;
    let depth1 = beta - rho_f;

    let mut conditional_flags = BTreeSet::new();
    let mut verdicts = BTreeMap::new();
    for (c, value) in [
        (Criterion::Alpha1, alpha1),
        (Criterion::Alpha2, alpha2),
        (Criterion::Beta, beta),
        (Criterion::Gamma, gamma),
        (Criterion::Delta, delta),
        (Criterion::Depth1, depth1),
    ] {
        let mut flags = BTreeSet::new();
        if variant == Variant::Selmer && arith.flags.contains(&ConditionalFlag::AssumedSha) {
            flags.insert(ConditionalFlag::AssumedSha);
        }
        if c.uses_h_bk() && arith.flags.contains(&ConditionalFlag::AssumedBlochKato) {
            flags.insert(ConditionalFlag::AssumedBlochKato);
        }
        conditional_flags.extend(flags.iter().copied());
        verdicts.insert(
            c,
            CriterionValue {
                value,
                holds: value > 0,
                flags,
            },
        );
    }
    CriteriaReport {
        variant,
        rank_used: rank as u64,
        alpha1,
        alpha2,
        beta,
        gamma,
        delta,
        depth1,
        conditional_flags,
        verdicts,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginVerdict {
    pub margin: i64,
    pub holds: bool,
}

impl MarginVerdict {
    fn new(margin: i64) -> Self {
        Self {
            margin,
            holds: margin > 0,
        }
    }
}

/// `sum_k (dim_local - dim_global) - s`; positive means the locus is finite.
pub fn finiteness_verdict(desc: &QuotientDescriptor, s: u64) -> MarginVerdict {
    MarginVerdict::new(desc.dimension_gap() - s as i64)
}

/// Partial-sum comparison of the Hilbert series through degree `m`;
/// positive means a nonzero Coleman algebraic function of weight `<= m`
/// vanishes on every reduction-type locus.
pub fn coleman_verdict(desc: &QuotientDescriptor, s: u64, m: usize) -> MarginVerdict {
    let loc = hs_local(desc, m).partial_sum(m).expect("within truncation");
    let glob = hs_global(desc, s, m)
        .partial_sum(m)
        .expect("within truncation");
    MarginVerdict::new((loc - glob).to_i64().expect("margin fits in i64"))
}

pub fn coleman_weight2_verdict(desc: &QuotientDescriptor, s: u64) -> MarginVerdict {
    coleman_verdict(desc, s, 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionMode {
    /// The literal product `prod_{l in S} (n_l + n) prod_{l not in S} n_l`.
    Generic,
    /// Drops reduction types that no `F_l`-point can realize.
    Refined,
}

impl ReductionMode {
    pub fn name(self) -> &'static str {
        match self {
            ReductionMode::Generic => "generic",
            ReductionMode::Refined => "refined",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub s_primes: Vec<u64>,
    pub p: u64,
    /// `n_l` for primes where it is known; unlisted primes have `n_l = 1`.
    pub bad_components: BTreeMap<u64, u64>,
    pub y_count: u64,
    pub reduction_mode: ReductionMode,
}

impl BoundInputs {
    pub fn check(&self) -> Result<(), CriteriaError> {
        if self.s_primes.contains(&self.p) {
            return Err(CriteriaError::InvalidBoundInputs(format!(
                "p = {} lies in S",
                self.p
            )));
        }
        if let Some((l, _)) = self.bad_components.iter().find(|(_, &n)| n == 0) {
            return Err(CriteriaError::InvalidBoundInputs(format!(
                "n_{l} must be at least 1"
            )));
        }
        Ok(())
    }

    pub fn n_ell(&self, ell: u64) -> u64 {
        self.bad_components.get(&ell).copied().unwrap_or(1)
    }
}

/// One factor of the reduction-type product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionFactor {
    pub ell: u64,
    pub in_s: bool,
    pub n_ell: u64,
    pub factor: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTypeCount {
    pub mode: ReductionMode,
    pub total: u64,
    pub factors: Vec<ReductionFactor>,
}

/// A rule for counting reduction types.
pub trait ReductionCounter: Send + Sync {
    fn name(&self) -> &'static str;
    fn mode(&self) -> ReductionMode;
    fn factor_in_s(
        &self,
        curve: &ValidatedCurve,
        inv: &GeometricInvariants,
        ell: u64,
        n_ell: u64,
    ) -> Result<(u64, Option<String>), CriteriaError>;

    fn count(
        &self,
        curve: &ValidatedCurve,
        inv: &GeometricInvariants,
        bi: &BoundInputs,
    ) -> Result<ReductionTypeCount, CriteriaError> {
        bi.check()?;
        let mut s_sorted = bi.s_primes.clone();
        s_sorted.sort_unstable();
        s_sorted.dedup();
        let mut factors = Vec::new();
        for &ell in &s_sorted {
            let n_ell = bi.n_ell(ell);
            let (factor, note) = self.factor_in_s(curve, inv, ell, n_ell)?;
            factors.push(ReductionFactor {
                ell,
                in_s: true,
                n_ell,
                factor,
                note,
            });
        }
        for (&ell, &n_ell) in &bi.bad_components {
            if n_ell > 1 && !s_sorted.contains(&ell) {
                factors.push(ReductionFactor {
                    ell,
                    in_s: false,
                    n_ell,
                    factor: n_ell,
                    note: None,
                });
            }
        }
        let total = factors
            .iter()
            .try_fold(1u64, |acc, f| acc.checked_mul(f.factor))
            .ok_or(CriteriaError::Overflow)?;
        Ok(ReductionTypeCount {
            mode: self.mode(),
            total,
            factors,
        })
    }
}

pub struct GenericCounter;

impl ReductionCounter for GenericCounter {
    fn name(&self) -> &'static str {
        "generic"
    }

    fn mode(&self) -> ReductionMode {
        ReductionMode::Generic
    }

    fn factor_in_s(
        &self,
        _curve: &ValidatedCurve,
        inv: &GeometricInvariants,
        _ell: u64,
        n_ell: u64,
    ) -> Result<(u64, Option<String>), CriteriaError> {
        Ok((n_ell + inv.n, None))
    }
}

/// For `l` in `S` with `n_l = 1` and good reduction at `l`: one type per
/// `F_l`-rational cusp, plus one for the component if it carries a
/// non-cuspidal `F_l`-point.
pub struct RefinedCounter;

impl ReductionCounter for RefinedCounter {
    fn name(&self) -> &'static str {
        "refined"
    }

    fn mode(&self) -> ReductionMode {
        ReductionMode::Refined
    }

    fn factor_in_s(
        &self,
        curve: &ValidatedCurve,
        inv: &GeometricInvariants,
        ell: u64,
        n_ell: u64,
    ) -> Result<(u64, Option<String>), CriteriaError> {
        if matches!(curve.spec(), CurveSpec::Generic { .. }) {
            return Err(CriteriaError::Unsupported(
                "refined reduction types need an explicit curve family".into(),
            ));
        }
        if n_ell != 1 {
            return Ok((n_ell + inv.n, None));
        }
        let adm = admissible_prime(curve, ell, &[])?;
        if !adm.admissible {
            return Ok((
                n_ell + inv.n,
                Some(format!(
                    "reduction at {ell} is not good ({:?}); generic factor used",
                    adm.reasons
                )),
            ));
        }
        let pc = count_points(curve, ell)?;
        let factor = pc.cusp_count + u64::from(pc.y_count > 0);
        Ok((
            factor,
            Some(format!(
                "{} rational cusp(s), {} non-cuspidal point(s) mod {ell}",
                pc.cusp_count, pc.y_count
            )),
        ))
    }
}

/// Name-keyed collection of reduction-type counters.
pub struct ReductionRegistry {
    counters: Vec<Box<dyn ReductionCounter>>,
}

impl ReductionRegistry {
    pub fn builtin() -> Self {
        Self {
            counters: vec![Box::new(GenericCounter), Box::new(RefinedCounter)],
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn ReductionCounter> {
        self.counters
            .iter()
            .find(|c| c.name() == name)
            .map(|c| c.as_ref())
    }

    pub fn by_mode(&self, mode: ReductionMode) -> &dyn ReductionCounter {
        self.counters
            .iter()
            .find(|c| c.mode() == mode)
            .map(|c| c.as_ref())
            .expect("every mode has a built-in counter")
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.counters.iter().map(|c| c.name()).collect()
    }
}

/// Number of reduction types under `bi.reduction_mode`.
pub fn reduction_type_count(
    curve: &ValidatedCurve,
    inv: &GeometricInvariants,
    bi: &BoundInputs,
) -> Result<ReductionTypeCount, CriteriaError> {
    ReductionRegistry::builtin()
        .by_mode(bi.reduction_mode)
        .count(curve, inv, bi)
}

/// `(4g + 2n - 2)^2 (g + 1)`.
pub fn bound_factor(inv: &GeometricInvariants) -> u128 {
    let base = (4 * inv.g + 2 * inv.n - 2) as u128;
    base * base * (inv.g as u128 + 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kappa: f64,
    pub reduction_types: u64,
    pub per_type_bound: f64,
    pub total_bound: f64,
    pub total_bound_floor: u64,
}

/// `kappa_p * #types * #Y(F_p) * (4g + 2n - 2)^2 (g + 1)`.
pub fn bound(inv: &GeometricInvariants, bi: &BoundInputs, reduction_types: u64) -> BoundReport {
    let k = kappa(bi.p);
    let per_type = k * (bi.y_count as u128 * bound_factor(inv)) as f64;
    let total = per_type * reduction_types as f64;
    BoundReport {
        kappa: k,
        reduction_types,
        per_type_bound: per_type,
        total_bound: total,
        total_bound_floor: total.floor() as u64,
    }
}

/// The criterion that licenses the bound, if any holds: `beta - rho_f`
/// in depth-1 mode, otherwise `beta` and then `delta`.
pub fn bound_justification(report: &CriteriaReport, depth1: bool) -> Option<Criterion> {
    let order: &[Criterion] = if depth1 {
        &[Criterion::Depth1]
    } else {
        &[Criterion::Beta, Criterion::Delta]
    };
    order.iter().copied().find(|c| report.holds(*c))
}
