//! The full pipeline: curve → invariants → admissibility → point count →
//! quotients and Hilbert series → criteria → bounds.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::criteria::{
    bound, bound_justification, coleman_verdict, criteria_values, finiteness_verdict, BoundInputs,
    BoundReport, CriteriaError, CriteriaReport, Criterion, MarginVerdict, ReductionMode,
    ReductionRegistry, ReductionTypeCount, Variant,
};
use crate::curvemodel::{validate, CurveError, CurveSpec, GeometricInvariants};
use crate::hilbert::{hs_global, hs_local, TruncatedSeries, DEFAULT_TRUNCATION, MAX_TRUNCATION};
use crate::numtheory::is_prime;
use crate::pointcount::{
    admissible_prime, count_points, hasse_weil_margin, PointCount, PointCountError,
    PrimeAdmissibility, Violation,
};
use crate::quotient::QuotientRegistry;
use crate::selmerdims::{
    ArithmeticInputs, ArithmeticSupplied, ConditionalFlag, QuotientDescriptor, QuotientKind,
    SelmerError,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("prime {p} is inadmissible: {reasons:?}")]
    Inadmissible { p: u64, reasons: Vec<Violation> },
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}

impl AnalysisError {
    /// 2 invalid input, 3 inadmissible prime, 4 inconsistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            AnalysisError::Invalid(_) => 2,
            AnalysisError::Inadmissible { .. } => 3,
            AnalysisError::Inconsistent(_) => 4,
        }
    }
}

impl From<CurveError> for AnalysisError {
    fn from(e: CurveError) -> Self {
        AnalysisError::Invalid(e.to_string())
    }
}

impl From<SelmerError> for AnalysisError {
    fn from(e: SelmerError) -> Self {
        match e {
            SelmerError::InputInconsistency(m) => AnalysisError::Inconsistent(m),
            SelmerError::UnknownQuotient(_) => AnalysisError::Invalid(e.to_string()),
        }
    }
}

impl From<PointCountError> for AnalysisError {
    fn from(e: PointCountError) -> Self {
        match e {
            PointCountError::Inadmissible { p, reasons } => {
                AnalysisError::Inadmissible { p, reasons }
            }
            other => AnalysisError::Invalid(other.to_string()),
        }
    }
}

impl From<CriteriaError> for AnalysisError {
    fn from(e: CriteriaError) -> Self {
        match e {
            CriteriaError::PointCount(pc) => pc.into(),
            CriteriaError::Overflow => AnalysisError::Inconsistent(e.to_string()),
            other => AnalysisError::Invalid(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionSelection {
    Generic,
    Refined,
    Both,
}

impl ReductionSelection {
    fn modes(self) -> &'static [ReductionMode] {
        match self {
            ReductionSelection::Generic => &[ReductionMode::Generic],
            ReductionSelection::Refined => &[ReductionMode::Refined],
            ReductionSelection::Both => &[ReductionMode::Generic, ReductionMode::Refined],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisOptions {
    pub variant: Variant,
    pub quotients: Vec<String>,
    pub reduction_mode: ReductionSelection,
    pub depth1: bool,
    pub truncation: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            variant: Variant::Selmer,
            quotients: vec!["all".into()],
            reduction_mode: ReductionSelection::Both,
            depth1: false,
            truncation: DEFAULT_TRUNCATION,
        }
    }
}

/// One analysis job, as read from a JSON request file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisRequest {
    pub curve: CurveSpec,
    /// May be omitted for genus 0 curves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arithmetic: Option<ArithmeticSupplied>,
    #[serde(rename = "S", default)]
    pub s_primes: Vec<u64>,
    pub p: u64,
    #[serde(default)]
    pub bad_components: BTreeMap<u64, u64>,
    #[serde(default)]
    pub options: AnalysisOptions,
    /// `#Y(F_p)`; required for the generic family, a cross-check otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_count: Option<u64>,
}

impl AnalysisRequest {
    pub fn from_json(text: &str) -> Result<Self, AnalysisError> {
        serde_json::from_str(text).map_err(|e| AnalysisError::Invalid(format!("request: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountSource {
    Computed,
    Supplied,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCountReport {
    pub source: CountSource,
    pub y_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<PointCount>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hasse_weil_margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub kind: QuotientKind,
    pub descriptor: QuotientDescriptor,
    pub hs_global: TruncatedSeries,
    pub hs_local: TruncatedSeries,
    pub finiteness: MarginVerdict,
    pub finiteness_criterion: Criterion,
    /// Coleman margins for weights `1..=truncation`.
    pub coleman_margins: Vec<MarginVerdict>,
    pub coleman_weight2: MarginVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coleman_criterion: Option<Criterion>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSection {
    pub reduction: ReductionTypeCount,
    pub bound: BoundReport,
    /// The criterion licensing the bound; `None` means it is reported
    /// without justification.
    pub justified_by: Option<Criterion>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub curve: CurveSpec,
    pub invariants: GeometricInvariants,
    pub arithmetic: ArithmeticInputs,
    #[serde(rename = "S")]
    pub s_primes: Vec<u64>,
    pub p: u64,
    pub variant: Variant,
    pub depth1: bool,
    pub truncation: usize,
    pub admissibility: PrimeAdmissibility,
    pub point_count: PointCountReport,
    pub quotients: BTreeMap<String, QuotientReport>,
    pub criteria: BTreeMap<Variant, CriteriaReport>,
    pub bounds: BTreeMap<ReductionMode, BoundSection>,
    pub conditional_flags: BTreeSet<ConditionalFlag>,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn headline_criteria(&self) -> &CriteriaReport {
        &self.criteria[&self.variant]
    }
}

/// Same inputs with the weight -1 global dimension taken from `variant`.
fn arith_for_variant(arith: &ArithmeticInputs, variant: Variant) -> ArithmeticInputs {
    match variant {
        Variant::Selmer => arith.clone(),
        Variant::BalakrishnanDogra => ArithmeticInputs {
            r_p: arith.r,
            ..arith.clone()
        },
    }
}

fn check_primes(req: &AnalysisRequest) -> Result<Vec<u64>, AnalysisError> {
    let mut s = req.s_primes.clone();
    s.sort_unstable();
    s.dedup();
    if let Some(q) = s.iter().find(|q| !is_prime(**q)) {
        return Err(AnalysisError::Invalid(format!(
            "S contains {q}, which is not prime"
        )));
    }
    if !is_prime(req.p) {
        return Err(AnalysisError::Invalid(format!(
            "p = {} is not prime",
            req.p
        )));
    }
    if let Some(l) = req.bad_components.keys().find(|l| !is_prime(**l)) {
        return Err(AnalysisError::Invalid(format!(
            "bad_components key {l} is not prime"
        )));
    }
    if let Some((l, _)) = req.bad_components.iter().find(|(_, n)| **n == 0) {
        return Err(AnalysisError::Invalid(format!("n_{l} must be at least 1")));
    }
    let t = req.options.truncation;
    if !(2..=MAX_TRUNCATION).contains(&t) {
        return Err(AnalysisError::Invalid(format!(
            "truncation must lie in 2..={MAX_TRUNCATION}, got {t}"
        )));
    }
    Ok(s)
}

pub fn analyze(req: &AnalysisRequest) -> Result<AnalysisReport, AnalysisError> {
    let s_primes = check_primes(req)?;
    let s = s_primes.len() as u64;
    let opts = &req.options;
    let curve = validate(&req.curve)?;
    let inv = curve.invariants()?;
    let mut warnings = curve.warnings.clone();

    let arith = match (&req.arithmetic, inv.g) {
        (Some(a), g) => {
            let (arith, w) = a.resolve(g)?;
            warnings.extend(w);
            arith
        }
        (None, 0) => ArithmeticInputs::genus_zero(),
        (None, g) => {
            return Err(AnalysisError::Invalid(format!(
                "\"arithmetic\" is required for a curve of genus {g}"
            )))
        }
    };

    let generic = matches!(req.curve, CurveSpec::Generic { .. });
    let admissibility = if generic {
        if s_primes.contains(&req.p) {
            return Err(AnalysisError::Inadmissible {
                p: req.p,
                reasons: vec![Violation::InS],
            });
        }
        warnings.push(format!(
            "generic family: good reduction at p = {} is assumed, not checked",
            req.p
        ));
        PrimeAdmissibility {
            p: req.p,
            admissible: true,
            reasons: vec![],
        }
    } else {
        admissible_prime(&curve, req.p, &s_primes)?
    };
    if !admissibility.admissible {
        return Err(AnalysisError::Inadmissible {
            p: req.p,
            reasons: admissibility.reasons,
        });
    }

    let point_count = if generic {
        let y = req.y_count.ok_or_else(|| {
            AnalysisError::Invalid("\"y_count\" is required for the generic family".into())
        })?;
        PointCountReport {
            source: CountSource::Supplied,
            y_count: y,
            counts: None,
            hasse_weil_margin: None,
        }
    } else {
        let pc = count_points(&curve, req.p)?;
        if let Some(y) = req.y_count {
            if y != pc.y_count {
                return Err(AnalysisError::Inconsistent(format!(
                    "supplied y_count = {y} but #Y(F_{}) = {}",
                    req.p, pc.y_count
                )));
            }
        }
        PointCountReport {
            source: CountSource::Computed,
            y_count: pc.y_count,
            counts: Some(pc),
            hasse_weil_margin: Some(hasse_weil_margin(&inv, &pc, req.p)),
        }
    };

    let arith_q = arith_for_variant(&arith, opts.variant);
    let registry = QuotientRegistry::builtin();
    let mut quotients = BTreeMap::new();
    for model in registry.select(&opts.quotients)? {
        let desc = model.build(&inv, &arith_q)?;
        let m = opts.truncation;
        let coleman_margins = (1..=m).map(|w| coleman_verdict(&desc, s, w)).collect();
        quotients.insert(
            model.name().to_string(),
            QuotientReport {
                kind: model.kind(),
                hs_global: hs_global(&desc, s, m),
                hs_local: hs_local(&desc, m),
                finiteness: finiteness_verdict(&desc, s),
                finiteness_criterion: model.finiteness_criterion(),
                coleman_margins,
                coleman_weight2: coleman_verdict(&desc, s, 2),
                coleman_criterion: model.coleman_criterion(),
                descriptor: desc,
            },
        );
    }

    let criteria: BTreeMap<Variant, CriteriaReport> = [Variant::Selmer, Variant::BalakrishnanDogra]
        .into_iter()
        .map(|v| (v, criteria_values(&inv, &arith, s, v)))
        .collect();
    let headline = &criteria[&opts.variant];

    for ell in &s_primes {
        if !req.bad_components.contains_key(ell) {
            warnings.push(format!(
                "n_{ell} not supplied for {ell} in S: using n_{ell} := 1"
            ));
        }
    }
    if !generic {
        let (candidates, complete) = curve.candidate_bad_primes();
        let unlisted: Vec<String> = candidates
            .iter()
            .filter(|l| !s_primes.contains(l) && !req.bad_components.contains_key(l))
            .map(|l| l.to_string())
            .collect();
        if !unlisted.is_empty() {
            warnings.push(format!(
                "possible bad primes without n_l: {}; using n_l := 1",
                unlisted.join(", ")
            ));
        }
        if !complete {
            warnings
                .push("candidate bad primes incomplete: a large cofactor was not factored".into());
        }
    } else {
        warnings.push("generic family: primes of bad reduction unknown; unlisted n_l := 1".into());
    }

    let bi_for = |mode| BoundInputs {
        s_primes: s_primes.clone(),
        p: req.p,
        bad_components: req.bad_components.clone(),
        y_count: point_count.y_count,
        reduction_mode: mode,
    };
    let justified_by = bound_justification(headline, opts.depth1);
    if justified_by.is_none() {
        warnings.push(if opts.depth1 {
            format!(
                "{} <= 0: the depth-1 bound is not justified",
                Criterion::Depth1.symbol(opts.variant)
            )
        } else {
            format!(
                "{} <= 0 and {} <= 0: the bound is not justified",
                Criterion::Beta.symbol(opts.variant),
                Criterion::Delta.symbol(opts.variant)
            )
        });
    }
    let reductions = ReductionRegistry::builtin();
    let mut bounds = BTreeMap::new();
    for &mode in opts.reduction_mode.modes() {
        if mode == ReductionMode::Refined
            && generic
            && opts.reduction_mode == ReductionSelection::Both
        {
            warnings.push("refined reduction types need an explicit curve family; skipped".into());
            continue;
        }
        let bi = bi_for(mode);
        let rt = reductions.by_mode(mode).count(&curve, &inv, &bi)?;
        let rep = bound(&inv, &bi, rt.total);
        if rep.total_bound >= 2f64.powi(52) {
            warnings.push(format!(
                "{} bound exceeds 2^52; its floor may be inexact",
                mode.name()
            ));
        }
        bounds.insert(
            mode,
            BoundSection {
                reduction: rt,
                bound: rep,
                justified_by,
            },
        );
    }

    Ok(AnalysisReport {
        curve: req.curve.clone(),
        invariants: inv,
        conditional_flags: headline.conditional_flags.clone(),
        arithmetic: arith,
        s_primes,
        p: req.p,
        variant: opts.variant,
        depth1: opts.depth1,
        truncation: opts.truncation,
        admissibility,
        point_count,
        quotients,
        criteria,
        bounds,
        warnings,
    })
}
