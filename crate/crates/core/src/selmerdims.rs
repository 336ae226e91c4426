//! Global and local Bloch-Kato Selmer dimensions of the weight -1 and -2
//! graded pieces of the fundamental-group quotients.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curvemodel::GeometricInvariants;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SelmerError {
    #[error("InputInconsistency: {0}")]
    InputInconsistency(String),
    #[error("unknown quotient '{0}'")]
    UnknownQuotient(String),
}

/// Facts that a reported value silently depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionalFlag {
    /// `r_p` was not supplied and was taken equal to `r`.
    AssumedSha,
    /// `h_BK` was not supplied and was taken to be 0.
    AssumedBlochKato,
}

impl fmt::Display for ConditionalFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionalFlag::AssumedSha => write!(f, "assumed_sha"),
            ConditionalFlag::AssumedBlochKato => write!(f, "assumed_bloch_kato"),
        }
    }
}

/// Arithmetic data as supplied by the user; unset fields get defaults.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArithmeticSupplied {
    pub r: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_p: Option<u64>,
    pub rho: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_f: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_geo: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_bk: Option<u64>,
}

/// Fully resolved arithmetic inputs `(r, r_p, rho, rho_f, rho_geo, h_BK)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithmeticInputs {
    pub r: u64,
    pub r_p: u64,
    pub rho: u64,
    pub rho_f: u64,
    pub rho_geo: u64,
    pub h_bk: u64,
    pub flags: BTreeSet<ConditionalFlag>,
}

impl ArithmeticInputs {
    /// All values supplied explicitly; no conditional flags.
    pub fn exact(r: u64, r_p: u64, rho: u64, rho_f: u64, rho_geo: u64, h_bk: u64) -> Self {
        Self {
            r,
            r_p,
            rho,
            rho_f,
            rho_geo,
            h_bk,
            flags: BTreeSet::new(),
        }
    }

    /// Trivial Jacobian: every rank and Picard number vanishes.
    pub fn genus_zero() -> Self {
        Self::exact(0, 0, 0, 0, 0, 0)
    }

    /// Checks the inputs against the genus.
    pub fn check(&self, g: u64) -> Result<(), SelmerError> {
        let bad = |msg: String| Err(SelmerError::InputInconsistency(msg));
        if self.r_p < self.r {
            return bad(format!("r_p = {} is smaller than r = {}", self.r_p, self.r));
        }
        if !(self.rho <= self.rho_f && self.rho_f <= self.rho_geo) {
            return bad(format!(
                "need rho <= rho_f <= rho_geo, got {} / {} / {}",
                self.rho, self.rho_f, self.rho_geo
            ));
        }
        if g >= 1 && self.rho == 0 {
            return bad("rho >= 1 whenever g >= 1".into());
        }
        if self.rho_geo > g * g {
            return bad(format!(
                "rho_geo = {} exceeds g^2 = {}",
                self.rho_geo,
                g * g
            ));
        }
        if g == 0 && (self.r_p != 0 || self.h_bk != 0) {
            return bad("a genus 0 curve has trivial Jacobian: all ranks and h_BK vanish".into());
        }
        Ok(())
    }
}

impl ArithmeticSupplied {
    /// Fills defaults (`r_p := r`, `h_BK := 0`, `rho_f := rho`,
    /// `rho_geo := rho_f`) and returns a warning for each default used.
    pub fn resolve(&self, g: u64) -> Result<(ArithmeticInputs, Vec<String>), SelmerError> {
        let mut warnings = Vec::new();
        let mut flags = BTreeSet::new();
        let r_p = self.r_p.unwrap_or_else(|| {
            flags.insert(ConditionalFlag::AssumedSha);
            warnings.push(format!(
                "r_p not supplied: using r_p := r = {} (assumed_sha)",
                self.r
            ));
            self.r
        });
        let h_bk = self.h_bk.unwrap_or_else(|| {
            if g > 0 {
                flags.insert(ConditionalFlag::AssumedBlochKato);
                warnings.push("h_BK not supplied: using h_BK := 0 (assumed_bloch_kato)".into());
            }
            0
        });
        let rho_f = self.rho_f.unwrap_or_else(|| {
            if g > 0 {
                warnings.push(format!(
                    "rho_f not supplied: using rho_f := rho = {}",
                    self.rho
                ));
            }
            self.rho
        });
        let rho_geo = self.rho_geo.unwrap_or_else(|| {
            if g > 0 {
                warnings.push(format!(
                    "rho_geo not supplied: using rho_geo := rho_f = {rho_f}"
                ));
            }
            rho_f
        });
        let arith = ArithmeticInputs {
            r: self.r,
            r_p,
            rho: self.rho,
            rho_f,
            rho_geo,
            h_bk,
            flags,
        };
        arith.check(g)?;
        Ok((arith, warnings))
    }
}

/// Dimensions of `H^1_f(G_Q, gr_w U)` and `H^1_f(G_p, gr_w U)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPieceDims {
    pub weight: i8,
    pub dim_global: u64,
    pub dim_local: u64,
    pub label: String,
}

impl GradedPieceDims {
    pub fn new(weight: i8, dim_global: u64, dim_local: u64, label: &str) -> Self {
        Self {
            weight,
            dim_global,
            dim_local,
            label: label.into(),
        }
    }

    /// Direct sum of two summands of the same weight.
    pub fn direct_sum(&self, other: &Self) -> Self {
        debug_assert_eq!(self.weight, other.weight);
        Self {
            weight: self.weight,
            dim_global: self.dim_global + other.dim_global,
            dim_local: self.dim_local + other.dim_local,
            label: format!("{} + {}", self.label, other.label),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QuotientKind {
    Abelianized,
    AbelianByArtinTate,
    FullWeightTwo,
}

/// Weight-graded dimension data of a fundamental-group quotient: exactly
/// one piece in weight -1 and one in weight -2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DescriptorRepr")]
pub struct QuotientDescriptor {
    pub kind: QuotientKind,
    pub pieces: Vec<GradedPieceDims>,
}

#[derive(Deserialize)]
struct DescriptorRepr {
    kind: QuotientKind,
    pieces: Vec<GradedPieceDims>,
}

impl TryFrom<DescriptorRepr> for QuotientDescriptor {
    type Error = SelmerError;

    fn try_from(r: DescriptorRepr) -> Result<Self, Self::Error> {
        Self::new(r.kind, r.pieces)
    }
}

impl QuotientDescriptor {
    pub fn new(kind: QuotientKind, mut pieces: Vec<GradedPieceDims>) -> Result<Self, SelmerError> {
        pieces.sort_by_key(|p| std::cmp::Reverse(p.weight));
        let weights: Vec<i8> = pieces.iter().map(|p| p.weight).collect();
        if weights != [-1, -2] {
            return Err(SelmerError::InputInconsistency(format!(
                "a descriptor needs exactly one piece of weight -1 and -2, got weights {weights:?}"
            )));
        }
        Ok(Self { kind, pieces })
    }

    pub fn piece(&self, weight: i8) -> &GradedPieceDims {
        self.pieces
            .iter()
            .find(|p| p.weight == weight)
            .expect("descriptor has both weights")
    }

    /// `sum_k dim_local - dim_global` over the graded pieces.
    pub fn dimension_gap(&self) -> i64 {
        self.pieces
            .iter()
            .map(|p| p.dim_local as i64 - p.dim_global as i64)
            .sum()
    }
}

/// Weight -1: `V_p Jac_X`, dimensions `(r_p, g)`.
pub fn tate_module_dims(g: u64, r_p: u64) -> GradedPieceDims {
    GradedPieceDims::new(-1, r_p, g, "V_p Jac")
}

/// Weight -2 cuspidal summand: `(n1 + n2 - #|D|, n - 1)`.
pub fn cuspidal_inertia_dims(inv: &GeometricInvariants) -> GradedPieceDims {
    GradedPieceDims::new(
        -2,
        inv.n1 + inv.n2 - inv.d_closed,
        inv.n - 1,
        "cuspidal inertia",
    )
}

fn nonneg(value: i64, what: &str) -> Result<u64, SelmerError> {
    u64::try_from(value).map_err(|_| {
        SelmerError::InputInconsistency(format!("{what} would have negative dimension {value}"))
    })
}

/// Artin-Tate piece `W`: global `-h0(W^v(1)) + dim W - dim W^(sigma=1)`,
/// local `dim W`.
pub fn artin_tate_dims(
    dim_w: u64,
    h0_dual: u64,
    dim_sigma_fixed: u64,
) -> Result<(u64, u64), SelmerError> {
    let global = dim_w as i64 - h0_dual as i64 - dim_sigma_fixed as i64;
    Ok((nonneg(global, "H^1_f(G_Q, W)")?, dim_w))
}

/// `wedge^2 V_p Jac_X`: global `g(g+1)/2 - rho + h_BK`, local `g(3g-1)/2`.
pub fn wedge_square_dims(g: u64, rho: u64, h_bk: u64) -> Result<(u64, u64), SelmerError> {
    if g >= 1 && rho == 0 {
        return Err(SelmerError::InputInconsistency(
            "rho >= 1 whenever g >= 1".into(),
        ));
    }
    let global = (g * (g + 1) / 2) as i64 - rho as i64 + h_bk as i64;
    Ok((
        nonneg(global, "H^1_f(G_Q, wedge^2 V_p Jac)")?,
        (3 * g * g - g) / 2,
    ))
}

/// Poitou-Tate expression for `dim H^1_f(G_Q, W)`:
/// `h0(W) + h1f(W^v(1)) - h0(W^v(1)) + h1f(G_p, W) - dim W^(sigma=1)`.
pub fn poitou_tate_dim(
    h0_w: u64,
    h1f_dual: u64,
    h0_dual: u64,
    h1f_local: u64,
    dim_sigma_fixed: u64,
) -> i64 {
    h0_w as i64 + h1f_dual as i64 - h0_dual as i64 + h1f_local as i64 - dim_sigma_fixed as i64
}

/// Builds the descriptor of the named quotient through the built-in registry.
pub fn build_quotient(
    kind: QuotientKind,
    inv: &GeometricInvariants,
    arith: &ArithmeticInputs,
) -> Result<QuotientDescriptor, SelmerError> {
    crate::quotient::QuotientRegistry::builtin()
        .by_kind(kind)
        .build(inv, arith)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line() -> GeometricInvariants {
        GeometricInvariants::new(0, 3, 3, 0, 3).unwrap()
    }

    #[test]
    fn tate_module_examples() {
        assert_eq!(
            (
                tate_module_dims(0, 0).dim_global,
                tate_module_dims(0, 0).dim_local
            ),
            (0, 0)
        );
        let t = tate_module_dims(2, 2);
        assert_eq!((t.dim_global, t.dim_local), (2, 2));
        let t = tate_module_dims(3, 1);
        assert_eq!((t.dim_global, t.dim_local, t.weight), (1, 3, -1));
    }

    #[test]
    fn inertia_examples() {
        let i = cuspidal_inertia_dims(&line());
        assert_eq!((i.dim_global, i.dim_local), (0, 2));
        let sup = GeometricInvariants::new(2, 1, 1, 0, 1).unwrap();
        let i = cuspidal_inertia_dims(&sup);
        assert_eq!((i.dim_global, i.dim_local), (0, 0));
        let hyp = GeometricInvariants::new(2, 2, 0, 1, 1).unwrap();
        let i = cuspidal_inertia_dims(&hyp);
        assert_eq!((i.dim_global, i.dim_local), (0, 1));
    }

    #[test]
    fn artin_tate_examples() {
        assert_eq!(artin_tate_dims(0, 0, 0).unwrap(), (0, 0));
        assert_eq!(artin_tate_dims(1, 1, 0).unwrap(), (0, 1));
        assert_eq!(artin_tate_dims(3, 1, 2).unwrap(), (0, 3));
        assert!(matches!(
            artin_tate_dims(1, 1, 1),
            Err(SelmerError::InputInconsistency(_))
        ));
    }

    #[test]
    fn wedge_square_examples() {
        assert_eq!(wedge_square_dims(0, 0, 0).unwrap(), (0, 0));
        assert_eq!(wedge_square_dims(2, 1, 0).unwrap(), (2, 5));
        assert_eq!(wedge_square_dims(1, 1, 0).unwrap(), (0, 1));
        assert!(wedge_square_dims(1, 2, 0).is_err());
        assert!(wedge_square_dims(2, 0, 0).is_err());
    }

    #[test]
    fn poitou_tate_examples() {
        assert_eq!(poitou_tate_dim(0, 0, 0, 0, 0), 0);
        assert_eq!(poitou_tate_dim(0, 0, 1, 5, 2), 2);
        for (w, h0, fixed) in [(1u64, 1u64, 0u64), (3, 1, 2), (5, 2, 1)] {
            let (global, local) = artin_tate_dims(w, h0, fixed).unwrap();
            assert_eq!(poitou_tate_dim(0, 0, h0, local, fixed), global as i64);
        }
    }

    #[test]
    fn build_examples() {
        let d = build_quotient(
            QuotientKind::Abelianized,
            &line(),
            &ArithmeticInputs::genus_zero(),
        )
        .unwrap();
        assert_eq!(
            d.pieces
                .iter()
                .map(|p| (p.weight, p.dim_global, p.dim_local))
                .collect::<Vec<_>>(),
            vec![(-1, 0, 0), (-2, 0, 2)]
        );
        let hyp = GeometricInvariants::new(2, 2, 0, 1, 1).unwrap();
        let arith = ArithmeticInputs::exact(2, 2, 1, 1, 1, 0);
        let d = build_quotient(QuotientKind::AbelianByArtinTate, &hyp, &arith).unwrap();
        assert_eq!(
            d.pieces
                .iter()
                .map(|p| (p.weight, p.dim_global, p.dim_local))
                .collect::<Vec<_>>(),
            vec![(-1, 2, 2), (-2, 0, 2)]
        );
        let d = build_quotient(
            QuotientKind::FullWeightTwo,
            &line(),
            &ArithmeticInputs::genus_zero(),
        )
        .unwrap();
        assert_eq!(
            d.pieces
                .iter()
                .map(|p| (p.weight, p.dim_global, p.dim_local))
                .collect::<Vec<_>>(),
            vec![(-1, 0, 0), (-2, 0, 2)]
        );
    }

    #[test]
    fn resolve_defaults_raise_flags() {
        let (a, w) = ArithmeticSupplied {
            r: 1,
            rho: 1,
            ..Default::default()
        }
        .resolve(2)
        .unwrap();
        assert_eq!(a.r_p, 1);
        assert_eq!((a.rho_f, a.rho_geo, a.h_bk), (1, 1, 0));
        assert!(a.flags.contains(&ConditionalFlag::AssumedSha));
        assert!(a.flags.contains(&ConditionalFlag::AssumedBlochKato));
        assert_eq!(w.len(), 4);

        let err = ArithmeticSupplied {
            r: 3,
            r_p: Some(2),
            rho: 1,
            ..Default::default()
        }
        .resolve(2);
        assert!(matches!(err, Err(SelmerError::InputInconsistency(_))));
        assert!(ArithmeticSupplied::default().resolve(1).is_err());
    }

    #[test]
    fn descriptor_requires_both_weights() {
        let only = vec![tate_module_dims(1, 0)];
        assert!(QuotientDescriptor::new(QuotientKind::Abelianized, only).is_err());
        let json = r#"{"kind":"Abelianized","pieces":[{"weight":-1,"dim_global":0,"dim_local":0,"label":"a"}]}"#;
        assert!(serde_json::from_str::<QuotientDescriptor>(json).is_err());
    }

    fn consistent_inputs() -> impl Strategy<Value = (GeometricInvariants, ArithmeticInputs)> {
        (1u64..=6, 0u64..=4, 0u64..=3)
            .prop_filter("affine", |(_, n1, n2)| n1 + n2 >= 1)
            .prop_flat_map(|(g, n1, n2)| {
                (
                    Just((g, n1, n2)),
                    1..=n1 + n2,
                    1u64..=g * g,
                    0u64..=5,
                    0u64..=2,
                    0u64..=3,
                )
            })
            .prop_flat_map(|(t, d, rho_geo, r, extra, h)| {
                (Just((t, d, rho_geo, r, extra, h)), 1..=rho_geo)
            })
            .prop_flat_map(|(t, rho_f)| (Just(t), Just(rho_f), 1..=rho_f))
            .prop_map(|(((g, n1, n2), d, rho_geo, r, extra, h), rho_f, rho)| {
                let inv = GeometricInvariants::new(g, n1 + 2 * n2, n1, n2, d).unwrap();
                let arith = ArithmeticInputs::exact(r, r + extra, rho, rho_f, rho_geo, h);
                (inv, arith)
            })
    }

    proptest! {
        #[test]
        fn artin_tate_weight_two_global_identity((inv, arith) in consistent_inputs()) {
            let d = build_quotient(QuotientKind::AbelianByArtinTate, &inv, &arith).unwrap();
            prop_assert_eq!(
                d.piece(-2).dim_global,
                (inv.n1 + inv.n2 - inv.d_closed) + (arith.rho_geo - arith.rho_f)
            );
        }

        #[test]
        fn full_minus_abelian_local_is_wedge_local((inv, arith) in consistent_inputs()) {
            let ab = build_quotient(QuotientKind::Abelianized, &inv, &arith).unwrap();
            let full = build_quotient(QuotientKind::FullWeightTwo, &inv, &arith);
            if let Ok(full) = full {
                prop_assert_eq!(
                    full.piece(-2).dim_local - ab.piece(-2).dim_local,
                    inv.g * (3 * inv.g - 1) / 2
                );
            }
        }
    }

    #[test]
    fn poitou_tate_reproduces_wedge_global() {
        for g in 0u64..=6 {
            let rhos: Vec<u64> = if g == 0 {
                vec![0]
            } else {
                (1..=g * g).collect()
            };
            for rho in rhos {
                for h in 0..=2 {
                    let Ok((global, local)) = wedge_square_dims(g, rho, h) else {
                        continue;
                    };
                    let pt = poitou_tate_dim(0, h, rho, local, g * g.saturating_sub(1));
                    assert_eq!(pt, global as i64, "g={g} rho={rho} h={h}");
                }
            }
        }
    }
}
