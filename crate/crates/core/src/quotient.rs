//! Fundamental-group quotients as interchangeable strategies.
//!
//! Each quotient contributes the same weight -1 piece (`V_p Jac_X`) and
//! differs in its weight -2 piece. Models are registered under a short name
//! (`ab`, `abat`, `w2`) and looked up at runtime.

use crate::criteria::Criterion;
use crate::curvemodel::GeometricInvariants;
use crate::selmerdims::{
    artin_tate_dims, cuspidal_inertia_dims, tate_module_dims, wedge_square_dims, ArithmeticInputs,
    GradedPieceDims, QuotientDescriptor, QuotientKind, SelmerError,
};

pub trait QuotientModel: Send + Sync {
    /// Registry key.
    fn name(&self) -> &'static str;
    fn kind(&self) -> QuotientKind;
    fn summary(&self) -> &'static str;

    /// Summands of the weight -2 graded piece besides the cuspidal inertia.
    fn extra_weight_two(
        &self,
        inv: &GeometricInvariants,
        arith: &ArithmeticInputs,
    ) -> Result<Option<GradedPieceDims>, SelmerError>;

    /// Criterion equal to the dimension-count finiteness margin.
    fn finiteness_criterion(&self) -> Criterion;

    /// Criterion equal to the weight-2 Hilbert series margin, if any.
    fn coleman_criterion(&self) -> Option<Criterion>;

    fn build(
        &self,
        inv: &GeometricInvariants,
        arith: &ArithmeticInputs,
    ) -> Result<QuotientDescriptor, SelmerError> {
        let inertia = cuspidal_inertia_dims(inv);
        let weight_two = match self.extra_weight_two(inv, arith)? {
            Some(extra) => inertia.direct_sum(&extra),
            None => inertia,
        };
        QuotientDescriptor::new(
            self.kind(),
            vec![tate_module_dims(inv.g, arith.r_p), weight_two],
        )
    }
}

/// `U_Y^ab`: extension of `V_p Jac_X` by the cuspidal inertia.
pub struct Abelianized;

impl QuotientModel for Abelianized {
    fn name(&self) -> &'static str {
        "ab"
    }

    fn kind(&self) -> QuotientKind {
        QuotientKind::Abelianized
    }

    fn summary(&self) -> &'static str {
        "abelianization (depth 1)"
    }

    fn extra_weight_two(
        &self,
        _inv: &GeometricInvariants,
        _arith: &ArithmeticInputs,
    ) -> Result<Option<GradedPieceDims>, SelmerError> {
        Ok(None)
    }

    fn finiteness_criterion(&self) -> Criterion {
        Criterion::Alpha1
    }

    fn coleman_criterion(&self) -> Option<Criterion> {
        None
    }
}

/// Depth-2 quotient whose weight -2 piece adds the Artin-Tate
/// representation `W = (Q_p (x) NS(Jac over Qbar))^v(1)`.
pub struct AbelianByArtinTate;

impl QuotientModel for AbelianByArtinTate {
    fn name(&self) -> &'static str {
        "abat"
    }

    fn kind(&self) -> QuotientKind {
        QuotientKind::AbelianByArtinTate
    }

    fn summary(&self) -> &'static str {
        "abelian-by-Artin-Tate depth 2 quotient"
    }

    fn extra_weight_two(
        &self,
        _inv: &GeometricInvariants,
        arith: &ArithmeticInputs,
    ) -> Result<Option<GradedPieceDims>, SelmerError> {
        if arith.rho_f < arith.rho {
            return Err(SelmerError::InputInconsistency("rho_f < rho".into()));
        }
        let (global, local) = artin_tate_dims(arith.rho_geo, arith.rho, arith.rho_f - arith.rho)?;
        Ok(Some(GradedPieceDims {
            weight: -2,
            dim_global: global,
            dim_local: local,
            label: "Artin-Tate W".into(),
        }))
    }

    fn finiteness_criterion(&self) -> Criterion {
        Criterion::Alpha2
    }

    fn coleman_criterion(&self) -> Option<Criterion> {
        Some(Criterion::Beta)
    }
}

/// The full weight >= -2 quotient `U_Y / W_{-3} U_Y`.
pub struct FullWeightTwo;

impl QuotientModel for FullWeightTwo {
    fn name(&self) -> &'static str {
        "w2"
    }

    fn kind(&self) -> QuotientKind {
        QuotientKind::FullWeightTwo
    }

    fn summary(&self) -> &'static str {
        "full weight >= -2 quotient"
    }

    fn extra_weight_two(
        &self,
        inv: &GeometricInvariants,
        arith: &ArithmeticInputs,
    ) -> Result<Option<GradedPieceDims>, SelmerError> {
        let (global, local) = wedge_square_dims(inv.g, arith.rho, arith.h_bk)?;
        Ok(Some(GradedPieceDims {
            weight: -2,
            dim_global: global,
            dim_local: local,
            label: "wedge^2 V_p Jac".into(),
        }))
    }

    fn finiteness_criterion(&self) -> Criterion {
        Criterion::Gamma
    }

    fn coleman_criterion(&self) -> Option<Criterion> {
        Some(Criterion::Delta)
    }
}

/// Name-keyed collection of quotient models, in registration order.
pub struct QuotientRegistry {
    models: Vec<Box<dyn QuotientModel>>,
}

impl QuotientRegistry {
    pub fn empty() -> Self {
        Self { models: Vec::new() }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(Abelianized)).unwrap();
        reg.register(Box::new(AbelianByArtinTate)).unwrap();
        reg.register(Box::new(FullWeightTwo)).unwrap();
        reg
    }

    /// Adds a model; names must be unique.
    pub fn register(&mut self, model: Box<dyn QuotientModel>) -> Result<(), SelmerError> {
        if self.models.iter().any(|m| m.name() == model.name()) {
            return Err(SelmerError::InputInconsistency(format!(
                "quotient '{}' registered twice",
                model.name()
            )));
        }
        self.models.push(model);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&dyn QuotientModel, SelmerError> {
        self.models
            .iter()
            .find(|m| m.name() == name)
            .map(|m| m.as_ref())
            .ok_or_else(|| SelmerError::UnknownQuotient(name.into()))
    }

    pub fn by_kind(&self, kind: QuotientKind) -> &dyn QuotientModel {
        self.models
            .iter()
            .find(|m| m.kind() == kind)
            .map(|m| m.as_ref())
            .expect("every quotient kind has a built-in model")
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.models.iter().map(|m| m.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn QuotientModel> {
        self.models.iter().map(|m| m.as_ref())
    }

    /// Resolves a selection such as `all`, `ab` or `ab,w2`.
    pub fn select(&self, selection: &[String]) -> Result<Vec<&dyn QuotientModel>, SelmerError> {
        if selection.iter().any(|s| s == "all") {
            return Ok(self.iter().collect());
        }
        let mut out: Vec<&dyn QuotientModel> = Vec::new();
        for name in selection {
            let m = self.get(name)?;
            if !out.iter().any(|o| o.name() == m.name()) {
                out.push(m);
            }
        }
        Ok(out)
    }
}
