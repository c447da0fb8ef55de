//! Triangular norms and conorms.
//!
//! Operators are immutable, cheaply cloneable evaluators over `[0, 1]²`,
//! optionally carrying an additive generator. Built-in families use their
//! closed forms; generated operators evaluate `s⁻¹(s(1) ∧ (s(x) + s(y)))`
//! (and the t-norm analogue).

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::{
    lukasiewicz_conorm_generator, lukasiewicz_norm_generator, prob_sum_generator,
    product_generator, AdditiveGenerator, Direction,
};
use crate::plan::SamplingPlan;
use crate::scale::UnitValue;

pub type BinaryFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Structural facts about a t-conorm that other modules dispatch on.
#[derive(Clone, Debug)]
pub enum ConormFamily {
    Maximum,
    OrdinalSum(Box<OrdinalSumSpec>),
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormFamily {
    Minimum,
    Other,
}

/// Declared Archimedean type, read off the generator's endpoint value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArchimedeanKind {
    Strict,
    Nilpotent,
}

#[derive(Clone)]
pub struct TriangularConorm {
    label: String,
    eval: BinaryFn,
    generator: Option<AdditiveGenerator>,
    family: ConormFamily,
}

#[derive(Clone)]
pub struct TriangularNorm {
    label: String,
    eval: BinaryFn,
    generator: Option<AdditiveGenerator>,
    family: NormFamily,
}

impl fmt::Debug for TriangularConorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TriangularConorm")
            .field("label", &self.label)
            .field("generator", &self.generator)
            .finish()
    }
}

impl fmt::Debug for TriangularNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TriangularNorm")
            .field("label", &self.label)
            .field("generator", &self.generator)
            .finish()
    }
}

impl TriangularConorm {
    /// Wraps an arbitrary evaluator. No axiom is checked here; run
    /// [`crate::audit::check_law`] on the result if in doubt.
    pub fn from_fn(
        label: impl Into<String>,
        eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        generator: Option<AdditiveGenerator>,
    ) -> Self {
        TriangularConorm {
            label: label.into(),
            eval: Arc::new(eval),
            generator,
            family: ConormFamily::Other,
        }
    }

    pub fn maximum() -> Self {
        TriangularConorm {
            label: "max".into(),
            eval: Arc::new(f64::max),
            generator: None,
            family: ConormFamily::Maximum,
        }
    }

    pub fn prob_sum() -> Self {
        Self::from_fn("prob_sum", |x, y| x + y - x * y, Some(prob_sum_generator()))
    }

    pub fn lukasiewicz() -> Self {
        Self::from_fn(
            "lukasiewicz_conorm",
            |x, y| (x + y).min(1.0),
            Some(lukasiewicz_conorm_generator()),
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generator(&self) -> Option<&AdditiveGenerator> {
        self.generator.as_ref()
    }

    pub fn family(&self) -> &ConormFamily {
        &self.family
    }

    pub fn is_max(&self) -> bool {
        matches!(self.family, ConormFamily::Maximum)
    }

    pub fn ordinal_sum(&self) -> Option<&OrdinalSumSpec> {
        match &self.family {
            ConormFamily::OrdinalSum(spec) => Some(spec),
            _ => None,
        }
    }

    pub fn declared_kind(&self) -> Option<ArchimedeanKind> {
        self.generator.as_ref().map(|g| {
            if g.is_strict() {
                ArchimedeanKind::Strict
            } else {
                ArchimedeanKind::Nilpotent
            }
        })
    }

    pub fn is_strict(&self) -> bool {
        self.declared_kind() == Some(ArchimedeanKind::Strict)
    }

    #[inline]
    pub fn apply(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y).clamp(0.0, 1.0)
    }

    pub fn eval(&self, x: UnitValue, y: UnitValue) -> UnitValue {
        UnitValue::new(self.apply(x.get(), y.get())).expect("t-conorm output in [0, 1]")
    }

    pub fn evaluator(&self) -> BinaryFn {
        let op = self.clone();
        Arc::new(move |x, y| op.apply(x, y))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

impl TriangularNorm {
    pub fn from_fn(
        label: impl Into<String>,
        eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        generator: Option<AdditiveGenerator>,
    ) -> Self {
        TriangularNorm {
            label: label.into(),
            eval: Arc::new(eval),
            generator,
            family: NormFamily::Other,
        }
    }

    pub fn minimum() -> Self {
        TriangularNorm {
            label: "min".into(),
            eval: Arc::new(f64::min),
            generator: None,
            family: NormFamily::Minimum,
        }
    }

    pub fn product() -> Self {
        Self::from_fn("product", |x, y| x * y, Some(product_generator()))
    }

    pub fn lukasiewicz() -> Self {
        Self::from_fn(
            "lukasiewicz_norm",
            |x, y| (x + y - 1.0).max(0.0),
            Some(lukasiewicz_norm_generator()),
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generator(&self) -> Option<&AdditiveGenerator> {
        self.generator.as_ref()
    }

    pub fn family(&self) -> NormFamily {
        self.family
    }

    pub fn is_min(&self) -> bool {
        self.family == NormFamily::Minimum
    }

    pub fn declared_kind(&self) -> Option<ArchimedeanKind> {
        self.generator.as_ref().map(|g| {
            if g.is_strict() {
                ArchimedeanKind::Strict
            } else {
                ArchimedeanKind::Nilpotent
            }
        })
    }

    #[inline]
    pub fn apply(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y).clamp(0.0, 1.0)
    }

    pub fn eval(&self, x: UnitValue, y: UnitValue) -> UnitValue {
        UnitValue::new(self.apply(x.get(), y.get())).expect("t-norm output in [0, 1]")
    }

    pub fn evaluator(&self) -> BinaryFn {
        let op = self.clone();
        Arc::new(move |x, y| op.apply(x, y))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

#[derive(Clone, Debug)]
pub enum Builtin {
    Conorm(TriangularConorm),
    Norm(TriangularNorm),
}

impl Builtin {
    pub fn label(&self) -> &str {
        match self {
            Builtin::Conorm(s) => s.label(),
            Builtin::Norm(t) => t.label(),
        }
    }

    pub fn into_conorm(self) -> Option<TriangularConorm> {
        match self {
            Builtin::Conorm(s) => Some(s),
            Builtin::Norm(_) => None,
        }
    }

    pub fn into_norm(self) -> Option<TriangularNorm> {
        match self {
            Builtin::Norm(t) => Some(t),
            Builtin::Conorm(_) => None,
        }
    }
}

pub fn builtin(name: &str) -> Result<Builtin> {
    Ok(match name {
        "max" => Builtin::Conorm(TriangularConorm::maximum()),
        "prob_sum" => Builtin::Conorm(TriangularConorm::prob_sum()),
        "lukasiewicz_conorm" => Builtin::Conorm(TriangularConorm::lukasiewicz()),
        "min" => Builtin::Norm(TriangularNorm::minimum()),
        "product" => Builtin::Norm(TriangularNorm::product()),
        "lukasiewicz_norm" => Builtin::Norm(TriangularNorm::lukasiewicz()),
        other => return Err(Error::UnknownFamily(other.to_string())),
    })
}

/// `S(x, y) = s⁻¹(s(1) ∧ (s(x) + s(y)))`.
pub fn conorm_from_generator(s: AdditiveGenerator) -> Result<TriangularConorm> {
    if s.direction() != Direction::Increasing {
        return Err(Error::GeneratorShape(format!(
            "`{}` must be increasing to generate a t-conorm",
            s.label()
        )));
    }
    if s.apply(0.0) != 0.0 {
        return Err(Error::GeneratorShape(format!("`{}`: s(0) != 0", s.label())));
    }
    let g = s.clone();
    let cap = s.endpoint_value().to_f64();
    let eval = move |x: f64, y: f64| {
        if x == 0.0 {
            y
        } else if y == 0.0 {
            x
        } else {
            g.invert(cap.min(g.apply(x) + g.apply(y)))
        }
    };
    Ok(TriangularConorm::from_fn(format!("gen:{}", s.label()), eval, Some(s)))
}

/// `T(x, y) = t⁻¹(t(0) ∧ (t(x) + t(y)))`.
pub fn norm_from_generator(t: AdditiveGenerator) -> Result<TriangularNorm> {
    if t.direction() != Direction::Decreasing {
        return Err(Error::GeneratorShape(format!(
            "`{}` must be decreasing to generate a t-norm",
            t.label()
        )));
    }
    if t.apply(1.0) != 0.0 {
        return Err(Error::GeneratorShape(format!("`{}`: t(1) != 0", t.label())));
    }
    let g = t.clone();
    let cap = t.endpoint_value().to_f64();
    let eval = move |x: f64, y: f64| {
        if x == 1.0 {
            y
        } else if y == 1.0 {
            x
        } else {
            g.invert(cap.min(g.apply(x) + g.apply(y)))
        }
    };
    Ok(TriangularNorm::from_fn(format!("gen:{}", t.label()), eval, Some(t)))
}

/// `S_T(x, y) = 1 - T(1 - x, 1 - y)`, with `s(x) = t(1 - x)` attached.
pub fn dual_of_norm(t: &TriangularNorm) -> TriangularConorm {
    let inner = t.clone();
    let label = format!("dual({})", t.label());
    let generator = t.generator().map(|g| g.reflected(format!("dual({})", g.label())));
    let family = if t.is_min() {
        ConormFamily::Maximum
    } else {
        ConormFamily::Other
    };
    TriangularConorm {
        label,
        eval: Arc::new(move |x, y| 1.0 - inner.apply(1.0 - x, 1.0 - y)),
        generator,
        family,
    }
}

/// `T_S(x, y) = 1 - S(1 - x, 1 - y)`, with `t(x) = s(1 - x)` attached.
pub fn dual_of_conorm(s: &TriangularConorm) -> TriangularNorm {
    let inner = s.clone();
    let label = format!("dual({})", s.label());
    let generator = s.generator().map(|g| g.reflected(format!("dual({})", g.label())));
    let family = if s.is_max() {
        NormFamily::Minimum
    } else {
        NormFamily::Other
    };
    TriangularNorm {
        label,
        eval: Arc::new(move |x, y| 1.0 - inner.apply(1.0 - x, 1.0 - y)),
        generator,
        family,
    }
}

/// One strict block on `[a, 1]²`, maximum elsewhere; optionally a second
/// strict block on `[0, a]²`.
#[derive(Clone, Debug)]
pub struct OrdinalSumSpec {
    threshold: f64,
    upper: TriangularConorm,
    upper_generator: AdditiveGenerator,
    lower: Option<(TriangularConorm, AdditiveGenerator)>,
}

fn strict_block(op: &TriangularConorm) -> Result<AdditiveGenerator> {
    match op.generator() {
        Some(g) if g.is_strict() => Ok(g.clone()),
        _ => Err(Error::NotStrict(op.label().to_string())),
    }
}

impl OrdinalSumSpec {
    pub fn new(threshold: f64, upper: TriangularConorm) -> Result<Self> {
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "ordinal-sum threshold must lie in ]0, 1[, got {threshold}"
            )));
        }
        let upper_generator = strict_block(&upper)?;
        Ok(OrdinalSumSpec {
            threshold,
            upper,
            upper_generator,
            lower: None,
        })
    }

    /// Adds a second strict block on `[0, a]²`.
    pub fn with_lower(mut self, lower: TriangularConorm) -> Result<Self> {
        let generator = strict_block(&lower)?;
        self.lower = Some((lower, generator));
        Ok(self)
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn upper(&self) -> &TriangularConorm {
        &self.upper
    }

    pub fn upper_generator(&self) -> &AdditiveGenerator {
        &self.upper_generator
    }

    pub fn lower(&self) -> Option<(&TriangularConorm, &AdditiveGenerator)> {
        self.lower.as_ref().map(|(s, g)| (s, g))
    }

    #[inline]
    pub(crate) fn to_upper(&self, x: f64) -> f64 {
        ((x - self.threshold) / (1.0 - self.threshold)).clamp(0.0, 1.0)
    }

    #[inline]
    pub(crate) fn from_upper(&self, v: f64) -> f64 {
        ((1.0 - self.threshold) * v + self.threshold).clamp(self.threshold, 1.0)
    }

    pub(crate) fn evaluate(&self, x: f64, y: f64) -> f64 {
        let a = self.threshold;
        if x >= a && y >= a {
            self.from_upper(self.upper.apply(self.to_upper(x), self.to_upper(y)))
        } else if x <= a && y <= a {
            match &self.lower {
                Some((lower, _)) => (a * lower.apply(x / a, y / a)).clamp(0.0, a),
                None => x.max(y),
            }
        } else {
            x.max(y)
        }
    }
}

pub fn ordinal_sum_upper(spec: OrdinalSumSpec) -> TriangularConorm {
    let label = match spec.lower() {
        None => format!("osum(a={},upper={})", spec.threshold, spec.upper.label()),
        Some((lower, _)) => format!(
            "osum(a={},upper={},lower={})",
            spec.threshold,
            spec.upper.label(),
            lower.label()
        ),
    };
    let inner = spec.clone();
    TriangularConorm {
        label,
        eval: Arc::new(move |x, y| inner.evaluate(x, y)),
        generator: None,
        family: ConormFamily::OrdinalSum(Box::new(spec)),
    }
}

/// Which side of the lattice an operator is anchored on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    /// Neutral element 1, absorbing 0.
    Norm,
    /// Neutral element 0, absorbing 1.
    Conorm,
}

/// Anything classifiable as a t-norm or t-conorm.
pub trait TriangularOperator {
    fn polarity(&self) -> Polarity;
    fn apply(&self, x: f64, y: f64) -> f64;
    fn label(&self) -> &str;
}

impl TriangularOperator for TriangularConorm {
    fn polarity(&self) -> Polarity {
        Polarity::Conorm
    }
    fn apply(&self, x: f64, y: f64) -> f64 {
        TriangularConorm::apply(self, x, y)
    }
    fn label(&self) -> &str {
        &self.label
    }
}

impl TriangularOperator for TriangularNorm {
    fn polarity(&self) -> Polarity {
        Polarity::Norm
    }
    fn apply(&self, x: f64, y: f64) -> f64 {
        TriangularNorm::apply(self, x, y)
    }
    fn label(&self) -> &str {
        &self.label
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassificationTag {
    pub strictly_monotone: bool,
    pub archimedean: bool,
    pub nilpotent: bool,
    pub idempotent: bool,
    pub continuous_on_samples: bool,
}

impl ClassificationTag {
    /// Strictly monotone and continuous, on the samples inspected.
    pub fn strict(&self) -> bool {
        self.strictly_monotone && self.continuous_on_samples
    }
}

/// Sample-based verdicts; never a proof.
#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub operator: String,
    pub tag: ClassificationTag,
    pub grid_resolution: usize,
    pub basis: &'static str,
}

fn max_adjacent_jump(op: &dyn TriangularOperator, n: usize) -> f64 {
    let step = 1.0 / (n - 1) as f64;
    let mut worst = 0.0f64;
    for i in 0..n {
        let x = i as f64 * step;
        let mut prev = op.apply(x, 0.0);
        for j in 1..n {
            let y = (j as f64 * step).min(1.0);
            let v = op.apply(x, y);
            worst = worst.max((v - prev).abs());
            prev = v;
        }
    }
    worst
}

pub fn classify(op: &dyn TriangularOperator, plan: &SamplingPlan) -> Classification {
    let n = plan.grid_resolution.max(11);
    let tol = plan.tolerance_value;
    let points: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let interior = &points[1..n - 1];
    let polarity = op.polarity();

    let idempotent = points.iter().all(|&x| (op.apply(x, x) - x).abs() <= tol);
    let archimedean = interior.iter().all(|&x| match polarity {
        Polarity::Conorm => op.apply(x, x) > x + tol,
        Polarity::Norm => op.apply(x, x) < x - tol,
    });

    let mut strictly_monotone = true;
    'outer: for &x in &points {
        let anchored = match polarity {
            Polarity::Conorm => x < 1.0,
            Polarity::Norm => x > 0.0,
        };
        if !anchored {
            continue;
        }
        for (k, &y) in points.iter().enumerate() {
            for &z in &points[k + 1..] {
                if !(op.apply(x, y) < op.apply(x, z)) {
                    strictly_monotone = false;
                    break 'outer;
                }
            }
        }
    }

    let coarse = max_adjacent_jump(op, n);
    let fine = max_adjacent_jump(op, 4 * (n - 1) + 1);
    let continuous_on_samples = fine <= 1e-9 || fine <= 0.5 * coarse;

    let nilpotent = archimedean && continuous_on_samples && !strictly_monotone;
    Classification {
        operator: op.label().to_string(),
        tag: ClassificationTag {
            strictly_monotone,
            archimedean,
            nilpotent,
            idempotent,
            continuous_on_samples,
        },
        grid_resolution: n,
        basis: "sampled grid; verdicts hold on samples only",
    }
}
