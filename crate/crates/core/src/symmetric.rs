//! Symmetric pseudo-addition ⊕, pseudo-multiplication ⊙, and the symmetric
//! maximum ⊻ / minimum ⊼ on `[-1, 1]`.
//!
//! ⊕ extends a t-conorm `S` by sign rules:
//!
//! * both arguments nonnegative: `S(x, y)`;
//! * both nonpositive: `-S(-x, -y)`;
//! * mixed signs: the symmetrized S-difference of the magnitudes, with
//!   `1 ⊕ (-1)` fixed by a [`Boundary`] choice.
//!
//! For strict `S` with generator `s`, ⊕ is plain addition through the odd
//! extension `g` of `s`: `x ⊕ y = g⁻¹(g(x) + g(y))`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::conorms::{OrdinalSumSpec, TriangularConorm, TriangularNorm};
use crate::differences::DifferenceOperator;
use crate::error::{Error, Result};
use crate::generator::AdditiveGenerator;
use crate::scale::{ext_add_f64, BipolarValue, ExtendedReal, InfinityMode, SignValue};

#[inline]
fn clean(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.clamp(-1.0, 1.0)
    }
}

/// Value of `1 ⊕ (-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    PlusOne,
    MinusOne,
}

impl Boundary {
    pub fn value(self) -> f64 {
        match self {
            Boundary::PlusOne => 1.0,
            Boundary::MinusOne => -1.0,
        }
    }

    /// `+1` resolves `∞ − ∞` to `+∞`, i.e. a disjunctive convention.
    pub fn infinity_mode(self) -> InfinityMode {
        match self {
            Boundary::PlusOne => InfinityMode::Disjunctive,
            Boundary::MinusOne => InfinityMode::Conjunctive,
        }
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus_one" => Ok(Boundary::PlusOne),
            "minus_one" => Ok(Boundary::MinusOne),
            other => Err(Error::InvalidParameter(format!(
                "boundary must be plus_one or minus_one, got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::PlusOne => "plus_one",
            Boundary::MinusOne => "minus_one",
        })
    }
}

#[derive(Clone, Debug)]
enum GeneratorShape {
    Odd(AdditiveGenerator),
    /// Defined on `[-1, -a] ∪ {0} ∪ [a, 1]` only.
    OrdinalSum(Box<OrdinalSumSpec>),
}

/// Odd extension `g` of a t-conorm generator to `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct SymmetricGenerator {
    shape: GeneratorShape,
}

impl SymmetricGenerator {
    /// `g(x) = s(x)` for `x ≥ 0`, `g(x) = -s(-x)` otherwise.
    pub fn from_strict(s: AdditiveGenerator) -> Result<Self> {
        if !s.is_strict() {
            return Err(Error::NotStrict(s.label().to_string()));
        }
        Ok(SymmetricGenerator {
            shape: GeneratorShape::Odd(s),
        })
    }

    /// Rescaled generator of the upper block of an ordinal sum, extended
    /// oddly and by `g(0) = 0`. Undefined for `0 < |x| < a`.
    pub fn for_ordinal_sum(spec: OrdinalSumSpec) -> Self {
        SymmetricGenerator {
            shape: GeneratorShape::OrdinalSum(Box::new(spec)),
        }
    }

    pub fn base(&self) -> &AdditiveGenerator {
        match &self.shape {
            GeneratorShape::Odd(s) => s,
            GeneratorShape::OrdinalSum(spec) => spec.upper_generator(),
        }
    }

    /// True when `g` is defined on all of `[-1, 1]`.
    pub fn is_total(&self) -> bool {
        matches!(self.shape, GeneratorShape::Odd(_))
    }

    pub fn contains(&self, x: f64) -> bool {
        match &self.shape {
            GeneratorShape::Odd(_) => true,
            GeneratorShape::OrdinalSum(spec) => x == 0.0 || x.abs() >= spec.threshold(),
        }
    }

    /// Raw `g(x)`; NaN outside the domain.
    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let m = x.abs();
        let magnitude = match &self.shape {
            GeneratorShape::Odd(s) => s.apply(m),
            GeneratorShape::OrdinalSum(spec) => {
                if m < spec.threshold() {
                    return f64::NAN;
                }
                spec.upper_generator().apply(spec.to_upper(m))
            }
        };
        magnitude.copysign(x)
    }

    /// Raw `g⁻¹(y)`.
    #[inline]
    pub fn invert(&self, y: f64) -> f64 {
        if y == 0.0 || y.is_nan() {
            return 0.0;
        }
        let m = y.abs();
        let magnitude = match &self.shape {
            GeneratorShape::Odd(s) => s.invert(m),
            GeneratorShape::OrdinalSum(spec) => {
                spec.from_upper(spec.upper_generator().invert(m))
            }
        };
        clean(magnitude.copysign(y))
    }

    pub fn eval(&self, x: BipolarValue) -> Result<ExtendedReal> {
        let v = self.apply(x.get());
        if v.is_nan() {
            Err(Error::OutOfGeneratorDomain(x.get()))
        } else {
            Ok(ExtendedReal::from_f64_unchecked(v))
        }
    }

    pub fn inverse(&self, y: ExtendedReal) -> BipolarValue {
        BipolarValue::new(self.invert(y.to_f64())).expect("g⁻¹ stays in [-1, 1]")
    }
}

/// Symmetric pseudo-addition built from a t-conorm.
#[derive(Clone, Debug)]
pub struct PseudoAddition {
    conorm: TriangularConorm,
    difference: DifferenceOperator,
    boundary: Boundary,
    generator: Option<SymmetricGenerator>,
}

impl PseudoAddition {
    pub fn new(conorm: TriangularConorm, boundary: Boundary) -> Self {
        let difference = DifferenceOperator::preferred(conorm.clone());
        Self::with_difference(difference, boundary)
    }

    /// Uses an explicit difference strategy (e.g. the infimum oracle).
    pub fn with_difference(difference: DifferenceOperator, boundary: Boundary) -> Self {
        let conorm = difference.conorm().clone();
        let generator = if let Some(spec) = conorm.ordinal_sum() {
            Some(SymmetricGenerator::for_ordinal_sum(spec.clone()))
        } else {
            match conorm.generator() {
                Some(s) if s.is_strict() => SymmetricGenerator::from_strict(s.clone()).ok(),
                _ => None,
            }
        };
        PseudoAddition {
            conorm,
            difference,
            boundary,
            generator,
        }
    }

    pub fn conorm(&self) -> &TriangularConorm {
        &self.conorm
    }

    pub fn difference(&self) -> &DifferenceOperator {
        &self.difference
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// `g` for strict conorms (total) and ordinal sums (partial).
    pub fn generator(&self) -> Option<&SymmetricGenerator> {
        self.generator.as_ref()
    }

    pub fn label(&self) -> String {
        format!("oplus[{}]", self.conorm.label())
    }

    /// Rule-based evaluation on raw doubles in `[-1, 1]`.
    pub fn apply(&self, x: f64, y: f64) -> f64 {
        if x >= 0.0 && y >= 0.0 {
            return self.conorm.apply(x, y);
        }
        if x <= 0.0 && y <= 0.0 {
            return clean(-self.conorm.apply(-x, -y));
        }
        let (pos, neg) = if x >= 0.0 { (x, -y) } else { (y, -x) };
        if pos == 1.0 && neg == 1.0 {
            return self.boundary.value();
        }
        clean(self.difference.apply_symmetric(pos, neg))
    }

    /// Generator route `g⁻¹(g(x) + g(y))`; `∞ − ∞` follows the boundary.
    pub fn apply_via_generator(&self, x: f64, y: f64) -> Result<f64> {
        let g = self
            .generator
            .as_ref()
            .ok_or_else(|| Error::MissingGenerator(self.conorm.label().to_string()))?;
        for v in [x, y] {
            if !g.contains(v) {
                return Err(Error::OutOfGeneratorDomain(v));
            }
        }
        let sum = ext_add_f64(g.apply(x), g.apply(y), self.boundary.infinity_mode());
        Ok(g.invert(sum))
    }
}

pub fn pseudo_add(p: &PseudoAddition, x: BipolarValue, y: BipolarValue) -> BipolarValue {
    BipolarValue::new(p.apply(x.get(), y.get())).expect("pseudo-addition stays in [-1, 1]")
}

pub fn pseudo_add_via_generator(
    p: &PseudoAddition,
    x: BipolarValue,
    y: BipolarValue,
) -> Result<BipolarValue> {
    Ok(BipolarValue::new(p.apply_via_generator(x.get(), y.get())?)?)
}

/// Symmetric pseudo-multiplication `x ⊙ y = sign(xy) T(|x|, |y|)`.
#[derive(Clone, Debug)]
pub struct PseudoMultiplication {
    norm: TriangularNorm,
}

impl PseudoMultiplication {
    pub fn new(norm: TriangularNorm) -> Self {
        PseudoMultiplication { norm }
    }

    pub fn norm(&self) -> &TriangularNorm {
        &self.norm
    }

    pub fn label(&self) -> String {
        format!("odot[{}]", self.norm.label())
    }

    pub fn apply(&self, x: f64, y: f64) -> f64 {
        let sign = SignValue::of(x) * SignValue::of(y);
        clean(sign.as_f64() * self.norm.apply(x.abs(), y.abs()))
    }
}

pub fn pseudo_mul(m: &PseudoMultiplication, x: BipolarValue, y: BipolarValue) -> BipolarValue {
    BipolarValue::new(m.apply(x.get(), y.get())).expect("pseudo-multiplication stays in [-1, 1]")
}

/// Symmetric maximum on raw doubles.
#[inline]
pub fn sym_max_raw(a: f64, b: f64) -> f64 {
    if b == -a {
        return 0.0;
    }
    let m = a.abs().max(b.abs());
    if m == -a || m == -b {
        -m
    } else {
        m
    }
}

/// Symmetric minimum on raw doubles.
#[inline]
pub fn sym_min_raw(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if SignValue::of(a) != SignValue::of(b) {
        clean(-m)
    } else {
        m
    }
}

pub fn sym_max(a: BipolarValue, b: BipolarValue) -> BipolarValue {
    BipolarValue::new(sym_max_raw(a.get(), b.get())).expect("in range")
}

pub fn sym_min(a: BipolarValue, b: BipolarValue) -> BipolarValue {
    BipolarValue::new(sym_min_raw(a.get(), b.get())).expect("in range")
}

/// Outcome of an n-ary ⊻ when the bracketing may matter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UndefinedAggregate {
    /// Smallest value over all parenthesizations.
    pub low: f64,
    /// Largest value over all parenthesizations.
    pub high: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FoldOutcome {
    Value(BipolarValue),
    Undefined(UndefinedAggregate),
}

impl FoldOutcome {
    pub fn value(self) -> Option<BipolarValue> {
        match self {
            FoldOutcome::Value(v) => Some(v),
            FoldOutcome::Undefined(_) => None,
        }
    }
}

/// All values reachable by some parenthesization of `values` under ⊻.
///
/// Interval dynamic programming; every ⊻ result is one of its arguments or
/// zero, so the per-interval sets stay small.
pub fn sym_max_bracketing_values(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let mut table: Vec<Vec<Vec<f64>>> = vec![vec![Vec::new(); n]; n];
    for (i, &v) in values.iter().enumerate() {
        table[i][i] = vec![v];
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let j = i + len - 1;
            let mut set: Vec<f64> = Vec::new();
            for k in i..j {
                for &a in &table[i][k] {
                    for &b in &table[k + 1][j] {
                        let v = sym_max_raw(a, b);
                        if !set.contains(&v) {
                            set.push(v);
                        }
                    }
                }
            }
            table[i][j] = set;
        }
    }
    let mut result = std::mem::take(&mut table[0][n - 1]);
    result.sort_by(f64::total_cmp);
    result
}

pub fn sym_max_fold(values: &[BipolarValue]) -> Result<FoldOutcome> {
    if values.is_empty() {
        return Err(Error::EmptyList);
    }
    let raw: Vec<f64> = values.iter().map(|v| v.get()).collect();
    let max = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
    if max == -min {
        let reachable = sym_max_bracketing_values(&raw);
        return Ok(FoldOutcome::Undefined(UndefinedAggregate {
            low: reachable[0],
            high: reachable[reachable.len() - 1],
        }));
    }
    let folded = raw[1..].iter().fold(raw[0], |acc, &v| sym_max_raw(acc, v));
    Ok(FoldOutcome::Value(BipolarValue::new(folded)?))
}
