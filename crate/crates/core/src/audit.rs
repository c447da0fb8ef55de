//! Sampling-based audits of algebraic laws.
//!
//! A law is evaluated on pinned witness tuples, corner tuples, a uniform grid
//! and seeded random tuples, in that order. Results are compared in the
//! operation's generator space when every value involved is unsaturated,
//! otherwise in value space. The witness of a failing law is the first
//! failing sample in that order.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::RealFn;
use crate::ops::{BinaryOp, Carrier};
use crate::plan::{SamplingPlan, OPEN_SHELL};
use crate::scale::{ext_add_f64, BipolarValue, InfinityMode};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Regression tuples added to every ternary audit whose domain contains them.
pub const PINNED_TRIPLES: [[f64; 3]; 3] = [[-0.3, 0.6, 0.6], [0.5, 0.8, -0.8], [0.3, 0.7, -0.7]];

/// Gap assigned to a side that evaluates to NaN.
const NAN_GAP: f64 = 2.0;

/// Below this many `g`-units per ulp a value counts as unsaturated, as a
/// fraction of the generator tolerance.
const SATURATION_FRACTION: f64 = 1e-3;

/// Region of the carrier a law is sampled on.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Full,
    /// Carrier with a shell of width [`OPEN_SHELL`] removed at both ends.
    Open,
    Positive,
    Negative,
    /// Values whose magnitude lies in `[lo, hi]` (or `]lo, hi]`), both signs.
    Magnitude { lo: f64, hi: f64, lo_open: bool },
    /// The plan's corner set only.
    Corners,
    /// An explicit list of values per axis.
    Points(Vec<f64>),
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Full => f.write_str("full"),
            Domain::Open => f.write_str("open"),
            Domain::Positive => f.write_str("positive"),
            Domain::Negative => f.write_str("negative"),
            Domain::Magnitude { lo, hi, lo_open } => {
                write!(f, "magnitude{}{lo}, {hi}]", if *lo_open { "]" } else { "[" })
            }
            Domain::Corners => f.write_str("corners"),
            Domain::Points(p) => write!(f, "points({})", p.len()),
        }
    }
}

/// One side-by-side comparison made for a sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Side {
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Relation {
    /// `lhs = rhs`, compared in generator space when possible.
    Equal,
    /// `lhs = rhs`, always compared in value space.
    ValueEqual,
    /// `lhs ≤ rhs`, compared in generator space when possible.
    LessEq,
    /// `lo < lhs < hi`; violation 1 otherwise.
    Inside { lo: f64, hi: f64 },
}

impl Side {
    pub fn equal(lhs: f64, rhs: f64) -> Self {
        Side { lhs, rhs, relation: Relation::Equal }
    }

    pub fn value_equal(lhs: f64, rhs: f64) -> Self {
        Side { lhs, rhs, relation: Relation::ValueEqual }
    }

    pub fn less_eq(lhs: f64, rhs: f64) -> Self {
        Side { lhs, rhs, relation: Relation::LessEq }
    }

    fn value_gap(&self) -> f64 {
        if self.lhs.is_nan() || self.rhs.is_nan() {
            return NAN_GAP;
        }
        match self.relation {
            Relation::Equal | Relation::ValueEqual => (self.lhs - self.rhs).abs(),
            Relation::LessEq => (self.lhs - self.rhs).max(0.0),
            Relation::Inside { lo, hi } => {
                if lo < self.lhs && self.lhs < hi {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    fn generator_gap(&self, g: &RealFn) -> Option<f64> {
        let (a, b) = (g(self.lhs), g(self.rhs));
        match self.relation {
            Relation::Equal => Some((a - b).abs()),
            Relation::LessEq => Some((a - b).max(0.0)),
            _ => None,
        }
    }
}

/// Evaluation of a law at one sample.
#[derive(Clone, Debug, Default)]
pub struct SampleEval {
    pub sides: Vec<Side>,
    /// Intermediate and final values; inputs are added by the engine.
    pub points: Vec<f64>,
}

pub type CustomEval = Arc<dyn Fn(&BinaryOp, &[f64]) -> SampleEval + Send + Sync>;

/// A law not covered by the fixed list.
#[derive(Clone)]
pub struct CustomLaw {
    pub name: String,
    pub arity: usize,
    pub eval: CustomEval,
}

impl fmt::Debug for CustomLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomLaw")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .finish()
    }
}

#[derive(Clone, Debug)]
pub enum Law {
    Commutativity,
    Associativity,
    Neutral(f64),
    Absorbing(f64),
    /// Non-decreasing in each argument.
    Monotonicity,
    /// `x ∘ n(x) = e` with `n` the carrier's order-reversing involution.
    SymmetryInverse(f64),
    /// The audited operation distributes over the given one.
    Distributivity(BinaryOp),
    /// `n(x ∘ y) = n(x) ∘' n(y)` for the given dual operation.
    DeMorgan(BinaryOp),
    Custom(CustomLaw),
}

impl Law {
    pub fn arity(&self) -> usize {
        match self {
            Law::Commutativity | Law::DeMorgan(_) => 2,
            Law::Associativity | Law::Monotonicity | Law::Distributivity(_) => 3,
            Law::Neutral(_) | Law::Absorbing(_) | Law::SymmetryInverse(_) => 1,
            Law::Custom(c) => c.arity,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Law::Commutativity => "commutativity".into(),
            Law::Associativity => "associativity".into(),
            Law::Neutral(c) => format!("neutral({c})"),
            Law::Absorbing(c) => format!("absorbing({c})"),
            Law::Monotonicity => "monotonicity".into(),
            Law::SymmetryInverse(e) => format!("symmetry_inverse({e})"),
            Law::Distributivity(op) => format!("distributivity(over={})", op.label()),
            Law::DeMorgan(op) => format!("de_morgan(dual={})", op.label()),
            Law::Custom(c) => c.name.clone(),
        }
    }

    /// Parses the laws that take no operation argument.
    pub fn parse_simple(s: &str) -> Result<Law> {
        let s = s.trim();
        let arg = |prefix: &str| -> Option<Result<f64>> {
            let rest = s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
            Some(
                rest.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad law argument in `{s}`"))),
            )
        };
        match s {
            "commutativity" => return Ok(Law::Commutativity),
            "associativity" => return Ok(Law::Associativity),
            "monotonicity" => return Ok(Law::Monotonicity),
            _ => {}
        }
        if let Some(v) = arg("neutral") {
            return Ok(Law::Neutral(v?));
        }
        if let Some(v) = arg("absorbing") {
            return Ok(Law::Absorbing(v?));
        }
        if let Some(v) = arg("symmetry_inverse") {
            return Ok(Law::SymmetryInverse(v?));
        }
        Err(Error::InvalidParameter(format!("unknown law `{s}`")))
    }

    fn evaluate(&self, op: &BinaryOp, x: &[f64]) -> SampleEval {
        let f = |a: f64, b: f64| op.apply(a, b);
        match self {
            Law::Commutativity => {
                let (l, r) = (f(x[0], x[1]), f(x[1], x[0]));
                SampleEval { sides: vec![Side::equal(l, r)], points: vec![l, r] }
            }
            Law::Associativity => {
                let xy = f(x[0], x[1]);
                let yz = f(x[1], x[2]);
                let (l, r) = (f(xy, x[2]), f(x[0], yz));
                SampleEval { sides: vec![Side::equal(l, r)], points: vec![xy, yz, l, r] }
            }
            Law::Neutral(c) => {
                let (a, b) = (f(x[0], *c), f(*c, x[0]));
                SampleEval {
                    sides: vec![Side::equal(a, x[0]), Side::equal(b, x[0])],
                    points: vec![a, b],
                }
            }
            Law::Absorbing(c) => {
                let (a, b) = (f(x[0], *c), f(*c, x[0]));
                SampleEval {
                    sides: vec![Side::value_equal(a, *c), Side::value_equal(b, *c)],
                    points: vec![a, b],
                }
            }
            Law::Monotonicity => {
                let (lo, hi) = if x[0] <= x[1] { (x[0], x[1]) } else { (x[1], x[0]) };
                let (a, b) = (f(lo, x[2]), f(hi, x[2]));
                let (c, d) = (f(x[2], lo), f(x[2], hi));
                SampleEval {
                    sides: vec![Side::less_eq(a, b), Side::less_eq(c, d)],
                    points: vec![a, b, c, d],
                }
            }
            Law::SymmetryInverse(e) => {
                let n = op.carrier().negate(x[0]);
                let v = f(x[0], n);
                SampleEval { sides: vec![Side::equal(v, *e)], points: vec![n, v] }
            }
            Law::Distributivity(add) => {
                let inner = add.apply(x[1], x[2]);
                let l = f(x[0], inner);
                let r = add.apply(f(x[0], x[1]), f(x[0], x[2]));
                SampleEval { sides: vec![Side::value_equal(l, r)], points: vec![] }
            }
            Law::DeMorgan(dual) => {
                let c = op.carrier();
                let l = c.negate(f(x[0], x[1]));
                let r = dual.apply(c.negate(x[0]), c.negate(x[1]));
                SampleEval { sides: vec![Side::value_equal(l, r)], points: vec![] }
            }
            Law::Custom(c) => (c.eval)(op, x),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LawSpec {
    pub law: Law,
    pub domain: Domain,
}

impl LawSpec {
    pub fn new(law: Law, domain: Domain) -> Self {
        LawSpec { law, domain }
    }

    pub fn arity(&self) -> usize {
        self.law.arity()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HoldsOnSamples,
    Fails,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::HoldsOnSamples => "holds_on_samples",
            Verdict::Fails => "fails",
        })
    }
}

/// A failing sample. `gap` is measured in the space the comparison used:
/// `|g(lhs) − g(rhs)|` for unsaturated samples of an operation with a
/// generator, `|lhs − rhs|` otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCounterexample")]
pub struct Counterexample {
    pub inputs: Vec<BipolarValue>,
    pub lhs: BipolarValue,
    pub rhs: BipolarValue,
    pub gap: f64,
}

#[derive(Deserialize)]
struct RawCounterexample {
    inputs: Vec<BipolarValue>,
    lhs: BipolarValue,
    rhs: BipolarValue,
    gap: f64,
}

impl TryFrom<RawCounterexample> for Counterexample {
    type Error = String;

    fn try_from(raw: RawCounterexample) -> std::result::Result<Self, String> {
        if !(raw.gap.is_finite() && raw.gap > 0.0) {
            return Err(format!("witness gap must be finite and positive, got {}", raw.gap));
        }
        if raw.inputs.is_empty() {
            return Err("witness has no inputs".into());
        }
        Ok(Counterexample { inputs: raw.inputs, lhs: raw.lhs, rhs: raw.rhs, gap: raw.gap })
    }
}

impl Counterexample {
    pub fn input_values(&self) -> Vec<f64> {
        self.inputs.iter().map(|v| v.get()).collect()
    }

    /// Re-evaluates the law at the stored inputs; `None` if it now holds.
    pub fn reverify(&self, op: &BinaryOp, law: &LawSpec, plan: &SamplingPlan) -> Option<Counterexample> {
        let x = self.input_values();
        if x.len() != law.arity() {
            return None;
        }
        let out = evaluate_sample(op, &law.law, &x, plan);
        out.failing.map(|(side, gap)| make_witness(&x, side, gap))
    }

    /// True when re-evaluation reproduces the stored values exactly.
    pub fn reproduces(&self, op: &BinaryOp, law: &LawSpec, plan: &SamplingPlan) -> bool {
        self.reverify(op, law, plan).as_ref() == Some(self)
    }
}

#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub law: LawSpec,
    pub operator: String,
    pub plan: SamplingPlan,
    pub verdict: Verdict,
    /// Largest violation in the space each sample was compared in.
    pub max_violation: f64,
    pub max_value_violation: f64,
    pub max_generator_violation: f64,
    pub witness: Option<Counterexample>,
    pub samples_evaluated: usize,
    /// Samples compared in value space although a generator was available.
    pub saturated_samples: usize,
}

impl PropertyReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::HoldsOnSamples
    }

    pub fn to_document(&self) -> ReportDocument {
        ReportDocument {
            law: self.law.law.name(),
            domain: self.law.domain.to_string(),
            plan: self.plan.clone(),
            verdict: self.verdict,
            max_violation: self.max_violation,
            witness: self.witness.clone(),
            samples_evaluated: self.samples_evaluated,
            engine_version: ENGINE_VERSION.to_string(),
        }
    }
}

/// Serialized form of a [`PropertyReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawReportDocument")]
pub struct ReportDocument {
    pub law: String,
    pub domain: String,
    pub plan: SamplingPlan,
    pub verdict: Verdict,
    pub max_violation: f64,
    pub witness: Option<Counterexample>,
    pub samples_evaluated: usize,
    pub engine_version: String,
}

#[derive(Deserialize)]
struct RawReportDocument {
    law: String,
    domain: String,
    plan: SamplingPlan,
    verdict: Verdict,
    max_violation: f64,
    witness: Option<Counterexample>,
    samples_evaluated: usize,
    engine_version: String,
}

impl TryFrom<RawReportDocument> for ReportDocument {
    type Error = String;

    fn try_from(raw: RawReportDocument) -> std::result::Result<Self, String> {
        let tol = raw.plan.tolerance_value.min(raw.plan.tolerance_generator);
        match (&raw.verdict, &raw.witness) {
            (Verdict::Fails, Some(w)) if w.gap > tol => {}
            (Verdict::HoldsOnSamples, None) => {}
            _ => return Err("verdict and witness disagree".into()),
        }
        Ok(ReportDocument {
            law: raw.law,
            domain: raw.domain,
            plan: raw.plan,
            verdict: raw.verdict,
            max_violation: raw.max_violation,
            witness: raw.witness,
            samples_evaluated: raw.samples_evaluated,
            engine_version: raw.engine_version,
        })
    }
}

// ---------------------------------------------------------------------------
// sampling

#[derive(Clone, Debug)]
enum Axis {
    /// `[lo, hi]`; the grid spans `span` and keeps the points inside.
    Interval { lo: f64, hi: f64, span: (f64, f64) },
    Magnitude { lo: f64, hi: f64, lo_open: bool, signed: bool },
    Finite(Vec<f64>),
}

impl Axis {
    fn resolve(domain: &Domain, carrier: Carrier, plan: &SamplingPlan) -> Axis {
        let (lo, hi) = carrier.bounds();
        match domain {
            Domain::Full => Axis::Interval { lo, hi, span: (lo, hi) },
            Domain::Open => Axis::Interval { lo: lo + OPEN_SHELL, hi: hi - OPEN_SHELL, span: (lo, hi) },
            Domain::Positive => {
                let lo = lo.max(0.0);
                Axis::Interval { lo, hi, span: (lo, hi) }
            }
            Domain::Negative => {
                let hi = hi.min(0.0);
                Axis::Interval { lo, hi, span: (lo, hi) }
            }
            Domain::Magnitude { lo: a, hi: b, lo_open } => Axis::Magnitude {
                lo: *a,
                hi: *b,
                lo_open: *lo_open,
                signed: carrier == Carrier::Bipolar,
            },
            Domain::Corners => Axis::Finite(
                plan.corner_set.iter().copied().filter(|v| (lo..=hi).contains(v)).collect(),
            ),
            Domain::Points(p) => Axis::Finite(p.clone()),
        }
    }

    fn contains(&self, v: f64) -> bool {
        match self {
            Axis::Interval { lo, hi, .. } => *lo <= v && v <= *hi,
            Axis::Magnitude { lo, hi, lo_open, signed } => {
                if !signed && v < 0.0 {
                    return false;
                }
                let m = v.abs();
                (if *lo_open { m > *lo } else { m >= *lo }) && m <= *hi
            }
            Axis::Finite(p) => p.contains(&v),
        }
    }

    fn grid(&self, resolution: usize) -> Vec<f64> {
        match self {
            Axis::Interval { lo, hi, span: (a, b) } => {
                let points: Vec<f64> = if resolution == 0 || a > b {
                    Vec::new()
                } else if resolution == 1 {
                    vec![*a]
                } else {
                    let step = (b - a) / (resolution - 1) as f64;
                    (0..resolution)
                        .map(|i| if i + 1 == resolution { *b } else { a + step * i as f64 })
                        .collect()
                };
                points.into_iter().filter(|v| lo <= v && v <= hi).collect()
            }
            Axis::Magnitude { lo, hi, lo_open, signed } => {
                if resolution == 0 {
                    return Vec::new();
                }
                let mags: Vec<f64> = if *lo_open {
                    let step = (hi - lo) / resolution as f64;
                    (1..=resolution)
                        .map(|k| if k == resolution { *hi } else { lo + step * k as f64 })
                        .collect()
                } else if resolution == 1 {
                    vec![*lo]
                } else {
                    let step = (hi - lo) / (resolution - 1) as f64;
                    (0..resolution)
                        .map(|k| if k + 1 == resolution { *hi } else { lo + step * k as f64 })
                        .collect()
                };
                let mut out: Vec<f64> = Vec::with_capacity(2 * mags.len());
                if *signed {
                    out.extend(mags.iter().rev().map(|m| if *m == 0.0 { 0.0 } else { -m }));
                }
                for m in mags {
                    if !out.contains(&m) {
                        out.push(m);
                    }
                }
                out
            }
            Axis::Finite(p) => p.clone(),
        }
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> Option<f64> {
        match self {
            Axis::Interval { lo, hi, .. } => {
                if lo > hi {
                    None
                } else {
                    Some(lo + (hi - lo) * rng.gen::<f64>())
                }
            }
            Axis::Magnitude { lo, hi, signed, .. } => {
                let m = lo + (hi - lo) * rng.gen::<f64>();
                let negative = *signed && rng.gen::<bool>();
                let m = if m == *lo && *lo < *hi { *hi } else { m };
                Some(if negative && m != 0.0 { -m } else { m })
            }
            Axis::Finite(p) => {
                if p.is_empty() {
                    None
                } else {
                    Some(p[rng.gen_range(0..p.len())])
                }
            }
        }
    }
}

fn product(values: &[f64], arity: usize, out: &mut Vec<Vec<f64>>) {
    if values.is_empty() {
        return;
    }
    let total = values.len().pow(arity as u32);
    for mut idx in 0..total {
        let mut tuple = vec![0.0; arity];
        for slot in tuple.iter_mut().rev() {
            *slot = values[idx % values.len()];
            idx /= values.len();
        }
        out.push(tuple);
    }
}

/// Deterministic sample tuples for `law` on `carrier`: pinned, corners, grid,
/// random.
pub fn sample_tuples(law: &LawSpec, carrier: Carrier, plan: &SamplingPlan) -> Vec<Vec<f64>> {
    let arity = law.arity();
    let axis = Axis::resolve(&law.domain, carrier, plan);
    let mut tuples = Vec::new();
    if arity == 3 && carrier == Carrier::Bipolar {
        for t in PINNED_TRIPLES {
            if t.iter().all(|&v| axis.contains(v)) {
                tuples.push(t.to_vec());
            }
        }
    }
    if !matches!(axis, Axis::Finite(_)) {
        let corners: Vec<f64> = plan.corner_set.iter().copied().filter(|&v| axis.contains(v)).collect();
        product(&corners, arity, &mut tuples);
    }
    product(&axis.grid(plan.grid_resolution), arity, &mut tuples);
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    for _ in 0..plan.random_count {
        let tuple: Option<Vec<f64>> = (0..arity).map(|_| axis.random(&mut rng)).collect();
        match tuple {
            Some(t) => tuples.push(t),
            None => break,
        }
    }
    tuples
}

// ---------------------------------------------------------------------------
// evaluation

struct SampleOutcome {
    value_gap: f64,
    generator_gap: Option<f64>,
    compared_gap: f64,
    saturated: bool,
    failing: Option<(Side, f64)>,
}

/// Largest change of `g` across one ulp of `v`. Neighbours outside the
/// domain of `g` (NaN) are skipped, so an isolated point such as `0` for an
/// ordinal-sum generator has span 0.
fn ulp_span(g: &RealFn, v: f64) -> f64 {
    let gv = g(v);
    [v.next_up(), v.next_down()]
        .into_iter()
        .map(|n| g(n))
        .filter(|gn| !gn.is_nan())
        .map(|gn| (gn - gv).abs())
        .fold(0.0, f64::max)
}

fn unsaturated(g: &RealFn, points: &[f64], limit: f64) -> bool {
    points.iter().all(|&v| {
        let gv = g(v);
        if !gv.is_finite() {
            return false;
        }
        let span = ulp_span(g, v);
        span.is_finite() && span <= limit
    })
}

fn evaluate_sample(op: &BinaryOp, law: &Law, x: &[f64], plan: &SamplingPlan) -> SampleOutcome {
    let mut eval = law.evaluate(op, x);
    eval.points.extend_from_slice(x);
    let limit = plan.tolerance_generator * SATURATION_FRACTION;
    let usable = op
        .generator()
        .filter(|g| eval.sides.iter().any(|s| s.generator_gap(g).is_some()))
        .filter(|g| unsaturated(g, &eval.points, limit));
    let saturated = op.generator().is_some() && usable.is_none();

    let mut value_gap: f64 = 0.0;
    let mut generator_gap: Option<f64> = None;
    let mut compared_gap: f64 = 0.0;
    let mut failing: Option<(Side, f64)> = None;
    for side in &eval.sides {
        let v = side.value_gap();
        value_gap = value_gap.max(v);
        let (gap, tol) = match usable.and_then(|g| side.generator_gap(g)) {
            Some(gg) => {
                generator_gap = Some(generator_gap.unwrap_or(0.0).max(gg));
                (gg, plan.tolerance_generator)
            }
            None => (v, plan.tolerance_value),
        };
        compared_gap = compared_gap.max(gap);
        if gap > tol && failing.is_none_or(|(_, worst)| gap > worst) {
            failing = Some((*side, gap));
        }
    }
    SampleOutcome { value_gap, generator_gap, compared_gap, saturated, failing }
}

fn to_bipolar(v: f64) -> BipolarValue {
    BipolarValue::new(if v.is_nan() { 0.0 } else { v.clamp(-1.0, 1.0) }).expect("clamped")
}

fn make_witness(x: &[f64], side: Side, gap: f64) -> Counterexample {
    Counterexample {
        inputs: x.iter().map(|&v| to_bipolar(v)).collect(),
        lhs: to_bipolar(side.lhs),
        rhs: to_bipolar(side.rhs),
        gap,
    }
}

/// Evaluates `law` for `op` on every sample of `plan`.
pub fn check_law(op: &BinaryOp, law: &LawSpec, plan: &SamplingPlan) -> PropertyReport {
    let tuples = sample_tuples(law, op.carrier(), plan);
    let outcomes: Vec<SampleOutcome> = tuples
        .par_iter()
        .map(|x| evaluate_sample(op, &law.law, x, plan))
        .collect();

    let mut max_violation: f64 = 0.0;
    let mut max_value: f64 = 0.0;
    let mut max_generator: f64 = 0.0;
    let mut saturated = 0;
    let mut witness = None;
    for (x, out) in tuples.iter().zip(&outcomes) {
        max_violation = max_violation.max(out.compared_gap);
        max_value = max_value.max(out.value_gap);
        if let Some(g) = out.generator_gap {
            max_generator = max_generator.max(g);
        }
        if out.saturated {
            saturated += 1;
        }
        if witness.is_none() {
            if let Some((side, gap)) = out.failing {
                witness = Some(make_witness(x, side, gap));
            }
        }
    }
    PropertyReport {
        law: law.clone(),
        operator: op.label().to_string(),
        plan: plan.clone(),
        verdict: if witness.is_some() { Verdict::Fails } else { Verdict::HoldsOnSamples },
        max_violation,
        max_value_violation: max_value,
        max_generator_violation: max_generator,
        witness,
        samples_evaluated: tuples.len(),
        saturated_samples: saturated,
    }
}

/// Random-only search for a failing sample within `budget` tuples.
pub fn search_counterexample(
    op: &BinaryOp,
    law: &LawSpec,
    budget: usize,
    seed: u64,
) -> Result<Option<Counterexample>> {
    if budget == 0 {
        return Err(Error::InvalidParameter("search budget must be positive".into()));
    }
    let plan = SamplingPlan {
        grid_resolution: 0,
        random_count: budget,
        seed,
        corner_set: Vec::new(),
        ..SamplingPlan::default()
    };
    let axis = Axis::resolve(&law.domain, op.carrier(), &plan);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tuples = Vec::with_capacity(budget);
    for _ in 0..budget {
        let tuple: Option<Vec<f64>> = (0..law.arity()).map(|_| axis.random(&mut rng)).collect();
        match tuple {
            Some(t) => tuples.push(t),
            None => break,
        }
    }
    let first = tuples
        .par_iter()
        .enumerate()
        .filter_map(|(i, x)| evaluate_sample(op, &law.law, x, &plan).failing.map(|f| (i, f)))
        .min_by_key(|(i, _)| *i);
    Ok(first.map(|(i, (side, gap))| make_witness(&tuples[i], side, gap)))
}

// ---------------------------------------------------------------------------
// structured audits

#[derive(Clone, Debug)]
pub struct AuditItem {
    pub name: String,
    pub report: PropertyReport,
}

/// Named property reports plus notes on what was assumed rather than checked.
#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub items: Vec<AuditItem>,
    pub notes: Vec<String>,
}

impl AuditReport {
    fn push(&mut self, name: &str, report: PropertyReport) {
        self.items.push(AuditItem { name: name.to_string(), report });
    }

    pub fn get(&self, name: &str) -> Option<&PropertyReport> {
        self.items.iter().find(|i| i.name == name).map(|i| &i.report)
    }

    pub fn all_hold(&self) -> bool {
        self.items.iter().all(|i| i.report.holds())
    }
}

/// Commutativity, associativity, neutral element and inverses on the open
/// carrier. On `[0, 1]` the neutral element is `½` and the inverse `1 − x`.
pub fn audit_abelian_group(op: &BinaryOp, plan: &SamplingPlan) -> AuditReport {
    let (e, neutral_name) = match op.carrier() {
        Carrier::Bipolar => (0.0, "neutral_0"),
        Carrier::Unit => (0.5, "neutral_half"),
    };
    let mut report = AuditReport::default();
    for (name, law) in [
        ("commutativity", Law::Commutativity),
        ("associativity", Law::Associativity),
        (neutral_name, Law::Neutral(e)),
        ("inverses", Law::SymmetryInverse(e)),
    ] {
        report.push(name, check_law(op, &LawSpec::new(law, Domain::Open), plan));
    }
    report
}

pub fn audit_ring(add: &BinaryOp, mul: &BinaryOp, plan: &SamplingPlan) -> AuditReport {
    audit_ring_on(add, mul, plan, Domain::Open)
}

/// Group audit of `add` plus associativity and unit of `mul` and
/// distributivity of `mul` over `add`, the latter three on `domain`.
pub fn audit_ring_on(add: &BinaryOp, mul: &BinaryOp, plan: &SamplingPlan, domain: Domain) -> AuditReport {
    let mut report = audit_abelian_group(add, plan);
    let unit = mul.carrier().bounds().1;
    report.push("mul_associativity", check_law(mul, &LawSpec::new(Law::Associativity, domain.clone()), plan));
    report.push("mul_neutral", check_law(mul, &LawSpec::new(Law::Neutral(unit), domain.clone()), plan));
    report.push(
        "distributivity",
        check_law(mul, &LawSpec::new(Law::Distributivity(add.clone()), domain), plan),
    );
    report
}

/// Interval carrier of an ordered structure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OagCarrier {
    pub lo: f64,
    pub hi: f64,
    pub closed: bool,
}

/// `(W, ≤, ⊕, ⊖, e)` with top and bottom.
#[derive(Clone)]
pub struct OAGStructure {
    pub label: String,
    pub carrier: OagCarrier,
    pub add: BinaryOp,
    pub neg: RealFn,
    pub neutral: f64,
    pub top: f64,
    pub bottom: f64,
}

impl fmt::Debug for OAGStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OAGStructure")
            .field("label", &self.label)
            .field("carrier", &self.carrier)
            .field("add", &self.add)
            .field("neutral", &self.neutral)
            .finish()
    }
}

impl OAGStructure {
    /// `[-1, 1]` with `⊖ = −`, `e = 0`, `⊤ = 1`, `⊥ = −1`.
    pub fn bipolar(add: BinaryOp) -> Self {
        OAGStructure {
            label: add.label().to_string(),
            carrier: OagCarrier { lo: -1.0, hi: 1.0, closed: true },
            add,
            neg: Arc::new(|x: f64| if x == 0.0 { 0.0 } else { -x }),
            neutral: 0.0,
            top: 1.0,
            bottom: -1.0,
        }
    }

    /// `(ℝ, +)` carried to `[-1, 1]` by `h(t) = t / (1 − |t|)`; `⊤` wins
    /// over `⊥`.
    pub fn real_line_reference() -> Self {
        let h = |t: f64| t / (1.0 - t.abs());
        let h_inv = |r: f64| {
            if r.is_infinite() {
                r.signum()
            } else {
                r / (1.0 + r.abs())
            }
        };
        let add = BinaryOp::new("real_line", Carrier::Bipolar, move |x, y| {
            let v = h_inv(ext_add_f64(h(x), h(y), InfinityMode::Disjunctive));
            if v == 0.0 {
                0.0
            } else {
                v
            }
        })
        .with_generator(h);
        OAGStructure::bipolar(add)
    }
}

fn custom(name: &str, arity: usize, eval: impl Fn(&BinaryOp, &[f64]) -> SampleEval + Send + Sync + 'static) -> Law {
    Law::Custom(CustomLaw { name: name.to_string(), arity, eval: Arc::new(eval) })
}

/// Axioms i1–i5 on nonextremal samples, the order-reversal of `⊖`, and with
/// `extended` the absorbing extremes, `⊖` swapping them, and closure of the
/// nonextremal elements.
pub fn audit_oag(s: &OAGStructure, plan: &SamplingPlan, extended: bool) -> AuditReport {
    let op = &s.add;
    let mut report = AuditReport::default();
    let inner = Domain::Open;
    let neg = s.neg.clone();
    let e = s.neutral;

    report.push("i1", check_law(op, &LawSpec::new(Law::Commutativity, inner.clone()), plan));
    report.push("i2", check_law(op, &LawSpec::new(Law::Associativity, inner.clone()), plan));
    report.push("i3", check_law(op, &LawSpec::new(Law::Neutral(e), inner.clone()), plan));
    let n = neg.clone();
    let i4 = custom("inverse", 1, move |op, x| {
        let v = op.apply(x[0], n(x[0]));
        SampleEval { sides: vec![Side::equal(v, e)], points: vec![v] }
    });
    report.push("i4", check_law(op, &LawSpec::new(i4, inner.clone()), plan));
    report.push("i5", check_law(op, &LawSpec::new(Law::Monotonicity, inner.clone()), plan));

    let n = neg.clone();
    let reversing = custom("negation_order_reversing", 2, move |_, x| {
        let (lo, hi) = if x[0] <= x[1] { (x[0], x[1]) } else { (x[1], x[0]) };
        SampleEval { sides: vec![Side { lhs: n(hi), rhs: n(lo), relation: Relation::LessEq }], points: vec![] }
    });
    let reversing_op = op.clone().without_generator();
    report.push(
        "negation_order_reversing",
        check_law(&reversing_op, &LawSpec::new(reversing, Domain::Full), plan),
    );

    if extended {
        let (top, bottom) = (s.top, s.bottom);
        report.push("top_absorbing", check_law(op, &LawSpec::new(Law::Absorbing(top), Domain::Full), plan));
        report.push(
            "bottom_absorbing",
            check_law(op, &LawSpec::new(Law::Absorbing(bottom), Domain::Full), plan),
        );
        let n = neg.clone();
        let swaps = custom("negation_swaps_extremes", 1, move |_, x| {
            let expected = if x[0] == top { bottom } else { top };
            SampleEval { sides: vec![Side::value_equal(n(x[0]), expected)], points: vec![] }
        });
        report.push(
            "negation_swaps_extremes",
            check_law(op, &LawSpec::new(swaps, Domain::Points(vec![bottom, top])), plan),
        );
        let closure = custom("closure", 2, move |op, x| {
            let v = op.apply(x[0], x[1]);
            SampleEval {
                sides: vec![Side { lhs: v, rhs: v, relation: Relation::Inside { lo: bottom, hi: top } }],
                points: vec![],
            }
        });
        report.push("closure", check_law(op, &LawSpec::new(closure, inner), plan));
    }

    if s.carrier.closed {
        report.notes.push(
            "density (no least positive element): assumed by construction for an interval carrier, not verified"
                .into(),
        );
        report.notes.push(
            "completeness (least upper bounds): assumed by construction for an interval carrier, not verified"
                .into(),
        );
    }
    report
}

// ---------------------------------------------------------------------------
// n-ary associativity

#[derive(Clone, Debug, PartialEq)]
pub struct NaryOutcome {
    pub agree: bool,
    /// Distinct results over all bracketings, ascending.
    pub distinct_results: Vec<f64>,
}

/// Evaluates every parenthesization of `values` (in order) under `op`.
pub fn nary_assoc_oracle(op: &BinaryOp, values: &[f64], tolerance: f64) -> Result<NaryOutcome> {
    let n = values.len();
    if !(2..=7).contains(&n) {
        return Err(Error::Arity { law: "nary_assoc_oracle".into(), expected: 7, got: n });
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
                        let v = op.apply(a, b);
                        if !set.iter().any(|w| w.to_bits() == v.to_bits()) {
                            set.push(v);
                        }
                    }
                }
            }
            table[i][j] = set;
        }
    }
    let mut results = std::mem::take(&mut table[0][n - 1]);
    results.sort_by(f64::total_cmp);
    let spread = results[results.len() - 1] - results[0];
    Ok(NaryOutcome { agree: spread <= tolerance, distinct_results: results })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conorms::{TriangularConorm, TriangularNorm};
    use crate::symmetric::{Boundary, PseudoAddition, PseudoMultiplication};

    fn oplus(s: TriangularConorm) -> BinaryOp {
        BinaryOp::pseudo_addition(&PseudoAddition::new(s, Boundary::PlusOne))
    }

    #[test]
    fn ulp_span_skips_points_outside_the_generator_domain() {
        let g: RealFn = Arc::new(|x: f64| if x == 0.0 { 0.0 } else if x.abs() < 0.5 { f64::NAN } else { x - 0.5 });
        assert_eq!(ulp_span(&g, 0.0), 0.0);
        assert!(ulp_span(&g, 0.75) < 1e-15);
        let h: RealFn = Arc::new(|x: f64| if x >= 0.5 { f64::INFINITY } else { x });
        assert!(ulp_span(&h, 0.5f64.next_down()).is_infinite());
    }

    fn assoc(domain: Domain) -> LawSpec {
        LawSpec::new(Law::Associativity, domain)
    }

    fn small_plan() -> SamplingPlan {
        SamplingPlan::default().with_random(2_000)
    }

    #[test]
    fn prob_sum_associativity_holds() {
        let r = check_law(&oplus(TriangularConorm::prob_sum()), &assoc(Domain::Open), &small_plan());
        assert!(r.holds(), "{r:?}");
        assert!(r.max_violation < 1e-9);
        assert!(r.max_generator_violation < 1e-9);
        assert!(r.saturated_samples > 0);
    }

    #[test]
    fn near_endpoint_corners_exceed_double_resolution() {
        // (1-ε) ⊕ (-½) = 1 - ε/(1-ε) rounds to 1 - ε for ε = 1e-10, so the
        // outer sum cancels to 0 instead of -½
        let ratio = crate::conorms::conorm_from_generator(crate::generator::ratio_generator()).unwrap();
        let op = oplus(ratio);
        let c = 1.0 - 1e-10;
        assert_eq!(op.apply(c, -0.5), c);
        assert_eq!(op.apply(-c, op.apply(c, -0.5)), 0.0);
        let tight = SamplingPlan {
            corner_set: vec![-1.0, -c, -0.5, 0.0, 0.5, c, 1.0],
            random_count: 0,
            ..SamplingPlan::default()
        };
        assert!(!check_law(&op, &assoc(Domain::Open), &tight).holds());
        let default = SamplingPlan { random_count: 0, ..SamplingPlan::default() };
        assert!(check_law(&op, &assoc(Domain::Open), &default).holds());
    }

    #[test]
    fn lukasiewicz_witness() {
        let r = check_law(&oplus(TriangularConorm::lukasiewicz()), &assoc(Domain::Full), &small_plan());
        let w = r.witness.expect("fails");
        assert_eq!(w.input_values(), vec![-0.3, 0.6, 0.6]);
        assert!((w.lhs.get() - 0.9).abs() < 1e-15);
        assert!((w.rhs.get() - 0.7).abs() < 1e-15);
        assert!((w.gap - 0.2).abs() < 1e-12);
    }

    #[test]
    fn sym_max_witness() {
        let r = check_law(&BinaryOp::sym_max(), &assoc(Domain::Full), &small_plan());
        let w = r.witness.expect("fails");
        assert_eq!(w.input_values(), vec![0.5, 0.8, -0.8]);
        assert_eq!((w.lhs.get(), w.rhs.get()), (0.0, 0.5));
    }

    #[test]
    fn sample_order_and_determinism() {
        let law = assoc(Domain::Open);
        let plan = SamplingPlan::default().with_random(50).with_grid(3);
        let a = sample_tuples(&law, Carrier::Bipolar, &plan);
        let b = sample_tuples(&law, Carrier::Bipolar, &plan);
        assert_eq!(a, b);
        assert_eq!(a[0], vec![-0.3, 0.6, 0.6]);
        // 3 pinned + 5³ open corners + 1³ grid (±1 dropped) + 50 random
        assert_eq!(a.len(), 3 + 125 + 1 + 50);
        assert!(a.iter().flatten().all(|v| v.abs() <= 1.0 - OPEN_SHELL));
        let other = sample_tuples(&law, Carrier::Bipolar, &plan.clone().with_seed(7));
        assert_ne!(a[a.len() - 1], other[other.len() - 1]);
    }

    #[test]
    fn magnitude_axis() {
        let axis = Axis::Magnitude { lo: 0.5, hi: 1.0, lo_open: true, signed: true };
        let g = axis.grid(5);
        assert_eq!(g, vec![-1.0, -0.9, -0.8, -0.7, -0.6, 0.6, 0.7, 0.8, 0.9, 1.0]);
        assert!(!axis.contains(0.5) && axis.contains(-0.6) && !axis.contains(0.3));
    }

    #[test]
    fn search_examples() {
        let min_over_ps = BinaryOp::norm(&TriangularNorm::minimum());
        let ps = BinaryOp::conorm(&TriangularConorm::prob_sum());
        let law = LawSpec::new(Law::Distributivity(ps), Domain::Full);
        let w = search_counterexample(&min_over_ps, &law, 10_000, 1).unwrap().expect("found");
        let x = w.input_values();
        let lhs = x[0].min(x[1] + x[2] - x[1] * x[2]);
        let a = x[0].min(x[1]);
        let b = x[0].min(x[2]);
        assert!((lhs - (a + b - a * b)).abs() > 1e-9);

        let dist = LawSpec::new(Law::Distributivity(BinaryOp::sym_max()), Domain::Positive);
        assert!(search_counterexample(&BinaryOp::sym_min(), &dist, 10_000, 1).unwrap().is_none());
        let comm = LawSpec::new(Law::Commutativity, Domain::Full);
        assert!(search_counterexample(&oplus(TriangularConorm::prob_sum()), &comm, 10_000, 1).unwrap().is_none());
        assert!(search_counterexample(&BinaryOp::sym_max(), &comm, 0, 1).is_err());
    }

    #[test]
    fn group_audits() {
        let plan = small_plan();
        assert!(audit_abelian_group(&oplus(TriangularConorm::prob_sum()), &plan).all_hold());
        let luk = audit_abelian_group(&oplus(TriangularConorm::lukasiewicz()), &plan);
        assert!(!luk.get("associativity").unwrap().holds());
        let vee = audit_abelian_group(&BinaryOp::sym_max(), &plan);
        for name in ["commutativity", "neutral_0", "inverses"] {
            assert!(vee.get(name).unwrap().holds(), "{name}");
        }
        assert!(!vee.get("associativity").unwrap().holds());
    }

    #[test]
    fn ring_audits() {
        let plan = small_plan();
        let m = BinaryOp::pseudo_multiplication(&PseudoMultiplication::new(TriangularNorm::product()));
        let r = audit_ring(&oplus(TriangularConorm::prob_sum()), &m, &plan);
        assert!(r.get("mul_associativity").unwrap().holds());
        assert!(r.get("mul_neutral").unwrap().holds());
        assert!(!r.get("distributivity").unwrap().holds());
        let pos = audit_ring_on(&BinaryOp::sym_max(), &BinaryOp::sym_min(), &plan, Domain::Positive);
        assert!(pos.get("distributivity").unwrap().holds());
    }

    #[test]
    fn oag_audits() {
        let plan = small_plan();
        let ps = audit_oag(&OAGStructure::bipolar(oplus(TriangularConorm::prob_sum())), &plan, true);
        for name in ["i1", "i2", "i3", "i4", "i5", "negation_order_reversing", "top_absorbing", "negation_swaps_extremes"] {
            assert!(ps.get(name).unwrap().holds(), "{name}");
        }
        let bottom = ps.get("bottom_absorbing").unwrap();
        let w = bottom.witness.as_ref().unwrap();
        assert_eq!((w.lhs.get(), w.rhs.get()), (1.0, -1.0));
        assert_eq!(ps.notes.len(), 2);

        let real = audit_oag(&OAGStructure::real_line_reference(), &plan, false);
        assert!(real.all_hold(), "{:?}", real.items.iter().filter(|i| !i.report.holds()).collect::<Vec<_>>());

        let vee = audit_oag(&OAGStructure::bipolar(BinaryOp::sym_max()), &plan, false);
        assert!(!vee.get("i2").unwrap().holds());
        assert_eq!(vee.get("i2").unwrap().witness.as_ref().unwrap().input_values(), vec![0.5, 0.8, -0.8]);
    }

    #[test]
    fn nary_examples() {
        let vee = BinaryOp::sym_max();
        let out = nary_assoc_oracle(&vee, &[0.5, 0.8, -0.8], 0.0).unwrap();
        assert!(!out.agree);
        assert_eq!(out.distinct_results, vec![0.0, 0.5]);
        assert!(nary_assoc_oracle(&vee, &[0.2, -0.5, 0.3], 0.0).unwrap().agree);
        let ps = oplus(TriangularConorm::prob_sum());
        assert!(nary_assoc_oracle(&ps, &[0.1, -0.7, 0.4, 0.55], 1e-12).unwrap().agree);
        assert!(nary_assoc_oracle(&vee, &[0.1], 0.0).is_err());
        assert!(nary_assoc_oracle(&vee, &[0.1; 8], 0.0).is_err());
    }

    #[test]
    fn witness_reverification_and_json() {
        let op = oplus(TriangularConorm::lukasiewicz());
        let law = assoc(Domain::Full);
        let plan = small_plan();
        let r = check_law(&op, &law, &plan);
        let w = r.witness.clone().unwrap();
        assert!(w.reproduces(&op, &law, &plan));
        let doc = r.to_document();
        let json = serde_json::to_value(&doc).unwrap();
        let keys: Vec<&str> = json.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        let mut expected = vec![
            "law", "domain", "plan", "verdict", "max_violation", "witness", "samples_evaluated", "engine_version",
        ];
        expected.sort();
        let mut keys = keys;
        keys.sort();
        assert_eq!(keys, expected);
        let back: ReportDocument = serde_json::from_value(json.clone()).unwrap();
        assert_eq!(back, doc);

        let mut broken = json;
        broken["witness"] = serde_json::Value::Null;
        assert!(serde_json::from_value::<ReportDocument>(broken).is_err());
        let bad_gap = serde_json::json!({"inputs": [0.1], "lhs": 0.0, "rhs": 0.0, "gap": -1.0});
        assert!(serde_json::from_value::<Counterexample>(bad_gap).is_err());
    }

    #[test]
    fn law_names_parse() {
        for s in ["commutativity", "associativity", "monotonicity", "neutral(0)", "absorbing(1)", "symmetry_inverse(0)"] {
            assert_eq!(Law::parse_simple(s).unwrap().name(), s);
        }
        assert!(Law::parse_simple("neutral(x)").is_err());
        assert!(Law::parse_simple("idempotence").is_err());
    }
}
