//! S-differences `x ⊖'_S y = inf{z | S(y, z) ≥ x}` and their symmetrization.

use crate::conorms::{OrdinalSumSpec, TriangularConorm};
use crate::error::{Error, Result};
use crate::scale::{BipolarValue, UnitValue};

/// Bisection tolerance of the infimum oracle.
pub const INF_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DifferenceStrategy {
    /// `s⁻¹(0 ∨ (s(x) − s(y)))`.
    GeneratorFormula,
    /// Numeric infimum by bisection; works for any t-conorm.
    InfBisection,
    /// `x` if `x > y`, else `0`.
    MaxClosedForm,
    /// Blockwise generator formula, maximum rule outside the blocks.
    OrdinalSumFormula,
}

#[derive(Clone, Debug)]
pub struct DifferenceOperator {
    conorm: TriangularConorm,
    strategy: DifferenceStrategy,
}

impl DifferenceOperator {
    pub fn new(conorm: TriangularConorm, strategy: DifferenceStrategy) -> Result<Self> {
        match strategy {
            DifferenceStrategy::GeneratorFormula if conorm.generator().is_none() => {
                return Err(Error::MissingGenerator(conorm.label().to_string()))
            }
            DifferenceStrategy::MaxClosedForm if !conorm.is_max() => {
                return Err(Error::PreconditionViolated(format!(
                    "closed-form max difference requested for `{}`",
                    conorm.label()
                )))
            }
            DifferenceStrategy::OrdinalSumFormula if conorm.ordinal_sum().is_none() => {
                return Err(Error::PreconditionViolated(format!(
                    "`{}` is not an ordinal sum",
                    conorm.label()
                )))
            }
            _ => {}
        }
        Ok(DifferenceOperator { conorm, strategy })
    }

    /// Picks the most specific strategy the conorm supports.
    pub fn preferred(conorm: TriangularConorm) -> Self {
        let strategy = if conorm.is_max() {
            DifferenceStrategy::MaxClosedForm
        } else if conorm.ordinal_sum().is_some() {
            DifferenceStrategy::OrdinalSumFormula
        } else if conorm.generator().is_some() {
            DifferenceStrategy::GeneratorFormula
        } else {
            DifferenceStrategy::InfBisection
        };
        DifferenceOperator { conorm, strategy }
    }

    pub fn conorm(&self) -> &TriangularConorm {
        &self.conorm
    }

    pub fn strategy(&self) -> DifferenceStrategy {
        self.strategy
    }

    /// `x ⊖'_S y` on raw doubles in `[0, 1]`.
    pub fn apply(&self, x: f64, y: f64) -> f64 {
        if x == y {
            return 0.0;
        }
        match self.strategy {
            DifferenceStrategy::GeneratorFormula => {
                let s = self
                    .conorm
                    .generator()
                    .expect("checked at construction");
                let d = s.apply(x) - s.apply(y);
                if d.is_nan() {
                    // ∞ − ∞: both arguments saturated, only reachable when x = y = 1
                    0.0
                } else {
                    s.invert(d.max(0.0))
                }
            }
            DifferenceStrategy::InfBisection => inf_bisection(&self.conorm, x, y),
            DifferenceStrategy::MaxClosedForm => max_difference(x, y),
            DifferenceStrategy::OrdinalSumFormula => {
                let spec = self.conorm.ordinal_sum().expect("checked at construction");
                if x < y {
                    0.0
                } else {
                    ordinal_sum_difference_raw(spec, x, y)
                }
            }
        }
    }

    /// Three-branch symmetrization on raw doubles in `[0, 1]`.
    pub fn apply_symmetric(&self, x: f64, y: f64) -> f64 {
        if x > y {
            self.apply(x, y)
        } else if x < y {
            let v = self.apply(y, x);
            if v == 0.0 {
                0.0
            } else {
                -v
            }
        } else {
            0.0
        }
    }
}

#[inline]
fn max_difference(x: f64, y: f64) -> f64 {
    if x > y {
        x
    } else {
        0.0
    }
}

fn inf_bisection(s: &TriangularConorm, x: f64, y: f64) -> f64 {
    let reaches = |z: f64| s.apply(y, z) >= x;
    if reaches(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > INF_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // step one tolerance unit down so the infimum is never over-reported
    (hi - INF_TOLERANCE).max(0.0)
}

pub fn s_difference(d: &DifferenceOperator, x: UnitValue, y: UnitValue) -> Result<UnitValue> {
    Ok(UnitValue::new(d.apply(x.get(), y.get()))?)
}

/// Independent infimum-based evaluation of `x ⊖'_S y`, by bisection on `z`.
pub fn s_difference_inf_oracle(s: &TriangularConorm, x: UnitValue, y: UnitValue) -> UnitValue {
    UnitValue::new(inf_bisection(s, x.get(), y.get())).expect("bisection stays in [0, 1]")
}

pub fn symmetric_difference(
    d: &DifferenceOperator,
    x: UnitValue,
    y: UnitValue,
) -> Result<BipolarValue> {
    Ok(BipolarValue::new(d.apply_symmetric(x.get(), y.get()))?)
}

fn ordinal_sum_difference_raw(spec: &OrdinalSumSpec, x: f64, y: f64) -> f64 {
    let a = spec.threshold();
    if x == y {
        return 0.0;
    }
    if x >= a && y >= a {
        let s1 = spec.upper_generator();
        let d = s1.apply(spec.to_upper(x)) - s1.apply(spec.to_upper(y));
        let v = if d.is_nan() { 0.0 } else { s1.invert(d.max(0.0)) };
        return spec.from_upper(v);
    }
    if x <= a && y <= a {
        if let Some((_, s2)) = spec.lower() {
            let d = s2.apply(x / a) - s2.apply(y / a);
            let v = if d.is_nan() { 0.0 } else { s2.invert(d.max(0.0)) };
            return (a * v).clamp(0.0, a);
        }
    }
    max_difference(x, y)
}

/// Difference of the ordinal sum, defined for `x ≥ y`.
pub fn ordinal_sum_difference(spec: &OrdinalSumSpec, x: UnitValue, y: UnitValue) -> Result<UnitValue> {
    if x < y {
        return Err(Error::PreconditionViolated(format!(
            "ordinal-sum difference needs x >= y, got x = {x}, y = {y}"
        )));
    }
    Ok(UnitValue::new(ordinal_sum_difference_raw(spec, x.get(), y.get()))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conorms::ordinal_sum_upper;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn u(v: f64) -> UnitValue {
        UnitValue::new(v).unwrap()
    }

    #[test]
    fn s_difference_examples() {
        let p = DifferenceOperator::preferred(TriangularConorm::prob_sum());
        assert_eq!(p.strategy(), DifferenceStrategy::GeneratorFormula);
        assert!((s_difference(&p, u(0.75), u(0.5)).unwrap().get() - 0.5).abs() < 1e-15);
        let m = DifferenceOperator::preferred(TriangularConorm::maximum());
        assert_eq!(s_difference(&m, u(0.7), u(0.4)).unwrap().get(), 0.7);
        let l = DifferenceOperator::preferred(TriangularConorm::lukasiewicz());
        assert!((s_difference(&l, u(0.9), u(0.3)).unwrap().get() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn strategy_requirements() {
        assert!(matches!(
            DifferenceOperator::new(TriangularConorm::maximum(), DifferenceStrategy::GeneratorFormula),
            Err(Error::MissingGenerator(_))
        ));
        assert!(
            DifferenceOperator::new(TriangularConorm::prob_sum(), DifferenceStrategy::MaxClosedForm)
                .is_err()
        );
        assert!(DifferenceOperator::new(
            TriangularConorm::prob_sum(),
            DifferenceStrategy::OrdinalSumFormula
        )
        .is_err());
        assert!(
            DifferenceOperator::new(TriangularConorm::prob_sum(), DifferenceStrategy::InfBisection)
                .is_ok()
        );
    }

    #[test]
    fn inf_oracle_examples() {
        let p = TriangularConorm::prob_sum();
        // S(0.5, z) = 0.5 + 0.5z >= 0.75  <=>  z >= 0.5
        assert!((s_difference_inf_oracle(&p, u(0.75), u(0.5)).get() - 0.5).abs() <= 1e-10);
        for s in [TriangularConorm::prob_sum(), TriangularConorm::lukasiewicz(), TriangularConorm::maximum()] {
            for x in [0.0, 0.3, 1.0] {
                assert_eq!(s_difference_inf_oracle(&s, u(x), u(x)).get(), 0.0);
            }
        }
        assert_eq!(
            s_difference_inf_oracle(&TriangularConorm::maximum(), u(0.4), u(0.7)).get(),
            0.0
        );
    }

    #[test]
    fn inf_oracle_never_over_reports() {
        let p = TriangularConorm::prob_sum();
        let d = DifferenceOperator::preferred(p.clone());
        for k in 1..50 {
            let x = 0.5 + k as f64 / 100.0;
            let oracle = s_difference_inf_oracle(&p, u(x), u(0.5)).get();
            let exact = d.apply(x, 0.5);
            assert!(oracle <= exact + 1e-15);
            assert!(exact - oracle <= 2e-12);
        }
    }

    #[test]
    fn symmetric_difference_examples() {
        let p = DifferenceOperator::preferred(TriangularConorm::prob_sum());
        assert!((symmetric_difference(&p, u(0.75), u(0.5)).unwrap().get() - 0.5).abs() < 1e-15);
        assert!((symmetric_difference(&p, u(0.5), u(0.75)).unwrap().get() + 0.5).abs() < 1e-15);
        for s in [TriangularConorm::prob_sum(), TriangularConorm::lukasiewicz(), TriangularConorm::maximum()] {
            let d = DifferenceOperator::preferred(s);
            assert_eq!(symmetric_difference(&d, u(0.4), u(0.4)).unwrap().get(), 0.0);
        }
    }

    #[test]
    fn oracle_equivalence_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for s in [TriangularConorm::prob_sum(), TriangularConorm::lukasiewicz(), TriangularConorm::maximum()] {
            let d = DifferenceOperator::preferred(s.clone());
            for _ in 0..10_000 {
                let (x, y): (f64, f64) = (rng.gen(), rng.gen());
                let a = d.apply(x, y);
                let b = s_difference_inf_oracle(&s, u(x), u(y)).get();
                assert!((a - b).abs() <= 1e-6, "{} at ({x}, {y}): {a} vs {b}", s.label());
            }
        }
    }

    #[test]
    fn antisymmetry_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for s in [TriangularConorm::prob_sum(), TriangularConorm::lukasiewicz(), TriangularConorm::maximum()] {
            let d = DifferenceOperator::preferred(s);
            for _ in 0..2_000 {
                let (x, y): (f64, f64) = (rng.gen(), rng.gen());
                assert_eq!(d.apply_symmetric(x, y), -d.apply_symmetric(y, x));
            }
        }
    }

    #[test]
    fn strict_complementarity() {
        let s = TriangularConorm::prob_sum();
        let d = DifferenceOperator::preferred(s.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5_000 {
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            let (x, y) = if a >= b { (a, b) } else { (b, a) };
            assert!((s.apply(y, d.apply(x, y)) - x).abs() <= 1e-9);
        }
    }

    #[test]
    fn ordinal_sum_difference_examples() {
        let spec = OrdinalSumSpec::new(0.5, TriangularConorm::prob_sum()).unwrap();
        let v = ordinal_sum_difference(&spec, u(0.84), u(0.6)).unwrap().get();
        // oracle: infimum of {z | S(0.6, z) >= 0.84} on the ordinal sum itself
        let oracle = s_difference_inf_oracle(&ordinal_sum_upper(spec.clone()), u(0.84), u(0.6));
        assert!((v - 0.8).abs() < 1e-12);
        assert!((v - oracle.get()).abs() < 1e-9);
        assert_eq!(ordinal_sum_difference(&spec, u(0.7), u(0.7)).unwrap().get(), 0.0);
        assert_eq!(ordinal_sum_difference(&spec, u(0.7), u(0.3)).unwrap().get(), 0.7);
        assert!(matches!(
            ordinal_sum_difference(&spec, u(0.3), u(0.7)),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn ordinal_sum_difference_jumps_at_diagonal() {
        let spec = OrdinalSumSpec::new(0.5, TriangularConorm::prob_sum()).unwrap();
        for y in [0.5, 0.6, 0.75, 0.9] {
            let above = ordinal_sum_difference(&spec, u(y + 1e-9), u(y)).unwrap().get();
            assert!(above >= 0.5);
            assert_eq!(ordinal_sum_difference(&spec, u(y), u(y)).unwrap().get(), 0.0);
        }
    }

    #[test]
    fn ordinal_sum_formula_matches_inf_oracle() {
        let s = ordinal_sum_upper(OrdinalSumSpec::new(0.5, TriangularConorm::prob_sum()).unwrap());
        let d = DifferenceOperator::preferred(s.clone());
        assert_eq!(d.strategy(), DifferenceStrategy::OrdinalSumFormula);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5_000 {
            let (x, y): (f64, f64) = (rng.gen(), rng.gen());
            let a = d.apply(x, y);
            let b = s_difference_inf_oracle(&s, u(x), u(y)).get();
            assert!((a - b).abs() <= 1e-6, "({x}, {y}): {a} vs {b}");
        }
    }

    #[test]
    fn two_block_formula_matches_inf_oracle() {
        let spec = OrdinalSumSpec::new(0.4, TriangularConorm::prob_sum())
            .unwrap()
            .with_lower(TriangularConorm::prob_sum())
            .unwrap();
        let s = ordinal_sum_upper(spec);
        let d = DifferenceOperator::preferred(s.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5_000 {
            let (x, y): (f64, f64) = (rng.gen(), rng.gen());
            let a = d.apply(x, y);
            let b = s_difference_inf_oracle(&s, u(x), u(y)).get();
            assert!((a - b).abs() <= 1e-6, "({x}, {y}): {a} vs {b}");
        }
    }
}
