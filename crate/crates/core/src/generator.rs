//! Additive generators and their pseudo-inverses.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scale::{ExtendedReal, UnitValue};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Argument tolerance of the bisection fallback.
pub const BISECTION_TOLERANCE: f64 = 1e-12;

/// Round-trip tolerance when a closed-form inverse is attached.
pub const ROUND_TRIP_CLOSED: f64 = 1e-9;

/// Round-trip tolerance when the inverse is found by bisection.
pub const ROUND_TRIP_BISECTION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `s(0) = 0`, generator of a t-conorm.
    Increasing,
    /// `t(1) = 0`, generator of a t-norm.
    Decreasing,
}

/// A strictly monotone map `[0, 1] → [0, +∞]` vanishing at one endpoint.
///
/// The value at the other endpoint is declared by the caller, never probed:
/// telling `s(1) = +∞` apart from a large finite number numerically is not
/// reliable.
#[derive(Clone)]
pub struct AdditiveGenerator {
    label: String,
    eval: RealFn,
    inverse: Option<RealFn>,
    direction: Direction,
    endpoint_value: ExtendedReal,
}

impl fmt::Debug for AdditiveGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AdditiveGenerator")
            .field("label", &self.label)
            .field("direction", &self.direction)
            .field("endpoint_value", &self.endpoint_value)
            .field("closed_inverse", &self.inverse.is_some())
            .finish()
    }
}

impl AdditiveGenerator {
    /// Builds and validates a generator.
    ///
    /// Checks that the fixed endpoint maps to 0 and that the map is strictly
    /// monotone on 101 interior sample points.
    pub fn new(
        label: impl Into<String>,
        direction: Direction,
        endpoint_value: ExtendedReal,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inverse: Option<RealFn>,
    ) -> Result<Self> {
        let generator = AdditiveGenerator {
            label: label.into(),
            eval: Arc::new(eval),
            inverse,
            direction,
            endpoint_value,
        };
        generator.validate()?;
        Ok(generator)
    }

    pub fn increasing(
        label: impl Into<String>,
        endpoint_value: ExtendedReal,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inverse: Option<RealFn>,
    ) -> Result<Self> {
        Self::new(label, Direction::Increasing, endpoint_value, eval, inverse)
    }

    pub fn decreasing(
        label: impl Into<String>,
        endpoint_value: ExtendedReal,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inverse: Option<RealFn>,
    ) -> Result<Self> {
        Self::new(label, Direction::Decreasing, endpoint_value, eval, inverse)
    }

    fn validate(&self) -> Result<()> {
        let fixed = match self.direction {
            Direction::Increasing => 0.0,
            Direction::Decreasing => 1.0,
        };
        let at_fixed = (self.eval)(fixed);
        if !(at_fixed.abs() <= 1e-12) {
            return Err(Error::GeneratorShape(format!(
                "`{}` takes value {at_fixed} at {fixed}, expected 0",
                self.label
            )));
        }
        match self.endpoint_value {
            ExtendedReal::Finite(v) if v > 0.0 => {}
            ExtendedReal::PosInfinity => {}
            other => {
                return Err(Error::GeneratorShape(format!(
                    "`{}` declares endpoint value {other}, expected a positive value or +inf",
                    self.label
                )))
            }
        }
        let mut previous = at_fixed;
        for k in 1..=100 {
            let t = k as f64 / 101.0;
            let x = match self.direction {
                Direction::Increasing => t,
                Direction::Decreasing => 1.0 - t,
            };
            let v = (self.eval)(x);
            if !(v > previous) || !v.is_finite() {
                return Err(Error::GeneratorShape(format!(
                    "`{}` is not strictly {} near {x}",
                    self.label,
                    match self.direction {
                        Direction::Increasing => "increasing",
                        Direction::Decreasing => "decreasing",
                    }
                )));
            }
            previous = v;
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// `s(1)` for increasing generators, `t(0)` for decreasing ones.
    pub fn endpoint_value(&self) -> ExtendedReal {
        self.endpoint_value
    }

    /// Strict operators have an infinite endpoint value.
    pub fn is_strict(&self) -> bool {
        self.endpoint_value == ExtendedReal::PosInfinity
    }

    pub fn has_closed_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    /// Round-trip tolerance appropriate for this generator's inverse.
    pub fn round_trip_tolerance(&self) -> f64 {
        if self.has_closed_inverse() {
            ROUND_TRIP_CLOSED
        } else {
            ROUND_TRIP_BISECTION
        }
    }

    /// Raw evaluation; endpoints map onto `0` and the declared endpoint value.
    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        let (zero_at, end_at) = match self.direction {
            Direction::Increasing => (0.0, 1.0),
            Direction::Decreasing => (1.0, 0.0),
        };
        if x == zero_at {
            0.0
        } else if x == end_at {
            self.endpoint_value.to_f64()
        } else {
            (self.eval)(x)
        }
    }

    pub fn eval(&self, x: UnitValue) -> ExtendedReal {
        ExtendedReal::from_f64_unchecked(self.apply(x.get()))
    }

    /// Pseudo-inverse on raw doubles, clamping `y` into the generator's range.
    pub fn invert(&self, y: f64) -> f64 {
        let end = self.endpoint_value.to_f64();
        let (below, above) = match self.direction {
            Direction::Increasing => (0.0, 1.0),
            Direction::Decreasing => (1.0, 0.0),
        };
        if y.is_nan() {
            return f64::NAN;
        }
        if y <= 0.0 {
            return below;
        }
        if y >= end {
            return above;
        }
        let x = match &self.inverse {
            Some(inv) => inv(y),
            None => self.bisect(y),
        };
        x.clamp(0.0, 1.0)
    }

    fn bisect(&self, y: f64) -> f64 {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let increasing = self.direction == Direction::Increasing;
        for _ in 0..200 {
            if hi - lo <= BISECTION_TOLERANCE {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let below_target = if increasing {
                self.apply(mid) < y
            } else {
                self.apply(mid) > y
            };
            if below_target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Same operator, generator multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<AdditiveGenerator> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "generator scale factor must be positive, got {factor}"
            )));
        }
        let eval = Arc::clone(&self.eval);
        let inverse = self.inverse.clone().map(|inv| -> RealFn {
            Arc::new(move |y: f64| inv(y / factor))
        });
        let endpoint = match self.endpoint_value {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(v * factor),
            other => other,
        };
        AdditiveGenerator::new(
            format!("{}*{factor}", self.label),
            self.direction,
            endpoint,
            move |x| factor * eval(x),
            inverse,
        )
    }

    /// `x ↦ self(1 - x)`: turns a t-norm generator into the generator of the
    /// dual t-conorm and vice versa.
    pub fn reflected(&self, label: impl Into<String>) -> AdditiveGenerator {
        let eval = Arc::clone(&self.eval);
        let inverse = self.inverse.clone().map(|inv| -> RealFn {
            Arc::new(move |y: f64| 1.0 - inv(y))
        });
        let direction = match self.direction {
            Direction::Increasing => Direction::Decreasing,
            Direction::Decreasing => Direction::Increasing,
        };
        AdditiveGenerator {
            label: label.into(),
            eval: Arc::new(move |x| eval(1.0 - x)),
            inverse,
            direction,
            endpoint_value: self.endpoint_value,
        }
    }

    /// Wraps an arbitrary function with known shape without re-validating.
    pub(crate) fn from_parts(
        label: String,
        direction: Direction,
        endpoint_value: ExtendedReal,
        eval: RealFn,
        inverse: Option<RealFn>,
    ) -> AdditiveGenerator {
        AdditiveGenerator {
            label,
            eval,
            inverse,
            direction,
            endpoint_value,
        }
    }
}

/// Pseudo-inverse of `gen` at `y`, clamped to the generator's range.
pub fn generator_pseudo_inverse(gen: &AdditiveGenerator, y: ExtendedReal) -> UnitValue {
    UnitValue::new(gen.invert(y.to_f64())).expect("pseudo-inverse stays in [0, 1]")
}

/// `s(x) = -ln(1 - x)`, generator of the probabilistic sum.
pub fn prob_sum_generator() -> AdditiveGenerator {
    AdditiveGenerator::from_parts(
        "prob_sum".into(),
        Direction::Increasing,
        ExtendedReal::PosInfinity,
        Arc::new(|x: f64| -(-x).ln_1p()),
        Some(Arc::new(|y: f64| -(-y).exp_m1())),
    )
}

/// `s(x) = x`, generator of the Łukasiewicz t-conorm.
pub fn lukasiewicz_conorm_generator() -> AdditiveGenerator {
    AdditiveGenerator::from_parts(
        "lukasiewicz_conorm".into(),
        Direction::Increasing,
        ExtendedReal::Finite(1.0),
        Arc::new(|x: f64| x),
        Some(Arc::new(|y: f64| y)),
    )
}

/// `t(x) = -ln x`, generator of the product t-norm.
pub fn product_generator() -> AdditiveGenerator {
    AdditiveGenerator::from_parts(
        "product".into(),
        Direction::Decreasing,
        ExtendedReal::PosInfinity,
        Arc::new(|x: f64| -x.ln()),
        Some(Arc::new(|y: f64| (-y).exp())),
    )
}

/// `t(x) = 1 - x`, generator of the Łukasiewicz t-norm.
pub fn lukasiewicz_norm_generator() -> AdditiveGenerator {
    AdditiveGenerator::from_parts(
        "lukasiewicz_norm".into(),
        Direction::Decreasing,
        ExtendedReal::Finite(1.0),
        Arc::new(|x: f64| 1.0 - x),
        Some(Arc::new(|y: f64| 1.0 - y)),
    )
}

/// `s(x) = x / (1 - x)`, a strict generator with a rational closed form.
pub fn ratio_generator() -> AdditiveGenerator {
    AdditiveGenerator::from_parts(
        "ratio".into(),
        Direction::Increasing,
        ExtendedReal::PosInfinity,
        Arc::new(|x: f64| x / (1.0 - x)),
        Some(Arc::new(|y: f64| y / (1.0 + y))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_inverse(g: &AdditiveGenerator) -> AdditiveGenerator {
        AdditiveGenerator::from_parts(
            format!("{}-bisect", g.label),
            g.direction,
            g.endpoint_value,
            Arc::clone(&g.eval),
            None,
        )
    }

    #[test]
    fn builtins_validate() {
        for g in [
            prob_sum_generator(),
            lukasiewicz_conorm_generator(),
            product_generator(),
            lukasiewicz_norm_generator(),
            ratio_generator(),
        ] {
            g.validate().unwrap();
        }
    }

    #[test]
    fn pseudo_inverse_examples() {
        let s = prob_sum_generator();
        let y = ExtendedReal::Finite(std::f64::consts::LN_2);
        assert!((generator_pseudo_inverse(&s, y).get() - 0.5).abs() < 1e-15);
        assert_eq!(generator_pseudo_inverse(&s, ExtendedReal::Finite(-3.0)).get(), 0.0);
        let luk = lukasiewicz_conorm_generator();
        assert_eq!(generator_pseudo_inverse(&luk, ExtendedReal::Finite(1.7)).get(), 1.0);
        assert_eq!(generator_pseudo_inverse(&s, ExtendedReal::PosInfinity).get(), 1.0);
    }

    #[test]
    fn bisection_matches_closed_form() {
        for g in [prob_sum_generator(), ratio_generator(), product_generator()] {
            let b = no_inverse(&g);
            for k in 1..100 {
                let x = k as f64 / 100.0;
                let y = g.apply(x);
                // closed form 1 - e^{-y} is the oracle for prob_sum
                assert!((b.invert(y) - g.invert(y)).abs() < 1e-11, "{} at {x}", g.label);
            }
        }
    }

    #[test]
    fn round_trip_within_declared_tolerance() {
        for g in [prob_sum_generator(), ratio_generator(), lukasiewicz_norm_generator()] {
            for gen in [g.clone(), no_inverse(&g)] {
                let tol = gen.round_trip_tolerance();
                for k in 0..=1000 {
                    let x = k as f64 / 1000.0;
                    assert!((gen.invert(gen.apply(x)) - x).abs() <= tol);
                }
            }
        }
    }

    #[test]
    fn shape_errors() {
        let shifted = AdditiveGenerator::increasing(
            "shifted",
            ExtendedReal::Finite(2.0),
            |x| x + 1.0,
            None,
        );
        assert!(matches!(shifted, Err(Error::GeneratorShape(_))));
        let wrong_way = AdditiveGenerator::increasing(
            "wrong",
            ExtendedReal::Finite(1.0),
            |x| -x,
            None,
        );
        assert!(matches!(wrong_way, Err(Error::GeneratorShape(_))));
        let bad_endpoint = AdditiveGenerator::increasing(
            "bad",
            ExtendedReal::NegInfinity,
            |x| x,
            None,
        );
        assert!(bad_endpoint.is_err());
    }

    #[test]
    fn scaled_generator_inverts_consistently() {
        let g = prob_sum_generator().scaled(3.5).unwrap();
        for k in 1..100 {
            let x = k as f64 / 100.0;
            assert!((g.invert(g.apply(x)) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn reflection_swaps_direction() {
        let t = product_generator();
        let s = t.reflected("dual");
        assert_eq!(s.direction(), Direction::Increasing);
        s.validate().unwrap();
        assert!((s.apply(0.5) - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((s.invert(std::f64::consts::LN_2) - 0.5).abs() < 1e-15);
    }
}
