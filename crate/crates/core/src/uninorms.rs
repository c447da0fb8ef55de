//! Uninorms: representable ones, the rescaling bridge to ⊕ on `[-1, 1]`,
//! decomposition into underlying t-norm/t-conorm, partial composition, and
//! the rescaled symmetric maximum `U_max`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::conorms::{BinaryFn, TriangularConorm, TriangularNorm};
use crate::error::{Error, Result};
use crate::generator::{AdditiveGenerator, Direction, RealFn, BISECTION_TOLERANCE};
use crate::ops::{BinaryOp, Carrier};
use crate::scale::{ext_add_f64, ExtendedReal, InfinityMode, UnitValue};
use crate::symmetric::PseudoAddition;

/// Strictly increasing `u: [0, 1] → [-∞, +∞]` with `u(e) = 0`,
/// `u(0) = -∞` and `u(1) = +∞`.
#[derive(Clone)]
pub struct UninormGenerator {
    label: String,
    eval: RealFn,
    inverse: Option<RealFn>,
    neutral: f64,
    mode: InfinityMode,
}

impl fmt::Debug for UninormGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UninormGenerator")
            .field("label", &self.label)
            .field("neutral", &self.neutral)
            .field("mode", &self.mode)
            .finish()
    }
}

impl UninormGenerator {
    pub fn new(
        label: impl Into<String>,
        neutral: f64,
        mode: InfinityMode,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inverse: Option<RealFn>,
    ) -> Result<Self> {
        let gen = UninormGenerator {
            label: label.into(),
            eval: Arc::new(eval),
            inverse,
            neutral,
            mode,
        };
        gen.validate()?;
        Ok(gen)
    }

    /// `u(x) = ln(x / (1 - x))`, neutral `½`.
    pub fn logit(mode: InfinityMode) -> Self {
        UninormGenerator {
            label: "logit".into(),
            eval: Arc::new(|x: f64| (x / (1.0 - x)).ln()),
            inverse: Some(Arc::new(|y: f64| 1.0 / (1.0 + (-y).exp()))),
            neutral: 0.5,
            mode,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.neutral > 0.0 && self.neutral < 1.0) {
            return Err(Error::GeneratorShape(format!(
                "`{}`: neutral element {} outside ]0, 1[",
                self.label, self.neutral
            )));
        }
        let at_e = (self.eval)(self.neutral);
        if !(at_e.abs() <= 1e-12) {
            return Err(Error::GeneratorShape(format!(
                "`{}`: u(e) = {at_e}, expected 0",
                self.label
            )));
        }
        let mut previous = f64::NEG_INFINITY;
        for k in 1..=200 {
            let x = k as f64 / 201.0;
            let v = (self.eval)(x);
            if !(v > previous) || !v.is_finite() {
                return Err(Error::GeneratorShape(format!(
                    "`{}` is not strictly increasing near {x}",
                    self.label
                )));
            }
            previous = v;
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn neutral(&self) -> f64 {
        self.neutral
    }

    pub fn mode(&self) -> InfinityMode {
        self.mode
    }

    pub fn with_mode(mut self, mode: InfinityMode) -> Self {
        self.mode = mode;
        self
    }

    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        if x <= 0.0 {
            f64::NEG_INFINITY
        } else if x >= 1.0 {
            f64::INFINITY
        } else if x == self.neutral {
            0.0
        } else {
            (self.eval)(x)
        }
    }

    pub fn eval(&self, x: UnitValue) -> ExtendedReal {
        ExtendedReal::from_f64_unchecked(self.apply(x.get()))
    }

    pub fn invert(&self, y: f64) -> f64 {
        if y == f64::NEG_INFINITY {
            return 0.0;
        }
        if y == f64::INFINITY {
            return 1.0;
        }
        if y == 0.0 {
            return self.neutral;
        }
        let x = match &self.inverse {
            Some(inv) => inv(y),
            None => {
                let (mut lo, mut hi) = (0.0f64, 1.0f64);
                while hi - lo > BISECTION_TOLERANCE {
                    let mid = 0.5 * (lo + hi);
                    if self.apply(mid) < y {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        };
        x.clamp(0.0, 1.0)
    }
}

/// A binary operation on `[0, 1]` with interior neutral element.
#[derive(Clone)]
pub struct Uninorm {
    label: String,
    eval: BinaryFn,
    neutral: f64,
    generator: Option<UninormGenerator>,
    mode: InfinityMode,
}

impl fmt::Debug for Uninorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Uninorm")
            .field("label", &self.label)
            .field("neutral", &self.neutral)
            .field("generator", &self.generator)
            .field("mode", &self.mode)
            .finish()
    }
}

impl Uninorm {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn neutral(&self) -> f64 {
        self.neutral
    }

    pub fn generator(&self) -> Option<&UninormGenerator> {
        self.generator.as_ref()
    }

    pub fn mode(&self) -> InfinityMode {
        self.mode
    }

    #[inline]
    pub fn apply(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y).clamp(0.0, 1.0)
    }

    pub fn eval(&self, x: UnitValue, y: UnitValue) -> UnitValue {
        UnitValue::new(self.apply(x.get(), y.get())).expect("uninorm output in [0, 1]")
    }
}

/// `U(x, y) = u⁻¹(u(x) + u(y))` with `∞ − ∞` resolved by the generator's mode.
pub fn representable_from_generator(gen: UninormGenerator) -> Uninorm {
    let g = gen.clone();
    let e = gen.neutral;
    let mode = gen.mode;
    Uninorm {
        label: format!("uninorm(gen={})", gen.label),
        eval: Arc::new(move |x, y| {
            if x == e {
                y
            } else if y == e {
                x
            } else {
                g.invert(ext_add_f64(g.apply(x), g.apply(y), mode))
            }
        }),
        neutral: e,
        generator: Some(gen),
        mode,
    }
}

/// `U(z, t) = ½ (2z − 1) ⊕ (2t − 1) + ½`, with `u(x) = g(2x − 1)` attached.
pub fn from_pseudo_addition(p: &PseudoAddition) -> Result<Uninorm> {
    let g = match p.generator() {
        Some(g) if g.is_total() && p.conorm().is_strict() => g.clone(),
        _ => return Err(Error::NotStrict(p.conorm().label().to_string())),
    };
    let mode = p.boundary().infinity_mode();
    let g_eval = g.clone();
    let g_inv = g;
    let gen = UninormGenerator {
        label: format!("g[{}]", p.conorm().label()),
        eval: Arc::new(move |x: f64| g_eval.apply(2.0 * x - 1.0)),
        inverse: Some(Arc::new(move |y: f64| 0.5 * g_inv.invert(y) + 0.5)),
        neutral: 0.5,
        mode,
    };
    let inner = p.clone();
    Ok(Uninorm {
        label: format!("rescaled({})", p.label()),
        eval: Arc::new(move |z, t| 0.5 * inner.apply(2.0 * z - 1.0, 2.0 * t - 1.0) + 0.5),
        neutral: 0.5,
        generator: Some(gen),
        mode,
    })
}

/// Inverse rescaling to `[-1, 1]`: `x ⊕ y = 2 U(½x + ½, ½y + ½) − 1`.
pub fn to_pseudo_addition(u: &Uninorm) -> Result<BinaryOp> {
    if u.neutral != 0.5 {
        return Err(Error::WrongNeutral(u.neutral));
    }
    let inner = u.clone();
    let op = BinaryOp::new(format!("rescaled({})", u.label), Carrier::Bipolar, move |x, y| {
        let v = 2.0 * inner.apply(0.5 * x + 0.5, 0.5 * y + 0.5) - 1.0;
        if v == 0.0 {
            0.0
        } else {
            v.clamp(-1.0, 1.0)
        }
    });
    Ok(match &u.generator {
        Some(gen) => {
            let gen = gen.clone();
            op.with_generator(move |x| gen.apply(0.5 * x + 0.5))
        }
        None => op,
    })
}

/// Underlying t-norm `T_U(x, y) = U(ex, ey) / e` and t-conorm
/// `S_U(x, y) = (U(e + (1−e)x, e + (1−e)y) − e) / (1 − e)`, with generators
/// `t_u(x) = −u(ex)` and `s_u(x) = u(e + (1−e)x)` when `U` is representable.
pub fn decompose_uninorm(u: &Uninorm) -> (TriangularNorm, TriangularConorm) {
    let e = u.neutral;
    let (t_gen, s_gen) = match &u.generator {
        Some(gen) => {
            let (g1, g2, g3, g4) = (gen.clone(), gen.clone(), gen.clone(), gen.clone());
            let t = AdditiveGenerator::from_parts(
                format!("t_u[{}]", gen.label),
                Direction::Decreasing,
                ExtendedReal::PosInfinity,
                Arc::new(move |x: f64| -g1.apply(e * x)),
                Some(Arc::new(move |y: f64| g2.invert(-y) / e)),
            );
            let s = AdditiveGenerator::from_parts(
                format!("s_u[{}]", gen.label),
                Direction::Increasing,
                ExtendedReal::PosInfinity,
                Arc::new(move |x: f64| g3.apply(e + (1.0 - e) * x)),
                Some(Arc::new(move |y: f64| (g4.invert(y) - e) / (1.0 - e))),
            );
            (Some(t), Some(s))
        }
        None => (None, None),
    };
    let tu = u.clone();
    let su = u.clone();
    let norm = TriangularNorm::from_fn(
        format!("T[{}]", u.label),
        move |x, y| tu.apply(e * x, e * y) / e,
        t_gen,
    );
    let conorm = TriangularConorm::from_fn(
        format!("S[{}]", u.label),
        move |x, y| (su.apply(e + (1.0 - e) * x, e + (1.0 - e) * y) - e) / (1.0 - e),
        s_gen,
    );
    (norm, conorm)
}

/// Value used off the two diagonal squares of a composed uninorm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fill {
    Min,
    Max,
}

impl std::str::FromStr for Fill {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Fill::Min),
            "max" => Ok(Fill::Max),
            other => Err(Error::InvalidParameter(format!(
                "fill must be min or max, got `{other}`"
            ))),
        }
    }
}

/// `U_{T,S}`: rescaled `T` on `[0, e]²`, rescaled `S` on `[e, 1]²`, the fill
/// elsewhere. Associativity is not checked here; audit the result.
pub fn compose_uninorm(
    t: &TriangularNorm,
    s: &TriangularConorm,
    e: f64,
    fill: Fill,
) -> Result<Uninorm> {
    if !(e > 0.0 && e < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "neutral element must lie in ]0, 1[, got {e}"
        )));
    }
    let (tn, sn) = (t.clone(), s.clone());
    let eval = move |x: f64, y: f64| {
        if x <= e && y <= e {
            e * tn.apply(x / e, y / e)
        } else if x >= e && y >= e {
            e + (1.0 - e) * sn.apply((x - e) / (1.0 - e), (y - e) / (1.0 - e))
        } else {
            match fill {
                Fill::Min => x.min(y),
                Fill::Max => x.max(y),
            }
        }
    };
    let mode = match fill {
        Fill::Min => InfinityMode::Conjunctive,
        Fill::Max => InfinityMode::Disjunctive,
    };
    Ok(Uninorm {
        label: format!(
            "compose(T={},S={},e={e},fill={})",
            t.label(),
            s.label(),
            match fill {
                Fill::Min => "min",
                Fill::Max => "max",
            }
        ),
        eval: Arc::new(eval),
        neutral: e,
        generator: None,
        mode,
    })
}

/// Rescaled symmetric maximum: min below the antidiagonal, max above, `½` on it.
///
/// `U_max(0, 1) = ½` as well, so this is not a uninorm (nor associative).
pub fn u_max(z: UnitValue, t: UnitValue) -> UnitValue {
    UnitValue::new(u_max_raw(z.get(), t.get())).expect("in range")
}

#[inline]
pub fn u_max_raw(z: f64, t: f64) -> f64 {
    let s = z + t;
    if s < 1.0 {
        z.min(t)
    } else if s == 1.0 {
        0.5
    } else {
        z.max(t)
    }
}

/// `U_max` packaged as a (non-associative) uninorm-shaped operator.
pub fn u_max_operator() -> Uninorm {
    Uninorm {
        label: "umax".into(),
        eval: Arc::new(u_max_raw),
        neutral: 0.5,
        generator: None,
        mode: InfinityMode::Disjunctive,
    }
}

/// `N(x) = u⁻¹(−u(x))`.
pub fn strong_negation(gen: &UninormGenerator, x: UnitValue) -> Result<UnitValue> {
    let v = x.get();
    if v == 0.0 || v == 1.0 {
        return Err(Error::BoundaryInput(v));
    }
    if v == gen.neutral {
        return Ok(x);
    }
    Ok(UnitValue::new(gen.invert(-gen.apply(v)))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conorms::dual_of_conorm;
    use crate::symmetric::{sym_max_raw, Boundary};

    fn u(v: f64) -> UnitValue {
        UnitValue::new(v).unwrap()
    }

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    }

    fn interior(n: usize) -> Vec<f64> {
        (1..=n).map(|i| i as f64 / (n + 1) as f64).collect()
    }

    fn prob_sum_uninorm() -> Uninorm {
        from_pseudo_addition(&PseudoAddition::new(TriangularConorm::prob_sum(), Boundary::PlusOne))
            .unwrap()
    }

    #[test]
    fn representable_examples() {
        let un = representable_from_generator(UninormGenerator::logit(InfinityMode::Conjunctive));
        // u⁻¹(2 ln 4) = 16/17
        assert!((un.apply(0.8, 0.8) - 16.0 / 17.0).abs() < 1e-15);
        for y in grid(21) {
            assert_eq!(un.apply(0.5, y), y);
        }
        assert_eq!(un.apply(0.0, 1.0), 0.0);
        let dis = representable_from_generator(UninormGenerator::logit(InfinityMode::Disjunctive));
        assert_eq!(dis.apply(0.0, 1.0), 1.0);
    }

    #[test]
    fn representable_is_strictly_increasing_on_interior_chains() {
        let un = representable_from_generator(UninormGenerator::logit(InfinityMode::Conjunctive));
        let pts = interior(60);
        for &x in &pts {
            for w in pts.windows(2) {
                assert!(un.apply(x, w[0]) < un.apply(x, w[1]));
            }
        }
    }

    #[test]
    fn generator_validation() {
        assert!(UninormGenerator::new("shift", 0.5, InfinityMode::Conjunctive, |x| x, None).is_err());
        assert!(UninormGenerator::new("bad-e", 1.0, InfinityMode::Conjunctive, |x| x - 1.0, None).is_err());
        let g = UninormGenerator::new(
            "odd-cubic",
            0.5,
            InfinityMode::Conjunctive,
            |x| ((x / (1.0 - x)).ln()).powi(3),
            None,
        )
        .unwrap();
        let un = representable_from_generator(g);
        for &y in &grid(11) {
            assert!((un.apply(0.5, y) - y).abs() < 1e-15);
        }
    }

    #[test]
    fn from_pseudo_addition_examples() {
        let un = prob_sum_uninorm();
        for t in grid(21) {
            assert!((un.apply(0.5, t) - t).abs() < 1e-15);
        }
        // x = 0.5, y = -0.5: x ⊕ y = 0
        assert_eq!(un.apply(0.75, 0.25), 0.5);
        // 0.5 ⊕ 0.5 = 0.75 mapped back
        assert!((un.apply(0.75, 0.75) - 0.875).abs() < 1e-15);
        let luk = PseudoAddition::new(TriangularConorm::lukasiewicz(), Boundary::PlusOne);
        assert!(matches!(from_pseudo_addition(&luk), Err(Error::NotStrict(_))));
    }

    #[test]
    fn antidiagonal_maps_to_neutral() {
        let un = prob_sum_uninorm();
        for z in interior(200) {
            assert!((un.apply(z, 1.0 - z) - 0.5).abs() <= 1e-12, "z = {z}");
        }
    }

    #[test]
    fn generator_identity_on_interior_grid() {
        let un = prob_sum_uninorm();
        let gen = un.generator().unwrap().clone();
        for z in interior(101) {
            for t in interior(101) {
                let via = gen.invert(gen.apply(z) + gen.apply(t));
                assert!((un.apply(z, t) - via).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn round_trip_through_rescaling() {
        let p = PseudoAddition::new(TriangularConorm::prob_sum(), Boundary::PlusOne);
        let back = to_pseudo_addition(&from_pseudo_addition(&p).unwrap()).unwrap();
        for i in 0..=40 {
            for j in 0..=40 {
                let (x, y) = (-1.0 + i as f64 / 20.0, -1.0 + j as f64 / 20.0);
                assert!((back.apply(x, y) - p.apply(x, y)).abs() <= 1e-12);
            }
        }
        let compose = compose_uninorm(&TriangularNorm::minimum(), &TriangularConorm::maximum(), 0.3, Fill::Min)
            .unwrap();
        assert!(matches!(to_pseudo_addition(&compose), Err(Error::WrongNeutral(_))));
    }

    #[test]
    fn rescaled_u_max_is_symmetric_maximum() {
        let svee = to_pseudo_addition(&u_max_operator()).unwrap();
        // dyadic grid keeps the rescaled antidiagonal exact
        for i in 0..=32 {
            for j in 0..=32 {
                let (x, y) = (-1.0 + i as f64 / 16.0, -1.0 + j as f64 / 16.0);
                assert_eq!(svee.apply(x, y), sym_max_raw(x, y), "({x}, {y})");
            }
        }
    }

    #[test]
    fn decomposition_of_rescaled_prob_sum() {
        let un = prob_sum_uninorm();
        let (t, s) = decompose_uninorm(&un);
        let ps = TriangularConorm::prob_sum();
        let dual = dual_of_conorm(&ps);
        for &x in &grid(101) {
            for &y in &grid(101) {
                assert!((s.apply(x, y) - ps.apply(x, y)).abs() <= 1e-9);
                assert!((t.apply(x, y) - dual.apply(x, y)).abs() <= 1e-9);
            }
        }
        let tg = t.generator().unwrap();
        let sg = s.generator().unwrap();
        for x in interior(50) {
            assert!((tg.invert(tg.apply(x)) - x).abs() < 1e-12);
            assert!((sg.invert(sg.apply(x)) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn decomposition_of_u_max() {
        let (t, s) = decompose_uninorm(&u_max_operator());
        for &x in &grid(51) {
            for &y in &grid(51) {
                assert_eq!(t.apply(x, y), x.min(y));
                assert!((s.apply(x, y) - x.max(y)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn compose_examples() {
        let (t, s) = (TriangularNorm::minimum(), TriangularConorm::maximum());
        let lo = compose_uninorm(&t, &s, 0.5, Fill::Min).unwrap();
        assert_eq!(lo.apply(0.2, 0.8), 0.2);
        let hi = compose_uninorm(&t, &s, 0.5, Fill::Max).unwrap();
        assert_eq!(hi.apply(0.2, 0.8), 0.8);
        let pt = compose_uninorm(&TriangularNorm::product(), &TriangularConorm::prob_sum(), 0.3, Fill::Max)
            .unwrap();
        for y in grid(21) {
            assert!((pt.apply(0.3, y) - y).abs() < 1e-15);
        }
        assert!(compose_uninorm(&t, &s, 1.0, Fill::Max).is_err());
    }

    #[test]
    fn compose_then_decompose_recovers_blocks() {
        let t = TriangularNorm::product();
        let s = TriangularConorm::prob_sum();
        for e in [0.25, 0.5, 0.7] {
            for fill in [Fill::Min, Fill::Max] {
                let un = compose_uninorm(&t, &s, e, fill).unwrap();
                let (t2, s2) = decompose_uninorm(&un);
                for &x in &grid(101) {
                    for &y in &grid(101) {
                        assert!((t2.apply(x, y) - t.apply(x, y)).abs() <= 1e-9);
                        assert!((s2.apply(x, y) - s.apply(x, y)).abs() <= 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn u_max_examples() {
        assert_eq!(u_max(u(0.3), u(0.7)).get(), 0.5);
        assert_eq!(u_max(u(0.2), u(0.3)).get(), 0.2);
        assert_eq!(u_max(u(0.9), u(0.4)).get(), 0.9);
        assert_eq!(u_max(u(0.0), u(1.0)).get(), 0.5);
        // rescaled (0.5, 0.8, -0.8)
        let (a, b, c) = (0.75, 0.9, 0.1);
        let left = u_max_raw(u_max_raw(a, b), c);
        let right = u_max_raw(a, u_max_raw(b, c));
        assert_eq!(left, 0.5);
        assert_eq!(right, 0.75);
    }

    #[test]
    fn strong_negation_examples() {
        let g = UninormGenerator::logit(InfinityMode::Conjunctive);
        // u(N) = -u(0.8) = -ln 4  =>  N = 1/(1 + 4) = 0.2
        assert!((strong_negation(&g, u(0.8)).unwrap().get() - 0.2).abs() < 1e-15);
        assert_eq!(strong_negation(&g, u(0.5)).unwrap().get(), 0.5);
        let n = strong_negation(&g, u(0.3)).unwrap();
        assert!((strong_negation(&g, n).unwrap().get() - 0.3).abs() < 1e-15);
        assert!(matches!(strong_negation(&g, u(0.0)), Err(Error::BoundaryInput(_))));
        assert!(matches!(strong_negation(&g, u(1.0)), Err(Error::BoundaryInput(_))));
        let un = representable_from_generator(g.clone());
        let pts = interior(40);
        for w in pts.windows(2) {
            let (a, b) = (strong_negation(&g, u(w[0])).unwrap(), strong_negation(&g, u(w[1])).unwrap());
            assert!(a > b);
            assert!((un.apply(w[0], a.get()) - 0.5).abs() < 1e-12);
        }
    }
}
