//! Type-erased binary operations, as consumed by the audit engine and CLI.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::conorms::{BinaryFn, TriangularConorm, TriangularNorm};
use crate::generator::RealFn;
use crate::symmetric::{sym_max_raw, sym_min_raw, PseudoAddition, PseudoMultiplication};
use crate::uninorms::Uninorm;

/// Underlying set an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Carrier {
    Unit,
    Bipolar,
}

impl Carrier {
    /// Order-reversing involution: `1 - x` on `[0, 1]`, `-x` on `[-1, 1]`.
    pub fn negate(self, x: f64) -> f64 {
        match self {
            Carrier::Unit => 1.0 - x,
            Carrier::Bipolar => {
                if x == 0.0 {
                    0.0
                } else {
                    -x
                }
            }
        }
    }

    pub fn bounds(self) -> (f64, f64) {
        match self {
            Carrier::Unit => (0.0, 1.0),
            Carrier::Bipolar => (-1.0, 1.0),
        }
    }
}

/// A named binary operation with an optional monotone comparison map.
///
/// The comparison map (an additive generator) lets audits compare results
/// where the operation is plain addition in disguise. It returns NaN where
/// it is undefined.
#[derive(Clone)]
pub struct BinaryOp {
    label: String,
    eval: BinaryFn,
    carrier: Carrier,
    generator: Option<RealFn>,
}

impl fmt::Debug for BinaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BinaryOp")
            .field("label", &self.label)
            .field("carrier", &self.carrier)
            .field("generator", &self.generator.is_some())
            .finish()
    }
}

impl BinaryOp {
    pub fn new(
        label: impl Into<String>,
        carrier: Carrier,
        eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        BinaryOp {
            label: label.into(),
            eval: Arc::new(eval),
            carrier,
            generator: None,
        }
    }

    pub fn with_generator(mut self, g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.generator = Some(Arc::new(g));
        self
    }

    pub fn without_generator(mut self) -> Self {
        self.generator = None;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn generator(&self) -> Option<&RealFn> {
        self.generator.as_ref()
    }

    #[inline]
    pub fn apply(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y)
    }

    pub fn pseudo_addition(p: &PseudoAddition) -> Self {
        let inner = p.clone();
        let op = BinaryOp::new(p.label(), Carrier::Bipolar, move |x, y| inner.apply(x, y));
        match p.generator() {
            Some(g) => {
                let g = g.clone();
                op.with_generator(move |x| g.apply(x))
            }
            None => op,
        }
    }

    pub fn pseudo_multiplication(m: &PseudoMultiplication) -> Self {
        let inner = m.clone();
        BinaryOp::new(m.label(), Carrier::Bipolar, move |x, y| inner.apply(x, y))
    }

    pub fn sym_max() -> Self {
        BinaryOp::new("svee", Carrier::Bipolar, sym_max_raw)
    }

    pub fn sym_min() -> Self {
        BinaryOp::new("swedge", Carrier::Bipolar, sym_min_raw)
    }

    pub fn conorm(s: &TriangularConorm) -> Self {
        let inner = s.clone();
        let op = BinaryOp::new(s.label(), Carrier::Unit, move |x, y| inner.apply(x, y));
        match s.generator() {
            Some(g) if g.is_strict() => {
                let g = g.clone();
                op.with_generator(move |x| g.apply(x))
            }
            _ => op,
        }
    }

    pub fn norm(t: &TriangularNorm) -> Self {
        let inner = t.clone();
        let op = BinaryOp::new(t.label(), Carrier::Unit, move |x, y| inner.apply(x, y));
        match t.generator() {
            // decreasing map; negated so that comparisons see an increasing one
            Some(g) if g.is_strict() => {
                let g = g.clone();
                op.with_generator(move |x| -g.apply(x))
            }
            _ => op,
        }
    }

    pub fn uninorm(u: &Uninorm) -> Self {
        let inner = u.clone();
        let op = BinaryOp::new(u.label(), Carrier::Unit, move |x, y| inner.apply(x, y));
        match u.generator() {
            Some(g) => {
                let g = g.clone();
                op.with_generator(move |x| g.apply(x))
            }
            None => op,
        }
    }
}
