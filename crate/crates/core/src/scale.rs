//! Carrier sets, signs and extended-real arithmetic.
//!
//! Every operator in this crate lives on one of two carriers: the unit
//! interval `[0, 1]` (t-norms, t-conorms, uninorms) or the bipolar scale
//! `[-1, 1]` (pseudo-additions, pseudo-multiplications, symmetric max/min).
//! Values are validated once at construction and immutable afterwards.

use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Serialize};

use crate::error::ScaleError;

fn normalize_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// A point of the bipolar scale `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct BipolarValue(f64);

impl BipolarValue {
    pub const ZERO: BipolarValue = BipolarValue(0.0);
    pub const ONE: BipolarValue = BipolarValue(1.0);
    pub const MINUS_ONE: BipolarValue = BipolarValue(-1.0);

    pub fn new(v: f64) -> Result<Self, ScaleError> {
        if !v.is_finite() {
            return Err(ScaleError::InvalidNumber(v));
        }
        if !(-1.0..=1.0).contains(&v) {
            return Err(ScaleError::OutOfRange { value: v, lo: -1.0, hi: 1.0 });
        }
        Ok(BipolarValue(normalize_zero(v)))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn abs(self) -> UnitValue {
        UnitValue(self.0.abs())
    }

    pub fn sign(self) -> SignValue {
        sign_of(self)
    }

    /// Maps `[-1, 1]` affinely onto `[0, 1]` (`x ↦ (x + 1) / 2`).
    pub fn to_unit(self) -> UnitValue {
        UnitValue(((self.0 + 1.0) / 2.0).clamp(0.0, 1.0))
    }
}

impl Neg for BipolarValue {
    type Output = BipolarValue;

    fn neg(self) -> BipolarValue {
        BipolarValue(normalize_zero(-self.0))
    }
}

impl TryFrom<f64> for BipolarValue {
    type Error = ScaleError;

    fn try_from(v: f64) -> Result<Self, Self::Error> {
        BipolarValue::new(v)
    }
}

impl From<BipolarValue> for f64 {
    fn from(v: BipolarValue) -> f64 {
        v.0
    }
}

impl From<UnitValue> for BipolarValue {
    fn from(v: UnitValue) -> BipolarValue {
        BipolarValue(v.0)
    }
}

impl fmt::Display for BipolarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// A point of the unit interval `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct UnitValue(f64);

impl UnitValue {
    pub const ZERO: UnitValue = UnitValue(0.0);
    pub const HALF: UnitValue = UnitValue(0.5);
    pub const ONE: UnitValue = UnitValue(1.0);

    pub fn new(v: f64) -> Result<Self, ScaleError> {
        if !v.is_finite() {
            return Err(ScaleError::InvalidNumber(v));
        }
        if !(0.0..=1.0).contains(&v) {
            return Err(ScaleError::OutOfRange { value: v, lo: 0.0, hi: 1.0 });
        }
        Ok(UnitValue(normalize_zero(v)))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `1 - v`, the standard negation.
    pub fn complement(self) -> UnitValue {
        UnitValue(1.0 - self.0)
    }

    /// Maps `[0, 1]` affinely onto `[-1, 1]` (`z ↦ 2z - 1`).
    pub fn to_bipolar(self) -> BipolarValue {
        BipolarValue((2.0 * self.0 - 1.0).clamp(-1.0, 1.0))
    }
}

impl TryFrom<f64> for UnitValue {
    type Error = ScaleError;

    fn try_from(v: f64) -> Result<Self, Self::Error> {
        UnitValue::new(v)
    }
}

impl From<UnitValue> for f64 {
    fn from(v: UnitValue) -> f64 {
        v.0
    }
}

impl fmt::Display for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

pub fn make_bipolar(v: f64) -> Result<BipolarValue, ScaleError> {
    BipolarValue::new(v)
}

pub fn make_unit(v: f64) -> Result<UnitValue, ScaleError> {
    UnitValue::new(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SignValue {
    Negative,
    Zero,
    Positive,
}

impl SignValue {
    pub fn of(x: f64) -> SignValue {
        if x > 0.0 {
            SignValue::Positive
        } else if x == 0.0 {
            SignValue::Zero
        } else {
            SignValue::Negative
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            SignValue::Negative => -1.0,
            SignValue::Zero => 0.0,
            SignValue::Positive => 1.0,
        }
    }
}

impl Neg for SignValue {
    type Output = SignValue;

    fn neg(self) -> SignValue {
        match self {
            SignValue::Negative => SignValue::Positive,
            SignValue::Zero => SignValue::Zero,
            SignValue::Positive => SignValue::Negative,
        }
    }
}

impl std::ops::Mul for SignValue {
    type Output = SignValue;

    fn mul(self, rhs: SignValue) -> SignValue {
        SignValue::of(self.as_f64() * rhs.as_f64())
    }
}

pub fn sign_of(x: BipolarValue) -> SignValue {
    SignValue::of(x.get())
}

/// How `(+∞) + (−∞)` resolves.
///
/// A conjunctive representable uninorm sends the clash to `−∞`, a
/// disjunctive one to `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfinityMode {
    Conjunctive,
    Disjunctive,
}

/// A real number or one of the two infinities.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtendedReal {
    NegInfinity,
    Finite(f64),
    PosInfinity,
}

impl ExtendedReal {
    /// Rejects NaN; maps `±inf` onto the matching infinity.
    pub fn new(v: f64) -> Result<Self, ScaleError> {
        if v.is_nan() {
            Err(ScaleError::InvalidNumber(v))
        } else {
            Ok(Self::from_f64_unchecked(v))
        }
    }

    pub(crate) fn from_f64_unchecked(v: f64) -> Self {
        if v == f64::INFINITY {
            ExtendedReal::PosInfinity
        } else if v == f64::NEG_INFINITY {
            ExtendedReal::NegInfinity
        } else {
            ExtendedReal::Finite(v)
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::NegInfinity => f64::NEG_INFINITY,
            ExtendedReal::Finite(v) => v,
            ExtendedReal::PosInfinity => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }
}

impl Neg for ExtendedReal {
    type Output = ExtendedReal;

    fn neg(self) -> ExtendedReal {
        match self {
            ExtendedReal::NegInfinity => ExtendedReal::PosInfinity,
            ExtendedReal::Finite(v) => ExtendedReal::Finite(-v),
            ExtendedReal::PosInfinity => ExtendedReal::NegInfinity,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInfinity => f.write_str("-inf"),
            ExtendedReal::Finite(v) => fmt::Display::fmt(v, f),
            ExtendedReal::PosInfinity => f.write_str("+inf"),
        }
    }
}

pub fn ext_add(a: ExtendedReal, b: ExtendedReal, mode: InfinityMode) -> ExtendedReal {
    use ExtendedReal::*;
    match (a, b) {
        (Finite(x), Finite(y)) => ExtendedReal::from_f64_unchecked(x + y),
        (PosInfinity, NegInfinity) | (NegInfinity, PosInfinity) => match mode {
            InfinityMode::Conjunctive => NegInfinity,
            InfinityMode::Disjunctive => PosInfinity,
        },
        (PosInfinity, _) | (_, PosInfinity) => PosInfinity,
        (NegInfinity, _) | (_, NegInfinity) => NegInfinity,
    }
}

/// `ext_add` on raw doubles whose infinities carry the extended meaning.
#[inline]
pub(crate) fn ext_add_f64(a: f64, b: f64, mode: InfinityMode) -> f64 {
    if a.is_infinite() && b.is_infinite() && a != b {
        match mode {
            InfinityMode::Conjunctive => f64::NEG_INFINITY,
            InfinityMode::Disjunctive => f64::INFINITY,
        }
    } else {
        a + b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bipolar_construction() {
        assert_eq!(make_bipolar(0.5).unwrap().get(), 0.5);
        assert_eq!(make_bipolar(1.0).unwrap().get(), 1.0);
        assert_eq!(make_bipolar(-1.0).unwrap().get(), -1.0);
        assert!(matches!(make_bipolar(1.2), Err(ScaleError::OutOfRange { .. })));
        assert!(matches!(make_bipolar(f64::NAN), Err(ScaleError::InvalidNumber(_))));
        assert!(matches!(
            make_bipolar(f64::INFINITY),
            Err(ScaleError::InvalidNumber(_))
        ));
    }

    #[test]
    fn unit_construction() {
        assert!(make_unit(-0.1).is_err());
        assert!(make_unit(1.0 + 1e-15).is_err());
        assert_eq!(make_unit(0.25).unwrap().get(), 0.25);
    }

    #[test]
    fn negative_zero_is_normalized() {
        let z = make_bipolar(-0.0).unwrap();
        assert!(z.get().is_sign_positive());
        assert_eq!(sign_of(z), SignValue::Zero);
        assert!((-BipolarValue::ZERO).get().is_sign_positive());
    }

    #[test]
    fn sign_examples() {
        assert_eq!(sign_of(make_bipolar(0.3).unwrap()), SignValue::Positive);
        assert_eq!(sign_of(make_bipolar(0.0).unwrap()), SignValue::Zero);
        assert_eq!(sign_of(make_bipolar(-0.7).unwrap()), SignValue::Negative);
    }

    #[test]
    fn ext_add_examples() {
        use ExtendedReal::*;
        assert_eq!(ext_add(PosInfinity, NegInfinity, InfinityMode::Conjunctive), NegInfinity);
        assert_eq!(ext_add(PosInfinity, NegInfinity, InfinityMode::Disjunctive), PosInfinity);
        for mode in [InfinityMode::Conjunctive, InfinityMode::Disjunctive] {
            assert_eq!(ext_add(Finite(2.0), Finite(3.0), mode), Finite(5.0));
            assert_eq!(ext_add(Finite(2.0), NegInfinity, mode), NegInfinity);
        }
    }

    #[test]
    fn ext_add_commutes_on_all_finiteness_combinations() {
        use ExtendedReal::*;
        let values = [NegInfinity, Finite(-1.5), PosInfinity];
        for mode in [InfinityMode::Conjunctive, InfinityMode::Disjunctive] {
            for a in values {
                for b in values {
                    assert_eq!(ext_add(a, b, mode), ext_add(b, a, mode));
                    assert_eq!(
                        ext_add(a, b, mode).to_f64(),
                        ext_add_f64(a.to_f64(), b.to_f64(), mode)
                    );
                }
            }
        }
    }

    #[test]
    fn extended_real_rejects_nan() {
        assert!(ExtendedReal::new(f64::NAN).is_err());
        assert_eq!(ExtendedReal::new(f64::INFINITY).unwrap(), ExtendedReal::PosInfinity);
    }

    proptest! {
        #[test]
        fn sign_is_odd(v in -1.0f64..=1.0) {
            let x = make_bipolar(v).unwrap();
            prop_assert_eq!(sign_of(-x), -sign_of(x));
        }

        #[test]
        fn double_negation_is_identity(v in -1.0f64..=1.0) {
            let x = make_bipolar(v).unwrap();
            prop_assert_eq!(make_bipolar((-(-x)).get()).unwrap(), x);
        }

        #[test]
        fn affine_maps_round_trip(v in -1.0f64..=1.0) {
            let x = make_bipolar(v).unwrap();
            prop_assert!((x.to_unit().to_bipolar().get() - v).abs() <= 1e-15);
        }
    }
}
