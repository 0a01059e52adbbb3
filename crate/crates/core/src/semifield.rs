//! Scalar algebra of the four linearly ordered radicable idempotent
//! semifields, their order, rational powers, isomorphisms, and the scalar
//! distance function.
//!
//! Each semifield is a set of extended reals with an idempotent addition
//! (the order maximum), an invertible multiplication, a zero that is both the
//! additive identity and the multiplicative absorber, and an adjoined maximal
//! element. Values are carried as IEEE doubles with the native infinities
//! standing in for the extremal elements, which keeps integer max-plus
//! arithmetic exact.

use crate::{Error, Result};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// One of the four supported idempotent semifields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semifield {
    /// Reals with max as addition and + as multiplication; zero is -inf.
    MaxPlus,
    /// Reals with min as addition and + as multiplication; zero is +inf.
    MinPlus,
    /// Non-negative reals with max as addition and * as multiplication; zero is 0.
    MaxTimes,
    /// Positive reals with min as addition and * as multiplication; zero is
    /// +inf, and the maximal element is 0.
    MinTimes,
}

impl Semifield {
    /// All four semifields, in a fixed order.
    pub const ALL: [Semifield; 4] = [Self::MaxPlus, Self::MinPlus, Self::MaxTimes, Self::MinTimes];

    /// The additive identity (and multiplicative absorber).
    pub fn zero(self) -> f64 {
        match self {
            Self::MaxPlus => f64::NEG_INFINITY,
            Self::MinPlus | Self::MinTimes => f64::INFINITY,
            Self::MaxTimes => 0.0,
        }
    }

    /// The multiplicative identity.
    pub fn one(self) -> f64 {
        match self {
            Self::MaxPlus | Self::MinPlus => 0.0,
            Self::MaxTimes | Self::MinTimes => 1.0,
        }
    }

    /// The adjoined maximal element, written `inf` in serialized form.
    pub fn top(self) -> f64 {
        match self {
            Self::MaxPlus | Self::MaxTimes => f64::INFINITY,
            Self::MinPlus => f64::NEG_INFINITY,
            Self::MinTimes => 0.0,
        }
    }

    pub fn is_zero(self, x: f64) -> bool {
        x == self.zero()
    }

    pub fn is_top(self, x: f64) -> bool {
        x == self.top()
    }

    /// Whether `x` lies in the carrier set (extended by the maximal element).
    pub fn contains(self, x: f64) -> bool {
        match self {
            Self::MaxPlus | Self::MinPlus => !x.is_nan(),
            // 0 and +inf are the extremal elements of both times-semifields.
            Self::MaxTimes | Self::MinTimes => !x.is_nan() && x >= 0.0,
        }
    }

    /// Idempotent addition: the order maximum of the two operands.
    pub fn add(self, x: f64, y: f64) -> f64 {
        match self {
            Self::MaxPlus | Self::MaxTimes => x.max(y),
            Self::MinPlus | Self::MinTimes => x.min(y),
        }
    }

    /// Multiplication, with the zero element absorbing (also against the
    /// maximal element, which the axioms leave open).
    pub fn mul(self, x: f64, y: f64) -> f64 {
        if self.is_zero(x) || self.is_zero(y) {
            return self.zero();
        }
        match self {
            Self::MaxPlus | Self::MinPlus => x + y,
            Self::MaxTimes | Self::MinTimes => x * y,
        }
    }

    /// The multiplicative inverse of a nonzero element.
    pub fn inv(self, x: f64) -> Result<f64> {
        if self.is_zero(x) {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pseudo_inv(x))
    }

    /// Pseudo-inversion: the inverse on nonzero elements, zero on zero.
    ///
    /// This is the scalar form of the vector pseudo-inverse and the workhorse
    /// of every residuation formula in the crate.
    pub fn pseudo_inv(self, x: f64) -> f64 {
        if self.is_zero(x) {
            return self.zero();
        }
        match self {
            Self::MaxPlus | Self::MinPlus => -x,
            Self::MaxTimes | Self::MinTimes => x.recip(),
        }
    }

    /// The rational power `x^q`; defined for nonzero `x`, and for zero `x`
    /// only with a positive exponent.
    pub fn pow(self, x: f64, q: Rational) -> Result<f64> {
        if self.is_zero(x) {
            return if q.is_positive() {
                Ok(self.zero())
            } else {
                Err(Error::ZeroPower)
            };
        }
        if q.is_zero() {
            return Ok(self.one());
        }
        Ok(match self {
            Self::MaxPlus | Self::MinPlus => x * q.value(),
            Self::MaxTimes | Self::MinTimes => {
                if q.den() == 2 && q.num() == 1 {
                    x.sqrt()
                } else if q.den() == 1 {
                    x.powi(q.num() as i32)
                } else {
                    x.powf(q.value())
                }
            }
        })
    }

    /// The square root, total on the carrier (zero and the maximal element
    /// are their own roots). Used for residual values, which are never zero.
    pub(crate) fn sqrt(self, x: f64) -> f64 {
        if self.is_zero(x) || self.is_top(x) {
            return x;
        }
        match self {
            Self::MaxPlus | Self::MinPlus => x * 0.5,
            Self::MaxTimes | Self::MinTimes => x.sqrt(),
        }
    }

    /// The semifield order: `x <= y` iff `x (+) y = y`.
    pub fn le(self, x: f64, y: f64) -> bool {
        match self {
            Self::MaxPlus | Self::MaxTimes => x <= y,
            Self::MinPlus | Self::MinTimes => y <= x,
        }
    }

    /// Total order comparison of two carrier values.
    pub fn cmp(self, x: f64, y: f64) -> Ordering {
        if x == y {
            Ordering::Equal
        } else if self.le(x, y) {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// The order minimum of the two operands.
    pub fn order_min(self, x: f64, y: f64) -> f64 {
        match self {
            Self::MaxPlus | Self::MaxTimes => x.min(y),
            Self::MinPlus | Self::MinTimes => x.max(y),
        }
    }

    /// Distance between two scalars: `inv(y) x (+) inv(x) y` for nonzero
    /// operands, the identity when both are zero (or equal), the maximal
    /// element when exactly one is zero. Always at least the identity.
    pub fn dist(self, x: f64, y: f64) -> f64 {
        if x == y {
            return self.one();
        }
        match (self.is_zero(x), self.is_zero(y)) {
            (true, true) => self.one(),
            (true, false) | (false, true) => self.top(),
            (false, false) => self.add(
                self.mul(self.pseudo_inv(y), x),
                self.mul(self.pseudo_inv(x), y),
            ),
        }
    }

    /// Image of `x` under the isomorphism onto max-plus.
    ///
    /// This composes the edge maps of the isomorphism diagram: negation
    /// between the max- and min-variants, logarithm and exponential between
    /// the times- and plus-variants.
    pub fn to_additive(self, x: f64) -> f64 {
        match self {
            Self::MaxPlus => x,
            Self::MinPlus => -x,
            Self::MaxTimes => x.ln(),
            Self::MinTimes => -x.ln(),
        }
    }

    /// Preimage of a max-plus value under the isomorphism onto max-plus.
    pub fn from_additive(self, v: f64) -> f64 {
        match self {
            Self::MaxPlus => v,
            Self::MinPlus => -v,
            Self::MaxTimes => v.exp(),
            Self::MinTimes => (-v).exp(),
        }
    }

    /// Map a carrier value of `self` to the corresponding value of `target`.
    pub fn map_to(self, target: Semifield, x: f64) -> f64 {
        target.from_additive(self.to_additive(x))
    }

    /// The serialized tag of the semifield.
    pub fn as_str(self) -> &'static str {
        match self {
            Self::MaxPlus => "max-plus",
            Self::MinPlus => "min-plus",
            Self::MaxTimes => "max-times",
            Self::MinTimes => "min-times",
        }
    }
}

impl fmt::Display for Semifield {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Semifield {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "max-plus" => Ok(Self::MaxPlus),
            "min-plus" => Ok(Self::MinPlus),
            "max-times" => Ok(Self::MaxTimes),
            "min-times" => Ok(Self::MinTimes),
            other => Err(format!("unknown semifield tag {other:?}")),
        }
    }
}

/// A rational exponent for the power operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    num: i64,
    den: i64,
}

impl Rational {
    /// A rational with a nonzero denominator; the sign is normalized into the
    /// numerator. Reduction is not required, comparison is by value.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        if den < 0 {
            Ok(Self {
                num: -num,
                den: -den,
            })
        } else {
            Ok(Self { num, den })
        }
    }

    pub fn integer(n: i64) -> Self {
        Self { num: n, den: 1 }
    }

    /// One half, the exponent of the residual square root.
    pub const HALF: Rational = Rational { num: 1, den: 2 };

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }
}

/// A carrier value tagged with its semifield.
///
/// The tagged form drives the public scalar operations, which check that
/// operands share a semifield; bulk linear algebra stores raw values with a
/// single tag per vector or matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalar {
    semifield: Semifield,
    value: f64,
}

impl Scalar {
    /// A scalar of `sf`, validated against the carrier set.
    pub fn new(sf: Semifield, value: f64) -> Result<Self> {
        if !sf.contains(value) {
            return Err(Error::CarrierViolation {
                semifield: sf,
                value,
            });
        }
        // Normalize -0.0 so that max-times zeros have one representation.
        let value = if value == 0.0 { 0.0 } else { value };
        Ok(Self {
            semifield: sf,
            value,
        })
    }

    pub fn zero(sf: Semifield) -> Self {
        Self {
            semifield: sf,
            value: sf.zero(),
        }
    }

    pub fn one(sf: Semifield) -> Self {
        Self {
            semifield: sf,
            value: sf.one(),
        }
    }

    pub fn top(sf: Semifield) -> Self {
        Self {
            semifield: sf,
            value: sf.top(),
        }
    }

    pub fn semifield(&self) -> Semifield {
        self.semifield
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.semifield.is_zero(self.value)
    }

    pub fn is_top(&self) -> bool {
        self.semifield.is_top(self.value)
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.semifield == other.semifield {
            Ok(())
        } else {
            Err(Error::SemifieldMismatch {
                left: self.semifield,
                right: other.semifield,
            })
        }
    }

    /// Idempotent addition of two scalars of the same semifield.
    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(Scalar {
            semifield: self.semifield,
            value: self.semifield.add(self.value, other.value),
        })
    }

    /// Multiplication of two scalars of the same semifield.
    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(Scalar {
            semifield: self.semifield,
            value: self.semifield.mul(self.value, other.value),
        })
    }

    /// The multiplicative inverse; fails on the zero element.
    pub fn invert(&self) -> Result<Scalar> {
        Ok(Scalar {
            semifield: self.semifield,
            value: self.semifield.inv(self.value)?,
        })
    }

    /// The rational power `self^q`.
    pub fn pow(&self, q: Rational) -> Result<Scalar> {
        Ok(Scalar {
            semifield: self.semifield,
            value: self.semifield.pow(self.value, q)?,
        })
    }

    /// The scalar distance to another value of the same semifield.
    pub fn distance(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(Scalar {
            semifield: self.semifield,
            value: self.semifield.dist(self.value, other.value),
        })
    }

    /// The image of this scalar in another semifield under the isomorphism.
    pub fn map_to(&self, target: Semifield) -> Scalar {
        Scalar {
            semifield: target,
            value: self.semifield.map_to(target, self.value),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        if self.semifield != other.semifield {
            return None;
        }
        Some(self.semifield.cmp(self.value, other.value))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
