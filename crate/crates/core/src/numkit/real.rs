use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::precision::working_bits;
use crate::error::{Error, Result};

/// Extended-precision real number backed by MPFR.
///
/// Values are immutable once built; every operation returns a fresh value
/// whose precision is the larger of its operands' precisions.
#[derive(Clone, PartialEq)]
pub struct Real(Float);

impl Real {
    pub fn from_float(f: Float) -> Self {
        Real(f)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn zero() -> Self {
        Real(Float::new(working_bits()))
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Self {
        Real(Float::with_val(working_bits(), v))
    }

    /// Exact conversion of the binary value of `v`; `0.1` is not one tenth.
    pub fn from_f64(v: f64) -> Self {
        Real(Float::with_val(working_bits(), v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Parses a decimal literal (`"0.1"`, `"-2.5e-3"`) at the working precision.
    pub fn parse(s: &str) -> Result<Self> {
        let parsed =
            Float::parse(s.trim()).map_err(|e| Error::Domain(format!("cannot parse {s:?}: {e}")))?;
        Ok(Real(Float::with_val(working_bits(), parsed)))
    }

    pub fn ln2() -> Self {
        Real(Float::with_val(working_bits(), Constant::Log2))
    }

    pub fn pi() -> Self {
        Real(Float::with_val(working_bits(), Constant::Pi))
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    /// Same value rounded to `bits` of significand.
    pub fn with_prec(&self, bits: u32) -> Self {
        Real(Float::with_val(bits, &self.0))
    }

    pub fn exp(&self) -> Self {
        Real(Float::with_val(self.prec(), self.0.exp_ref()))
    }

    pub fn ln(&self) -> Self {
        Real(Float::with_val(self.prec(), self.0.ln_ref()))
    }

    pub fn sqrt(&self) -> Self {
        Real(Float::with_val(self.prec(), self.0.sqrt_ref()))
    }

    pub fn abs(&self) -> Self {
        Real(Float::with_val(self.prec(), self.0.abs_ref()))
    }

    pub fn recip(&self) -> Self {
        Real(Float::with_val(self.prec(), self.0.recip_ref()))
    }

    pub fn cosh(&self) -> Self {
        Real(Float::with_val(self.prec(), self.0.cosh_ref()))
    }

    pub fn sinh(&self) -> Self {
        Real(Float::with_val(self.prec(), self.0.sinh_ref()))
    }

    pub fn tanh(&self) -> Self {
        Real(Float::with_val(self.prec(), self.0.tanh_ref()))
    }

    pub fn powi(&self, n: i32) -> Self {
        Real(Float::with_val(self.prec(), (&self.0).pow(n)))
    }

    pub fn square(&self) -> Self {
        Real(Float::with_val(self.prec(), self.0.square_ref()))
    }

    pub fn mul_pow2(&self, k: i32) -> Self {
        let mut f = self.0.clone();
        f <<= k;
        Real(f)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_positive(&self) -> bool {
        self.0.cmp0() == Some(Ordering::Greater)
    }

    pub fn is_negative(&self) -> bool {
        self.0.cmp0() == Some(Ordering::Less)
    }

    /// -1, 0 or +1.
    pub fn signum_i(&self) -> i32 {
        match self.0.cmp0() {
            Some(Ordering::Greater) => 1,
            Some(Ordering::Less) => -1,
            _ => 0,
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Significant decimal digits needed to round-trip this value's precision.
    pub fn round_trip_digits(&self) -> usize {
        (f64::from(self.prec()) * std::f64::consts::LOG10_2).ceil() as usize + 1
    }

    /// Scientific notation with `digits` significant digits.
    pub fn to_sci(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        self.0.to_string_radix(10, Some(digits.max(1)))
    }

    /// `|a - b| / max(|a|, |b|, floor)`; zero when both sides vanish.
    pub fn rel_diff(a: &Real, b: &Real, floor: &Real) -> Real {
        let scale = a.abs().max(b.abs()).max(floor.abs());
        if scale.is_zero() {
            return Real::zero();
        }
        (a - b).abs() / scale
    }

    /// `|self - other| <= tol * max(|self|, |other|, 1)`.
    pub fn approx_eq(&self, other: &Real, tol: f64) -> bool {
        Real::rel_diff(self, other, &Real::one()) <= Real::from_f64(tol)
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Default for Real {
    fn default() -> Self {
        Real::zero()
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => f.write_str(&self.to_sci(p)),
            None => f.write_str(&self.to_sci(self.round_trip_digits())),
        }
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_sci(24))
    }
}

impl From<i64> for Real {
    fn from(v: i64) -> Self {
        Real::from_i64(v)
    }
}

impl From<i32> for Real {
    fn from(v: i32) -> Self {
        Real::from_i64(i64::from(v))
    }
}

impl From<f64> for Real {
    fn from(v: f64) -> Self {
        Real::from_f64(v)
    }
}

impl serde::Serialize for Real {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

macro_rules! real_binop {
    ($Tr:ident, $m:ident, $TrA:ident, $ma:ident) => {
        impl $Tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let p = self.prec().max(rhs.prec());
                Real(Float::with_val(p, $Tr::$m(&self.0, &rhs.0)))
            }
        }
        impl $Tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                $Tr::$m(&self, &rhs)
            }
        }
        impl $Tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                $Tr::$m(&self, rhs)
            }
        }
        impl $Tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                $Tr::$m(self, &rhs)
            }
        }
        impl $TrA<&Real> for Real {
            fn $ma(&mut self, rhs: &Real) {
                if rhs.prec() > self.prec() {
                    self.0.set_prec(rhs.prec());
                }
                $TrA::$ma(&mut self.0, &rhs.0);
            }
        }
        impl $TrA<Real> for Real {
            fn $ma(&mut self, rhs: Real) {
                $TrA::$ma(self, &rhs);
            }
        }
        impl $Tr<i32> for &Real {
            type Output = Real;
            fn $m(self, rhs: i32) -> Real {
                Real(Float::with_val(self.prec(), $Tr::$m(&self.0, rhs)))
            }
        }
        impl $Tr<i32> for Real {
            type Output = Real;
            fn $m(self, rhs: i32) -> Real {
                $Tr::$m(&self, rhs)
            }
        }
        impl $Tr<f64> for &Real {
            type Output = Real;
            fn $m(self, rhs: f64) -> Real {
                Real(Float::with_val(self.prec(), $Tr::$m(&self.0, rhs)))
            }
        }
        impl $Tr<f64> for Real {
            type Output = Real;
            fn $m(self, rhs: f64) -> Real {
                $Tr::$m(&self, rhs)
            }
        }
    };
}

real_binop!(Add, add, AddAssign, add_assign);
real_binop!(Sub, sub, SubAssign, sub_assign);
real_binop!(Mul, mul, MulAssign, mul_assign);
real_binop!(Div, div, DivAssign, div_assign);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(Float::with_val(self.prec(), -&self.0))
    }
}

impl Sum for Real {
    fn sum<I: Iterator<Item = Real>>(iter: I) -> Real {
        iter.fold(Real::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Real> for Real {
    fn sum<I: Iterator<Item = &'a Real>>(iter: I) -> Real {
        iter.fold(Real::zero(), |acc, x| acc + x)
    }
}

impl Product for Real {
    fn product<I: Iterator<Item = Real>>(iter: I) -> Real {
        iter.fold(Real::one(), |acc, x| acc * x)
    }
}

impl<'a> Product<&'a Real> for Real {
    fn product<I: Iterator<Item = &'a Real>>(iter: I) -> Real {
        iter.fold(Real::one(), |acc, x| acc * x)
    }
}
