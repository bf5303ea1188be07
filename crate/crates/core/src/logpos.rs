//! Non-negative reals stored by their natural logarithm.
//!
//! Radii of the deep zero circles sit at `1 - r ≈ e^{-300000}` and beyond, far
//! outside the exponent range of any hardware float. Everything that lives in
//! that regime (complements `ε = 1 - r`, log-radii `ℓ = -ln r`, interval
//! endpoints) is carried as a [`LogPos`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// A value `x ≥ 0` represented as `ln x` (so zero is `-∞`).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogPos<T>(T);

impl<T: Real> LogPos<T> {
    pub fn from_ln(ln: T) -> Self {
        debug_assert!(!ln.is_nan());
        LogPos(ln)
    }

    /// Panics in debug builds on negative input.
    pub fn new(x: T) -> Self {
        debug_assert!(x >= T::zero(), "LogPos::new on negative value");
        LogPos(x.ln())
    }

    pub fn zero() -> Self {
        LogPos(T::neg_infinity())
    }

    pub fn one() -> Self {
        LogPos(T::zero())
    }

    pub fn infinity() -> Self {
        LogPos(T::infinity())
    }

    pub fn ln(self) -> T {
        self.0
    }

    /// Plain value; underflows to zero / overflows to infinity out of range.
    pub fn value(self) -> T {
        self.0.exp()
    }

    pub fn is_zero(self) -> bool {
        self.0 == T::neg_infinity()
    }

    pub fn is_infinite(self) -> bool {
        self.0 == T::infinity()
    }

    pub fn powf(self, p: T) -> Self {
        if p == T::zero() {
            return Self::one();
        }
        LogPos(self.0 * p)
    }

    /// `self + other` via log-sum-exp.
    pub fn add(self, other: Self) -> Self {
        let (hi, lo) = if self.0 >= other.0 { (self.0, other.0) } else { (other.0, self.0) };
        if lo == T::neg_infinity() {
            return LogPos(hi);
        }
        if hi == T::infinity() {
            return LogPos(hi);
        }
        LogPos(hi + (lo - hi).exp().ln_1p())
    }

    /// `self - other`, or `None` when the difference would be negative.
    pub fn checked_sub(self, other: Self) -> Option<Self> {
        match self.0.partial_cmp(&other.0)? {
            Ordering::Less => None,
            Ordering::Equal => Some(Self::zero()),
            Ordering::Greater => {
                if other.is_zero() {
                    return Some(self);
                }
                let gap = other.0 - self.0;
                Some(LogPos(self.0 + (-gap.exp_m1()).ln()))
            }
        }
    }

    /// Signed difference `self - other`.
    pub fn signed_sub(self, other: Self) -> SignedLog<T> {
        match self.checked_sub(other) {
            Some(mag) => SignedLog { negative: false, magnitude: mag },
            None => SignedLog {
                negative: true,
                magnitude: other.checked_sub(self).unwrap_or_else(Self::zero),
            },
        }
    }

    /// `self / other` as a plain scalar.
    pub fn ratio(self, other: Self) -> T {
        (self.0 - other.0).exp()
    }

    pub fn max(self, other: Self) -> Self {
        if self.0 >= other.0 {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self.0 <= other.0 {
            self
        } else {
            other
        }
    }

    /// Scientific decimal rendering with `digits` significant digits, valid
    /// far outside the hardware exponent range.
    pub fn to_sci(self, digits: usize) -> String {
        let ln = self.0.as_f64();
        if ln == f64::NEG_INFINITY {
            return "0".to_string();
        }
        if ln == f64::INFINITY {
            return "inf".to_string();
        }
        let digits = digits.max(1);
        let plain = ln.exp();
        if plain.is_normal() {
            return format!("{:.*e}", digits - 1, plain);
        }
        let log10 = ln / std::f64::consts::LN_10;
        let mut exp = log10.floor();
        let mut mant = 10f64.powf(log10 - exp);
        let rounded = format!("{:.*}", digits - 1, mant);
        if rounded.starts_with("10") {
            exp += 1.0;
            mant /= 10.0;
        }
        format!("{:.*}e{}", digits - 1, mant, exp as i64)
    }
}

impl<T: Real> Mul for LogPos<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        LogPos(self.0 + rhs.0)
    }
}

impl<T: Real> Div for LogPos<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        LogPos(self.0 - rhs.0)
    }
}

impl<T: Real> fmt::Display for LogPos<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(17);
        f.write_str(&self.to_sci(digits))
    }
}

/// Signed magnitude in log form; used for margins between deep endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignedLog<T> {
    pub negative: bool,
    pub magnitude: LogPos<T>,
}

impl<T: Real> SignedLog<T> {
    pub fn is_nonnegative(&self) -> bool {
        !self.negative || self.magnitude.is_zero()
    }

    pub fn value(&self) -> T {
        let v = self.magnitude.value();
        if self.negative {
            -v
        } else {
            v
        }
    }

    pub fn to_sci(&self, digits: usize) -> String {
        let body = self.magnitude.to_sci(digits);
        if self.negative && !self.magnitude.is_zero() {
            format!("-{body}")
        } else {
            body
        }
    }
}

/// Log-radius `ℓ = -ln r` of the circle whose complement radius is `ε`.
pub fn ell_from_complement<T: Real>(eps: LogPos<T>) -> LogPos<T> {
    let tiny = T::min_positive_value().ln() * T::lit(0.5);
    if eps.ln() < tiny {
        // ℓ = ε (1 + ε/2 + ...) and ε is far below the resolution of 1.
        return eps;
    }
    if eps.ln() >= T::zero() {
        return LogPos::infinity();
    }
    LogPos::new(-(-eps.value()).ln_1p())
}

/// Complement radius `ε = 1 - e^{-ℓ}` of the circle with log-radius `ℓ`.
pub fn complement_from_ell<T: Real>(ell: LogPos<T>) -> LogPos<T> {
    let tiny = T::min_positive_value().ln() * T::lit(0.5);
    if ell.ln() < tiny {
        return ell;
    }
    if ell.is_infinite() {
        return LogPos::one();
    }
    LogPos::new(-(-ell.value()).exp_m1())
}
