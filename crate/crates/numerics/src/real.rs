use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

pub use crate::dd::DD;

/// Scalar arithmetic used by the integrator and the vector fields.
pub trait Real:
    Copy
    + Debug
    + Send
    + Sync
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn abs(self) -> Self;
    /// Unit roundoff of the representation.
    fn epsilon() -> f64;

    fn sin_cos(self) -> (Self, Self) {
        (self.sin(), self.cos())
    }
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one() / self } else { self };
        let mut k = n.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc *= base;
            }
            base *= base;
            k >>= 1;
        }
        acc
    }
    fn is_finite(self) -> bool {
        self.to_f64().is_finite()
    }
}

impl Real for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn epsilon() -> f64 {
        f64::EPSILON
    }
}

impl Real for DD {
    #[inline]
    fn from_f64(x: f64) -> Self {
        DD::from(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        DD::to_f64(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        DD::sqrt(self)
    }
    fn sin(self) -> Self {
        self.sin_cos().0
    }
    fn cos(self) -> Self {
        self.sin_cos().1
    }
    fn sin_cos(self) -> (Self, Self) {
        DD::sin_cos(self)
    }
    #[inline]
    fn abs(self) -> Self {
        DD::abs(self)
    }
    fn epsilon() -> f64 {
        4.93e-32
    }
}

/// Arithmetic precision selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    Extended,
}

impl Precision {
    pub fn epsilon(self) -> f64 {
        match self {
            Precision::Double => <f64 as Real>::epsilon(),
            Precision::Extended => <DD as Real>::epsilon(),
        }
    }
    pub fn name(self) -> &'static str {
        match self {
            Precision::Double => "double",
            Precision::Extended => "extended",
        }
    }
}

impl Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Precision {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => Err(format!("unknown precision mode '{other}'")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powi_matches_repeated_product() {
        assert_eq!(2.0f64.powi(10), 1024.0);
        assert_eq!(<f64 as Real>::powi(2.0, -2), 0.25);
        let x = DD::from(1.5);
        assert!((Real::powi(x, 3).to_f64() - 3.375).abs() < 1e-15);
    }

    #[test]
    fn dd_carries_more_digits() {
        let third = DD::from(1.0) / DD::from(3.0);
        let back = third * DD::from(3.0) - DD::from(1.0);
        assert!(back.to_f64().abs() < 1e-30);
        let s = Real::sin(third);
        let c = Real::cos(third);
        assert!((s * s + c * c - DD::from(1.0)).to_f64().abs() < 1e-30);
    }

    #[test]
    fn precision_parses() {
        assert_eq!("extended".parse::<Precision>().unwrap(), Precision::Extended);
        assert!("quad".parse::<Precision>().is_err());
    }
}
