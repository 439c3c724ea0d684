//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`
//! values, giving about 32 significant digits.

use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

const PIO2: [f64; 3] = [1.5707963267948966, 6.123233995736766e-17, -1.4973849048591698e-33];

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (h, l) = two_sum(hi, lo);
        DD { hi: h, lo: l }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { DD::ZERO } else { DD { hi: f64::NAN, lo: f64::NAN } };
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let axdd = DD::from(ax);
        let corr = (self - axdd * axdd).hi * x * 0.5;
        let (h, l) = two_sum(ax, corr);
        DD { hi: h, lo: l }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p1, mut p2) = two_prod(self.hi, b);
        p2 += self.lo * b;
        let (h, l) = quick_two_sum(p1, p2);
        DD { hi: h, lo: l }
    }

    /// Simultaneous sine and cosine with reduction modulo π/2.
    pub fn sin_cos(self) -> (Self, Self) {
        let k = (self.to_f64() / PIO2[0]).round();
        let r = self - DD::from(PIO2[0]).mul_f64(k) - DD::from(PIO2[1]).mul_f64(k) - DD::from(PIO2[2]).mul_f64(k);
        let r2 = r * r;
        // Taylor series; |r| ≤ π/4 + tiny so about 26 terms reach 1e-34.
        let mut s = r;
        let mut c = DD::ONE;
        let mut term_s = r;
        let mut term_c = DD::ONE;
        let mut n = 1.0f64;
        loop {
            term_c = -(term_c * r2) / DD::from(n * (n + 1.0));
            term_s = -(term_s * r2) / DD::from((n + 1.0) * (n + 2.0));
            c += term_c;
            s += term_s;
            n += 2.0;
            if term_c.hi.abs() < 1e-34 && term_s.hi.abs() < 1e-34 {
                break;
            }
        }
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

impl From<f64> for DD {
    fn from(x: f64) -> Self {
        DD { hi: x, lo: 0.0 }
    }
}

impl Neg for DD {
    type Output = DD;
    fn neg(self) -> DD {
        DD { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DD {
    type Output = DD;
    fn add(self, b: DD) -> DD {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (h, l) = quick_two_sum(s1, s2 + t2);
        DD { hi: h, lo: l }
    }
}

impl Sub for DD {
    type Output = DD;
    fn sub(self, b: DD) -> DD {
        self + (-b)
    }
}

impl Mul for DD {
    type Output = DD;
    fn mul(self, b: DD) -> DD {
        let (p1, mut p2) = two_prod(self.hi, b.hi);
        p2 += self.hi * b.lo + self.lo * b.hi;
        let (h, l) = quick_two_sum(p1, p2);
        DD { hi: h, lo: l }
    }
}

impl Div for DD {
    type Output = DD;
    fn div(self, b: DD) -> DD {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        DD { hi: h, lo: l } + DD::from(q3)
    }
}

impl AddAssign for DD {
    fn add_assign(&mut self, b: DD) {
        *self = *self + b;
    }
}
impl SubAssign for DD {
    fn sub_assign(&mut self, b: DD) {
        *self = *self - b;
    }
}
impl MulAssign for DD {
    fn mul_assign(&mut self, b: DD) {
        *self = *self * b;
    }
}

impl PartialOrd for DD {
    fn partial_cmp(&self, other: &DD) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl std::fmt::Display for DD {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:e} + {:e}", self.hi, self.lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn division_round_trips() {
        let third = DD::ONE / DD::from(3.0);
        assert!((third * DD::from(3.0) - DD::ONE).to_f64().abs() < 1e-32);
        let a = DD::from(2.0).sqrt();
        let b = DD::from(3.0).sqrt();
        assert!(((a / b) * b - a).to_f64().abs() < 1e-31);
        assert!((a * a - DD::from(2.0)).to_f64().abs() < 1e-31);
    }

    #[test]
    fn sin_cos_known_values() {
        // Reference values split into two doubles.
        let (s, c) = DD::from(1.0).sin_cos();
        assert!((s - DD::new(0.8414709848078965, 1.776845092935536e-18)).to_f64().abs() < 1e-30);
        assert!((c - DD::new(0.5403023058681398, -4.760954612604417e-17)).to_f64().abs() < 1e-30);
    }

    proptest! {
        #[test]
        fn pythagorean_identity(x in -2.0e4f64..2.0e4) {
            let (s, c) = DD::from(x).sin_cos();
            prop_assert!((s * s + c * c - DD::ONE).to_f64().abs() < 1e-30);
            prop_assert!((s.to_f64() - x.sin()).abs() < 1e-12);
        }

        #[test]
        fn addition_is_exact_for_two_doubles(a in -1e10f64..1e10, b in -1e-5f64..1e-5) {
            let s = DD::from(a) + DD::from(b);
            prop_assert_eq!(s.hi + s.lo, a + b);
            prop_assert!(((s - DD::from(a)) - DD::from(b)).to_f64() == 0.0);
        }
    }
}
