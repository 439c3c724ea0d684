//! Adaptive Gauss–Kronrod (10/21) quadrature for real and complex
//! integrands, and the periodic trapezoidal rule.

use num_complex::Complex64;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn norm(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<V> {
    pub value: V,
    /// Estimated absolute error.
    pub error: f64,
    /// Integral of the absolute value, used for noise-floor estimates.
    pub abs_integral: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// 21-point Kronrod rule on `[a, b]`: (estimate, error, integral of |f|).
pub fn gk21<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> (V, f64, f64) {
    let c = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[10];
    let mut rg = V::zero();
    let mut rabs = fc.norm() * WGK[10];
    for i in 0..10 {
        let dx = half * XGK[i];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        let s = f1 + f2;
        rk = rk + s * WGK[i];
        rabs += (f1.norm() + f2.norm()) * WGK[i];
        if i % 2 == 1 {
            rg = rg + s * WG[i / 2];
        }
    }
    let est = rk * half;
    let err = (rk - rg).norm() * half.abs();
    (est, err, rabs * half.abs())
}

struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
    abs: f64,
}

impl<V> PartialEq for Panel<V> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<V> Eq for Panel<V> {}
impl<V> PartialOrd for Panel<V> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Panel<V> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive quadrature over the given breakpoints.
/// Stops when the error estimate is below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<V: QuadValue, F: FnMut(f64) -> V>(
    mut f: F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> QuadResult<V> {
    let mut heap = BinaryHeap::new();
    let mut evals = 0;
    for w in breaks.windows(2) {
        let (v, e, ab) = gk21(&mut f, w[0], w[1]);
        evals += 21;
        heap.push(Panel { a: w[0], b: w[1], value: v, error: e, abs: ab });
    }
    let total = |h: &BinaryHeap<Panel<V>>| {
        let mut v = V::zero();
        let mut e = 0.0;
        let mut ab = 0.0;
        for p in h.iter() {
            v = v + p.value;
            e += p.error;
            ab += p.abs;
        }
        (v, e, ab)
    };
    let (mut value, mut error, mut abs_integral) = total(&heap);
    let mut converged = error <= abs_tol.max(rel_tol * value.norm());
    while !converged && heap.len() < max_panels {
        let worst = heap.pop().expect("non-empty panel set");
        let m = 0.5 * (worst.a + worst.b);
        if m == worst.a || m == worst.b {
            heap.push(worst);
            break;
        }
        let (v1, e1, a1) = gk21(&mut f, worst.a, m);
        let (v2, e2, a2) = gk21(&mut f, m, worst.b);
        evals += 42;
        value = value - worst.value + v1 + v2;
        error = error - worst.error + e1 + e2;
        abs_integral = abs_integral - worst.abs + a1 + a2;
        heap.push(Panel { a: worst.a, b: m, value: v1, error: e1, abs: a1 });
        heap.push(Panel { a: m, b: worst.b, value: v2, error: e2, abs: a2 });
        if heap.len() % 64 == 0 {
            let t = total(&heap);
            value = t.0;
            error = t.1;
            abs_integral = t.2;
        }
        converged = error <= abs_tol.max(rel_tol * value.norm());
    }
    let (value, error, abs_integral) = total(&heap);
    QuadResult {
        value,
        error,
        abs_integral,
        evaluations: evals,
        converged: converged || error <= abs_tol.max(rel_tol * value.norm()),
    }
}

/// Trapezoidal mean of a 2π-periodic function on `n` equispaced nodes.
pub fn periodic_mean<V: QuadValue, F: FnMut(f64) -> V>(mut f: F, n: usize) -> V {
    let h = std::f64::consts::TAU / n as f64;
    let mut acc = V::zero();
    for k in 0..n {
        acc = acc + f(h * k as f64);
    }
    acc * (1.0 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact_on_single_panel() {
        let r = integrate(|x: f64| x.powi(9) - 3.0 * x * x, &[0.0, 2.0], 1e-14, 1e-14, 10);
        assert!((r.value - (102.4 - 8.0)).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_complex_integrand() {
        let w = 40.0;
        let r = integrate(|x: f64| Complex64::new(0.0, w * x).exp(), &[0.0, 1.0], 1e-13, 1e-13, 500);
        let exact = (Complex64::new(0.0, w).exp() - 1.0) / Complex64::new(0.0, w);
        assert!((r.value - exact).norm() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn endpoint_singularity_converges() {
        let r = integrate(|x: f64| 1.0 / x.sqrt(), &[0.0, 1.0], 1e-10, 1e-10, 2000);
        assert!((r.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn periodic_trapezoid_is_spectral() {
        let m = periodic_mean(|t: f64| 1.0 / (2.0 + t.cos()), 64);
        assert!((m - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }
}
