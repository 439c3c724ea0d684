//! Explicit Runge–Kutta integrator of order 8 (Dormand–Prince 8(5,3)) with
//! 7th-order dense output, generic over the scalar type.

use crate::real::Real;
use crate::tableau;

const N_STAGES: usize = 12;
const N_EXT: usize = 16;
const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const ERROR_EXPONENT: f64 = -1.0 / 8.0;

/// A first-order system `y' = f(t, y)`.
pub trait OdeSystem<T: Real, const N: usize> {
    type Error: std::fmt::Display;
    fn rhs(&self, t: T, y: &[T; N]) -> Result<[T; N], Self::Error>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum FailureKind {
    StepUnderflow,
    MaxSteps,
    Rhs(String),
}

/// Integration failure together with the last accepted state.
#[derive(Debug, Clone, thiserror::Error)]
#[error("integration failed at t = {t}: {kind:?}")]
pub struct IntegrationError {
    pub kind: FailureKind,
    pub t: f64,
    pub y: Vec<f64>,
}

/// Tolerance and step-size policy.
#[derive(Debug, Clone, Copy)]
pub struct Dop853 {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub max_steps: usize,
    pub first_step: Option<f64>,
}

impl Dop853 {
    pub fn new(tol: f64) -> Self {
        Dop853 {
            rtol: tol,
            atol: tol,
            max_step: f64::INFINITY,
            max_steps: 5_000_000,
            first_step: None,
        }
    }

    pub fn with_max_step(mut self, h: f64) -> Self {
        self.max_step = h;
        self
    }

    /// Propagate from `t0` to `t1` (either direction).
    pub fn integrate<T: Real, const N: usize, S: OdeSystem<T, N>>(
        &self,
        sys: &S,
        t0: T,
        y0: [T; N],
        t1: T,
    ) -> Result<[T; N], IntegrationError> {
        if t1 == t0 {
            return Ok(y0);
        }
        let mut st = Stepper::new(sys, *self, t0, y0, t1)?;
        while st.t != t1 {
            st.step(t1)?;
        }
        Ok(st.y)
    }
}

struct Tab<T> {
    c: [T; N_EXT],
    a: [[T; N_EXT]; N_EXT],
    e3: [T; N_STAGES + 1],
    e5: [T; N_STAGES + 1],
    d: [[T; N_EXT]; 4],
}

fn join<T: Real>(hi: f64, lo: f64) -> T {
    T::from_f64(hi) + T::from_f64(lo)
}

impl<T: Real> Tab<T> {
    fn build() -> Self {
        let mut a = [[T::zero(); N_EXT]; N_EXT];
        let mut c = [T::zero(); N_EXT];
        let mut d = [[T::zero(); N_EXT]; 4];
        for i in 0..N_EXT {
            c[i] = join(tableau::C[i], tableau::C_LO[i]);
            for j in 0..N_EXT {
                a[i][j] = join(tableau::A[i][j], tableau::A_LO[i][j]);
            }
        }
        for i in 0..4 {
            for j in 0..N_EXT {
                d[i][j] = join(tableau::D[i][j], tableau::D_LO[i][j]);
            }
        }
        let mut e3 = [T::zero(); N_STAGES + 1];
        let mut e5 = [T::zero(); N_STAGES + 1];
        for i in 0..=N_STAGES {
            e3[i] = join(tableau::E3[i], tableau::E3_LO[i]);
            e5[i] = join(tableau::E5[i], tableau::E5_LO[i]);
        }
        Tab { c, a, e3, e5, d }
    }
}

/// Dense-output polynomial valid on one accepted step.
#[derive(Debug, Clone)]
pub struct DenseSegment<T, const N: usize> {
    pub t_old: T,
    pub t_new: T,
    h: T,
    y_old: [T; N],
    f: [[T; N]; 7],
}

impl<T: Real, const N: usize> DenseSegment<T, N> {
    pub fn eval(&self, t: T) -> [T; N] {
        let x = (t - self.t_old) / self.h;
        let omx = T::one() - x;
        let mut y = [T::zero(); N];
        for (i, fr) in self.f.iter().rev().enumerate() {
            for k in 0..N {
                y[k] += fr[k];
                y[k] *= if i % 2 == 0 { x } else { omx };
            }
        }
        for k in 0..N {
            y[k] += self.y_old[k];
        }
        y
    }

    /// Root of `g` on the segment by safeguarded false position (Illinois),
    /// assuming `g` changes sign between the endpoints.
    pub fn locate<G: FnMut(T, &[T; N]) -> T>(&self, mut g: G, ga: T, gb: T, xtol: f64) -> T {
        let (mut a, mut b) = (self.t_old, self.t_new);
        let (mut fa, mut fb) = (ga, gb);
        if fa == T::zero() {
            return a;
        }
        if fb == T::zero() {
            return b;
        }
        let mut side = 0i8;
        for _ in 0..200 {
            if (b - a).abs().to_f64() <= xtol {
                break;
            }
            let mut c = b - fb * (b - a) / (fb - fa);
            let lo = if a < b { a } else { b };
            let hi = if a < b { b } else { a };
            if !(c > lo && c < hi) {
                c = (a + b) * T::from_f64(0.5);
            }
            let fc = g(c, &self.eval(c));
            if fc == T::zero() {
                return c;
            }
            if (fc > T::zero()) == (fb > T::zero()) {
                b = c;
                fb = fc;
                if side == -1 {
                    fa = fa * T::from_f64(0.5);
                }
                side = -1;
            } else {
                a = c;
                fa = fc;
                if side == 1 {
                    fb = fb * T::from_f64(0.5);
                }
                side = 1;
            }
        }
        if fa.abs() < fb.abs() {
            a
        } else {
            b
        }
    }
}

/// Step-by-step driver. After each accepted step the dense output of that
/// step is available through [`Stepper::dense`].
pub struct Stepper<'a, T: Real, const N: usize, S: OdeSystem<T, N>> {
    sys: &'a S,
    opts: Dop853,
    tab: Tab<T>,
    pub t: T,
    pub y: [T; N],
    f: [T; N],
    pub t_old: T,
    y_old: [T; N],
    h_abs: f64,
    h_prev: T,
    direction: f64,
    k: [[T; N]; N_EXT],
    dense_ready: bool,
    pub n_steps: usize,
    pub n_eval: usize,
}

impl<'a, T: Real, const N: usize, S: OdeSystem<T, N>> Stepper<'a, T, N, S> {
    /// `t_dir` only fixes the direction of integration.
    pub fn new(sys: &'a S, opts: Dop853, t0: T, y0: [T; N], t_dir: T) -> Result<Self, IntegrationError> {
        let direction = if t_dir >= t0 { 1.0 } else { -1.0 };
        let f0 = sys.rhs(t0, &y0).map_err(|e| fail(FailureKind::Rhs(e.to_string()), t0, &y0))?;
        let mut st = Stepper {
            sys,
            opts,
            tab: Tab::build(),
            t: t0,
            y: y0,
            f: f0,
            t_old: t0,
            y_old: y0,
            h_abs: 0.0,
            h_prev: T::zero(),
            direction,
            k: [[T::zero(); N]; N_EXT],
            dense_ready: false,
            n_steps: 0,
            n_eval: 1,
        };
        st.h_abs = match opts.first_step {
            Some(h) => h.abs(),
            None => st.initial_step()?,
        };
        Ok(st)
    }

    fn eval(&mut self, t: T, y: &[T; N]) -> Result<[T; N], IntegrationError> {
        self.n_eval += 1;
        self.sys
            .rhs(t, y)
            .map_err(|e| fail(FailureKind::Rhs(e.to_string()), self.t, &self.y))
    }

    fn scale(&self, _k: usize, a: T, b: T) -> f64 {
        let m = a.to_f64().abs().max(b.to_f64().abs());
        self.opts.atol + m * self.opts.rtol
    }

    fn initial_step(&mut self) -> Result<f64, IntegrationError> {
        let order = 7.0f64;
        let (mut d0, mut d1) = (0.0, 0.0);
        for k in 0..N {
            let sc = self.scale(k, self.y[k], self.y[k]);
            d0 += (self.y[k].to_f64() / sc).powi(2);
            d1 += (self.f[k].to_f64() / sc).powi(2);
        }
        d0 = (d0 / N as f64).sqrt();
        d1 = (d1 / N as f64).sqrt();
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(self.opts.max_step);
        let mut y1 = self.y;
        let hh = T::from_f64(h0 * self.direction);
        for k in 0..N {
            y1[k] += hh * self.f[k];
        }
        let f1 = self.eval(self.t + hh, &y1)?;
        let mut d2 = 0.0;
        for k in 0..N {
            let sc = self.scale(k, self.y[k], self.y[k]);
            d2 += ((f1[k] - self.f[k]).to_f64() / sc).powi(2);
        }
        d2 = (d2 / N as f64).sqrt() / h0;
        let h1 = if d1 <= 1e-15 && d2 <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(1.0 / (order + 1.0))
        };
        Ok((100.0 * h0).min(h1).min(self.opts.max_step))
    }

    /// One accepted step, never passing `t_bound`.
    pub fn step(&mut self, t_bound: T) -> Result<(), IntegrationError> {
        if self.n_steps >= self.opts.max_steps {
            return Err(fail(FailureKind::MaxSteps, self.t, &self.y));
        }
        let tf = self.t.to_f64();
        let min_step = 10.0 * (next_toward(tf, self.direction) - tf).abs();
        let mut h_abs = self.h_abs.min(self.opts.max_step).max(min_step);
        let mut rejected = false;
        loop {
            if h_abs < min_step {
                return Err(fail(FailureKind::StepUnderflow, self.t, &self.y));
            }
            let mut h = T::from_f64(h_abs * self.direction);
            let mut t_new = self.t + h;
            if (self.direction > 0.0 && t_new > t_bound) || (self.direction < 0.0 && t_new < t_bound) {
                t_new = t_bound;
            }
            h = t_new - self.t;
            h_abs = h.to_f64().abs();
            let y_new = self.rk_step(h)?;
            let err = self.error_norm(h_abs, &y_new);
            if err < 1.0 {
                let mut factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    MAX_FACTOR.min(SAFETY * err.powf(ERROR_EXPONENT))
                };
                if rejected {
                    factor = factor.min(1.0);
                }
                self.t_old = self.t;
                self.y_old = self.y;
                self.h_prev = h;
                self.t = t_new;
                self.y = y_new;
                self.f = self.k[N_STAGES];
                self.h_abs = h_abs * factor;
                self.dense_ready = false;
                self.n_steps += 1;
                return Ok(());
            }
            h_abs *= MIN_FACTOR.max(SAFETY * err.powf(ERROR_EXPONENT));
            rejected = true;
        }
    }

    fn rk_step(&mut self, h: T) -> Result<[T; N], IntegrationError> {
        self.k[0] = self.f;
        for s in 1..N_STAGES {
            let mut ys = self.y;
            for j in 0..s {
                let a = self.tab.a[s][j];
                if a != T::zero() {
                    let ha = h * a;
                    for k in 0..N {
                        ys[k] += ha * self.k[j][k];
                    }
                }
            }
            let ts = self.t + self.tab.c[s] * h;
            self.k[s] = self.eval(ts, &ys)?;
        }
        let mut y_new = self.y;
        for j in 0..N_STAGES {
            let b = self.tab.a[N_STAGES][j];
            if b != T::zero() {
                let hb = h * b;
                for k in 0..N {
                    y_new[k] += hb * self.k[j][k];
                }
            }
        }
        self.k[N_STAGES] = self.eval(self.t + h, &y_new)?;
        Ok(y_new)
    }

    fn error_norm(&self, h_abs: f64, y_new: &[T; N]) -> f64 {
        let (mut n5, mut n3) = (0.0, 0.0);
        for k in 0..N {
            let sc = self.scale(k, self.y[k], y_new[k]);
            let (mut e5, mut e3) = (T::zero(), T::zero());
            for j in 0..=N_STAGES {
                e5 += self.tab.e5[j] * self.k[j][k];
                e3 += self.tab.e3[j] * self.k[j][k];
            }
            n5 += (e5.to_f64() / sc).powi(2);
            n3 += (e3.to_f64() / sc).powi(2);
        }
        if n5 == 0.0 && n3 == 0.0 {
            return 0.0;
        }
        h_abs * n5 / ((n5 + 0.01 * n3) * N as f64).sqrt()
    }

    /// Dense output of the last accepted step.
    pub fn dense(&mut self) -> Result<DenseSegment<T, N>, IntegrationError> {
        let h = self.h_prev;
        if !self.dense_ready {
            for s in (N_STAGES + 1)..N_EXT {
                let mut ys = self.y_old;
                for j in 0..s {
                    let a = self.tab.a[s][j];
                    if a != T::zero() {
                        let ha = h * a;
                        for k in 0..N {
                            ys[k] += ha * self.k[j][k];
                        }
                    }
                }
                let ts = self.t_old + self.tab.c[s] * h;
                self.k[s] = self.eval(ts, &ys)?;
            }
            self.dense_ready = true;
        }
        let mut f = [[T::zero(); N]; 7];
        let f_old = self.k[0];
        for k in 0..N {
            let dy = self.y[k] - self.y_old[k];
            f[0][k] = dy;
            f[1][k] = h * f_old[k] - dy;
            f[2][k] = T::from_f64(2.0) * dy - h * (self.f[k] + f_old[k]);
            for r in 0..4 {
                let mut acc = T::zero();
                for j in 0..N_EXT {
                    acc += self.tab.d[r][j] * self.k[j][k];
                }
                f[3 + r][k] = h * acc;
            }
        }
        Ok(DenseSegment {
            t_old: self.t_old,
            t_new: self.t,
            h,
            y_old: self.y_old,
            f,
        })
    }

    pub fn set_max_step(&mut self, h: f64) {
        self.opts.max_step = h;
    }

    pub fn direction(&self) -> f64 {
        self.direction
    }
}

fn fail<T: Real, const N: usize>(kind: FailureKind, t: T, y: &[T; N]) -> IntegrationError {
    IntegrationError {
        kind,
        t: t.to_f64(),
        y: y.iter().map(|v| v.to_f64()).collect(),
    }
}

fn next_toward(x: f64, dir: f64) -> f64 {
    if x == 0.0 {
        return dir * f64::from_bits(1);
    }
    let bits = x.to_bits();
    let up = (x > 0.0) == (dir > 0.0);
    f64::from_bits(if up { bits + 1 } else { bits - 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::DD;

    struct Osc;
    impl<T: Real> OdeSystem<T, 2> for Osc {
        type Error = String;
        fn rhs(&self, _t: T, y: &[T; 2]) -> Result<[T; 2], String> {
            Ok([y[1], -y[0]])
        }
    }

    struct Blowup;
    impl OdeSystem<f64, 1> for Blowup {
        type Error = String;
        fn rhs(&self, _t: f64, y: &[f64; 1]) -> Result<[f64; 1], String> {
            if y[0] > 1e6 {
                return Err("too large".into());
            }
            Ok([y[0] * y[0]])
        }
    }

    #[test]
    fn harmonic_oscillator_is_accurate() {
        let y = Dop853::new(1e-13).integrate(&Osc, 0.0, [1.0, 0.0], 10.0).unwrap();
        assert!((y[0] - 10f64.cos()).abs() < 1e-11);
        assert!((y[1] + 10f64.sin()).abs() < 1e-11);
    }

    #[test]
    fn backward_integration_inverts_forward() {
        let opts = Dop853::new(1e-13);
        let y = opts.integrate(&Osc, 0.0, [0.3, -0.2], 7.5).unwrap();
        let back = opts.integrate(&Osc, 7.5, y, 0.0).unwrap();
        assert!((back[0] - 0.3).abs() < 1e-11 && (back[1] + 0.2).abs() < 1e-11);
    }

    #[test]
    fn zero_interval_is_identity() {
        let y = Dop853::new(1e-10).integrate(&Osc, 1.0, [0.5, 0.25], 1.0).unwrap();
        assert_eq!(y, [0.5, 0.25]);
    }

    #[test]
    fn extended_precision_beats_double() {
        let y: [DD; 2] = Dop853::new(1e-24)
            .integrate(&Osc, DD::from(0.0), [DD::from(1.0), DD::from(0.0)], DD::from(1.0))
            .unwrap();
        let err = (y[0] - Real::cos(DD::from(1.0))).to_f64();
        assert!(err.abs() < 1e-19, "err {err}");
    }

    #[test]
    fn dense_output_interpolates_within_step() {
        let opts = Dop853::new(1e-12);
        let mut st = Stepper::new(&Osc, opts, 0.0, [1.0, 0.0], 10.0).unwrap();
        st.step(10.0).unwrap();
        st.step(10.0).unwrap();
        let seg = st.dense().unwrap();
        let tm = 0.5 * (seg.t_old + seg.t_new);
        let y = seg.eval(tm);
        assert!((y[0] - tm.cos()).abs() < 1e-11);
        assert_eq!(seg.eval(seg.t_new), st.y);
        let tr = seg.locate(|_t, y| y[0] - 0.9, seg.eval(seg.t_old)[0] - 0.9, st.y[0] - 0.9, 1e-15);
        if seg.eval(seg.t_old)[0] > 0.9 && st.y[0] < 0.9 {
            assert!((tr - 0.9f64.acos()).abs() < 1e-11);
        }
    }

    #[test]
    fn rhs_failure_reports_last_state() {
        let err = Dop853::new(1e-10).integrate(&Blowup, 0.0, [1.0], 2.0).unwrap_err();
        assert!(matches!(err.kind, FailureKind::Rhs(_) | FailureKind::StepUnderflow));
        assert!(err.t < 1.0 && err.y[0] > 1.0);
    }
}
