//! `I(ℓ, m, n)` along the steepest-descent hyperbola `Re(τ + τ³/3) = 0`,
//! indented around the pole at `τ = ±i`.

use num_complex::Complex64;
use rpc3bp_dynamics::Params;
use rpc3bp_numerics::quad::integrate;
use rpc3bp_numerics::roots::brent;

use crate::fourier::binom_half;
use crate::series::Coefficient;
use crate::MelnikovError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourValue {
    pub value: f64,
    /// Imaginary part of the computed integral; zero up to quadrature error.
    pub imag: f64,
    pub error: f64,
    /// Largest integrand modulus met on the path (times the path length scale).
    pub peak: f64,
}

struct Integrand {
    l: f64,
    half_g3: f64,
    shift: f64,
    m2: i32,
    n2: i32,
}

impl Integrand {
    fn eval(&self, tau: Complex64) -> Complex64 {
        let i = Complex64::i();
        let phase = tau + tau * tau * tau / 3.0;
        let e = (i * self.l * self.half_g3 * phase + self.shift).exp();
        e / ((tau - i).powi(self.m2) * (tau + i).powi(self.n2))
    }
}

/// Hyperbola abscissa at which the path leaves the circle `|τ − iσ| = ρ`.
fn exit_abscissa(rho: f64) -> f64 {
    let g = |x: f64| {
        let y = (1.0 + x * x / 3.0).sqrt() - 1.0;
        x * x + y * y - rho * rho
    };
    brent(g, 0.0, rho, 1e-15, 200).unwrap_or(rho)
}

/// `I(ℓ,m,n) = ∫ e^{iℓ(G₀³/2)(τ+τ³/3)} / ((τ−i)^{2m}(τ+i)^{2n}) dτ` over the real line.
pub fn contour_integral_i(l: i64, m: u32, n: u32, p: &Params) -> Result<ContourValue, MelnikovError> {
    if l == 0 {
        return Err(MelnikovError::Invalid("contour route needs l != 0".into()));
    }
    if m == 0 && n == 0 {
        return Err(MelnikovError::Invalid("(m, n) = (0, 0) is not integrable".into()));
    }
    let g3 = p.g0.powi(3);
    let s = l.signum() as f64;
    let la = l.unsigned_abs() as f64;
    let f = Integrand { l: l as f64, half_g3: 0.5 * g3, shift: la * g3 / 3.0, m2: 2 * m as i32, n2: 2 * n as i32 };
    let pole_order = if s > 0.0 { 2 * m } else { 2 * n } as f64;
    let hyper = |x: f64| Complex64::new(x, s * (1.0 + x * x / 3.0).sqrt());
    let dhyper = |x: f64| Complex64::new(1.0, s * x / (3.0 * (1.0 + x * x / 3.0).sqrt()));

    let rho = if pole_order > 0.0 { (p.g0.powf(-1.5) * (pole_order / la).sqrt()).min(0.75) } else { 0.0 };
    let x_rho = if rho > 0.0 { exit_abscissa(rho) } else { 0.0 };

    let width = 1.0 / (la * g3).sqrt();
    let centre = Complex64::new(0.0, s);
    let peak = if rho > 0.0 {
        f.eval(centre + Complex64::new(0.0, -s * rho)).norm() * rho
    } else {
        f.eval(centre).norm() * width
    };
    let mut x_max = x_rho + width;
    while (f.eval(hyper(x_max)) * dhyper(x_max)).norm() * x_max > 1e-30 * peak {
        x_max *= 1.5;
        if x_max > 1e6 {
            return Err(MelnikovError::NoConvergence(format!("path truncation for I({l},{m},{n})")));
        }
    }

    let mut breaks = vec![x_rho];
    let mut k = 0.25;
    while x_rho + k * width < x_max {
        breaks.push(x_rho + k * width);
        k *= 1.6;
    }
    breaks.push(x_max);

    let abs_tol = 1e-17 * peak;
    let rel_tol = 1e-14;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut converged = true;
    let mut add = |r: rpc3bp_numerics::quad::QuadResult<Complex64>| {
        total += r.value;
        err += r.error;
        converged &= r.converged;
    };
    add(integrate(|x| f.eval(hyper(x)) * dhyper(x), &breaks, abs_tol, rel_tol, 4000));
    let left: Vec<f64> = breaks.iter().rev().map(|x| -x).collect();
    add(integrate(|x| f.eval(hyper(x)) * dhyper(x), &left, abs_tol, rel_tol, 4000));

    if rho > 0.0 {
        let yr = (1.0 + x_rho * x_rho / 3.0).sqrt() - 1.0;
        let th_r = (s * yr).atan2(x_rho);
        let th_l = (s * yr).atan2(-x_rho);
        let tau2 = std::f64::consts::TAU;
        let (a, b) = if s > 0.0 { (th_l, th_r + tau2) } else { (th_l + tau2, th_r) };
        let arc = |th: f64| {
            let w = Complex64::from_polar(rho, th);
            f.eval(centre + w) * Complex64::i() * w
        };
        let nb = 8;
        let ab: Vec<f64> = (0..=nb).map(|k| a + (b - a) * k as f64 / nb as f64).collect();
        add(integrate(arc, &ab, abs_tol, rel_tol, 4000));
    }
    if !converged && err > 1e-8 * total.norm() && err > 1e-12 * peak {
        return Err(MelnikovError::NoConvergence(format!("I({l},{m},{n}): error {err:e}")));
    }
    let scale = (-la * g3 / 3.0).exp();
    Ok(ContourValue { value: total.re * scale, imag: total.im * scale, error: err * scale, peak: peak * scale })
}

/// `β_k = ∫ (1+τ²)^{−k} dτ`.
fn beta_power(k: u32) -> f64 {
    let mut b = std::f64::consts::PI;
    for q in 1..k {
        b *= (2 * q - 1) as f64 / (2 * q) as f64;
    }
    b
}

/// `L^[ℓ]` from the `j`-series of contour integrals, `j = 0 … jmax`.
pub fn melnikov_coeff_contour(l: i64, p: &Params, jmax: u32) -> Result<Coefficient, MelnikovError> {
    p.validate().map_err(|e| MelnikovError::Invalid(e.to_string()))?;
    if l < 0 {
        return Err(MelnikovError::Invalid("harmonic index must be non-negative".into()));
    }
    if jmax < 2 {
        return Err(MelnikovError::Invalid("jmax must be at least 2".into()));
    }
    let mu = p.mu;
    let g4 = p.g0.powi(4);
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    let mut terms = Vec::with_capacity(jmax as usize + 1);
    let mut imag = 0.0;
    let mut quad_err = 0.0;
    let mut floor = 0.0;
    let j0 = if l == 0 { 1 } else { 0 };
    for j in j0..=jmax {
        let e = (2 * j as i64 + l) as i32;
        let mass = mu * (1.0 - mu).powi(e) + sign * (1.0 - mu) * mu.powi(e);
        if mass == 0.0 {
            terms.push(0.0);
            continue;
        }
        let pref = binom_half(j) * binom_half(j + l as u32) * mass / (g4.powi(j as i32) * p.g0.powi(2 * l as i32))
            * sign
            * 2f64.powi(e);
        if l == 0 {
            terms.push(pref * beta_power(2 * j));
        } else {
            let iv = contour_integral_i(l, j + l as u32, j, p)?;
            terms.push(pref * iv.value);
            imag += pref * iv.imag;
            quad_err += (pref * iv.error).abs();
            floor += (pref * iv.peak).abs() * f64::EPSILON;
        }
    }
    let value: f64 = terms.iter().rev().sum();
    let n = terms.len();
    let last = terms[n - 1].abs();
    let prev = terms[n - 2].abs();
    let tail = if last == 0.0 {
        0.0
    } else if prev > 0.0 && last < prev {
        let q = last / prev;
        last * q / (1.0 - q)
    } else {
        f64::INFINITY
    };
    Ok(Coefficient {
        l,
        value,
        imag,
        error_estimate: quad_err + tail,
        noise_floor: floor,
        trusted: value == 0.0 || value.abs() >= 10.0 * floor,
    })
}
