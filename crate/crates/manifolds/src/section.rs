use std::f64::consts::TAU;

use rpc3bp_dynamics::{potential_v, Params, RotatingField, RotatingState};
use rpc3bp_numerics::{Precision, Real, DD};
use serde::{Deserialize, Serialize};

use crate::flow::{tau, wrap_angle, Flow};
use crate::ManifoldError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionCrossing {
    /// State at the crossing with `φ` reduced to `(−π, π]`.
    pub state: RotatingState,
    pub elapsed: f64,
}

pub(crate) fn event_xtol<T: Real>() -> f64 {
    if T::epsilon() < 1e-20 {
        1e-27
    } else {
        1e-15
    }
}

/// First crossing of `φ ≡ φ₀ (mod 2π)` reached after more than `min_elapsed`
/// time units; returns the crossing state (reduced `φ`) and elapsed time.
pub(crate) fn next_crossing<T: Real>(
    field: &RotatingField<T>,
    y0: [T; 4],
    phi0: f64,
    direction: f64,
    tol: f64,
    min_elapsed: f64,
    horizon: f64,
) -> Result<([T; 4], T), ManifoldError> {
    let mut flow = Flow::new(field, tol, y0, direction)?;
    let bound = T::from_f64(direction * horizon);
    let p0 = T::from_f64(phi0);
    let two_pi = tau::<T>();
    loop {
        if flow.time().to_f64() == bound.to_f64() {
            return Err(ManifoldError::Timeout { horizon });
        }
        flow.step(bound)?;
        let (_, ya) = flow.start_of_step();
        let yb = flow.state();
        let ja = ((ya[1] - p0).to_f64() / TAU).floor() as i64;
        let jb = ((yb[1] - p0).to_f64() / TAU).floor() as i64;
        if ja == jb {
            continue;
        }
        let levels: Vec<i64> = if jb < ja { (jb + 1..=ja).rev().collect() } else { (ja + 1..=jb).collect() };
        let seg = flow.dense()?;
        for j in levels {
            let level = p0 + two_pi * T::from_f64(j as f64);
            let ga = ya[1] - level;
            let gb = yb[1] - level;
            if ga.to_f64() == 0.0 && seg.t_old.to_f64().abs() <= min_elapsed {
                continue;
            }
            let s = seg.locate(|_, y| y[1] - level, ga, gb, event_xtol::<T>());
            if s.to_f64().abs() > min_elapsed {
                let mut y = seg.eval(s);
                y[1] = y[1] - level + p0;
                return Ok((y, s));
            }
        }
    }
}

fn check_tol<T: Real>(tol: f64) -> Result<(), ManifoldError> {
    rpc3bp_dynamics::check_tolerance::<T>(tol)?;
    Ok(())
}

/// First crossing of the section `φ ≡ φ₀` in the given time direction.
pub fn propagate_to_section(
    s: &RotatingState,
    phi0: f64,
    direction: Direction,
    p: &Params,
    tol: f64,
) -> Result<SectionCrossing, ManifoldError> {
    p.validate()?;
    check_tol::<f64>(tol)?;
    if wrap_angle(s.phi - phi0).abs() < 1e-13 {
        return Ok(SectionCrossing { state: *s, elapsed: 0.0 });
    }
    let field = RotatingField::<f64>::new(p);
    let horizon = 100.0 * TAU / p.g0_cubed() + 10.0;
    let (y, t) = next_crossing(&field, s.to_array(), phi0, direction.sign(), tol, 0.0, horizon)?;
    Ok(SectionCrossing { state: RotatingState::from_array(y), elapsed: t })
}

/// `G̃` on the shell `𝓗 = −G₀³` at `(r̃, φ₀, ỹ)`, the root continuing `G̃ = 1`.
pub fn lift_to_shell(r: f64, y: f64, phi0: f64, p: &Params) -> Result<f64, ManifoldError> {
    let v = potential_v(r, phi0, p)?;
    let g3 = p.g0_cubed();
    let c = 0.5 * y * y - 1.0 / r - v + g3;
    let disc = g3 * g3 - 2.0 * c / (r * r);
    if !(disc >= 0.0) {
        return Err(ManifoldError::Lift { r, y });
    }
    Ok(2.0 * c / (g3 + disc.sqrt()))
}

fn lift_generic<T: Real>(r: T, y: T, phi0: f64, p: &Params) -> Result<T, ManifoldError> {
    let k = rpc3bp_dynamics::PotentialCoeffs::<T>::new(p);
    let v = rpc3bp_dynamics::potential_v_real(r, T::from_f64(phi0).cos(), &k);
    let g0 = T::from_f64(p.g0);
    let g3 = g0 * g0 * g0;
    let half = T::from_f64(0.5);
    let c = half * y * y - T::one() / r - v + g3;
    let disc = g3 * g3 - T::from_f64(2.0) * c / (r * r);
    if !(disc.to_f64() >= 0.0) {
        return Err(ManifoldError::Lift { r: r.to_f64(), y: y.to_f64() });
    }
    Ok(T::from_f64(2.0) * c / (g3 + disc.sqrt()))
}

/// One return of the section map in the scalar type `T`.
pub fn poincare_map_generic<T: Real>(point: (T, T), phi0: f64, p: &Params, tol: f64) -> Result<(T, T), ManifoldError> {
    p.validate()?;
    check_tol::<T>(tol)?;
    let g = lift_generic(point.0, point.1, phi0, p)?;
    let field = RotatingField::<T>::new(p);
    let period = TAU / p.g0_cubed();
    let (y, _) = next_crossing(&field, [point.0, T::from_f64(phi0), point.1, g], phi0, 1.0, tol, 0.25 * period, 200.0 * period)?;
    Ok((y[0], y[2]))
}

/// Section return map `(r̃, ỹ) ↦ (r̃', ỹ')` on `φ = φ₀`.
pub fn poincare_map(
    point: (f64, f64),
    phi0: f64,
    p: &Params,
    tol: f64,
    precision: Precision,
) -> Result<(f64, f64), ManifoldError> {
    match precision {
        Precision::Double => poincare_map_generic::<f64>(point, phi0, p, tol),
        Precision::Extended => {
            let (r, y) =
                poincare_map_generic::<DD>((DD::from_f64(point.0), DD::from_f64(point.1)), phi0, p, tol)?;
            Ok((r.to_f64(), y.to_f64()))
        }
    }
}
