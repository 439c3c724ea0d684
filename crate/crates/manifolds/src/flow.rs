use std::f64::consts::{PI, TAU};

use rpc3bp_dynamics::{DynError, RotatingField};
use rpc3bp_numerics::dop853::DenseSegment;
use rpc3bp_numerics::{Dop853, Real, Stepper};

/// `x` reduced to `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x - TAU * (x / TAU).round();
    if y <= -PI {
        y + TAU
    } else {
        y
    }
}

pub(crate) fn tau<T: Real>() -> T {
    T::from_f64(TAU) + T::from_f64(2.4492935982947064e-16)
}

/// Adaptive flow of the rotating field that keeps `φ` reduced modulo `2π`
/// between steps; the number of removed turns is tracked in `turns`.
pub struct Flow<'a, T: Real> {
    stepper: Stepper<'a, T, 4, RotatingField<T>>,
    pending: bool,
    y_old: [T; 4],
    /// Turns removed from `φ` before the current step.
    pub turns: i64,
}

impl<'a, T: Real> Flow<'a, T> {
    pub fn new(field: &'a RotatingField<T>, tol: f64, y0: [T; 4], direction: f64) -> Result<Self, DynError> {
        let mut opts = Dop853::new(tol);
        opts.max_steps = 50_000_000;
        opts.max_step = PI / field.params.g0_cubed();
        let stepper = Stepper::new(field, opts, T::zero(), y0, T::from_f64(direction))?;
        Ok(Flow { stepper, pending: false, y_old: y0, turns: 0 })
    }

    pub fn time(&self) -> T {
        self.stepper.t
    }

    pub fn state(&self) -> [T; 4] {
        self.stepper.y
    }

    pub fn start_of_step(&self) -> (T, [T; 4]) {
        (self.stepper.t_old, self.y_old)
    }

    pub fn direction(&self) -> f64 {
        self.stepper.direction()
    }

    pub fn set_max_step(&mut self, h: f64) {
        self.stepper.set_max_step(h);
    }

    pub fn evaluations(&self) -> usize {
        self.stepper.n_eval
    }

    /// One accepted step toward `bound`.
    pub fn step(&mut self, bound: T) -> Result<(), DynError> {
        if self.pending {
            let k = (self.stepper.y[1].to_f64() / TAU).round();
            self.stepper.y[1] -= tau::<T>() * T::from_f64(k);
            self.turns += k as i64;
            self.pending = false;
        }
        self.y_old = self.stepper.y;
        self.stepper.step(bound)?;
        self.pending = self.stepper.y[1].to_f64().abs() > PI;
        Ok(())
    }

    /// Dense output of the last step, in the frame of that step.
    pub fn dense(&mut self) -> Result<DenseSegment<T, 4>, DynError> {
        Ok(self.stepper.dense()?)
    }
}
