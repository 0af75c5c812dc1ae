//! Time-varying 2-D velocity fields.
//!
//! The central abstraction is [`FlowField`]: evaluate a velocity (and its
//! spatial Jacobian) at a point and time. The unsteady double gyre is the
//! production field; [`Uniform`] and [`LinearSaddle`] ship as analytic
//! oracles for the integrator and FTLE tests.
//!
//! The double gyre derives from the stream function
//!
//! ```text
//! phi(x, y, t) = A sin(pi f(x, t)) sin(pi y)
//! f(x, t)      = a(t) x^2 + b(t) x
//! a(t)         = eps sin(w t)
//! b(t)         = 1 - 2 eps sin(w t)
//! ```
//!
//! giving the velocity field `v = (-d phi/dy, d phi/dx)`:
//!
//! ```text
//! v_x = -pi A sin(pi f) cos(pi y)
//! v_y =  pi A cos(pi f) sin(pi y) df/dx
//! ```
//!
//! (`df/dx = 1` only when `eps = 0`; the general form keeps the field
//! divergence-free.)

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Vec2};
use std::f64::consts::PI;

/// A time-varying planar velocity field.
///
/// `velocity` is a pure total function: it must accept any finite `(x, t)`
/// and is evaluated freely outside any canonical domain. Finiteness of
/// inputs is the caller's responsibility on this hot path; use
/// [`FieldQuery`]-taking wrappers for validated evaluation.
pub trait FlowField: Sync {
    fn velocity(&self, x: Vec2, t: f64) -> Vec2;

    /// Spatial Jacobian `d v / d x` at `(x, t)`.
    ///
    /// The default is a second-order central difference with stencil
    /// half-width 1e-6; fields with analytic derivatives should override.
    fn velocity_jacobian(&self, x: Vec2, t: f64) -> Mat2 {
        const H: f64 = 1e-6;
        let vxp = self.velocity(Vec2::new(x.x + H, x.y), t);
        let vxm = self.velocity(Vec2::new(x.x - H, x.y), t);
        let vyp = self.velocity(Vec2::new(x.x, x.y + H), t);
        let vym = self.velocity(Vec2::new(x.x, x.y - H), t);
        Mat2::new(
            (vxp.x - vxm.x) / (2.0 * H),
            (vyp.x - vym.x) / (2.0 * H),
            (vxp.y - vxm.y) / (2.0 * H),
            (vyp.y - vym.y) / (2.0 * H),
        )
    }
}

/// A validated space-time sample point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldQuery {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl FieldQuery {
    pub fn new(x: f64, y: f64, t: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && t.is_finite()) {
            return Err(Error::NonFiniteInput(format!(
                "field query ({x}, {y}, {t})"
            )));
        }
        Ok(FieldQuery { x, y, t })
    }

    pub fn pos(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }
}

/// Parameters of the unsteady double gyre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleGyreParams {
    /// Velocity magnitude scale.
    pub amplitude: f64,
    /// Magnitude of the x-direction oscillation, in [0, 0.5].
    pub epsilon: f64,
    /// Angular oscillation frequency, rad per time unit.
    pub omega: f64,
}

impl DoubleGyreParams {
    /// Validates `amplitude >= 0`, `epsilon in [0, 0.5]`, `omega >= 0`.
    ///
    /// `amplitude = 0` is allowed and yields the null field, which several
    /// oracles rely on.
    pub fn new(amplitude: f64, epsilon: f64, omega: f64) -> Result<Self> {
        if !(amplitude.is_finite() && epsilon.is_finite() && omega.is_finite()) {
            return Err(Error::NonFiniteInput("double gyre parameters".into()));
        }
        if amplitude < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "amplitude must be >= 0, got {amplitude}"
            )));
        }
        if !(0.0..=0.5).contains(&epsilon) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in [0, 0.5], got {epsilon}"
            )));
        }
        if omega < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "omega must be >= 0, got {omega}"
            )));
        }
        Ok(DoubleGyreParams {
            amplitude,
            epsilon,
            omega,
        })
    }

    /// Oscillation period `2 pi / omega`; infinite for a steady field.
    pub fn period(&self) -> f64 {
        if self.omega > 0.0 {
            2.0 * PI / self.omega
        } else {
            f64::INFINITY
        }
    }
}

impl Default for DoubleGyreParams {
    /// The canonical values `A = 0.1`, `eps = 0.25`, `omega = 2 pi / 10`.
    fn default() -> Self {
        DoubleGyreParams {
            amplitude: 0.1,
            epsilon: 0.25,
            omega: 2.0 * PI / 10.0,
        }
    }
}

/// The unsteady double gyre on (canonically) `[0, 2] x [0, 1]`.
///
/// The formula is globally defined and no domain clamping is applied;
/// predicted trajectories may transiently leave the canonical box.
#[derive(Debug, Clone, Copy, Default)]
pub struct DoubleGyre {
    params: DoubleGyreParams,
}

impl DoubleGyre {
    pub fn new(params: DoubleGyreParams) -> Self {
        DoubleGyre { params }
    }

    pub fn params(&self) -> &DoubleGyreParams {
        &self.params
    }

    /// Phase argument `w t`, with `t` reduced modulo the period first.
    ///
    /// Reducing `t` (an exact operation for IEEE remainders) keeps
    /// `sin(w t)` bit-identical across whole periods, so the field is
    /// *exactly* time-periodic rather than periodic up to roundoff.
    fn phase(&self, t: f64) -> f64 {
        if self.params.omega > 0.0 {
            self.params.omega * t.rem_euclid(self.period())
        } else {
            0.0
        }
    }

    fn coefficients(&self, t: f64) -> (f64, f64) {
        let s = self.phase(t).sin();
        let a = self.params.epsilon * s;
        let b = 1.0 - 2.0 * self.params.epsilon * s;
        (a, b)
    }

    /// Stream function `phi(x, y, t) = A sin(pi f) sin(pi y)`.
    pub fn stream_function(&self, q: FieldQuery) -> f64 {
        let (a, b) = self.coefficients(q.t);
        let f = a * q.x * q.x + b * q.x;
        self.params.amplitude * (PI * f).sin() * (PI * q.y).sin()
    }

    /// Oscillation period of the field.
    pub fn period(&self) -> f64 {
        self.params.period()
    }

    /// Characteristic peak speed `pi A`.
    ///
    /// The steady (`eps = 0`) field never exceeds it anywhere; the
    /// oscillating field exceeds it only inside thin bands at the left
    /// and right walls, by at most a factor `1 + 2 eps`.
    pub fn max_speed(&self) -> f64 {
        PI * self.params.amplitude
    }
}

impl FlowField for DoubleGyre {
    fn velocity(&self, x: Vec2, t: f64) -> Vec2 {
        let p = &self.params;
        let (a, b) = self.coefficients(t);
        let f = a * x.x * x.x + b * x.x;
        let dfdx = 2.0 * a * x.x + b;
        let (spf, cpf) = (PI * f).sin_cos();
        let (spy, cpy) = (PI * x.y).sin_cos();
        Vec2::new(
            -PI * p.amplitude * spf * cpy,
            PI * p.amplitude * cpf * spy * dfdx,
        )
    }

    fn velocity_jacobian(&self, x: Vec2, t: f64) -> Mat2 {
        let p = &self.params;
        let (a, b) = self.coefficients(t);
        let f = a * x.x * x.x + b * x.x;
        let dfdx = 2.0 * a * x.x + b;
        let (spf, cpf) = (PI * f).sin_cos();
        let (spy, cpy) = (PI * x.y).sin_cos();
        let pa = PI * p.amplitude;
        // v_x = -pa sin(pi f) cos(pi y); v_y = pa cos(pi f) sin(pi y) f'
        Mat2::new(
            -pa * PI * cpf * dfdx * cpy,
            pa * PI * spf * spy,
            pa * (-PI * spf * dfdx * dfdx + 2.0 * a * cpf) * spy,
            pa * PI * cpf * dfdx * cpy,
        )
    }
}

/// Validated stream-function evaluation.
pub fn stream_function(q: FieldQuery, p: DoubleGyreParams) -> f64 {
    DoubleGyre::new(p).stream_function(q)
}

/// Validated velocity evaluation.
pub fn velocity(q: FieldQuery, p: DoubleGyreParams) -> Vec2 {
    DoubleGyre::new(p).velocity(q.pos(), q.t)
}

/// Largest background speed `pi A`.
pub fn max_speed(p: DoubleGyreParams) -> f64 {
    DoubleGyre::new(p).max_speed()
}

/// Constant velocity everywhere; translation oracle.
#[derive(Debug, Clone, Copy)]
pub struct Uniform {
    pub v: Vec2,
}

impl Uniform {
    pub fn new(vx: f64, vy: f64) -> Self {
        Uniform {
            v: Vec2::new(vx, vy),
        }
    }
}

impl FlowField for Uniform {
    fn velocity(&self, _x: Vec2, _t: f64) -> Vec2 {
        self.v
    }

    fn velocity_jacobian(&self, _x: Vec2, _t: f64) -> Mat2 {
        Mat2::zero()
    }
}

/// The linear saddle `v = (r x, -r y)`, whose flow map and FTLE are known
/// in closed form: `x(T) = (x0 e^{rT}, y0 e^{-rT})` and `sigma = r`.
#[derive(Debug, Clone, Copy)]
pub struct LinearSaddle {
    pub rate: f64,
}

impl LinearSaddle {
    pub fn new(rate: f64) -> Self {
        LinearSaddle { rate }
    }
}

impl FlowField for LinearSaddle {
    fn velocity(&self, x: Vec2, _t: f64) -> Vec2 {
        Vec2::new(self.rate * x.x, -self.rate * x.y)
    }

    fn velocity_jacobian(&self, _x: Vec2, _t: f64) -> Mat2 {
        Mat2::new(self.rate, 0.0, 0.0, -self.rate)
    }
}
