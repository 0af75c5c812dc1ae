//! Exact discrete gradients of the horizon cost.
//!
//! The rollout is a composition of RK4 substeps; differentiating each
//! substep in closed form and running the chain rule backwards gives the
//! gradient of `J` with respect to every control component, exact to
//! roundoff (the usual check is against central finite differences).

use super::{cost_of_states, substeps, ControlSequence, ControlledField, MpcConfig};
use crate::advect::{self, IntegratorConfig};
use crate::error::Result;
use crate::flowfield::FlowField;
use crate::linalg::{Mat2, Vec2};

/// Derivatives of one RK4 substep `x' = F(x; u)` of `dx/dt = v(x, t) + u`,
/// evaluated at entry state `x`, time `t`, step `h`.
///
/// Returns `(dF/dx, dF/du)`, both 2x2.
fn rk4_step_derivatives<F: FlowField + ?Sized>(
    field: &F,
    x: Vec2,
    t: f64,
    h: f64,
    u: Vec2,
) -> (Mat2, Mat2) {
    let half = 0.5 * h;
    // Stage points, recomputed exactly as the forward step builds them.
    let k1 = field.velocity(x, t) + u;
    let p2 = x + k1 * half;
    let k2 = field.velocity(p2, t + half) + u;
    let p3 = x + k2 * half;
    let k3 = field.velocity(p3, t + half) + u;
    let p4 = x + k3 * h;

    let a1 = field.velocity_jacobian(x, t);
    let a2 = field.velocity_jacobian(p2, t + half);
    let a3 = field.velocity_jacobian(p3, t + half);
    let a4 = field.velocity_jacobian(p4, t + h);

    let i = Mat2::IDENTITY;
    let k1x = a1;
    let k2x = a2.mul(i.add(k1x.scale(half)));
    let k3x = a3.mul(i.add(k2x.scale(half)));
    let k4x = a4.mul(i.add(k3x.scale(h)));
    let dx = i.add(k1x.add(k2x.scale(2.0)).add(k3x.scale(2.0)).add(k4x).scale(h / 6.0));

    let u1 = i;
    let u2 = i.add(a2.scale(half));
    let u3 = i.add(a3.mul(u2).scale(half));
    let u4 = i.add(a4.mul(u3).scale(h));
    let du = u1.add(u2.scale(2.0)).add(u3.scale(2.0)).add(u4).scale(h / 6.0);

    (dx, du)
}

/// Evaluates the cost and its gradient with respect to every control, via
/// one forward rollout and one backward (adjoint) sweep.
///
/// Returns `(j, j_e, j_u, gradient)` with one gradient pair per control.
pub fn cost_and_gradient<F: FlowField + ?Sized>(
    field: &F,
    x0: Vec2,
    seq: &ControlSequence,
    cfg: &MpcConfig,
    icfg: &IntegratorConfig,
) -> Result<(f64, f64, f64, Vec<Vec2>)> {
    let n = seq.u.len();
    let (m, h) = substeps(cfg.dt, icfg.dt_int);

    // Forward pass, recording the entry state of every substep.
    let mut entry = vec![Vec2::ZERO; n * m];
    let mut states = Vec::with_capacity(n + 1);
    states.push(x0);
    let mut x = x0;
    for (k, &u) in seq.u.iter().enumerate() {
        let tk = seq.t0 + k as f64 * cfg.dt;
        let controlled = ControlledField { base: field, u };
        for s in 0..m {
            entry[k * m + s] = x;
            x = advect::step(&controlled, x, tk + s as f64 * h, h)?;
        }
        states.push(x);
    }
    let (j, j_e, j_u) = cost_of_states(&states, &seq.u, cfg);

    // Backward pass. lambda carries dJ/dx at the current point of the chain.
    let mut grad = vec![Vec2::ZERO; n];
    let weight_running = 2.0 * cfg.q * cfg.dt;
    let mut lambda =
        (states[n] - cfg.goal) * (weight_running + 2.0 * cfg.q_terminal);
    for k in (0..n).rev() {
        let u = seq.u[k];
        let tk = seq.t0 + k as f64 * cfg.dt;
        let mut du_sum = Vec2::ZERO;
        for s in (0..m).rev() {
            let t = tk + s as f64 * h;
            let (dx, du) = rk4_step_derivatives(field, entry[k * m + s], t, h, u);
            du_sum += du.tr_mul_vec(lambda);
            lambda = dx.tr_mul_vec(lambda);
        }
        grad[k] = du_sum + u * (2.0 * cfg.r * cfg.dt);
        if k >= 1 {
            lambda += (states[k] - cfg.goal) * weight_running;
        }
    }
    Ok((j, j_e, j_u, grad))
}

/// Gradient of `J` with respect to every control component.
pub fn cost_gradient<F: FlowField + ?Sized>(
    field: &F,
    x0: Vec2,
    seq: &ControlSequence,
    cfg: &MpcConfig,
    icfg: &IntegratorConfig,
) -> Result<Vec<Vec2>> {
    cost_and_gradient(field, x0, seq, cfg, icfg).map(|(_, _, _, g)| g)
}
