//! Box-constrained horizon solver.
//!
//! Single shooting leaves the controls as the only decision variables and
//! the actuation box as the only constraint, so a projected quasi-Newton
//! iteration is enough: an L-BFGS direction from gradient history, a
//! backtracking Armijo search along the projected arc, and a componentwise
//! clamp after every trial step. Convergence is declared on the projected
//! gradient; hitting the iteration cap returns the best iterate, flagged.

use super::{cost_and_gradient, cost_of_states, rollout, ControlSequence, HorizonSolution, MpcConfig};
use crate::advect::IntegratorConfig;
use crate::error::{Error, Result};
use crate::flowfield::FlowField;
use crate::linalg::Vec2;
use std::collections::VecDeque;

const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;
const LBFGS_MEMORY: usize = 10;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn project(z: &mut [f64], bound: f64) {
    for v in z.iter_mut() {
        *v = v.clamp(-bound, bound);
    }
}

/// Infinity norm of the projected gradient: the componentwise distance
/// from `z` to the box clamp of `z - g`. Zero exactly at a KKT point.
fn projected_gradient_inf(z: &[f64], g: &[f64], bound: f64) -> f64 {
    z.iter()
        .zip(g)
        .map(|(&zi, &gi)| (zi - (zi - gi).clamp(-bound, bound)).abs())
        .fold(0.0, f64::max)
}

struct LbfgsHistory {
    pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)>,
}

impl LbfgsHistory {
    fn new() -> Self {
        LbfgsHistory {
            pairs: VecDeque::new(),
        }
    }

    fn clear(&mut self) {
        self.pairs.clear();
    }

    fn push(&mut self, s: Vec<f64>, y: Vec<f64>) {
        let sy = dot(&s, &y);
        // Curvature can vanish along active bounds; skip those updates.
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if self.pairs.len() == LBFGS_MEMORY {
                self.pairs.pop_front();
            }
            self.pairs.push_back((s, y, 1.0 / sy));
        }
    }

    /// Two-loop recursion: `-H g` with `H` the implicit inverse Hessian.
    fn direction(&self, g: &[f64]) -> Vec<f64> {
        let mut q: Vec<f64> = g.to_vec();
        if self.pairs.is_empty() {
            for v in q.iter_mut() {
                *v = -*v;
            }
            return q;
        }
        let mut alphas = Vec::with_capacity(self.pairs.len());
        for (s, y, rho) in self.pairs.iter().rev() {
            let alpha = rho * dot(s, &q);
            for (qi, yi) in q.iter_mut().zip(y) {
                *qi -= alpha * yi;
            }
            alphas.push(alpha);
        }
        let (s_last, y_last, _) = self.pairs.back().unwrap();
        let gamma = dot(s_last, y_last) / dot(y_last, y_last);
        for v in q.iter_mut() {
            *v *= gamma;
        }
        for ((s, y, rho), alpha) in self.pairs.iter().zip(alphas.iter().rev()) {
            let beta = rho * dot(y, &q);
            for (qi, si) in q.iter_mut().zip(s) {
                *qi += (alpha - beta) * si;
            }
        }
        for v in q.iter_mut() {
            *v = -*v;
        }
        q
    }
}

fn to_sequence(z: &[f64], t0: f64) -> ControlSequence {
    ControlSequence {
        u: z.chunks_exact(2).map(|p| Vec2::new(p[0], p[1])).collect(),
        t0,
    }
}

struct Objective<'a, F: ?Sized> {
    field: &'a F,
    x0: Vec2,
    t0: f64,
    cfg: &'a MpcConfig,
    icfg: &'a IntegratorConfig,
}

impl<F: FlowField + ?Sized> Objective<'_, F> {
    fn cost(&self, z: &[f64]) -> Result<f64> {
        let seq = to_sequence(z, self.t0);
        let states = rollout(self.field, self.x0, &seq, self.cfg, self.icfg)
            .map_err(|e| Error::Solver(format!("cost evaluation failed: {e}")))?;
        let (j, _, _) = cost_of_states(&states, &seq.u, self.cfg);
        if j.is_finite() {
            Ok(j)
        } else {
            Err(Error::Solver(format!("non-finite cost {j} during search")))
        }
    }

    fn cost_and_gradient(&self, z: &[f64]) -> Result<(f64, Vec<f64>)> {
        let seq = to_sequence(z, self.t0);
        let (j, _, _, grad) =
            cost_and_gradient(self.field, self.x0, &seq, self.cfg, self.icfg)
                .map_err(|e| Error::Solver(format!("gradient evaluation failed: {e}")))?;
        if !j.is_finite() {
            return Err(Error::Solver(format!("non-finite cost {j} during search")));
        }
        let mut flat = Vec::with_capacity(2 * grad.len());
        for g in grad {
            if !g.is_finite() {
                return Err(Error::Solver("non-finite gradient during search".into()));
            }
            flat.push(g.x);
            flat.push(g.y);
        }
        Ok((j, flat))
    }
}

/// Minimizes the horizon cost over the control box from `x0` at `t0`.
///
/// Cold starts initialize all controls to zero; a warm start (typically
/// the previous solution shifted by one step) is clamped into the box and
/// used as the initial iterate. The best iterate seen is returned whether
/// or not the projected-gradient test was met.
pub fn solve_horizon<F: FlowField + ?Sized>(
    field: &F,
    x0: Vec2,
    t0: f64,
    cfg: &MpcConfig,
    icfg: &IntegratorConfig,
    warm: Option<ControlSequence>,
) -> Result<HorizonSolution> {
    cfg.validate()?;
    let n = cfg.n_steps();
    let bound = cfg.u_max;
    let mut z: Vec<f64> = match warm {
        Some(seq) => {
            if seq.u.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "warm start has {} controls, horizon needs {n}",
                    seq.u.len()
                )));
            }
            let mut z = Vec::with_capacity(2 * n);
            for u in &seq.u {
                z.push(u.x);
                z.push(u.y);
            }
            project(&mut z, bound);
            z
        }
        None => vec![0.0; 2 * n],
    };

    let obj = Objective {
        field,
        x0,
        t0,
        cfg,
        icfg,
    };
    let (mut j, mut g) = obj.cost_and_gradient(&z)?;
    let mut best_z = z.clone();
    let mut best_j = j;
    let mut j_history = vec![j];
    let mut history = LbfgsHistory::new();
    let mut iterations = 0;
    let mut converged = false;

    'outer: while iterations < cfg.solver.max_iter {
        if projected_gradient_inf(&z, &g, bound) <= cfg.solver.tol_grad {
            converged = true;
            break;
        }
        iterations += 1;

        let mut d = history.direction(&g);
        let mut used_quasi_newton = !history.pairs.is_empty();
        if dot(&d, &g) >= 0.0 {
            // Not a descent direction; restart from steepest descent.
            history.clear();
            d = g.iter().map(|v| -v).collect();
            used_quasi_newton = false;
        }

        let accepted = loop {
            match backtrack(&obj, &z, j, &g, &d, bound)? {
                Some(hit) => break Some(hit),
                None if used_quasi_newton => {
                    // The quasi-Newton model failed along the projected arc;
                    // drop it and give plain gradient descent one chance.
                    history.clear();
                    d = g.iter().map(|v| -v).collect();
                    used_quasi_newton = false;
                }
                None => break None,
            }
        };

        let Some((z_new, j_new)) = accepted else {
            // No decrease is achievable at floating-point resolution.
            break 'outer;
        };
        let (j_eval, g_new) = obj.cost_and_gradient(&z_new)?;
        debug_assert_eq!(j_eval.to_bits(), j_new.to_bits());
        let s: Vec<f64> = z_new.iter().zip(&z).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        history.push(s, y);
        z = z_new;
        j = j_new;
        g = g_new;
        j_history.push(j);
        if j < best_j {
            best_j = j;
            best_z = z.clone();
        }
    }

    if !converged && projected_gradient_inf(&z, &g, bound) <= cfg.solver.tol_grad {
        converged = true;
    }

    let controls = to_sequence(&best_z, t0);
    let predicted = rollout(field, x0, &controls, cfg, icfg)?;
    let (j, j_e, j_u) = cost_of_states(&predicted, &controls.u, cfg);
    Ok(HorizonSolution {
        controls,
        predicted,
        j,
        j_e,
        j_u,
        iterations,
        converged,
        j_history,
    })
}

/// Armijo backtracking along the projected arc `P(z + alpha d)`.
///
/// Returns the first accepted `(z, J)` or `None` if no trial decreased
/// the cost sufficiently.
fn backtrack<F: FlowField + ?Sized>(
    obj: &Objective<'_, F>,
    z: &[f64],
    j: f64,
    g: &[f64],
    d: &[f64],
    bound: f64,
) -> Result<Option<(Vec<f64>, f64)>> {
    let mut alpha = 1.0;
    for _ in 0..MAX_BACKTRACKS {
        let mut trial: Vec<f64> = z.iter().zip(d).map(|(zi, di)| zi + alpha * di).collect();
        project(&mut trial, bound);
        let decrease: f64 = trial
            .iter()
            .zip(z)
            .zip(g)
            .map(|((ti, zi), gi)| gi * (ti - zi))
            .sum();
        if decrease < 0.0 {
            let j_trial = obj.cost(&trial)?;
            if j_trial <= j + ARMIJO_C1 * decrease {
                return Ok(Some((trial, j_trial)));
            }
        }
        alpha *= 0.5;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flowfield::{DoubleGyre, DoubleGyreParams};

    fn null_field() -> DoubleGyre {
        DoubleGyre::new(DoubleGyreParams::new(0.0, 0.25, 1.0).unwrap())
    }

    fn icfg() -> IntegratorConfig {
        IntegratorConfig::default()
    }

    #[test]
    fn trivial_problem_converges_to_zero_control() {
        let cfg = MpcConfig {
            horizon: 1.0,
            ..MpcConfig::default()
        };
        let sol = solve_horizon(&null_field(), cfg.goal, 0.0, &cfg, &icfg(), None).unwrap();
        assert!(sol.converged);
        assert!(sol.j.abs() < 1e-10);
        for u in &sol.controls.u {
            assert!(u.norm() < 1e-6);
        }
        assert_eq!(sol.predicted.len(), cfg.n_steps() + 1);
    }

    #[test]
    fn saturated_pull_toward_goal() {
        // Goal due left, state error dominating: the first controls must
        // saturate at u_x = -u_max and the motion is a straight line.
        let cfg = MpcConfig {
            horizon: 2.0,
            q: 1.0,
            r: 1e-4,
            ..MpcConfig::default()
        };
        let x0 = Vec2::new(1.0, 0.5);
        let sol = solve_horizon(&null_field(), x0, 0.0, &cfg, &icfg(), None).unwrap();
        assert_eq!(sol.controls.u[0].x, -cfg.u_max);
        assert!(sol.controls.u[0].y.abs() < 1e-6);
        for w in sol.predicted.windows(2) {
            assert!((w[1].y - w[0].y).abs() < 1e-6, "motion should stay level");
            assert!(w[1].x <= w[0].x + 1e-12, "motion should head left");
        }
    }

    #[test]
    fn beats_every_discrete_two_step_policy() {
        // Exhaustive oracle: on a 2-step horizon the solver must not be
        // beaten by any control sequence drawn from {-u_max, 0, u_max}^2.
        let cfg = MpcConfig {
            horizon: 0.2,
            q: 1.0,
            r: 1e-3,
            ..MpcConfig::default()
        };
        let x0 = Vec2::new(1.0, 0.5);
        let field = null_field();
        let sol = solve_horizon(&field, x0, 0.0, &cfg, &icfg(), None).unwrap();
        let levels = [-0.1, 0.0, 0.1];
        let mut best_discrete = f64::INFINITY;
        for a in levels {
            for b in levels {
                for c in levels {
                    for d in levels {
                        let seq = ControlSequence {
                            u: vec![Vec2::new(a, b), Vec2::new(c, d)],
                            t0: 0.0,
                        };
                        let (j, _, _) =
                            crate::mpc::cost(&field, x0, &seq, &cfg, &icfg()).unwrap();
                        best_discrete = best_discrete.min(j);
                    }
                }
            }
        }
        assert!(
            sol.j <= best_discrete + 1e-12,
            "solver {} vs best discrete {}",
            sol.j,
            best_discrete
        );
    }

    #[test]
    fn never_worse_than_zero_control() {
        let cfg = MpcConfig {
            horizon: 4.0,
            q: 1.0,
            r: 2.0,
            ..MpcConfig::default()
        };
        let field = DoubleGyre::default();
        let x0 = Vec2::new(2.0, 1.0);
        let sol = solve_horizon(&field, x0, 0.0, &cfg, &icfg(), None).unwrap();
        let zero = ControlSequence::zeros(cfg.n_steps(), 0.0);
        let (j_zero, _, _) = crate::mpc::cost(&field, x0, &zero, &cfg, &icfg()).unwrap();
        assert!(
            sol.j <= j_zero,
            "solution {} worse than the feasible zero sequence {}",
            sol.j,
            j_zero
        );
    }

    #[test]
    fn controls_respect_bounds_bitwise() {
        let cfg = MpcConfig {
            horizon: 3.0,
            q: 5.0,
            r: 0.01,
            ..MpcConfig::default()
        };
        let sol =
            solve_horizon(&DoubleGyre::default(), Vec2::new(1.8, 0.9), 0.0, &cfg, &icfg(), None)
                .unwrap();
        for u in &sol.controls.u {
            assert!(u.x.abs() <= cfg.u_max);
            assert!(u.y.abs() <= cfg.u_max);
        }
    }

    #[test]
    fn accepted_iterates_never_increase_cost() {
        let cfg = MpcConfig {
            horizon: 4.0,
            ..MpcConfig::default()
        };
        let sol =
            solve_horizon(&DoubleGyre::default(), Vec2::new(2.0, 1.0), 0.0, &cfg, &icfg(), None)
                .unwrap();
        for w in sol.j_history.windows(2) {
            assert!(w[1] <= w[0], "cost increased from {} to {}", w[0], w[1]);
        }
    }

    #[test]
    fn warm_start_matches_cold_on_convex_instance() {
        let cfg = MpcConfig {
            horizon: 1.0,
            q: 1.0,
            r: 1.0,
            ..MpcConfig::default()
        };
        let x0 = Vec2::new(0.9, 0.7);
        let field = null_field();
        let cold = solve_horizon(&field, x0, 0.0, &cfg, &icfg(), None).unwrap();
        let warm_seq = ControlSequence {
            u: vec![Vec2::new(0.07, -0.03); cfg.n_steps()],
            t0: 0.0,
        };
        let warm = solve_horizon(&field, x0, 0.0, &cfg, &icfg(), Some(warm_seq)).unwrap();
        assert!(
            (cold.j - warm.j).abs() < 1e-8,
            "cold {} vs warm {}",
            cold.j,
            warm.j
        );
    }

    #[test]
    fn warm_start_length_is_checked() {
        let cfg = MpcConfig::default();
        let bad = ControlSequence::zeros(3, 0.0);
        assert!(
            solve_horizon(&null_field(), Vec2::ZERO, 0.0, &cfg, &icfg(), Some(bad)).is_err()
        );
    }

    #[test]
    fn huge_actuation_penalty_recovers_passive_drifter() {
        let cfg = MpcConfig {
            horizon: 4.0,
            q: 1.0,
            r: 1e6,
            ..MpcConfig::default()
        };
        let sol =
            solve_horizon(&DoubleGyre::default(), Vec2::new(1.5, 0.8), 0.0, &cfg, &icfg(), None)
                .unwrap();
        let max_u = sol
            .controls
            .u
            .iter()
            .map(|u| u.norm_inf())
            .fold(0.0, f64::max);
        assert!(max_u <= 1e-3, "R/Q = 1e6 left |u| = {max_u}");
    }

    #[test]
    fn iteration_cap_returns_best_effort() {
        let cfg = MpcConfig {
            horizon: 4.0,
            solver: crate::mpc::SolverConfig {
                tol_grad: 1e-12,
                max_iter: 3,
            },
            ..MpcConfig::default()
        };
        let sol =
            solve_horizon(&DoubleGyre::default(), Vec2::new(2.0, 1.0), 0.0, &cfg, &icfg(), None)
                .unwrap();
        assert!(!sol.converged);
        assert_eq!(sol.iterations, 3);
        assert!(sol.j.is_finite());
    }
}
