//! Finite-horizon constrained control of the actuated sensor.
//!
//! The sensor obeys `dx/dt = v(x, t) + u` with each control component
//! box-limited to `[-u_max, u_max]`. A horizon of `N = T_H / dt`
//! piecewise-constant controls is optimized against
//!
//! ```text
//! J = sum_k Q |x_k - goal|^2 dt  +  sum_k R |u_k|^2 dt  +  Q2 |x_N - goal|^2
//! ```
//!
//! (state-error sum over post-step states `k = 1..N`), and the receding
//! loop applies only the first control before re-solving, warm-started
//! from the previous solution shifted by one step.

mod gradient;
mod solver;

pub use gradient::{cost_and_gradient, cost_gradient};
pub use solver::solve_horizon;

use crate::advect::{self, IntegratorConfig};
use crate::csvio::{fmt_f64, parse_f64, split_line};
use crate::error::{Error, Result};
use crate::flowfield::FlowField;
use crate::linalg::{Mat2, Vec2};
use std::io::{BufRead, Write};

/// Horizon-solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Convergence threshold on the projected-gradient infinity norm.
    pub tol_grad: f64,
    /// Iteration cap; exhaustion returns the best iterate, flagged.
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol_grad: 1e-6,
            max_iter: 500,
        }
    }
}

/// Weights, horizon, and bounds for one MPC problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpcConfig {
    /// Prediction horizon `T_H`; must be a positive multiple of `dt`.
    pub horizon: f64,
    /// Control step: each control is held constant for this long.
    pub dt: f64,
    /// State-error weight (the matrix is `q I`).
    pub q: f64,
    /// Actuation weight (the matrix is `r I`).
    pub r: f64,
    /// Terminal state-error weight.
    pub q_terminal: f64,
    /// Per-component control bound.
    pub u_max: f64,
    pub goal: Vec2,
    /// Whether the receding loop seeds each solve from the previous one.
    pub warm_start: bool,
    pub solver: SolverConfig,
}

impl Default for MpcConfig {
    fn default() -> Self {
        MpcConfig {
            horizon: 4.0,
            dt: 0.1,
            q: 1.0,
            r: 2.0,
            q_terminal: 0.0,
            u_max: 0.1,
            goal: Vec2::new(0.5, 0.5),
            warm_start: true,
            solver: SolverConfig::default(),
        }
    }
}

impl MpcConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "horizon must be > 0, got {}",
                self.horizon
            )));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dt must be > 0, got {}",
                self.dt
            )));
        }
        let ratio = self.horizon / self.dt;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) || ratio.round() < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "horizon / dt must be a positive integer, got {ratio}"
            )));
        }
        if self.q < 0.0 || self.r < 0.0 || self.q_terminal < 0.0 {
            return Err(Error::InvalidParameter(
                "weights q, r, q_terminal must be >= 0".into(),
            ));
        }
        if self.q == 0.0 && self.r == 0.0 && self.q_terminal == 0.0 {
            return Err(Error::InvalidParameter(
                "at least one of q, r, q_terminal must be positive".into(),
            ));
        }
        if !(self.u_max.is_finite() && self.u_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "u_max must be > 0, got {}",
                self.u_max
            )));
        }
        if !self.goal.is_finite() {
            return Err(Error::NonFiniteInput("goal state".into()));
        }
        if !(self.solver.tol_grad > 0.0) || self.solver.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "solver needs tol_grad > 0 and max_iter >= 1".into(),
            ));
        }
        Ok(())
    }

    /// Number of piecewise-constant controls in the horizon.
    pub fn n_steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }
}

/// A horizon's worth of piecewise-constant controls starting at `t0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSequence {
    pub u: Vec<Vec2>,
    pub t0: f64,
}

impl ControlSequence {
    pub fn zeros(n: usize, t0: f64) -> Self {
        ControlSequence {
            u: vec![Vec2::ZERO; n],
            t0,
        }
    }

    /// Receding-horizon shift: drop the first control, duplicate the last.
    pub fn shifted(&self) -> Self {
        let mut u = self.u.clone();
        if !u.is_empty() {
            u.remove(0);
            u.push(*u.last().unwrap_or(&Vec2::ZERO));
        }
        ControlSequence {
            u,
            t0: self.t0,
        }
    }
}

/// Result of one horizon solve.
#[derive(Debug, Clone)]
pub struct HorizonSolution {
    pub controls: ControlSequence,
    /// `N + 1` states from rolling the controls through the dynamics.
    pub predicted: Vec<Vec2>,
    /// Total cost, including the terminal term.
    pub j: f64,
    /// State-error part.
    pub j_e: f64,
    /// Actuation part.
    pub j_u: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Cost of the initial point and of every accepted iterate, in order.
    pub j_history: Vec<f64>,
}

/// Per-step condensation of a [`HorizonSolution`] kept in trajectories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSummary {
    pub j: f64,
    pub j_e: f64,
    pub j_u: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// A closed-loop trajectory: `n + 1` states bracketing `n` applied controls.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec2>,
    pub controls: Vec<Vec2>,
    /// `u_k . u_k` per step.
    pub inst_energy: Vec<f64>,
    /// Present when produced by [`run_mpc`]; `iterations` is not persisted
    /// in CSV and reads back as 0.
    pub horizons: Option<Vec<StepSummary>>,
}

/// A flow field with a constant actuation added; dynamics of Eq.-style
/// `dx/dt = v + u` over one control interval.
pub(crate) struct ControlledField<'a, F: ?Sized> {
    pub base: &'a F,
    pub u: Vec2,
}

impl<F: FlowField + ?Sized> FlowField for ControlledField<'_, F> {
    fn velocity(&self, x: Vec2, t: f64) -> Vec2 {
        self.base.velocity(x, t) + self.u
    }

    fn velocity_jacobian(&self, x: Vec2, t: f64) -> Mat2 {
        self.base.velocity_jacobian(x, t)
    }
}

/// Splits a control interval into RK4 substeps no longer than `dt_int`.
pub(crate) fn substeps(dt: f64, dt_int: f64) -> (usize, f64) {
    let m = ((dt / dt_int - 1e-9).ceil() as usize).max(1);
    (m, dt / m as f64)
}

/// Integrates the controlled dynamics through `seq`, holding each control
/// constant over its interval. Returns `seq.len() + 1` states.
pub fn rollout<F: FlowField + ?Sized>(
    field: &F,
    x0: Vec2,
    seq: &ControlSequence,
    cfg: &MpcConfig,
    icfg: &IntegratorConfig,
) -> Result<Vec<Vec2>> {
    let (m, h) = substeps(cfg.dt, icfg.dt_int);
    let mut states = Vec::with_capacity(seq.u.len() + 1);
    states.push(x0);
    let mut x = x0;
    for (k, &u) in seq.u.iter().enumerate() {
        let tk = seq.t0 + k as f64 * cfg.dt;
        let controlled = ControlledField { base: field, u };
        for s in 0..m {
            x = advect::step(&controlled, x, tk + s as f64 * h, h)?;
        }
        states.push(x);
    }
    Ok(states)
}

/// Evaluates `(J, J_e, J_u)` for a control sequence from `x0`.
///
/// The terminal `Q2` term is included in `J` only.
pub fn cost<F: FlowField + ?Sized>(
    field: &F,
    x0: Vec2,
    seq: &ControlSequence,
    cfg: &MpcConfig,
    icfg: &IntegratorConfig,
) -> Result<(f64, f64, f64)> {
    let states = rollout(field, x0, seq, cfg, icfg)?;
    Ok(cost_of_states(&states, &seq.u, cfg))
}

/// Cost assembly shared by [`cost`], the gradient, and the solver, so all
/// paths associate floating-point sums identically.
pub(crate) fn cost_of_states(states: &[Vec2], u: &[Vec2], cfg: &MpcConfig) -> (f64, f64, f64) {
    let mut err_sq = 0.0;
    for x in &states[1..] {
        err_sq += (*x - cfg.goal).norm_sq();
    }
    let mut act_sq = 0.0;
    for uk in u {
        act_sq += uk.norm_sq();
    }
    let j_e = cfg.q * err_sq * cfg.dt;
    let j_u = cfg.r * act_sq * cfg.dt;
    let terminal = match states.last() {
        Some(x) => cfg.q_terminal * (*x - cfg.goal).norm_sq(),
        None => 0.0,
    };
    (j_e + j_u + terminal, j_e, j_u)
}

/// Receding-horizon loop: solve, apply the first control for one `dt`,
/// re-solve warm-started from the shifted solution.
pub fn run_mpc<F: FlowField + ?Sized>(
    field: &F,
    x_start: Vec2,
    t_start: f64,
    cfg: &MpcConfig,
    icfg: &IntegratorConfig,
    duration: f64,
) -> Result<Trajectory> {
    cfg.validate()?;
    if !(duration.is_finite() && duration >= cfg.dt) {
        return Err(Error::InvalidParameter(format!(
            "duration must be at least one control step ({}), got {duration}",
            cfg.dt
        )));
    }
    let n_steps = ((duration / cfg.dt) + 1e-9).floor() as usize;
    let mut traj = Trajectory {
        horizons: Some(Vec::with_capacity(n_steps)),
        ..Default::default()
    };
    let mut x = x_start;
    let mut warm: Option<ControlSequence> = None;
    for k in 0..n_steps {
        let t = t_start + k as f64 * cfg.dt;
        let abort = |traj: &mut Trajectory, x: Vec2, t: f64, e: Error| {
            traj.times.push(t);
            traj.states.push(x);
            Error::MpcAborted {
                partial: Box::new(std::mem::take(traj)),
                source: Box::new(e),
            }
        };
        let sol = match solve_horizon(field, x, t, cfg, icfg, warm.take()) {
            Ok(sol) => sol,
            Err(e) => return Err(abort(&mut traj, x, t, e)),
        };
        let u0 = sol.controls.u[0];
        let single = ControlSequence {
            u: vec![u0],
            t0: t,
        };
        let stepped = match rollout(field, x, &single, cfg, icfg) {
            Ok(s) => s,
            Err(e) => return Err(abort(&mut traj, x, t, e)),
        };
        traj.times.push(t);
        traj.states.push(x);
        traj.controls.push(u0);
        traj.inst_energy.push(u0.norm_sq());
        if let Some(h) = traj.horizons.as_mut() {
            h.push(StepSummary {
                j: sol.j,
                j_e: sol.j_e,
                j_u: sol.j_u,
                iterations: sol.iterations,
                converged: sol.converged,
            });
        }
        if cfg.warm_start {
            let mut shifted = sol.controls.shifted();
            shifted.t0 = t + cfg.dt;
            warm = Some(shifted);
        }
        x = stepped[1];
    }
    traj.times.push(t_start + n_steps as f64 * cfg.dt);
    traj.states.push(x);
    Ok(traj)
}

pub const TRAJECTORY_CSV_HEADER: &str = "t,x,y,ux,uy,inst_energy,J_pred,Je_pred,Ju_pred,converged";

impl Trajectory {
    pub fn len(&self) -> usize {
        self.controls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.controls.is_empty()
    }

    /// Total unweighted actuation energy `sum u.u dt`.
    pub fn total_energy(&self, dt: f64) -> f64 {
        self.inst_energy.iter().sum::<f64>() * dt
    }

    /// Total unweighted squared state error `sum |x_k - goal|^2 dt` over
    /// post-step states, matching the horizon cost convention.
    pub fn total_state_error(&self, goal: Vec2, dt: f64) -> f64 {
        self.states[1..]
            .iter()
            .map(|x| (*x - goal).norm_sq())
            .sum::<f64>()
            * dt
    }

    /// Fraction of steps whose horizon solve converged (1 if unknown).
    pub fn converged_fraction(&self) -> f64 {
        match &self.horizons {
            Some(h) if !h.is_empty() => {
                h.iter().filter(|s| s.converged).count() as f64 / h.len() as f64
            }
            _ => 1.0,
        }
    }

    /// Writes one row per control step plus a terminal row carrying the
    /// final state with empty control fields.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{TRAJECTORY_CSV_HEADER}")?;
        let summaries = self.horizons.as_deref().unwrap_or(&[]);
        for k in 0..self.controls.len() {
            let s = summaries.get(k);
            let (j, je, ju, conv) = match s {
                Some(s) => (
                    fmt_f64(s.j),
                    fmt_f64(s.j_e),
                    fmt_f64(s.j_u),
                    if s.converged { "true" } else { "false" },
                ),
                None => (fmt_f64(f64::NAN), fmt_f64(f64::NAN), fmt_f64(f64::NAN), "true"),
            };
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{}",
                fmt_f64(self.times[k]),
                fmt_f64(self.states[k].x),
                fmt_f64(self.states[k].y),
                fmt_f64(self.controls[k].x),
                fmt_f64(self.controls[k].y),
                fmt_f64(self.inst_energy[k]),
                j,
                je,
                ju,
                conv,
            )?;
        }
        if self.states.len() == self.controls.len() + 1 {
            let last = self.states.len() - 1;
            writeln!(
                w,
                "{},{},{},,,,,,,",
                fmt_f64(self.times[last]),
                fmt_f64(self.states[last].x),
                fmt_f64(self.states[last].y),
            )?;
        }
        Ok(())
    }

    /// Reads a trajectory written by [`Trajectory::write_csv`].
    ///
    /// Solver iteration counts are not persisted and read back as 0.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Trajectory> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty trajectory file".into()))??;
        if header.trim_end() != TRAJECTORY_CSV_HEADER {
            return Err(Error::Format(format!(
                "unexpected trajectory header {header:?}, expected {TRAJECTORY_CSV_HEADER:?}"
            )));
        }
        let mut traj = Trajectory {
            horizons: Some(Vec::new()),
            ..Default::default()
        };
        let mut saw_terminal = false;
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            if saw_terminal {
                return Err(Error::Format(format!(
                    "data after terminal row at line {}",
                    lineno + 2
                )));
            }
            let fields = split_line(&line);
            if fields.len() != 10 {
                return Err(Error::Format(format!(
                    "expected 10 fields at line {}, got {}",
                    lineno + 2,
                    fields.len()
                )));
            }
            let t = parse_f64(fields[0], "t")?;
            let x = parse_f64(fields[1], "x")?;
            let y = parse_f64(fields[2], "y")?;
            traj.times.push(t);
            traj.states.push(Vec2::new(x, y));
            if fields[3].is_empty() {
                saw_terminal = true;
                continue;
            }
            traj.controls
                .push(Vec2::new(parse_f64(fields[3], "ux")?, parse_f64(fields[4], "uy")?));
            traj.inst_energy.push(parse_f64(fields[5], "inst_energy")?);
            let converged = match fields[9] {
                "true" => true,
                "false" => false,
                other => {
                    return Err(Error::Format(format!(
                        "expected true/false for converged, got {other:?}"
                    )))
                }
            };
            traj.horizons.as_mut().unwrap().push(StepSummary {
                j: parse_f64(fields[6], "J_pred")?,
                j_e: parse_f64(fields[7], "Je_pred")?,
                j_u: parse_f64(fields[8], "Ju_pred")?,
                iterations: 0,
                converged,
            });
        }
        if traj.states.is_empty() {
            return Err(Error::Format("trajectory file has no data rows".into()));
        }
        Ok(traj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::advect::advect_point;
    use crate::flowfield::{DoubleGyre, DoubleGyreParams, Uniform};

    fn null_field() -> DoubleGyre {
        DoubleGyre::new(DoubleGyreParams::new(0.0, 0.25, 1.0).unwrap())
    }

    fn icfg() -> IntegratorConfig {
        IntegratorConfig::default()
    }

    #[test]
    fn config_validation() {
        assert!(MpcConfig::default().validate().is_ok());
        let mut c = MpcConfig::default();
        c.horizon = 0.35; // not a multiple of dt
        assert!(c.validate().is_err());
        c = MpcConfig::default();
        c.q = 0.0;
        c.r = 0.0;
        c.q_terminal = 0.0;
        assert!(c.validate().is_err());
        c = MpcConfig::default();
        c.u_max = 0.0;
        assert!(c.validate().is_err());
        c = MpcConfig::default();
        c.dt = -0.1;
        assert!(c.validate().is_err());
        assert_eq!(MpcConfig::default().n_steps(), 40);
    }

    #[test]
    fn substep_counts() {
        assert_eq!(substeps(0.1, 0.01), (10, 0.01));
        let (m, h) = substeps(0.1, 0.03);
        assert_eq!(m, 4);
        assert!((h - 0.025).abs() < 1e-15);
        assert_eq!(substeps(0.05, 0.1).0, 1);
    }

    #[test]
    fn passive_rollout_matches_advect_point() {
        let g = DoubleGyre::default();
        let cfg = MpcConfig::default();
        let seq = ControlSequence::zeros(10, 0.0);
        let x0 = Vec2::new(1.2, 0.6);
        let states = rollout(&g, x0, &seq, &cfg, &icfg()).unwrap();
        let direct = advect_point(&g, x0, 0.0, 10.0 * cfg.dt, &icfg()).unwrap();
        assert!(
            (states[10] - direct).norm() < 1e-12,
            "controlled rollout with u = 0 drifted from the passive path"
        );
    }

    #[test]
    fn constant_control_in_null_field() {
        let cfg = MpcConfig::default();
        let seq = ControlSequence {
            u: vec![Vec2::new(0.1, 0.0); 10],
            t0: 0.0,
        };
        let states = rollout(&null_field(), Vec2::ZERO, &seq, &cfg, &icfg()).unwrap();
        assert!((states[10] - Vec2::new(0.1, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn alternating_control_returns_home() {
        let cfg = MpcConfig::default();
        let mut u = Vec::new();
        for k in 0..8 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            u.push(Vec2::new(0.1 * sign, 0.0));
        }
        let seq = ControlSequence { u, t0: 0.0 };
        let states = rollout(&null_field(), Vec2::ZERO, &seq, &cfg, &icfg()).unwrap();
        assert!(states[8].norm() < 1e-14);
    }

    #[test]
    fn cost_examples() {
        let cfg = MpcConfig {
            q: 1.0,
            r: 3.0,
            ..MpcConfig::default()
        };
        // At the goal with zero control the cost vanishes.
        let seq = ControlSequence::zeros(10, 0.0);
        let (j, je, ju) = cost(&null_field(), cfg.goal, &seq, &cfg, &icfg()).unwrap();
        assert!(j.abs() < 1e-15 && je.abs() < 1e-15 && ju.abs() < 1e-15);

        // Stationary offset of 0.5: J_e = 1 * 0.25 * (10 * 0.1) = 0.25.
        let (j, je, ju) =
            cost(&null_field(), Vec2::new(1.0, 0.5), &seq, &cfg, &icfg()).unwrap();
        assert!((je - 0.25).abs() < 1e-12);
        assert!(ju.abs() < 1e-15);
        assert!((j - 0.25).abs() < 1e-12);

        // Pure actuation: J_u = R * 10 * 0.01 * 0.1 with R = 1.
        let cfg_u = MpcConfig {
            q: 0.0,
            r: 1.0,
            q_terminal: 0.0,
            ..MpcConfig::default()
        };
        let seq = ControlSequence {
            u: vec![Vec2::new(0.1, 0.0); 10],
            t0: 0.0,
        };
        let (j, _, ju) = cost(&DoubleGyre::default(), Vec2::new(0.3, 0.3), &seq, &cfg_u, &icfg())
            .unwrap();
        assert!((ju - 0.01).abs() < 1e-15);
        assert!((j - 0.01).abs() < 1e-15);
    }

    #[test]
    fn terminal_weight_enters_total_only() {
        let cfg = MpcConfig {
            q: 0.0,
            r: 0.0,
            q_terminal: 2.0,
            ..MpcConfig::default()
        };
        let seq = ControlSequence::zeros(5, 0.0);
        let x0 = Vec2::new(1.5, 0.5);
        let (j, je, ju) = cost(&null_field(), x0, &seq, &cfg, &icfg()).unwrap();
        assert_eq!(je, 0.0);
        assert_eq!(ju, 0.0);
        assert!((j - 2.0 * (x0 - cfg.goal).norm_sq()).abs() < 1e-14);
    }

    #[test]
    fn shifted_sequence_duplicates_last() {
        let seq = ControlSequence {
            u: vec![Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0), Vec2::new(3.0, 0.0)],
            t0: 0.0,
        };
        let s = seq.shifted();
        assert_eq!(
            s.u,
            vec![Vec2::new(2.0, 0.0), Vec2::new(3.0, 0.0), Vec2::new(3.0, 0.0)]
        );
    }

    #[test]
    fn run_mpc_stays_at_goal_in_null_field() {
        let cfg = MpcConfig {
            horizon: 1.0,
            ..MpcConfig::default()
        };
        let traj = run_mpc(&null_field(), cfg.goal, 0.0, &cfg, &icfg(), 2.0).unwrap();
        assert_eq!(traj.len(), 20);
        assert_eq!(traj.states.len(), 21);
        assert_eq!(traj.times.len(), 21);
        for x in &traj.states {
            assert!((*x - cfg.goal).norm() < 1e-6);
        }
        for u in &traj.controls {
            assert!(u.norm() < 1e-5);
        }
        assert!((traj.times[20] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn run_mpc_rejects_short_duration() {
        let cfg = MpcConfig::default();
        assert!(run_mpc(&null_field(), Vec2::ZERO, 0.0, &cfg, &icfg(), 0.05).is_err());
    }

    #[test]
    fn trajectory_csv_round_trip() {
        let cfg = MpcConfig {
            horizon: 0.5,
            ..MpcConfig::default()
        };
        let traj = run_mpc(
            &Uniform::new(0.05, 0.0),
            Vec2::new(0.4, 0.5),
            0.0,
            &cfg,
            &icfg(),
            1.0,
        )
        .unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(TRAJECTORY_CSV_HEADER));
        let back = Trajectory::read_csv(&buf[..]).unwrap();
        assert_eq!(back.states.len(), traj.states.len());
        assert_eq!(back.controls.len(), traj.controls.len());
        for (a, b) in back.states.iter().zip(&traj.states) {
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a.y.to_bits(), b.y.to_bits());
        }
        for (a, b) in back.inst_energy.iter().zip(&traj.inst_energy) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        // Writing the parsed copy reproduces the bytes.
        let mut buf2 = Vec::new();
        back.write_csv(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn trajectory_csv_rejects_bad_schema() {
        let bad = "t,x,y\n0,1,2\n";
        assert!(Trajectory::read_csv(bad.as_bytes()).is_err());
        let bad2 = format!("{TRAJECTORY_CSV_HEADER}\n0,1\n");
        assert!(Trajectory::read_csv(bad2.as_bytes()).is_err());
        let empty = format!("{TRAJECTORY_CSV_HEADER}\n");
        assert!(Trajectory::read_csv(empty.as_bytes()).is_err());
    }
}
