//! Stroboscopic detection of periodic orbits around the goal.
//!
//! The background forcing period is known, so candidate orbit periods are
//! its small integer multiples: the trajectory is sampled at multiples of
//! each candidate and declared periodic when consecutive samples stop
//! moving (within 0.02) over the final third of the run.

use crate::linalg::Vec2;
use crate::mpc::Trajectory;

/// Consecutive stroboscopic samples closer than this count as recurrent.
const RECURRENCE_TOL: f64 = 0.02;
/// Candidate periods are `m * ref_period` for `m` in `1..=MAX_MULTIPLE`.
const MAX_MULTIPLE: usize = 3;

#[derive(Debug, Clone, Copy)]
pub struct OrbitSummary {
    pub is_periodic: bool,
    /// Detected period; NaN when not periodic.
    pub period: f64,
    /// Mean distance to the goal over the final detected period (or the
    /// final `ref_period` window when not periodic).
    pub mean_radius: f64,
    /// Time the recurrent regime begins; NaN when not periodic.
    pub onset_time: f64,
}

fn state_at(traj: &Trajectory, t: f64) -> Vec2 {
    let times = &traj.times;
    match times.binary_search_by(|probe| probe.total_cmp(&t)) {
        Ok(k) => traj.states[k],
        Err(k) => {
            if k == 0 {
                traj.states[0]
            } else if k >= times.len() {
                *traj.states.last().unwrap()
            } else {
                let (t0, t1) = (times[k - 1], times[k]);
                let w = (t - t0) / (t1 - t0);
                traj.states[k - 1] * (1.0 - w) + traj.states[k] * w
            }
        }
    }
}

fn mean_radius_over(traj: &Trajectory, goal: Vec2, t_from: f64) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for (t, x) in traj.times.iter().zip(&traj.states) {
        if *t >= t_from {
            sum += (*x - goal).norm();
            count += 1;
        }
    }
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

/// Detects a goal-centered periodic orbit synchronized with (a small
/// multiple of) `ref_period`.
///
/// Trajectories shorter than `3 * ref_period` are reported non-periodic
/// rather than rejected: a no-detection is always a valid summary.
pub fn detect_orbit(traj: &Trajectory, goal: Vec2, ref_period: f64) -> OrbitSummary {
    let not_periodic = |traj: &Trajectory| OrbitSummary {
        is_periodic: false,
        period: f64::NAN,
        mean_radius: mean_radius_over(
            traj,
            goal,
            traj.times.last().copied().unwrap_or(0.0) - ref_period,
        ),
        onset_time: f64::NAN,
    };
    if traj.states.len() < 2 || !(ref_period.is_finite() && ref_period > 0.0) {
        return OrbitSummary {
            is_periodic: false,
            period: f64::NAN,
            mean_radius: f64::NAN,
            onset_time: f64::NAN,
        };
    }
    let t_start = traj.times[0];
    let t_end = *traj.times.last().unwrap();
    let span = t_end - t_start;
    if span < 3.0 * ref_period {
        return not_periodic(traj);
    }

    for m in 1..=MAX_MULTIPLE {
        let period = m as f64 * ref_period;
        let n_samples = (span / period).floor() as usize;
        if n_samples < 2 {
            break;
        }
        let samples: Vec<Vec2> = (0..=n_samples)
            .map(|j| state_at(traj, t_start + j as f64 * period))
            .collect();
        let diff_ok: Vec<bool> = samples
            .windows(2)
            .map(|w| (w[1] - w[0]).norm() < RECURRENCE_TOL)
            .collect();

        // All strobe intervals lying in the final third must be recurrent.
        let final_third = t_start + 2.0 * span / 3.0;
        let mut checked = 0usize;
        let mut final_ok = true;
        for (j, ok) in diff_ok.iter().enumerate() {
            if t_start + j as f64 * period >= final_third {
                checked += 1;
                final_ok &= ok;
            }
        }
        if checked == 0 || !final_ok {
            continue;
        }

        // Earliest sample from which every later interval is recurrent.
        let mut onset_idx = diff_ok.len();
        for j in (0..diff_ok.len()).rev() {
            if diff_ok[j] {
                onset_idx = j;
            } else {
                break;
            }
        }
        let onset_time = t_start + onset_idx as f64 * period;
        if onset_time < t_end - 2.0 * period {
            return OrbitSummary {
                is_periodic: true,
                period,
                mean_radius: mean_radius_over(traj, goal, t_end - period),
                onset_time,
            };
        }
    }
    not_periodic(traj)
}
