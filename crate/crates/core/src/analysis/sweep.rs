//! Parameter sweeps over (T_H, R/Q, omega) and Pareto front extraction.
//!
//! Each tuple runs one closed-loop MPC trajectory with `Q = 1`,
//! `R = R/Q`, and the given gyre frequency, then integrates the
//! unweighted state error and actuation energy along the whole run.

use crate::advect::IntegratorConfig;
use crate::csvio::{fmt_f64, parse_f64, split_line};
use crate::error::{Error, Result};
use crate::flowfield::{DoubleGyre, DoubleGyreParams};
use crate::linalg::Vec2;
use crate::mpc::{run_mpc, MpcConfig};
use rayon::prelude::*;
use std::io::{BufRead, Write};

/// Value lists for the three swept parameters.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub horizons: Vec<f64>,
    pub r_over_q: Vec<f64>,
    pub omegas: Vec<f64>,
}

impl SweepGrid {
    fn validate(&self) -> Result<()> {
        if self.horizons.is_empty() || self.r_over_q.is_empty() || self.omegas.is_empty() {
            return Err(Error::InvalidParameter("sweep grid has an empty axis".into()));
        }
        if let Some(bad) = self.r_over_q.iter().find(|&&r| !(r > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "R/Q values must be > 0, got {bad} (run R/Q = 0 as a single plan instead)"
            )));
        }
        Ok(())
    }

    /// Tuples in deterministic order: horizons outermost, omegas innermost.
    pub fn tuples(&self) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.horizons.len() * self.r_over_q.len() * self.omegas.len());
        for &t_h in &self.horizons {
            for &rq in &self.r_over_q {
                for &om in &self.omegas {
                    out.push((t_h, rq, om));
                }
            }
        }
        out
    }
}

/// Outcome of one sweep tuple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub t_h: f64,
    pub r_over_q: f64,
    pub omega: f64,
    /// `sum |x - goal|^2 dt`, unweighted, over the whole run.
    pub total_state_error: f64,
    /// `sum u.u dt`, unweighted, over the whole run.
    pub total_energy: f64,
    pub weighted_j: f64,
    pub weighted_je: f64,
    pub weighted_ju: f64,
    pub converged_frac: f64,
    pub run_duration: f64,
    /// True when the tuple's run aborted; accumulators are NaN.
    pub failed: bool,
}

/// Runs one MPC trajectory per grid tuple. Failed tuples become failed
/// rows; the sweep continues. Records come back in deterministic tuple
/// order regardless of parallel scheduling.
pub fn sweep(
    base_params: &DoubleGyreParams,
    base_cfg: &MpcConfig,
    icfg: &IntegratorConfig,
    grid: &SweepGrid,
    x_start: Vec2,
    duration: f64,
) -> Result<Vec<SweepRecord>> {
    grid.validate()?;
    let tuples = grid.tuples();
    let records = tuples
        .par_iter()
        .map(|&(t_h, rq, om)| run_tuple(base_params, base_cfg, icfg, x_start, duration, t_h, rq, om))
        .collect::<Vec<_>>();
    Ok(records)
}

#[allow(clippy::too_many_arguments)]
fn run_tuple(
    base_params: &DoubleGyreParams,
    base_cfg: &MpcConfig,
    icfg: &IntegratorConfig,
    x_start: Vec2,
    duration: f64,
    t_h: f64,
    r_over_q: f64,
    omega: f64,
) -> SweepRecord {
    let failed = SweepRecord {
        t_h,
        r_over_q,
        omega,
        total_state_error: f64::NAN,
        total_energy: f64::NAN,
        weighted_j: f64::NAN,
        weighted_je: f64::NAN,
        weighted_ju: f64::NAN,
        converged_frac: 0.0,
        run_duration: duration,
        failed: true,
    };
    let params = match DoubleGyreParams::new(base_params.amplitude, base_params.epsilon, omega) {
        Ok(p) => p,
        Err(_) => return failed,
    };
    let cfg = MpcConfig {
        horizon: t_h,
        q: 1.0,
        r: r_over_q,
        ..*base_cfg
    };
    let field = DoubleGyre::new(params);
    match run_mpc(&field, x_start, 0.0, &cfg, icfg, duration) {
        Ok(traj) => {
            let total_state_error = traj.total_state_error(cfg.goal, cfg.dt);
            let total_energy = traj.total_energy(cfg.dt);
            SweepRecord {
                t_h,
                r_over_q,
                omega,
                total_state_error,
                total_energy,
                weighted_j: total_state_error + r_over_q * total_energy,
                weighted_je: total_state_error,
                weighted_ju: r_over_q * total_energy,
                converged_frac: traj.converged_fraction(),
                run_duration: duration,
                failed: false,
            }
        }
        Err(_) => failed,
    }
}

fn dominates(a: &SweepRecord, b: &SweepRecord) -> bool {
    a.total_energy <= b.total_energy
        && a.total_state_error <= b.total_state_error
        && (a.total_energy < b.total_energy || a.total_state_error < b.total_state_error)
}

/// Indices of the non-dominated records under simultaneous minimization
/// of `(total_energy, total_state_error)`. Ties are kept; failed or
/// non-finite rows never join the front.
pub fn pareto_front(records: &[SweepRecord]) -> Vec<usize> {
    let valid = |r: &SweepRecord| {
        !r.failed && r.total_energy.is_finite() && r.total_state_error.is_finite()
    };
    (0..records.len())
        .filter(|&i| {
            valid(&records[i])
                && !records.iter().enumerate().any(|(k, other)| {
                    k != i && valid(other) && dominates(other, &records[i])
                })
        })
        .collect()
}

/// Per-record Pareto membership, computed within each `(T_H, omega)`
/// group so each front compares runs that differ only in R/Q.
pub fn pareto_flags(records: &[SweepRecord]) -> Vec<bool> {
    let mut flags = vec![false; records.len()];
    let mut groups: Vec<(u64, u64, Vec<usize>)> = Vec::new();
    for (i, r) in records.iter().enumerate() {
        let key = (r.t_h.to_bits(), r.omega.to_bits());
        match groups.iter_mut().find(|(a, b, _)| (*a, *b) == key) {
            Some((_, _, members)) => members.push(i),
            None => groups.push((key.0, key.1, vec![i])),
        }
    }
    for (_, _, members) in groups {
        let subset: Vec<SweepRecord> = members.iter().map(|&i| records[i]).collect();
        for local in pareto_front(&subset) {
            flags[members[local]] = true;
        }
    }
    flags
}

pub const SWEEP_CSV_HEADER: &str =
    "T_H,R_over_Q,omega,total_state_error,total_energy,weighted_J,weighted_Je,weighted_Ju,converged_frac,pareto";

/// Writes records plus their Pareto flags.
pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], flags: &[bool], mut w: W) -> Result<()> {
    writeln!(w, "{SWEEP_CSV_HEADER}")?;
    for (r, &p) in records.iter().zip(flags) {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(r.t_h),
            fmt_f64(r.r_over_q),
            fmt_f64(r.omega),
            fmt_f64(r.total_state_error),
            fmt_f64(r.total_energy),
            fmt_f64(r.weighted_j),
            fmt_f64(r.weighted_je),
            fmt_f64(r.weighted_ju),
            fmt_f64(r.converged_frac),
            if p { "true" } else { "false" },
        )?;
    }
    Ok(())
}

/// Reads records back; the Pareto column is recomputed by callers and the
/// run duration is not persisted (reads back as NaN).
pub fn read_sweep_csv<R: BufRead>(r: R) -> Result<Vec<SweepRecord>> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty sweep file".into()))??;
    if header.trim_end() != SWEEP_CSV_HEADER {
        return Err(Error::Format(format!(
            "unexpected sweep header {header:?}, expected {SWEEP_CSV_HEADER:?}"
        )));
    }
    let mut out = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f = split_line(&line);
        if f.len() != 10 {
            return Err(Error::Format(format!(
                "expected 10 fields in sweep row, got {}",
                f.len()
            )));
        }
        let total_state_error = parse_f64(f[3], "total_state_error")?;
        let total_energy = parse_f64(f[4], "total_energy")?;
        out.push(SweepRecord {
            t_h: parse_f64(f[0], "T_H")?,
            r_over_q: parse_f64(f[1], "R_over_Q")?,
            omega: parse_f64(f[2], "omega")?,
            total_state_error,
            total_energy,
            weighted_j: parse_f64(f[5], "weighted_J")?,
            weighted_je: parse_f64(f[6], "weighted_Je")?,
            weighted_ju: parse_f64(f[7], "weighted_Ju")?,
            converged_frac: parse_f64(f[8], "converged_frac")?,
            run_duration: f64::NAN,
            failed: !total_state_error.is_finite() || !total_energy.is_finite(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(e: f64, err: f64) -> SweepRecord {
        SweepRecord {
            t_h: 4.0,
            r_over_q: 2.0,
            omega: 0.628,
            total_state_error: err,
            total_energy: e,
            weighted_j: err + 2.0 * e,
            weighted_je: err,
            weighted_ju: 2.0 * e,
            converged_frac: 1.0,
            run_duration: 60.0,
            failed: false,
        }
    }

    #[test]
    fn single_record_is_its_own_front() {
        let records = vec![record(1.0, 1.0)];
        assert_eq!(pareto_front(&records), vec![0]);
    }

    #[test]
    fn dominated_record_is_dropped() {
        let records = vec![record(1.0, 5.0), record(2.0, 2.0), record(3.0, 3.0)];
        assert_eq!(pareto_front(&records), vec![0, 1]);
    }

    #[test]
    fn identical_records_are_mutually_non_dominated() {
        let records = vec![record(2.0, 2.0); 4];
        assert_eq!(pareto_front(&records), vec![0, 1, 2, 3]);
    }

    #[test]
    fn failed_rows_never_join_the_front() {
        let mut bad = record(0.0, 0.0);
        bad.failed = true;
        bad.total_energy = f64::NAN;
        bad.total_state_error = f64::NAN;
        let records = vec![bad, record(1.0, 1.0)];
        assert_eq!(pareto_front(&records), vec![1]);
    }

    #[test]
    fn exhaustive_non_domination_property() {
        // Every kept record is dominated by nobody; every dropped record
        // is dominated by at least one kept record.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let records: Vec<SweepRecord> = (0..25)
                .map(|_| record(rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0)))
                .collect();
            let front = pareto_front(&records);
            for &i in &front {
                for &k in &front {
                    if i != k {
                        assert!(!dominates(&records[k], &records[i]));
                    }
                }
            }
            for i in 0..records.len() {
                if !front.contains(&i) {
                    assert!(
                        front.iter().any(|&k| dominates(&records[k], &records[i])),
                        "dropped record {i} is not dominated by the front"
                    );
                }
            }
        }
    }

    #[test]
    fn flags_group_by_horizon_and_omega() {
        // (3, 5) survives in the t_h = 2 group despite (1, 1) existing in
        // the t_h = 4 group; inside t_h = 4, (1, 1) dominates the rest.
        let mut a = record(3.0, 5.0);
        a.t_h = 2.0;
        let mut b = record(2.0, 2.0);
        b.t_h = 4.0;
        let mut c = record(3.0, 3.0);
        c.t_h = 4.0;
        let mut d = record(1.0, 1.0);
        d.t_h = 4.0;
        let records = vec![a, b, c, d];
        let flags = pareto_flags(&records);
        assert_eq!(flags, vec![true, false, false, true]);
    }

    #[test]
    fn grid_validation() {
        let grid = SweepGrid {
            horizons: vec![4.0],
            r_over_q: vec![0.0],
            omegas: vec![0.6],
        };
        assert!(grid.validate().is_err());
        let empty = SweepGrid {
            horizons: vec![],
            r_over_q: vec![1.0],
            omegas: vec![0.6],
        };
        assert!(empty.validate().is_err());
    }

    #[test]
    fn tuple_order_is_deterministic() {
        let grid = SweepGrid {
            horizons: vec![1.0, 2.0],
            r_over_q: vec![5.0, 10.0],
            omegas: vec![0.5],
        };
        let t = grid.tuples();
        assert_eq!(
            t,
            vec![
                (1.0, 5.0, 0.5),
                (1.0, 10.0, 0.5),
                (2.0, 5.0, 0.5),
                (2.0, 10.0, 0.5)
            ]
        );
    }

    #[test]
    fn csv_round_trip_preserves_bits() {
        let records = vec![record(1.0 / 3.0, std::f64::consts::PI), record(0.1, 0.2)];
        let flags = pareto_flags(&records);
        let mut buf = Vec::new();
        write_sweep_csv(&records, &flags, &mut buf).unwrap();
        let back = read_sweep_csv(&buf[..]).unwrap();
        assert_eq!(back.len(), 2);
        for (a, b) in back.iter().zip(&records) {
            assert_eq!(a.total_energy.to_bits(), b.total_energy.to_bits());
            assert_eq!(a.total_state_error.to_bits(), b.total_state_error.to_bits());
            assert_eq!(a.omega.to_bits(), b.omega.to_bits());
            assert!(!a.failed);
        }
        // A second write of the parsed records is byte-identical.
        let mut buf2 = Vec::new();
        write_sweep_csv(&back, &pareto_flags(&back), &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn sweep_runs_trivial_tuple() {
        use crate::flowfield::DoubleGyreParams;
        // Null field, start at the goal: both accumulators vanish.
        let params = DoubleGyreParams::new(0.0, 0.25, 0.5).unwrap();
        let cfg = MpcConfig {
            horizon: 1.0,
            ..MpcConfig::default()
        };
        let grid = SweepGrid {
            horizons: vec![1.0],
            r_over_q: vec![2.0],
            omegas: vec![0.5],
        };
        let records = sweep(
            &params,
            &cfg,
            &IntegratorConfig::default(),
            &grid,
            cfg.goal,
            2.0,
        )
        .unwrap();
        assert_eq!(records.len(), 1);
        let r = &records[0];
        assert!(!r.failed);
        assert!(r.total_state_error < 1e-9, "error {}", r.total_state_error);
        assert!(r.total_energy < 1e-9, "energy {}", r.total_energy);
        assert!((r.converged_frac - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_is_bitwise_deterministic() {
        use crate::flowfield::DoubleGyreParams;
        let params = DoubleGyreParams::default();
        let cfg = MpcConfig {
            horizon: 0.5,
            ..MpcConfig::default()
        };
        let grid = SweepGrid {
            horizons: vec![0.5],
            r_over_q: vec![2.0, 50.0],
            omegas: vec![2.0 * std::f64::consts::PI / 10.0],
        };
        let icfg = IntegratorConfig::default();
        let a = sweep(&params, &cfg, &icfg, &grid, Vec2::new(2.0, 1.0), 3.0).unwrap();
        let b = sweep(&params, &cfg, &icfg, &grid, Vec2::new(2.0, 1.0), 3.0).unwrap();
        for (ra, rb) in a.iter().zip(&b) {
            assert_eq!(ra.total_energy.to_bits(), rb.total_energy.to_bits());
            assert_eq!(
                ra.total_state_error.to_bits(),
                rb.total_state_error.to_bits()
            );
            assert_eq!(ra.weighted_j.to_bits(), rb.weighted_j.to_bits());
        }
    }
}
