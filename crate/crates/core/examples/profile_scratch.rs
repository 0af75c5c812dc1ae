// Scratch diagnostic: closed-loop MPC behavior at the canonical settings.
use flowplan_core::advect::IntegratorConfig;
use flowplan_core::flowfield::DoubleGyre;
use flowplan_core::linalg::Vec2;
use flowplan_core::mpc::{run_mpc, MpcConfig};

fn main() {
    let field = DoubleGyre::default();
    let icfg = IntegratorConfig::default();
    let start = Vec2::new(2.0, 1.0);
    let goal = Vec2::new(0.5, 0.5);

    for rq in [1.0, 2.0, 5.0, 10.0, 25.0, 50.0, 100.0] {
        let cfg = MpcConfig {
            horizon: 4.0,
            q: 1.0,
            r: rq,
            ..MpcConfig::default()
        };
        let t0 = std::time::Instant::now();
        let traj = run_mpc(&field, start, 0.0, &cfg, &icfg, 60.0).unwrap();
        let wall = t0.elapsed().as_secs_f64();
        let energy = traj.total_energy(cfg.dt);
        let last_period_max = traj
            .times
            .iter()
            .zip(&traj.states)
            .filter(|(t, _)| **t >= 50.0)
            .map(|(_, x)| (*x - goal).norm())
            .fold(0.0f64, f64::max);
        let iters: Vec<usize> = traj
            .horizons
            .as_ref()
            .unwrap()
            .iter()
            .map(|h| h.iterations)
            .collect();
        let mut sorted = iters.clone();
        sorted.sort_unstable();
        let conv = traj.converged_fraction();
        println!(
            "R/Q={rq:>5}: energy={energy:.4} maxdist[50,60]={last_period_max:.3} conv={conv:.2} med_iters={} wall={wall:.1}s",
            sorted[sorted.len() / 2]
        );
    }

    // Warm vs cold at T_H = 12 over 25 steps.
    for warm in [true, false] {
        let cfg = MpcConfig {
            horizon: 12.0,
            q: 1.0,
            r: 2.0,
            warm_start: warm,
            ..MpcConfig::default()
        };
        let t0 = std::time::Instant::now();
        let traj = run_mpc(&field, start, 0.0, &cfg, &icfg, 2.5).unwrap();
        let wall = t0.elapsed().as_secs_f64();
        let mut iters: Vec<usize> = traj
            .horizons
            .as_ref()
            .unwrap()
            .iter()
            .map(|h| h.iterations)
            .collect();
        iters.sort_unstable();
        println!(
            "T_H=12 warm={warm}: median iters={} max={} wall={wall:.1}s",
            iters[iters.len() / 2],
            iters.last().unwrap()
        );
    }
}
