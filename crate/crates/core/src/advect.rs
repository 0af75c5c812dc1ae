//! Numerical advection of drifters through a flow field.
//!
//! Fixed-step classical RK4 on `dx/dt = v(x, t)`; backward-time advection
//! uses a negative step so the unsteady field keeps the correct time
//! argument. Grid advection produces the flow map used by the FTLE
//! pipeline.

use crate::error::{Error, Result};
use crate::flowfield::FlowField;
use crate::linalg::Vec2;
use rayon::prelude::*;

/// Integration scheme identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Classical 4th-order Runge-Kutta.
    #[default]
    Rk4,
}

/// Fixed-step integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// Internal integration step, > 0. The sign of travel comes from the
    /// horizon, never from this value.
    pub dt_int: f64,
    pub scheme: Scheme,
}

impl IntegratorConfig {
    pub fn new(dt_int: f64) -> Result<Self> {
        if !(dt_int.is_finite() && dt_int > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dt_int must be finite and > 0, got {dt_int}"
            )));
        }
        Ok(IntegratorConfig {
            dt_int,
            scheme: Scheme::Rk4,
        })
    }
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            dt_int: 0.01,
            scheme: Scheme::Rk4,
        }
    }
}

/// A uniform rectangular grid of drifter seed points.
///
/// Node `(i, j)` sits at `(x_min + i dx, y_min + j dy)`; storage order is
/// row-major in `j` then `i` (index `j * nx + i`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(Error::InvalidParameter(format!(
                "grid needs nx >= 3 and ny >= 3 for central differences, got {nx} x {ny}"
            )));
        }
        if !(x_max > x_min && y_max > y_min) {
            return Err(Error::InvalidParameter(format!(
                "grid bounds must be increasing, got x [{x_min}, {x_max}], y [{y_min}, {y_max}]"
            )));
        }
        if ![x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteInput("grid bounds".into()));
        }
        Ok(GridSpec {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    pub fn node_count(&self) -> usize {
        self.nx * self.ny
    }

    pub fn node_pos(&self, i: usize, j: usize) -> Vec2 {
        Vec2::new(
            self.x_min + i as f64 * self.dx(),
            self.y_min + j as f64 * self.dy(),
        )
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        i >= 1 && i + 1 < self.nx && j >= 1 && j + 1 < self.ny
    }
}

/// Advected node positions for a whole grid: the discrete flow map
/// from `t0` to `t0 + horizon`.
#[derive(Debug, Clone)]
pub struct FlowMapGrid {
    pub spec: GridSpec,
    pub t0: f64,
    /// Signed advection horizon; negative for backward maps.
    pub horizon: f64,
    /// One mapped position per node, indexed by `spec.index(i, j)`.
    pub positions: Vec<Vec2>,
}

impl FlowMapGrid {
    pub fn position(&self, i: usize, j: usize) -> Vec2 {
        self.positions[self.spec.index(i, j)]
    }
}

/// One RK4 update of `dx/dt = v(x, t)` over a signed step `dt`.
pub fn step<F: FlowField + ?Sized>(field: &F, x: Vec2, t: f64, dt: f64) -> Result<Vec2> {
    let k1 = field.velocity(x, t);
    let k2 = field.velocity(x + k1 * (dt * 0.5), t + dt * 0.5);
    let k3 = field.velocity(x + k2 * (dt * 0.5), t + dt * 0.5);
    let k4 = field.velocity(x + k3 * dt, t + dt);
    let next = x + (k1 + (k2 + k3) * 2.0 + k4) * (dt / 6.0);
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::Integration { x, t })
    }
}

/// Advects a point from `t0` to exactly `t0 + horizon`.
///
/// Whole steps of `cfg.dt_int` (signed by the horizon) are followed by one
/// partial step covering the remainder.
pub fn advect_point<F: FlowField + ?Sized>(
    field: &F,
    x0: Vec2,
    t0: f64,
    horizon: f64,
    cfg: &IntegratorConfig,
) -> Result<Vec2> {
    if horizon.abs() < cfg.dt_int {
        return Err(Error::InvalidParameter(format!(
            "|horizon| = {} is smaller than dt_int = {}",
            horizon.abs(),
            cfg.dt_int
        )));
    }
    let h = cfg.dt_int.copysign(horizon);
    let n_full = (horizon.abs() / cfg.dt_int).floor() as usize;
    let mut x = x0;
    for k in 0..n_full {
        let t = t0 + k as f64 * h;
        x = step(field, x, t, h)?;
    }
    let t_last = t0 + n_full as f64 * h;
    let remainder = (t0 + horizon) - t_last;
    if remainder != 0.0 {
        x = step(field, x, t_last, remainder)?;
    }
    Ok(x)
}

/// Advects every grid node independently; node order is preserved and the
/// result is deterministic regardless of parallel scheduling.
pub fn flow_map<F: FlowField + ?Sized>(
    field: &F,
    spec: &GridSpec,
    t0: f64,
    horizon: f64,
    cfg: &IntegratorConfig,
) -> Result<FlowMapGrid> {
    if horizon == 0.0 || !horizon.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "advection horizon must be finite and nonzero, got {horizon}"
        )));
    }
    let positions: Vec<Vec2> = (0..spec.node_count())
        .into_par_iter()
        .map(|idx| {
            let i = idx % spec.nx;
            let j = idx / spec.nx;
            advect_point(field, spec.node_pos(i, j), t0, horizon, cfg).map_err(|e| {
                Error::FlowMapNode {
                    i,
                    j,
                    source: Box::new(e),
                }
            })
        })
        .collect::<Result<_>>()?;
    Ok(FlowMapGrid {
        spec: *spec,
        t0,
        horizon,
        positions,
    })
}
