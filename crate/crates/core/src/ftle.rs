//! Finite-time Lyapunov exponent fields.
//!
//! From a flow-map grid: central-difference Jacobian per interior node,
//! Cauchy-Green tensor `D^T D`, and the exponent
//!
//! ```text
//! sigma = ln(sqrt(lambda_max)) / |T|
//! ```
//!
//! which equals `ln(s_max) / |T|` with `s_max` the largest singular value
//! of the Jacobian; both routes are exposed and cross-checked in tests.
//! Ridges (candidate transport barriers) are reported as point sets:
//! high-quantile nodes whose sigma-Hessian bends downward transverse to
//! the local gradient direction.

use crate::advect::{flow_map, FlowMapGrid, GridSpec, IntegratorConfig};
use crate::error::{Error, Result};
use crate::flowfield::FlowField;
use crate::linalg::{Mat2, Vec2};
use std::io::Write;

/// Advection direction of the underlying flow map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `T > 0`; ridges repel nearby drifters.
    Forward,
    /// `T < 0`; ridges attract nearby drifters.
    Backward,
}

impl Direction {
    pub fn from_horizon(horizon: f64) -> Direction {
        if horizon > 0.0 {
            Direction::Forward
        } else {
            Direction::Backward
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        }
    }
}

/// A scalar FTLE field on the interior nodes of a grid.
///
/// Boundary nodes have no central difference and carry `None`.
#[derive(Debug, Clone)]
pub struct FtleField {
    pub spec: GridSpec,
    pub t0: f64,
    /// Signed advection horizon of the flow map.
    pub horizon: f64,
    pub direction: Direction,
    /// Indexed by `spec.index(i, j)`; `None` on the boundary.
    pub sigma: Vec<Option<f64>>,
}

/// A ridge reported as a set of high-sigma, ridge-curved grid points.
#[derive(Debug, Clone)]
pub struct RidgeSet {
    pub points: Vec<RidgePoint>,
    /// The sigma cutoff that was applied.
    pub threshold: f64,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RidgePoint {
    pub x: f64,
    pub y: f64,
    pub sigma: f64,
}

/// Central-difference flow-map Jacobian at an interior node: differences
/// of mapped neighbor positions over differences of seed positions.
pub fn jacobian(map: &FlowMapGrid, i: usize, j: usize) -> Result<Mat2> {
    let spec = &map.spec;
    if !spec.is_interior(i, j) {
        return Err(Error::OutOfRange(format!(
            "jacobian needs an interior node, got ({i}, {j}) on a {} x {} grid",
            spec.nx, spec.ny
        )));
    }
    let xp = map.position(i + 1, j);
    let xm = map.position(i - 1, j);
    let yp = map.position(i, j + 1);
    let ym = map.position(i, j - 1);
    let denom_x = spec.node_pos(i + 1, j).x - spec.node_pos(i - 1, j).x;
    let denom_y = spec.node_pos(i, j + 1).y - spec.node_pos(i, j - 1).y;
    Ok(Mat2::new(
        (xp.x - xm.x) / denom_x,
        (yp.x - ym.x) / denom_y,
        (xp.y - xm.y) / denom_x,
        (yp.y - ym.y) / denom_y,
    ))
}

/// Exponent from the Cauchy-Green route: `ln(lambda_max(D^T D)) / (2|T|)`.
pub fn sigma_from_jacobian(d_phi: Mat2, horizon: f64) -> Result<f64> {
    let lambda_max = d_phi.gram().sym_eig_max();
    if !(lambda_max.is_finite() && lambda_max > 0.0) {
        return Err(Error::Numeric(format!(
            "degenerate Cauchy-Green tensor: lambda_max = {lambda_max}"
        )));
    }
    Ok(lambda_max.ln() / (2.0 * horizon.abs()))
}

/// Exponent from the SVD route: `ln(s_max(D)) / |T|`.
pub fn sigma_from_svd(d_phi: Mat2, horizon: f64) -> Result<f64> {
    let s_max = d_phi.singular_value_max();
    if !(s_max.is_finite() && s_max > 0.0) {
        return Err(Error::Numeric(format!(
            "degenerate flow-map Jacobian: largest singular value = {s_max}"
        )));
    }
    Ok(s_max.ln() / horizon.abs())
}

/// Computes the FTLE field of `field` on `spec`, advecting from `t0` over
/// the signed horizon.
pub fn ftle_field<F: FlowField + ?Sized>(
    field: &F,
    spec: &GridSpec,
    t0: f64,
    horizon: f64,
    cfg: &IntegratorConfig,
) -> Result<FtleField> {
    let map = flow_map(field, spec, t0, horizon, cfg)?;
    ftle_from_flow_map(&map)
}

/// FTLE from an already-computed flow map.
pub fn ftle_from_flow_map(map: &FlowMapGrid) -> Result<FtleField> {
    let spec = map.spec;
    let mut sigma = vec![None; spec.node_count()];
    for j in 1..spec.ny - 1 {
        for i in 1..spec.nx - 1 {
            let d_phi = jacobian(map, i, j)?;
            sigma[spec.index(i, j)] = Some(sigma_from_jacobian(d_phi, map.horizon)?);
        }
    }
    Ok(FtleField {
        spec,
        t0: map.t0,
        horizon: map.horizon,
        direction: Direction::from_horizon(map.horizon),
        sigma,
    })
}

impl FtleField {
    pub fn value(&self, i: usize, j: usize) -> Option<f64> {
        self.sigma[self.spec.index(i, j)]
    }

    /// All defined (interior) sigma values, in storage order.
    pub fn defined_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.sigma.iter().filter_map(|v| *v)
    }

    /// Linear-interpolated quantile of the defined sigma values.
    pub fn sigma_quantile(&self, q: f64) -> Result<f64> {
        if !(0.0 < q && q < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "quantile must lie in (0, 1), got {q}"
            )));
        }
        let mut vals: Vec<f64> = self.defined_values().collect();
        if vals.is_empty() {
            return Err(Error::OutOfRange("field has no defined nodes".into()));
        }
        vals.sort_by(|a, b| a.total_cmp(b));
        let pos = q * (vals.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let frac = pos - lo as f64;
        Ok(vals[lo] * (1.0 - frac) + vals[hi] * frac)
    }

    /// Bilinear interpolation of sigma at a point inside the defined
    /// (interior-node) region.
    pub fn sigma_at(&self, x: Vec2) -> Result<f64> {
        let spec = &self.spec;
        let (dx, dy) = (spec.dx(), spec.dy());
        // Defined region spans nodes 1 .. n-2 on each axis.
        let x_lo = spec.x_min + dx;
        let x_hi = spec.x_max - dx;
        let y_lo = spec.y_min + dy;
        let y_hi = spec.y_max - dy;
        if !(x.x >= x_lo && x.x <= x_hi && x.y >= y_lo && x.y <= y_hi) {
            return Err(Error::OutOfRange(format!(
                "({}, {}) lies outside the defined region [{x_lo}, {x_hi}] x [{y_lo}, {y_hi}]",
                x.x, x.y
            )));
        }
        let u = (x.x - spec.x_min) / dx;
        let v = (x.y - spec.y_min) / dy;
        let i0 = (u.floor() as usize).clamp(1, spec.nx - 3);
        let j0 = (v.floor() as usize).clamp(1, spec.ny - 3);
        let fu = u - i0 as f64;
        let fv = v - j0 as f64;
        let grab = |i: usize, j: usize| -> Result<f64> {
            self.value(i, j).ok_or_else(|| {
                Error::OutOfRange(format!("node ({i}, {j}) has no defined sigma"))
            })
        };
        let s00 = grab(i0, j0)?;
        let s10 = grab(i0 + 1, j0)?;
        let s01 = grab(i0, j0 + 1)?;
        let s11 = grab(i0 + 1, j0 + 1)?;
        Ok(s00 * (1.0 - fu) * (1.0 - fv)
            + s10 * fu * (1.0 - fv)
            + s01 * (1.0 - fu) * fv
            + s11 * fu * fv)
    }

    /// Writes the field as CSV: header `x,y,sigma,direction,t0,T`, one row
    /// per defined node, row-major in `j` then `i`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        use crate::csvio::fmt_f64;
        writeln!(w, "x,y,sigma,direction,t0,T")?;
        for j in 0..self.spec.ny {
            for i in 0..self.spec.nx {
                if let Some(s) = self.value(i, j) {
                    let p = self.spec.node_pos(i, j);
                    writeln!(
                        w,
                        "{},{},{},{},{},{}",
                        fmt_f64(p.x),
                        fmt_f64(p.y),
                        fmt_f64(s),
                        self.direction.as_str(),
                        fmt_f64(self.t0),
                        fmt_f64(self.horizon)
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// Quantile threshold plus curvature test: keeps nodes where sigma is at
/// or above the requested quantile and the sigma-Hessian has a negative
/// smaller eigenvalue whose eigenvector is close to orthogonal to the
/// local sigma gradient.
pub fn extract_ridges(f: &FtleField, quantile: f64) -> Result<RidgeSet> {
    let spec = &f.spec;
    if spec.nx < 5 || spec.ny < 5 {
        return Err(Error::OutOfRange(format!(
            "ridge extraction needs at least 3 x 3 defined interior nodes, grid is {} x {}",
            spec.nx, spec.ny
        )));
    }
    let threshold = f.sigma_quantile(quantile)?;
    let dx = spec.dx();
    let dy = spec.dy();
    // Transverse direction must be within ~15 degrees of gradient-orthogonal.
    let align_tol = (15.0f64).to_radians().sin();
    let mut points = Vec::new();
    for j in 2..spec.ny - 2 {
        for i in 2..spec.nx - 2 {
            let s = |di: isize, dj: isize| {
                f.value((i as isize + di) as usize, (j as isize + dj) as usize)
            };
            let (Some(c), Some(xp), Some(xm), Some(yp), Some(ym)) =
                (s(0, 0), s(1, 0), s(-1, 0), s(0, 1), s(0, -1))
            else {
                continue;
            };
            if c < threshold {
                continue;
            }
            let (Some(pp), Some(pm), Some(mp), Some(mm)) = (s(1, 1), s(1, -1), s(-1, 1), s(-1, -1))
            else {
                continue;
            };
            let sxx = (xp - 2.0 * c + xm) / (dx * dx);
            let syy = (yp - 2.0 * c + ym) / (dy * dy);
            let sxy = (pp - pm - mp + mm) / (4.0 * dx * dy);
            let hess = Mat2::new(sxx, sxy, sxy, syy);
            let lam_min = hess.sym_eig_min();
            if lam_min >= 0.0 {
                continue;
            }
            let grad = Vec2::new((xp - xm) / (2.0 * dx), (yp - ym) / (2.0 * dy));
            let gnorm = grad.norm();
            if gnorm > 1e-12 {
                let transverse = hess.sym_eigvec(lam_min);
                if (transverse.dot(grad) / gnorm).abs() > align_tol {
                    continue;
                }
            }
            let p = spec.node_pos(i, j);
            points.push(RidgePoint {
                x: p.x,
                y: p.y,
                sigma: c,
            });
        }
    }
    Ok(RidgeSet {
        points,
        threshold,
        direction: f.direction,
    })
}

/// Bilinear sigma lookup; thin named wrapper over [`FtleField::sigma_at`].
pub fn ftle_at(f: &FtleField, x: Vec2) -> Result<f64> {
    f.sigma_at(x)
}
