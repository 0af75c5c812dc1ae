//! Histograms of sensor actuation against the background flow sampled
//! along the trajectory: magnitudes, headings, and per-axis components.

use crate::error::{Error, Result};
use crate::flowfield::FlowField;
use crate::linalg::Vec2;
use crate::mpc::Trajectory;

pub const DEFAULT_BINS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HistQuantity {
    /// `|u|` against `|v|`.
    Magnitude,
    /// Orientation of `dx/dt = v + u` against the orientation of `v`.
    Heading,
    /// `u_x` against `v_x`.
    ComponentX,
    /// `u_y` against `v_y`.
    ComponentY,
}

impl HistQuantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            HistQuantity::Magnitude => "magnitude",
            HistQuantity::Heading => "heading",
            HistQuantity::ComponentX => "component_x",
            HistQuantity::ComponentY => "component_y",
        }
    }
}

/// Sensor and flow counts over a shared binning of one quantity.
#[derive(Debug, Clone)]
pub struct HistogramPair {
    pub quantity: HistQuantity,
    /// Bin centers; all bins share one width.
    pub bins: Vec<f64>,
    pub sensor_counts: Vec<usize>,
    pub flow_counts: Vec<usize>,
}

fn histogram(values: &[f64], lo: f64, hi: f64, n_bins: usize) -> Vec<usize> {
    let mut counts = vec![0usize; n_bins];
    let width = hi - lo;
    for &v in values {
        let idx = if width > 0.0 {
            (((v - lo) / width) * n_bins as f64).floor() as isize
        } else {
            0
        };
        counts[idx.clamp(0, n_bins as isize - 1) as usize] += 1;
    }
    counts
}

fn centers(lo: f64, hi: f64, n_bins: usize) -> Vec<f64> {
    let width = if hi > lo { (hi - lo) / n_bins as f64 } else { 0.0 };
    (0..n_bins)
        .map(|k| lo + (k as f64 + 0.5) * width)
        .collect()
}

fn pair(
    quantity: HistQuantity,
    sensor: &[f64],
    flow: &[f64],
    lo: f64,
    hi: f64,
    n_bins: usize,
) -> HistogramPair {
    HistogramPair {
        quantity,
        bins: centers(lo, hi, n_bins),
        sensor_counts: histogram(sensor, lo, hi, n_bins),
        flow_counts: histogram(flow, lo, hi, n_bins),
    }
}

/// Builds the four histogram pairs for a trajectory. The flow series is
/// the background velocity evaluated at the sensor's space-time samples.
pub fn control_histograms<F: FlowField + ?Sized>(
    traj: &Trajectory,
    field: &F,
) -> Result<Vec<HistogramPair>> {
    control_histograms_binned(traj, field, DEFAULT_BINS)
}

pub fn control_histograms_binned<F: FlowField + ?Sized>(
    traj: &Trajectory,
    field: &F,
    n_bins: usize,
) -> Result<Vec<HistogramPair>> {
    if traj.controls.is_empty() {
        return Err(Error::OutOfRange("trajectory has no control samples".into()));
    }
    if n_bins == 0 {
        return Err(Error::InvalidParameter("need at least one bin".into()));
    }
    let n = traj.controls.len();
    let flow: Vec<Vec2> = (0..n)
        .map(|k| field.velocity(traj.states[k], traj.times[k]))
        .collect();
    let u = &traj.controls;

    let u_mag: Vec<f64> = u.iter().map(|u| u.norm()).collect();
    let v_mag: Vec<f64> = flow.iter().map(|v| v.norm()).collect();
    let mag_hi = u_mag
        .iter()
        .chain(&v_mag)
        .fold(0.0f64, |acc, &m| acc.max(m));

    let sensor_heading: Vec<f64> = u
        .iter()
        .zip(&flow)
        .map(|(u, v)| (*v + *u).heading())
        .collect();
    let flow_heading: Vec<f64> = flow.iter().map(|v| v.heading()).collect();

    let ux: Vec<f64> = u.iter().map(|u| u.x).collect();
    let uy: Vec<f64> = u.iter().map(|u| u.y).collect();
    let vx: Vec<f64> = flow.iter().map(|v| v.x).collect();
    let vy: Vec<f64> = flow.iter().map(|v| v.y).collect();
    let comp_bound = |a: &[f64], b: &[f64]| {
        a.iter()
            .chain(b)
            .fold(0.0f64, |acc, &c| acc.max(c.abs()))
    };
    let bx = comp_bound(&ux, &vx);
    let by = comp_bound(&uy, &vy);

    use std::f64::consts::PI;
    Ok(vec![
        pair(HistQuantity::Magnitude, &u_mag, &v_mag, 0.0, mag_hi, n_bins),
        pair(
            HistQuantity::Heading,
            &sensor_heading,
            &flow_heading,
            -PI,
            PI,
            n_bins,
        ),
        pair(HistQuantity::ComponentX, &ux, &vx, -bx, bx, n_bins),
        pair(HistQuantity::ComponentY, &uy, &vy, -by, by, n_bins),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flowfield::Uniform;

    fn traj_with_controls(controls: Vec<Vec2>) -> Trajectory {
        let n = controls.len();
        Trajectory {
            times: (0..=n).map(|k| k as f64 * 0.1).collect(),
            states: vec![Vec2::new(0.5, 0.5); n + 1],
            inst_energy: controls.iter().map(|u| u.norm_sq()).collect(),
            controls,
            horizons: None,
        }
    }

    #[test]
    fn zero_control_is_a_spike_at_zero() {
        let traj = traj_with_controls(vec![Vec2::ZERO; 50]);
        let field = Uniform::new(0.2, 0.0);
        let hists = control_histograms(&traj, &field).unwrap();
        let mag = &hists[0];
        assert_eq!(mag.quantity, HistQuantity::Magnitude);
        assert_eq!(mag.sensor_counts[0], 50);
        assert_eq!(mag.sensor_counts.iter().sum::<usize>(), 50);
        // Flow magnitude 0.2 lands in the top bin of [0, 0.2].
        assert_eq!(*mag.flow_counts.last().unwrap(), 50);
    }

    #[test]
    fn constant_control_in_null_field_spikes_heading_zero() {
        let traj = traj_with_controls(vec![Vec2::new(0.1, 0.0); 40]);
        let field = Uniform::new(0.0, 0.0);
        let hists = control_histograms(&traj, &field).unwrap();
        let heading = &hists[1];
        // dx/dt = u points along +x: all mass in the bin containing 0.
        let n_bins = heading.bins.len();
        let zero_bin = ((0.0 - (-std::f64::consts::PI)) / (2.0 * std::f64::consts::PI)
            * n_bins as f64)
            .floor() as usize;
        assert_eq!(heading.sensor_counts[zero_bin], 40);
        assert_eq!(heading.sensor_counts.iter().sum::<usize>(), 40);
        let mag = &hists[0];
        assert_eq!(*mag.sensor_counts.last().unwrap(), 40); // spike at 0.1 = max
    }

    #[test]
    fn mass_is_conserved_for_every_series() {
        let controls: Vec<Vec2> = (0..77)
            .map(|k| Vec2::new(0.1 * ((k % 5) as f64 - 2.0) / 2.0, 0.05))
            .collect();
        let traj = traj_with_controls(controls);
        let field = Uniform::new(0.1, -0.3);
        for h in control_histograms(&traj, &field).unwrap() {
            assert_eq!(h.sensor_counts.iter().sum::<usize>(), 77, "{:?}", h.quantity);
            assert_eq!(h.flow_counts.iter().sum::<usize>(), 77, "{:?}", h.quantity);
            assert_eq!(h.bins.len(), DEFAULT_BINS);
        }
    }

    #[test]
    fn component_bins_are_symmetric() {
        let traj = traj_with_controls(vec![Vec2::new(0.1, -0.1); 10]);
        let field = Uniform::new(0.0, 0.0);
        let hists = control_histograms(&traj, &field).unwrap();
        let cx = &hists[2];
        let first = cx.bins.first().unwrap();
        let last = cx.bins.last().unwrap();
        assert!((first + last).abs() < 1e-12, "bins should straddle zero");
    }

    #[test]
    fn empty_trajectory_is_rejected() {
        let traj = traj_with_controls(vec![]);
        assert!(control_histograms(&traj, &Uniform::new(0.0, 0.0)).is_err());
    }
}
