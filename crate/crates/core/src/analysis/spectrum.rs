//! Discrete spectrum of the instantaneous-energy series.
//!
//! The post-transient series is mean-removed and transformed; magnitudes
//! are scaled so that the squared magnitudes over the nonnegative bins
//! sum to the series variance (RMS amplitude per bin). Peaks are the
//! interior local maxima above the median magnitude, strongest first.

use crate::error::{Error, Result};
use crate::mpc::Trajectory;
use rustfft::{num_complex::Complex, FftPlanner};

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Bin centers in rad per time unit, strictly increasing from 0.
    pub freqs: Vec<f64>,
    /// Per-bin amplitude (RMS scaling; see module docs).
    pub magnitude: Vec<f64>,
    /// Frequencies of local maxima above the median, sorted by magnitude
    /// descending.
    pub peaks: Vec<f64>,
}

/// Spectrum of `inst_energy` sampled at the trajectory's control step,
/// after discarding the first `discard` time units.
pub fn energy_spectrum(traj: &Trajectory, discard: f64) -> Result<SpectrumResult> {
    if traj.controls.len() < 2 {
        return Err(Error::OutOfRange(
            "trajectory too short for a spectrum".into(),
        ));
    }
    if !(discard.is_finite() && discard >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "discard must be finite and >= 0, got {discard}"
        )));
    }
    let dt = traj.times[1] - traj.times[0];
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "trajectory sample step must be positive, got {dt}"
        )));
    }
    let t_first = traj.times[0] + discard;
    let start = traj
        .times
        .iter()
        .position(|&t| t >= t_first - 1e-12)
        .unwrap_or(traj.times.len());
    let series = &traj.inst_energy[start.min(traj.inst_energy.len())..];
    let n = series.len();
    if n < 64 {
        return Err(Error::OutOfRange(format!(
            "post-transient series has {n} samples, need at least 64"
        )));
    }

    let mean = series.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex<f64>> = series
        .iter()
        .map(|&e| Complex::new(e - mean, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let n_bins = n / 2 + 1;
    let mut freqs = Vec::with_capacity(n_bins);
    let mut magnitude = Vec::with_capacity(n_bins);
    for (k, spec) in buf.iter().take(n_bins).enumerate() {
        freqs.push(2.0 * std::f64::consts::PI * k as f64 / (n as f64 * dt));
        // Interior bins absorb their conjugate twin; Nyquist and DC do not.
        let weight = if k == 0 || (n % 2 == 0 && k == n / 2) {
            1.0
        } else {
            2.0f64.sqrt()
        };
        magnitude.push(spec.norm() * weight / n as f64);
    }

    let mut sorted = magnitude.clone();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let median = if n_bins % 2 == 1 {
        sorted[n_bins / 2]
    } else {
        0.5 * (sorted[n_bins / 2 - 1] + sorted[n_bins / 2])
    };

    let mut peak_idx: Vec<usize> = (1..n_bins.saturating_sub(1))
        .filter(|&k| {
            magnitude[k] > magnitude[k - 1]
                && magnitude[k] > magnitude[k + 1]
                && magnitude[k] > median
        })
        .collect();
    peak_idx.sort_by(|&a, &b| magnitude[b].total_cmp(&magnitude[a]));
    let peaks = peak_idx.into_iter().map(|k| freqs[k]).collect();

    Ok(SpectrumResult {
        freqs,
        magnitude,
        peaks,
    })
}
