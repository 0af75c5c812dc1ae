//! Correlation between actuation energy and the forward-FTLE value under
//! the sensor.
//!
//! Computing an FTLE field at every control step is the dominant cost, so
//! fields are computed at a decimated cadence and both the interpolated
//! sigma and the per-field quantile threshold are blended linearly in
//! time between the bracketing fields.

use crate::advect::{GridSpec, IntegratorConfig};
use crate::error::{Error, Result};
use crate::flowfield::FlowField;
use crate::ftle::{ftle_field, FtleField};
use crate::mpc::Trajectory;
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct RidgeCorrelationConfig {
    /// Grid on which the per-keyframe FTLE fields are computed.
    pub spec: GridSpec,
    /// Signed advection horizon; positive (repelling ridges) for the
    /// canonical energy-spike analysis.
    pub horizon: f64,
    /// Quantile of each field's sigma defining "on a ridge".
    pub quantile: f64,
    /// FTLE keyframe spacing in control steps.
    pub cadence: usize,
}

impl Default for RidgeCorrelationConfig {
    fn default() -> Self {
        RidgeCorrelationConfig {
            spec: GridSpec::new(0.0, 2.0, 0.0, 1.0, 101, 51).expect("static grid is valid"),
            horizon: 15.0,
            quantile: 0.9,
            cadence: 5,
        }
    }
}

/// One retained trajectory sample of the correlation series.
#[derive(Debug, Clone, Copy)]
pub struct RidgeSample {
    pub t: f64,
    pub sigma: f64,
    pub inst_energy: f64,
    /// Sigma at or above the (interpolated) quantile threshold.
    pub crossing: bool,
}

#[derive(Debug, Clone)]
pub struct RidgeEnergyReport {
    /// Pearson correlation between sigma and instantaneous energy; 0 when
    /// either series has no variance.
    pub pearson: f64,
    pub mean_inside: f64,
    pub mean_outside: f64,
    pub n_inside: usize,
    pub n_outside: usize,
    /// Samples dropped because the sensor left the FTLE-defined region.
    pub excluded: usize,
    pub samples: Vec<RidgeSample>,
}

/// Pearson correlation coefficient, 0 if either variance vanishes.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let ma = a[..n].iter().sum::<f64>() / nf;
    let mb = b[..n].iter().sum::<f64>() / nf;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for k in 0..n {
        let da = a[k] - ma;
        let db = b[k] - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if va <= 0.0 || vb <= 0.0 {
        0.0
    } else {
        cov / (va * vb).sqrt()
    }
}

/// Classifies a sigma/energy series into crossing and non-crossing
/// samples and reports the correlation and conditional means.
pub fn correlate_series(samples: Vec<RidgeSample>, excluded: usize) -> RidgeEnergyReport {
    let sigmas: Vec<f64> = samples.iter().map(|s| s.sigma).collect();
    let energies: Vec<f64> = samples.iter().map(|s| s.inst_energy).collect();
    let mut sum_in = 0.0;
    let mut n_in = 0usize;
    let mut sum_out = 0.0;
    let mut n_out = 0usize;
    for s in &samples {
        if s.crossing {
            sum_in += s.inst_energy;
            n_in += 1;
        } else {
            sum_out += s.inst_energy;
            n_out += 1;
        }
    }
    RidgeEnergyReport {
        pearson: pearson(&sigmas, &energies),
        mean_inside: if n_in > 0 { sum_in / n_in as f64 } else { f64::NAN },
        mean_outside: if n_out > 0 { sum_out / n_out as f64 } else { f64::NAN },
        n_inside: n_in,
        n_outside: n_out,
        excluded,
        samples,
    }
}

/// Full pipeline: decimated FTLE keyframes along the trajectory, per-step
/// interpolated sigma under the sensor, crossing flags, and the report.
pub fn ridge_energy_correlation<F: FlowField + ?Sized>(
    field: &F,
    traj: &Trajectory,
    ccfg: &RidgeCorrelationConfig,
    icfg: &IntegratorConfig,
) -> Result<RidgeEnergyReport> {
    if traj.controls.is_empty() {
        return Err(Error::OutOfRange("trajectory has no control samples".into()));
    }
    if ccfg.cadence == 0 {
        return Err(Error::InvalidParameter("cadence must be >= 1".into()));
    }
    if !(0.0 < ccfg.quantile && ccfg.quantile < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "quantile must lie in (0, 1), got {}",
            ccfg.quantile
        )));
    }
    let n = traj.controls.len();
    let mut key_steps: Vec<usize> = (0..n).step_by(ccfg.cadence).collect();
    if *key_steps.last().unwrap() != n - 1 {
        key_steps.push(n - 1);
    }
    let keyframes: Vec<(FtleField, f64)> = key_steps
        .par_iter()
        .map(|&k| {
            let f = ftle_field(field, &ccfg.spec, traj.times[k], ccfg.horizon, icfg)?;
            let thr = f.sigma_quantile(ccfg.quantile)?;
            Ok((f, thr))
        })
        .collect::<Result<_>>()?;

    let mut samples = Vec::with_capacity(n);
    let mut excluded = 0usize;
    for k in 0..n {
        // Bracketing keyframes around control step k.
        let hi = key_steps.partition_point(|&s| s < k).min(key_steps.len() - 1);
        let lo = hi.saturating_sub(if key_steps[hi] > k { 1 } else { 0 });
        let (ka, kb) = (key_steps[lo], key_steps[hi]);
        let w = if kb > ka {
            (k as f64 - ka as f64) / (kb as f64 - ka as f64)
        } else {
            0.0
        };
        let x = traj.states[k];
        let (fa, ta) = &keyframes[lo];
        let (fb, tb) = &keyframes[hi];
        match (fa.sigma_at(x), fb.sigma_at(x)) {
            (Ok(sa), Ok(sb)) => {
                let sigma = sa * (1.0 - w) + sb * w;
                let threshold = ta * (1.0 - w) + tb * w;
                samples.push(RidgeSample {
                    t: traj.times[k],
                    sigma,
                    inst_energy: traj.inst_energy[k],
                    crossing: sigma >= threshold,
                });
            }
            _ => excluded += 1,
        }
    }
    Ok(correlate_series(samples, excluded))
}
