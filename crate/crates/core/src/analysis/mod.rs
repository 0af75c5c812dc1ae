//! The experiment layer: parameter sweeps and trajectory diagnostics.

mod correlation;
mod histogram;
mod orbit;
mod spectrum;
mod sweep;

pub use correlation::{
    pearson, ridge_energy_correlation, RidgeCorrelationConfig, RidgeEnergyReport, RidgeSample,
};
pub use histogram::{control_histograms, HistQuantity, HistogramPair};
pub use orbit::{detect_orbit, OrbitSummary};
pub use spectrum::{energy_spectrum, SpectrumResult};
pub use sweep::{
    pareto_flags, pareto_front, read_sweep_csv, sweep, write_sweep_csv, SweepGrid, SweepRecord,
    SWEEP_CSV_HEADER,
};
