//! Energy-aware trajectory planning for a weakly actuated sensor drifting
//! in an unsteady 2-D flow.
//!
//! The crate is organized around five subsystems:
//!
//! * [`flowfield`] — the [`FlowField`] abstraction and the analytic
//!   unsteady double gyre (plus uniform and linear-saddle oracles).
//! * [`advect`] — fixed-step RK4 advection of passive drifters and
//!   flow-map evaluation on grids.
//! * [`ftle`] — finite-time Lyapunov exponent fields from flow maps,
//!   ridge extraction, and bilinear sampling along trajectories.
//! * [`mpc`] — receding-horizon control of the actuated sensor with a
//!   box-constrained quasi-Newton horizon solver and exact adjoint
//!   gradients.
//! * [`analysis`] — parameter sweeps with Pareto fronts, energy spectra,
//!   periodic-orbit detection, control histograms, and the FTLE-ridge /
//!   energy correlation report.

pub mod advect;
pub mod analysis;
pub mod csvio;
pub mod error;
pub mod flowfield;
pub mod ftle;
pub mod linalg;
pub mod mpc;

pub use advect::{FlowMapGrid, GridSpec, IntegratorConfig};
pub use error::{Error, Result};
pub use flowfield::{DoubleGyre, DoubleGyreParams, FieldQuery, FlowField, LinearSaddle, Uniform};
pub use ftle::{Direction, FtleField, RidgeSet};
pub use linalg::{Mat2, Vec2};
pub use mpc::{ControlSequence, HorizonSolution, MpcConfig, SolverConfig, Trajectory};
