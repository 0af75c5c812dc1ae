//! Crate-wide error type.

use crate::linalg::Vec2;
use crate::mpc::Trajectory;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or configuration value violates its invariants.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An input that must be finite is NaN or infinite.
    #[error("non-finite input: {0}")]
    NonFiniteInput(String),

    /// Numerical integration produced a non-finite state.
    #[error("integration diverged at x = ({}, {}), t = {t}", x.x, x.y)]
    Integration { x: Vec2, t: f64 },

    /// A grid-node advection failed; carries the node index.
    #[error("flow map failed at node ({i}, {j}): {source}")]
    FlowMapNode {
        i: usize,
        j: usize,
        #[source]
        source: Box<Error>,
    },

    /// A query landed outside the region where the requested quantity is
    /// defined (boundary node, out-of-grid interpolation, short series).
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// A numerically degenerate intermediate value (guarded, not expected).
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The horizon solver encountered a non-finite cost.
    #[error("solver failure: {0}")]
    Solver(String),

    /// A receding-horizon run aborted; the trajectory up to the failing
    /// step is preserved.
    #[error("mpc aborted after {} steps: {source}", partial.controls.len())]
    MpcAborted {
        partial: Box<Trajectory>,
        #[source]
        source: Box<Error>,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// A persisted file does not match the expected schema.
    #[error("format error: {0}")]
    Format(String),
}
