//! Geometric measure of entanglement for the symmetric three-qubit family
//!
//! The state family under study is
//!
//! ```text
//! |psi> = g|000> + t(|011> + |101> + |110>) + e^{i gamma} h |111>
//! ```
//!
//! with `g, t, h >= 0`, `g^2 + 3t^2 + h^2 = 1` and a single phase `gamma`.
//! The crate computes the maximal product-state overlap `P_max` and the
//! geometric measure `G = 1 - P_max`:
//!
//! * closed-form eigenvalue tables and piecewise `P_max` at `gamma = 0`
//!   and `gamma = pi/2` ([`analytic`]),
//! * a quartic characteristic polynomial pipeline at `gamma = pi/4` and a
//!   multi-start Newton solver for arbitrary phase ([`solver`]),
//! * a closed-form zero-multiplier stationary branch and its nearest
//!   product state for arbitrary phase ([`stationarity`]),
//! * an independent brute-force optimizer over product states used to
//!   validate everything else ([`oracle`]),
//! * parameter-space sweeps, domain maps and boundary traces ([`sweep`]).

pub mod analytic;
pub mod checks;
pub mod oracle;
pub mod qstate;
pub mod solver;
pub mod stationarity;
pub mod sweep;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// All amplitudes vanish; the state cannot be normalized.
    #[error("degenerate state: all amplitudes are zero")]
    DegenerateState,
    /// A parameter is outside its documented range.
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    /// The zero-multiplier stationary branch has no defined direction here.
    #[error("lambda=0 branch undefined: degenerate direction")]
    LambdaZeroUndefined,
    /// The multi-start solver converged to too few distinct points.
    #[error("insufficient coverage, increase n_starts")]
    InsufficientCoverage,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
