use thiserror::Error;

use crate::feedback::EigenDiagnostics;

/// Errors raised while validating a game or solving it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{field}: expected a positive value, got {value}")]
    NonPositiveWeight { field: String, value: f64 },
    #[error("{field}: control gain must be nonzero")]
    ZeroGain { field: String },
    #[error("{field}: weights sum to {sum}, expected 1")]
    WeightSumMismatch { field: String, sum: f64 },
    #[error("x0: initial state must be nonzero")]
    ZeroInitialState,
    #[error("{field}: expected {expected} entries, got {found}")]
    LengthMismatch {
        field: String,
        expected: usize,
        found: usize,
    },
    #[error("game must have at least one player")]
    NoPlayers,
    #[error("{field}: value must be finite")]
    NonFinite { field: String },
    #[error("{field}: altruism weight must be nonnegative, got {value}")]
    NegativeAltruism { field: String, value: f64 },
    #[error("{field}: self weight of player {player} must be positive")]
    ZeroSelfWeight { field: String, player: usize },

    #[error("N = {n} exceeds the monomial-matrix cap of {cap} (dimension 2^N)")]
    DimensionCap { n: usize, cap: usize },
    #[error("the game has no stabilizing feedback Nash equilibrium\n{diagnostics}")]
    NoEquilibrium { diagnostics: Box<EigenDiagnostics> },
    #[error("no equilibrium supplied")]
    EmptyEquilibriumSet,
    #[error("fixed-point condition p_-i > a violated for player {player} (p_-i = {p_minus_i}, a = {a})")]
    ConditionViolated {
        player: usize,
        p_minus_i: f64,
        a: f64,
    },
    #[error("no sign change of the aggregate fixed-point map found up to p_bar - a = {upper}")]
    NoBracket { upper: f64 },
    #[error("best-response iteration did not converge after {iterations} iterations (last gain change {last_change:e}, gains {gains:?})")]
    NonConvergence {
        iterations: usize,
        last_change: f64,
        gains: Vec<f64>,
    },
    #[error("closed loop is unstable (pole {pole})")]
    UnstableClosedLoop { pole: f64 },
    #[error("time must be nonnegative, got {t}")]
    NegativeTime { t: f64 },
    #[error("invalid simulation grid: T = {horizon}, dt = {step}")]
    InvalidGrid { horizon: f64, step: f64 },
    #[error("division by zero: {what}")]
    DivisionByZero { what: &'static str },
    #[error("bound not applicable: {reason}")]
    BoundInapplicable { reason: &'static str },
    #[error("target PoI {target} outside (sqrt(2)/2, sqrt(2)]")]
    TargetOutOfRange { target: f64 },
    #[error("normalization factor must be positive, got {value}")]
    InvalidNormalization { value: f64 },
    #[error("eigendecomposition failed: {0}")]
    Eigen(String),
}

impl Error {
    /// True for solver outcomes (as opposed to bad input).
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NoEquilibrium { .. }
                | Error::EmptyEquilibriumSet
                | Error::ConditionViolated { .. }
                | Error::NoBracket { .. }
                | Error::NonConvergence { .. }
                | Error::UnstableClosedLoop { .. }
                | Error::Eigen(_)
                | Error::DivisionByZero { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
