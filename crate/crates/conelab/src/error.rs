use thiserror::Error;

/// Errors surfaced by the analysis modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("constraint {index} is violated at the reference point: q_{index}(ybar) = {value} > 0")]
    InfeasiblePoint { index: usize, value: String },

    #[error("ystar is not a representable normal at ybar: no multiplier lambda >= 0 with grad^T lambda = ystar")]
    NotANormal,

    #[error("direction is not tangent: constraint {index} has positive slope {value} along it")]
    DirectionNotTangent { index: usize, value: String },

    #[error("direction lies outside the cone")]
    DirectionNotInCone,

    #[error("linear program is unbounded along a recession direction")]
    LpUnbounded,

    #[error("linear program is infeasible")]
    LpInfeasible,

    #[error("critical cone is trivial; no nonzero probe directions exist")]
    EmptyCriticalCone,

    #[error("curvature system is infeasible for this direction")]
    InfeasibleXi,

    #[error("LICQ does not hold at the reference point")]
    NotLicq,

    #[error("enumeration cap {cap} exceeded while listing {what}")]
    EnumerationCap { cap: usize, what: &'static str },

    #[error("equilibrium mismatch: F(xbar, ybar) must equal -ystar, got {got}")]
    InconsistentEquilibrium { got: String },

    #[error("random instance generation exhausted after {attempts} attempts")]
    GenerationExhausted { attempts: usize },

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("internal invariant breached: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
