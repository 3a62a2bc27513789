//! Crate-wide error type.

use thiserror::Error;

/// Errors produced anywhere in the analysis pipeline.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Malformed source text: unexpected token, unbalanced parentheses, bad number.
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    /// An identifier that is neither the parameter, a bound constant, nor a function.
    #[error("unknown identifier `{name}` at byte {offset}")]
    Binding { name: String, offset: usize },

    /// Evaluation left the domain of a primitive (ln/sqrt of non-positive,
    /// inverse trig outside its interval, division by zero, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The Frenet frame is undefined: vanishing speed or vanishing curvature.
    #[error("degenerate frame at t = {t}: {reason}")]
    DegenerateFrame { t: f64, reason: String },

    /// A requested arc length lies outside the curve.
    #[error("arc length {s} outside reachable range [0, {max}]")]
    Range { s: f64, max: f64 },

    /// A grid operation was given fewer samples than its stencil needs.
    #[error("need at least {required} samples, got {got}")]
    InsufficientSamples { required: usize, got: usize },

    /// Synthesis was started from a frame that is not orthonormal.
    #[error("initial frame is not orthonormal (deviation {deviation:.3e})")]
    NonOrthonormalInitialFrame { deviation: f64 },

    /// A constructor parameter violates its constraint.
    #[error("invalid parameter: {0}")]
    Param(String),

    /// A distance-function audit was asked to run on a curve that is not T-constant.
    #[error("curve is not T-constant: {0}")]
    NotTConstant(String),

    /// A curve/profile spec file is structurally invalid.
    #[error("invalid spec: {0}")]
    Spec(String),
}

impl Error {
    /// Exit code the CLI maps this error to: 2 for input/spec problems,
    /// 3 for numeric/domain breakdown.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. }
            | Error::Binding { .. }
            | Error::Param(_)
            | Error::Spec(_) => 2,
            Error::Domain(_)
            | Error::DegenerateFrame { .. }
            | Error::Range { .. }
            | Error::InsufficientSamples { .. }
            | Error::NonOrthonormalInitialFrame { .. }
            | Error::NotTConstant(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
