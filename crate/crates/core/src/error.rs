use thiserror::Error;

/// Errors raised by the numerical kernels and the geometry built on them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("quadrature did not reach tolerance {tol:e} within depth {max_depth}")]
    ToleranceNotReached { tol: f64, max_depth: u32 },

    #[error("step size underflow at u = {at}: required step {step:e}")]
    StepUnderflow { at: f64, step: f64 },

    #[error("target {target} is not bracketed by f({lo}) = {f_lo} and f({hi}) = {f_hi}")]
    NoBracket {
        target: f64,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("(s, t) = (0, 0) gives the constant solution z = 0")]
    DegenerateParameters,

    #[error("tangent vectors are linearly dependent at ({u}, {v})")]
    DegenerateFrame { u: f64, v: f64 },

    #[error("curvature method not applicable: {0}")]
    MethodInapplicable(&'static str),

    #[error("curve is not regular: speed {speed:e} at sample {index}")]
    DegenerateCurve { index: usize, speed: f64 },

    #[error("scalar field violates the support equation: residual {residual:e} > {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },

    #[error("hypersurface tangent rank below three at ({u}, {v}, {w})")]
    DegenerateTangent { u: f64, v: f64, w: f64 },

    #[error("point lies on the projection pole{}", match .index { Some(i) => format!(" (grid index {i})"), None => String::new() })]
    AtPole { index: Option<usize> },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {0} is outside the integration span")]
    OutOfSpan(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
