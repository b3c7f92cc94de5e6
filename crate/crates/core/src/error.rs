use thiserror::Error;

use crate::numgrid::DiffScheme;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid range: x_min ({x_min}) must be less than x_max ({x_max})")]
    InvalidRange { x_min: f64, x_max: f64 },

    #[error("too few points: {n} (need at least {min})")]
    TooFewPoints { n: usize, min: usize },

    #[error("sample count {got} does not match grid size {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("functions live on different grids")]
    GridMismatch,

    #[error("derivative order {order} is not supported by {scheme:?}")]
    UnsupportedOrder { order: usize, scheme: DiffScheme },

    #[error("{scheme:?} cannot be used here: {reason}")]
    SchemeGridMismatch { scheme: DiffScheme, reason: String },

    #[error("eigensolver failure: {0}")]
    SolverFailure(String),

    #[error("ground-state pair is linearly dependent (max |W| = {max_abs_w:e})")]
    LinearDependence { max_abs_w: f64 },

    #[error("Wronskian vanishes or changes sign (min |W| = {min_abs_w:e})")]
    WronskianVanishes { min_abs_w: f64 },

    #[error("factorization identities violated: residual {residual:e} exceeds {tol:e}")]
    IdentityViolation { residual: f64, tol: f64 },

    #[error("invalid kappa {0}: must be finite and positive")]
    InvalidKappa(f64),

    #[error("invalid eigenvalue {0}: must be finite and non-positive")]
    InvalidEigenvalue(f64),

    #[error("potential is not integrable: asymptotic limits u = {u_limits:?}, v = {v_limits:?}")]
    NonintegrablePotential { u_limits: (f64, f64), v_limits: (f64, f64) },

    #[error("potential samples approach {found:e} at the {side} end, declared limit {declared:e}")]
    LimitMismatch { side: &'static str, found: f64, declared: f64 },

    #[error("non-finite value in the evolution at t = {t}")]
    BlowUp { t: f64 },

    #[error("time step {dt:e} exceeds the stable bound {max_dt:e}")]
    CflViolation { dt: f64, max_dt: f64 },

    #[error("unknown example '{0}'")]
    UnknownExample(String),

    #[error("example 5 requires a parameter k > 0")]
    MissingK,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("an earlier step failed: {0}")]
    Prerequisite(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
