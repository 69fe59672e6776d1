use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not converge: error estimate {error_estimate:e} above tolerance {tolerance:e}")]
    NonConvergence { error_estimate: f64, tolerance: f64 },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("ODE step size underflow at path parameter {at}")]
    StepFailure { at: f64 },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("input must be non-zero")]
    ZeroInput,
    #[error("point lies outside the requested sector")]
    OutsideSector,
    #[error("|x| = {radius} outside the evaluation annulus [{r_min}, {r_max}]")]
    OutsideAnnulus { radius: f64, r_min: f64, r_max: f64 },
    #[error("exponent {exponent} exceeds the cap {cap}")]
    Overflow { exponent: f64, cap: f64 },
    #[error("x does not lie in the requested half-plane")]
    WrongHalfPlane,
    #[error("|alpha| = {modulus} must be < 1/10")]
    AlphaTooLarge { modulus: f64 },
    #[error("radicand {re}+{im}i left the right half-plane")]
    BranchViolation { re: f64, im: f64 },
    #[error("chart undefined: {0}")]
    ChartUndefined(String),
    #[error("0 < |x| = {radius} < {r_min}: not evaluated numerically")]
    AnnulusGap { radius: f64, r_min: f64 },
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("non-finite value produced")]
    NonFinite,
}

impl Error {
    /// Stable snake_case name of the variant, for machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonConvergence { .. } => "non_convergence",
            Error::InvalidPath(_) => "invalid_path",
            Error::StepFailure { .. } => "step_failure",
            Error::OutOfRange(_) => "out_of_range",
            Error::ZeroInput => "zero_input",
            Error::OutsideSector => "outside_sector",
            Error::OutsideAnnulus { .. } => "outside_annulus",
            Error::Overflow { .. } => "overflow",
            Error::WrongHalfPlane => "wrong_half_plane",
            Error::AlphaTooLarge { .. } => "alpha_too_large",
            Error::BranchViolation { .. } => "branch_violation",
            Error::ChartUndefined(_) => "chart_undefined",
            Error::AnnulusGap { .. } => "annulus_gap",
            Error::UnknownSuite(_) => "unknown_suite",
            Error::NonFinite => "non_finite",
        }
    }
}
