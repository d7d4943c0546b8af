use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: argument outside supported domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("{function}: no evaluation regime reached tolerance ({detail})")]
    NonConvergence {
        function: &'static str,
        detail: String,
    },

    /// Adaptive quadrature ran out of subdivisions. `estimate` is the norm of
    /// the best value found, in units of `exp(log_scale)`.
    #[error(
        "quadrature budget exceeded: best estimate {estimate:e} (log scale {log_scale}), \
         achieved relative tolerance {achieved_rel_tol:e}"
    )]
    BudgetExceeded {
        estimate: f64,
        log_scale: f64,
        achieved_rel_tol: f64,
    },

    #[error("square root argument {re} + {im}i lies on the branch cut")]
    BranchCut { re: f64, im: f64 },

    #[error("momentum has zero magnitude; helicity spinor is undefined")]
    DegenerateMomentum,

    #[error("packet parameters differ beyond the OAM index: {0}")]
    ParameterMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }
}
