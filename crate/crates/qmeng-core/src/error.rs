//! Crate-wide error type.

/// Errors surfaced by parameter validation and the numerical kernels.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("parameter `{name}` = {value} out of domain: {constraint}")]
    Domain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("degenerate field: Bz(1) and By are both zero, precession frequency undefined")]
    DegenerateField,

    #[error(
        "initial state must be s+ = (1,0) or s- = (0,1); general superpositions are unsupported"
    )]
    UnsupportedInitialState,

    #[error("wavevector within {tol:e} of the x' axis: polarization triad undefined there")]
    CoordinateSingularity { tol: f64 },

    #[error("integration step too large: omega*dt = {omega_dt:e} exceeds {max:e}")]
    StepTooLarge { omega_dt: f64, max: f64 },

    #[error(
        "quadrature unconverged: node doubling moved the result from {coarse:e} to {fine:e} \
         (relative change {rel_change:e} > tolerance {tol:e})"
    )]
    Unconverged {
        coarse: f64,
        fine: f64,
        rel_change: f64,
        tol: f64,
    },

    #[error("optimizer needs {needed} iterations for the requested tolerance, cap is {cap}")]
    OptimizerFailed { needed: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand for the recurring "finite and in range" checks.
pub(crate) fn check(
    ok: bool,
    name: &'static str,
    value: f64,
    constraint: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            constraint,
        })
    }
}
