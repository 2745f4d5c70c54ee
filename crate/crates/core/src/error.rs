use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside the admissible domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("{0} did not converge")]
    NonConvergence(&'static str),
    #[error("target frequency {target} lies outside the frequency range [{lo}, {hi}]")]
    FrequencyOutOfRange { target: f64, lo: f64, hi: f64 },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no saddle equilibrium on the phase cylinder")]
    NoSaddle,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("separatrix topology mismatch: {0}")]
    Topology(String),
    #[error("trajectory left the chart domain at t = {time}")]
    ChartExit { time: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        domain,
    }
}
