use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The configuration lies outside the range where the Gumbel limit law
    /// is defined (typically `L` too small for the chosen array length).
    #[error("asymptotic regime violated for {n_windows} windows with n_t={n_t}: {reason}")]
    RegimeViolated {
        n_windows: usize,
        n_t: usize,
        reason: String,
    },

    #[error("insufficient exceedances: {marginal} marginal and {joint} joint out of {trials} trials")]
    InsufficientExceedances {
        joint: u64,
        marginal: u64,
        trials: u64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
