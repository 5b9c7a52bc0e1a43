use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Arguments outside the mathematical domain of the operation.
    #[error("parameter out of domain: {0}")]
    Domain(String),

    /// A computation that would exceed the configured size limits.
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("empty sample")]
    EmptySample,

    /// A declared regime that does not match the (n, a) pair.
    #[error("regime {regime} is inconsistent with n = {n}, a = {a}")]
    InconsistentRegime { regime: String, n: u64, a: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

/// Checks `n >= 2` and `1 <= j <= n`.
pub(crate) fn check_pair_params(n: u64, j: u64) -> Result<()> {
    if n < 2 {
        return domain(format!("alphabet size n = {n} must be at least 2"));
    }
    if j == 0 || j > n {
        return domain(format!(
            "target size j = {j} must satisfy 1 <= j <= n = {n}"
        ));
    }
    Ok(())
}
