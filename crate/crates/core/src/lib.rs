//! Exact waiting-time laws, limit laws and Monte Carlo for the problem of
//! collecting pairs: draw uniformly from `{1..n}` with replacement and wait
//! until runs `jj` have appeared for a given number of distinct `j`.

pub mod combinatorics;
pub mod distributions;
pub mod error;
pub mod limitlaws;
pub mod oracle;
pub mod precise;
pub mod simulate;

pub use error::{Error, Result};
