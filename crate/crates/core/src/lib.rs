//! Exact, asymptotic and Monte Carlo statistics of the number of collisions
//! X_n in the beta(2, b)-coalescent, with a harness that checks the moment
//! expansions, the law of large numbers and the central limit theorem
//! numerically.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod exact;
pub mod limits;
pub mod quadrature;
pub mod rates;
pub mod rng;
pub mod simulation;
pub mod special;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use limits::Limits;
