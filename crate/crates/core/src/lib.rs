//! Exact covering numbers of CSP instances, Label-Cover sources, long-code
//! gadget reductions and the Boolean/correlated-space analysis behind them.

pub mod boolanalysis;
pub mod correlated;
pub mod csp;
pub mod error;
pub mod labelcover;
pub mod predicate;
pub mod rational;
pub mod reductions;

pub use error::{Budget, Error, Result};
pub use rational::Rational;
