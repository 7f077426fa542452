//! Exact q-series computation for Bailey chains, Appell-Lerch sums and
//! indefinite theta series, with a registry of checkable identities.

pub mod bailey;
pub mod error;
pub mod forms;
pub mod indefinite;
pub mod multisum;
pub mod registry;
pub mod series;
pub mod theta;

pub use error::{Error, Result};
pub use series::{pochhammer, Count, LaurentSeries, QMonomial, Rational};
