//! Independent representations of `ln |phi|`, used to cross-check the
//! canonical-product evaluator.
//!
//! * [`favorov_log`]: `int_0^R (n(0, t) - n(z, t)) / t dt`, summed exactly
//!   over the breakpoints of the two counting functions.
//! * [`PoissonOracle`]: the half-plane Poisson integral of `ln |phi(t)|`
//!   along the real axis plus `pi Delta |Im z|`.

mod favorov;
mod poisson;

pub use favorov::{cover_all_radius, favorov_log, favorov_log_cover_all};
pub use poisson::{poisson_log, PoissonOracle, PoissonValue};
