//! Numerical checks of the long-time behavior of the flow.

mod checks;
mod report;
mod suite;

pub use checks::*;
pub use report::{build_report, CheckResult, Status, VerificationReport, Window};
pub use suite::{run_suite, SuiteConfig, SuiteOutcome, ALL_CHECKS, COMPARISON_LOWER, COMPARISON_UPPER, CONVERGENCE_GENERAL};
