//! Numerical oracle: random `p`-adic polynomials at finite precision, exact
//! root counts by Hensel descent, and comparison with the symbolic densities.

mod exhaustive;
mod hensel;
mod montecarlo;
mod sample;

pub use exhaustive::{enumeration_size, exhaustive_small, ExhaustiveHistogram, DEFAULT_BUDGET};
pub use hensel::{
    count_qp_roots, count_qp_roots_exact, count_zp_roots, count_zp_roots_exact, is_small_prime, Outcome,
    RootCountResult,
};
pub use montecarlo::{
    build_report, count_for_mode, expected_distribution, monte_carlo, run_trial, simulate, trial_rng, Histogram,
    MonteCarloConfig, MonteCarloReport, DEFAULT_ABANDON_THRESHOLD, DEFAULT_K0, DEFAULT_PRECISION_CAP,
};
pub use sample::{Mode, PadicSample};
