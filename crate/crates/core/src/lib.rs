//! Exact densities of `p`-adic polynomials by number of roots.
//!
//! The crate computes, as rational functions of a symbolic prime `p`, the
//! expected number of `d`-sets of roots (`alpha`, `beta`, `rho` moments) and
//! the probabilities of exactly `r` roots (`alpha*`, `beta*`, `rho*`) for
//! random monic, monic-reducing-to-`x^n` and general polynomials over `Z_p`.
//! Two independent symbolic routes produce the tables; a Hensel-descent root
//! counter with a Monte Carlo driver checks them numerically.

pub mod densities;
pub mod error;
pub mod exactalg;
pub mod oracle;
pub mod par;
pub mod series;

pub use error::{Error, Result};
pub use exactalg::{Limit, QPoly, RationalFunction, ZPoly};
