//! Truncated power series in `t`, and in `(u, t)`, over `Q(p)`.
//!
//! Supplies the three operators the generating-function identities are
//! written in: `t -> c t` rescaling, powers with a symbolic exponent such as
//! `p` or `p + 1`, and the operator scaling `t^n` by `p^(-n(n-1)/2)`.

mod bivariate;
mod univariate;

pub use bivariate::BivariateSeries;
pub use univariate::TruncatedSeries;

pub(crate) use univariate::binom2;
