//! Exact arithmetic in the field `Q(p)` of rational functions of a symbolic prime.

mod qpoly;
mod ratfunc;
mod zpoly;

pub use qpoly::QPoly;
pub use ratfunc::{Limit, RationalFunction};
pub use zpoly::ZPoly;
