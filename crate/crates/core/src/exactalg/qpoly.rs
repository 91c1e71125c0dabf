use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{RationalFunction, ZPoly};

/// Polynomial in `p` with rational coefficients, `coeffs[i]` multiplying `p^i`.
///
/// Used for counting polynomials such as the number of monic irreducibles of
/// a given degree, whose natural closed forms carry a `1/d` factor.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Clears denominators: returns `(numerator, denominator)` with the
    /// numerator an integer polynomial and the denominator a positive integer.
    pub fn to_integer_parts(&self) -> (ZPoly, BigInt) {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let num = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        (ZPoly::from_coeffs(num), l)
    }

    pub fn to_rational_function(&self) -> RationalFunction {
        let (num, den) = self.to_integer_parts();
        RationalFunction::new(num, ZPoly::constant(den)).expect("nonzero integer denominator")
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.to_integer_parts();
        if den.is_one() {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/{den}")
        }
    }
}
