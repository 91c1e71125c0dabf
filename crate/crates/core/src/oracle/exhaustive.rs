use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::hensel::is_small_prime;
use super::montecarlo::count_for_mode;
use super::sample::{Mode, PadicSample};
use crate::error::{Error, Result};
use crate::par;

pub const DEFAULT_BUDGET: u128 = 1 << 24;

/// Exact tallies over every coefficient vector at precision `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExhaustiveHistogram {
    pub n: usize,
    pub p: u64,
    #[serde(rename = "K")]
    pub precision: u32,
    pub mode: Mode,
    pub total: u128,
    pub counts: BTreeMap<usize, u128>,
    pub undetermined: u128,
}

impl ExhaustiveHistogram {
    /// `[determined frequency, determined + undetermined frequency]` for
    /// exactly `r` roots. The exact density lies in this interval.
    pub fn bracket(&self, r: usize) -> (BigRational, BigRational) {
        let c = self.counts.get(&r).copied().unwrap_or(0);
        let total = BigInt::from(self.total);
        (
            BigRational::new(BigInt::from(c), total.clone()),
            BigRational::new(BigInt::from(c + self.undetermined), total),
        )
    }

    pub fn undetermined_fraction(&self) -> BigRational {
        BigRational::new(BigInt::from(self.undetermined), BigInt::from(self.total))
    }
}

/// Number of samples at precision `K`: `p^K` choices per free coefficient,
/// `p^(K-1)` for the `monic_xn` ones.
pub fn enumeration_size(n: usize, p: u64, precision: u32, mode: Mode) -> Option<u128> {
    let (free, digits) = match mode {
        Mode::General => (n + 1, precision),
        Mode::Monic => (n, precision),
        Mode::MonicXn => (n, precision - 1),
    };
    (p as u128).checked_pow(digits)?.checked_pow(free as u32)
}

/// Enumerates every sample of the given shape and counts roots.
pub fn exhaustive_small(n: usize, p: u64, precision: u32, mode: Mode, budget: u128) -> Result<ExhaustiveHistogram> {
    if !is_small_prime(p) || precision == 0 || n == 0 {
        return Err(Error::InvalidArgument("need a prime p, K >= 1 and n >= 1".into()));
    }
    let total = enumeration_size(n, p, precision, mode).unwrap_or(u128::MAX);
    if total > budget || total > u64::MAX as u128 {
        return Err(Error::BudgetExceeded { needed: total, budget });
    }
    let free = if mode.is_monic() { n } else { n + 1 };
    let per = total_per_coefficient(p, precision, mode);
    let step: u64 = if mode == Mode::MonicXn { p } else { 1 };

    let (counts, undetermined) = par::map_reduce(
        total as u64,
        || (vec![0u128; n + 1], 0u128),
        |idx| {
            let mut coeffs = Vec::with_capacity(n + 1);
            let mut rest = idx;
            for _ in 0..free {
                coeffs.push(BigInt::from((rest % per) * step));
                rest /= per;
            }
            if mode.is_monic() {
                coeffs.push(BigInt::from(1));
            }
            let s = PadicSample::new(p, precision, coeffs, mode).expect("valid by construction");
            let mut h = vec![0u128; n + 1];
            match count_for_mode(&s).count() {
                Some(c) => {
                    h[c] += 1;
                    (h, 0)
                }
                None => (h, 1),
            }
        },
        |(mut a, ua), (b, ub)| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            (a, ua + ub)
        },
    );
    Ok(ExhaustiveHistogram {
        n,
        p,
        precision,
        mode,
        total,
        counts: counts.into_iter().enumerate().collect(),
        undetermined,
    })
}

fn total_per_coefficient(p: u64, precision: u32, mode: Mode) -> u64 {
    let digits = if mode == Mode::MonicXn { precision - 1 } else { precision };
    p.pow(digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_monic_is_fully_determined() {
        let h = exhaustive_small(1, 2, 3, Mode::Monic, DEFAULT_BUDGET).unwrap();
        assert_eq!(h.total, 8);
        assert_eq!(h.counts[&1], 8);
        assert_eq!(h.undetermined, 0);
    }

    #[test]
    fn quadratic_bracket_contains_half() {
        let h = exhaustive_small(2, 2, 4, Mode::General, DEFAULT_BUDGET).unwrap();
        let (lo, hi) = h.bracket(2);
        let half = BigRational::new(1.into(), 2.into());
        assert!(lo <= half && half <= hi, "{lo} {hi}");
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            exhaustive_small(3, 5, 4, Mode::General, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn more_digits_shrink_the_undetermined_mass() {
        let a = exhaustive_small(2, 2, 3, Mode::General, DEFAULT_BUDGET).unwrap();
        let b = exhaustive_small(2, 2, 4, Mode::General, DEFAULT_BUDGET).unwrap();
        assert!(b.undetermined_fraction() <= a.undetermined_fraction());
    }
}
