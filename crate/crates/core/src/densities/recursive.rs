//! Moments from the splitting-type and valuation recursions.
//!
//! For each degree `n` the monic expectation `alpha(n, d)` is an average over
//! the factorization of the reduction mod `p`: each multiple linear factor
//! `l^e` contributes an independent copy of `beta(e, .)`. Only the type
//! `(1^n)` refers back to degree `n`, through `beta(n, d)` with weight
//! `N_1 / p^n = p^(1-n)`. Conversely `beta(n, d)` is `p^(-n(n-1)/2) alpha(n, d)`
//! plus lower-degree `alpha` terms. The two relations form a 2x2 linear system
//! per `(n, d)`, solved exactly.

use super::splitting::SplittingCache;
use super::table::{zero_grid, DensityTable, Grid, Route};
use crate::error::{Error, Result};
use crate::exactalg::RationalFunction;
use crate::series::binom2;

fn p_pow(k: i64) -> RationalFunction {
    RationalFunction::p_pow(k)
}

/// Truncated product of polynomials in `u`, keeping degrees `<= width`.
fn u_product(factors: &[&[RationalFunction]], width: usize) -> Vec<RationalFunction> {
    let mut acc = vec![RationalFunction::zero(); width + 1];
    acc[0] = RationalFunction::one();
    for f in factors {
        let mut next = vec![RationalFunction::zero(); width + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in f.iter().enumerate().take(width + 1 - i) {
                if !b.is_zero() {
                    next[i + j] = &next[i + j] + &(a * b);
                }
            }
        }
        acc = next;
    }
    acc
}

/// Fills `alpha`, `beta` and `alpha_tilde` for `n <= n_max`, `d <= d_max`.
pub fn compute_moment_tables_recursive(n_max: usize, d_max: usize) -> Result<DensityTable> {
    compute_moment_tables_with(&SplittingCache::new(n_max), n_max, d_max)
}

/// As [`compute_moment_tables_recursive`] with explicit counting data.
pub fn compute_moment_tables_with(cache: &SplittingCache, n_max: usize, d_max: usize) -> Result<DensityTable> {
    if d_max > n_max {
        return Err(Error::InvalidArgument(format!("d_max = {d_max} exceeds n_max = {n_max}")));
    }
    if cache.n_max() < n_max {
        return Err(Error::InvalidArgument("splitting cache too small".into()));
    }
    let mut alpha = zero_grid(n_max, d_max);
    let mut beta = zero_grid(n_max, d_max);
    let one = RationalFunction::one();
    let p = RationalFunction::p();
    let p_minus_1 = &p - &one;

    alpha[0][0] = one.clone();
    beta[0][0] = one.clone();
    if n_max >= 1 {
        // The normalisation fixes the degree-one row: a monic linear
        // polynomial has exactly one root.
        alpha[1][0] = one.clone();
        beta[1][0] = one.clone();
        if d_max >= 1 {
            alpha[1][1] = one.clone();
            beta[1][1] = one.clone();
        }
    }

    for n in 2..=n_max {
        let groups = cache.linear_groups(n);
        // sum over types other than (1^n) of N_sigma * [u^d] prod_i B_{e_i}(u)
        let mut lower = vec![RationalFunction::zero(); d_max + 1];
        for (exps, weight) in &groups {
            if exps.as_slice() == [n] {
                continue;
            }
            let factors: Vec<&[RationalFunction]> = exps.iter().map(|&e| beta[e].as_slice()).collect();
            let prod = u_product(&factors, d_max);
            for (d, c) in prod.iter().enumerate() {
                if !c.is_zero() {
                    lower[d] = &lower[d] + &(weight * c);
                }
            }
        }
        let self_weight = groups.get(&vec![n]).cloned().unwrap_or_default();
        if self_weight != p {
            return Err(Error::Internal(format!("N_(1^{n}) = {self_weight}, expected p")));
        }

        let c_alpha = p_pow(1 - n as i64); // coefficient of beta(n,d) in alpha(n,d)
        let c_beta = p_pow(-binom2(n)); // coefficient of alpha(n,d) in beta(n,d)
        let det = &one - &(&c_alpha * &c_beta);
        if det.is_zero() {
            return Err(Error::Internal(format!("singular system at n = {n}")));
        }
        let p_neg_n = p_pow(-(n as i64));

        for d in 0..=d_max.min(n) {
            // (p - 1) sum_{0 <= s < r < n} p^(-C(r+1,2)) p^s alpha(s, d)
            let mut tail = RationalFunction::zero();
            for r in 1..n {
                let w = p_pow(-binom2(r + 1));
                let inner: RationalFunction = (0..r)
                    .filter(|&s| !alpha[s][d].is_zero())
                    .map(|s| &p_pow(s as i64) * &alpha[s][d])
                    .sum();
                if !inner.is_zero() {
                    tail = &tail + &(&w * &inner);
                }
            }
            tail = &tail * &p_minus_1;

            let a0 = &p_neg_n * &lower[d];
            let a = &(&a0 + &(&c_alpha * &tail)) / &det;
            let b = &(&c_beta * &a) + &tail;
            if d == 0 && (!a.is_one() || !b.is_one()) {
                return Err(Error::Internal(format!("zeroth moment at n = {n} is not 1")));
            }
            alpha[n][d] = a;
            beta[n][d] = b;
        }
    }

    let alpha_tilde = alpha_tilde_from(&alpha, n_max, d_max);
    Ok(DensityTable {
        n_max,
        d_max,
        route: Route::Recursion,
        alpha,
        beta,
        rho: Vec::new(),
        alpha_tilde,
        alpha_star: Vec::new(),
        beta_star: Vec::new(),
        rho_star: Vec::new(),
    })
}

/// Integral-root moments of general polynomials:
/// `alpha~(n,d) = (p - 1) sum_{m<=n} p^m alpha(m,d) / (p^(n+1) - 1)`.
pub fn alpha_tilde_from(alpha: &Grid, n_max: usize, d_max: usize) -> Grid {
    let one = RationalFunction::one();
    let p = RationalFunction::p();
    let p_minus_1 = &p - &one;
    let mut out = zero_grid(n_max, d_max);
    for d in 0..=d_max {
        let mut partial = RationalFunction::zero();
        for n in 0..=n_max {
            partial = &partial + &(&p_pow(n as i64) * &alpha[n][d]);
            let norm = &p_pow(n as i64 + 1) - &one;
            out[n][d] = &(&p_minus_1 * &partial) / &norm;
        }
    }
    out
}

/// Fills `rho` from `alpha` and `beta` by conditioning on the reduced degree:
/// `rho(n,d) = (p-1)/(p^(n+1)-1) sum_m p^m sum_{d1+d2=d} alpha(m,d1) beta(n-m,d2)`.
pub fn compute_rho_table(mut table: DensityTable) -> DensityTable {
    table.rho = rho_from(&table.alpha, &table.beta, table.n_max, table.d_max);
    table
}

pub(crate) fn rho_from(alpha: &Grid, beta: &Grid, n_max: usize, d_max: usize) -> Grid {
    let one = RationalFunction::one();
    let p = RationalFunction::p();
    let p_minus_1 = &p - &one;
    let mut rho = zero_grid(n_max, d_max);
    for n in 0..=n_max {
        let norm = &p_minus_1 / &(&p_pow(n as i64 + 1) - &one);
        for d in 0..=d_max.min(n) {
            let mut sum = RationalFunction::zero();
            for m in 0..=n {
                let conditional: RationalFunction = (0..=d)
                    .filter(|&d1| !alpha[m][d1].is_zero() && !beta[n - m][d - d1].is_zero())
                    .map(|d1| &alpha[m][d1] * &beta[n - m][d - d1])
                    .sum();
                if !conditional.is_zero() {
                    sum = &sum + &(&p_pow(m as i64) * &conditional);
                }
            }
            rho[n][d] = &norm * &sum;
        }
    }
    rho
}
