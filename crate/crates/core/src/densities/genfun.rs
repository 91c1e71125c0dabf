//! Moments from the generating-function identities.
//!
//! `A_d(t) = (1-t) sum_n alpha(n,d) t^n` and `B_d` likewise for `beta` are the
//! unique series with
//!
//! * `sum_d A_d(p t) u^d = (sum_d B_d(t) u^d)^p`,
//! * `B_d(t) - t B_d(t/p) = Phi(A_d(t) - t A_d(p t))`,
//! * `A_0 = B_0 = 1`, `A_1, B_1 = t + O(t^2)`, `A_d, B_d = O(t^d)`.
//!
//! They are solved coefficient by coefficient, by induction on `d` and then
//! on the power of `t`. At step `(d, n)` the first identity reads
//! `p^n a_n = p b_n + k_n`, where `k` is the `u^d` coefficient of the `p`-th
//! power of the already known part `1 + sum_{d' < d} B_d' u^d'`; the second
//! gives `b_n = p^(-n(n-1)/2) a_n + (terms in a_{n-1}, b_{n-1})`. For `n >= 2`
//! the pair is nonsingular. `R_d` then comes from the `(p+1)`-th power.

use super::table::{zero_grid, DensityTable, Route};
use crate::error::{Error, Result};
use crate::exactalg::RationalFunction;
use crate::series::{binom2, BivariateSeries, TruncatedSeries};

/// The truncated generating series `A_d`, `B_d`, `R_d` for `d <= d_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSeries {
    pub t_order: usize,
    pub a: Vec<TruncatedSeries>,
    pub b: Vec<TruncatedSeries>,
    pub r: Vec<TruncatedSeries>,
}

impl GeneratingSeries {
    /// Solves the identities for all `d <= d_max` up to `t^t_order`.
    pub fn compute(d_max: usize, t_order: usize) -> Result<Self> {
        let p = RationalFunction::p();
        let one = RationalFunction::one();
        let mut a = vec![TruncatedSeries::one(t_order)];
        let mut b = vec![TruncatedSeries::one(t_order)];

        for d in 1..=d_max {
            let known = BivariateSeries::from_terms(b.clone(), d);
            let k = known.pow_symbolic(&p)?.u_coeff(d).clone();

            let mut ac = vec![RationalFunction::zero(); t_order + 1];
            let mut bc = vec![RationalFunction::zero(); t_order + 1];
            if d == 1 && t_order >= 1 {
                ac[1] = one.clone();
                bc[1] = one.clone();
            }
            // n = 0, 1 are fixed by normalisation; check they are consistent.
            for n in 0..=t_order.min(1) {
                let lhs = &p.pow(n as i64) * &ac[n];
                let rhs = &(&p * &bc[n]) + k.coeff(n);
                if lhs != rhs {
                    return Err(Error::Internal(format!(
                        "normalisation of A_{d}, B_{d} violates the p-th power identity at t^{n}"
                    )));
                }
            }
            for n in 2..=t_order {
                let c_a = RationalFunction::p_pow(1 - n as i64);
                let c_b = RationalFunction::p_pow(-binom2(n));
                // b_n = c_b a_n + l
                let l = &(&c_a * &bc[n - 1]) - &(&(&c_b * &RationalFunction::p_pow(n as i64 - 1)) * &ac[n - 1]);
                // a_n = c_a b_n + p^-n k_n
                let kn = &RationalFunction::p_pow(-(n as i64)) * k.coeff(n);
                let det = &one - &(&c_a * &c_b);
                let an = &(&(&c_a * &l) + &kn) / &det;
                let bn = &(&c_b * &an) + &l;
                if n < d && (!an.is_zero() || !bn.is_zero()) {
                    return Err(Error::Internal(format!(
                        "A_{d} or B_{d} has a nonzero t^{n} coefficient below t^{d}"
                    )));
                }
                ac[n] = an;
                bc[n] = bn;
            }
            a.push(TruncatedSeries::from_coefficients(ac, t_order));
            b.push(TruncatedSeries::from_coefficients(bc, t_order));
        }

        let all_b = BivariateSeries::from_terms(b.clone(), d_max);
        let p_plus_1 = &p + &one;
        let rho_series = all_b.pow_symbolic(&p_plus_1)?;
        let r = (0..=d_max).map(|d| rho_series.u_coeff(d).clone()).collect();
        Ok(GeneratingSeries { t_order, a, b, r })
    }
}

/// `sum_{m<=n} c_m` for every `n`: undoes the `(1 - t)` normalisation.
pub(crate) fn partial_sums(s: &TruncatedSeries, upto: usize) -> Vec<RationalFunction> {
    let mut acc = RationalFunction::zero();
    (0..=upto)
        .map(|n| {
            acc = &acc + s.coeff(n);
            acc.clone()
        })
        .collect()
}

/// `1 + p + ... + p^n`.
pub(crate) fn p_repunit(n: usize) -> RationalFunction {
    (0..=n).map(|k| RationalFunction::p_pow(k as i64)).sum()
}

/// Undoes the `(1 - t)(1 - p t)` and `1 + p + ... + p^n` normalisations of `R_d`.
pub(crate) fn rho_from_series(r: &TruncatedSeries, upto: usize) -> Vec<RationalFunction> {
    let geo = TruncatedSeries::from_coefficients((0..=upto).map(p_repunit).collect(), upto);
    let weighted = r.truncate(upto).mul(&geo);
    (0..=upto).map(|n| weighted.coeff(n) / &p_repunit(n)).collect()
}

/// `alpha`, `beta` and `rho` grids for `n <= n_max`, `d <= d_max` from the
/// generating-function route.
pub fn compute_genfun_route(n_max: usize, d_max: usize) -> Result<DensityTable> {
    if d_max > n_max {
        return Err(Error::InvalidArgument(format!("d_max = {d_max} exceeds n_max = {n_max}")));
    }
    let series = GeneratingSeries::compute(d_max, n_max)?;
    Ok(table_from_series(&series, n_max, d_max))
}

pub(crate) fn table_from_series(series: &GeneratingSeries, n_max: usize, d_max: usize) -> DensityTable {
    let mut alpha = zero_grid(n_max, d_max);
    let mut beta = zero_grid(n_max, d_max);
    let mut rho = zero_grid(n_max, d_max);
    for d in 0..=d_max {
        let sa = partial_sums(&series.a[d], n_max);
        let sb = partial_sums(&series.b[d], n_max);
        let sr = rho_from_series(&series.r[d], n_max);
        for n in 0..=n_max {
            alpha[n][d] = sa[n].clone();
            beta[n][d] = sb[n].clone();
            rho[n][d] = sr[n].clone();
        }
    }
    DensityTable {
        n_max,
        d_max,
        route: Route::GeneratingFunction,
        alpha,
        beta,
        rho,
        alpha_tilde: Vec::new(),
        alpha_star: Vec::new(),
        beta_star: Vec::new(),
        rho_star: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn degree_one_series() {
        let g = GeneratingSeries::compute(1, 3).unwrap();
        let coeffs = |s: &TruncatedSeries| s.coefficients().to_vec();
        assert_eq!(coeffs(&g.a[1]), vec![rf("0"), rf("1"), rf("-1/(p+1)"), rf("0")]);
        assert_eq!(coeffs(&g.b[1]), vec![rf("0"), rf("1"), rf("-p/(p+1)"), rf("0")]);
        assert_eq!(coeffs(&g.r[1]), vec![rf("0"), rf("p+1"), rf("-p"), rf("0")]);
    }

    #[test]
    fn degree_two_series() {
        let g = GeneratingSeries::compute(2, 5).unwrap();
        // eta = 1/((p+1)^2 (p^4+p^3+p^2+p+1))
        let eta = rf("1/(p^6 + 3p^5 + 4p^4 + 4p^3 + 4p^2 + 3p + 1)");
        let two = |s: &TruncatedSeries, n: usize| s.coeff(n).scale_int(2);
        let with_eta = |s: &str| &rf(s) * &eta;

        assert_eq!(two(&g.a[2], 2), rf("p/(p+1)"));
        assert_eq!(two(&g.a[2], 3), -with_eta("2p^5 + 2p^4 + p^3 + 2p^2 + p"));
        assert_eq!(two(&g.a[2], 4), with_eta("p^4"));
        assert_eq!(two(&g.b[2], 2), rf("1/(p+1)"));
        assert_eq!(two(&g.b[2], 3), -with_eta("p^5 + 2p^4 + p^3 + 2p^2 + 2p"));
        assert_eq!(two(&g.b[2], 4), with_eta("p^2"));
        assert_eq!(two(&g.r[2], 2), rf("p^2 + p + 1"));
        assert_eq!(two(&g.r[2], 4), with_eta("p^8 + 2p^7 + 2p^6 + 2p^5 + 2p^4 + 2p^3 + p^2"));
        {
            let n = 5;
            assert!(g.a[2].coeff(n).is_zero() && g.b[2].coeff(n).is_zero() && g.r[2].coeff(n).is_zero());
        }
    }

    #[test]
    fn grids_agree_with_closed_forms() {
        let t = compute_genfun_route(5, 2).unwrap();
        let eta = rf("1/(p^6 + 3p^5 + 4p^4 + 4p^3 + 4p^2 + 3p + 1)");
        assert_eq!(t.alpha[3][2].scale_int(2), &rf("p^6 + p^3") * &eta);
        assert_eq!(t.alpha[5][2].scale_int(2), &rf("p^6 + p^4 + p^3") * &eta);
        assert_eq!(t.beta[4][2].scale_int(2), &rf("p^3 + p^2 + 1") * &eta);
        assert_eq!(t.rho[2][2], RationalFunction::from_ratio(1, 2));
        assert_eq!(t.rho[5][2].scale_int(2), rf("(p^4 + 2p^2 + 1)/(p^4+p^3+p^2+p+1)"));
    }
}
