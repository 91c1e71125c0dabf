use serde::Serialize;

use super::genfun::p_repunit;
use super::table::DensityTable;
use crate::error::{Error, Result};
use crate::exactalg::RationalFunction;
use crate::series::TruncatedSeries;

/// `A_d`, `B_d`, `R_d` as closed polynomials of degree at most `2d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratingPolynomials {
    pub d: usize,
    pub a: TruncatedSeries,
    pub b: TruncatedSeries,
    pub r: TruncatedSeries,
}

/// Column `d` of a grid, extended past the last row by its final value.
fn stabilised(grid: &[Vec<RationalFunction>], d: usize, upto: usize) -> Vec<RationalFunction> {
    let last = grid.len() - 1;
    (0..=upto).map(|n| grid[n.min(last)][d].clone()).collect()
}

/// `(1 - t) sum_n v_n t^n`.
fn first_differences(values: &[RationalFunction]) -> Vec<RationalFunction> {
    values
        .iter()
        .enumerate()
        .map(|(n, v)| if n == 0 { v.clone() } else { v - &values[n - 1] })
        .collect()
}

/// Series of `A_d`, `B_d`, `R_d` read off the moment grids, to `t^upto`.
///
/// Coefficients up to `t^n_max` come straight from the grids. Anything
/// beyond uses the last row, which is only justified once the column has
/// stabilised.
pub(crate) fn series_from_grids(table: &DensityTable, d: usize, upto: usize) -> [TruncatedSeries; 3] {
    let a = first_differences(&stabilised(&table.alpha, d, upto));
    let b = first_differences(&stabilised(&table.beta, d, upto));
    let s: Vec<RationalFunction> = stabilised(&table.rho, d, upto)
        .iter()
        .enumerate()
        .map(|(n, v)| &p_repunit(n) * v)
        .collect();
    // (1 - t)(1 - p t) = 1 - (p + 1) t + p t^2
    let p = RationalFunction::p();
    let p_plus_1 = &p + &RationalFunction::one();
    let r = (0..=upto)
        .map(|n| {
            let mut c = s[n].clone();
            if n >= 1 {
                c = &c - &(&p_plus_1 * &s[n - 1]);
            }
            if n >= 2 {
                c = &c + &(&p * &s[n - 2]);
            }
            c
        })
        .collect();
    [
        TruncatedSeries::from_coefficients(a, upto),
        TruncatedSeries::from_coefficients(b, upto),
        TruncatedSeries::from_coefficients(r, upto),
    ]
}

/// Assembles `A_d`, `B_d`, `R_d` from a table with `alpha`, `beta` and `rho`
/// filled to `n_max >= 2d`.
///
/// Moments stop depending on `n` once `n >= 2d`, so the grids determine the
/// polynomials completely. Every available coefficient above `t^(2d)` is
/// checked to vanish; a nonzero one is reported as an internal fault.
pub fn assemble_generating_polynomials(table: &DensityTable, d: usize) -> Result<GeneratingPolynomials> {
    if d > table.d_max {
        return Err(Error::InvalidArgument(format!("d = {d} exceeds d_max = {}", table.d_max)));
    }
    if table.n_max < 2 * d {
        return Err(Error::InvalidArgument(format!(
            "A_{d} needs moments up to n = {}, table stops at {}",
            2 * d,
            table.n_max
        )));
    }
    if table.rho.is_empty() {
        return Err(Error::InvalidArgument("table has no rho grid".into()));
    }
    let upto = table.n_max.max(2 * d);
    let [a, b, r] = series_from_grids(table, d, upto);
    let close = |s: TruncatedSeries| -> Result<TruncatedSeries> {
        let s = s.assert_exact_polynomial(2 * d)?;
        Ok(TruncatedSeries::exact_polynomial(s.coefficients()[..=2 * d].to_vec(), upto))
    };
    Ok(GeneratingPolynomials { d, a: close(a)?, b: close(b)?, r: close(r)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::{compute_moment_tables_recursive, compute_rho_table};

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn degree_one_polynomials() {
        let t = compute_rho_table(compute_moment_tables_recursive(4, 2).unwrap());
        let g = assemble_generating_polynomials(&t, 1).unwrap();
        assert_eq!(g.a.exact_degree(), Some(2));
        assert_eq!(g.a.to_string(), "t - [1/(p + 1)]t^2");
        assert_eq!(g.b.coefficients()[..3], [rf("0"), rf("1"), rf("-p/(p+1)")]);
        assert_eq!(g.r.to_string(), "(p + 1)t - pt^2");
    }

    #[test]
    fn degree_zero_is_one() {
        let t = compute_rho_table(compute_moment_tables_recursive(2, 1).unwrap());
        let g = assemble_generating_polynomials(&t, 0).unwrap();
        for s in [&g.a, &g.b, &g.r] {
            assert_eq!(s.exact_degree(), Some(0));
            assert!(s.coeff(0).is_one());
        }
    }

    #[test]
    fn quartic_coefficient_of_a2() {
        let t = compute_rho_table(compute_moment_tables_recursive(4, 2).unwrap());
        let g = assemble_generating_polynomials(&t, 2).unwrap();
        let eta = rf("1/(p^6 + 3p^5 + 4p^4 + 4p^3 + 4p^2 + 3p + 1)");
        assert_eq!(g.a.coeff(4).scale_int(2), &rf("p^4") * &eta);
    }

    #[test]
    fn short_tables_are_rejected() {
        let t = compute_rho_table(compute_moment_tables_recursive(3, 2).unwrap());
        assert!(assemble_generating_polynomials(&t, 2).is_err());
    }

    #[test]
    fn non_stabilised_column_is_a_fault() {
        let mut t = compute_rho_table(compute_moment_tables_recursive(4, 1).unwrap());
        t.alpha[4][1] = RationalFunction::one();
        assert!(matches!(assemble_generating_polynomials(&t, 1), Err(Error::Internal(_))));
    }
}
