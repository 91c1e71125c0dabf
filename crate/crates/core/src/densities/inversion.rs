use num_bigint::BigInt;
use num_integer::binomial;

use super::table::{DensityTable, Grid};
use crate::error::{Error, Result};
use crate::exactalg::RationalFunction;

fn binom(n: usize, k: usize) -> RationalFunction {
    RationalFunction::from_bigint(binomial(BigInt::from(n), BigInt::from(k)))
}

/// Probabilities from factorial moments:
/// `P(n, r) = sum_{d=r}^{n} (-1)^(d-r) C(d, r) M(n, d)`.
///
/// Row `n` of `moments` must contain every `d <= n`; rows are produced for
/// `n < rows`.
pub fn moments_to_star(moments: &Grid, rows: usize) -> Result<Grid> {
    let mut out = Vec::with_capacity(rows);
    for (n, row) in moments.iter().enumerate().take(rows) {
        if row.len() <= n {
            return Err(Error::InvalidArgument(format!("row {n} lacks moments up to d = {n}")));
        }
        let star: Vec<RationalFunction> = (0..=n)
            .map(|r| {
                (r..=n)
                    .map(|d| {
                        let term = &binom(d, r) * &row[d];
                        if (d - r) % 2 == 1 { -term } else { term }
                    })
                    .sum()
            })
            .collect();
        out.push(star);
    }
    Ok(out)
}

/// Factorial moments from probabilities: `M(n, d) = sum_r C(r, d) P(n, r)`.
pub fn star_to_moments(star: &Grid) -> Grid {
    star.iter()
        .map(|row| {
            let n = row.len() - 1;
            (0..=n)
                .map(|d| (d..=n).map(|r| &binom(r, d) * &row[r]).sum())
                .collect()
        })
        .collect()
}

/// Fills the three probability grids for every `n <= min(n_max, d_max)`.
pub fn moments_to_probabilities(mut table: DensityTable) -> Result<DensityTable> {
    let rows = table.n_max.min(table.d_max) + 1;
    table.alpha_star = moments_to_star(&table.alpha, rows)?;
    table.beta_star = moments_to_star(&table.beta, rows)?;
    if !table.rho.is_empty() {
        table.rho_star = moments_to_star(&table.rho, rows)?;
    }
    Ok(table)
}
