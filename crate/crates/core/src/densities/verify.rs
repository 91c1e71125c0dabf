//! Exact checks of the identities the density tables must satisfy.
//!
//! Each check is one named line in a [`Report`]. Checks over a grid are
//! aggregated: the line fails if any entry fails, and the detail names the
//! first few offending entries.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::genfun::{compute_genfun_route, p_repunit};
use super::inversion::{moments_to_probabilities, star_to_moments};
use super::polys::{assemble_generating_polynomials, series_from_grids};
use super::recursive::{compute_moment_tables_with, compute_rho_table};
use super::splitting::{verify_euler_product_with, SplittingCache};
use super::table::{DensityTable, Grid};
use crate::exactalg::{Limit, RationalFunction};
use crate::par;
use crate::series::{binom2, BivariateSeries, TruncatedSeries};

/// Primes at which probabilities are checked to lie in `[0, 1]`.
pub const SAMPLE_PRIMES: [i64; 5] = [2, 3, 5, 7, 11];

const MAX_DETAIL: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub group: String,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    fn from_failures(group: &str, name: impl Into<String>, failures: Vec<String>) -> Self {
        let detail = if failures.is_empty() {
            None
        } else {
            let mut shown: Vec<String> = failures.iter().take(MAX_DETAIL).cloned().collect();
            if failures.len() > MAX_DETAIL {
                shown.push(format!("and {} more", failures.len() - MAX_DETAIL));
            }
            Some(shown.join("; "))
        };
        CheckResult { group: group.into(), name: name.into(), passed: failures.is_empty(), detail }
    }

    fn single(group: &str, name: impl Into<String>, passed: bool) -> Self {
        CheckResult { group: group.into(), name: name.into(), passed, detail: None }
    }
}

/// Ordered list of named pass/fail lines.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{} [{}] {}", if c.passed { "PASS" } else { "FAIL" }, c.group, c.name)?;
            if let Some(d) = &c.detail {
                write!(f, " -- {d}")?;
            }
            writeln!(f)?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

fn factorial_recip(k: usize) -> BigRational {
    let f: BigInt = (1..=k).map(BigInt::from).product();
    BigRational::new(BigInt::one(), f)
}

fn collect_failures<I, F>(indices: I, mut ok: F) -> Vec<String>
where
    I: IntoIterator<Item = (usize, usize)>,
    F: FnMut(usize, usize) -> bool,
{
    indices.into_iter().filter(|&(n, k)| !ok(n, k)).map(|(n, k)| format!("({n},{k})")).collect()
}

/// `(n, d)` pairs with `d <= min(n, d_max)`.
fn lower_triangle(n_max: usize, d_max: usize) -> Vec<(usize, usize)> {
    (0..=n_max).flat_map(|n| (0..=n.min(d_max)).map(move |d| (n, d))).collect()
}

fn star_indices(grid: &Grid) -> Vec<(usize, usize)> {
    grid.iter().enumerate().flat_map(|(n, row)| (0..row.len()).map(move |r| (n, r))).collect()
}

fn series_diff(lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> Vec<String> {
    let order = lhs.order().min(rhs.order());
    (0..=order).filter(|&n| lhs.coeff(n) != rhs.coeff(n)).map(|n| format!("t^{n}")).collect()
}

fn bivariate_diff(lhs: &BivariateSeries, rhs: &BivariateSeries) -> Vec<String> {
    (0..=lhs.u_order().min(rhs.u_order()))
        .flat_map(|d| series_diff(lhs.u_coeff(d), rhs.u_coeff(d)).into_iter().map(move |t| format!("u^{d} {t}")))
        .collect()
}

/// `B_d(t) - t B_d(t/p)` against `Phi(A_d(t) - t A_d(p t))`.
fn valuation_identity(a: &TruncatedSeries, b: &TruncatedSeries) -> Vec<String> {
    let p = RationalFunction::p();
    let lhs = b.sub(&b.scale_t(&p.recip().unwrap()).shift(1));
    let rhs = a.sub(&a.scale_t(&p).shift(1)).phi();
    series_diff(&lhs, &rhs)
}

type Job<'a> = Box<dyn Fn() -> Vec<CheckResult> + Sync + Send + 'a>;

fn run_jobs(jobs: Vec<Job<'_>>) -> Report {
    let results = par::map_collect(&jobs, |job| job());
    Report { checks: results.into_iter().flatten().collect() }
}

/// Symmetries, the generating-function identities, polynomiality and
/// stabilisation, and the probability axioms of the star grids.
///
/// The table must hold every grid (as produced by [`full_table`]); checks
/// run up to `min(n_max, table.n_max)` and `min(d_max, table.d_max)`.
pub fn verify_identities(table: &DensityTable, n_max: usize, d_max: usize) -> Report {
    let nn = n_max.min(table.n_max);
    let dd = d_max.min(table.d_max).min(nn);
    let tri = lower_triangle(nn, dd);
    let p_owned = RationalFunction::p();
    let p_recip_owned = p_owned.recip().unwrap();
    let (p, p_recip) = (&p_owned, &p_recip_owned);
    const G_SYM: &str = "symmetry";
    const G_GF: &str = "generating functions";
    const G_POLY: &str = "polynomiality";
    const G_PROB: &str = "probabilities";

    let series = || -> Vec<[TruncatedSeries; 3]> { (0..=dd).map(|d| series_from_grids(table, d, nn)).collect() };
    let polys = || (0..=dd).filter(|&d| 2 * d <= nn).map(|d| assemble_generating_polynomials(table, d));

    let mut jobs: Vec<Job> = Vec::new();
    let tri2 = tri.clone();
    jobs.push(Box::new(move || {
        vec![
            CheckResult::from_failures(
                G_SYM,
                "rho(n,d) is invariant under p -> 1/p",
                collect_failures(tri2.iter().copied(), |n, d| table.rho[n][d].is_symmetric()),
            ),
            CheckResult::from_failures(
                G_SYM,
                "alpha(n,d; p) = beta(n,d; 1/p)",
                collect_failures(tri2.iter().copied(), |n, d| {
                    table.alpha[n][d] == table.beta[n][d].reciprocal_substitute()
                }),
            ),
            CheckResult::from_failures(
                G_SYM,
                "rho*(n,r) is invariant under p -> 1/p",
                collect_failures(star_indices(&table.rho_star), |n, r| table.rho_star[n][r].is_symmetric()),
            ),
            CheckResult::from_failures(
                G_SYM,
                "alpha*(n,r; p) = beta*(n,r; 1/p)",
                collect_failures(star_indices(&table.alpha_star), |n, r| {
                    table.alpha_star[n][r] == table.beta_star[n][r].reciprocal_substitute()
                }),
            ),
        ]
    }));

    jobs.push(Box::new(move || {
        let s = series();
        let a = BivariateSeries::from_terms(s.iter().map(|x| x[0].clone()).collect(), dd);
        let b = BivariateSeries::from_terms(s.iter().map(|x| x[1].clone()).collect(), dd);
        let r = BivariateSeries::from_terms(s.iter().map(|x| x[2].clone()).collect(), dd);
        let a_pt = a.scale_t(p);
        let b_p = b.pow_symbolic(p).expect("B_0 = 1");
        let b_p1 = b.pow_symbolic(&(p + &RationalFunction::one())).expect("B_0 = 1");
        let trunc = format!("(to u^{dd} t^{nn})");
        vec![
            CheckResult::from_failures(G_GF, format!("sum A_d(pt) u^d = (sum B_d(t) u^d)^p {trunc}"), bivariate_diff(&a_pt, &b_p)),
            CheckResult::from_failures(G_GF, format!("sum R_d(t) u^d = (sum B_d(t) u^d)^(p+1) {trunc}"), bivariate_diff(&r, &b_p1)),
            CheckResult::from_failures(
                G_GF,
                format!("sum R_d(t) u^d = (sum A_d(pt) u^d)(sum B_d(t) u^d) {trunc}"),
                bivariate_diff(&r, &a_pt.mul(&b)),
            ),
            CheckResult::from_failures(
                G_GF,
                format!("B_d(t) - t B_d(t/p) = Phi(A_d(t) - t A_d(pt)) {trunc}"),
                s.iter()
                    .enumerate()
                    .flat_map(|(d, x)| valuation_identity(&x[0], &x[1]).into_iter().map(move |e| format!("d={d} {e}")))
                    .collect(),
            ),
        ]
    }));

    jobs.push(Box::new(move || {
        let s = series();
        let mut degree = Vec::new();
        for (d, x) in s.iter().enumerate() {
            for (label, ser) in ["A", "B", "R"].iter().zip(x.iter()) {
                if let Some(k) = ser.stored_degree().filter(|&k| k > 2 * d) {
                    degree.push(format!("{label}_{d} has a t^{k} term"));
                }
            }
        }
        let mut at_one = Vec::new();
        let mut stab = Vec::new();
        let one = RationalFunction::one();
        for g in polys() {
            let g = match g {
                Ok(g) => g,
                Err(e) => {
                    degree.push(e.to_string());
                    continue;
                }
            };
            let d = g.d;
            let ev = |s: &TruncatedSeries, x: &RationalFunction| s.eval_polynomial(x).expect("exact polynomial");
            let (a1, b1, r1) = (ev(&g.a, &one), ev(&g.b, &one), ev(&g.r, &one));
            if a1 != ev(&g.a, p) {
                at_one.push(format!("A_{d}(1) != A_{d}(p)"));
            }
            if b1 != ev(&g.b, p_recip) {
                at_one.push(format!("B_{d}(1) != B_{d}(1/p)"));
            }
            if r1 != ev(&g.r, p_recip) {
                at_one.push(format!("R_{d}(1) != R_{d}(1/p)"));
            }
            for n in d..=nn {
                if n >= 2 * d && table.alpha[n][d] != a1 {
                    stab.push(format!("alpha({n},{d}) != A_{d}(1)"));
                }
                if n >= 2 * d && table.beta[n][d] != b1 {
                    stab.push(format!("beta({n},{d}) != B_{d}(1)"));
                }
                if n + 1 >= 2 * d && table.rho[n][d] != r1 {
                    stab.push(format!("rho({n},{d}) != R_{d}(1)"));
                }
                if n >= 2 * d && table.alpha_tilde[n][d] != table.alpha[n][d] {
                    stab.push(format!("alpha~({n},{d}) != alpha({n},{d})"));
                }
            }
        }
        vec![
            CheckResult::from_failures(G_POLY, format!("A_d, B_d, R_d have degree <= 2d (to t^{nn})"), degree),
            CheckResult::from_failures(G_POLY, "A_d(1) = A_d(p), B_d(1) = B_d(1/p), R_d(1) = R_d(1/p)", at_one),
            CheckResult::from_failures(
                G_POLY,
                "alpha, beta, alpha~ equal A_d(1), B_d(1), alpha for n >= 2d; rho = R_d(1) for n >= 2d-1",
                stab,
            ),
        ]
    }));

    jobs.push(Box::new(move || {
        let grids = [("rho*", &table.rho_star), ("alpha*", &table.alpha_star), ("beta*", &table.beta_star)];
        let mut sums = Vec::new();
        let mut zero = Vec::new();
        let mut range = Vec::new();
        let mut round_trip = Vec::new();
        for (label, g) in grids {
            for (n, row) in g.iter().enumerate() {
                let s: RationalFunction = row.iter().cloned().sum();
                if !s.is_one() {
                    sums.push(format!("{label} row {n}"));
                }
                if n >= 2 && !row[n - 1].is_zero() {
                    zero.push(format!("{label}({n},{})", n - 1));
                }
                for (r, v) in row.iter().enumerate() {
                    for q in SAMPLE_PRIMES {
                        match v.eval_int(q) {
                            Ok(x) if !x.is_negative_or_above_one() => {}
                            _ => range.push(format!("{label}({n},{r}) at p={q}")),
                        }
                    }
                }
            }
            let moments = match label {
                "rho*" => &table.rho,
                "alpha*" => &table.alpha,
                _ => &table.beta,
            };
            for (n, row) in star_to_moments(g).iter().enumerate() {
                if row[..] != moments[n][..row.len()] {
                    round_trip.push(format!("{label} row {n}"));
                }
            }
        }
        let alpha0 = collect_failures((0..=nn).map(|n| (n, 0)), |n, _| {
            table.alpha[n][0].is_one() && table.beta[n][0].is_one() && table.rho[n][0].is_one()
        });
        vec![
            CheckResult::from_failures(G_PROB, "every star row sums to 1", sums),
            CheckResult::from_failures(G_PROB, "exactly n-1 roots has probability 0 for n >= 2", zero),
            CheckResult::from_failures(G_PROB, "star values lie in [0, 1] at p = 2, 3, 5, 7, 11", range),
            CheckResult::from_failures(G_PROB, "star grids invert back to the moment grids", round_trip),
            CheckResult::from_failures(G_PROB, "alpha(n,0) = beta(n,0) = rho(n,0) = 1", alpha0),
        ]
    }));

    run_jobs(jobs)
}

trait UnitInterval {
    fn is_negative_or_above_one(&self) -> bool;
}

impl UnitInterval for BigRational {
    fn is_negative_or_above_one(&self) -> bool {
        *self < BigRational::zero() || *self > BigRational::one()
    }
}

/// The split-completely and no-root specialisations of the generating
/// function identities.
pub fn verify_specializations(table: &DensityTable, n_max: usize) -> Report {
    let m = n_max.min(table.n_max).min(table.d_max).min(table.star_rows().saturating_sub(1));
    let p_owned = RationalFunction::p();
    let p = &p_owned;
    const G_SPLIT: &str = "split completely";
    const G_NOROOT: &str = "no roots";

    let mut jobs: Vec<Job> = Vec::new();
    jobs.push(Box::new(move || {
        let diag = |g: &Grid| TruncatedSeries::from_coefficients((0..=m).map(|n| g[n][n].clone()).collect(), m);
        let sa = diag(&table.alpha);
        let sb = diag(&table.beta);
        let sr = TruncatedSeries::from_coefficients((0..=m).map(|n| &p_repunit(n) * &table.rho[n][n]).collect(), m);
        let lhs_a = sa.scale_t(p);
        let rhs_a = sb.pow_symbolic(p).expect("beta(0,0) = 1");
        let rhs_r = sb.pow_symbolic(&(p + &RationalFunction::one())).expect("beta(0,0) = 1");
        let valuation = collect_failures((0..=m).map(|n| (n, n)), |n, _| {
            table.beta[n][n] == &RationalFunction::p_pow(-binom2(n)) * &table.alpha[n][n]
        });
        let top = collect_failures((0..=m).map(|n| (n, n)), |n, _| {
            table.alpha[n][n] == table.alpha_star[n][n]
                && table.beta[n][n] == table.beta_star[n][n]
                && table.rho[n][n] == table.rho_star[n][n]
        });
        vec![
            CheckResult::from_failures(G_SPLIT, format!("sum alpha(n,n)(pt)^n = (sum beta(n,n) t^n)^p (to t^{m})"), series_diff(&lhs_a, &rhs_a)),
            CheckResult::from_failures(
                G_SPLIT,
                format!("sum (p^n+...+1) rho(n,n) t^n = (sum beta(n,n) t^n)^(p+1) (to t^{m})"),
                series_diff(&sr, &rhs_r),
            ),
            CheckResult::from_failures(G_SPLIT, "beta(n,n) = p^(-n(n-1)/2) alpha(n,n)", valuation),
            CheckResult::from_failures(G_SPLIT, "moments with d = n equal the star values with r = n", top),
        ]
    }));

    jobs.push(Box::new(move || {
        // From the moments: sum_d (-1)^d A_d, truncated at t^m (A_d = O(t^d)).
        let mut from_moments = [TruncatedSeries::zero(m), TruncatedSeries::zero(m), TruncatedSeries::zero(m)];
        for d in 0..=m {
            let s = series_from_grids(table, d, m);
            for (acc, x) in from_moments.iter_mut().zip(s.iter()) {
                *acc = if d % 2 == 0 { acc.add(x) } else { acc.sub(x) };
            }
        }
        // From the star grids directly.
        let col0 = |g: &Grid| -> Vec<RationalFunction> { (0..=m).map(|n| g[n][0].clone()).collect() };
        let diff = |v: Vec<RationalFunction>| {
            TruncatedSeries::from_coefficients(
                (0..v.len()).map(|n| if n == 0 { v[0].clone() } else { &v[n] - &v[n - 1] }).collect(),
                m,
            )
        };
        let a_star = diff(col0(&table.alpha_star));
        let b_star = diff(col0(&table.beta_star));
        let s: Vec<RationalFunction> = col0(&table.rho_star).iter().enumerate().map(|(n, v)| &p_repunit(n) * v).collect();
        let p_plus_1 = p + &RationalFunction::one();
        let r_star = TruncatedSeries::from_coefficients(
            (0..=m)
                .map(|n| {
                    let mut c = s[n].clone();
                    if n >= 1 {
                        c = &c - &(&p_plus_1 * &s[n - 1]);
                    }
                    if n >= 2 {
                        c = &c + &(p * &s[n - 2]);
                    }
                    c
                })
                .collect(),
            m,
        );
        let two_ways: Vec<String> = [("A*", &a_star), ("B*", &b_star), ("R*", &r_star)]
            .iter()
            .zip(from_moments.iter())
            .flat_map(|((label, direct), alt)| series_diff(direct, alt).into_iter().map(move |e| format!("{label} {e}")))
            .collect();
        let a_pt = a_star.scale_t(p);
        let b_p = b_star.pow_symbolic(p).expect("beta*(0,0) = 1");
        let b_p1 = b_star.pow_symbolic(&p_plus_1).expect("beta*(0,0) = 1");
        let mut r_prod = series_diff(&r_star, &a_pt.mul(&b_star));
        r_prod.extend(series_diff(&r_star, &b_p1));
        vec![
            CheckResult::from_failures(G_NOROOT, format!("A*, B*, R* from star grids = alternating sums of A_d, B_d, R_d (to t^{m})"), two_ways),
            CheckResult::from_failures(G_NOROOT, format!("A*(pt) = B*(t)^p (to t^{m})"), series_diff(&a_pt, &b_p)),
            CheckResult::from_failures(G_NOROOT, format!("R*(t) = A*(pt) B*(t) = B*(t)^(p+1) (to t^{m})"), r_prod),
            CheckResult::from_failures(
                G_NOROOT,
                format!("B*(t) - t B*(t/p) = Phi(A*(t) - t A*(pt)) (to t^{m})"),
                valuation_identity(&a_star, &b_star),
            ),
        ]
    }));

    run_jobs(jobs)
}

fn limit_is(v: &RationalFunction, correction: i64, expected: &BigRational) -> bool {
    let scaled = v * &RationalFunction::p_pow(correction);
    scaled.large_p_limit() == Limit::Finite(expected.clone())
}

/// Limits as `p -> infinity` of the moments and the star values.
pub fn verify_large_p(table: &DensityTable, n_max: usize) -> Report {
    const G: &str = "large p";
    let nn = n_max.min(table.n_max);
    let dd = table.d_max.min(nn);
    let tri = lower_triangle(nn, dd);
    let k_corr = |n: usize, d: usize| binom2((d + 1).min(n));

    let moment = |grid: &Grid, corrected: bool| {
        collect_failures(tri.iter().copied(), |n, d| {
            let c = if corrected { k_corr(n, d) } else { 0 };
            limit_is(&grid[n][d], c, &factorial_recip(d))
        })
    };
    let derangement = |n: usize, r: usize| -> BigRational {
        let s: BigRational = (0..=n - r)
            .map(|d| if d % 2 == 0 { factorial_recip(d) } else { -factorial_recip(d) })
            .fold(BigRational::zero(), |a, b| a + b);
        s * factorial_recip(r)
    };
    let star = |grid: &Grid| collect_failures(star_indices(grid), |n, r| limit_is(&grid[n][r], 0, &derangement(n, r)));
    let beta_star = collect_failures(
        star_indices(&table.beta_star).into_iter().filter(|&(n, r)| r + 1 != n),
        |n, r| limit_is(&table.beta_star[n][r], k_corr(n, r), &factorial_recip(r)),
    );

    let mut checks = vec![
        CheckResult::from_failures(G, "lim alpha(n,d) = 1/d!", moment(&table.alpha, false)),
        CheckResult::from_failures(G, "lim rho(n,d) = 1/d!", moment(&table.rho, false)),
        CheckResult::from_failures(G, "lim p^C(k,2) beta(n,d) = 1/d!, k = min(d+1,n)", moment(&table.beta, true)),
        CheckResult::from_failures(G, "lim rho*(n,r) = (1/r!) sum_{d<=n-r} (-1)^d/d!", star(&table.rho_star)),
        CheckResult::from_failures(G, "lim alpha*(n,r) = (1/r!) sum_{d<=n-r} (-1)^d/d!", star(&table.alpha_star)),
        CheckResult::from_failures(G, "lim p^C(k,2) beta*(n,r) = 1/r!, k = min(r+1,n), r != n-1", beta_star),
    ];
    if let Some(v) = table.rho_star.get(4).map(|row| &row[0]) {
        checks.push(CheckResult::single(G, "lim rho*(4,0) = 3/8", limit_is(v, 0, &BigRational::new(3.into(), 8.into()))));
    }
    Report { checks }
}

/// Entry-by-entry comparison of the moment grids of two tables.
pub fn verify_route_equivalence(recursive: &DensityTable, genfun: &DensityTable) -> Report {
    const G: &str = "route equivalence";
    let cmp = |a: &Grid, b: &Grid| {
        let idx: Vec<(usize, usize)> = a
            .iter()
            .enumerate()
            .flat_map(|(n, row)| (0..row.len()).map(move |d| (n, d)))
            .collect();
        if a.len() != b.len() {
            return vec![format!("{} rows vs {} rows", a.len(), b.len())];
        }
        collect_failures(idx, |n, d| b[n].get(d) == Some(&a[n][d]))
    };
    Report {
        checks: vec![
            CheckResult::from_failures(G, "alpha: recursion = generating functions", cmp(&recursive.alpha, &genfun.alpha)),
            CheckResult::from_failures(G, "beta: recursion = generating functions", cmp(&recursive.beta, &genfun.beta)),
            CheckResult::from_failures(G, "rho: recursion = generating functions", cmp(&recursive.rho, &genfun.rho)),
        ],
    }
}

/// Recursive-route table with every grid filled.
pub fn full_table(n_max: usize, d_max: usize) -> crate::Result<DensityTable> {
    full_table_with(&SplittingCache::new(n_max), n_max, d_max)
}

pub fn full_table_with(cache: &SplittingCache, n_max: usize, d_max: usize) -> crate::Result<DensityTable> {
    moments_to_probabilities(compute_rho_table(compute_moment_tables_with(cache, n_max, d_max)?))
}

/// Runs every check: the product formula, both routes, their agreement and
/// all identities on the resulting table.
pub fn verify_all(n_max: usize, d_max: usize) -> Report {
    verify_all_with(&SplittingCache::new(n_max), n_max, d_max)
}

/// [`verify_all`] with explicit counting data, so corrupted counts can be
/// shown to be caught.
pub fn verify_all_with(cache: &SplittingCache, n_max: usize, d_max: usize) -> Report {
    const G: &str = "counting";
    let euler = verify_euler_product_with(cache, n_max);
    let mut report = Report {
        checks: vec![
            CheckResult::single(G, format!("Euler product (1 - pt)^-1 = prod_d (1 - t^d)^-N_d (to t^{n_max})"), euler.product_formula),
            CheckResult::from_failures(
                G,
                format!("linear-factor specialisation of the Euler product (to t^{n_max})"),
                euler
                    .linear_specialisations
                    .iter()
                    .enumerate()
                    .filter(|(_, ok)| !**ok)
                    .map(|(i, _)| format!("choice {i}"))
                    .collect(),
            ),
            CheckResult::single(G, "sum over splitting types of N_sigma = p^n", euler.partition_of_unity),
        ],
    };

    let (rec, gen) = rayon_join(|| full_table_with(cache, n_max, d_max), || compute_genfun_route(n_max, d_max));
    let route = |name: &str, r: &crate::Result<DensityTable>| {
        CheckResult {
            group: "routes".into(),
            name: format!("{name} route completes"),
            passed: r.is_ok(),
            detail: r.as_ref().err().map(ToString::to_string),
        }
    };
    report.checks.push(route("recursion", &rec));
    report.checks.push(route("generating-function", &gen));
    let (Ok(rec), Ok(gen)) = (rec, gen) else {
        return report;
    };

    report.extend(verify_route_equivalence(&rec, &gen));
    report.extend(verify_identities(&rec, n_max, d_max));
    report.extend(verify_specializations(&rec, n_max));
    report.extend(verify_large_p(&rec, n_max));
    report
}

fn rayon_join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    {
        rayon::join(a, b)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (a(), b())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables_pass_everything() {
        let report = verify_all(5, 5);
        assert!(report.all_pass(), "{report}");
        assert!(report.len() > 20);
    }

    #[test]
    fn degree_one_is_trivial() {
        assert!(verify_all(1, 1).all_pass());
    }

    #[test]
    fn corrupted_count_is_caught() {
        let report = verify_all_with(&SplittingCache::corrupted(4, 2, 1), 4, 4);
        assert!(!report.all_pass());
        let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        assert!(names.iter().any(|n| n.starts_with("Euler product")), "{names:?}");
    }

    #[test]
    fn tampered_entry_breaks_symmetry() {
        let mut t = full_table(4, 4).unwrap();
        t.rho[3][2] = &t.rho[3][2] + &RationalFunction::p();
        let report = verify_identities(&t, 4, 4);
        let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"rho(n,d) is invariant under p -> 1/p"));
    }

    #[test]
    fn derangement_limit() {
        let t = full_table(4, 4).unwrap();
        let r = verify_large_p(&t, 4);
        assert!(r.all_pass(), "{r}");
        assert!(r.checks.iter().any(|c| c.name == "lim rho*(4,0) = 3/8"));
    }
}
