//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails or overruns its time budget.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use padic_density::densities::{
    assemble_generating_polynomials, compute_genfun_route, compute_moment_tables_recursive, compute_rho_table,
    count_splitting_type, enumerate_splitting_types, full_table, verify_all, DensityTable, GeneratingSeries,
};
use padic_density::oracle::{
    count_qp_roots, count_qp_roots_exact, count_zp_roots, count_zp_roots_exact, exhaustive_small, monte_carlo,
    MonteCarloConfig, Mode, Outcome, PadicSample, DEFAULT_BUDGET,
};
use padic_density::series::TruncatedSeries;
use padic_density::{Limit, RationalFunction, ZPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Rf = RationalFunction;

fn poly(s: &str) -> Rf {
    s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// `c * prod(num) / prod(den)`.
fn frac(c: (i64, i64), num: &[&str], den: &[&str]) -> Rf {
    let n: Rf = num.iter().map(|s| poly(s)).product();
    let d: Rf = den.iter().map(|s| poly(s)).product();
    &Rf::from_ratio(c.0, c.1) * &n.try_div(&d).unwrap()
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

const CYC5: &str = "p^4 + p^3 + p^2 + p + 1";

fn eta() -> Rf {
    frac((1, 1), &["1"], &["p + 1", "p + 1", CYC5])
}

fn coeffs(s: &TruncatedSeries, upto: usize) -> Vec<Rf> {
    (0..=upto).map(|k| s.coeff(k).clone()).collect()
}

// ---------------------------------------------------------------------------

fn degree_one() {
    let zero = Rf::zero();
    let a1 = vec![zero.clone(), Rf::one(), -frac((1, 1), &["1"], &["p + 1"]), zero.clone()];
    let b1 = vec![zero.clone(), Rf::one(), -frac((1, 1), &["p"], &["p + 1"]), zero.clone()];
    let r1 = vec![zero.clone(), poly("p + 1"), -poly("p"), zero.clone()];

    let g = GeneratingSeries::compute(1, 3).unwrap();
    assert_eq!(coeffs(&g.a[1], 3), a1, "A_1 (generating functions)");
    assert_eq!(coeffs(&g.b[1], 3), b1, "B_1 (generating functions)");
    assert_eq!(coeffs(&g.r[1], 3), r1, "R_1 (generating functions)");

    let t = full_table(8, 1).unwrap();
    let polys = assemble_generating_polynomials(&t, 1).unwrap();
    assert_eq!(coeffs(&polys.a, 3), a1, "A_1 (recursion)");
    assert_eq!(coeffs(&polys.b, 3), b1, "B_1 (recursion)");
    assert_eq!(coeffs(&polys.r, 3), r1, "R_1 (recursion)");

    assert!(t.alpha(1, 1).is_one() && t.beta(1, 1).is_one());
    for n in 2..=8 {
        assert_eq!(t.alpha(n, 1), &frac((1, 1), &["p"], &["p + 1"]), "alpha({n},1)");
        assert_eq!(t.beta(n, 1), &frac((1, 1), &["1"], &["p + 1"]), "beta({n},1)");
    }
    for n in 1..=8 {
        assert!(t.rho(n, 1).is_one(), "rho({n},1)");
    }
}

fn degree_two() {
    let eta = eta();
    let e = |c: i64, factors: &[&str]| &frac((c, 1), factors, &["1"]) * &eta;
    let zero = Rf::zero();
    // Coefficients of 2A_2, 2B_2, 2R_2 for t^0..t^5.
    let a2 = vec![
        zero.clone(),
        zero.clone(),
        frac((1, 1), &["p"], &["p + 1"]),
        e(-1, &["p", "p + 1", "2p^3 + p + 1"]),
        e(1, &["p^4"]),
        zero.clone(),
    ];
    let b2 = vec![
        zero.clone(),
        zero.clone(),
        frac((1, 1), &["1"], &["p + 1"]),
        e(-1, &["p", "p + 1", "p^3 + p^2 + 2"]),
        e(1, &["p^2"]),
        zero.clone(),
    ];
    let r2 = vec![
        zero.clone(),
        zero.clone(),
        poly("p^2 + p + 1"),
        e(-1, &["p", "p + 1", "p + 1", "p + 1", "2p^4 + 3p^2 + 2"]),
        e(1, &["p^2", "p + 1", "p + 1", "p^4 + p^2 + 1"]),
        zero.clone(),
    ];
    let doubled = |s: &TruncatedSeries| coeffs(s, 5).iter().map(|c| c.scale_int(2)).collect::<Vec<_>>();

    let g = GeneratingSeries::compute(2, 5).unwrap();
    assert_eq!(doubled(&g.a[2]), a2, "2A_2 (generating functions)");
    assert_eq!(doubled(&g.b[2]), b2, "2B_2 (generating functions)");
    assert_eq!(doubled(&g.r[2]), r2, "2R_2 (generating functions)");

    let t = full_table(8, 2).unwrap();
    let polys = assemble_generating_polynomials(&t, 2).unwrap();
    assert_eq!(doubled(&polys.a), a2, "2A_2 (recursion)");
    assert_eq!(doubled(&polys.b), b2, "2B_2 (recursion)");
    assert_eq!(doubled(&polys.r), r2, "2R_2 (recursion)");

    for n in 2..=8 {
        let (alpha, beta) = match n {
            2 => (frac((1, 1), &["p"], &["p + 1"]), frac((1, 1), &["1"], &["p + 1"])),
            3 => (e(1, &["p^3", "p^3 + 1"]), e(1, &["p^3 + 1"])),
            _ => (e(1, &["p^3", "p^3 + p + 1"]), e(1, &["p^3 + p^2 + 1"])),
        };
        assert_eq!(t.alpha(n, 2).scale_int(2), alpha, "2 alpha({n},2)");
        assert_eq!(t.beta(n, 2).scale_int(2), beta, "2 beta({n},2)");
    }
    assert_eq!(t.rho(2, 2), &Rf::from_ratio(1, 2));
    for n in 3..=8 {
        assert_eq!(t.rho(n, 2).scale_int(2), frac((1, 1), &["p^2 + 1", "p^2 + 1"], &[CYC5]), "2 rho({n},2)");
    }
}

fn star_values() {
    let t = full_table(4, 4).unwrap();
    let half = Rf::from_ratio(1, 2);
    let gamma = frac((1, 6), &["p^2 + 1", "p^2 + 1"], &[CYC5]);
    let delta = frac((1, 1), &["p - 1", "p - 1"], &["p^5 - 1", "p^9 - 1"]);
    let d = |c: i64, num: &str| &frac((1, c), &[num], &["1"]) * &delta;

    let rho_star: Vec<Vec<Rf>> = vec![
        vec![half.clone(), Rf::zero(), half.clone()],
        vec![gamma.scale_int(2), &Rf::one() - &gamma.scale_int(3), Rf::zero(), gamma.clone()],
        vec![
            d(8, "3p^12 + 5p^11 + 8p^10 + 12p^9 + 13p^8 + 12p^7 + 17p^6 + 12p^5 + 13p^4 + 12p^3 + 8p^2 + 5p + 3"),
            d(3, "p^12 + 2p^11 + 4p^10 + 3p^9 + 6p^8 + 7p^7 + 2p^6 + 7p^5 + 6p^4 + 3p^3 + 4p^2 + 2p + 1"),
            d(4, "p^12 + 3p^11 + 2p^10 + 6p^9 + 5p^8 + 4p^7 + 9p^6 + 4p^5 + 5p^4 + 6p^3 + 2p^2 + 3p + 1"),
            Rf::zero(),
            d(24, "p^12 - p^11 + 4p^10 + 3p^8 + 4p^7 - p^6 + 4p^5 + 3p^4 + 4p^2 - p + 1"),
        ],
    ];
    let alpha_star: Vec<Vec<Rf>> = vec![
        vec![frac((1, 2), &["p + 2"], &["p + 1"]), Rf::zero(), frac((1, 2), &["p"], &["p + 1"])],
        vec![
            frac((1, 3), &["p^4 + p^3 + 3p^2 + 3"], &[CYC5]),
            frac((1, 2), &["p^5 + 3p^4 + p^3 + 2p^2 + 2p"], &["p + 1", CYC5]),
            Rf::zero(),
            frac((1, 6), &["p^5 - p^4 + p^3"], &["p + 1", CYC5]),
        ],
        vec![
            frac((1, 8), &["3p^11 + 8p^10 + 6p^9 + 2p^8 - 3p^6 + 4p^5 - 4p^3 - 8p - 8"], &["p + 1", "p + 1", "p^9 - 1"]),
            frac(
                (1, 3),
                &["p^14 + 2p^12 - 6p^11 + 9p^10 - 9p^9 + 2p^8 + 3p^7 - 2p^6 - 3p^5 + 3p^4 - 3p^2 + 3p"],
                &["p^5 - 1", "p^9 - 1"],
            ),
            frac(
                (1, 4),
                &["p^16 + 2p^15 - 4p^14 + 2p^13 + 2p^12 - 6p^11 + 4p^10 + 2p^9 - 6p^8 + 2p^7 + p^6 - 2p^5 + 2p^3"],
                &["p + 1", "p + 1", "p^5 - 1", "p^9 - 1"],
            ),
            Rf::zero(),
            frac(
                (1, 24),
                &["p^16 - 4p^15 + 6p^14 - 2p^13 - 4p^12 + 6p^11 - 4p^10 - 2p^9 + 6p^8 - 4p^7 + p^6"],
                &["p + 1", "p + 1", "p^5 - 1", "p^9 - 1"],
            ),
        ],
    ];
    for (i, (rho_row, alpha_row)) in rho_star.iter().zip(&alpha_star).enumerate() {
        let n = i + 2;
        for r in 0..=n {
            assert_eq!(&t.rho_star[n][r], &rho_row[r], "rho*({n},{r})");
            assert_eq!(&t.alpha_star[n][r], &alpha_row[r], "alpha*({n},{r})");
            assert_eq!(t.beta_star[n][r], alpha_row[r].reciprocal_substitute(), "beta*({n},{r})");
        }
    }
}

fn identity_suite() {
    let report = verify_all(8, 8);
    println!("    {} identity checks at n_max = d_max = 8", report.len());
    assert!(report.all_pass(), "{report}");
    for group in [
        "counting",
        "route equivalence",
        "symmetry",
        "generating functions",
        "polynomiality",
        "probabilities",
        "split completely",
        "no roots",
        "large p",
    ] {
        assert!(report.checks.iter().any(|c| c.group == group), "no checks in group {group}");
    }

    // Direct restatements of a few of the checks.
    for n in 1..=8 {
        let total: Rf = enumerate_splitting_types(n).iter().map(count_splitting_type).sum();
        assert_eq!(total, Rf::p_pow(n as i64), "sum of N_sigma at n = {n}");
    }
    let t = full_table(8, 8).unwrap();
    for grid in [&t.rho_star, &t.alpha_star, &t.beta_star] {
        for (n, row) in grid.iter().enumerate() {
            assert!(row.iter().cloned().sum::<Rf>().is_one(), "row {n} sums to 1");
            if n >= 2 {
                assert!(row[n - 1].is_zero(), "n-1 roots at n = {n}");
            }
        }
    }
}

fn routes_agree() {
    let rec = compute_rho_table(compute_moment_tables_recursive(8, 8).unwrap());
    let gen = compute_genfun_route(8, 8).unwrap();
    let same = |name: &str, a: &Vec<Vec<Rf>>, b: &Vec<Vec<Rf>>| {
        for n in 0..=8 {
            for d in 0..=n {
                assert_eq!(a[n][d], b[n][d], "{name}({n},{d})");
            }
        }
    };
    same("alpha", &rec.alpha, &gen.alpha);
    same("beta", &rec.beta, &gen.beta);
    same("rho", &rec.rho, &gen.rho);
}

fn inv_factorial(k: usize) -> BigRational {
    BigRational::new(BigInt::one(), (1..=k).map(BigInt::from).product())
}

fn check_limit(v: &Rf, correction: usize, want: &BigRational, what: &str) {
    let scaled = v * &Rf::p_pow(correction as i64);
    assert_eq!(scaled.large_p_limit(), Limit::Finite(want.clone()), "{what}");
}

fn large_p(t: &DensityTable) {
    let c2 = |k: usize| k * k.saturating_sub(1) / 2;
    for n in 0..=8 {
        for d in 0..=n {
            check_limit(t.alpha(n, d), 0, &inv_factorial(d), &format!("alpha({n},{d})"));
            check_limit(t.rho(n, d), 0, &inv_factorial(d), &format!("rho({n},{d})"));
            check_limit(t.beta(n, d), c2((d + 1).min(n)), &inv_factorial(d), &format!("beta({n},{d})"));
        }
        for r in 0..=n {
            let alt: BigRational = (0..=n - r)
                .map(|d| if d % 2 == 0 { inv_factorial(d) } else { -inv_factorial(d) })
                .fold(BigRational::zero(), |a, b| a + b)
                * inv_factorial(r);
            check_limit(&t.rho_star[n][r], 0, &alt, &format!("rho*({n},{r})"));
            check_limit(&t.alpha_star[n][r], 0, &alt, &format!("alpha*({n},{r})"));
            if r + 1 != n {
                check_limit(&t.beta_star[n][r], c2((r + 1).min(n)), &inv_factorial(r), &format!("beta*({n},{r})"));
            }
        }
    }
    assert_eq!(t.rho_star[4][0].large_p_limit(), Limit::Finite(ratio(3, 8)));
}

fn limits() {
    large_p(&full_table(8, 8).unwrap());
}

fn monte_carlo_grid() {
    for n in 2..=4 {
        for p in [2u64, 3, 5] {
            for mode in Mode::ALL {
                let rep = monte_carlo(&MonteCarloConfig::new(n, p, mode, 100_000, 2024)).unwrap();
                let worst = rep.z_scores.values().fold(0.0f64, |m, z| m.max(z.abs()));
                println!(
                    "    n={n} p={p} {:<8} max|z| = {worst:.2}  abandoned = {}  extended = {:.4}",
                    mode.name(),
                    rep.abandoned,
                    rep.extended_fraction
                );
                assert!(worst < 4.0, "n={n} p={p} {mode}: {:?}", rep.z_scores);
                assert!(rep.abandoned_fraction() < 1e-3, "n={n} p={p} {mode}: {} abandoned", rep.abandoned);
                if (n, p, mode) == (3, 2, Mode::Monic) {
                    // (1/6)(32 - 16 + 8)/(3 * 31)
                    assert_eq!(rep.expected[&3], "4/93");
                }
                if (n, p, mode) == (2, 3, Mode::MonicXn) {
                    assert_eq!(rep.expected_mean_roots, "1/4");
                    assert!(rep.mean_z_score.abs() < 4.0);
                }
            }
        }
    }
}

fn exhaustive() {
    let h = exhaustive_small(2, 2, 4, Mode::General, DEFAULT_BUDGET).unwrap();
    let (lo, hi) = h.bracket(2);
    let exact = full_table(2, 2).unwrap().rho_star[2][2].eval_int(2).unwrap();
    assert_eq!(exact, ratio(1, 2));
    println!("    {lo} <= 1/2 <= {hi} over {} polynomials ({} undetermined)", h.total, h.undetermined);
    assert!(lo <= exact && exact <= hi);
    assert!(h.undetermined > 0 && lo < hi, "the bracket should be proper at K = 4");
}

fn sample(p: u64, k: u32, coeffs: &[i64], mode: Mode) -> PadicSample {
    PadicSample::from_i64s(p, k, coeffs, mode).unwrap()
}

fn oracle_suite() {
    use Outcome::Determined;
    assert_eq!(count_zp_roots(&sample(3, 5, &[-1, 0, 1], Mode::General)).outcome, Determined(2));
    assert_eq!(count_zp_roots(&sample(5, 5, &[-2, 0, 1], Mode::General)).outcome, Determined(0));
    assert_eq!(count_zp_roots(&sample(3, 5, &[-3, 0, 1], Mode::General)).outcome, Determined(0));
    // (x - 1)^2 at finite precision is also the truncation of (x - 1)^2 + p^6 c,
    // which can have 0 or 2 roots, so only the exact count is 1.
    let sq = sample(5, 6, &[1, -2, 1], Mode::General);
    assert!(matches!(count_zp_roots(&sq).outcome, Outcome::Undetermined | Determined(1)));
    assert_eq!(count_zp_roots_exact(&ZPoly::from_i64s(&[1, -2, 1]), 5), Some(1));

    assert_eq!(count_qp_roots(&sample(3, 5, &[-1, 3], Mode::General)).outcome, Determined(1));
    assert_eq!(count_qp_roots(&sample(3, 5, &[-1, 0, 1], Mode::General)).outcome, Determined(2));
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let n = rng.random_range(1..=5);
        let p = [2u64, 3, 5, 7][rng.random_range(0..4)];
        let s = PadicSample::draw(n, p, 8, Mode::Monic, &mut rng);
        assert_eq!(count_qp_roots(&s), count_zp_roots(&s));
    }

    // Determinacy soundness on random extensions of determined samples.
    let mut checked = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    while checked < 1000 {
        let n = rng.random_range(1..=5);
        let p = [2u64, 3, 5][rng.random_range(0..3)];
        let k = rng.random_range(2..=6);
        let mode = Mode::ALL[rng.random_range(0..3)];
        let s = PadicSample::draw(n, p, k, mode, &mut rng);
        let (zp, qp) = (count_zp_roots(&s).count(), count_qp_roots(&s).count());
        if zp.is_none() && qp.is_none() {
            continue;
        }
        let mut ext = s.clone();
        ext.extend(k + rng.random_range(1..=12), &mut rng);
        let lift = ZPoly::from_coeffs(ext.coefficients().to_vec());
        if let Some(c) = zp {
            assert_eq!(count_zp_roots(&ext).count(), Some(c), "{s:?} -> {ext:?}");
            assert_eq!(count_zp_roots_exact(&lift, p), Some(c), "{ext:?}");
        }
        if let Some(c) = qp {
            assert_eq!(count_qp_roots(&ext).count(), Some(c), "{s:?} -> {ext:?}");
            assert_eq!(count_qp_roots_exact(&lift, p), Some(c), "{ext:?}");
        }
        checked += 1;
    }
}

struct Criterion {
    title: &'static str,
    budget: Duration,
    run: fn(),
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { title: "degree-one generating polynomials and moments", budget: secs(1), run: degree_one },
        Criterion { title: "degree-two generating polynomials and moments", budget: secs(5), run: degree_two },
        Criterion { title: "explicit rho*, alpha*, beta* for n <= 4", budget: secs(30), run: star_values },
        Criterion { title: "identity suite at n_max = d_max = 8", budget: secs(300), run: identity_suite },
        Criterion { title: "recursion and generating-function routes agree at 8/8", budget: secs(300), run: routes_agree },
        Criterion { title: "large-p limits for n <= 8", budget: secs(10), run: limits },
        Criterion { title: "Monte Carlo calibration, 27 configurations x 1e5 trials", budget: secs(600), run: monte_carlo_grid },
        Criterion { title: "exhaustive bracket of rho*(2,2) at p = 2, K = 4", budget: secs(60), run: exhaustive },
        Criterion { title: "root-count oracle examples and determinacy soundness", budget: secs(60), run: oracle_suite },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run));
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Ok(()) if elapsed <= c.budget => "PASS",
            Ok(()) => "FAIL (over time budget)",
            Err(_) => "FAIL",
        };
        if verdict != "PASS" {
            failed += 1;
        }
        println!("{verdict} criterion {}: {} [{:.2?} of {:?}]", i + 1, c.title, elapsed, c.budget);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
