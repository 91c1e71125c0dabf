//! Irreducible and splitting-type counts against brute-force factorization
//! of every monic polynomial over small prime fields.

use std::collections::BTreeMap;

use num_rational::BigRational;
use padic_density::densities::{count_irreducible, count_splitting_type, enumerate_splitting_types, SplittingType};

/// Monic polynomial over F_p, coefficients low degree first (leading 1 included).
type Poly = Vec<u64>;

fn monic_polys(n: usize, p: u64) -> Vec<Poly> {
    let total = p.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut c: Poly = (0..n)
                .map(|_| {
                    let d = idx % p;
                    idx /= p;
                    d
                })
                .collect();
            c.push(1);
            c
        })
        .collect()
}

/// Exact division by a monic divisor; `None` if the remainder is nonzero.
fn divide(f: &Poly, g: &Poly, p: u64) -> Option<Poly> {
    let mut r = f.clone();
    let dg = g.len() - 1;
    if r.len() < g.len() {
        return None;
    }
    let mut q = vec![0; r.len() - dg];
    for i in (0..q.len()).rev() {
        let c = r[i + dg];
        q[i] = c;
        for (j, &gj) in g.iter().enumerate() {
            r[i + j] = (r[i + j] + p * p - c * gj % p) % p;
        }
    }
    r[..dg].iter().all(|&x| x == 0).then_some(q)
}

/// Monic irreducibles of degree `d` by trial division by all lower-degree
/// monic polynomials.
fn irreducibles(d: usize, p: u64) -> Vec<Poly> {
    monic_polys(d, p)
        .into_iter()
        .filter(|f| (1..=d / 2).all(|k| monic_polys(k, p).iter().all(|g| divide(f, g, p).is_none())))
        .collect()
}

fn splitting_type(f: &Poly, p: u64, irr: &[Vec<Poly>]) -> SplittingType {
    let mut f = f.clone();
    let mut parts = Vec::new();
    for (d, list) in irr.iter().enumerate().skip(1) {
        for g in list {
            let mut e = 0;
            while let Some(q) = divide(&f, g, p) {
                f = q;
                e += 1;
            }
            if e > 0 {
                parts.push((d, e));
            }
        }
    }
    assert_eq!(f, vec![1], "factorization incomplete");
    SplittingType::new(parts)
}

fn at(p: u64, v: &padic_density::RationalFunction) -> BigRational {
    v.eval_int(p as i64).unwrap()
}

#[test]
fn irreducible_counts_match_enumeration() {
    for (p, d_max) in [(2u64, 6usize), (3, 4), (5, 3)] {
        for d in 1..=d_max {
            let brute = irreducibles(d, p).len() as i64;
            let formula = at(p, &count_irreducible(d).to_rational_function());
            assert_eq!(formula, BigRational::from_integer(brute.into()), "N_{d} over F_{p}");
        }
    }
}

#[test]
fn six_over_f2() {
    assert_eq!(irreducibles(6, 2).len(), 9);
    assert_eq!(at(2, &count_irreducible(6).to_rational_function()), BigRational::from_integer(9.into()));
}

#[test]
fn splitting_type_counts_match_enumeration() {
    for (p, n_max) in [(2u64, 4usize), (3, 4), (5, 3)] {
        let irr: Vec<Vec<Poly>> = (0..=n_max).map(|d| if d == 0 { vec![] } else { irreducibles(d, p) }).collect();
        for n in 1..=n_max {
            let mut tally: BTreeMap<SplittingType, i64> = BTreeMap::new();
            for f in monic_polys(n, p) {
                *tally.entry(splitting_type(&f, p, &irr)).or_default() += 1;
            }
            for sigma in enumerate_splitting_types(n) {
                let brute = tally.get(&sigma).copied().unwrap_or(0);
                assert_eq!(
                    at(p, &count_splitting_type(&sigma)),
                    BigRational::from_integer(brute.into()),
                    "N_{sigma} over F_{p}"
                );
            }
            assert!(tally.keys().all(|s| enumerate_splitting_types(n).contains(s)));
        }
    }
}
