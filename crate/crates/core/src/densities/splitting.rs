use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactalg::{QPoly, RationalFunction};
use crate::series::TruncatedSeries;

/// Factorization pattern of a monic polynomial over `F_p`: the multiset of
/// `(degree, exponent)` pairs of its irreducible factors.
///
/// Parts are stored sorted lexicographically, so equal types compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SplittingType {
    parts: Vec<(usize, usize)>,
}

impl SplittingType {
    pub fn new(mut parts: Vec<(usize, usize)>) -> Self {
        assert!(parts.iter().all(|&(d, e)| d > 0 && e > 0), "parts must be positive");
        parts.sort_unstable();
        SplittingType { parts }
    }

    pub fn parts(&self) -> &[(usize, usize)] {
        &self.parts
    }

    /// Total degree `sum d e`.
    pub fn degree(&self) -> usize {
        self.parts.iter().map(|&(d, e)| d * e).sum()
    }

    /// Number of parts with factor degree `d`.
    pub fn m_d(&self, d: usize) -> usize {
        self.parts.iter().filter(|p| p.0 == d).count()
    }

    /// Number of parts equal to `(d, e)`.
    pub fn m_de(&self, d: usize, e: usize) -> usize {
        self.parts.iter().filter(|&&p| p == (d, e)).count()
    }

    /// Exponents of the linear factors, ascending.
    pub fn linear_exponents(&self) -> Vec<usize> {
        self.parts.iter().filter(|p| p.0 == 1).map(|p| p.1).collect()
    }

    /// Sum of the factor degrees; the degree of the counting polynomial.
    pub fn factor_degree_sum(&self) -> usize {
        self.parts.iter().map(|p| p.0).sum()
    }
}

impl fmt::Display for SplittingType {
    /// `(1^2 2)` style, exponent one omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, &(d, e)) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if e == 1 {
                write!(f, "{d}")?;
            } else {
                write!(f, "{d}^{e}")?;
            }
        }
        f.write_str(")")
    }
}

/// All splitting types of total degree `n`, in canonical order. `n = 0` gives
/// the single empty type.
pub fn enumerate_splitting_types(n: usize) -> Vec<SplittingType> {
    let atoms: Vec<(usize, usize)> = (1..=n)
        .flat_map(|d| (1..=n / d).map(move |e| (d, e)))
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend_types(&atoms, 0, n, &mut current, &mut out);
    out.sort();
    out
}

fn extend_types(
    atoms: &[(usize, usize)],
    start: usize,
    remaining: usize,
    current: &mut Vec<(usize, usize)>,
    out: &mut Vec<SplittingType>,
) {
    if remaining == 0 {
        out.push(SplittingType::new(current.clone()));
        return;
    }
    for (i, &(d, e)) in atoms.iter().enumerate().skip(start) {
        if d * e <= remaining {
            current.push((d, e));
            extend_types(atoms, i, remaining - d * e, current, out);
            current.pop();
        }
    }
}

fn mobius(mut k: usize) -> i64 {
    let mut result = 1;
    let mut f = 2;
    while f * f <= k {
        if k.is_multiple_of(f) {
            k /= f;
            if k.is_multiple_of(f) {
                return 0;
            }
            result = -result;
        }
        f += 1;
    }
    if k > 1 {
        result = -result;
    }
    result
}

/// Number of monic irreducible polynomials of degree `d` over `F_p`, as a
/// polynomial in `p`: `(1/d) sum_{k | d} mu(k) p^(d/k)`.
pub fn count_irreducible(d: usize) -> QPoly {
    assert!(d >= 1, "degree must be positive");
    let mut coeffs = vec![BigRational::zero(); d + 1];
    let inv_d = BigRational::new(BigInt::one(), BigInt::from(d));
    for k in (1..=d).filter(|k| d.is_multiple_of(*k)) {
        let mu = mobius(k);
        if mu != 0 {
            coeffs[d / k] += &inv_d * BigInt::from(mu);
        }
    }
    QPoly::from_coeffs(coeffs)
}

/// Cached counting data per degree: the irreducible counts `N_d` and the
/// splitting-type counts `N_sigma`.
///
/// The cache can be built with perturbed `N_d` values to exercise negative
/// controls of the identity checks.
#[derive(Clone, Debug)]
pub struct SplittingCache {
    irreducible: Vec<RationalFunction>,
    types: Vec<Vec<(SplittingType, RationalFunction)>>,
}

impl SplittingCache {
    pub fn new(n_max: usize) -> Self {
        let irreducible = (0..=n_max)
            .map(|d| if d == 0 { RationalFunction::zero() } else { count_irreducible(d).to_rational_function() })
            .collect();
        Self::with_irreducible_counts(irreducible, n_max)
    }

    /// Cache built from the given `N_d` values (index 0 unused).
    pub fn with_irreducible_counts(irreducible: Vec<RationalFunction>, n_max: usize) -> Self {
        assert!(irreducible.len() > n_max, "need N_d for every d <= n_max");
        let types = (0..=n_max)
            .map(|n| {
                enumerate_splitting_types(n)
                    .into_iter()
                    .map(|s| {
                        let c = splitting_count_from(&irreducible, &s);
                        (s, c)
                    })
                    .collect()
            })
            .collect();
        SplittingCache { irreducible, types }
    }

    /// A cache where `N_d` is replaced by `N_d + delta`.
    pub fn corrupted(n_max: usize, d: usize, delta: i64) -> Self {
        let mut base = Self::new(n_max).irreducible;
        base[d] = &base[d] + &RationalFunction::from_int(delta);
        Self::with_irreducible_counts(base, n_max)
    }

    pub fn n_max(&self) -> usize {
        self.types.len() - 1
    }

    pub fn irreducible(&self, d: usize) -> &RationalFunction {
        &self.irreducible[d]
    }

    /// Splitting types of degree `n` with their counts.
    pub fn types(&self, n: usize) -> &[(SplittingType, RationalFunction)] {
        &self.types[n]
    }

    /// Sum of `N_sigma` grouped by the exponents of the linear factors.
    pub fn linear_groups(&self, n: usize) -> BTreeMap<Vec<usize>, RationalFunction> {
        let mut groups: BTreeMap<Vec<usize>, RationalFunction> = BTreeMap::new();
        for (s, c) in &self.types[n] {
            let slot = groups.entry(s.linear_exponents()).or_default();
            *slot = &*slot + c;
        }
        groups
    }
}

fn splitting_count_from(irreducible: &[RationalFunction], sigma: &SplittingType) -> RationalFunction {
    let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(d, e) in sigma.parts() {
        by_degree.entry(d).or_default().push(e);
    }
    let mut total = RationalFunction::one();
    for (d, exps) in by_degree {
        let m_d = exps.len();
        total = &total * &RationalFunction::symbolic_binomial(&irreducible[d], m_d as u32);
        // multinomial m_d! / prod_e m_de!
        let mut multinomial = factorial(m_d);
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for e in exps {
            *counts.entry(e).or_default() += 1;
        }
        for c in counts.values() {
            multinomial /= factorial(*c);
        }
        total = &total * &RationalFunction::from_bigint(multinomial);
    }
    total
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Number of monic polynomials over `F_p` with splitting type `sigma`.
pub fn count_splitting_type(sigma: &SplittingType) -> RationalFunction {
    let n = sigma.degree();
    let irreducible: Vec<RationalFunction> = (0..=n.max(1))
        .map(|d| if d == 0 { RationalFunction::zero() } else { count_irreducible(d).to_rational_function() })
        .collect();
    splitting_count_from(&irreducible, sigma)
}

/// Outcome of the product-formula checks over the irreducible counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerProductCheck {
    /// `(1 - p t)^(-1) = prod_d (1 - t^d)^(-N_d)`.
    pub product_formula: bool,
    /// The linear-factor specialisation, for each choice of the `x_e` values.
    pub linear_specialisations: Vec<bool>,
    /// `sum_sigma N_sigma = p^n` for every `n`.
    pub partition_of_unity: bool,
}

impl EulerProductCheck {
    pub fn all_pass(&self) -> bool {
        self.product_formula && self.partition_of_unity && self.linear_specialisations.iter().all(|&b| b)
    }
}

/// Checks the product formula and its linear-factor specialisation up to
/// `t^n_max` with the counts held in `cache`.
pub fn verify_euler_product_with(cache: &SplittingCache, n_max: usize) -> EulerProductCheck {
    let order = n_max;
    let p = RationalFunction::p();
    let geometric_p = TruncatedSeries::from_coefficients((0..=order).map(|n| p.pow(n as i64)).collect(), order);

    let mut product = TruncatedSeries::one(order);
    for d in 1..=order {
        let mut factor = TruncatedSeries::one(order);
        factor = factor.sub(&TruncatedSeries::monomial(RationalFunction::one(), d, order));
        let neg_nd = -cache.irreducible(d);
        let powered = factor.pow_symbolic(&neg_nd).expect("constant term is one");
        product = product.mul(&powered);
    }
    let product_formula = product == geometric_p;

    let partition_of_unity = (0..=order).all(|n| {
        let s: RationalFunction = cache.types(n).iter().map(|(_, c)| c.clone()).sum();
        s == p.pow(n as i64)
    });

    // sum_n sum_sigma N_sigma prod_{1^e in sigma} x_e t^n
    //     = (sum_n x_n t^n)^p (1 - t)^p (1 - p t)^(-1)
    let choices: [fn(usize) -> RationalFunction; 2] = [
        |e| RationalFunction::from_int(e as i64 + 1),
        |e| {
            let den: RationalFunction = &RationalFunction::p() + &RationalFunction::from_int(e as i64);
            den.recip().expect("p + e is nonzero")
        },
    ];
    let linear_specialisations = choices
        .iter()
        .map(|x| {
            let x0 = |e: usize| if e == 0 { RationalFunction::one() } else { x(e) };
            let lhs = TruncatedSeries::from_coefficients(
                (0..=order)
                    .map(|n| {
                        cache
                            .types(n)
                            .iter()
                            .map(|(s, c)| {
                                let w: RationalFunction = s.linear_exponents().into_iter().map(x).product();
                                c * &w
                            })
                            .sum()
                    })
                    .collect(),
                order,
            );
            let xs = TruncatedSeries::from_coefficients((0..=order).map(x0).collect(), order);
            let one_minus_t = TruncatedSeries::from_coefficients(vec![RationalFunction::one(), RationalFunction::from_int(-1)], order);
            let rhs = xs
                .pow_symbolic(&p)
                .expect("x_0 = 1")
                .mul(&one_minus_t.pow_symbolic(&p).expect("constant term one"))
                .mul(&geometric_p);
            lhs == rhs
        })
        .collect();

    EulerProductCheck {
        product_formula,
        linear_specialisations,
        partition_of_unity,
    }
}

/// [`verify_euler_product_with`] on the true counts.
pub fn verify_euler_product(n_max: usize) -> bool {
    verify_euler_product_with(&SplittingCache::new(n_max), n_max).all_pass()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn splitting_type_counts() {
        assert_eq!(enumerate_splitting_types(0).len(), 1);
        assert_eq!(enumerate_splitting_types(2).len(), 3);
        assert_eq!(enumerate_splitting_types(3).len(), 5);
        assert_eq!(enumerate_splitting_types(4).len(), 11);
    }

    #[test]
    fn types_are_canonical_and_distinct() {
        let types = enumerate_splitting_types(5);
        let mut dedup = types.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), types.len());
        for s in &types {
            assert_eq!(s.degree(), 5);
            assert!(s.parts().windows(2).all(|w| w[0] <= w[1]));
            for d in 1..=5 {
                let by_e: usize = (1..=5).map(|e| s.m_de(d, e)).sum();
                assert_eq!(s.m_d(d), by_e);
            }
        }
    }

    #[test]
    fn irreducible_count_examples() {
        assert_eq!(count_irreducible(1).to_rational_function(), rf("p"));
        assert_eq!(count_irreducible(2).to_rational_function(), rf("(p^2-p)/2"));
        assert_eq!(count_irreducible(6).to_rational_function(), rf("(p^6-p^3-p^2+p)/6"));
    }

    #[test]
    fn splitting_count_examples() {
        assert_eq!(count_splitting_type(&SplittingType::new(vec![(1, 4)])), rf("p"));
        assert_eq!(count_splitting_type(&SplittingType::new(vec![(1, 1), (1, 1)])), rf("(p^2-p)/2"));
        // (1^2 1): an ordered pair of distinct roots
        assert_eq!(count_splitting_type(&SplittingType::new(vec![(1, 2), (1, 1)])), rf("p^2-p"));
    }

    #[test]
    fn display_omits_unit_exponent() {
        assert_eq!(SplittingType::new(vec![(2, 1), (1, 2)]).to_string(), "(1^2 2)");
    }

    #[test]
    fn euler_product_holds_and_detects_corruption() {
        assert!(verify_euler_product(1));
        assert!(verify_euler_product(4));
        let bad = SplittingCache::corrupted(4, 2, 1);
        let check = verify_euler_product_with(&bad, 4);
        assert!(!check.product_formula);
        assert!(!check.all_pass());
    }
}
