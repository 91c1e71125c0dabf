use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::RationalFunction;

/// Power series in `t` over `Q(p)`, truncated after `t^order`.
///
/// `exact_degree` is set only when the caller can justify that every
/// coefficient above that degree vanishes in the untruncated series; it is
/// never inferred from trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    order: usize,
    coefficients: Vec<RationalFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exact_degree: Option<usize>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            order,
            coefficients: vec![RationalFunction::zero(); order + 1],
            exact_degree: None,
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(RationalFunction::one(), order)
    }

    pub fn constant(c: RationalFunction, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coefficients[0] = c;
        s
    }

    /// `c t^k`, zero if `k` exceeds the order.
    pub fn monomial(c: RationalFunction, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coefficients[k] = c;
        }
        s
    }

    /// Builds a series from leading coefficients; missing ones are zero and
    /// coefficients beyond `order` are dropped.
    pub fn from_coefficients(mut coefficients: Vec<RationalFunction>, order: usize) -> Self {
        coefficients.resize(order + 1, RationalFunction::zero());
        TruncatedSeries {
            order,
            coefficients,
            exact_degree: None,
        }
    }

    /// A polynomial known to be exact: all coefficients past its length vanish.
    pub fn exact_polynomial(coefficients: Vec<RationalFunction>, order: usize) -> Self {
        let degree = coefficients.len().saturating_sub(1);
        let mut s = Self::from_coefficients(coefficients, order.max(degree));
        s.exact_degree = Some(degree);
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coefficients(&self) -> &[RationalFunction] {
        &self.coefficients
    }

    pub fn coeff(&self, n: usize) -> &RationalFunction {
        &self.coefficients[n]
    }

    pub fn exact_degree(&self) -> Option<usize> {
        self.exact_degree
    }

    /// Marks the series as an exact polynomial of degree at most `degree`.
    /// Fails if a stored coefficient above `degree` is nonzero.
    pub fn assert_exact_polynomial(mut self, degree: usize) -> Result<Self> {
        if let Some(n) = (degree + 1..=self.order).find(|&n| !self.coefficients[n].is_zero()) {
            return Err(Error::Internal(format!(
                "coefficient of t^{n} is nonzero in a series claimed to have degree <= {degree}"
            )));
        }
        self.exact_degree = Some(degree);
        Ok(self)
    }

    /// Highest index with a nonzero stored coefficient.
    pub fn stored_degree(&self) -> Option<usize> {
        self.coefficients.iter().rposition(|c| !c.is_zero())
    }

    /// Lowest index with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coefficients.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(RationalFunction::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TruncatedSeries {
            order,
            coefficients: self.coefficients[..=order].to_vec(),
            exact_degree: self.exact_degree,
        }
    }

    fn derived(&self, coefficients: Vec<RationalFunction>, exact: Option<usize>) -> Self {
        TruncatedSeries {
            order: coefficients.len() - 1,
            coefficients,
            exact_degree: exact,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let c = (0..=order).map(|n| &self.coefficients[n] + &rhs.coefficients[n]).collect();
        let exact = self.exact_degree.zip(rhs.exact_degree).map(|(a, b)| a.max(b));
        self.derived(c, exact)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let c = (0..=order).map(|n| &self.coefficients[n] - &rhs.coefficients[n]).collect();
        let exact = self.exact_degree.zip(rhs.exact_degree).map(|(a, b)| a.max(b));
        self.derived(c, exact)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let mut c = vec![RationalFunction::zero(); order + 1];
        for (i, a) in self.coefficients[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coefficients[..=order - i].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        let exact = self.exact_degree.zip(rhs.exact_degree).map(|(a, b)| a + b);
        self.derived(c, exact)
    }

    pub fn scalar_mul(&self, c: &RationalFunction) -> Self {
        let coeffs = self.coefficients.iter().map(|x| x * c).collect();
        self.derived(coeffs, self.exact_degree)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coefficients.iter().map(|x| -x).collect();
        self.derived(coeffs, self.exact_degree)
    }

    /// Multiplication by `t^k`; the order is kept, high terms fall off.
    pub fn shift(&self, k: usize) -> Self {
        let mut c = vec![RationalFunction::zero(); k.min(self.order + 1)];
        c.extend(self.coefficients.iter().take(self.order + 1 - c.len()).cloned());
        self.derived(c, self.exact_degree.map(|d| d + k))
    }

    /// Substitution `t -> c t`: the coefficient of `t^n` is multiplied by `c^n`.
    pub fn scale_t(&self, c: &RationalFunction) -> Self {
        let mut pow = RationalFunction::one();
        let mut out = Vec::with_capacity(self.order + 1);
        for (n, a) in self.coefficients.iter().enumerate() {
            if n > 0 {
                pow = &pow * c;
            }
            out.push(a * &pow);
        }
        self.derived(out, self.exact_degree)
    }

    /// The operator multiplying the coefficient of `t^n` by `p^(-n(n-1)/2)`.
    pub fn phi(&self) -> Self {
        let out = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, a)| a * &RationalFunction::p_pow(-binom2(n)))
            .collect();
        self.derived(out, self.exact_degree)
    }

    /// `(1 + T)^e` with `T = self - 1`, expanded as `sum_k binom(e, k) T^k`.
    /// The constant term must be exactly one.
    pub fn pow_symbolic(&self, e: &RationalFunction) -> Result<Self> {
        if !self.coefficients[0].is_one() {
            return Err(Error::ConstantTermNotOne(self.coefficients[0].to_string()));
        }
        let mut t = self.clone();
        t.coefficients[0] = RationalFunction::zero();
        t.exact_degree = None;
        let mut acc = Self::one(self.order);
        let mut tk = Self::one(self.order);
        for k in 1..=self.order as u32 {
            tk = tk.mul(&t);
            if tk.is_zero() {
                break;
            }
            let b = RationalFunction::symbolic_binomial(e, k);
            acc = acc.add(&tk.scalar_mul(&b));
        }
        acc.exact_degree = None;
        Ok(acc)
    }

    /// Evaluates an exact polynomial at `x`. Fails if the series is not
    /// flagged exact, since a truncated series has no value.
    pub fn eval_polynomial(&self, x: &RationalFunction) -> Result<RationalFunction> {
        let degree = self.exact_degree.ok_or_else(|| {
            Error::InvalidArgument("evaluation of a series not known to be a polynomial".into())
        })?;
        let mut acc = RationalFunction::zero();
        for a in self.coefficients[..=degree.min(self.order)].iter().rev() {
            acc = &(&acc * x) + a;
        }
        Ok(acc)
    }
}

pub(crate) fn binom2(n: usize) -> i64 {
    (n * n.saturating_sub(1) / 2) as i64
}

/// Renders a coefficient times `t^n`, returning the sign separately so the
/// caller can join terms with ` + ` / ` - `.
fn render_term(c: &RationalFunction, n: usize) -> (bool, String) {
    let (neg, body) = if c.is_polynomial() && c.numerator().coeffs().iter().filter(|x| !num_traits::Zero::is_zero(*x)).count() == 1 {
        let s = c.to_string();
        match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        }
    } else if c.is_polynomial() {
        (false, format!("({c})"))
    } else {
        let neg = c.numerator().leading_sign() == std::cmp::Ordering::Less;
        let c = if neg { -c } else { c.clone() };
        (neg, format!("[{c}]"))
    };
    let tpow = match n {
        0 => String::new(),
        1 => "t".to_string(),
        _ => format!("t^{n}"),
    };
    let s = match (n, body.as_str()) {
        (0, _) => body,
        (_, "1") => tpow,
        _ => format!("{body}{tpow}"),
    };
    (neg, s)
}

impl fmt::Display for TruncatedSeries {
    /// `c0 + c1 t + ...`, followed by `+ O(t^(order+1))` unless the series is
    /// an exact polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, s) = render_term(c, n);
            match (first, neg) {
                (true, true) => write!(f, "-{s}")?,
                (true, false) => write!(f, "{s}")?,
                (false, true) => write!(f, " - {s}")?,
                (false, false) => write!(f, " + {s}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        if self.exact_degree.is_none() {
            write!(f, " + O(t^{})", self.order + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    fn series(cs: &[&str], order: usize) -> TruncatedSeries {
        TruncatedSeries::from_coefficients(cs.iter().map(|s| rf(s)).collect(), order)
    }

    #[test]
    fn geometric_series_inverts_one_minus_t() {
        let n = 6;
        let geo = TruncatedSeries::from_coefficients(vec![RationalFunction::one(); n + 1], n);
        let prod = series(&["1", "-1"], n).mul(&geo);
        assert_eq!(prod, TruncatedSeries::one(n));
    }

    #[test]
    fn square_of_b1() {
        // (t - p/(p+1) t^2)^2 = t^2 - 2p/(p+1) t^3 + p^2/(p+1)^2 t^4
        let b1 = series(&["0", "1", "-p/(p+1)"], 4);
        let sq = b1.mul(&b1);
        assert_eq!(sq, series(&["0", "0", "1", "(-2p)/(p+1)", "p^2/(p^2+2p+1)"], 4));
    }

    #[test]
    fn adding_zero_is_identity() {
        let a = series(&["1", "p", "1/(p+1)"], 3);
        assert_eq!(a.add(&TruncatedSeries::zero(3)), a);
    }

    #[test]
    fn scale_t_examples() {
        let a1 = series(&["0", "1", "-1/(p+1)"], 2);
        assert_eq!(a1.scale_t(&RationalFunction::p()), series(&["0", "p", "-p^2/(p+1)"], 2));
        assert_eq!(a1.scale_t(&RationalFunction::one()), a1);
        let t2 = series(&["0", "0", "1"], 2);
        assert_eq!(t2.scale_t(&RationalFunction::p_pow(-1)), series(&["0", "0", "1/p^2"], 2));
    }

    #[test]
    fn symbolic_power_examples() {
        let a = series(&["1", "1"], 2);
        let p = RationalFunction::p();
        assert_eq!(a.pow_symbolic(&p).unwrap(), series(&["1", "p", "(p^2-p)/2"], 2));
        assert_eq!(a.pow_symbolic(&RationalFunction::one()).unwrap(), a);
        assert!(series(&["2", "1"], 2).pow_symbolic(&p).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(series(&["0", "0", "0", "1"], 3).phi(), series(&["0", "0", "0", "1/p^3"], 3));
        assert_eq!(series(&["1", "1"], 3).phi(), series(&["1", "1"], 3));
        assert_eq!(series(&["0", "0", "0", "0", "1"], 4).phi(), series(&["0", "0", "0", "0", "1/p^6"], 4));
    }

    #[test]
    fn mixed_orders_truncate_to_minimum() {
        let a = series(&["1", "1", "1"], 2);
        let b = series(&["1", "1", "1", "1", "1"], 4);
        assert_eq!(a.mul(&b).order(), 2);
        assert_eq!(a.add(&b).order(), 2);
    }

    #[test]
    fn display_forms() {
        let r1 = TruncatedSeries::exact_polynomial(vec![rf("0"), rf("p+1"), rf("-p")], 2);
        assert_eq!(r1.to_string(), "(p + 1)t - pt^2");
        let a1 = TruncatedSeries::exact_polynomial(vec![rf("0"), rf("1"), rf("-1/(p+1)")], 2);
        assert_eq!(a1.to_string(), "t - [1/(p + 1)]t^2");
        assert_eq!(series(&["1"], 2).to_string(), "1 + O(t^3)");
    }

    #[test]
    fn exactness_flag_is_checked() {
        let s = series(&["1", "0", "1"], 4);
        assert!(s.clone().assert_exact_polynomial(2).is_ok());
        assert!(s.clone().assert_exact_polynomial(1).is_err());
        assert!(s.eval_polynomial(&RationalFunction::one()).is_err());
        let poly = s.assert_exact_polynomial(2).unwrap();
        assert_eq!(poly.eval_polynomial(&RationalFunction::p()).unwrap(), rf("p^2+1"));
    }
}
