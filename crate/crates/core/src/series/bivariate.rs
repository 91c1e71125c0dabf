use serde::{Deserialize, Serialize};

use super::TruncatedSeries;
use crate::error::{Error, Result};
use crate::exactalg::RationalFunction;

/// Power series in `u` whose coefficients are truncated series in `t`:
/// `sum_d S_d(t) u^d` for `d <= u_order`. All `S_d` share one `t`-order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BivariateSeries {
    u_order: usize,
    t_order: usize,
    terms: Vec<TruncatedSeries>,
}

impl BivariateSeries {
    pub fn zero(u_order: usize, t_order: usize) -> Self {
        BivariateSeries {
            u_order,
            t_order,
            terms: vec![TruncatedSeries::zero(t_order); u_order + 1],
        }
    }

    pub fn one(u_order: usize, t_order: usize) -> Self {
        let mut s = Self::zero(u_order, t_order);
        s.terms[0] = TruncatedSeries::one(t_order);
        s
    }

    /// Collects `terms[d]` as the coefficient of `u^d`. Each term is truncated
    /// to the smallest `t`-order present; missing `u` terms are zero.
    pub fn from_terms(terms: Vec<TruncatedSeries>, u_order: usize) -> Self {
        let t_order = terms.iter().map(TruncatedSeries::order).min().unwrap_or(0);
        let mut terms: Vec<_> = terms.iter().take(u_order + 1).map(|s| s.truncate(t_order)).collect();
        terms.resize(u_order + 1, TruncatedSeries::zero(t_order));
        BivariateSeries { u_order, t_order, terms }
    }

    pub fn u_order(&self) -> usize {
        self.u_order
    }

    pub fn t_order(&self) -> usize {
        self.t_order
    }

    /// Coefficient of `u^d`.
    pub fn u_coeff(&self, d: usize) -> &TruncatedSeries {
        &self.terms[d]
    }

    pub fn terms(&self) -> &[TruncatedSeries] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(TruncatedSeries::is_zero)
    }

    pub fn truncate(&self, u_order: usize, t_order: usize) -> Self {
        let u_order = u_order.min(self.u_order);
        let t_order = t_order.min(self.t_order);
        BivariateSeries {
            u_order,
            t_order,
            terms: self.terms[..=u_order].iter().map(|s| s.truncate(t_order)).collect(),
        }
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&TruncatedSeries, &TruncatedSeries) -> TruncatedSeries) -> Self {
        let u_order = self.u_order.min(rhs.u_order);
        let terms: Vec<_> = (0..=u_order).map(|d| f(&self.terms[d], &rhs.terms[d])).collect();
        BivariateSeries {
            u_order,
            t_order: self.t_order.min(rhs.t_order),
            terms,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, TruncatedSeries::add)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, TruncatedSeries::sub)
    }

    /// Product with convolution in `u` and in `t`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let u_order = self.u_order.min(rhs.u_order);
        let t_order = self.t_order.min(rhs.t_order);
        let mut terms = vec![TruncatedSeries::zero(t_order); u_order + 1];
        for i in 0..=u_order {
            if self.terms[i].is_zero() {
                continue;
            }
            for j in 0..=u_order - i {
                if rhs.terms[j].is_zero() {
                    continue;
                }
                terms[i + j] = terms[i + j].add(&self.terms[i].mul(&rhs.terms[j]));
            }
        }
        BivariateSeries { u_order, t_order, terms }
    }

    pub fn scalar_mul(&self, c: &RationalFunction) -> Self {
        self.map_terms(|s| s.scalar_mul(c))
    }

    fn map_terms(&self, f: impl Fn(&TruncatedSeries) -> TruncatedSeries) -> Self {
        BivariateSeries {
            u_order: self.u_order,
            t_order: self.t_order,
            terms: self.terms.iter().map(f).collect(),
        }
    }

    /// Substitution `t -> c t` in every `u` coefficient.
    pub fn scale_t(&self, c: &RationalFunction) -> Self {
        self.map_terms(|s| s.scale_t(c))
    }

    pub fn phi(&self) -> Self {
        self.map_terms(TruncatedSeries::phi)
    }

    /// `(1 + T)^e`, `T = self - 1`. The `u^0 t^0` coefficient must be one.
    /// Every term of `T^k` has combined `u`- and `t`-degree at least `k`, so
    /// the binomial sum stops after `u_order + t_order` terms at the latest.
    pub fn pow_symbolic(&self, e: &RationalFunction) -> Result<Self> {
        let c0 = self.terms[0].coeff(0);
        if !c0.is_one() {
            return Err(Error::ConstantTermNotOne(c0.to_string()));
        }
        let mut t = self.clone();
        t.terms[0] = t.terms[0].sub(&TruncatedSeries::one(self.t_order));
        let mut acc = Self::one(self.u_order, self.t_order);
        let mut tk = Self::one(self.u_order, self.t_order);
        for k in 1..=(self.u_order + self.t_order) as u32 {
            tk = tk.mul(&t);
            if tk.is_zero() {
                break;
            }
            let b = RationalFunction::symbolic_binomial(e, k);
            acc = acc.add(&tk.scalar_mul(&b));
        }
        Ok(acc)
    }

    /// Substitutes a value for `u`, giving `sum_d S_d(t) x^d`.
    pub fn eval_u(&self, x: &RationalFunction) -> TruncatedSeries {
        let mut acc = TruncatedSeries::zero(self.t_order);
        let mut pow = RationalFunction::one();
        for (d, s) in self.terms.iter().enumerate() {
            if d > 0 {
                pow = &pow * x;
            }
            acc = acc.add(&s.scalar_mul(&pow));
        }
        acc
    }
}
