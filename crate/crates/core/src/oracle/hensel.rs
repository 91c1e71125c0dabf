//! Root counting by Hensel descent.
//!
//! A polynomial `F` known modulo `p^k` is first divided by the largest power
//! of `p` dividing all its coefficients. Each simple root of the reduction
//! mod `p` lifts to exactly one root in `Z_p`, whatever the unknown higher
//! digits are. A multiple root `r` is resolved by recursing on
//! `G(y) = F(r + p y)`, whose roots in `Z_p` correspond one-to-one with the
//! roots of `F` in `r + p Z_p`. Each level consumes at least one digit of
//! precision; when none are left the count is undetermined.
//!
//! Over exact integer coefficients the squarefree part is used instead, and
//! the descent always terminates because a squarefree polynomial has only
//! finitely many levels of nonzero discriminant valuation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::sample::PadicSample;
use crate::exactalg::ZPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "count")]
pub enum Outcome {
    Determined(usize),
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootCountResult {
    pub outcome: Outcome,
    /// Digits of precision the descent read: the starting precision minus
    /// what was left at its deepest step, plus the digit read there. Equal to
    /// the full precision when the result is undetermined.
    pub precision_consumed: u32,
}

impl RootCountResult {
    pub fn count(&self) -> Option<usize> {
        match self.outcome {
            Outcome::Determined(c) => Some(c),
            Outcome::Undetermined => None,
        }
    }

    pub fn is_determined(&self) -> bool {
        matches!(self.outcome, Outcome::Determined(_))
    }
}

struct Descent {
    p: u64,
    p_big: BigInt,
    /// Smallest precision left after normalising at any level.
    min_left: Option<u32>,
}

fn valuation(c: &BigInt, p: &BigInt) -> u32 {
    let mut c = c.clone();
    let mut v = 0;
    while !c.is_zero() && c.is_multiple_of(p) {
        c /= p;
        v += 1;
    }
    v
}

impl Descent {
    fn new(p: u64) -> Self {
        Descent { p, p_big: BigInt::from(p), min_left: None }
    }

    /// Number of distinct roots in `Z_p` of every lift of `f`, or `None` if
    /// lifts disagree (or `f` may be zero). `k = None` means exact.
    fn count(&mut self, f: &[BigInt], k: Option<u32>) -> Option<usize> {
        let v = f.iter().filter(|c| !c.is_zero()).map(|c| valuation(c, &self.p_big)).min()?;
        let shift = self.p_big.clone().pow(v);
        let k = k.map(|k| k - v);
        if let Some(k) = k {
            // v < k always holds because stored coefficients are reduced mod p^k.
            self.min_left = Some(self.min_left.map_or(k, |m| m.min(k)));
        }
        let f: Vec<BigInt> = f.iter().map(|c| c / &shift).collect();

        let fbar: Vec<u64> = f.iter().map(|c| c.mod_floor(&self.p_big).to_u64().unwrap()).collect();
        let mut total = 0;
        for r in 0..self.p {
            if eval_mod(&fbar, r, self.p) != 0 {
                continue;
            }
            if eval_derivative_mod(&fbar, r, self.p) != 0 {
                total += 1;
                continue;
            }
            let g = self.taylor_rescaled(&f, r, k);
            total += self.count(&g, k)?;
        }
        Some(total)
    }

    /// `f(r + p y)`, reduced modulo `p^k` when `k` is given.
    fn taylor_rescaled(&self, f: &[BigInt], r: u64, k: Option<u32>) -> Vec<BigInt> {
        let mut a = f.to_vec();
        let r = BigInt::from(r);
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &r * &a[j + 1];
                a[j] += t;
            }
        }
        let modulus = k.map(|k| self.p_big.clone().pow(k));
        let mut scale = BigInt::from(1);
        for c in a.iter_mut() {
            *c *= &scale;
            if let Some(m) = &modulus {
                *c = c.mod_floor(m);
            }
            scale *= &self.p_big;
        }
        a
    }
}

fn eval_mod(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0u128, |acc, &c| (acc * x as u128 + c as u128) % p as u128) as u64
}

fn eval_derivative_mod(f: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u128;
    for (i, &c) in f.iter().enumerate().skip(1).rev() {
        acc = (acc * x as u128 + (c as u128 * i as u128) % p as u128) % p as u128;
    }
    acc as u64
}

fn run(f: &[BigInt], p: u64, precision: u32) -> RootCountResult {
    let mut d = Descent::new(p);
    match d.count(f, Some(precision)) {
        Some(c) => RootCountResult {
            outcome: Outcome::Determined(c),
            precision_consumed: precision - d.min_left.unwrap_or(precision) + 1,
        },
        None => RootCountResult { outcome: Outcome::Undetermined, precision_consumed: precision },
    }
}

/// Distinct roots in `Z_p`, valid for every lift of the sample.
pub fn count_zp_roots(f: &PadicSample) -> RootCountResult {
    run(f.coefficients(), f.p(), f.precision())
}

/// Distinct roots in `Q_p`: roots in `Z_p`, plus roots of the reversed
/// polynomial `x^n f(1/x)` in `p Z_p`, which are the reciprocals of the roots
/// outside `Z_p`.
///
/// If the leading coefficient vanishes modulo `p^K` the degree of a lift is
/// unknown, so the result is undetermined.
pub fn count_qp_roots(f: &PadicSample) -> RootCountResult {
    let zp = count_zp_roots(f);
    let n = f.degree();
    let lead = &f.coefficients()[n];
    if lead.is_zero() {
        return RootCountResult { outcome: Outcome::Undetermined, precision_consumed: f.precision() };
    }
    if f.mode().is_monic() {
        return zp;
    }
    let p = BigInt::from(f.p());
    let modulus = p.clone().pow(f.precision());
    // rev(p y) = sum_i c_{n-i} p^i y^i
    let mut scale = BigInt::from(1);
    let rev: Vec<BigInt> = f
        .coefficients()
        .iter()
        .rev()
        .map(|c| {
            let v = (c * &scale).mod_floor(&modulus);
            scale *= &p;
            v
        })
        .collect();
    let outer = run(&rev, f.p(), f.precision());
    match (zp.outcome, outer.outcome) {
        (Outcome::Determined(a), Outcome::Determined(b)) => RootCountResult {
            outcome: Outcome::Determined(a + b),
            precision_consumed: zp.precision_consumed.max(outer.precision_consumed),
        },
        _ => RootCountResult { outcome: Outcome::Undetermined, precision_consumed: f.precision() },
    }
}

/// The squarefree part `f / gcd(f, f')`, made primitive.
fn squarefree_part(f: &ZPoly) -> ZPoly {
    let g = ZPoly::primitive_gcd(f, &f.derivative());
    if g.is_constant() {
        return f.primitive_part();
    }
    f.primitive_part().div_exact(&g.primitive_part()).expect("gcd divides f").primitive_part()
}

/// Distinct roots in `Z_p` of an exactly known nonzero integer polynomial.
///
/// Repeated factors are removed first, so the descent terminates; this is
/// the reference for polynomials like `(x - 1)^2`, whose truncations are
/// undetermined at every finite precision.
pub fn count_zp_roots_exact(f: &ZPoly, p: u64) -> Option<usize> {
    if f.is_zero() {
        return None;
    }
    let sf = squarefree_part(f);
    Descent::new(p).count(sf.coeffs(), None)
}

/// Distinct roots in `Q_p` of an exactly known nonzero integer polynomial.
pub fn count_qp_roots_exact(f: &ZPoly, p: u64) -> Option<usize> {
    if f.is_zero() {
        return None;
    }
    let sf = squarefree_part(f);
    let inner = Descent::new(p).count(sf.coeffs(), None)?;
    // Nonzero roots of the reversal lying in p Z_p; dividing out powers of x
    // first removes the root at zero that would stand for infinity.
    let low = sf.low_degree().unwrap_or(0);
    let trimmed: Vec<BigInt> = sf.coeffs()[low..].to_vec();
    let pb = BigInt::from(p);
    let mut scale = BigInt::from(1);
    let rev: Vec<BigInt> = trimmed
        .iter()
        .rev()
        .map(|c| {
            let v = c * &scale;
            scale *= &pb;
            v
        })
        .collect();
    let outer = Descent::new(p).count(&rev, None)?;
    Some(inner + outer)
}

/// Whether an integer is a prime small enough for the oracle.
pub fn is_small_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Mode;

    fn sample(p: u64, k: u32, c: &[i64]) -> PadicSample {
        PadicSample::from_i64s(p, k, c, Mode::General).unwrap()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(count_zp_roots(&sample(3, 5, &[-1, 0, 1])).count(), Some(2));
        assert_eq!(count_zp_roots(&sample(5, 5, &[-2, 0, 1])).count(), Some(0));
        assert_eq!(count_zp_roots(&sample(3, 5, &[-3, 0, 1])).count(), Some(0));
        assert_eq!(count_qp_roots(&sample(3, 5, &[-1, 3])).count(), Some(1));
        assert_eq!(count_qp_roots(&sample(3, 5, &[-1, 0, 1])).count(), Some(2));
    }

    #[test]
    fn repeated_root_needs_exact_coefficients() {
        let f = sample(5, 6, &[1, -2, 1]);
        assert_eq!(count_zp_roots(&f).outcome, Outcome::Undetermined);
        let exact = ZPoly::from_i64s(&[1, -2, 1]);
        assert_eq!(count_zp_roots_exact(&exact, 5), Some(1));
    }

    #[test]
    fn truncated_repeated_root_really_is_ambiguous() {
        // (x - 1)^2 + 2 * 5^6 has no root (-2 is not a square mod 5),
        // (x - 1)^2 - 5^6 has two.
        let plus = ZPoly::from_i64s(&[1 + 2 * 15625, -2, 1]);
        let minus = ZPoly::from_i64s(&[1 - 15625, -2, 1]);
        assert_eq!(count_zp_roots_exact(&plus, 5), Some(0));
        assert_eq!(count_zp_roots_exact(&minus, 5), Some(2));
    }

    #[test]
    fn roots_of_higher_valuation() {
        // x^2 - 9 over Z_3: roots +-3 sit in the same residue class.
        assert_eq!(count_zp_roots(&sample(3, 8, &[-9, 0, 1])).count(), Some(2));
        // x^2 - 27: odd valuation, no roots.
        assert_eq!(count_zp_roots(&sample(3, 8, &[-27, 0, 1])).count(), Some(0));
        // 9x^2 - 1 has roots +-1/3, both outside Z_3.
        assert_eq!(count_zp_roots(&sample(3, 8, &[-1, 0, 9])).count(), Some(0));
        assert_eq!(count_qp_roots(&sample(3, 8, &[-1, 0, 9])).count(), Some(2));
    }

    #[test]
    fn vanishing_leading_coefficient_is_undetermined() {
        let f = sample(3, 3, &[1, 1, 27]);
        assert_eq!(count_qp_roots(&f).outcome, Outcome::Undetermined);
    }

    #[test]
    fn exact_qp_count() {
        // 6x^2 - 5x + 1 = (2x - 1)(3x - 1): over Q_3 both roots, 1/3 outside Z_3.
        let f = ZPoly::from_i64s(&[1, -5, 6]);
        assert_eq!(count_zp_roots_exact(&f, 3), Some(1));
        assert_eq!(count_qp_roots_exact(&f, 3), Some(2));
        // x (x - 1): the root at zero counts, nothing at infinity.
        let g = ZPoly::from_i64s(&[0, -1, 1]);
        assert_eq!(count_qp_roots_exact(&g, 2), Some(2));
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&p| is_small_prime(p)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
