use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense univariate polynomial in `p` with integer coefficients.
///
/// `coeffs[i]` is the coefficient of `p^i`. The vector never carries trailing
/// zeros, so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `c p^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Lowest index with a nonzero coefficient (the `p`-adic order of the polynomial).
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ZPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Divides every coefficient by `c`, which must divide all of them.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        ZPoly {
            coeffs: self.coeffs.iter().map(|x| x / c).collect(),
        }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        self.div_scalar_exact(&c)
    }

    /// Multiplication by `p^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        ZPoly { coeffs }
    }

    /// Coefficient reversal relative to `width`: returns `p^width * f(1/p)`.
    /// `width` must be at least the degree.
    pub fn reverse_within(&self, width: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); width + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[width - i] = c.clone();
        }
        Self::from_coeffs(coeffs)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        // Horner on numerator/denominator separately avoids a gcd per step.
        let (xn, xd) = (x.numer(), x.denom());
        let n = match self.degree() {
            None => return BigRational::zero(),
            Some(n) => n,
        };
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * xn + c * &dpow;
            dpow *= xd;
        }
        // acc = sum c_i xn^i xd^(n-i); dpow overshot by one factor of xd.
        let den = num_traits::pow(xd.clone(), n);
        BigRational::new(acc, den)
    }

    /// Exact division; `None` when `divisor` does not divide `self` in `Z[p]`.
    pub fn div_exact(&self, divisor: &ZPoly) -> Option<ZPoly> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let sd = self.degree()?;
        if sd < dd {
            return None;
        }
        if dd == 0 {
            let c = &divisor.coeffs[0];
            if self.coeffs.iter().any(|x| !x.is_multiple_of(c)) {
                return None;
            }
            return Some(self.div_scalar_exact(c));
        }
        let lc = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * dc;
            }
            quot[k] = q;
        }
        if rem.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(quot))
    }

    /// Pseudo-remainder of `self` by `divisor`.
    fn pseudo_rem(&self, divisor: &ZPoly) -> ZPoly {
        let dd = divisor.degree().expect("pseudo_rem by zero");
        let lc = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        while rem.len() > dd {
            let sd = rem.len() - 1;
            let top = rem[sd].clone();
            if top.is_zero() {
                rem.pop();
                continue;
            }
            for x in rem.iter_mut() {
                *x *= lc;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[sd - dd + j] -= &top * dc;
            }
            rem.pop();
            let g = rem.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
            if !g.is_zero() && !g.is_one() {
                for x in rem.iter_mut() {
                    *x /= &g;
                }
            }
        }
        ZPoly::from_coeffs(rem)
    }

    fn max_norm(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Primitive gcd of two polynomials, normalised to positive leading
    /// coefficient. Contents are ignored: `gcd(2p, 4)` is `1`.
    pub fn primitive_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
        if a.is_zero() {
            return b.primitive_part();
        }
        if b.is_zero() {
            return a.primitive_part();
        }
        if a.is_constant() || b.is_constant() {
            return ZPoly::one();
        }
        let a = a.primitive_part();
        let b = b.primitive_part();
        if a == b {
            return a;
        }
        // Common power of p first; it keeps the heuristic evaluation small.
        let k = a.low_degree().unwrap().min(b.low_degree().unwrap());
        let (a, b) = if k > 0 {
            (ZPoly::from_coeffs(a.coeffs[k..].to_vec()), ZPoly::from_coeffs(b.coeffs[k..].to_vec()))
        } else {
            (a, b)
        };
        let g = Self::heuristic_gcd(&a, &b).unwrap_or_else(|| Self::euclid_gcd(&a, &b));
        g.shift(k)
    }

    fn heuristic_gcd(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
        if a.is_constant() || b.is_constant() {
            return Some(ZPoly::one());
        }
        let bound = a.max_norm().min(b.max_norm());
        let mut xi: BigInt = bound * 2u32 + 29u32;
        for _ in 0..6 {
            let va = a.eval_int(&xi);
            let vb = b.eval_int(&xi);
            if !va.is_zero() && !vb.is_zero() {
                let gv = va.gcd(&vb);
                let cand = Self::interpolate_from_value(gv, &xi).primitive_part();
                if !cand.is_zero() && a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
                    return Some(cand);
                }
            }
            // Irrational-ish growth factor keeps successive points unrelated.
            xi = (&xi * 73794u32) / 27011u32;
        }
        None
    }

    /// Balanced base-`xi` digits of `v`, read as polynomial coefficients.
    fn interpolate_from_value(mut v: BigInt, xi: &BigInt) -> ZPoly {
        let half: BigInt = xi / 2u32;
        let mut coeffs = Vec::new();
        while !v.is_zero() {
            let mut r = v.mod_floor(xi);
            if r > half {
                r -= xi;
            }
            v = (v - &r) / xi;
            coeffs.push(r);
        }
        ZPoly::from_coeffs(coeffs)
    }

    fn euclid_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
        let (mut x, mut y) = if a.degree() >= b.degree() {
            (a.primitive_part(), b.primitive_part())
        } else {
            (b.primitive_part(), a.primitive_part())
        };
        while !y.is_zero() {
            let r = x.pseudo_rem(&y).primitive_part();
            x = y;
            y = r;
        }
        x.primitive_part()
    }

    pub fn derivative(&self) -> ZPoly {
        ZPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> ZPoly {
        let mut acc = ZPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// True when the coefficient sequence reads the same backwards.
    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    /// Sign of the leading coefficient.
    pub fn leading_sign(&self) -> Ordering {
        match self.leading() {
            None => Ordering::Equal,
            Some(c) if c.is_negative() => Ordering::Less,
            Some(_) => Ordering::Greater,
        }
    }
}

impl<'a> Add<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn add(self, rhs: &'a ZPoly) -> ZPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        ZPoly::from_coeffs(coeffs)
    }
}

impl<'a> Sub<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn sub(self, rhs: &'a ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, BigInt::zero());
        for (c, s) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= s;
        }
        ZPoly::from_coeffs(coeffs)
    }
}

impl<'a> Mul<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn mul(self, rhs: &'a ZPoly) -> ZPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ZPoly::from_coeffs(coeffs)
    }
}

impl Neg for &ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        ZPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly({self})")
    }
}

impl fmt::Display for ZPoly {
    /// Highest power first, e.g. `p^2 - 3p + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if i == 1 {
                        f.write_str("p")?;
                    } else {
                        write!(f, "p^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(c: &[i64]) -> ZPoly {
        ZPoly::from_i64s(c)
    }

    #[test]
    fn trailing_zeros_are_dropped() {
        assert_eq!(z(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(z(&[0, 0]).is_zero());
    }

    #[test]
    fn gcd_of_cyclotomic_products() {
        // (p^4 - 1) and (p^2 - 1)(p + 3)
        let a = z(&[-1, 0, 0, 0, 1]);
        let b = &z(&[-1, 0, 1]) * &z(&[3, 1]);
        assert_eq!(ZPoly::primitive_gcd(&a, &b), z(&[-1, 0, 1]));
    }

    #[test]
    fn gcd_ignores_content_and_extracts_powers_of_p() {
        let a = z(&[0, 0, 6, 6]); // 6p^2(p+1)
        let b = z(&[0, 4, 4]); // 4p(p+1)
        assert_eq!(ZPoly::primitive_gcd(&a, &b), z(&[0, 1, 1]));
    }

    #[test]
    fn euclid_and_heuristic_agree() {
        let f = &z(&[1, 1, 1, 1, 1]) * &z(&[1, -1, 1]);
        let g = &z(&[1, 1, 1, 1, 1]) * &z(&[2, 0, 0, 1]);
        let e = ZPoly::euclid_gcd(&f, &g);
        let h = ZPoly::heuristic_gcd(&f, &g).unwrap();
        assert_eq!(e, h);
        assert_eq!(e, z(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn exact_division_detects_remainders() {
        let a = z(&[-1, 0, 0, 0, 1]);
        assert_eq!(a.div_exact(&z(&[1, 0, 1])), Some(z(&[-1, 0, 1])));
        assert_eq!(a.div_exact(&z(&[2, 1])), None);
        assert_eq!(z(&[2, 4]).div_exact(&z(&[2])), Some(z(&[1, 2])));
        assert_eq!(z(&[2, 3]).div_exact(&z(&[2])), None);
    }

    #[test]
    fn display_reads_high_to_low() {
        assert_eq!(z(&[1, -3, 1]).to_string(), "p^2 - 3p + 1");
        assert_eq!(z(&[0, -1]).to_string(), "-p");
        assert_eq!(ZPoly::zero().to_string(), "0");
    }

    #[test]
    fn rational_evaluation() {
        let f = z(&[1, 0, 2]); // 2p^2 + 1
        let x = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(f.eval(&x), BigRational::new(BigInt::from(11), BigInt::from(9)));
    }
}
