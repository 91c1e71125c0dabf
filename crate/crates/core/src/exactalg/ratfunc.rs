use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ZPoly;
use crate::error::{Error, Result};

/// An element of `Q(p)`, kept in canonical form.
///
/// Canonical form: `numerator / denominator` with integer coefficients, the two
/// polynomials coprime in `Q[p]`, the joint content equal to one and the
/// leading coefficient of the denominator positive. Zero is `0/1`. Equality of
/// values is therefore structural equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: ZPoly,
    den: ZPoly,
}

/// Value of a rational function as `p` grows without bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    Finite(BigRational),
    PlusInfinity,
    MinusInfinity,
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Limit::Finite(q) => write!(f, "{q}"),
            Limit::PlusInfinity => f.write_str("inf"),
            Limit::MinusInfinity => f.write_str("-inf"),
        }
    }
}

impl RationalFunction {
    pub fn new(num: ZPoly, den: ZPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: ZPoly, den: ZPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = ZPoly::primitive_gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        Self::fix_content(num, den)
    }

    /// Normalises content and sign of an already coprime pair.
    fn fix_content(num: ZPoly, den: ZPoly) -> Self {
        let mut c = num.content().gcd(&den.content());
        if den.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        if c.is_one() {
            RationalFunction { num, den }
        } else {
            RationalFunction {
                num: num.div_scalar_exact(&c),
                den: den.div_scalar_exact(&c),
            }
        }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: ZPoly::zero(),
            den: ZPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_bigint(BigInt::from(c))
    }

    pub fn from_bigint(c: BigInt) -> Self {
        RationalFunction {
            num: ZPoly::constant(c),
            den: ZPoly::one(),
        }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::fix_content(ZPoly::constant(q.numer().clone()), ZPoly::constant(q.denom().clone()))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&BigRational::new(n.into(), d.into()))
    }

    pub fn from_poly(num: ZPoly) -> Self {
        Self::fix_content(num, ZPoly::one())
    }

    /// The indeterminate `p`.
    pub fn p() -> Self {
        Self::from_poly(ZPoly::monomial(BigInt::one(), 1))
    }

    /// `p^k` for any integer `k`; negative powers are `1/p^|k|`.
    pub fn p_pow(k: i64) -> Self {
        let m = ZPoly::monomial(BigInt::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_poly(m)
        } else {
            RationalFunction { num: ZPoly::one(), den: m }
        }
    }

    pub fn numerator(&self) -> &ZPoly {
        &self.num
    }

    pub fn denominator(&self) -> &ZPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a polynomial in `p` (denominator a constant).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self * &rhs.recip_unchecked())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.recip_unchecked())
    }

    fn recip_unchecked(&self) -> Self {
        Self::fix_content(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        let mut base = if e < 0 {
            self.recip().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self * &Self::from_int(c)
    }

    /// `f(1/p)`, computed by reversing coefficient vectors and balancing the
    /// resulting power of `p` between numerator and denominator.
    pub fn reciprocal_substitute(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let mut num = self.num.reverse_within(dn);
        let mut den = self.den.reverse_within(dd);
        if dd > dn {
            num = num.shift(dd - dn);
        } else {
            den = den.shift(dn - dd);
        }
        Self::canonical(num, den)
    }

    /// Invariance under `p -> 1/p`.
    pub fn is_symmetric(&self) -> bool {
        *self == self.reciprocal_substitute()
    }

    /// Exact value at a rational point.
    pub fn eval(&self, q: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(q);
        if d.is_zero() {
            return Err(Error::Pole(q.to_string()));
        }
        Ok(self.num.eval(q) / d)
    }

    pub fn eval_int(&self, q: i64) -> Result<BigRational> {
        self.eval(&BigRational::from_integer(q.into()))
    }

    pub fn large_p_limit(&self) -> Limit {
        if self.is_zero() {
            return Limit::Finite(BigRational::zero());
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let ratio = BigRational::new(
            self.num.leading().unwrap().clone(),
            self.den.leading().unwrap().clone(),
        );
        match dn.cmp(&dd) {
            std::cmp::Ordering::Less => Limit::Finite(BigRational::zero()),
            std::cmp::Ordering::Equal => Limit::Finite(ratio),
            std::cmp::Ordering::Greater if ratio.is_positive() => Limit::PlusInfinity,
            std::cmp::Ordering::Greater => Limit::MinusInfinity,
        }
    }

    /// `E (E-1) ... (E-k+1) / k!`, one for `k = 0`.
    pub fn symbolic_binomial(e: &Self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut fact = BigInt::one();
        for i in 0..k {
            acc = &acc * &(e - &Self::from_int(i as i64));
            fact *= BigInt::from(i + 1);
        }
        &acc * &Self::from_rational(&BigRational::new(BigInt::one(), fact))
    }

    /// Degree of numerator minus degree of denominator; `None` for zero.
    pub fn degree_balance(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree()? as i64)
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &'a RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        let g1 = ZPoly::primitive_gcd(&self.num, &rhs.den);
        let g2 = ZPoly::primitive_gcd(&rhs.num, &self.den);
        let (an, bd) = if g1.is_one() {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.div_exact(&g1).unwrap(), rhs.den.div_exact(&g1).unwrap())
        };
        let (bn, ad) = if g2.is_one() {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.div_exact(&g2).unwrap(), self.den.div_exact(&g2).unwrap())
        };
        RationalFunction::fix_content(&an * &bn, &ad * &bd)
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &'a RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::canonical(&self.num + &rhs.num, self.den.clone());
        }
        let g = ZPoly::primitive_gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            let den = &self.den * &rhs.den;
            return RationalFunction::fix_content(num, den);
        }
        let a1 = self.den.div_exact(&g).unwrap();
        let b1 = rhs.den.div_exact(&g).unwrap();
        let num = &(&self.num * &b1) + &(&rhs.num * &a1);
        if num.is_zero() {
            return RationalFunction::zero();
        }
        let den = &self.den * &b1;
        let h = ZPoly::primitive_gcd(&num, &g);
        if h.is_one() {
            RationalFunction::fix_content(num, den)
        } else {
            RationalFunction::fix_content(num.div_exact(&h).unwrap(), den.div_exact(&h).unwrap())
        }
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &'a RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero; use [`RationalFunction::try_div`] to recover.
    fn div(self, rhs: &'a RationalFunction) -> RationalFunction {
        self.try_div(rhs).expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &'a RationalFunction) -> RationalFunction {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<RationalFunction> for &'a RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl std::iter::Sum for RationalFunction {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| &a + &b)
    }
}

impl std::iter::Product for RationalFunction {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |a, b| &a * &b)
    }
}

impl fmt::Display for RationalFunction {
    /// `num/den`, each side in parentheses unless it is a single term;
    /// just the numerator when the denominator is `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let side = |z: &ZPoly| {
            if z.coeffs().iter().filter(|c| !c.is_zero()).count() == 1 {
                z.to_string()
            } else {
                format!("({z})")
            }
        };
        write!(f, "{}/{}", side(&self.num), side(&self.den))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

fn parse_poly(s: &str, whole: &str) -> Result<ZPoly> {
    let err = |reason: &str| Error::Parse {
        input: whole.to_string(),
        reason: reason.to_string(),
    };
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(&s);
    if s.is_empty() {
        return Err(err("empty polynomial"));
    }
    let mut coeffs: Vec<BigInt> = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut neg = false;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            neg = bytes[i] == b'-';
            i += 1;
        } else if i > 0 {
            return Err(err("expected sign between terms"));
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let mut c = if i > start {
            BigInt::from_str(&s[start..i]).map_err(|_| err("bad coefficient"))?
        } else {
            BigInt::one()
        };
        let mut power = 0usize;
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
        }
        if i < bytes.len() && bytes[i] == b'p' {
            i += 1;
            power = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let ps = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                power = s[ps..i].parse().map_err(|_| err("bad exponent"))?;
            }
        } else if i == start {
            return Err(err("expected coefficient or p"));
        }
        if neg {
            c = -c;
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigInt::zero());
        }
        coeffs[power] += c;
    }
    Ok(ZPoly::from_coeffs(coeffs))
}

/// Index of a `/` that is not inside parentheses.
fn top_level_slash(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

impl FromStr for RationalFunction {
    type Err = Error;

    /// Accepts the [`Display`](fmt::Display) form: `(num)/(den)` or a bare
    /// polynomial such as `p^2 - 3p + 1`.
    fn from_str(s: &str) -> Result<Self> {
        match top_level_slash(s) {
            Some(i) => {
                let num = parse_poly(&s[..i], s)?;
                let den = parse_poly(&s[i + 1..], s)?;
                RationalFunction::new(num, den)
            }
            None => Ok(RationalFunction::from_poly(parse_poly(s, s)?)),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CoefficientPair {
    numerator: Vec<String>,
    denominator: Vec<String>,
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CoefficientPair {
            numerator: self.num.coeffs().iter().map(|c| c.to_string()).collect(),
            denominator: self.den.coeffs().iter().map(|c| c.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let pair = CoefficientPair::deserialize(deserializer)?;
        let parse = |v: &[String]| -> std::result::Result<ZPoly, D::Error> {
            v.iter()
                .map(|s| BigInt::from_str(s).map_err(D::Error::custom))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(ZPoly::from_coeffs)
        };
        let num = parse(&pair.numerator)?;
        let den = parse(&pair.denominator)?;
        RationalFunction::new(num, den).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(rf("p/(p+1)") + rf("1/(p+1)"), RationalFunction::one());
        assert_eq!(rf("p-1") * rf("p+1"), rf("p^2-1"));
        assert_eq!(rf("(p^4-1)/(p^2-1)"), rf("p^2+1"));
        assert_eq!(rf("p").try_div(&RationalFunction::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn canonical_form_fixes_sign_and_content() {
        let f = RationalFunction::new(ZPoly::from_i64s(&[2, 2]), ZPoly::from_i64s(&[0, -4])).unwrap();
        assert_eq!(f.numerator(), &ZPoly::from_i64s(&[-1, -1]));
        assert_eq!(f.denominator(), &ZPoly::from_i64s(&[0, 2]));
        assert!(RationalFunction::new(ZPoly::one(), ZPoly::zero()).is_err());
    }

    #[test]
    fn reciprocal_substitution_examples() {
        assert_eq!(rf("p/(p+1)").reciprocal_substitute(), rf("1/(p+1)"));
        let two_rho = rf("(p^4 + 2p^2 + 1)/(p^4+p^3+p^2+p+1)");
        assert_eq!(two_rho.reciprocal_substitute(), two_rho);
        assert_eq!(RationalFunction::one().reciprocal_substitute(), RationalFunction::one());
        assert_eq!(rf("p^3").reciprocal_substitute(), RationalFunction::p_pow(-3));
    }

    #[test]
    fn symmetry_predicate() {
        assert!(!rf("p/(p+1)").is_symmetric());
        assert!(RationalFunction::from_ratio(1, 2).is_symmetric());
        assert!(rf("p/(p^2+1)").is_symmetric());
    }

    #[test]
    fn evaluation_and_poles() {
        assert_eq!(rf("p/(p+1)").eval_int(2).unwrap(), q(2, 3));
        assert!(matches!(rf("1/(p-1)").eval_int(1), Err(Error::Pole(_))));
        assert_eq!(RationalFunction::from_ratio(1, 2).eval_int(3).unwrap(), q(1, 2));
    }

    #[test]
    fn large_p_limits() {
        let v = rf("(p^4+2p^2+1)/(2p^4+2p^3+2p^2+2p+2)");
        assert_eq!(v.large_p_limit(), Limit::Finite(q(1, 2)));
        assert_eq!(rf("p/(p+1)").large_p_limit(), Limit::Finite(q(1, 1)));
        assert_eq!(rf("p^2/(p+1)").large_p_limit(), Limit::PlusInfinity);
        assert_eq!(rf("1/(p+1)").large_p_limit(), Limit::Finite(q(0, 1)));
    }

    #[test]
    fn symbolic_binomial_examples() {
        let p = RationalFunction::p();
        assert_eq!(RationalFunction::symbolic_binomial(&p, 2), rf("(p^2-p)/2"));
        assert_eq!(RationalFunction::symbolic_binomial(&p, 0), RationalFunction::one());
        let e = rf("p+1");
        assert_eq!(RationalFunction::symbolic_binomial(&e, 3), rf("(p^3-p)/6"));
    }

    #[test]
    fn negative_powers_of_p() {
        let f = RationalFunction::p_pow(-6);
        assert_eq!(f.to_string(), "1/p^6");
        assert_eq!(&f * &RationalFunction::p_pow(6), RationalFunction::one());
        assert_eq!(RationalFunction::p().pow(-2), RationalFunction::p_pow(-2));
    }

    #[test]
    fn string_and_json_round_trip() {
        let f = rf("(3p^12 - p + 7)/(2p^5 - 2)");
        assert_eq!(f.to_string().parse::<RationalFunction>().unwrap(), f);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<RationalFunction>(&json).unwrap(), f);
        assert!("p^".parse::<RationalFunction>().is_err());
        assert!("(p+1)/(0)".parse::<RationalFunction>().is_err());
    }
}
