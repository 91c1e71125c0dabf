use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which coefficient distribution a sample was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// All `n + 1` coefficients Haar-uniform in `Z_p`.
    General,
    /// Leading coefficient `1`, the rest uniform.
    Monic,
    /// Leading coefficient `1`, the rest uniform in `p Z_p`, so the
    /// polynomial reduces to `x^n` mod `p`.
    MonicXn,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::General, Mode::Monic, Mode::MonicXn];

    pub fn name(self) -> &'static str {
        match self {
            Mode::General => "general",
            Mode::Monic => "monic",
            Mode::MonicXn => "monic_xn",
        }
    }

    pub fn is_monic(self) -> bool {
        !matches!(self, Mode::General)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse { input: s.into(), reason: "expected general, monic or monic_xn".into() })
    }
}

/// A polynomial over `Z_p` known modulo `p^K`.
///
/// Coefficients are stored low degree first and reduced into `[0, p^K)`. In
/// the monic modes the leading coefficient is exactly `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicSample {
    p: u64,
    precision: u32,
    coefficients: Vec<BigInt>,
    mode: Mode,
}

impl PadicSample {
    /// Reduces the given coefficients modulo `p^K`.
    ///
    /// Fails if `p < 2`, `K = 0`, or a monic mode is given a leading
    /// coefficient other than `1`, or `monic_xn` a lower coefficient not
    /// divisible by `p`.
    pub fn new(p: u64, precision: u32, coefficients: Vec<BigInt>, mode: Mode) -> Result<Self> {
        if p < 2 || precision == 0 || coefficients.is_empty() {
            return Err(Error::InvalidArgument("need p >= 2, K >= 1 and at least one coefficient".into()));
        }
        let modulus = BigInt::from(p).pow(precision);
        let coefficients: Vec<BigInt> = coefficients.iter().map(|c| c.mod_floor(&modulus)).collect();
        let n = coefficients.len() - 1;
        if mode.is_monic() && !coefficients[n].is_one() {
            return Err(Error::InvalidArgument(format!("{mode} sample needs leading coefficient 1")));
        }
        if mode == Mode::MonicXn && coefficients[..n].iter().any(|c| !c.is_multiple_of(&BigInt::from(p))) {
            return Err(Error::InvalidArgument("monic_xn sample needs lower coefficients divisible by p".into()));
        }
        Ok(PadicSample { p, precision, coefficients, mode })
    }

    pub fn from_i64s(p: u64, precision: u32, coefficients: &[i64], mode: Mode) -> Result<Self> {
        Self::new(p, precision, coefficients.iter().map(|&c| BigInt::from(c)).collect(), mode)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Draws a sample at precision `K`, digit by digit: for each coefficient
    /// in turn, its `K` base-`p` digits from least significant up.
    pub fn draw<R: Rng>(n: usize, p: u64, precision: u32, mode: Mode, rng: &mut R) -> Self {
        let mut s = PadicSample { p, precision: 0, coefficients: vec![BigInt::zero(); n + 1], mode };
        if mode.is_monic() {
            s.coefficients[n] = BigInt::one();
        }
        s.extend(precision, rng);
        s
    }

    /// Appends fresh uniform digits `K..new_precision` to every free
    /// coefficient, as a draw at the higher precision conditioned on the
    /// digits already present. No-op if `new_precision <= K`.
    pub fn extend<R: Rng>(&mut self, new_precision: u32, rng: &mut R) {
        if new_precision <= self.precision {
            return;
        }
        let n = self.degree();
        let free = if self.mode.is_monic() { n } else { n + 1 };
        let base = BigInt::from(self.p);
        let start_weight = base.clone().pow(self.precision);
        for c in self.coefficients.iter_mut().take(free) {
            let mut weight = start_weight.clone();
            for digit in self.precision..new_precision {
                // The lowest digit of a monic_xn coefficient is always 0.
                let value = if self.mode == Mode::MonicXn && digit == 0 { 0 } else { rng.random_range(0..self.p) };
                *c += &weight * value;
                weight *= &base;
            }
        }
        self.precision = new_precision;
    }
}
