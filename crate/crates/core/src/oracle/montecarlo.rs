use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::hensel::{count_qp_roots, count_zp_roots, is_small_prime, RootCountResult};
use super::sample::{Mode, PadicSample};
use crate::densities::full_table;
use crate::error::{Error, Result};
use crate::par;

pub const DEFAULT_K0: u32 = 8;
pub const DEFAULT_PRECISION_CAP: u32 = 512;
pub const DEFAULT_ABANDON_THRESHOLD: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloConfig {
    pub n: usize,
    pub p: u64,
    pub mode: Mode,
    pub trials: u64,
    pub seed: u64,
    pub k0: u32,
    pub precision_cap: u32,
    /// Abandoned fraction above which the report carries a warning.
    pub abandon_threshold: f64,
}

impl MonteCarloConfig {
    pub fn new(n: usize, p: u64, mode: Mode, trials: u64, seed: u64) -> Self {
        MonteCarloConfig {
            n,
            p,
            mode,
            trials,
            seed,
            k0: DEFAULT_K0,
            precision_cap: DEFAULT_PRECISION_CAP,
            abandon_threshold: DEFAULT_ABANDON_THRESHOLD,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("need at least one trial".into()));
        }
        if !is_small_prime(self.p) {
            return Err(Error::InvalidArgument(format!("{} is not prime", self.p)));
        }
        if self.k0 < 2 || self.precision_cap < self.k0 {
            return Err(Error::InvalidArgument("need 2 <= K0 <= precision cap".into()));
        }
        Ok(())
    }
}

/// Tallies over trials; merging is associative and commutative.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Histogram {
    pub counts: Vec<u64>,
    pub abandoned: u64,
    pub extended: u64,
}

impl Histogram {
    fn empty(n: usize) -> Self {
        Histogram { counts: vec![0; n + 1], abandoned: 0, extended: 0 }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.abandoned += other.abandoned;
        self.extended += other.extended;
        self
    }

    pub fn determined(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Root count of one sample under the convention of its mode: `Q_p` roots
/// for general polynomials, `Z_p` roots for the monic ones (which have no
/// others).
pub fn count_for_mode(s: &PadicSample) -> RootCountResult {
    if s.mode().is_monic() {
        count_zp_roots(s)
    } else {
        count_qp_roots(s)
    }
}

/// The RNG for trial `i`: the master seed selects the key, the trial index
/// the stream, so results do not depend on how trials are scheduled.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs one trial: sample at `K0`, extending by doubling until determined or
/// past the cap. Returns the count (or `None` if abandoned) and whether any
/// extension was needed.
pub fn run_trial(cfg: &MonteCarloConfig, trial: u64) -> (Option<usize>, bool) {
    let mut rng = trial_rng(cfg.seed, trial);
    let mut s = PadicSample::draw(cfg.n, cfg.p, cfg.k0, cfg.mode, &mut rng);
    let mut extended = false;
    loop {
        if let Some(c) = count_for_mode(&s).count() {
            return (Some(c), extended);
        }
        if s.precision() >= cfg.precision_cap {
            return (None, extended);
        }
        let next = (s.precision() * 2).min(cfg.precision_cap);
        s.extend(next, &mut rng);
        extended = true;
    }
}

pub fn simulate(cfg: &MonteCarloConfig) -> Result<Histogram> {
    cfg.validate()?;
    let n = cfg.n;
    Ok(par::map_reduce(
        cfg.trials,
        || Histogram::empty(n),
        |i| {
            let mut h = Histogram::empty(n);
            match run_trial(cfg, i) {
                (Some(c), ext) => {
                    h.counts[c] += 1;
                    h.extended += ext as u64;
                }
                (None, ext) => {
                    h.abandoned += 1;
                    h.extended += ext as u64;
                }
            }
            h
        },
        Histogram::merge,
    ))
}

/// Exact star values `P(r roots)` at the prime `p` for the distribution of
/// `mode`: `rho*` for general, `alpha*` for monic, `beta*` for monic_xn.
pub fn expected_distribution(n: usize, p: u64, mode: Mode) -> Result<Vec<BigRational>> {
    let table = full_table(n, n)?;
    let row = match mode {
        Mode::General => &table.rho_star[n],
        Mode::Monic => &table.alpha_star[n],
        Mode::MonicXn => &table.beta_star[n],
    };
    row.iter().map(|v| v.eval_int(p as i64)).collect()
}

/// The JSON report of a Monte Carlo run.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MonteCarloReport {
    pub n: usize,
    pub p: u64,
    pub mode: Mode,
    pub trials: u64,
    pub seed: u64,
    #[serde(rename = "K0")]
    pub k0: u32,
    pub counts: BTreeMap<usize, u64>,
    pub abandoned: u64,
    pub extended_fraction: f64,
    pub expected: BTreeMap<usize, String>,
    pub frequencies: BTreeMap<usize, f64>,
    pub standard_errors: BTreeMap<usize, f64>,
    pub z_scores: BTreeMap<usize, f64>,
    pub mean_roots: f64,
    pub expected_mean_roots: String,
    pub mean_z_score: f64,
    pub warnings: Vec<String>,
}

impl MonteCarloReport {
    pub fn max_abs_z(&self) -> f64 {
        self.z_scores.values().chain(std::iter::once(&self.mean_z_score)).fold(0.0, |m, z| m.max(z.abs()))
    }

    pub fn abandoned_fraction(&self) -> f64 {
        self.abandoned as f64 / self.trials as f64
    }
}

fn z_score(observed: f64, expected: f64, se: f64) -> f64 {
    if se > 0.0 {
        (observed - expected) / se
    } else if (observed - expected).abs() < f64::EPSILON {
        0.0
    } else {
        f64::INFINITY.copysign(observed - expected)
    }
}

/// Simulates and compares against the exact distribution.
///
/// Standard errors use the binomial model at the expected probability, over
/// the determined trials.
pub fn monte_carlo(cfg: &MonteCarloConfig) -> Result<MonteCarloReport> {
    let expected = expected_distribution(cfg.n, cfg.p, cfg.mode)?;
    let hist = simulate(cfg)?;
    Ok(build_report(cfg, &hist, &expected))
}

pub fn build_report(cfg: &MonteCarloConfig, hist: &Histogram, expected: &[BigRational]) -> MonteCarloReport {
    let m = hist.determined().max(1) as f64;
    let exp_f: Vec<f64> = expected.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect();
    let mut frequencies = BTreeMap::new();
    let mut standard_errors = BTreeMap::new();
    let mut z_scores = BTreeMap::new();
    for (r, &c) in hist.counts.iter().enumerate() {
        let f = c as f64 / m;
        let pr = exp_f[r];
        let se = (pr * (1.0 - pr) / m).sqrt();
        frequencies.insert(r, f);
        standard_errors.insert(r, se);
        z_scores.insert(r, z_score(f, pr, se));
    }
    let mean: f64 = hist.counts.iter().enumerate().map(|(r, &c)| r as f64 * c as f64).sum::<f64>() / m;
    let exp_mean_q: BigRational = expected.iter().enumerate().map(|(r, q)| q * BigRational::from_integer(r.into())).sum();
    let exp_mean = exp_mean_q.to_f64().unwrap_or(f64::NAN);
    let second: f64 = exp_f.iter().enumerate().map(|(r, q)| (r * r) as f64 * q).sum();
    let mean_se = ((second - exp_mean * exp_mean).max(0.0) / m).sqrt();

    let mut warnings = Vec::new();
    let abandoned_fraction = hist.abandoned as f64 / cfg.trials as f64;
    if abandoned_fraction > cfg.abandon_threshold {
        warnings.push(format!(
            "{} of {} trials abandoned at the {}-digit cap ({:.2e} > {:.0e})",
            hist.abandoned, cfg.trials, cfg.precision_cap, abandoned_fraction, cfg.abandon_threshold
        ));
    }
    MonteCarloReport {
        n: cfg.n,
        p: cfg.p,
        mode: cfg.mode,
        trials: cfg.trials,
        seed: cfg.seed,
        k0: cfg.k0,
        counts: hist.counts.iter().copied().enumerate().collect(),
        abandoned: hist.abandoned,
        extended_fraction: hist.extended as f64 / cfg.trials as f64,
        expected: expected.iter().enumerate().map(|(r, q)| (r, q.to_string())).collect(),
        frequencies,
        standard_errors,
        z_scores,
        mean_roots: mean,
        expected_mean_roots: exp_mean_q.to_string(),
        mean_z_score: z_score(mean, exp_mean, mean_se),
        warnings,
    }
}
