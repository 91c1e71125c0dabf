use serde::{Deserialize, Serialize};

use crate::exactalg::RationalFunction;

/// Rows indexed by degree `n`; row `n` holds entries for `d` (or `r`) in
/// `0..=width`, entries beyond `n` being zero.
pub type Grid = Vec<Vec<RationalFunction>>;

/// Which computation produced the moment grids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Splitting-type recursion for `alpha` from `beta`, the valuation
    /// recursion for `beta` from `alpha`, and reduced-degree conditioning for `rho`.
    Recursion,
    /// Coefficient-by-coefficient solution of the generating-function identities.
    GeneratingFunction,
}

/// The named quantities a table can hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Alpha,
    Beta,
    Rho,
    AlphaTilde,
    AlphaStar,
    BetaStar,
    RhoStar,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::Alpha,
        Quantity::Beta,
        Quantity::Rho,
        Quantity::AlphaTilde,
        Quantity::AlphaStar,
        Quantity::BetaStar,
        Quantity::RhoStar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Alpha => "alpha",
            Quantity::Beta => "beta",
            Quantity::Rho => "rho",
            Quantity::AlphaTilde => "alpha_tilde",
            Quantity::AlphaStar => "alpha_star",
            Quantity::BetaStar => "beta_star",
            Quantity::RhoStar => "rho_star",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.name() == s)
    }

    /// Star quantities are indexed by root count `r`, the rest by set size `d`.
    pub fn is_probability(self) -> bool {
        matches!(self, Quantity::AlphaStar | Quantity::BetaStar | Quantity::RhoStar)
    }

    pub fn latex(self) -> &'static str {
        match self {
            Quantity::Alpha => "\\alpha",
            Quantity::Beta => "\\beta",
            Quantity::Rho => "\\rho",
            Quantity::AlphaTilde => "\\widetilde{\\alpha}",
            Quantity::AlphaStar => "\\alpha^*",
            Quantity::BetaStar => "\\beta^*",
            Quantity::RhoStar => "\\rho^*",
        }
    }
}

/// Moment and probability grids for degrees `0..=n_max`.
///
/// Moment grids (`alpha`, `beta`, `rho`, `alpha_tilde`) have columns
/// `d = 0..=d_max`. Probability grids are present only for rows `n <= d_max`,
/// since inverting row `n` needs every moment `d <= n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityTable {
    pub n_max: usize,
    pub d_max: usize,
    pub route: Route,
    pub alpha: Grid,
    pub beta: Grid,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rho: Grid,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alpha_tilde: Grid,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alpha_star: Grid,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub beta_star: Grid,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rho_star: Grid,
}

impl DensityTable {
    pub fn grid(&self, q: Quantity) -> &Grid {
        match q {
            Quantity::Alpha => &self.alpha,
            Quantity::Beta => &self.beta,
            Quantity::Rho => &self.rho,
            Quantity::AlphaTilde => &self.alpha_tilde,
            Quantity::AlphaStar => &self.alpha_star,
            Quantity::BetaStar => &self.beta_star,
            Quantity::RhoStar => &self.rho_star,
        }
    }

    /// Entry `(n, k)` of a grid, `None` when outside what was computed.
    pub fn get(&self, q: Quantity, n: usize, k: usize) -> Option<&RationalFunction> {
        self.grid(q).get(n)?.get(k)
    }

    /// Largest `n` whose probability row is available.
    pub fn star_rows(&self) -> usize {
        self.rho_star.len().max(self.alpha_star.len())
    }

    pub fn alpha(&self, n: usize, d: usize) -> &RationalFunction {
        &self.alpha[n][d]
    }

    pub fn beta(&self, n: usize, d: usize) -> &RationalFunction {
        &self.beta[n][d]
    }

    pub fn rho(&self, n: usize, d: usize) -> &RationalFunction {
        &self.rho[n][d]
    }
}

pub(crate) fn zero_grid(n_max: usize, width: usize) -> Grid {
    vec![vec![RationalFunction::zero(); width + 1]; n_max + 1]
}
