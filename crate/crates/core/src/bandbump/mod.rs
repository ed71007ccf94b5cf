//! Joint distribution of the stopping time and outcome of Band or Bump.
//!
//! Cards are drawn from a deck of `m` ranks with `s` cards each until either
//! every rank's tally lies in `[l, u]` (a band) or some tally reaches `u + 1`
//! (a bump).

mod book_or_band;
mod engine;
mod ranges;

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

pub use book_or_band::book_or_band_bump;
pub use engine::{BandPrefactor, BumpTerm, Engine};
pub use ranges::{bump_index_range, bump_k_range, bump_kpp_range, kpp_bounds, BumpIndexRange, KRange};

use crate::error::{Error, Result};
use crate::Rational;

/// Game parameters `(m, s, l, u)` with `m, s >= 1` and `0 <= l <= u <= s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameParams {
    m: usize,
    s: usize,
    l: usize,
    u: usize,
}

/// Which formula family governs a parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `l = u = 0`: the first card is a bump.
    AllBump,
    /// `0 = l < u`: the first card is a band.
    AllBand,
    /// `0 < l`, `u = s`: bumps are impossible; a coupon collector problem.
    CouponCollector,
    /// `0 < l = u < s`: a band can only happen at `n_max`.
    EqualQuota,
    /// `0 < l < u < s`.
    General,
}

impl GameParams {
    pub fn new(m: usize, s: usize, l: usize, u: usize) -> Result<Self> {
        if m == 0 || s == 0 {
            return Err(Error::param(format!("need m >= 1 and s >= 1, got m={m}, s={s}")));
        }
        if l > u || u > s {
            return Err(Error::param(format!("need 0 <= l <= u <= s, got l={l}, u={u}, s={s}")));
        }
        Ok(GameParams { m, s, l, u })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn u(&self) -> usize {
        self.u
    }

    /// Deck size `m * s`.
    pub fn t(&self) -> usize {
        self.m * self.s
    }

    /// Pigeonhole bound `l + (m - 1) u` on the game length.
    pub fn n_max(&self) -> usize {
        self.l + (self.m - 1) * self.u
    }

    pub fn regime(&self) -> Regime {
        let GameParams { l, u, s, .. } = *self;
        if u == 0 {
            Regime::AllBump
        } else if l == 0 {
            Regime::AllBand
        } else if u == s {
            Regime::CouponCollector
        } else if l == u {
            Regime::EqualQuota
        } else {
            Regime::General
        }
    }

    /// The draw indices a distribution table covers.
    pub fn row_range(&self) -> std::ops::RangeInclusive<usize> {
        match self.regime() {
            Regime::AllBump | Regime::AllBand => 1..=1,
            Regime::CouponCollector => self.m * self.l..=self.n_max(),
            Regime::EqualQuota | Regime::General => {
                (self.m * self.l).min(self.u + 1)..=self.n_max()
            }
        }
    }
}

impl fmt::Display for GameParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, s={}, l={}, u={})", self.m, self.s, self.l, self.u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Band,
    Bump,
}

impl Outcome {
    pub const ALL: [Outcome; 2] = [Outcome::Band, Outcome::Bump];

    pub fn name(self) -> &'static str {
        match self {
            Outcome::Band => "band",
            Outcome::Bump => "bump",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `P[N = n, band]` and `P[N = n, bump]` for one draw index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub n: usize,
    pub band: Rational,
    pub bump: Rational,
}

impl Row {
    pub fn total(&self) -> Rational {
        &self.band + &self.bump
    }

    pub fn mass(&self, outcome: Outcome) -> &Rational {
        match outcome {
            Outcome::Band => &self.band,
            Outcome::Bump => &self.bump,
        }
    }
}

/// Exact joint distribution of `(N, outcome)`, one row per draw index in
/// ascending order. Rows may carry explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDistribution {
    params: GameParams,
    rows: Vec<Row>,
}

impl JointDistribution {
    /// Rows must be strictly increasing in `n`.
    pub fn new(params: GameParams, rows: Vec<Row>) -> Result<Self> {
        if rows.windows(2).any(|w| w[0].n >= w[1].n) {
            return Err(Error::param("distribution rows must be strictly increasing in n"));
        }
        Ok(JointDistribution { params, rows })
    }

    pub fn params(&self) -> GameParams {
        self.params
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn get(&self, n: usize) -> Option<&Row> {
        self.rows.binary_search_by_key(&n, |r| r.n).ok().map(|i| &self.rows[i])
    }

    /// Mass at `(n, outcome)`, zero for rows not stored.
    pub fn mass(&self, n: usize, outcome: Outcome) -> Rational {
        self.get(n).map(|r| r.mass(outcome).clone()).unwrap_or_else(Rational::zero)
    }

    pub fn marginal(&self, outcome: Outcome) -> Rational {
        self.rows.iter().map(|r| r.mass(outcome)).fold(Rational::zero(), |acc, p| acc + p)
    }

    pub fn total_mass(&self) -> Rational {
        self.marginal(Outcome::Band) + self.marginal(Outcome::Bump)
    }

    /// The outcome's masses over the stored rows, in row order.
    pub fn sequence(&self, outcome: Outcome) -> Vec<Rational> {
        self.rows.iter().map(|r| r.mass(outcome).clone()).collect()
    }

    /// First draw index, over the union of stored rows, where the two
    /// distributions assign different masses.
    pub fn first_difference(&self, other: &JointDistribution) -> Option<usize> {
        let mut ns: Vec<usize> = self.rows.iter().chain(&other.rows).map(|r| r.n).collect();
        ns.sort_unstable();
        ns.dedup();
        ns.into_iter().find(|&n| {
            Outcome::ALL.iter().any(|&o| self.mass(n, o) != other.mass(n, o))
        })
    }

    /// Equal masses at every draw index; zero rows are ignored.
    pub fn agrees_with(&self, other: &JointDistribution) -> bool {
        self.params == other.params && self.first_difference(other).is_none()
    }

    /// Same distribution with every all-zero row removed.
    pub fn trimmed(&self) -> JointDistribution {
        let rows = self
            .rows
            .iter()
            .filter(|r| !(r.band.is_zero() && r.bump.is_zero()))
            .cloned()
            .collect();
        JointDistribution { params: self.params, rows }
    }
}

/// Exact joint distribution for any valid parameters.
pub fn joint_distribution(params: GameParams) -> JointDistribution {
    Engine::new(params).joint_distribution()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(GameParams::new(0, 4, 1, 2).is_err());
        assert!(GameParams::new(2, 0, 0, 0).is_err());
        assert!(GameParams::new(2, 4, 3, 2).is_err());
        assert!(GameParams::new(2, 4, 1, 5).is_err());
        let p = GameParams::new(4, 13, 5, 8).unwrap();
        assert_eq!((p.t(), p.n_max()), (52, 29));
        assert_eq!(p.row_range(), 9..=29);
    }

    #[test]
    fn regime_dispatch_order() {
        let r = |m, s, l, u| GameParams::new(m, s, l, u).unwrap().regime();
        assert_eq!(r(3, 4, 0, 0), Regime::AllBump);
        assert_eq!(r(3, 4, 0, 4), Regime::AllBand);
        assert_eq!(r(3, 4, 0, 2), Regime::AllBand);
        assert_eq!(r(3, 4, 2, 4), Regime::CouponCollector);
        assert_eq!(r(3, 4, 4, 4), Regime::CouponCollector);
        assert_eq!(r(3, 4, 2, 2), Regime::EqualQuota);
        assert_eq!(r(3, 4, 1, 3), Regime::General);
    }

    #[test]
    fn distribution_rows_must_increase() {
        let p = GameParams::new(2, 2, 1, 1).unwrap();
        let row = |n| Row { n, band: Rational::zero(), bump: Rational::zero() };
        assert!(JointDistribution::new(p, vec![row(2), row(2)]).is_err());
        let d = JointDistribution::new(p, vec![row(1), row(2)]).unwrap();
        assert!(d.get(2).is_some());
        assert!(d.get(3).is_none());
        assert!(d.trimmed().rows().is_empty());
    }
}
