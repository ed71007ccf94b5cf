//! Moments, payoffs, log-concavity verdicts and parameter-grid scans.

use std::ops::{Mul, RangeInclusive};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bandbump::{bump_k_range, kpp_bounds, Engine, GameParams, JointDistribution, Outcome};
use crate::error::{Error, Result};
use crate::exactnum::sqrt_to_decimal;
use crate::Rational;

/// Mean and variance of `N`, optionally restricted to one outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DurationMoments {
    pub mean: Rational,
    pub variance: Rational,
    /// `sqrt(variance)` correctly rounded to the requested digits.
    pub sd: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentsReport {
    pub overall: DurationMoments,
    pub band: Option<DurationMoments>,
    pub bump: Option<DurationMoments>,
    pub p_band: Rational,
    pub p_bump: Rational,
    /// Outcomes with zero probability, whose conditional moments are omitted.
    pub omitted: Vec<Outcome>,
}

impl MomentsReport {
    pub fn conditional(&self, outcome: Outcome) -> Option<&DurationMoments> {
        match outcome {
            Outcome::Band => self.band.as_ref(),
            Outcome::Bump => self.bump.as_ref(),
        }
    }

    pub fn marginal(&self, outcome: Outcome) -> &Rational {
        match outcome {
            Outcome::Band => &self.p_band,
            Outcome::Bump => &self.p_bump,
        }
    }
}

fn require_unit_mass(dist: &JointDistribution) -> Result<()> {
    let total = dist.total_mass();
    if !total.is_one() {
        return Err(Error::param(format!("distribution has total mass {total}, expected 1")));
    }
    Ok(())
}

fn duration_moments<'a>(
    masses: impl Iterator<Item = (usize, &'a Rational)> + Clone,
    weight: &Rational,
    sd_digits: usize,
) -> DurationMoments {
    let (mut m1, mut m2) = (Rational::zero(), Rational::zero());
    for (n, p) in masses {
        let n = Rational::from_integer(n.into());
        m1 += &n * p;
        m2 += &n * &n * p;
    }
    let mean = m1 / weight;
    let variance = m2 / weight - &mean * &mean;
    let sd = sqrt_to_decimal(&variance, sd_digits);
    DurationMoments { mean, variance, sd }
}

/// Exact mean and variance of the game length, overall and per outcome.
pub fn moments(dist: &JointDistribution, sd_digits: usize) -> Result<MomentsReport> {
    require_unit_mass(dist)?;
    let rows = dist.rows();
    let overall_masses: Vec<(usize, Rational)> = rows.iter().map(|r| (r.n, r.total())).collect();
    let overall = duration_moments(overall_masses.iter().map(|(n, p)| (*n, p)), &Rational::one(), sd_digits);

    let mut omitted = Vec::new();
    let mut conditional = |outcome: Outcome| {
        let marginal = dist.marginal(outcome);
        if marginal.is_zero() {
            omitted.push(outcome);
            return None;
        }
        Some(duration_moments(rows.iter().map(|r| (r.n, r.mass(outcome))), &marginal, sd_digits))
    };
    let band = conditional(Outcome::Band);
    let bump = conditional(Outcome::Bump);
    Ok(MomentsReport {
        overall,
        band,
        bump,
        p_band: dist.marginal(Outcome::Band),
        p_bump: dist.marginal(Outcome::Bump),
        omitted,
    })
}

/// Amount won (positive) or lost (negative) per outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffSpec {
    pub band: Rational,
    pub bump: Rational,
}

/// `band * P[band] + bump * P[bump]`, exactly.
pub fn payoff_ev(dist: &JointDistribution, spec: &PayoffSpec) -> Result<Rational> {
    require_unit_mass(dist)?;
    Ok(&spec.band * dist.marginal(Outcome::Band) + &spec.bump * dist.marginal(Outcome::Bump))
}

/// Outcome of [`log_concavity`]; indices refer to the input sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LogConcavity {
    /// Negative entries.
    pub negative: Vec<usize>,
    /// Zero entries strictly inside the support.
    pub gaps: Vec<usize>,
    /// `i` with `p[i+1] p[i-1] > p[i]^2`.
    pub violations: Vec<usize>,
}

impl LogConcavity {
    pub fn is_log_concave(&self) -> bool {
        self.negative.is_empty() && self.gaps.is_empty() && self.violations.is_empty()
    }
}

/// Checks non-negativity, a support of consecutive indices, and
/// `p[i+1] p[i-1] <= p[i]^2` at every interior index. Exact for exact `T`.
pub fn log_concavity<T>(seq: &[T]) -> LogConcavity
where
    T: Clone + Zero + PartialOrd + Mul<Output = T>,
{
    let zero = T::zero();
    let positive: Vec<bool> = seq.iter().map(|x| *x > zero).collect();
    let gaps = match (positive.iter().position(|&p| p), positive.iter().rposition(|&p| p)) {
        (Some(first), Some(last)) => (first..=last).filter(|&i| !positive[i]).collect(),
        _ => Vec::new(),
    };
    LogConcavity {
        negative: (0..seq.len()).filter(|&i| seq[i] < zero).collect(),
        gaps,
        violations: (1..seq.len().saturating_sub(1))
            .filter(|&i| seq[i + 1].clone() * seq[i - 1].clone() > seq[i].clone() * seq[i].clone())
            .collect(),
    }
}

/// Inclusive ranges of `m` and `s`; every `0 < l < u < s` is visited.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub m: RangeInclusive<usize>,
    pub s: RangeInclusive<usize>,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { m: 2..=8, s: 2..=8 }
    }
}

impl Grid {
    pub fn cells(&self) -> Vec<GameParams> {
        let mut cells = Vec::new();
        for m in self.m.clone() {
            for s in self.s.clone() {
                for l in 1..s {
                    for u in l + 1..s {
                        if let Ok(p) = GameParams::new(m, s, l, u) {
                            cells.push(p);
                        }
                    }
                }
            }
        }
        cells
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    Nonvacuity,
    BandLogconcavity,
    BumpLogconcavity,
}

impl ScanKind {
    /// Whether a counterexample is a failure or a reported finding.
    pub fn counterexamples_are_failures(self) -> bool {
        !matches!(self, ScanKind::BumpLogconcavity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellVerdict {
    pub m: usize,
    pub s: usize,
    pub l: usize,
    pub u: usize,
    pub passed: bool,
    /// `(n, k)` pairs or sequence entries examined.
    pub checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub m: usize,
    pub s: usize,
    pub l: usize,
    pub u: usize,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub detail: String,
}

impl Counterexample {
    fn new(p: GameParams, n: Option<usize>, k: Option<usize>, detail: String) -> Self {
        Counterexample { m: p.m(), s: p.s(), l: p.l(), u: p.u(), n, k, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub kind: ScanKind,
    pub grid: Grid,
    pub cells: Vec<CellVerdict>,
    pub counterexamples: Vec<Counterexample>,
}

impl ScanReport {
    pub fn is_clean(&self) -> bool {
        self.counterexamples.is_empty()
    }

    fn assemble(kind: ScanKind, grid: &Grid, results: Vec<(GameParams, usize, Vec<Counterexample>)>) -> Self {
        let mut cells = Vec::with_capacity(results.len());
        let mut counterexamples = Vec::new();
        for (p, checked, found) in results {
            cells.push(CellVerdict { m: p.m(), s: p.s(), l: p.l(), u: p.u(), passed: found.is_empty(), checked });
            counterexamples.extend(found);
        }
        ScanReport { kind, grid: grid.clone(), cells, counterexamples }
    }
}

/// Checks one parameter set: every `n` in `[u+1, n_max]` and `k` in its
/// admissible range must leave a non-empty `k''` range whose bump terms are
/// all strictly positive.
pub fn nonvacuity_cell(params: GameParams) -> (usize, Vec<Counterexample>) {
    let engine = Engine::new(params);
    let mut checked = 0;
    let mut found = Vec::new();
    for n in params.u() + 1..=params.n_max() {
        let Some((k_lo, k_hi)) = bump_k_range(&params, n) else { continue };
        for k in k_lo..=k_hi {
            checked += 1;
            let (lo, hi) = kpp_bounds(&params, n, k);
            if lo > hi {
                found.push(Counterexample::new(params, Some(n), Some(k), format!("empty k'' range [{lo}, {hi}]")));
                continue;
            }
            for k_within in lo as usize..=hi as usize {
                let term = engine.bump_term(n, k, k_within).expect("general regime");
                let positive = term.as_ref().is_some_and(|t| t.value > Rational::zero());
                if !positive {
                    found.push(Counterexample::new(
                        params,
                        Some(n),
                        Some(k),
                        format!("term with k''={k_within} is not positive"),
                    ));
                }
            }
        }
    }
    (checked, found)
}

/// Runs [`nonvacuity_cell`] over every grid cell.
pub fn nonvacuity_scan(grid: &Grid) -> ScanReport {
    let results = grid
        .cells()
        .into_par_iter()
        .map(|p| {
            let (checked, found) = nonvacuity_cell(p);
            (p, checked, found)
        })
        .collect();
    ScanReport::assemble(ScanKind::Nonvacuity, grid, results)
}

/// Log-concavity of one outcome's joint masses over the outcome's support
/// window: `[m l, n_max]` for bands, `[u + 1, n_max]` for bumps.
pub fn outcome_log_concavity(dist: &JointDistribution, outcome: Outcome) -> (Vec<usize>, LogConcavity) {
    let p = dist.params();
    let start = match outcome {
        Outcome::Band => p.m() * p.l(),
        Outcome::Bump => p.u() + 1,
    };
    let ns: Vec<usize> = (start..=p.n_max()).collect();
    let seq: Vec<Rational> = ns.iter().map(|&n| dist.mass(n, outcome)).collect();
    (ns, log_concavity(&seq))
}

fn logconcavity_scan(grid: &Grid, outcome: Outcome, kind: ScanKind) -> ScanReport {
    let results = grid
        .cells()
        .into_par_iter()
        .map(|p| {
            let dist = Engine::new(p).joint_distribution();
            let (ns, verdict) = outcome_log_concavity(&dist, outcome);
            let mut found = Vec::new();
            let mut report = |idx: &[usize], what: &str| {
                for &i in idx {
                    found.push(Counterexample::new(p, Some(ns[i]), None, format!("{outcome} sequence: {what}")));
                }
            };
            report(&verdict.negative, "negative mass");
            report(&verdict.gaps, "zero inside support");
            report(&verdict.violations, "p[n+1] p[n-1] > p[n]^2");
            (p, ns.len(), found)
        })
        .collect();
    ScanReport::assemble(kind, grid, results)
}

/// Log-concavity of the band masses on every grid cell.
pub fn band_logconcavity_scan(grid: &Grid) -> ScanReport {
    logconcavity_scan(grid, Outcome::Band, ScanKind::BandLogconcavity)
}

/// Log-concavity of the bump masses on every grid cell; counterexamples are
/// findings, not failures.
pub fn bump_logconcavity_scan(grid: &Grid) -> ScanReport {
    logconcavity_scan(grid, Outcome::Bump, ScanKind::BumpLogconcavity)
}
