//! Ground truth that never touches the closed forms: an exact forward dynamic
//! program over tally vectors, and a seeded deck simulator.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bandbump::{GameParams, JointDistribution, Outcome, Row};
use crate::error::{Error, Result};
use crate::{Integer, Rational};

/// Largest deck the exhaustive oracle accepts unless told otherwise.
pub const DEFAULT_ORACLE_CAP: usize = 16;

fn is_band(tallies: &[u8], l: usize, u: usize) -> bool {
    tallies.iter().all(|&x| (l..=u).contains(&(x as usize)))
}

fn is_bump(tallies: &[u8], u: usize) -> bool {
    tallies.iter().any(|&x| x as usize > u)
}

/// Exact joint distribution by forward enumeration of tally vectors.
///
/// Each live state carries the number of ordered card sequences reaching it
/// without having stopped; drawing one of the `s - x_j` unseen cards of rank
/// `j` moves it to `x + e_j`. After every draw the band test (all tallies in
/// `[l, u]`) and the bump test (some tally above `u`) are applied, and states
/// that pass either are absorbed. Masses are sequence counts over the falling
/// factorial `t (t-1) ... (t-n+1)`. Only rows with positive mass are kept.
pub fn exhaustive_distribution(params: GameParams, cap: usize) -> Result<JointDistribution> {
    let (m, s, l, u, t) = (params.m(), params.s(), params.l(), params.u(), params.t());
    if t > cap {
        return Err(Error::OracleCap { cards: t, cap });
    }
    if s > u8::MAX as usize {
        return Err(Error::param(format!("rank size {s} too large for the exhaustive oracle")));
    }

    let mut live: HashMap<Vec<u8>, Integer> = HashMap::new();
    live.insert(vec![0; m], Integer::one());
    let mut sequences = Integer::one();
    let mut rows = Vec::new();

    for n in 1..=t {
        sequences *= t + 1 - n;
        let mut next: HashMap<Vec<u8>, Integer> = HashMap::new();
        let mut band = Integer::zero();
        let mut bump = Integer::zero();
        for (state, ways) in &live {
            for j in 0..m {
                let seen = state[j] as usize;
                if seen == s {
                    continue;
                }
                let mut succ = state.clone();
                succ[j] += 1;
                let w = ways * (s - seen);
                if is_bump(&succ, u) {
                    bump += w;
                } else if is_band(&succ, l, u) {
                    band += w;
                } else {
                    *next.entry(succ).or_insert_with(Integer::zero) += w;
                }
            }
        }
        if !(band.is_zero() && bump.is_zero()) {
            rows.push(Row {
                n,
                band: Rational::new(band, sequences.clone()),
                bump: Rational::new(bump, sequences.clone()),
            });
        }
        live = next;
        if live.is_empty() {
            break;
        }
    }
    assert!(live.is_empty(), "deck exhausted with live states for {params}");
    JointDistribution::new(params, rows)
}

/// Observed `(n, outcome)` counts from simulated games.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    params: GameParams,
    trials: u64,
    counts: BTreeMap<(usize, Outcome), u64>,
}

impl EmpiricalDistribution {
    /// Counts must sum to `trials`.
    pub fn from_counts(
        params: GameParams,
        trials: u64,
        counts: BTreeMap<(usize, Outcome), u64>,
    ) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if total != trials {
            return Err(Error::param(format!("counts sum to {total}, expected {trials} trials")));
        }
        Ok(EmpiricalDistribution { params, trials, counts })
    }

    pub fn params(&self) -> GameParams {
        self.params
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn counts(&self) -> &BTreeMap<(usize, Outcome), u64> {
        &self.counts
    }

    pub fn count(&self, n: usize, outcome: Outcome) -> u64 {
        self.counts.get(&(n, outcome)).copied().unwrap_or(0)
    }

    pub fn longest_game(&self) -> Option<usize> {
        self.counts.keys().map(|&(n, _)| n).max()
    }
}

/// Plays one game on a freshly ordered deck, shuffling lazily with
/// Fisher-Yates as cards are drawn.
fn play(params: &GameParams, rng: &mut ChaCha8Rng, deck: &mut [usize], tallies: &mut [usize]) -> (usize, Outcome) {
    let (s, l, u, t) = (params.s(), params.l(), params.u(), params.t());
    for (i, card) in deck.iter_mut().enumerate() {
        *card = i / s;
    }
    tallies.iter_mut().for_each(|x| *x = 0);
    let mut below = if l > 0 { params.m() } else { 0 };
    for i in 0..t {
        let j = rng.gen_range(i..t);
        deck.swap(i, j);
        let rank = deck[i];
        tallies[rank] += 1;
        if tallies[rank] > u {
            return (i + 1, Outcome::Bump);
        }
        if tallies[rank] == l {
            below -= 1;
        }
        if below == 0 {
            return (i + 1, Outcome::Band);
        }
    }
    unreachable!("every game stops by the pigeonhole bound")
}

/// Simulates `trials` games. Trial `i` draws from a ChaCha8 stream keyed by
/// `seed` with stream id `i`, so results do not depend on thread scheduling.
pub fn simulate(params: GameParams, trials: u64, seed: u64) -> Result<EmpiricalDistribution> {
    if trials == 0 {
        return Err(Error::param("at least one trial is required"));
    }
    let t = params.t();
    let counts = (0..trials)
        .into_par_iter()
        .fold(
            || (BTreeMap::new(), vec![0usize; t], vec![0usize; params.m()]),
            |(mut counts, mut deck, mut tallies), trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(trial);
                let key = play(&params, &mut rng, &mut deck, &mut tallies);
                *counts.entry(key).or_insert(0u64) += 1;
                (counts, deck, tallies)
            },
        )
        .map(|(counts, _, _)| counts)
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    EmpiricalDistribution::from_counts(params, trials, counts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    /// Largest acceptable `|z|`.
    pub threshold: f64,
    /// Cells whose exact probability is below this are reported but not
    /// held to the threshold.
    pub min_prob: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions { threshold: 4.0, min_prob: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellComparison {
    pub n: usize,
    pub outcome: Outcome,
    pub probability: f64,
    pub observed: u64,
    pub expected: f64,
    /// `(observed - N p) / sqrt(N p (1 - p))`; infinite when a cell of
    /// probability 0 or 1 is contradicted.
    pub z: f64,
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub trials: u64,
    pub threshold: f64,
    pub min_prob: f64,
    pub max_abs_z: f64,
    pub passed: bool,
    pub cells: Vec<CellComparison>,
}

fn z_score(observed: u64, p: &Rational, trials: u64) -> f64 {
    let n = trials as f64;
    let pf = p.to_f64().unwrap_or(0.0);
    let sd = (n * pf * (1.0 - pf)).sqrt();
    let diff = observed as f64 - n * pf;
    if sd > 0.0 {
        diff / sd
    } else if (p.is_zero() && observed == 0) || (p.is_one() && observed == trials) {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Per-cell binomial z-scores of simulated counts against exact masses.
pub fn compare(
    exact: &JointDistribution,
    empirical: &EmpiricalDistribution,
    options: CompareOptions,
) -> Result<ComparisonReport> {
    if exact.params() != empirical.params() {
        return Err(Error::param(format!(
            "comparing {} against simulation of {}",
            exact.params(),
            empirical.params()
        )));
    }
    let trials = empirical.trials();
    let mut keys: Vec<(usize, Outcome)> = exact
        .rows()
        .iter()
        .flat_map(|r| Outcome::ALL.into_iter().filter(|&o| !r.mass(o).is_zero()).map(move |o| (r.n, o)))
        .collect();
    keys.extend(empirical.counts().keys().copied());
    keys.sort();
    keys.dedup();

    let cells: Vec<CellComparison> = keys
        .into_iter()
        .map(|(n, outcome)| {
            let p = exact.mass(n, outcome);
            let probability = p.to_f64().unwrap_or(0.0);
            let observed = empirical.count(n, outcome);
            CellComparison {
                n,
                outcome,
                probability,
                observed,
                expected: probability * trials as f64,
                z: z_score(observed, &p, trials),
                // contradicted impossible cells are always held to account
                checked: probability >= options.min_prob || p.is_zero(),
            }
        })
        .collect();
    let max_abs_z = cells.iter().filter(|c| c.checked).map(|c| c.z.abs()).fold(0.0, f64::max);
    Ok(ComparisonReport {
        trials,
        threshold: options.threshold,
        min_prob: options.min_prob,
        max_abs_z,
        passed: max_abs_z < options.threshold,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn p(m: usize, s: usize, l: usize, u: usize) -> GameParams {
        GameParams::new(m, s, l, u).unwrap()
    }

    #[test]
    fn exhaustive_small_decks() {
        let d = exhaustive_distribution(p(2, 3, 1, 2), DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(
            d.rows(),
            &[
                Row { n: 2, band: q(3, 5), bump: q(0, 1) },
                Row { n: 3, band: q(3, 10), bump: q(1, 10) },
            ]
        );
        let d = exhaustive_distribution(p(2, 2, 1, 1), DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(d.rows(), &[Row { n: 2, band: q(2, 3), bump: q(1, 3) }]);
        let d = exhaustive_distribution(p(1, 2, 1, 1), DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(d.rows(), &[Row { n: 1, band: q(1, 1), bump: q(0, 1) }]);
    }

    #[test]
    fn exhaustive_respects_cap() {
        assert_eq!(
            exhaustive_distribution(p(4, 13, 5, 8), DEFAULT_ORACLE_CAP),
            Err(Error::OracleCap { cards: 52, cap: 16 })
        );
    }

    #[test]
    fn simulation_is_reproducible() {
        let params = p(3, 4, 1, 2);
        let a = simulate(params, 2000, 9).unwrap();
        let b = simulate(params, 2000, 9).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, simulate(params, 2000, 10).unwrap());
        let one = simulate(params, 1, 5).unwrap();
        assert_eq!(one.counts().values().sum::<u64>(), 1);
        assert!(simulate(params, 0, 5).is_err());
    }

    #[test]
    fn simulation_all_bump_boundary() {
        let e = simulate(p(3, 4, 0, 0), 100, 1).unwrap();
        assert_eq!(e.count(1, Outcome::Bump), 100);
    }

    #[test]
    fn compare_against_exact_counts() {
        let params = p(2, 3, 1, 2);
        let exact = exhaustive_distribution(params, DEFAULT_ORACLE_CAP).unwrap();
        let counts = BTreeMap::from([((2, Outcome::Band), 6), ((3, Outcome::Band), 3), ((3, Outcome::Bump), 1)]);
        let emp = EmpiricalDistribution::from_counts(params, 10, counts).unwrap();
        let report = compare(&exact, &emp, CompareOptions::default()).unwrap();
        assert!(report.cells.iter().all(|c| c.z == 0.0));
        assert!(report.passed);
        assert_eq!(report.max_abs_z, 0.0);
    }

    #[test]
    fn compare_flags_impossible_cells() {
        let params = p(2, 3, 1, 2);
        let exact = exhaustive_distribution(params, DEFAULT_ORACLE_CAP).unwrap();
        let counts = BTreeMap::from([((2, Outcome::Band), 9), ((2, Outcome::Bump), 1)]);
        let emp = EmpiricalDistribution::from_counts(params, 10, counts).unwrap();
        let report = compare(&exact, &emp, CompareOptions::default()).unwrap();
        assert!(!report.passed);
        assert!(report.max_abs_z.is_infinite());
    }

    #[test]
    fn compare_rejects_mismatched_params() {
        let exact = exhaustive_distribution(p(2, 3, 1, 2), DEFAULT_ORACLE_CAP).unwrap();
        let emp = simulate(p(2, 2, 1, 1), 10, 0).unwrap();
        assert!(compare(&exact, &emp, CompareOptions::default()).is_err());
        assert!(EmpiricalDistribution::from_counts(p(2, 2, 1, 1), 3, BTreeMap::new()).is_err());
    }
}
