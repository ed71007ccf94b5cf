//! Cross-checks of the closed forms for one parameter set.

use num_traits::One;
use serde::Serialize;

use crate::bandbump::{Engine, GameParams, Regime};
use crate::oracle::{compare, exhaustive_distribution, simulate, CompareOptions, ComparisonReport, DEFAULT_ORACLE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Leg {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl Leg {
    fn new(name: &'static str, ok: bool, detail: impl Into<String>) -> Self {
        Leg { name, status: if ok { Status::Pass } else { Status::Fail }, detail: detail.into() }
    }

    fn skipped(name: &'static str, detail: impl Into<String>) -> Self {
        Leg { name, status: Status::Skipped, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub oracle_cap: usize,
    /// Monte Carlo trials; `None` skips the simulation leg.
    pub mc_trials: Option<u64>,
    pub seed: u64,
    pub compare: CompareOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { oracle_cap: DEFAULT_ORACLE_CAP, mc_trials: None, seed: 0, compare: CompareOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub legs: Vec<Leg>,
    pub monte_carlo: Option<ComparisonReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.legs.iter().all(|l| l.status != Status::Fail)
    }
}

/// Runs every applicable check: exact total mass, the algebraic identities
/// behind the band and bump formulas, exact agreement with the exhaustive
/// oracle when the deck is small enough, and optionally a Monte Carlo
/// comparison.
pub fn verify(params: GameParams, options: &VerifyOptions) -> VerifyReport {
    let engine = Engine::new(params);
    let dist = engine.joint_distribution();
    let mut legs = Vec::new();

    let total = dist.total_mass();
    legs.push(Leg::new("total-mass", total.is_one(), format!("sum of all masses = {total}")));

    if params.regime() == Regime::General {
        let bad: Vec<usize> = (params.m() * params.l()..=params.n_max())
            .filter(|&n| !engine.band_prefactor(n).map(|f| f.agrees()).unwrap_or(false))
            .collect();
        legs.push(Leg::new("band-prefactor-forms", bad.is_empty(), format!("disagreeing n: {bad:?}")));

        let mut terms = 0;
        let mut bad = Vec::new();
        for n in params.u() + 1..=params.n_max() {
            for term in engine.bump_terms(n).expect("general regime") {
                terms += 1;
                if !term.agrees() {
                    bad.push((n, term.k, term.k_within));
                }
            }
        }
        legs.push(Leg::new(
            "bump-lead-forms",
            bad.is_empty(),
            format!("{terms} terms checked, disagreeing (n, k, k''): {bad:?}"),
        ));
    } else {
        legs.push(Leg::skipped("band-prefactor-forms", "boundary regime"));
        legs.push(Leg::skipped("bump-lead-forms", "boundary regime"));
    }

    match exhaustive_distribution(params, options.oracle_cap) {
        Ok(oracle) => {
            let diff = dist.first_difference(&oracle);
            let detail = match diff {
                None => "exact agreement at every n".to_string(),
                Some(n) => format!(
                    "n={n}: formula {:?} vs oracle {:?}",
                    dist.get(n).map(|r| (r.band.to_string(), r.bump.to_string())),
                    oracle.get(n).map(|r| (r.band.to_string(), r.bump.to_string()))
                ),
            };
            legs.push(Leg::new("exhaustive-oracle", diff.is_none(), detail));
        }
        Err(e) => legs.push(Leg::skipped("exhaustive-oracle", e.to_string())),
    }

    let mut monte_carlo = None;
    match options.mc_trials {
        None => legs.push(Leg::skipped("monte-carlo", "no trials requested")),
        Some(trials) => match simulate(params, trials, options.seed) {
            Err(e) => legs.push(Leg::new("monte-carlo", false, e.to_string())),
            Ok(empirical) => {
                let report = compare(&dist, &empirical, options.compare).expect("same params");
                let longest = empirical.longest_game().unwrap_or(0);
                legs.push(Leg::new(
                    "monte-carlo",
                    report.passed && longest <= params.n_max(),
                    format!(
                        "{trials} trials, seed {}, max |z| = {:.3} (threshold {}), longest game {longest}",
                        options.seed, report.max_abs_z, report.threshold
                    ),
                ));
                monte_carlo = Some(report);
            }
        },
    }

    VerifyReport { legs, monte_carlo }
}
