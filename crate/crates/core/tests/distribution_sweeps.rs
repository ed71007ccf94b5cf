use bandbump::analysis::{moments, payoff_ev, PayoffSpec};
use bandbump::bandbump::{bump_k_range, book_or_band_bump};
use bandbump::oracle::exhaustive_distribution;
use bandbump::{joint_distribution, Engine, GameParams, Outcome, Rational, Regime};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn valid(m: usize, s: usize) -> impl Iterator<Item = GameParams> {
    (0..=s).flat_map(move |u| (0..=u).map(move |l| GameParams::new(m, s, l, u).unwrap()))
}

#[test]
fn matches_oracle_up_to_sixteen_cards() {
    for m in 1..=8 {
        for s in 1..=16 / m {
            if m * s <= 12 {
                continue; // covered by the acceptance run
            }
            for p in valid(m, s) {
                let oracle = exhaustive_distribution(p, 16).unwrap();
                assert_eq!(joint_distribution(p).first_difference(&oracle), None, "{p}");
            }
        }
    }
}

#[test]
fn oracle_refuses_large_decks() {
    let p = GameParams::new(4, 13, 5, 8).unwrap();
    assert!(exhaustive_distribution(p, 16).is_err());
}

#[test]
fn rows_outside_the_table_range_are_zero() {
    for m in 1..=4 {
        for s in 1..=5 {
            for p in valid(m, s) {
                let oracle = exhaustive_distribution(p, 20).unwrap();
                let range = p.row_range();
                for row in oracle.rows() {
                    assert!(range.contains(&row.n), "{p}: mass at n={}", row.n);
                }
            }
        }
    }
}

#[test]
fn restricted_bump_sum_equals_unrestricted_sum() {
    for m in 2..=6 {
        for s in 3..=8 {
            for p in valid(m, s).filter(|p| p.regime() == Regime::General) {
                let engine = Engine::new(p);
                for n in p.u() + 1..=p.n_max() {
                    let mut all = Rational::zero();
                    for k in 1..=p.m() {
                        for kpp in 0..p.m() - k {
                            if let Some(term) = engine.bump_term(n, k, kpp).unwrap() {
                                all += term.value;
                            }
                        }
                    }
                    assert_eq!(all, engine.bump_joint(n).unwrap(), "{p} n={n}");
                    if all.is_zero() {
                        continue;
                    }
                    assert!(bump_k_range(&p, n).is_some(), "{p} n={n}: positive mass outside k range");
                }
            }
        }
    }
}

#[test]
fn book_or_band_specialisation_for_every_deck() {
    for m in 2..=13 {
        let p = GameParams::new(m, 4, 1, 3).unwrap();
        let dist = joint_distribution(p);
        for n in 1..=p.t() {
            assert_eq!(book_or_band_bump(m, n), dist.mass(n, Outcome::Bump), "m={m} n={n}");
        }
    }
}

#[test]
fn law_of_total_expectation() {
    for (m, s, l, u) in [(4, 13, 5, 8), (13, 4, 1, 3), (3, 6, 2, 4), (5, 5, 1, 2)] {
        let dist = joint_distribution(GameParams::new(m, s, l, u).unwrap());
        let r = moments(&dist, 6).unwrap();
        let mut combined = Rational::zero();
        for o in Outcome::ALL {
            if let Some(c) = r.conditional(o) {
                combined += &c.mean * r.marginal(o);
            }
        }
        assert_eq!(combined, r.overall.mean);
        assert!((&r.p_band + &r.p_bump).is_one());
    }
}

proptest! {
    #[test]
    fn payoff_is_linear(a in -20i64..20, b in -20i64..20, c in -20i64..20, d in -20i64..20) {
        let dist = joint_distribution(GameParams::new(3, 5, 1, 3).unwrap());
        let r = |x: i64| Rational::from_integer(x.into());
        let ev = |band: i64, bump: i64| payoff_ev(&dist, &PayoffSpec { band: r(band), bump: r(bump) }).unwrap();
        prop_assert_eq!(ev(a + c, b + d), ev(a, b) + ev(c, d));
        prop_assert_eq!(ev(a, a), r(a));
    }

    #[test]
    fn random_general_games_have_unit_mass(m in 2usize..=7, s in 3usize..=10, a in 1usize..10, b in 1usize..10) {
        let (l, u) = (a.min(b) % (s - 1) + 1, a.max(b) % (s - 1) + 1);
        prop_assume!(l < u);
        let dist = joint_distribution(GameParams::new(m, s, l, u).unwrap());
        prop_assert!(dist.total_mass().is_one());
        prop_assert!(dist.rows().iter().all(|r| r.band >= Rational::zero() && r.bump >= Rational::zero()));
    }
}
