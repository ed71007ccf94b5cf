use std::sync::OnceLock;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::ranges::{bump_k_range, bump_kpp_range};
use super::{GameParams, JointDistribution, Regime, Row};
use crate::error::{Error, Result};
use crate::exactnum::{multinomial, BinomialTable};
use crate::hypergeom::{rank_weights, rect_polynomial, Rectangle};
use crate::{Integer, Rational};

/// Exact evaluator for one parameter set.
///
/// Holds a binomial table up to the deck size and lazily built generating
/// polynomials for every rectangle the formulas need; the polynomials do not
/// depend on the draw index, so each is built once.
#[derive(Debug, Clone)]
pub struct Engine {
    params: GameParams,
    binom: BinomialTable,
    weights: Vec<Integer>,
    /// `R_{m-1}(l, u)` for the band formula.
    band_cube: OnceLock<Vec<Integer>>,
    /// `R_m(l, s)` or `R_m(0, u)` for the boundary regimes.
    deck_cube: OnceLock<Vec<Integer>>,
    /// `R_{k'}(0, l-1) x R_{k''}(l, u-1)`, indexed by `k' (m + 1) + k''`.
    mixed: Vec<OnceLock<Vec<Integer>>>,
}

/// The band prefactor computed three ways; all three must agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandPrefactor {
    /// `m (s+1-l) C(s, l-1) C((m-1)s, n-l) / ((t+1-n) C(t, n-1))`, from counting
    /// orderings directly.
    pub counting: Rational,
    /// `C(s-1, l-1) C(t-s, n-l) / C(t-1, n-1)`.
    pub point: Rational,
    /// `C(n-1, l-1) C(t-n, s-l) / C(t-1, s-1)`.
    pub dual: Rational,
}

impl BandPrefactor {
    pub fn agrees(&self) -> bool {
        self.counting == self.point && self.point == self.dual
    }
}

/// Contribution of one configuration `(k, k', k'')` to `P[N = n, bump]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BumpTerm {
    pub n: usize,
    /// Ranks at the cap `u`.
    pub k: usize,
    /// Ranks below `l`.
    pub k_below: usize,
    /// Ranks in `[l, u - 1]`.
    pub k_within: usize,
    pub n_k: usize,
    /// Weighted count of uncapped tallies in the mixed rectangle.
    pub rect_count: Integer,
    /// `multinomial(m; k, k', k'') k(s-u) / ((t+1-n) C(t, n-1))`.
    pub lead_multinomial: Rational,
    /// `C(m, k) C(m-k, k'') k(s-u) / (n C(t, n))`.
    pub lead_binomial: Rational,
    /// The term built from the multinomial lead and the raw count.
    pub value: Rational,
    /// The term rebuilt from the binomial lead and the normalized rectangle
    /// probability.
    pub value_normalized: Rational,
}

impl BumpTerm {
    pub fn agrees(&self) -> bool {
        self.lead_multinomial == self.lead_binomial && self.value == self.value_normalized
    }
}

fn ratio(num: Integer, den: Integer) -> Rational {
    if num.is_zero() {
        Rational::zero()
    } else {
        Rational::new(num, den)
    }
}

fn indicator(b: bool) -> Rational {
    if b {
        Rational::one()
    } else {
        Rational::zero()
    }
}

impl Engine {
    pub fn new(params: GameParams) -> Self {
        let m = params.m();
        Engine {
            params,
            binom: BinomialTable::new(params.t() + 1),
            weights: rank_weights(params.s()),
            band_cube: OnceLock::new(),
            deck_cube: OnceLock::new(),
            mixed: (0..(m + 1) * (m + 1)).map(|_| OnceLock::new()).collect(),
        }
    }

    fn poly(&self, rect: &Rectangle) -> Vec<Integer> {
        rect_polynomial(rect, self.params.t(), &self.weights)
    }

    fn coefficient(poly: &[Integer], degree: usize) -> Integer {
        poly.get(degree).cloned().unwrap_or_else(Integer::zero)
    }

    fn band_cube_count(&self, draws: usize) -> Integer {
        let p = self.params;
        let poly = self.band_cube.get_or_init(|| self.poly(&Rectangle::cube(p.m() - 1, p.l(), p.u())));
        Self::coefficient(poly, draws)
    }

    fn deck_cube_count(&self, draws: usize) -> Integer {
        let p = self.params;
        let poly = self.deck_cube.get_or_init(|| match p.regime() {
            Regime::CouponCollector => self.poly(&Rectangle::cube(p.m(), p.l(), p.s())),
            _ => self.poly(&Rectangle::cube(p.m(), 0, p.u())),
        });
        Self::coefficient(poly, draws)
    }

    fn mixed_count(&self, k_below: usize, k_within: usize, draws: usize) -> Integer {
        let p = self.params;
        let poly = self.mixed[k_below * (p.m() + 1) + k_within].get_or_init(|| {
            let rect = Rectangle::cube(k_below, 0, p.l() - 1)
                .product(&Rectangle::cube(k_within, p.l(), p.u() - 1));
            self.poly(&rect)
        });
        Self::coefficient(poly, draws)
    }

    pub fn params(&self) -> GameParams {
        self.params
    }

    fn c(&self, a: i64, b: i64) -> &Integer {
        self.binom.get(a, b)
    }

    fn require(&self, regime: Regime, what: &str) -> Result<()> {
        if self.params.regime() != regime {
            return Err(Error::param(format!(
                "{what} does not apply to {} ({:?} regime)",
                self.params,
                self.params.regime()
            )));
        }
        Ok(())
    }

    /// `P[X^(n) in cube]` over the full deck, for the regime's boundary cube.
    fn deck_prob(&self, n: i64) -> Rational {
        let t = self.params.t() as i64;
        if n < 0 || n > t {
            return Rational::zero();
        }
        ratio(self.deck_cube_count(n as usize), self.c(t, n).clone())
    }

    /// Three evaluations of `P[Y_{n-1} = l-1]`, for `1 <= l` and `1 <= n <= t`.
    pub fn band_prefactor(&self, n: usize) -> Result<BandPrefactor> {
        let p = self.params;
        if p.l() == 0 || n == 0 || n > p.t() {
            return Err(Error::param(format!("band prefactor needs l >= 1 and 1 <= n <= t, got n={n}")));
        }
        let (m, s, l, t, n) = (p.m() as i64, p.s() as i64, p.l() as i64, p.t() as i64, n as i64);
        let counting = ratio(
            Integer::from(m * (s + 1 - l)) * self.c(s, l - 1) * self.c((m - 1) * s, n - l),
            Integer::from(t + 1 - n) * self.c(t, n - 1),
        );
        let point = ratio(self.c(s - 1, l - 1) * self.c(t - s, n - l), self.c(t - 1, n - 1).clone());
        let dual = ratio(self.c(n - 1, l - 1) * self.c(t - n, s - l), self.c(t - 1, s - 1).clone());
        Ok(BandPrefactor { counting, point, dual })
    }

    /// `P[N = n, band]` for `0 < l < u < s`: one rank sits at `l - 1` after
    /// `n - 1` draws with the rest in `[l, u]`, and draw `n` comes from it.
    pub fn band_joint(&self, n: usize) -> Result<Rational> {
        self.require(Regime::General, "band_joint")?;
        let p = self.params;
        if n < p.m() * p.l() || n > p.n_max() {
            return Ok(Rational::zero());
        }
        let prefactor = self.band_prefactor(n)?.point;
        let others = p.m() - 1;
        let draws = n - p.l();
        let count = self.band_cube_count(draws);
        let total = self.c((others * p.s()) as i64, draws as i64).clone();
        Ok(prefactor * ratio(count, total))
    }

    /// `P[band]` as the sum of [`Engine::band_joint`] over `[m l, n_max]`.
    pub fn band_marginal(&self) -> Result<Rational> {
        let p = self.params;
        (p.m() * p.l()..=p.n_max()).try_fold(Rational::zero(), |acc, n| Ok(acc + self.band_joint(n)?))
    }

    /// One configuration's contribution to `P[N = n, bump]`, or `None` when
    /// `k` or `k''` leave no valid configuration (`k = 0`, `k' = 0`, or
    /// `k u > n - 1`). No range restriction is applied, so summing every
    /// configuration must reproduce [`Engine::bump_joint`].
    pub fn bump_term(&self, n: usize, k: usize, k_within: usize) -> Result<Option<BumpTerm>> {
        self.require(Regime::General, "bump_term")?;
        let p = self.params;
        let (m, s, u, t) = (p.m(), p.s(), p.u(), p.t());
        if n == 0 || n > t || k == 0 || k + k_within >= m || k * u > n - 1 {
            return Ok(None);
        }
        let k_below = m - k - k_within;
        let n_k = n - 1 - k * u;
        let (ni, ki, ti) = (n as i64, k as i64, t as i64);

        let rect_count = self.mixed_count(k_below, k_within, n_k);

        let free_cards = Integer::from(k * (s - u));
        let cap_ways = num_traits::pow(self.c(s as i64, u as i64).clone(), k);

        let lead_multinomial = ratio(
            multinomial(m, &[k, k_below, k_within])? * &free_cards,
            Integer::from(ti + 1 - ni) * self.c(ti, ni - 1),
        );
        let value = &lead_multinomial * Rational::from_integer(&cap_ways * &rect_count);

        let lead_binomial = ratio(
            self.c(m as i64, ki) * self.c((m - k) as i64, k_within as i64) * &free_cards,
            Integer::from(ni) * self.c(ti, ni),
        );
        let rest = self.c(ti - ki * s as i64, n_k as i64).clone();
        let rect_prob = ratio(rect_count.clone(), rest.clone());
        let value_normalized = &lead_binomial * Rational::from_integer(cap_ways * rest) * rect_prob;

        Ok(Some(BumpTerm {
            n,
            k,
            k_below,
            k_within,
            n_k,
            rect_count,
            lead_multinomial,
            lead_binomial,
            value,
            value_normalized,
        }))
    }

    /// Every configuration inside the restricted `(k, k'')` ranges.
    pub fn bump_terms(&self, n: usize) -> Result<Vec<BumpTerm>> {
        self.require(Regime::General, "bump_terms")?;
        let Some((k_lo, k_hi)) = bump_k_range(&self.params, n) else {
            return Ok(Vec::new());
        };
        let mut terms = Vec::new();
        for k in k_lo..=k_hi {
            let (lo, hi) = bump_kpp_range(&self.params, n, k)?;
            for k_within in lo..=hi {
                let term = self
                    .bump_term(n, k, k_within)?
                    .expect("restricted ranges only produce valid configurations");
                terms.push(term);
            }
        }
        Ok(terms)
    }

    /// `P[N = n, bump]` for `0 < l < u < s`, summed over configurations
    /// `(k, k', k'')` of the tallies just before the bump.
    pub fn bump_joint(&self, n: usize) -> Result<Rational> {
        Ok(self
            .bump_terms(n)?
            .into_iter()
            .fold(Rational::zero(), |acc, term| acc + term.value))
    }

    /// Band mass at draw `n` when `u = s`: the first time every rank has at
    /// least `l` cards.
    pub fn coupon_band(&self, n: usize) -> Result<Rational> {
        self.require(Regime::CouponCollector, "coupon_band")?;
        let p = self.params;
        if n == 0 || n > p.t() {
            return Ok(Rational::zero());
        }
        Ok(self.deck_prob(n as i64) - self.deck_prob(n as i64 - 1))
    }

    /// `(band, bump)` masses at draw `n` when `0 < l = u < s`.
    pub fn equal_quota(&self, n: usize) -> Result<(Rational, Rational)> {
        self.require(Regime::EqualQuota, "equal_quota")?;
        let p = self.params;
        let n_max = p.n_max();
        let bump = if n > p.u() && n <= n_max {
            self.deck_prob(n as i64 - 1) - self.deck_prob(n as i64)
        } else {
            Rational::zero()
        };
        let band = if n == n_max { self.deck_prob(n as i64) } else { Rational::zero() };
        Ok((band, bump))
    }

    /// `(band, bump)` at draw `n` under whichever regime applies.
    pub fn row(&self, n: usize) -> Row {
        let p = self.params;
        let (band, bump) = match p.regime() {
            Regime::AllBump => (Rational::zero(), indicator(n == 1)),
            Regime::AllBand => (indicator(n == 1), Rational::zero()),
            Regime::CouponCollector => (self.coupon_band(n).expect("regime checked"), Rational::zero()),
            Regime::EqualQuota => self.equal_quota(n).expect("regime checked"),
            Regime::General => (
                self.band_joint(n).expect("regime checked"),
                self.bump_joint(n).expect("regime checked"),
            ),
        };
        Row { n, band, bump }
    }

    pub fn joint_distribution(&self) -> JointDistribution {
        let rows: Vec<Row> = self.params.row_range().into_par_iter().map(|n| self.row(n)).collect();
        JointDistribution::new(self.params, rows).expect("row range is increasing")
    }
}
