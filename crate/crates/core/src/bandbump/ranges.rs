//! Summation ranges for the bump probability.
//!
//! Just before a bump at draw `n` the tally vector has `k` ranks at the cap
//! `u`, `k'` ranks below `l` and `k''` ranks in `[l, u - 1]`. Only `(k, k'')`
//! pairs inside the ranges computed here can contribute positive mass.

use num_integer::Integer;

use super::{GameParams, Regime};
use crate::error::{Error, Result};
use crate::Rational;

fn signed(p: &GameParams) -> (i64, i64, i64, i64) {
    (p.m() as i64, p.s() as i64, p.l() as i64, p.u() as i64)
}

fn require_general(params: &GameParams) -> Result<()> {
    if params.regime() != Regime::General {
        return Err(Error::param(format!(
            "bump index ranges need 0 < l < u < s, got {params}"
        )));
    }
    Ok(())
}

/// Bounds `(k_lo, k_hi)` on the number of capped ranks for a bump at draw
/// `n`, or `None` when `n` is outside `[u + 1, n_max]` or the parameters are
/// not in the general regime.
pub fn bump_k_range(params: &GameParams, n: usize) -> Option<(usize, usize)> {
    if params.regime() != Regime::General || n < params.u() + 1 || n > params.n_max() {
        return None;
    }
    let (m, _, l, u) = signed(params);
    let n = n as i64;
    let lo = 1.max(n - (l + (m - 1) * (u - 1)));
    let hi = (n - 1) / u;
    (lo <= hi).then_some((lo as usize, hi as usize))
}

/// Raw bounds on `k''` before any emptiness check:
/// `max{0, ceil((n_k - (m-k)(l-1)) / (u-l))}` and `min{floor(n_k / l), m-k-1}`.
///
/// Requires `0 < l < u`; the result may be an empty interval.
pub fn kpp_bounds(params: &GameParams, n: usize, k: usize) -> (i64, i64) {
    let (m, _, l, u) = signed(params);
    let (n, k) = (n as i64, k as i64);
    let n_k = n - 1 - k * u;
    let lo = 0.max(Integer::div_ceil(&(n_k - (m - k) * (l - 1)), &(u - l)));
    let hi = Integer::div_floor(&n_k, &l).min(m - k - 1);
    (lo, hi)
}

/// Bounds `(kpp_lo, kpp_hi)` on the number of ranks strictly between the
/// quotas, for `n` in the bump range and `k` inside [`bump_k_range`].
///
/// # Panics
///
/// Panics if the range is empty for admissible `(n, k)`; every admissible
/// pair is known to leave at least one `k''`.
pub fn bump_kpp_range(params: &GameParams, n: usize, k: usize) -> Result<(usize, usize)> {
    require_general(params)?;
    let (k_lo, k_hi) = bump_k_range(params, n).ok_or_else(|| {
        Error::param(format!("draw {n} admits no bump for {params}"))
    })?;
    if k < k_lo || k > k_hi {
        return Err(Error::param(format!("k={k} outside [{k_lo}, {k_hi}] at n={n}")));
    }
    let (lo, hi) = kpp_bounds(params, n, k);
    assert!(
        lo <= hi,
        "empty k'' range [{lo}, {hi}] for {params}, n={n}, k={k}: admissible (n, k) must leave a configuration"
    );
    Ok((lo as usize, hi as usize))
}

/// Per-`k` slice of a [`BumpIndexRange`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KRange {
    pub k: usize,
    /// `n - 1 - k u`, the draws held by the uncapped ranks.
    pub n_k: i64,
    /// `(n_k - (m-k)(l-1)) / (u - l)`, the unrounded lower bound on `k''`.
    pub kpp_l: Rational,
    pub kpp_lo: i64,
    pub kpp_hi: i64,
}

/// All summation bounds for a bump at draw `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BumpIndexRange {
    pub n: usize,
    pub k_lo: usize,
    pub k_hi: usize,
    /// `n - {l + (m-1)(u-1)}`, the lower bound on `k` before clamping at 1.
    pub k_l: i64,
    /// `(m-l) u + l (l-1)`; draw indices above it cannot have `k''` bounded
    /// away from zero by both the lower and the upper constraint.
    pub n_hi: i64,
    pub per_k: Vec<KRange>,
}

impl BumpIndexRange {
    pub fn is_nonvacuous(&self) -> bool {
        self.per_k.iter().all(|r| r.kpp_lo <= r.kpp_hi)
    }
}

/// Every bound for a bump at draw `n`, without asserting non-emptiness.
pub fn bump_index_range(params: &GameParams, n: usize) -> Option<BumpIndexRange> {
    let (k_lo, k_hi) = bump_k_range(params, n)?;
    let (m, _, l, u) = signed(params);
    let ni = n as i64;
    let per_k = (k_lo..=k_hi)
        .map(|k| {
            let ki = k as i64;
            let n_k = ni - 1 - ki * u;
            let (kpp_lo, kpp_hi) = kpp_bounds(params, n, k);
            KRange {
                k,
                n_k,
                kpp_l: Rational::new((n_k - (m - ki) * (l - 1)).into(), (u - l).into()),
                kpp_lo,
                kpp_hi,
            }
        })
        .collect();
    Some(BumpIndexRange {
        n,
        k_lo,
        k_hi,
        k_l: ni - (l + (m - 1) * (u - 1)),
        n_hi: (m - l) * u + l * (l - 1),
        per_k,
    })
}
