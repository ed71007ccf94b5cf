use num_traits::Zero;

use crate::exactnum::binomial;
use crate::{Integer, Rational};

fn c(a: usize, b: usize) -> Integer {
    binomial(a as i64, b as i64).expect("non-negative")
}

/// `P[N = n, bump]` for `s = 4`, `l = 1`, `u = 3` and any `m`.
///
/// With `l = 1` the below-quota ranks hold no cards, so only the `k''` ranks
/// holding one or two cards each carry the `n_k` uncapped draws. If `j` of
/// them hold two cards then `n_k = k'' + j`, and the weighted count is
/// `C(k'', j) 6^j 4^(k''-j)`. Every `(k, k'')` is summed; configurations
/// that cannot occur contribute zero.
pub fn book_or_band_bump(m: usize, n: usize) -> Rational {
    let t = 4 * m;
    if n == 0 || n > t {
        return Rational::zero();
    }
    let mut total = Integer::zero();
    for k in 1..=m {
        if 3 * k > n - 1 {
            break;
        }
        let n_k = n - 1 - 3 * k;
        let mut inner = Integer::zero();
        for k_within in 0..m - k {
            if n_k < k_within || n_k > 2 * k_within {
                continue;
            }
            let twos = n_k - k_within;
            let count = c(k_within, twos)
                * num_traits::pow(Integer::from(6), twos)
                * num_traits::pow(Integer::from(4), k_within - twos);
            inner += c(m - k, k_within) * count;
        }
        total += c(m, k) * Integer::from(k) * num_traits::pow(Integer::from(4), k) * inner;
    }
    Rational::new(total, Integer::from(n) * c(t, n))
}
