//! Rectangular event probabilities for central multiple hypergeometric tallies.
//!
//! A tally vector drawn `n` cards deep from `dim` ranks of `s` cards each has
//! probability `prod_j C(s, x_j) / C(dim * s, n)` at each support point. The
//! mass of a rectangle is the coefficient of `z^n` in
//! `prod_j sum_{x = lo_j}^{hi_j} C(s, x) z^x`, which is what [`rect_count`]
//! extracts by truncated polynomial convolution.

use std::ops::Mul;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::binomial;
use crate::{Integer, Rational};

/// Product of per-coordinate closed integer intervals `[lo_j, hi_j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rectangle {
    lo: Vec<usize>,
    hi: Vec<usize>,
}

impl Rectangle {
    pub fn new(lo: Vec<usize>, hi: Vec<usize>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::param(format!(
                "rectangle bounds have lengths {} and {}",
                lo.len(),
                hi.len()
            )));
        }
        if let Some(j) = (0..lo.len()).find(|&j| lo[j] > hi[j]) {
            return Err(Error::param(format!(
                "rectangle coordinate {j} has lo {} > hi {}",
                lo[j], hi[j]
            )));
        }
        Ok(Rectangle { lo, hi })
    }

    /// The hypercube `{lo, ..., hi}^dim`. Panics if `lo > hi`.
    pub fn cube(dim: usize, lo: usize, hi: usize) -> Self {
        assert!(lo <= hi, "cube bounds {lo} > {hi}");
        Rectangle { lo: vec![lo; dim], hi: vec![hi; dim] }
    }

    /// Cartesian product: coordinates of `self` followed by those of `other`.
    pub fn product(&self, other: &Rectangle) -> Rectangle {
        let mut lo = self.lo.clone();
        lo.extend_from_slice(&other.lo);
        let mut hi = self.hi.clone();
        hi.extend_from_slice(&other.hi);
        Rectangle { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[usize] {
        &self.lo
    }

    pub fn hi(&self) -> &[usize] {
        &self.hi
    }

    pub fn bounds(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.lo.iter().copied().zip(self.hi.iter().copied())
    }

    pub fn contains(&self, x: &[usize]) -> bool {
        x.len() == self.dim() && self.bounds().zip(x).all(|((lo, hi), &v)| lo <= v && v <= hi)
    }
}

/// `H_dim(draws; s, ..., s)`: tallies of `dim` equal ranks of `rank_size`
/// cards after `draws` draws without replacement.
///
/// `draws` beyond `dim * rank_size` is accepted; every event then has mass 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypergeomSpec {
    pub dim: usize,
    pub draws: usize,
    pub rank_size: usize,
}

impl HypergeomSpec {
    pub fn new(dim: usize, draws: usize, rank_size: usize) -> Self {
        HypergeomSpec { dim, draws, rank_size }
    }

    pub fn population(&self) -> usize {
        self.dim * self.rank_size
    }

    fn check(&self, rect: &Rectangle) -> Result<()> {
        if rect.dim() != self.dim {
            return Err(Error::DimensionMismatch { rect: rect.dim(), dist: self.dim });
        }
        if let Some(hi) = rect.hi.iter().find(|&&hi| hi > self.rank_size) {
            return Err(Error::param(format!(
                "rectangle bound {hi} exceeds rank size {}",
                self.rank_size
            )));
        }
        Ok(())
    }
}

/// Coefficients of `prod_j sum_{x = lo_j}^{hi_j} weights[x] z^x` up to and
/// including `z^max_degree`. `weights` must cover every `hi_j`.
pub fn rect_polynomial<T>(rect: &Rectangle, max_degree: usize, weights: &[T]) -> Vec<T>
where
    T: Clone + Zero + One + Mul<Output = T>,
{
    let mut poly = vec![T::one()];
    for (lo, hi) in rect.bounds() {
        let len = (poly.len() - 1 + hi).min(max_degree) + 1;
        let mut next = vec![T::zero(); len];
        for (i, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for x in lo..=hi {
                if i + x > max_degree {
                    break;
                }
                next[i + x] = next[i + x].clone() + c.clone() * weights[x].clone();
            }
        }
        poly = next;
    }
    poly
}

/// Coefficient of `z^degree` in `prod_j sum_{x = lo_j}^{hi_j} weights[x] z^x`.
///
/// Partial products are truncated at `degree`. A zero-dimensional rectangle
/// yields the empty product `1` at degree 0 and `0` elsewhere.
pub fn rect_weight<T>(rect: &Rectangle, degree: usize, weights: &[T]) -> T
where
    T: Clone + Zero + One + Mul<Output = T>,
{
    let lo_sum: usize = rect.lo.iter().sum();
    let hi_sum: usize = rect.hi.iter().sum();
    if degree < lo_sum || degree > hi_sum {
        return T::zero();
    }
    rect_polynomial(rect, degree, weights).get(degree).cloned().unwrap_or_else(T::zero)
}

/// `C(s, x)` for `x = 0..=s`.
pub(crate) fn rank_weights(rank_size: usize) -> Vec<Integer> {
    (0..=rank_size)
        .map(|x| binomial(rank_size as i64, x as i64).expect("non-negative rank size"))
        .collect()
}

/// `sum_{x in rect, |x| = draws} prod_j C(s, x_j)`.
pub fn rect_count(spec: &HypergeomSpec, rect: &Rectangle) -> Result<Integer> {
    spec.check(rect)?;
    Ok(rect_weight(rect, spec.draws, &rank_weights(spec.rank_size)))
}

/// `P[X in rect]` for `X ~ spec`.
pub fn rect_prob(spec: &HypergeomSpec, rect: &Rectangle) -> Result<Rational> {
    let count = rect_count(spec, rect)?;
    let total = binomial(spec.population() as i64, spec.draws as i64)?;
    if total.is_zero() {
        return Ok(Rational::zero());
    }
    Ok(Rational::new(count, total))
}

fn check_point_args(n: usize, s: usize, t: usize, l: usize) -> Result<()> {
    if s == 0 || t < s || t % s != 0 {
        return Err(Error::param(format!("deck size {t} is not a positive multiple of rank size {s}")));
    }
    if l == 0 {
        return Err(Error::param("lower quota must be at least 1"));
    }
    if n == 0 || n > t {
        return Err(Error::param(format!("draw index {n} outside 1..={t}")));
    }
    Ok(())
}

/// `P[Y_{n-1} = l-1]` where `Y_{n-1}` counts one rank's cards among the first
/// `n - 1` of a `t`-card deck: `C(s-1, l-1) C(t-s, n-l) / C(t-1, n-1)`.
pub fn point_prob_y(n: usize, s: usize, t: usize, l: usize) -> Result<Rational> {
    check_point_args(n, s, t, l)?;
    let (n, s, t, l) = (n as i64, s as i64, t as i64, l as i64);
    let num = binomial(s - 1, l - 1)? * binomial(t - s, n - l)?;
    Ok(Rational::new(num, binomial(t - 1, n - 1)?))
}

/// The same probability with the roles of sample and rank exchanged:
/// `C(n-1, l-1) C(t-n, s-l) / C(t-1, s-1)`.
pub fn point_prob_y_dual(n: usize, s: usize, t: usize, l: usize) -> Result<Rational> {
    check_point_args(n, s, t, l)?;
    let (n, s, t, l) = (n as i64, s as i64, t as i64, l as i64);
    let num = binomial(n - 1, l - 1)? * binomial(t - n, s - l)?;
    Ok(Rational::new(num, binomial(t - 1, s - 1)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rectangle_validation() {
        assert!(Rectangle::new(vec![0, 1], vec![1]).is_err());
        assert!(Rectangle::new(vec![2], vec![1]).is_err());
        let r = Rectangle::new(vec![0, 1], vec![2, 1]).unwrap();
        assert!(r.contains(&[2, 1]));
        assert!(!r.contains(&[2, 0]));
        assert_eq!(r.product(&Rectangle::cube(1, 3, 4)).hi(), &[2, 1, 4]);
    }

    #[test]
    fn count_examples() {
        let spec = HypergeomSpec::new(2, 2, 2);
        assert_eq!(rect_count(&spec, &Rectangle::cube(2, 1, 1)).unwrap(), 4.into());
        let spec = HypergeomSpec::new(3, 0, 4);
        assert_eq!(rect_count(&spec, &Rectangle::cube(3, 0, 4)).unwrap(), 1.into());
        let spec = HypergeomSpec::new(2, 5, 2);
        assert_eq!(rect_count(&spec, &Rectangle::cube(2, 0, 2)).unwrap(), 0.into());
        assert_eq!(rect_prob(&spec, &Rectangle::cube(2, 0, 2)).unwrap(), q(0, 1));
    }

    #[test]
    fn count_errors() {
        let spec = HypergeomSpec::new(2, 2, 2);
        assert_eq!(
            rect_count(&spec, &Rectangle::cube(3, 0, 1)),
            Err(Error::DimensionMismatch { rect: 3, dist: 2 })
        );
        assert!(rect_count(&spec, &Rectangle::cube(2, 0, 3)).is_err());
    }

    #[test]
    fn prob_examples() {
        let spec = HypergeomSpec::new(2, 2, 2);
        assert_eq!(rect_prob(&spec, &Rectangle::cube(2, 1, 1)).unwrap(), q(2, 3));
        let spec = HypergeomSpec::new(1, 1, 3);
        assert_eq!(rect_prob(&spec, &Rectangle::new(vec![1], vec![2]).unwrap()).unwrap(), q(1, 1));
        for n in 0..=12 {
            let spec = HypergeomSpec::new(4, n, 3);
            assert_eq!(rect_prob(&spec, &Rectangle::cube(4, 0, 3)).unwrap(), q(1, 1));
        }
    }

    #[test]
    fn empty_dimension_convention() {
        let empty = Rectangle::cube(0, 0, 0);
        assert_eq!(rect_prob(&HypergeomSpec::new(0, 0, 4), &empty).unwrap(), q(1, 1));
        assert_eq!(rect_prob(&HypergeomSpec::new(0, 1, 4), &empty).unwrap(), q(0, 1));
    }

    #[test]
    fn weight_is_generic_over_the_coefficient_ring() {
        let rect = Rectangle::new(vec![0, 1, 2], vec![3, 2, 4]).unwrap();
        let small: Vec<u64> = vec![1, 4, 6, 4, 1];
        let big: Vec<Integer> = small.iter().map(|&w| Integer::from(w)).collect();
        for degree in 0..=10 {
            assert_eq!(Integer::from(rect_weight(&rect, degree, &small)), rect_weight(&rect, degree, &big));
        }
    }

    #[test]
    fn point_prob_examples() {
        assert_eq!(point_prob_y(2, 3, 6, 1).unwrap(), q(3, 5));
        assert_eq!(point_prob_y(3, 3, 6, 1).unwrap(), q(3, 10));
        assert_eq!(point_prob_y(1, 3, 6, 2).unwrap(), q(0, 1));
        assert_eq!(point_prob_y_dual(1, 3, 6, 2).unwrap(), q(0, 1));
        assert!(point_prob_y(0, 3, 6, 1).is_err());
        assert!(point_prob_y(2, 4, 6, 1).is_err());
        assert!(point_prob_y(2, 3, 6, 0).is_err());
    }

    #[test]
    fn point_prob_forms_agree() {
        for m in 1..=6usize {
            for s in 1..=8usize {
                let t = m * s;
                for l in 1..=s {
                    for n in l..=t {
                        assert_eq!(
                            point_prob_y(n, s, t, l).unwrap(),
                            point_prob_y_dual(n, s, t, l).unwrap(),
                            "n={n} s={s} t={t} l={l}"
                        );
                    }
                }
            }
        }
    }
}
