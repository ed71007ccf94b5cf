//! Exact integer and rational arithmetic helpers.
//!
//! Every probability in the crate is a [`Rational`]; decimals only appear when
//! a value is rendered for display.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::{Integer, Rational};

/// Binomial coefficient `C(a, b)`, zero when `b < 0` or `b > a`.
pub fn binomial(a: i64, b: i64) -> Result<Integer> {
    if a < 0 {
        return Err(Error::param(format!("binomial upper index must be non-negative, got {a}")));
    }
    if b < 0 || b > a {
        return Ok(Integer::zero());
    }
    let b = b.min(a - b);
    let mut acc = Integer::one();
    for i in 0..b {
        acc = acc * Integer::from(a - i) / Integer::from(i + 1);
    }
    Ok(acc)
}

/// Multinomial coefficient `m! / (p_1! ... p_r!)`.
pub fn multinomial(m: usize, parts: &[usize]) -> Result<Integer> {
    let total: usize = parts.iter().sum();
    if total != m {
        return Err(Error::param(format!("multinomial parts sum to {total}, expected {m}")));
    }
    // product of successive binomials C(remaining, part)
    let mut remaining = m as i64;
    let mut acc = Integer::one();
    for &p in parts {
        acc *= binomial(remaining, p as i64)?;
        remaining -= p as i64;
    }
    Ok(acc)
}

/// Pascal triangle of binomial coefficients `C(a, b)` for `0 <= b <= a <= max_n`.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    rows: Vec<Vec<Integer>>,
    zero: Integer,
}

impl BinomialTable {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<Integer>> = Vec::with_capacity(max_n + 1);
        for a in 0..=max_n {
            let mut row = Vec::with_capacity(a + 1);
            row.push(Integer::one());
            for b in 1..a {
                let prev = &rows[a - 1];
                row.push(&prev[b - 1] + &prev[b]);
            }
            if a > 0 {
                row.push(Integer::one());
            }
            rows.push(row);
        }
        BinomialTable { rows, zero: Integer::zero() }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(a, b)` with the out-of-range convention; `b` may be negative.
    ///
    /// Panics if `a` is negative or beyond the table.
    pub fn get(&self, a: i64, b: i64) -> &Integer {
        assert!(
            a >= 0 && (a as usize) <= self.max_n(),
            "binomial C({a}, {b}) outside table of size {}",
            self.max_n()
        );
        if b < 0 || b > a {
            return &self.zero;
        }
        &self.rows[a as usize][b as usize]
    }
}

pub fn pow10(exp: u32) -> Integer {
    num_traits::pow(Integer::from(10u32), exp as usize)
}

/// Compares `|x|` with `10^e`.
fn cmp_abs_pow10(x: &Rational, e: i64) -> Ordering {
    let num = x.numer().abs();
    let den = x.denom();
    if e >= 0 {
        num.cmp(&(den * pow10(e as u32)))
    } else {
        (num * pow10((-e) as u32)).cmp(den)
    }
}

/// `floor(log10(|x|))` for non-zero `x`.
fn decimal_exponent(x: &Rational) -> i64 {
    let digits = |v: &BigInt| v.abs().to_str_radix(10).len() as i64;
    let mut e = digits(x.numer()) - digits(x.denom());
    while cmp_abs_pow10(x, e) == Ordering::Less {
        e -= 1;
    }
    while cmp_abs_pow10(x, e + 1) != Ordering::Less {
        e += 1;
    }
    e
}

/// Multiplies by `10^k` for signed `k`.
fn scale10(x: &Rational, k: i64) -> Rational {
    if k >= 0 {
        x * Rational::from_integer(pow10(k as u32))
    } else {
        x / Rational::from_integer(pow10((-k) as u32))
    }
}

/// Rounds a non-negative rational to the nearest integer, ties to even.
fn round_half_even(x: &Rational) -> Integer {
    let (q, r) = x.numer().div_rem(x.denom());
    let twice = r * 2u32;
    match twice.cmp(x.denom()) {
        Ordering::Less => q,
        Ordering::Greater => q + 1u32,
        Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1u32
            }
        }
    }
}

/// Lays out `digits * 10^(-scale)` in fixed notation.
fn layout(negative: bool, digits: &Integer, scale: i64) -> String {
    let d = digits.to_str_radix(10);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if scale <= 0 {
        out.push_str(&d);
        out.extend(std::iter::repeat('0').take((-scale) as usize));
    } else {
        let scale = scale as usize;
        if d.len() > scale {
            let (int, frac) = d.split_at(d.len() - scale);
            out.push_str(int);
            out.push('.');
            out.push_str(frac);
        } else {
            out.push_str("0.");
            out.extend(std::iter::repeat('0').take(scale - d.len()));
            out.push_str(&d);
        }
    }
    out
}

/// Renders `x` with `sig_figs` significant digits in fixed notation, rounding
/// half to even. Zero renders as `"0"`.
pub fn to_decimal(x: &Rational, sig_figs: usize) -> String {
    assert!(sig_figs >= 1, "at least one significant digit is required");
    if x.is_zero() {
        return "0".to_string();
    }
    let abs = x.abs();
    let mut e = decimal_exponent(&abs);
    let mut k = sig_figs as i64 - 1 - e;
    let mut n = round_half_even(&scale10(&abs, k));
    if n == pow10(sig_figs as u32) {
        e += 1;
        k = sig_figs as i64 - 1 - e;
        n = pow10(sig_figs as u32 - 1);
    }
    layout(x.is_negative(), &n, k)
}

/// Renders `sqrt(x)` for `x >= 0` with `sig_figs` significant digits, correctly
/// rounded half to even.
pub fn sqrt_to_decimal(x: &Rational, sig_figs: usize) -> String {
    assert!(sig_figs >= 1, "at least one significant digit is required");
    assert!(!x.is_negative(), "square root of a negative value");
    if x.is_zero() {
        return "0".to_string();
    }
    let e = num_integer::Integer::div_floor(&decimal_exponent(x), &2);
    let mut k = sig_figs as i64 - 1 - e;
    let w = scale10(x, 2 * k);
    let floor = w.numer().div_floor(w.denom()).sqrt();
    // sqrt(w) against floor + 1/2, i.e. 4w against (2 floor + 1)^2
    let mid: Integer = &floor * 2u32 + 1u32;
    let lhs = w.numer() * 4u32;
    let rhs = &mid * &mid * w.denom();
    let mut n = match lhs.cmp(&rhs) {
        Ordering::Less => floor,
        Ordering::Greater => floor + 1u32,
        Ordering::Equal => {
            if floor.is_even() {
                floor
            } else {
                floor + 1u32
            }
        }
    };
    if n == pow10(sig_figs as u32) {
        k -= 1;
        n = pow10(sig_figs as u32 - 1);
    }
    layout(false, &n, k)
}

/// Exact `"num/den"` rendering of a canonical rational.
pub fn ratio_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses a decimal (`-3`, `0.05`, `+2.5`) or a ratio (`7/20`) exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let err = || Error::Parse(text.to_string());
    let s = text.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: Integer = num.trim().parse().map_err(|_| err())?;
        let den: Integer = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int}{frac}");
    let mantissa = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(err)?;
    let mantissa = if negative { -mantissa } else { mantissa };
    Ok(Rational::new(mantissa, pow10(frac.len() as u32)))
}
