//! Exact rational coefficients and their string form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{AlgebraError, Result};

/// Exact rational coefficient.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Parses `"p/q"` or `"p"` with decimal integers.
pub fn parse_q(s: &str) -> Result<Q> {
    let err = |m: &str| AlgebraError::parse("coeff", format!("{m}: {s:?}"));
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err("bad numerator"))?;
    let den: BigInt = den.parse().map_err(|_| err("bad denominator"))?;
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Q::new(num, den))
}

pub fn format_q(v: &Q) -> String {
    v.to_string()
}

pub fn to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or_else(|| {
        // numerator or denominator beyond f64 range
        let n = v.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = v.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn pow_q(base: &Q, exp: usize) -> Q {
    num_traits::pow(base.clone(), exp)
}

pub fn abs_q(v: &Q) -> Q {
    v.abs()
}

/// Coefficients `1/j!` for `j = 0..=n`.
pub fn exp_coefficients(n: usize) -> Vec<Q> {
    (0..=n).map(|j| Q::new(BigInt::one(), factorial(j))).collect()
}

/// Coefficients of `log(1 + ξ)`: `0, 1, -1/2, 1/3, ...` for `j = 0..=n`.
pub fn log1p_coefficients(n: usize) -> Vec<Q> {
    (0..=n)
        .map(|j| {
            if j == 0 {
                Q::zero()
            } else {
                let sign = if j % 2 == 1 { 1 } else { -1 };
                q(sign, j as i64)
            }
        })
        .collect()
}
