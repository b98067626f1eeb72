//! Exact number domains: arbitrary-precision rationals and elements of the
//! cyclotomic fields Q(zeta_m).
//!
//! Rationals are `num_rational::BigRational`, which keeps values in lowest
//! terms with a positive denominator. The cyclotomic field is represented as
//! `Q[z]/Phi_m(z)`, never as `Q[z]/(z^m - 1)`, so that zero-testing is exact.

mod cyclotomic;

pub use cyclotomic::{
    cyclotomic_poly, embed, root_of_unity, root_power_sum, CycloScalar, CyclotomicPolynomial,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Formats a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = match int.trim() {
            "" | "-" | "+" => BigInt::zero(),
            t => t.parse().map_err(|_| bad())?,
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mut value = BigRational::from_integer(int_part.abs())
            + BigRational::new(frac_part, scale);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Multinomial coefficient `(sum e)! / prod(e_i!)`.
pub fn multinomial(parts: &[u32]) -> BigInt {
    let total: u32 = parts.iter().sum();
    let mut denom = BigInt::one();
    for &p in parts {
        denom *= factorial(p);
    }
    factorial(total) / denom
}

/// Binomial coefficient `C(n, k)` for non-negative arguments, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Dimension of the degree-`t` piece of a polynomial ring in `vars` variables.
pub fn dim_graded_piece(vars: usize, t: i64) -> u64 {
    if t < 0 || vars == 0 {
        return u64::from(t == 0 && vars == 0);
    }
    binomial(t as u64 + vars as u64 - 1, vars as u64 - 1)
}

pub fn lcm_all(values: impl IntoIterator<Item = u32>) -> u32 {
    values.into_iter().fold(1u32, |acc, v| acc.lcm(&v))
}

/// Euler's totient.
pub fn totient(m: u32) -> u32 {
    let mut result = m;
    let mut rest = m;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if rest > 1 {
        result -= result / rest;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_forms() {
        let q = parse_rational("6/-8").unwrap();
        assert_eq!(format_rational(&q), "-3/4");
        assert_eq!(format_rational(&parse_rational("0/5").unwrap()), "0");
        assert_eq!(format_rational(&parse_rational("-0.25").unwrap()), "-1/4");
        assert_eq!(format_rational(&parse_rational("12").unwrap()), "12");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn combinatorics() {
        assert_eq!(multinomial(&[1, 1, 2]), BigInt::from(12));
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 5), 0);
        assert_eq!(dim_graded_piece(3, 2), 6);
        assert_eq!(dim_graded_piece(3, -1), 0);
        assert_eq!(lcm_all([2, 3, 4]), 12);
        assert_eq!(
            (1..=12).map(totient).collect::<Vec<_>>(),
            vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]
        );
    }
}
