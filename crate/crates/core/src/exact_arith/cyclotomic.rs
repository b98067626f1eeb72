use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{format_rational, rational_to_f64};
use crate::error::{Error, Result};

/// The cyclotomic polynomial `Phi_m`, coefficients listed from the constant
/// term upwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicPolynomial {
    pub m: u32,
    pub coeffs: Vec<BigInt>,
}

impl CyclotomicPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

fn cache() -> &'static RwLock<HashMap<u32, Arc<CyclotomicPolynomial>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<CyclotomicPolynomial>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Exact division of integer polynomials by a monic divisor.
fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// Returns `Phi_m`, computed as `(z^m - 1) / prod_{d | m, d < m} Phi_d`.
///
/// # Panics
///
/// Panics if `m == 0`.
pub fn cyclotomic_poly(m: u32) -> Arc<CyclotomicPolynomial> {
    assert!(m >= 1, "cyclotomic polynomial needs m >= 1");
    if let Some(p) = cache().read().unwrap().get(&m) {
        return Arc::clone(p);
    }
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        num = div_exact_monic(&num, &cyclotomic_poly(d).coeffs);
    }
    let poly = Arc::new(CyclotomicPolynomial { m, coeffs: num });
    cache()
        .write()
        .unwrap()
        .entry(m)
        .or_insert_with(|| Arc::clone(&poly));
    poly
}

/// An element of `Q(zeta_m)` stored as a polynomial in `z = zeta_m` of
/// degree below `phi(m)`.
///
/// Arithmetic between elements of different conductors happens in the field
/// of the least common multiple. Rational constants live at conductor 1.
#[derive(Clone)]
pub struct CycloScalar {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

/// Reduces a polynomial in `z` modulo `Phi_m`, returning exactly `phi(m)`
/// coefficients.
fn reduce(m: u32, mut poly: Vec<BigRational>) -> Vec<BigRational> {
    let phi = cyclotomic_poly(m);
    let deg = phi.degree();
    for k in (deg..poly.len()).rev() {
        let c = std::mem::replace(&mut poly[k], BigRational::zero());
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi.coeffs[..deg].iter().enumerate() {
            if !pj.is_zero() {
                poly[k - deg + j] -= &c * BigRational::from_integer(pj.clone());
            }
        }
    }
    poly.resize(deg, BigRational::zero());
    poly
}

impl CycloScalar {
    /// Builds an element from an arbitrary polynomial in `zeta_m`.
    pub fn from_poly(m: u32, poly: Vec<BigRational>) -> Self {
        assert!(m >= 1, "conductor must be positive");
        CycloScalar { conductor: m, coeffs: reduce(m, poly) }
    }

    pub fn from_rational(q: BigRational) -> Self {
        CycloScalar { conductor: 1, coeffs: vec![q] }
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Coefficients on the power basis `1, z, ..., z^{phi(m)-1}`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Image under `zeta_m -> zeta_big^(big/m)`.
    pub fn embed_into(&self, big: u32) -> Result<Self> {
        if !big.is_multiple_of(self.conductor) {
            return Err(Error::ConductorMismatch { small: self.conductor, big });
        }
        if big == self.conductor {
            return Ok(self.clone());
        }
        let step = (big / self.conductor) as usize;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        Ok(Self::from_poly(big, poly))
    }

    fn unify(a: &Self, b: &Self) -> (Self, Self) {
        if a.conductor == b.conductor {
            return (a.clone(), b.clone());
        }
        let m = a.conductor.lcm(&b.conductor);
        (a.embed_into(m).unwrap(), b.embed_into(m).unwrap())
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Phi_m`.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let m = self.conductor;
        let modulus: Vec<BigRational> = cyclotomic_poly(m)
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let (g, s) = qpoly::ext_gcd(&self.coeffs, &modulus);
        // Phi_m is irreducible, so the gcd is a nonzero constant.
        debug_assert_eq!(qpoly::degree(&g), Some(0));
        let g0 = g[0].clone();
        Some(Self::from_poly(m, s.into_iter().map(|c| c / &g0).collect()))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Numeric value at `zeta_m = exp(2 pi i / m)`.
    pub fn to_complex(&self) -> Complex64 {
        let m = f64::from(self.conductor);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| Complex64::from_polar(rational_to_f64(c), 2.0 * PI * k as f64 / m))
            .sum()
    }
}

/// `zeta_m^k` reduced into `Q(zeta_m)`.
pub fn root_of_unity(m: u32, k: i64) -> CycloScalar {
    assert!(m >= 1, "conductor must be positive");
    let e = k.rem_euclid(i64::from(m)) as usize;
    let mut poly = vec![BigRational::zero(); e + 1];
    poly[e] = BigRational::one();
    CycloScalar::from_poly(m, poly)
}

/// `sum_{a=0}^{m-1} (zeta_m^e)^a`, summed term by term and checked against the
/// closed form (`m` when `m | e`, else `0`).
pub fn root_power_sum(m: u32, e: i64) -> CycloScalar {
    let base = root_of_unity(m, e);
    let mut term = CycloScalar::one();
    let mut sum = CycloScalar::zero();
    for _ in 0..m {
        sum = &sum + &term;
        term = &term * &base;
    }
    let closed = if e.rem_euclid(i64::from(m)) == 0 {
        CycloScalar::from_integer(i64::from(m))
    } else {
        CycloScalar::zero()
    };
    assert_eq!(sum, closed, "root power sum disagrees with its closed form");
    sum
}

/// Embeds `x` from `Q(zeta_small)` into `Q(zeta_big)`.
pub fn embed(small: u32, big: u32, x: &CycloScalar) -> Result<CycloScalar> {
    if !big.is_multiple_of(small) {
        return Err(Error::ConductorMismatch { small, big });
    }
    let lifted = if x.conductor == small { x.clone() } else { x.embed_into(small)? };
    lifted.embed_into(big)
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = CycloScalar::unify(self, other);
        a.coeffs == b.coeffs
    }
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{}", format_rational(&q));
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = match k {
                0 => String::new(),
                1 => format!("zeta{}", self.conductor),
                _ => format!("zeta{}^{}", self.conductor, k),
            };
            parts.push(match (k, c.is_one()) {
                (0, _) => format_rational(c),
                (_, true) => z,
                _ if *c == -BigRational::one() => format!("-{z}"),
                _ => format!("{}*{z}", format_rational(c)),
            });
        }
        write!(f, "({})", parts.join(" + ").replace("+ -", "- "))
    }
}

impl<'a> Add<&'a CycloScalar> for &'a CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: &CycloScalar) -> CycloScalar {
        let (mut a, b) = CycloScalar::unify(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }
}

impl<'a> Sub<&'a CycloScalar> for &'a CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: &CycloScalar) -> CycloScalar {
        let (mut a, b) = CycloScalar::unify(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x -= y;
        }
        a
    }
}

impl<'a> Mul<&'a CycloScalar> for &'a CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: &CycloScalar) -> CycloScalar {
        let (a, b) = CycloScalar::unify(self, rhs);
        let mut prod = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.coeffs.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                prod[i + j] += x * y;
            }
        }
        CycloScalar::from_poly(a.conductor, prod)
    }
}

impl Neg for &CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        CycloScalar {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for CycloScalar {
            type Output = CycloScalar;
            fn $method(self, rhs: CycloScalar) -> CycloScalar {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        -&self
    }
}

/// Dense univariate polynomials over Q, lowest degree first.
mod qpoly {
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    pub fn degree(p: &[BigRational]) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }

    fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
        while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        if p.is_empty() {
            p.push(BigRational::zero());
        }
        p
    }

    fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); a.len().max(b.len())];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, y) in b.iter().enumerate() {
            out[i] -= y;
        }
        trim(out)
    }

    fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let db = degree(b).expect("division by zero polynomial");
        let lead = b[db].clone();
        let mut rem = a.to_vec();
        let Some(da) = degree(a) else {
            return (vec![BigRational::zero()], trim(rem));
        };
        if da < db {
            return (vec![BigRational::zero()], trim(rem));
        }
        let mut quot = vec![BigRational::zero(); da - db + 1];
        for k in (0..=da - db).rev() {
            let c = &rem[k + db] / &lead;
            if c.is_zero() {
                continue;
            }
            for j in 0..=db {
                let t = &c * &b[j];
                rem[k + j] -= t;
            }
            quot[k] = c;
        }
        (trim(quot), trim(rem))
    }

    /// Returns `(g, s)` with `s * a = g (mod b)` and `g = gcd(a, b)`.
    pub fn ext_gcd(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
        let (mut s0, mut s1) = (vec![BigRational::one()], vec![BigRational::zero()]);
        while degree(&r1).is_some() {
            let (q, r) = divrem(&r0, &r1);
            let s = sub(&s0, &mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        (r0, s0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::totient;

    fn ints(p: &CyclotomicPolynomial) -> Vec<i64> {
        p.coeffs.iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(ints(&cyclotomic_poly(1)), vec![-1, 1]);
        assert_eq!(ints(&cyclotomic_poly(2)), vec![1, 1]);
        assert_eq!(ints(&cyclotomic_poly(6)), vec![1, -1, 1]);
        assert_eq!(ints(&cyclotomic_poly(4)), vec![1, 0, 1]);
    }

    /// prod_{d | m} Phi_d = z^m - 1, checked by naive multiplication.
    #[test]
    fn divisor_product_is_z_m_minus_one() {
        for m in 1..=40u32 {
            let mut prod = vec![BigInt::one()];
            for d in (1..=m).filter(|d| m % d == 0) {
                let phi = cyclotomic_poly(d);
                let mut next = vec![BigInt::zero(); prod.len() + phi.degree()];
                for (i, a) in prod.iter().enumerate() {
                    for (j, b) in phi.coeffs.iter().enumerate() {
                        next[i + j] += a * b;
                    }
                }
                prod = next;
            }
            let mut expected = vec![BigInt::zero(); m as usize + 1];
            expected[0] = BigInt::from(-1);
            expected[m as usize] = BigInt::one();
            assert_eq!(prod, expected, "m = {m}");
            assert_eq!(cyclotomic_poly(m).degree() as u32, totient(m));
        }
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(root_of_unity(2, 1), CycloScalar::from_integer(-1));
        assert_eq!(root_of_unity(3, 3), CycloScalar::one());
        assert_eq!(root_of_unity(4, 2), CycloScalar::from_integer(-1));
        assert_eq!(root_of_unity(5, 7), root_of_unity(5, 2));
        assert_eq!(root_of_unity(5, -3), root_of_unity(5, 2));
    }

    #[test]
    fn root_power_sums() {
        assert_eq!(root_power_sum(3, 3), CycloScalar::from_integer(3));
        assert_eq!(root_power_sum(3, 2), CycloScalar::zero());
        assert_eq!(root_power_sum(1, 0), CycloScalar::one());
        for m in 2..=24 {
            assert_eq!(root_power_sum(m, 1), CycloScalar::zero());
            assert_eq!(root_of_unity(m, 1).pow(m), CycloScalar::one());
        }
    }

    #[test]
    fn embeddings() {
        let five = CycloScalar::from_integer(5);
        assert_eq!(embed(1, 6, &five).unwrap(), five);
        let minus_one = root_of_unity(2, 1);
        let e = embed(2, 6, &minus_one).unwrap();
        assert_eq!(e.conductor(), 6);
        assert_eq!(e, root_of_unity(6, 3));
        let w = embed(3, 6, &root_of_unity(3, 1)).unwrap();
        assert_eq!(w, root_of_unity(6, 2));
        assert_eq!(w.pow(3), CycloScalar::one());
        assert_ne!(w, CycloScalar::one());
        assert!(embed(4, 6, &root_of_unity(4, 1)).is_err());
    }

    #[test]
    fn inverse_and_mixed_conductors() {
        let x = &root_of_unity(12, 1) + &CycloScalar::from_integer(2);
        let inv = x.inv().unwrap();
        assert_eq!(&x * &inv, CycloScalar::one());
        // zeta_4 * zeta_3 lives in Q(zeta_12) and equals zeta_12^7
        let p = &root_of_unity(4, 1) * &root_of_unity(3, 1);
        assert_eq!(p.conductor(), 12);
        assert_eq!(p, root_of_unity(12, 7));
        assert!(CycloScalar::zero().inv().is_none());
    }

    #[test]
    fn complex_shadow() {
        let z = root_of_unity(8, 3);
        let c = z.to_complex();
        let expected = Complex64::from_polar(1.0, 2.0 * PI * 3.0 / 8.0);
        assert!((c - expected).norm() < 1e-14);
        assert_eq!(format!("{}", root_of_unity(3, 1)), "(zeta3)");
        assert_eq!(format!("{}", CycloScalar::from_integer(-4)), "-4");
    }
}
