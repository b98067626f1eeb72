//! Sparse multivariate polynomials over a pluggable coefficient domain, and
//! the apolarity action of the dual ring `S = k[a0..an]` on `T = k[x0..xn]`.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Exponent`], whose ordering is
//! graded reverse lexicographic; the leading term is the last entry.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::parse_rational;
use crate::scalar::{Scalar, ScalarRecord};

/// Exponent vector of a monomial, ordered graded reverse lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn zero(num_vars: usize) -> Self {
        Exponent(vec![0; num_vars])
    }

    pub fn unit(num_vars: usize, var: usize, power: u32) -> Self {
        let mut e = vec![0; num_vars];
        e[var] = power;
        Exponent(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// All exponents of total degree `degree` in `num_vars` variables, in
    /// ascending graded reverse lexicographic order.
    pub fn all_of_degree(num_vars: usize, degree: u32) -> Vec<Exponent> {
        fn rec(prefix: &mut Vec<u32>, left: usize, remaining: u32, out: &mut Vec<Exponent>) {
            if left == 1 {
                prefix.push(remaining);
                out.push(Exponent(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in 0..=remaining {
                prefix.push(e);
                rec(prefix, left - 1, remaining - e, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if num_vars == 0 {
            if degree == 0 {
                out.push(Exponent(Vec::new()));
            }
            return out;
        }
        rec(&mut Vec::with_capacity(num_vars), num_vars, degree, &mut out);
        out.sort();
        out
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // Smaller exponent in the last differing variable is larger.
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Which side of the apolarity pairing a polynomial lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    /// Differential operators `a0..an`.
    Dual,
    /// Polynomials in `x0..xn`.
    Primal,
}

impl Ring {
    fn var_prefix(self) -> &'static str {
        match self {
            Ring::Dual => "a",
            Ring::Primal => "x",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly<S> {
    num_vars: usize,
    ring: Ring,
    terms: BTreeMap<Exponent, S>,
}

impl<S: Scalar> SparsePoly<S> {
    pub fn zero(num_vars: usize, ring: Ring) -> Self {
        SparsePoly { num_vars, ring, terms: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, ring: Ring, c: S) -> Self {
        Self::monomial(num_vars, ring, Exponent::zero(num_vars), c)
    }

    pub fn monomial(num_vars: usize, ring: Ring, exp: Exponent, c: S) -> Self {
        assert_eq!(exp.len(), num_vars, "exponent length must match the variable count");
        let mut p = Self::zero(num_vars, ring);
        p.add_term(exp, c);
        p
    }

    pub fn var(num_vars: usize, ring: Ring, index: usize) -> Self {
        Self::monomial(num_vars, ring, Exponent::unit(num_vars, index, 1), S::one())
    }

    pub fn from_terms(
        num_vars: usize,
        ring: Ring,
        terms: impl IntoIterator<Item = (Exponent, S)>,
    ) -> Self {
        let mut p = Self::zero(num_vars, ring);
        for (e, c) in terms {
            assert_eq!(e.len(), num_vars, "exponent length must match the variable count");
            p.add_term(e, c);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn with_ring(mut self, ring: Ring) -> Self {
        self.ring = ring;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> S {
        self.terms.get(e).cloned().unwrap_or_else(S::zero)
    }

    pub fn leading_term(&self) -> Option<(&Exponent, &S)> {
        self.terms.iter().next_back()
    }

    /// Adds `c * x^e` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, e: Exponent, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(e, sum);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponent::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Exponent::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars, self.ring);
        }
        let mut out = Self::zero(self.num_vars, self.ring);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(self.num_vars, self.ring);
        for (ea, a) in &self.terms {
            for (eb, b) in &other.terms {
                out.add_term(ea.mul(eb), a.clone() * b.clone());
            }
        }
        out
    }

    /// Multiplies by the monomial `c * x^e`.
    pub fn mul_term(&self, e: &Exponent, c: &S) -> Self {
        let mut out = Self::zero(self.num_vars, self.ring);
        for (ea, a) in &self.terms {
            out.add_term(ea.mul(e), a.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.num_vars, self.ring, S::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SparsePoly<T> {
        SparsePoly::from_terms(
            self.num_vars,
            self.ring,
            self.terms.iter().map(|(e, c)| (e.clone(), f(c))),
        )
    }

    /// Substitutes 1 for `var`. The variable slot is kept with exponent zero.
    pub fn dehomogenize(&self, var: usize) -> Result<Self> {
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        if var >= self.num_vars {
            return Err(Error::VariableMismatch { expected: self.num_vars, found: var + 1 });
        }
        let mut out = Self::zero(self.num_vars, self.ring);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e.0[var] = 0;
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[S]) -> Result<S> {
        if point.len() != self.num_vars {
            return Err(Error::VariableMismatch { expected: self.num_vars, found: point.len() });
        }
        Ok(self.terms.iter().fold(S::zero(), |acc, (e, c)| {
            acc + e.0.iter().zip(point).fold(c.clone(), |t, (k, x)| t * x.pow(*k))
        }))
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .rev()
            .map(|(e, c)| TermRecord { exponent: e.0.clone(), coeff: c.to_record() })
            .collect()
    }

    pub fn from_records(num_vars: usize, ring: Ring, records: &[TermRecord]) -> Result<Self> {
        let mut p = Self::zero(num_vars, ring);
        for r in records {
            if r.exponent.len() != num_vars {
                return Err(Error::VariableMismatch { expected: num_vars, found: r.exponent.len() });
            }
            p.add_term(Exponent(r.exponent.clone()), S::from_record(&r.coeff)?);
        }
        Ok(p)
    }
}

impl<S: Scalar> fmt::Display for SparsePoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let prefix = self.ring.var_prefix();
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mut text = c.to_text();
            let negative = text.starts_with('-');
            if negative {
                text.remove(0);
            }
            if !first {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            } else if negative {
                write!(f, "-")?;
            }
            first = false;
            let vars: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("{prefix}{i}") } else { format!("{prefix}{i}^{k}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{text}")?;
            } else if text == "1" {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{text}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// JSON form of a single term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponent: Vec<u32>,
    pub coeff: ScalarRecord,
}

/// Coefficient vector `(a0, ..., an)` of a linear form.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm<S> {
    pub coeffs: Vec<S>,
}

impl<S: Scalar> LinearForm<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        LinearForm { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn to_poly(&self) -> SparsePoly<S> {
        let n = self.coeffs.len();
        SparsePoly::from_terms(
            n,
            Ring::Primal,
            self.coeffs.iter().enumerate().map(|(i, c)| (Exponent::unit(n, i, 1), c.clone())),
        )
    }

    pub fn eval(&self, point: &[S]) -> S {
        self.coeffs
            .iter()
            .zip(point)
            .fold(S::zero(), |acc, (a, x)| acc + a.clone() * x.clone())
    }
}

/// Falling factorial `b (b-1) ... (b-a+1)`.
fn falling(b: u32, a: u32) -> BigInt {
    ((b - a + 1)..=b).fold(BigInt::from(1), |acc, k| acc * k)
}

/// `D o F`: each `a_i` acts as `d/dx_i`, without factorial normalization.
pub fn apply_diff<S: Scalar>(d: &SparsePoly<S>, f: &SparsePoly<S>) -> Result<SparsePoly<S>> {
    if d.num_vars != f.num_vars {
        return Err(Error::VariableMismatch { expected: f.num_vars, found: d.num_vars });
    }
    let mut out = SparsePoly::zero(f.num_vars, Ring::Primal);
    for (ea, ca) in &d.terms {
        for (eb, cb) in &f.terms {
            if !ea.divides(eb) {
                continue;
            }
            let factor = ea
                .0
                .iter()
                .zip(&eb.0)
                .fold(BigInt::from(1), |acc, (a, b)| acc * falling(*b, *a));
            let c = ca.clone() * cb.clone() * S::from_rational(&BigRational::from_integer(factor));
            out.add_term(eb.div(ea), c);
        }
    }
    Ok(out)
}

/// Expands `l^d` by the multinomial theorem.
pub fn power_linear_form<S: Scalar>(form: &LinearForm<S>, d: u32) -> SparsePoly<S> {
    let n = form.coeffs.len();
    // powers[i][k] = a_i^k
    let powers: Vec<Vec<S>> = form
        .coeffs
        .iter()
        .map(|a| {
            let mut row = Vec::with_capacity(d as usize + 1);
            row.push(S::one());
            for k in 1..=d as usize {
                row.push(row[k - 1].clone() * a.clone());
            }
            row
        })
        .collect();
    let factorials: Vec<BigInt> = (0..=d).map(crate::exact_arith::factorial).collect();
    let mut out = SparsePoly::zero(n, Ring::Primal);
    for e in Exponent::all_of_degree(n, d) {
        if e.0.iter().zip(&form.coeffs).any(|(k, a)| *k > 0 && a.is_zero()) {
            continue;
        }
        let denom = e.0.iter().fold(BigInt::from(1), |acc, k| acc * &factorials[*k as usize]);
        let multinomial = &factorials[d as usize] / denom;
        let mut c = S::from_rational(&BigRational::from_integer(multinomial));
        for (i, k) in e.0.iter().enumerate() {
            if *k > 0 {
                c = c * powers[i][*k as usize].clone();
            }
        }
        out.add_term(e, c);
    }
    out
}

/// Variable index for `x0..x9`/`a0..a9` or the aliases `x,y,z,w` / `a,b,c,d`.
fn variable_index(name: &str) -> Option<(Ring, usize)> {
    match name {
        "x" => return Some((Ring::Primal, 0)),
        "y" => return Some((Ring::Primal, 1)),
        "z" => return Some((Ring::Primal, 2)),
        "w" => return Some((Ring::Primal, 3)),
        "a" => return Some((Ring::Dual, 0)),
        "b" => return Some((Ring::Dual, 1)),
        "c" => return Some((Ring::Dual, 2)),
        "d" => return Some((Ring::Dual, 3)),
        _ => {}
    }
    let (head, digits) = name.split_at(1);
    let index: usize = digits.parse().ok()?;
    if index > 9 {
        return None;
    }
    match head {
        "x" => Some((Ring::Primal, index)),
        "a" => Some((Ring::Dual, index)),
        _ => None,
    }
}

/// Parses a single product `c*v^k*...` into an exponent map and coefficient.
fn parse_product(text: &str) -> Result<(BTreeMap<usize, u32>, BigRational, Option<Ring>)> {
    let mut coeff = BigRational::from_integer(BigInt::from(1));
    let mut exps = BTreeMap::new();
    let mut ring = None;
    for factor in text.split('*').map(str::trim) {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in {text:?}")));
        }
        if factor.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
            coeff *= parse_rational(factor)?;
            continue;
        }
        let (name, power) = match factor.split_once('^') {
            Some((v, k)) => {
                let k: u32 = k.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                (v.trim(), k)
            }
            None => (factor, 1),
        };
        let (r, idx) =
            variable_index(name).ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
        if ring.is_some_and(|prev| prev != r) {
            return Err(Error::Parse(format!("mixed x- and a-variables in {text:?}")));
        }
        ring = Some(r);
        *exps.entry(idx).or_insert(0) += power;
    }
    Ok((exps, coeff, ring))
}

/// Parses `"3/4*a0^2*a1 - a2 + 1"` into a polynomial over Q with `num_vars`
/// variables. Variables may be `x0..x9`, `a0..a9` or their letter aliases.
pub fn parse_poly(text: &str, num_vars: usize, ring: Ring) -> Result<SparsePoly<BigRational>> {
    let mut out = SparsePoly::zero(num_vars, ring);
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    // Split on top-level + and -, keeping the sign with each term.
    let mut terms = Vec::new();
    let mut current = String::new();
    for (i, ch) in compact.char_indices() {
        let after_caret = compact[..i].ends_with('^');
        if (ch == '+' || ch == '-') && i > 0 && !after_caret {
            terms.push(std::mem::take(&mut current));
        }
        current.push(ch);
    }
    terms.push(current);
    for term in terms {
        let (negative, body) = match term.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, term.strip_prefix('+').unwrap_or(&term)),
        };
        let (exps, mut coeff, term_ring) = parse_product(body)?;
        if term_ring.is_some_and(|r| r != ring) {
            return Err(Error::Parse(format!("variables in {term:?} belong to the other ring")));
        }
        if negative {
            coeff = -coeff;
        }
        let mut e = vec![0; num_vars];
        for (idx, k) in exps {
            if idx >= num_vars {
                return Err(Error::VariableMismatch { expected: num_vars, found: idx + 1 });
            }
            e[idx] = k;
        }
        out.add_term(Exponent(e), coeff);
    }
    Ok(out)
}
