//! Ranks and explicit Waring decompositions of monomials.
//!
//! A monomial is normalized into a [`MonomialSpec`]: variables with exponent
//! zero are dropped and the remaining exponents sorted ascending, so that
//! `d0 <= d1 <= ... <= dn`. Everything downstream works in these sorted
//! coordinates; decompositions are mapped back to the caller's variables on
//! output.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{lcm_all, multinomial, root_of_unity, root_power_sum, CycloScalar};
use crate::polynomial::{power_linear_form, Exponent, LinearForm, Ring, SparsePoly, TermRecord};
use crate::scalar::{Domain, Scalar, ScalarRecord};

/// A monomial `x0^d0 * ... * xn^dn` with `0 < d0 <= ... <= dn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialSpec {
    exponents: Vec<u32>,
    /// `positions[i]` is the caller's variable index of sorted variable `i`.
    positions: Vec<usize>,
    num_original: usize,
}

impl MonomialSpec {
    /// Builds the monomial from exponents in the caller's variable order. Zero
    /// exponents are stripped; the constant monomial is rejected.
    pub fn new(original: &[u32]) -> Result<Self> {
        let mut pairs: Vec<(u32, usize)> = original
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (e, i))
            .collect();
        if pairs.is_empty() {
            return Err(Error::InvalidMonomial("constant monomial has no Waring decomposition".into()));
        }
        pairs.sort();
        Ok(MonomialSpec {
            exponents: pairs.iter().map(|p| p.0).collect(),
            positions: pairs.iter().map(|p| p.1).collect(),
            num_original: original.len(),
        })
    }

    /// Sorted exponents `(d0, ..., dn)`.
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// Exponents in the caller's variable order, zeros included.
    pub fn original_exponents(&self) -> Vec<u32> {
        let mut out = vec![0; self.num_original];
        for (e, &p) in self.exponents.iter().zip(&self.positions) {
            out[p] = *e;
        }
        out
    }

    pub fn num_original_vars(&self) -> usize {
        self.num_original
    }

    /// `n`, i.e. one less than the number of variables actually present.
    pub fn n(&self) -> usize {
        self.exponents.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.exponents.len()
    }

    /// Total degree `d`.
    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn d0(&self) -> u32 {
        self.exponents[0]
    }

    pub fn has_equal_exponents(&self) -> bool {
        self.exponents.iter().all(|&e| e == self.exponents[0])
    }

    /// `lcm(d1+1, ..., dn+1)`, the conductor holding every root of unity the
    /// explicit decomposition needs.
    pub fn conductor(&self) -> u32 {
        lcm_all(self.exponents[1..].iter().map(|d| d + 1))
    }

    /// The primitive `(d_i+1)`-th root of unity `zeta_i`, inside `Q(zeta_m)`.
    pub fn zeta(&self, i: usize) -> CycloScalar {
        assert!(i >= 1 && i <= self.n(), "zeta_i is defined for 1 <= i <= n");
        let m = self.conductor();
        root_of_unity(m, i64::from(m / (self.exponents[i] + 1)))
    }

    /// The index grid `{(a1, ..., an) : 0 <= a_i <= d_i}` in lexicographic order.
    pub fn index_grid(&self) -> Vec<Vec<u32>> {
        let mut grid = vec![Vec::new()];
        for &d in &self.exponents[1..] {
            grid = grid
                .into_iter()
                .flat_map(|prefix| {
                    (0..=d).map(move |a| {
                        let mut v = prefix.clone();
                        v.push(a);
                        v
                    })
                })
                .collect();
        }
        grid
    }

    /// `F` in sorted coordinates (`n + 1` variables).
    pub fn monomial_sorted<S: Scalar>(&self) -> SparsePoly<S> {
        SparsePoly::monomial(self.num_vars(), Ring::Primal, Exponent(self.exponents.clone()), S::one())
    }

    /// `F` in the caller's variables.
    pub fn monomial_original<S: Scalar>(&self) -> SparsePoly<S> {
        SparsePoly::monomial(
            self.num_original,
            Ring::Primal,
            Exponent(self.original_exponents()),
            S::one(),
        )
    }

    /// Maps a coefficient vector in sorted coordinates to the caller's
    /// variables, with zeros in the stripped slots.
    pub fn to_original_order<S: Scalar>(&self, sorted: &[S]) -> Vec<S> {
        assert_eq!(sorted.len(), self.num_vars());
        let mut out = vec![S::zero(); self.num_original];
        for (v, &p) in sorted.iter().zip(&self.positions) {
            out[p] = v.clone();
        }
        out
    }

    /// Inverse of [`Self::to_original_order`]; stripped slots must be zero.
    pub fn to_sorted_order<S: Scalar>(&self, original: &[S]) -> Result<Vec<S>> {
        if original.len() != self.num_original {
            return Err(Error::VariableMismatch { expected: self.num_original, found: original.len() });
        }
        Ok(self.positions.iter().map(|&p| original[p].clone()).collect())
    }
}

impl FromStr for MonomialSpec {
    type Err = Error;

    /// Accepts `"x^2*y^2*z^3"`, `"1*x0*x2^4"` or an exponent list `"2,2,3"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::InvalidMonomial("empty input".into()));
        }
        if s.chars().all(|c| c.is_ascii_digit() || c == ',' || c.is_whitespace()) {
            let exps = s
                .split(',')
                .map(|p| p.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::InvalidMonomial(format!("bad exponent list {s:?}")))?;
            return MonomialSpec::new(&exps);
        }
        let poly = crate::polynomial::parse_poly(s, 10, Ring::Primal)
            .map_err(|e| Error::InvalidMonomial(e.to_string()))?;
        if poly.len() != 1 {
            return Err(Error::InvalidMonomial(format!("{s:?} is not a single monomial")));
        }
        let (e, c) = poly.leading_term().expect("one term");
        if !num_traits::One::is_one(c) {
            return Err(Error::InvalidMonomial("coefficient must be 1".into()));
        }
        let used = e.0.iter().rposition(|&k| k > 0).map_or(0, |i| i + 1);
        MonomialSpec::new(&e.0[..used])
    }
}

impl fmt::Display for MonomialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .original_exponents()
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl Serialize for MonomialSpec {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.to_string().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonomialSpec {
    fn deserialize<De: serde::Deserializer<'de>>(d: De) -> std::result::Result<Self, De::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `R(F) = (d1+1) ... (dn+1)`.
pub fn waring_rank(spec: &MonomialSpec) -> u64 {
    spec.exponents[1..].iter().map(|&d| u64::from(d) + 1).product()
}

/// `(d0+1) ... (d_{n-1}+1)`.
pub fn rank_lower_bound(spec: &MonomialSpec) -> u64 {
    spec.exponents[..spec.n()].iter().map(|&d| u64::from(d) + 1).product()
}

/// `C = (d; d0, ..., dn) * (d1+1) ... (dn+1)`.
pub fn multinomial_c(spec: &MonomialSpec) -> BigRational {
    BigRational::from_integer(multinomial(&spec.exponents) * BigInt::from(waring_rank(spec)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verified {
    Exact,
    Numeric { tolerance: f64 },
    Unverified,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summand<S> {
    pub coeff: S,
    pub form: LinearForm<S>,
}

/// `F = sum_j c_j * l_j^d`, with forms in the caller's variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<S> {
    pub degree: u32,
    pub summands: Vec<Summand<S>>,
    pub verified: Verified,
}

impl<S: Scalar> Decomposition<S> {
    pub fn domain(&self) -> Domain {
        S::DOMAIN
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Expands `sum_j c_j l_j^d`.
    pub fn expand(&self) -> SparsePoly<S> {
        let num_vars = self.summands.first().map_or(0, |s| s.form.coeffs.len());
        let parts: Vec<SparsePoly<S>> = self
            .summands
            .par_iter()
            .map(|s| power_linear_form(&s.form, self.degree).scale(&s.coeff))
            .collect();
        parts.iter().fold(SparsePoly::zero(num_vars, Ring::Primal), |acc, p| acc.add(p))
    }

    pub fn to_record(&self) -> DecompositionRecord {
        DecompositionRecord {
            degree: self.degree,
            domain: S::DOMAIN,
            summands: self
                .summands
                .iter()
                .map(|s| SummandRecord {
                    coeff: s.coeff.to_record(),
                    form: s.form.coeffs.iter().map(Scalar::to_record).collect(),
                })
                .collect(),
            verified: self.verified,
        }
    }

    pub fn from_record(record: &DecompositionRecord) -> Result<Self> {
        let summands = record
            .summands
            .iter()
            .map(|s| {
                Ok(Summand {
                    coeff: S::from_record(&s.coeff)?,
                    form: LinearForm::new(s.form.iter().map(S::from_record).collect::<Result<_>>()?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Decomposition { degree: record.degree, summands, verified: record.verified })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (j, s) in self.summands.iter().enumerate() {
            let sign = if j == 0 { "" } else { "\n  + " };
            out.push_str(&format!("{sign}{} * ({})^{}", s.coeff.to_text(), s.form.to_poly(), self.degree));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummandRecord {
    pub coeff: ScalarRecord,
    pub form: Vec<ScalarRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub degree: u32,
    pub domain: Domain,
    pub summands: Vec<SummandRecord>,
    pub verified: Verified,
}

/// Linear form `x0 + zeta_1^{a1} x1 + ... + zeta_n^{an} xn` and coefficient
/// `zeta_1^{a1} ... zeta_n^{an} / C` for one grid index, in sorted coordinates.
fn explicit_summand_sorted(spec: &MonomialSpec, index: &[u32], inv_c: &CycloScalar) -> (CycloScalar, Vec<CycloScalar>) {
    let mut form = vec![CycloScalar::one()];
    let mut coeff = inv_c.clone();
    for (i, &a) in index.iter().enumerate() {
        let z = spec.zeta(i + 1).pow(a);
        coeff = &coeff * &z;
        form.push(z);
    }
    (coeff, form)
}

/// Sorted-coordinate linear forms of the explicit decomposition, one per grid index.
pub fn explicit_forms_sorted(spec: &MonomialSpec) -> Vec<Vec<CycloScalar>> {
    let inv_c = CycloScalar::one();
    spec.index_grid()
        .iter()
        .map(|idx| explicit_summand_sorted(spec, idx, &inv_c).1)
        .collect()
}

/// The explicit decomposition
/// `F = 1/C * sum_a zeta^a * (x0 + zeta_1^{a1} x1 + ... + zeta_n^{an} xn)^d`,
/// exact over `Q(zeta_m)`, with `R(F)` summands.
pub fn explicit_decomposition(spec: &MonomialSpec) -> Decomposition<CycloScalar> {
    let inv_c = CycloScalar::from_rational(multinomial_c(spec).recip());
    let summands = spec
        .index_grid()
        .par_iter()
        .map(|idx| {
            let (coeff, form) = explicit_summand_sorted(spec, idx, &inv_c);
            Summand { coeff, form: LinearForm::new(spec.to_original_order(&form)) }
        })
        .collect();
    Decomposition { degree: spec.degree(), summands, verified: Verified::Unverified }
}

/// Coefficient of `x^m` (sorted coordinates) in the explicit expression,
/// computed from the factored root-of-unity sums:
/// `C_m = (d; m) / C * prod_i sum_{a=0}^{d_i} (zeta_i^{m_i+1})^a`.
pub fn coefficient_cm(spec: &MonomialSpec, m: &Exponent) -> Result<CycloScalar> {
    if m.len() != spec.num_vars() {
        return Err(Error::VariableMismatch { expected: spec.num_vars(), found: m.len() });
    }
    if m.degree() != spec.degree() {
        return Err(Error::DegreeMismatch { expected: spec.degree(), found: m.degree() });
    }
    let mut value = CycloScalar::from_rational(
        BigRational::from_integer(multinomial(&m.0)) / multinomial_c(spec),
    );
    for i in 1..=spec.n() {
        let sum = root_power_sum(spec.exponents[i] + 1, i64::from(m.0[i]) + 1);
        value = &value * &sum;
        if value.is_zero() {
            break;
        }
    }
    Ok(value)
}

/// Outcome of checking `sum_j c_j l_j^d - F`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub domain: Domain,
    /// Nonzero terms of the difference (exact domains only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference: Option<Vec<TermRecord>>,
    /// Largest absolute coefficient of the difference.
    pub max_abs_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

/// Expands the decomposition and compares it with `F` in the caller's variables.
///
/// Exact domains pass only on an identically zero difference; the float
/// domain passes when every coefficient error is at most `tol`.
pub fn verify_decomposition<S: Scalar>(
    spec: &MonomialSpec,
    dec: &Decomposition<S>,
    tol: f64,
) -> Result<VerificationReport> {
    if dec.degree != spec.degree() {
        return Err(Error::DegreeMismatch { expected: spec.degree(), found: dec.degree });
    }
    if let Some(bad) = dec.summands.iter().find(|s| s.form.coeffs.len() != spec.num_original_vars()) {
        return Err(Error::VariableMismatch { expected: spec.num_original_vars(), found: bad.form.coeffs.len() });
    }
    let diff = dec.expand().sub(&spec.monomial_original());
    let max_abs_error = diff.terms().map(|(_, c)| c.magnitude()).fold(0.0, f64::max);
    Ok(if S::DOMAIN.is_exact() {
        VerificationReport {
            passed: diff.is_zero(),
            domain: S::DOMAIN,
            difference: (!diff.is_zero()).then(|| diff.to_records()),
            max_abs_error,
            tolerance: None,
        }
    } else {
        VerificationReport {
            passed: max_abs_error <= tol,
            domain: S::DOMAIN,
            difference: None,
            max_abs_error,
            tolerance: Some(tol),
        }
    })
}
