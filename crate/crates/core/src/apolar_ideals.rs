//! The annihilator of a monomial, the model ideal `J`, Hilbert functions of
//! `S/J`, and the complete intersections `I(k, phi)`.
//!
//! All exponents here are in the sorted coordinates of a [`MonomialSpec`]:
//! variable `a0` carries the smallest exponent `d0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::dim_graded_piece;
use crate::monomial_waring::MonomialSpec;
use crate::polynomial::{apply_diff, parse_poly, Exponent, Ring, SparsePoly, TermRecord};
use crate::scalar::Scalar;

/// A monomial ideal given by minimal generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    num_vars: usize,
    generators: Vec<Exponent>,
}

impl MonomialIdeal {
    /// Drops every generator divisible by another one.
    pub fn new(num_vars: usize, mut generators: Vec<Exponent>) -> Self {
        generators.sort();
        generators.dedup();
        let minimal = generators
            .iter()
            .filter(|g| !generators.iter().any(|h| h != *g && h.divides(g)))
            .cloned()
            .collect();
        MonomialIdeal { num_vars, generators: minimal }
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.generators
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn contains(&self, e: &Exponent) -> bool {
        self.generators.iter().any(|g| g.divides(e))
    }

    /// Number of degree-`t` monomials in the ideal.
    pub fn dim_graded(&self, t: i64) -> u64 {
        if t < 0 {
            return 0;
        }
        Exponent::all_of_degree(self.num_vars, t as u32).iter().filter(|e| self.contains(e)).count() as u64
    }
}

/// `F^perp = (a0^(d0+1), ..., an^(dn+1))`.
pub fn annihilator(spec: &MonomialSpec) -> MonomialIdeal {
    let n = spec.num_vars();
    MonomialIdeal::new(
        n,
        spec.exponents().iter().enumerate().map(|(i, &d)| Exponent::unit(n, i, d + 1)).collect(),
    )
}

/// `J = (a1^(d1+1), ..., an^(dn+1))`.
pub fn model_ideal(spec: &MonomialSpec) -> MonomialIdeal {
    let n = spec.num_vars();
    MonomialIdeal::new(
        n,
        spec.exponents().iter().enumerate().skip(1).map(|(i, &d)| Exponent::unit(n, i, d + 1)).collect(),
    )
}

/// `dim (S/J)_t` by counting degree-`t` monomials outside `J`.
pub fn hilbert_s_mod_j(spec: &MonomialSpec, t: i64) -> u64 {
    if t < 0 {
        return 0;
    }
    let j = model_ideal(spec);
    let value = Exponent::all_of_degree(spec.num_vars(), t as u32).iter().filter(|e| !j.contains(e)).count() as u64;
    debug_assert_eq!(i128::from(value), hilbert_s_mod_j_series(spec, t));
    value
}

/// Coefficient of `s^t` in `prod_{i>=1} (1 - s^(d_i+1)) / (1 - s)^(n+1)`.
pub fn hilbert_s_mod_j_series(spec: &MonomialSpec, t: i64) -> i128 {
    if t < 0 {
        return 0;
    }
    let t = t as usize;
    let mut numerator = vec![0i128; t + 1];
    numerator[0] = 1;
    for &d in &spec.exponents()[1..] {
        let shift = d as usize + 1;
        for k in (shift..=t).rev() {
            numerator[k] -= numerator[k - shift];
        }
    }
    // 1/(1-s)^(n+1) has coefficients C(j+n, n).
    (0..=t)
        .map(|k| numerator[k] * i128::from(dim_graded_piece(spec.num_vars(), (t - k) as i64)))
        .sum()
}

/// `dim J_t`.
pub fn dim_j(spec: &MonomialSpec, t: i64) -> u64 {
    dim_graded_piece(spec.num_vars(), t) - hilbert_s_mod_j(spec, t)
}

/// `dim VSP(F) = h(d1 - d0) + ... + h(dn - d0)` with `h` the Hilbert function of `S/J`.
pub fn dim_vsp(spec: &MonomialSpec) -> u64 {
    let d0 = i64::from(spec.d0());
    spec.exponents()[1..].iter().map(|&d| hilbert_s_mod_j(spec, i64::from(d) - d0)).sum()
}

/// Degree-`(d_i - d0)` monomials outside `J`, a basis of `(S/J)_{d_i - d0}`.
pub fn basis_bprime(spec: &MonomialSpec, i: usize) -> Result<Vec<Exponent>> {
    if i == 0 || i > spec.n() {
        return Err(Error::VariableMismatch { expected: spec.n(), found: i });
    }
    let j = model_ideal(spec);
    let deg = spec.exponents()[i] - spec.d0();
    Ok(Exponent::all_of_degree(spec.num_vars(), deg).into_iter().rev().filter(|e| !j.contains(e)).collect())
}

/// Number of degree-`t` monomials divisible by `a0` that lie in `F^perp`.
pub fn dim_perp_cap_alpha0(spec: &MonomialSpec, t: i64) -> u64 {
    if t <= 0 {
        return 0;
    }
    let perp = annihilator(spec);
    let value = Exponent::all_of_degree(spec.num_vars(), t as u32)
        .iter()
        .filter(|e| e.0[0] >= 1 && perp.contains(e))
        .count() as u64;
    debug_assert_eq!(i128::from(value), dimension_difference_rhs(spec, t));
    value
}

/// `dim J_{t-1} - dim J_{t-d0-1} + dim S_{t-d0-1}`, the value the
/// `a0`-multiples of `F^perp` in degree `t` must have.
pub fn dimension_difference_rhs(spec: &MonomialSpec, t: i64) -> i128 {
    let shift = i64::from(spec.d0()) + 1;
    i128::from(dim_j(spec, t - 1)) - i128::from(dim_j(spec, t - shift))
        + i128::from(dim_graded_piece(spec.num_vars(), t - shift))
}

/// The tuple `(phi_1, ..., phi_k)` with `deg phi_i = d_i - d0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiTuple<S> {
    entries: Vec<SparsePoly<S>>,
    canonical: bool,
}

impl<S: Scalar> PhiTuple<S> {
    /// Validates degrees against `spec`. Fewer than `n` entries describe a
    /// partial tuple for `I(k, phi)` with `k < n`; a pure power `x0^d0` has
    /// the empty tuple.
    pub fn new(spec: &MonomialSpec, entries: Vec<SparsePoly<S>>) -> Result<Self> {
        if entries.len() > spec.n() || (entries.is_empty() && spec.n() > 0) {
            return Err(Error::IncompleteIdeal { k: entries.len(), n: spec.n() });
        }
        let entries: Vec<SparsePoly<S>> = entries.into_iter().map(|p| p.with_ring(Ring::Dual)).collect();
        for (i, phi) in entries.iter().enumerate() {
            if phi.num_vars() != spec.num_vars() {
                return Err(Error::VariableMismatch { expected: spec.num_vars(), found: phi.num_vars() });
            }
            let want = spec.exponents()[i + 1] - spec.d0();
            if !phi.is_homogeneous() {
                return Err(Error::NotHomogeneous);
            }
            if let Some(found) = phi.degree() {
                if found != want {
                    return Err(Error::DegreeMismatch { expected: want, found });
                }
            }
        }
        let j = model_ideal(spec);
        let canonical = entries.iter().all(|p| p.terms().all(|(e, _)| !j.contains(e)));
        Ok(PhiTuple { entries, canonical })
    }

    /// Scalars `(c_1, ..., c_n)`; requires equal exponents.
    pub fn scalars(spec: &MonomialSpec, values: Vec<S>) -> Result<Self> {
        if !spec.has_equal_exponents() {
            return Err(Error::UnequalExponents);
        }
        let n = spec.num_vars();
        Self::new(spec, values.into_iter().map(|c| SparsePoly::constant(n, Ring::Dual, c)).collect())
    }

    /// `phi_i = a0^(d_i - d0)`, the tuple of the explicit decomposition.
    pub fn explicit(spec: &MonomialSpec) -> Self {
        let n = spec.num_vars();
        let entries = spec.exponents()[1..]
            .iter()
            .map(|&d| SparsePoly::monomial(n, Ring::Dual, Exponent::unit(n, 0, d - spec.d0()), S::one()))
            .collect();
        Self::new(spec, entries).expect("explicit tuple has valid degrees")
    }

    pub fn entries(&self) -> &[SparsePoly<S>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when no term of any entry lies in `J`.
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn has_zero_entry(&self) -> Option<usize> {
        self.entries.iter().position(SparsePoly::is_zero).map(|i| i + 1)
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PhiTuple<T> {
        PhiTuple { entries: self.entries.iter().map(|p| p.map_coeffs(&f)).collect(), canonical: self.canonical }
    }

    pub fn to_records(&self) -> Vec<Vec<TermRecord>> {
        self.entries.iter().map(SparsePoly::to_records).collect()
    }

    pub fn from_records(spec: &MonomialSpec, records: &[Vec<TermRecord>]) -> Result<Self> {
        let entries = records
            .iter()
            .map(|r| SparsePoly::from_records(spec.num_vars(), Ring::Dual, r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, entries)
    }

    /// `"phi_1; phi_2; ..."` in the rendering of [`PhiTuple::parse`].
    pub fn to_text(&self) -> String {
        self.entries.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; ")
    }
}

impl PhiTuple<num_rational::BigRational> {
    /// Parses `"phi_1; ...; phi_n"` in the variables `a0..an` (or `a, b, c, d`)
    /// of the sorted coordinates. The word `explicit` selects
    /// `phi_i = a0^(d_i - d0)`.
    pub fn parse(spec: &MonomialSpec, text: &str) -> Result<Self> {
        if text.trim() == "explicit" {
            return Ok(Self::explicit(spec));
        }
        if spec.n() == 0 && text.trim().is_empty() {
            return Self::new(spec, Vec::new());
        }
        let entries = text
            .split(';')
            .map(|part| parse_poly(part, spec.num_vars(), Ring::Dual))
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, entries)
    }
}

/// `I(k, phi) = (a_i^(d_i+1) - phi_i * a0^(d0+1) : 1 <= i <= k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CIIdeal<S> {
    pub spec: MonomialSpec,
    pub phi: PhiTuple<S>,
    pub k: usize,
}

impl<S: Scalar> CIIdeal<S> {
    pub fn generators(&self) -> Vec<SparsePoly<S>> {
        let n = self.spec.num_vars();
        let d = self.spec.exponents();
        let a0_power = Exponent::unit(n, 0, d[0] + 1);
        (1..=self.k)
            .map(|i| {
                let lead = SparsePoly::monomial(n, Ring::Dual, Exponent::unit(n, i, d[i] + 1), S::one());
                lead.sub(&self.phi.entries[i - 1].mul_term(&a0_power, &S::one()))
            })
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.k == self.spec.n()
    }

    pub fn to_record(&self) -> CIIdealRecord {
        CIIdealRecord {
            spec: self.spec.clone(),
            phi: self.phi.to_records(),
            k: self.k,
            generators: self.generators().iter().map(|g| g.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CIIdealRecord {
    pub spec: MonomialSpec,
    pub phi: Vec<Vec<TermRecord>>,
    pub k: usize,
    pub generators: Vec<String>,
}

/// Builds `I(k, phi)` and checks that every generator kills `F`.
pub fn make_ci_ideal<S: Scalar>(spec: &MonomialSpec, phi: PhiTuple<S>, k: usize) -> Result<CIIdeal<S>> {
    if k == 0 || k > phi.len() {
        return Err(Error::IncompleteIdeal { k, n: phi.len() });
    }
    let ideal = CIIdeal { spec: spec.clone(), phi, k };
    let f = spec.monomial_sorted::<S>();
    for (i, g) in ideal.generators().iter().enumerate() {
        let want = spec.exponents()[i + 1] + 1;
        if !g.is_homogeneous() || g.degree() != Some(want) {
            return Err(Error::DegreeMismatch { expected: want, found: g.degree().unwrap_or(0) });
        }
        assert!(apply_diff(g, &f)?.is_zero(), "generator {i} does not annihilate F");
    }
    Ok(ideal)
}

/// Rewrites every term of `phi_i` lying in `J` through
/// `a_j^(d_j+1) -> phi_j * a0^(d0+1)` until no such term is left. The result
/// generates the same ideal.
pub fn canonicalize_phi<S: Scalar>(spec: &MonomialSpec, phi: &PhiTuple<S>) -> Result<PhiTuple<S>> {
    let n = spec.num_vars();
    let d = spec.exponents();
    let a0_power = Exponent::unit(n, 0, d[0] + 1);
    let mut done: Vec<SparsePoly<S>> = Vec::with_capacity(phi.len());
    for (idx, entry) in phi.entries.iter().enumerate() {
        let i = idx + 1;
        // Each rewrite removes one term and adds terms with a strictly larger
        // a0 exponent, so the number of rewrites is bounded.
        let deg = d[i] - d[0];
        let cap = (u64::from(deg / (d[0] + 1)) + 1) * dim_graded_piece(n, i64::from(deg)) + 1;
        let mut current = entry.clone();
        let mut rounds = 0;
        loop {
            let offending = current.terms().find_map(|(e, c)| {
                (1..n).find(|&j| e.0[j] > d[j]).map(|j| (e.clone(), c.clone(), j))
            });
            let Some((e, c, j)) = offending else { break };
            if j >= i || rounds > cap {
                return Err(Error::EliminationCycle(i));
            }
            rounds += 1;
            let rest = e.div(&Exponent::unit(n, j, d[j] + 1)).mul(&a0_power);
            let mut term = SparsePoly::zero(n, Ring::Dual);
            term.add_term(e, c.clone());
            current = current.sub(&term).add(&done[j - 1].mul_term(&rest, &c));
        }
        done.push(current);
    }
    let out = PhiTuple::new(spec, done)?;
    debug_assert!(out.canonical);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn spec(s: &str) -> MonomialSpec {
        s.parse().unwrap()
    }

    fn phi(s: &MonomialSpec, text: &str) -> PhiTuple<BigRational> {
        PhiTuple::parse(s, text).unwrap()
    }

    #[test]
    fn annihilators() {
        let e = |v: &[u32]| Exponent(v.to_vec());
        assert_eq!(annihilator(&spec("x*y^2*z^3")).generators(), &[e(&[2, 0, 0]), e(&[0, 3, 0]), e(&[0, 0, 4])]);
        let perp = annihilator(&spec("x^2*y^2*z^2"));
        assert_eq!(perp.generators().len(), 3);
        assert!(perp.contains(&e(&[3, 1, 0])));
        assert!(!perp.contains(&e(&[2, 2, 2])));
        let f = spec("x*y^2*z^3").monomial_sorted::<BigRational>();
        for g in annihilator(&spec("x*y^2*z^3")).generators() {
            let op = SparsePoly::monomial(3, Ring::Dual, g.clone(), BigRational::from_i64(1));
            assert!(apply_diff(&op, &f).unwrap().is_zero());
        }
    }

    #[test]
    fn minimal_generators() {
        let e = |v: &[u32]| Exponent(v.to_vec());
        let ideal = MonomialIdeal::new(2, vec![e(&[2, 0]), e(&[3, 1]), e(&[2, 0])]);
        assert_eq!(ideal.generators(), &[e(&[2, 0])]);
    }

    #[test]
    fn hilbert_values() {
        let s = spec("x^2*y^2*z^2");
        assert_eq!(hilbert_s_mod_j(&s, 0), 1);
        assert_eq!(hilbert_s_mod_j(&s, 1), 3);
        assert_eq!(hilbert_s_mod_j(&s, -1), 0);
        assert_eq!(hilbert_s_mod_j(&spec("x*y^2*z^3"), 2), 6);
        for t in 6..12 {
            assert_eq!(hilbert_s_mod_j(&s, t), 9);
        }
    }

    #[test]
    fn vsp_dimensions() {
        assert_eq!(dim_vsp(&spec("x^2*y^2*z^2")), 2);
        assert_eq!(dim_vsp(&spec("x*y^2*z^3")), 9);
        assert_eq!(dim_vsp(&spec("x^3*y^3*z^3*w^3")), 3);
        assert_eq!(dim_vsp(&spec("x^4")), 0);
    }

    #[test]
    fn bprime_bases() {
        let s = spec("x*y^2*z^3");
        assert_eq!(basis_bprime(&s, 1).unwrap().len(), 3);
        assert_eq!(basis_bprime(&s, 2).unwrap().len(), 6);
        assert_eq!(basis_bprime(&spec("x^2*y^2*z^2"), 1).unwrap(), vec![Exponent::zero(3)]);
        assert!(basis_bprime(&s, 0).is_err());
        assert!(basis_bprime(&s, 3).is_err());
    }

    #[test]
    fn perp_cap_alpha0() {
        let s = spec("x^2*y^2*z^2");
        assert_eq!(dim_perp_cap_alpha0(&s, 4), 5);
        assert_eq!(dimension_difference_rhs(&s, 4), 5);
        assert_eq!(dim_j(&s, 3), 2);
        assert_eq!(dim_perp_cap_alpha0(&s, 0), 0);
    }

    #[test]
    fn ci_ideal_generators() {
        let s = spec("x*y^2*z^3");
        let ideal = make_ci_ideal(&s, phi(&s, "c; b^2"), 2).unwrap();
        let gens: Vec<String> = ideal.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(gens, vec!["a1^3 - a0^2*a2", "-a0^2*a1^2 + a2^4"]);
        let xyz = spec("x*y*z");
        let ideal = make_ci_ideal(&xyz, phi(&xyz, "1;1"), 2).unwrap();
        let gens: Vec<String> = ideal.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(gens, vec!["-a0^2 + a1^2", "-a0^2 + a2^2"]);
        let partial = make_ci_ideal(&s, phi(&s, "c"), 1).unwrap();
        assert_eq!(partial.generators().len(), 1);
        assert!(!partial.is_complete());
        assert!(make_ci_ideal(&s, phi(&s, "c; b^2"), 3).is_err());
    }

    #[test]
    fn phi_degree_validation() {
        let s = spec("x*y^2*z^3");
        assert!(matches!(PhiTuple::parse(&s, "c^2; b^2"), Err(Error::DegreeMismatch { .. })));
        assert!(matches!(PhiTuple::parse(&s, "c + 1; b^2"), Err(Error::NotHomogeneous)));
        assert!(PhiTuple::parse(&s, "0; b^2").unwrap().has_zero_entry() == Some(1));
        assert!(matches!(PhiTuple::<BigRational>::scalars(&s, vec![]), Err(Error::UnequalExponents)));
        let e = phi(&s, "explicit");
        assert_eq!(e.to_text(), "a0; a0^2");
        assert!(e.is_canonical());
    }

    #[test]
    fn canonicalization_rewrites_j_terms() {
        // d = (1, 2, 5): a1^3 divides a term of phi_2 (degree 4)
        let s = spec("x*y^2*z^5");
        let raw = phi(&s, "2*b; b^3*c + a*b*c^2");
        assert!(!raw.is_canonical());
        let canon = canonicalize_phi(&s, &raw).unwrap();
        assert!(canon.is_canonical());
        // b^3*c -> 2*b*a^2*c
        assert_eq!(canon.entries()[1].to_string(), "2*a0^2*a1*a2 + a0*a1*a2^2");
        assert_eq!(canonicalize_phi(&s, &canon).unwrap(), canon);
        let scalar = spec("x^2*y^2*z^2");
        let p = phi(&scalar, "3;-1");
        assert_eq!(canonicalize_phi(&scalar, &p).unwrap(), p);
    }

    #[test]
    fn ci_record_json() {
        let s = spec("x*y^2*z^3");
        let ideal = make_ci_ideal(&s, phi(&s, "c; b^2"), 2).unwrap();
        let json = serde_json::to_string(&ideal.to_record()).unwrap();
        let back: CIIdealRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ideal.to_record());
        assert_eq!(PhiTuple::<BigRational>::from_records(&s, &back.phi).unwrap(), ideal.phi);
    }
}
