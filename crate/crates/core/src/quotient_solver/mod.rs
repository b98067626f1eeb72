//! Solving `I(n, phi)`: the affine quotient algebra at `a0 = 1`, its
//! multiplication matrices, the trace-form radicality test, ideal membership,
//! and numerical extraction of the points.

pub mod groebner;

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::apolar_ideals::{CIIdeal, PhiTuple};
use crate::error::{Error, Result};
use crate::exact_arith::{multinomial, CycloScalar};
use crate::linalg::{min_singular_vector, to_nalgebra, DenseMatrix, LinearAlgebra, Solution, DEFAULT_RANK_CUTOFF};
use crate::monomial_waring::{explicit_forms_sorted, MonomialSpec};
use crate::polynomial::{Exponent, Ring, SparsePoly};
use crate::scalar::{Scalar, ScalarRecord};

pub use groebner::{reduce, truncated_groebner, DEFAULT_BASIS_CAP};

/// Default clustering tolerance for extracted points.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// Separations in `[tol, AMBIGUITY_FACTOR * tol)` are treated as ambiguous.
pub const AMBIGUITY_FACTOR: f64 = 100.0;

/// `S / I(n, phi)` in the chart `a0 = 1`, with basis `{a^e : e_i <= d_i}`.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra<S> {
    spec: MonomialSpec,
    phi: PhiTuple<S>,
    basis: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
    /// `psi_i = phi_i(1, a1, ..., an)`, so that `a_i^(d_i+1) = psi_i` in the quotient.
    rules: Vec<SparsePoly<S>>,
    mult: Vec<DenseMatrix<S>>,
}

/// Memoized normal forms of monomials as dense coordinate vectors.
struct Reducer<'a, S> {
    exps: &'a [u32],
    index: &'a HashMap<Exponent, usize>,
    rules: &'a [SparsePoly<S>],
    memo: HashMap<Exponent, Vec<S>>,
}

impl<S: Scalar> Reducer<'_, S> {
    fn normal_form(&mut self, e: &Exponent) -> Vec<S> {
        let r = self.index.len();
        if let Some(&k) = self.index.get(e) {
            let mut v = vec![S::zero(); r];
            v[k] = S::one();
            return v;
        }
        if let Some(v) = self.memo.get(e) {
            return v.clone();
        }
        let i = (1..e.len()).find(|&i| e.0[i] > self.exps[i]).expect("non-standard monomial");
        let rest = e.div(&Exponent::unit(e.len(), i, self.exps[i] + 1));
        let mut out = vec![S::zero(); r];
        // deg psi_i < d_i + 1, so the recursion terminates
        for (f, c) in self.rules[i - 1].terms() {
            let sub = self.normal_form(&rest.mul(f));
            for (o, s) in out.iter_mut().zip(sub) {
                if !s.is_zero() {
                    *o = o.clone() + c.clone() * s;
                }
            }
        }
        self.memo.insert(e.clone(), out.clone());
        out
    }
}

fn standard_basis(spec: &MonomialSpec) -> Vec<Exponent> {
    let mut out = vec![Exponent::zero(spec.num_vars())];
    for i in 1..spec.num_vars() {
        out = out
            .into_iter()
            .flat_map(|b| {
                (0..=spec.exponents()[i]).map(move |k| {
                    let mut e = b.clone();
                    e.0[i] = k;
                    e
                })
            })
            .collect();
    }
    out.sort();
    out
}

fn matrices_commute<S: Scalar>(a: &DenseMatrix<S>, b: &DenseMatrix<S>) -> bool {
    let ab = a.mul(b);
    let ba = b.mul(a);
    if S::DOMAIN.is_exact() {
        return ab == ba;
    }
    let norm = (0..ab.nrows()).flat_map(|i| ab.row(i).iter().map(Scalar::magnitude)).fold(1.0, f64::max);
    (0..ab.nrows()).all(|i| {
        (0..ab.ncols()).all(|j| (ab.get(i, j).clone() - ba.get(i, j).clone()).magnitude() <= 1e-9 * norm)
    })
}

/// Builds the quotient by `I(n, phi)` and its multiplication matrices.
pub fn build_quotient<S: Scalar>(spec: &MonomialSpec, phi: &PhiTuple<S>) -> Result<QuotientAlgebra<S>> {
    if phi.len() != spec.n() {
        return Err(Error::IncompleteIdeal { k: phi.len(), n: spec.n() });
    }
    let basis = standard_basis(spec);
    let index: HashMap<Exponent, usize> = basis.iter().cloned().enumerate().map(|(k, e)| (e, k)).collect();
    let rules = phi.entries().iter().map(|p| p.dehomogenize(0)).collect::<Result<Vec<_>>>()?;
    let mut reducer = Reducer { exps: spec.exponents(), index: &index, rules: &rules, memo: HashMap::new() };
    let n = spec.num_vars();
    let mult: Vec<DenseMatrix<S>> = (1..n)
        .map(|i| {
            let cols = basis.iter().map(|b| reducer.normal_form(&b.mul(&Exponent::unit(n, i, 1)))).collect();
            DenseMatrix::from_columns(cols)
        })
        .collect();
    for (i, a) in mult.iter().enumerate() {
        for b in &mult[i + 1..] {
            if !matrices_commute(a, b) {
                return Err(Error::CommutationFailure);
            }
        }
    }
    Ok(QuotientAlgebra { spec: spec.clone(), phi: phi.clone(), basis, index, rules, mult })
}

impl<S: Scalar> QuotientAlgebra<S> {
    pub fn spec(&self) -> &MonomialSpec {
        &self.spec
    }

    pub fn phi(&self) -> &PhiTuple<S> {
        &self.phi
    }

    /// Standard monomials, each with `a0` exponent zero.
    pub fn basis(&self) -> &[Exponent] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Multiplication by `a_i`, `1 <= i <= n`; column `j` is the normal form of `a_i * b_j`.
    pub fn mult_matrix(&self, i: usize) -> &DenseMatrix<S> {
        &self.mult[i - 1]
    }

    pub fn mult_matrices(&self) -> &[DenseMatrix<S>] {
        &self.mult
    }

    /// Coordinates of the normal form of `a^e` (the `a0` entry is ignored).
    pub fn normal_form(&self, e: &Exponent) -> Vec<S> {
        let mut e = e.clone();
        e.0[0] = 0;
        let mut reducer = self.reducer();
        reducer.normal_form(&e)
    }

    fn reducer(&self) -> Reducer<'_, S> {
        Reducer { exps: self.spec.exponents(), index: &self.index, rules: &self.rules, memo: HashMap::new() }
    }

    /// Index of a standard monomial in the basis.
    pub fn basis_index(&self, e: &Exponent) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// The trace form `T_{jk} = trace(M_{b_j b_k})`.
    pub fn trace_form(&self) -> DenseMatrix<S> {
        let r = self.dim();
        let mut reducer = self.reducer();
        let products: Vec<Vec<Vec<S>>> = (0..r)
            .map(|j| (0..r).map(|k| reducer.normal_form(&self.basis[j].mul(&self.basis[k]))).collect())
            .collect();
        // trace of multiplication by b_l
        let traces: Vec<S> = (0..r)
            .map(|l| (0..r).fold(S::zero(), |acc, j| acc + products[l][j][j].clone()))
            .collect();
        let mut t = DenseMatrix::zeros(r, r);
        for j in 0..r {
            for k in j..r {
                let v = products[j][k]
                    .iter()
                    .zip(&traces)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
                t.set(j, k, v.clone());
                t.set(k, j, v);
            }
        }
        t
    }

    pub fn to_complex(&self) -> QuotientAlgebra<Complex64> {
        QuotientAlgebra {
            spec: self.spec.clone(),
            phi: self.phi.map_coeffs(Scalar::to_complex),
            basis: self.basis.clone(),
            index: self.index.clone(),
            rules: self.rules.iter().map(|p| p.map_coeffs(Scalar::to_complex)).collect(),
            mult: self.mult.iter().map(DenseMatrix::to_complex).collect(),
        }
    }
}

/// Exact rank of the trace form, the number of distinct points of `V(I)`.
pub fn trace_form_rank<S: LinearAlgebra>(q: &QuotientAlgebra<S>) -> Result<usize> {
    if !S::DOMAIN.is_exact() {
        return Err(Error::FloatDomainRefused);
    }
    Ok(S::rank(&q.trace_form(), 0.0))
}

/// Whether `I(n, phi)` is the ideal of `r` distinct reduced points.
pub fn is_radical<S: LinearAlgebra>(spec: &MonomialSpec, phi: &PhiTuple<S>) -> Result<bool> {
    if !S::DOMAIN.is_exact() {
        return Err(Error::FloatDomainRefused);
    }
    if phi.len() != spec.n() {
        return Err(Error::IncompleteIdeal { k: phi.len(), n: spec.n() });
    }
    // a_i^(d_i+1) in the ideal makes a_i a nonzero nilpotent
    if phi.has_zero_entry().is_some() {
        return Ok(false);
    }
    let q = build_quotient(spec, phi)?;
    Ok(trace_form_rank(&q)? == q.dim())
}

/// Decides `p` in `I(k, phi)` by a Groebner basis truncated at `deg p`.
pub fn ideal_membership<S: Scalar>(p: &SparsePoly<S>, ideal: &CIIdeal<S>) -> Result<bool> {
    ideal_membership_with_cap(p, ideal, DEFAULT_BASIS_CAP)
}

pub fn ideal_membership_with_cap<S: Scalar>(p: &SparsePoly<S>, ideal: &CIIdeal<S>, cap: usize) -> Result<bool> {
    if !S::DOMAIN.is_exact() {
        return Err(Error::FloatDomainRefused);
    }
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if p.num_vars() != ideal.spec.num_vars() {
        return Err(Error::VariableMismatch { expected: ideal.spec.num_vars(), found: p.num_vars() });
    }
    let Some(deg) = p.degree() else { return Ok(true) };
    let gb = truncated_groebner(&ideal.generators(), deg, cap)?;
    Ok(reduce(&p.clone().with_ring(Ring::Dual), &gb).is_zero())
}

/// Points in sorted coordinates `(a0, ..., an)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet<S> {
    pub points: Vec<Vec<S>>,
    /// Every point has `a0 = 1`.
    pub normalized: bool,
    pub multiplicity_free: bool,
    pub tol: f64,
    /// Per-point relative residual on the generators, when known.
    pub residuals: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSetRecord {
    pub points: Vec<Vec<ScalarRecord>>,
    pub normalized: String,
    pub multiplicity_free: bool,
    pub tol: f64,
    pub residuals: Vec<f64>,
}

impl<S: Scalar> PointSet<S> {
    /// Raw projective points, not normalized.
    pub fn from_raw(points: Vec<Vec<S>>) -> Self {
        let residuals = vec![0.0; points.len()];
        PointSet { points, normalized: false, multiplicity_free: true, tol: 0.0, residuals }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Divides every point by its `a0` coordinate.
    pub fn normalize(&self) -> Result<Self> {
        let points = self
            .points
            .iter()
            .map(|p| {
                let inv = p[0].inv().ok_or(Error::DivisionByZero)?;
                Ok(p.iter().map(|x| x.clone() * inv.clone()).collect())
            })
            .collect::<Result<Vec<Vec<S>>>>()?;
        Ok(PointSet { points, normalized: true, ..self.clone() })
    }

    pub fn to_complex(&self) -> PointSet<Complex64> {
        PointSet {
            points: self.points.iter().map(|p| p.iter().map(Scalar::to_complex).collect()).collect(),
            normalized: self.normalized,
            multiplicity_free: self.multiplicity_free,
            tol: self.tol,
            residuals: self.residuals.clone(),
        }
    }

    pub fn to_record(&self) -> PointSetRecord {
        PointSetRecord {
            points: self.points.iter().map(|p| p.iter().map(Scalar::to_record).collect()).collect(),
            normalized: if self.normalized { "alpha0=1".into() } else { "none".into() },
            multiplicity_free: self.multiplicity_free,
            tol: self.tol,
            residuals: self.residuals.clone(),
        }
    }

    pub fn from_record(record: &PointSetRecord) -> Result<Self> {
        let points = record
            .points
            .iter()
            .map(|p| p.iter().map(S::from_record).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let normalized = match record.normalized.as_str() {
            "alpha0=1" => true,
            "none" => false,
            other => return Err(Error::Parse(format!("unknown normalization {other:?}"))),
        };
        Ok(PointSet {
            points,
            normalized,
            multiplicity_free: record.multiplicity_free,
            tol: record.tol,
            residuals: record.residuals.clone(),
        })
    }
}

/// The points `(1, zeta_1^{a1}, ..., zeta_n^{an})` of the explicit decomposition.
pub fn explicit_points(spec: &MonomialSpec) -> PointSet<CycloScalar> {
    let points = explicit_forms_sorted(spec);
    let residuals = vec![0.0; points.len()];
    PointSet { points, normalized: true, multiplicity_free: true, tol: 0.0, residuals }
}

/// `|g(p)| / sum_terms |c p^e|` maximized over the generators.
pub fn relative_residual(gens: &[SparsePoly<Complex64>], p: &[Complex64]) -> f64 {
    gens.iter()
        .map(|g| {
            let mut value = Complex64::new(0.0, 0.0);
            let mut scale = 0.0;
            for (e, c) in g.terms() {
                let t = e.0.iter().zip(p).fold(*c, |acc, (k, x)| acc * x.powu(*k));
                value += t;
                scale += t.norm();
            }
            if scale == 0.0 { 0.0 } else { value.norm() / scale }
        })
        .fold(0.0, f64::max)
}

fn eval_with_gradient(p: &SparsePoly<Complex64>, x: &[Complex64]) -> (Complex64, Vec<Complex64>) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut grad = vec![Complex64::new(0.0, 0.0); x.len()];
    for (e, c) in p.terms() {
        value += e.0.iter().zip(x).fold(*c, |acc, (k, v)| acc * v.powu(*k));
        for j in 0..x.len() {
            if e.0[j] == 0 {
                continue;
            }
            let mut t = *c * f64::from(e.0[j]);
            for (l, (k, v)) in e.0.iter().zip(x).enumerate() {
                t *= v.powu(if l == j { k - 1 } else { *k });
            }
            grad[j] += t;
        }
    }
    (value, grad)
}

/// Newton iterations on `a_i^(d_i+1) - psi_i = 0` at `a0 = 1`.
fn polish(spec: &MonomialSpec, rules: &[SparsePoly<Complex64>], point: &mut [Complex64]) {
    let n = spec.n();
    let exps = spec.exponents();
    let system = |x: &[Complex64]| {
        let mut f = DVector::zeros(n);
        let mut jac = DMatrix::zeros(n, n);
        for i in 1..=n {
            let (v, g) = eval_with_gradient(&rules[i - 1], x);
            f[i - 1] = x[i].powu(exps[i] + 1) - v;
            for j in 1..=n {
                jac[(i - 1, j - 1)] = -g[j];
            }
            jac[(i - 1, i - 1)] += x[i].powu(exps[i]) * f64::from(exps[i] + 1);
        }
        (f, jac)
    };
    let (mut f, mut jac) = system(point);
    for _ in 0..50 {
        let Some(step) = jac.clone().lu().solve(&f) else { break };
        let candidate: Vec<Complex64> =
            point.iter().enumerate().map(|(j, x)| if j == 0 { *x } else { x - step[j - 1] }).collect();
        let (f2, jac2) = system(&candidate);
        if !(f2.norm() < f.norm()) && f.norm() > 0.0 {
            break;
        }
        let size = step.norm();
        point.copy_from_slice(&candidate);
        f = f2;
        jac = jac2;
        let scale = 1.0 + point.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if size <= 1e-15 * scale {
            break;
        }
    }
}

fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Points of `V(I(n, phi))` from the eigenvectors of a random combination of
/// the multiplication matrices, normalized to `a0 = 1`, polished and
/// deduplicated within `tol`.
pub fn extract_points<S: Scalar>(q: &QuotientAlgebra<S>, tol: f64, seed: u64) -> Result<PointSet<Complex64>> {
    let spec = q.spec();
    let n = spec.num_vars();
    let r = q.dim();
    let one = Complex64::new(1.0, 0.0);
    let qc = q.to_complex();
    let gens = crate::apolar_ideals::make_ci_ideal(spec, qc.phi.clone(), spec.n())
        .map(|ideal| ideal.generators())
        .unwrap_or_default();
    if spec.n() == 0 {
        return Ok(PointSet { points: vec![vec![one]], normalized: true, multiplicity_free: true, tol, residuals: vec![0.0] });
    }
    // A random complex shift keeps the eigenvectors but breaks the equal-modulus
    // spectra (roots of unity) on which shifted QR can stall.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempt = None;
    for _ in 0..8 {
        let mut m = DMatrix::<Complex64>::identity(r, r)
            * Complex64::new(rng.random_range(0.5..1.5), rng.random_range(0.5..1.5));
        for mi in qc.mult_matrices() {
            let c: f64 = rng.random_range(-1.0..1.0);
            m += to_nalgebra(mi) * Complex64::new(c, 0.0);
        }
        let mt = m.transpose();
        if let Some(eigenvalues) = mt.clone().try_schur(f64::EPSILON, 10_000).and_then(|s| s.eigenvalues()) {
            attempt = Some((mt, eigenvalues));
            break;
        }
    }
    let (mt, eigenvalues) = attempt.ok_or_else(|| Error::Eigen("Schur iteration did not converge".into()))?;
    let unit_index = q.basis_index(&Exponent::zero(n)).expect("1 is standard");
    let var_index: Vec<usize> = (1..n).map(|i| q.basis_index(&Exponent::unit(n, i, 1)).expect("a_i is standard")).collect();
    let mut candidates = Vec::with_capacity(r);
    for lambda in eigenvalues.iter() {
        let shifted = &mt - DMatrix::<Complex64>::identity(r, r) * *lambda;
        let v = min_singular_vector(&shifted);
        let vnorm = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if v[unit_index].norm() <= 1e-12 * vnorm {
            return Err(Error::Eigen("eigenvector with vanishing a0 coordinate".into()));
        }
        let mut point = vec![one];
        point.extend(var_index.iter().map(|&j| v[j] / v[unit_index]));
        polish(spec, &qc.rules, &mut point);
        candidates.push(point);
    }
    let mut kept: Vec<Vec<Complex64>> = Vec::new();
    for p in candidates {
        let nearest = kept.iter().map(|k| distance(k, &p)).fold(f64::INFINITY, f64::min);
        if nearest < tol {
            continue;
        }
        if nearest < AMBIGUITY_FACTOR * tol {
            return Err(Error::ClusteringAmbiguity { tol, separation: nearest });
        }
        kept.push(p);
    }
    let residuals = kept.iter().map(|p| relative_residual(&gens, p)).collect();
    Ok(PointSet { multiplicity_free: kept.len() == r, points: kept, normalized: true, tol, residuals })
}

/// Coefficients `c_j` with `sum_j c_j (p_j . x)^d = F` in sorted coordinates.
/// Exact domains solve exactly; floats use least squares and fail when the
/// residual exceeds `residual_tol`.
pub fn fit_coefficients<S: LinearAlgebra>(
    spec: &MonomialSpec,
    points: &PointSet<S>,
    residual_tol: f64,
) -> Result<Solution<S>> {
    let n = spec.num_vars();
    if let Some(bad) = points.points.iter().find(|p| p.len() != n) {
        return Err(Error::VariableMismatch { expected: n, found: bad.len() });
    }
    let target = Exponent(spec.exponents().to_vec());
    let monomials = Exponent::all_of_degree(n, spec.degree());
    let mut a = DenseMatrix::zeros(monomials.len(), points.len());
    let mut b = vec![S::zero(); monomials.len()];
    for (row, m) in monomials.iter().enumerate() {
        let coeff = S::from_rational(&BigRational::from_integer(multinomial(&m.0)));
        for (col, p) in points.points.iter().enumerate() {
            let v = m.0.iter().zip(p).fold(coeff.clone(), |acc, (k, x)| acc * x.pow(*k));
            a.set(row, col, v);
        }
        if *m == target {
            b[row] = S::one();
        }
    }
    S::solve_unique(&a, &b, DEFAULT_RANK_CUTOFF, residual_tol)
}
