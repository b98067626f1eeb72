//! Exploring the space of decompositions: sampling tuples `phi`, turning them
//! into decompositions and back, point-ideal Hilbert functions, the `q_t`
//! counts, and torus normalization when all exponents agree.

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apolar_ideals::{basis_bprime, PhiTuple};
use crate::error::{Error, Result};
use crate::exact_arith::dim_graded_piece;
use crate::linalg::{DenseMatrix, LinearAlgebra, DEFAULT_RANK_CUTOFF};
use crate::monomial_waring::{
    verify_decomposition, waring_rank, Decomposition, MonomialSpec, Summand, VerificationReport, Verified,
};
use crate::polynomial::{Exponent, LinearForm, Ring, SparsePoly, TermRecord};
use crate::quotient_solver::{
    build_quotient, explicit_points, extract_points, fit_coefficients, is_radical, PointSet, DEFAULT_CLUSTER_TOL,
};
use crate::scalar::{Scalar, ScalarRecord};

/// Seed of the random combination used when extracting points for a decomposition.
pub const EXTRACTION_SEED: u64 = 0x5eed;

/// Residual tolerance for the numeric linear fits.
pub const DEFAULT_FIT_TOL: f64 = 1e-6;

/// The tuples `phi` with no term in `J`: `phi_i` ranges over the span of `B'_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct VSPParameterSpace {
    pub spec: MonomialSpec,
    pub bases: Vec<Vec<Exponent>>,
}

impl VSPParameterSpace {
    pub fn new(spec: &MonomialSpec) -> Self {
        let bases = (1..=spec.n()).map(|i| basis_bprime(spec, i).expect("index in range")).collect();
        VSPParameterSpace { spec: spec.clone(), bases }
    }

    pub fn dimension(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }
}

/// A canonical tuple whose coefficients on `B'_i` are drawn uniformly from
/// `{-9, ..., 9} \ {0}`; deterministic per seed.
pub fn sample_phi(space: &VSPParameterSpace, seed: u64) -> PhiTuple<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = space.spec.num_vars();
    let entries = space
        .bases
        .iter()
        .map(|basis| {
            SparsePoly::from_terms(
                n,
                Ring::Dual,
                basis.iter().map(|e| {
                    let magnitude: i64 = rng.random_range(1..=9);
                    let value = if rng.random_bool(0.5) { -magnitude } else { magnitude };
                    (e.clone(), BigRational::from_integer(value.into()))
                }),
            )
        })
        .collect();
    PhiTuple::new(&space.spec, entries).expect("sampled degrees match")
}

/// Points, fitted coefficients and numeric verification for a radical `phi`.
pub fn decompose_from_phi_report<S: LinearAlgebra>(
    spec: &MonomialSpec,
    phi: &PhiTuple<S>,
    tol: f64,
) -> Result<(Decomposition<Complex64>, VerificationReport)> {
    if !is_radical(spec, phi)? {
        return Err(Error::NotRadical);
    }
    let q = build_quotient(spec, phi)?;
    let points = extract_points(&q, DEFAULT_CLUSTER_TOL, EXTRACTION_SEED)?;
    let r = waring_rank(spec) as usize;
    if points.len() != r {
        return Err(Error::PointCount { expected: r, found: points.len() });
    }
    let fit = fit_coefficients(spec, &points, tol).map_err(|e| match e {
        Error::Inconsistent { residual } => Error::VerificationFailed { residual, tol },
        other => other,
    })?;
    let summands = points
        .points
        .iter()
        .zip(fit.values)
        .map(|(p, coeff)| Summand { coeff, form: LinearForm::new(spec.to_original_order(p)) })
        .collect();
    let mut dec = Decomposition { degree: spec.degree(), summands, verified: Verified::Unverified };
    let report = verify_decomposition(spec, &dec, tol)?;
    if !report.passed {
        return Err(Error::VerificationFailed { residual: report.max_abs_error, tol });
    }
    dec.verified = Verified::Numeric { tolerance: tol };
    Ok((dec, report))
}

/// The decomposition whose points are `V(I(n, phi))`.
pub fn decompose_from_phi<S: LinearAlgebra>(
    spec: &MonomialSpec,
    phi: &PhiTuple<S>,
    tol: f64,
) -> Result<Decomposition<Complex64>> {
    decompose_from_phi_report(spec, phi, tol).map(|(dec, _)| dec)
}

/// Recovers the canonical `phi` from a decomposition's points by solving, for
/// each `i`, `a_i^(d_i+1) = phi_i * a0^(d0+1)` at every point with `phi_i` in
/// the span of `B'_i`.
pub fn fit_phi_from_points<S: LinearAlgebra>(
    spec: &MonomialSpec,
    points: &PointSet<S>,
    residual_tol: f64,
) -> Result<PhiTuple<S>> {
    let r = waring_rank(spec) as usize;
    if points.len() != r {
        return Err(Error::PointCount { expected: r, found: points.len() });
    }
    let points = if points.normalized { points.clone() } else { points.normalize()? };
    let n = spec.num_vars();
    let d = spec.exponents();
    let space = VSPParameterSpace::new(spec);
    let mut entries = Vec::with_capacity(spec.n());
    for (idx, basis) in space.bases.iter().enumerate() {
        let i = idx + 1;
        let mut a = DenseMatrix::zeros(r, basis.len());
        let mut b = Vec::with_capacity(r);
        for (row, p) in points.points.iter().enumerate() {
            let a0 = p[0].pow(d[0] + 1);
            for (col, e) in basis.iter().enumerate() {
                let v = e.0.iter().zip(p).fold(a0.clone(), |acc, (k, x)| acc * x.pow(*k));
                a.set(row, col, v);
            }
            b.push(p[i].pow(d[i] + 1));
        }
        let sol = S::solve_unique(&a, &b, DEFAULT_RANK_CUTOFF, residual_tol)?;
        entries.push(SparsePoly::from_terms(n, Ring::Dual, basis.iter().cloned().zip(sol.values)));
    }
    PhiTuple::new(spec, entries)
}

/// Rows are points, columns the monomials.
pub fn evaluation_matrix<S: Scalar>(points: &PointSet<S>, monomials: &[Exponent]) -> DenseMatrix<S> {
    let mut m = DenseMatrix::zeros(points.len(), monomials.len());
    for (row, p) in points.points.iter().enumerate() {
        for (col, e) in monomials.iter().enumerate() {
            let v = e.0.iter().zip(p).fold(S::one(), |acc, (k, x)| acc * x.pow(*k));
            m.set(row, col, v);
        }
    }
    m
}

fn num_vars_of<S>(points: &PointSet<S>) -> usize {
    points.points.first().map_or(0, Vec::len)
}

/// `dim (S/I)_t` for the ideal `I` of the points.
pub fn point_ideal_hilbert<S: LinearAlgebra>(points: &PointSet<S>, t: i64) -> usize {
    point_ideal_hilbert_with(points, t, DEFAULT_RANK_CUTOFF)
}

pub fn point_ideal_hilbert_with<S: LinearAlgebra>(points: &PointSet<S>, t: i64, cutoff: f64) -> usize {
    if t < 0 || points.is_empty() {
        return 0;
    }
    let monomials = Exponent::all_of_degree(num_vars_of(points), t as u32);
    S::rank(&evaluation_matrix(points, &monomials), cutoff)
}

/// `dim I_t = dim S_t - dim (S/I)_t`.
pub fn dim_ideal_t<S: LinearAlgebra>(points: &PointSet<S>, t: i64, cutoff: f64) -> usize {
    if t < 0 {
        return 0;
    }
    dim_graded_piece(num_vars_of(points), t) as usize - point_ideal_hilbert_with(points, t, cutoff)
}

/// `q_t = dim (I_t intersected with a0 * S_{t-1})`: the forms vanishing on the
/// points whose support consists of multiples of `a0`.
pub fn q_t_diagnostic<S: LinearAlgebra>(
    spec: &MonomialSpec,
    points: &PointSet<S>,
    t: i64,
    cutoff: f64,
) -> Result<usize> {
    let n = num_vars_of(points);
    if n != spec.num_vars() {
        return Err(Error::VariableMismatch { expected: spec.num_vars(), found: n });
    }
    if t <= 0 {
        return Ok(0);
    }
    let multiples: Vec<Exponent> =
        Exponent::all_of_degree(n, t as u32).into_iter().filter(|e| e.0[0] >= 1).collect();
    let m = evaluation_matrix(points, &multiples);
    Ok(multiples.len() - S::rank(&m, cutoff))
}

/// `(lambda_0, ..., lambda_n)` acting by `x_i -> lambda_i x_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusElement {
    pub lambda: Vec<Complex64>,
}

impl TorusElement {
    pub fn to_records(&self) -> Vec<ScalarRecord> {
        self.lambda.iter().map(Scalar::to_record).collect()
    }

    /// `|prod lambda_i^{d_i} - 1|`; zero for elements fixing `F`.
    pub fn product_defect(&self, spec: &MonomialSpec) -> f64 {
        let prod = self.lambda.iter().zip(spec.exponents()).fold(Complex64::new(1.0, 0.0), |acc, (l, d)| acc * l.powu(*d));
        (prod - 1.0).norm()
    }

    /// Maps every point `p` to `(lambda_i p_i)` and renormalizes `a0 = 1`.
    pub fn apply(&self, points: &PointSet<Complex64>) -> Result<PointSet<Complex64>> {
        let moved = points
            .points
            .iter()
            .map(|p| {
                if p.len() != self.lambda.len() {
                    return Err(Error::VariableMismatch { expected: self.lambda.len(), found: p.len() });
                }
                Ok(p.iter().zip(&self.lambda).map(|(x, l)| x * l).collect())
            })
            .collect::<Result<Vec<Vec<Complex64>>>>()?;
        PointSet { points: moved, normalized: false, ..points.clone() }.normalize()
    }
}

/// For equal exponents `k` and scalars `phi_i = c_i`, the torus element
/// taking `V(I(n, phi))` to `V(a_i^(k+1) - a0^(k+1))`, and the all-ones tuple.
///
/// With `rho_i = c_i^(-1/(k+1))` the element is `mu * (1, rho_1, ..., rho_n)`,
/// where the principal root `mu` makes `prod lambda_i^k = 1`.
pub fn torus_normalize<S: Scalar>(
    spec: &MonomialSpec,
    phi: &PhiTuple<S>,
) -> Result<(TorusElement, PhiTuple<BigRational>)> {
    if !spec.has_equal_exponents() {
        return Err(Error::UnequalExponents);
    }
    if phi.len() != spec.n() {
        return Err(Error::IncompleteIdeal { k: phi.len(), n: spec.n() });
    }
    if let Some(i) = phi.has_zero_entry() {
        return Err(Error::ZeroPhi(i));
    }
    let k = f64::from(spec.d0());
    let n = spec.num_vars();
    let rho: Vec<Complex64> = phi
        .entries()
        .iter()
        .map(|p| p.coeff(&Exponent::zero(n)).to_complex().powf(-1.0 / (k + 1.0)))
        .collect();
    let prod = rho.iter().fold(Complex64::new(1.0, 0.0), |acc, r| acc * r.powf(k));
    let mu = prod.inv().powf(1.0 / (n as f64 * k));
    let mut lambda = vec![mu];
    lambda.extend(rho.iter().map(|r| mu * r));
    let ones = if spec.n() == 0 {
        PhiTuple::new(spec, Vec::new())?
    } else {
        PhiTuple::scalars(spec, vec![BigRational::from_integer(1.into()); spec.n()])?
    };
    Ok((TorusElement { lambda }, ones))
}

/// `V(a_i^(k+1) - a0^(k+1))`: all `(1, w^{a_1}, ..., w^{a_n})`, `w = e^{2 pi i/(k+1)}`.
pub fn canonical_points(spec: &MonomialSpec) -> Result<PointSet<Complex64>> {
    if !spec.has_equal_exponents() {
        return Err(Error::UnequalExponents);
    }
    Ok(explicit_points(spec).to_complex())
}

/// Largest distance of a nearest-point bijection between two point sets, or
/// `None` when no bijection within `tol` exists.
pub fn match_point_sets(a: &PointSet<Complex64>, b: &PointSet<Complex64>, tol: f64) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for p in &a.points {
        let (j, dist) = b
            .points
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, q)| (j, p.iter().zip(q).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()))
            .min_by(|x, y| x.1.total_cmp(&y.1))?;
        if dist > tol {
            return None;
        }
        used[j] = true;
        worst = worst.max(dist);
    }
    Some(worst)
}

/// Whether every point has a nonzero `a0` coordinate: exactly for exact
/// domains, `|a0| > tol * |p|` for floats.
pub fn check_alpha0_nonzero<S: Scalar>(points: &PointSet<S>, tol: f64) -> bool {
    points.points.iter().all(|p| {
        if S::DOMAIN.is_exact() {
            !p[0].is_zero()
        } else {
            let norm = p.iter().map(|x| x.magnitude().powi(2)).sum::<f64>().sqrt();
            p[0].magnitude() > tol * norm
        }
    })
}

/// True when no two of the point sets coincide within `tol`.
pub fn distinct_point_sets(sets: &[PointSet<Complex64>], tol: f64) -> bool {
    sets.iter()
        .enumerate()
        .all(|(i, a)| sets[i + 1..].iter().all(|b| match_point_sets(a, b, tol).is_none()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub seed: u64,
    pub phi: Vec<Vec<TermRecord>>,
    pub radical: bool,
    pub verified: bool,
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub spec: MonomialSpec,
    pub samples: Vec<SampleRecord>,
    pub radical_fraction: f64,
}

/// Samples seeds `seed, ..., seed + count - 1` in parallel; the report is
/// independent of scheduling.
pub fn sample_batch(spec: &MonomialSpec, seed: u64, count: u64, tol: f64) -> Result<BatchReport> {
    let space = VSPParameterSpace::new(spec);
    let samples = (seed..seed + count)
        .into_par_iter()
        .map(|s| {
            let phi = sample_phi(&space, s);
            let radical = is_radical(spec, &phi)?;
            let (verified, residual) = if radical {
                match decompose_from_phi_report(spec, &phi, tol) {
                    Ok((_, report)) => (true, Some(report.max_abs_error)),
                    Err(Error::VerificationFailed { residual, .. }) => (false, Some(residual)),
                    Err(_) => (false, None),
                }
            } else {
                (false, None)
            };
            Ok(SampleRecord { seed: s, phi: phi.to_records(), radical, verified, residual })
        })
        .collect::<Result<Vec<_>>>()?;
    let radical = samples.iter().filter(|s| s.radical).count();
    let radical_fraction = if samples.is_empty() { 0.0 } else { radical as f64 / samples.len() as f64 };
    Ok(BatchReport { spec: spec.clone(), samples, radical_fraction })
}
