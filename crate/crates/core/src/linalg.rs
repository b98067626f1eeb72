//! Dense matrices with two linear-algebra backends: exact Gaussian
//! elimination for the exact domains and SVD-based routines for complex
//! floats (routed through the real embedding).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact_arith::CycloScalar;
use crate::scalar::Scalar;

/// Relative singular-value cutoff used when none is given.
pub const DEFAULT_RANK_CUTOFF: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        DenseMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: Vec<Vec<S>>) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).clone() + a.clone() * b.clone();
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DenseMatrix<T> {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_complex(&self) -> DenseMatrix<Complex64> {
        self.map(Scalar::to_complex)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }
}

/// Unique solution of a linear system together with its residual
/// (max absolute entry of `A x - b`; exactly zero for exact domains).
#[derive(Clone, Debug)]
pub struct Solution<S> {
    pub values: Vec<S>,
    pub residual: f64,
}

/// Rank, kernel and unique-solve, implemented per coefficient domain.
///
/// `cutoff` is a relative singular-value threshold and is ignored by exact
/// domains.
pub trait LinearAlgebra: Scalar {
    fn rank(m: &DenseMatrix<Self>, cutoff: f64) -> usize;

    /// Basis of the right kernel `{x : m x = 0}`.
    fn kernel(m: &DenseMatrix<Self>, cutoff: f64) -> Vec<Vec<Self>>;

    /// Solves `a x = b`, requiring a unique solution. Numeric domains treat
    /// the system as inconsistent when the residual exceeds `residual_tol`.
    fn solve_unique(
        a: &DenseMatrix<Self>,
        b: &[Self],
        cutoff: f64,
        residual_tol: f64,
    ) -> Result<Solution<Self>>;
}

/// Reduced row echelon form; returns the pivot columns.
fn rref<S: Scalar>(m: &mut DenseMatrix<S>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, row * m.cols + j);
            }
        }
        let inv = m.get(row, col).inv().expect("nonzero pivot");
        for j in col..m.cols {
            let v = m.get(row, j).clone() * inv.clone();
            m.set(row, j, v);
        }
        for i in 0..m.rows {
            if i == row || m.get(i, col).is_zero() {
                continue;
            }
            let f = m.get(i, col).clone();
            for j in col..m.cols {
                let pj = m.get(row, j);
                if !pj.is_zero() {
                    let v = m.get(i, j).clone() - f.clone() * pj.clone();
                    m.set(i, j, v);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

fn exact_rank<S: Scalar>(m: &DenseMatrix<S>) -> usize {
    rref(&mut m.clone()).len()
}

fn exact_kernel<S: Scalar>(m: &DenseMatrix<S>) -> Vec<Vec<S>> {
    let mut r = m.clone();
    let pivots = rref(&mut r);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); m.cols];
            v[f] = S::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, f).clone();
            }
            v
        })
        .collect()
}

fn exact_solve<S: Scalar>(a: &DenseMatrix<S>, b: &[S]) -> Result<Solution<S>> {
    assert_eq!(a.rows, b.len());
    let mut aug = DenseMatrix::zeros(a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, a.cols, b[i].clone());
    }
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&a.cols) {
        return Err(Error::Inconsistent { residual: f64::INFINITY });
    }
    if pivots.len() < a.cols {
        return Err(Error::RankDeficient { rank: pivots.len(), unknowns: a.cols });
    }
    let values = (0..a.cols).map(|i| aug.get(i, a.cols).clone()).collect();
    Ok(Solution { values, residual: 0.0 })
}

impl LinearAlgebra for BigRational {
    fn rank(m: &DenseMatrix<Self>, _cutoff: f64) -> usize {
        exact_rank(m)
    }
    fn kernel(m: &DenseMatrix<Self>, _cutoff: f64) -> Vec<Vec<Self>> {
        exact_kernel(m)
    }
    fn solve_unique(a: &DenseMatrix<Self>, b: &[Self], _: f64, _: f64) -> Result<Solution<Self>> {
        exact_solve(a, b)
    }
}

impl LinearAlgebra for CycloScalar {
    fn rank(m: &DenseMatrix<Self>, _cutoff: f64) -> usize {
        exact_rank(m)
    }
    fn kernel(m: &DenseMatrix<Self>, _cutoff: f64) -> Vec<Vec<Self>> {
        exact_kernel(m)
    }
    fn solve_unique(a: &DenseMatrix<Self>, b: &[Self], _: f64, _: f64) -> Result<Solution<Self>> {
        exact_solve(a, b)
    }
}

pub(crate) fn to_nalgebra(m: &DenseMatrix<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.rows, m.cols, &m.data)
}

/// Scales rows and then columns to unit 2-norm, twice. Rank and kernel
/// dimension are unchanged; conditioning of badly scaled matrices improves.
pub fn equilibrate(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut a = m.clone();
    for _ in 0..2 {
        for mut row in a.row_iter_mut() {
            let norm = row.norm();
            if norm > 0.0 {
                row /= Complex64::new(norm, 0.0);
            }
        }
        for mut col in a.column_iter_mut() {
            let norm = col.norm();
            if norm > 0.0 {
                col /= Complex64::new(norm, 0.0);
            }
        }
    }
    a
}

/// The real matrix `[[Re, -Im], [Im, Re]]`. nalgebra's complex SVD loses
/// accuracy on clustered singular values; the real one does not.
fn real_embedding(a: &DMatrix<Complex64>) -> DMatrix<f64> {
    let (m, n) = a.shape();
    DMatrix::from_fn(2 * m, 2 * n, |i, j| {
        let z = a[(i % m, j % n)];
        match (i < m, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Singular values of a complex matrix, descending. Each one appears twice
/// in the real embedding.
pub fn singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
    let mut sv: Vec<f64> = real_embedding(a).svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv.into_iter().step_by(2).collect()
}

/// Right singular vectors of the embedding, sorted by ascending singular
/// value, folded back to complex vectors.
fn right_vectors_ascending(a: &DMatrix<Complex64>) -> Vec<(f64, Vec<Complex64>)> {
    let n = a.ncols();
    let mut e = real_embedding(a);
    if e.nrows() < 2 * n {
        e = e.resize_vertically(2 * n, 0.0);
    }
    let svd = e.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let mut out: Vec<(f64, Vec<Complex64>)> = (0..2 * n)
        .map(|k| (svd.singular_values[k], (0..n).map(|j| Complex64::new(v_t[(k, j)], v_t[(k, j + n)])).collect()))
        .collect();
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out
}

/// Unit vector minimizing `|a v|`.
pub fn min_singular_vector(a: &DMatrix<Complex64>) -> Vec<Complex64> {
    let v = right_vectors_ascending(a).swap_remove(0).1;
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Numeric rank of the equilibrated matrix: singular values below
/// `cutoff * sigma_max` count as zero.
pub fn numeric_rank(m: &DMatrix<Complex64>, cutoff: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = singular_values(&equilibrate(m));
    let max = sv.first().copied().unwrap_or(0.0);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > cutoff * max).count()
}

impl LinearAlgebra for Complex64 {
    fn rank(m: &DenseMatrix<Self>, cutoff: f64) -> usize {
        numeric_rank(&to_nalgebra(m), cutoff)
    }

    fn kernel(m: &DenseMatrix<Self>, cutoff: f64) -> Vec<Vec<Self>> {
        let cols = m.cols;
        if m.rows == 0 {
            return (0..cols)
                .map(|j| (0..cols).map(|i| Complex64::new(f64::from(u8::from(i == j)), 0.0)).collect())
                .collect();
        }
        let vectors = right_vectors_ascending(&to_nalgebra(m));
        let max = vectors.last().map_or(0.0, |v| v.0);
        // the real kernel has twice the complex dimension; v and i*v both
        // appear, so orthonormalize over C and keep the independent half
        let mut basis: Vec<Vec<Complex64>> = Vec::new();
        for (s, v) in vectors {
            if max > 0.0 && s > cutoff * max {
                break;
            }
            let mut w = v;
            for b in &basis {
                let dot: Complex64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= dot * bi;
                }
            }
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.5 {
                basis.push(w.into_iter().map(|z| z / norm).collect());
            }
        }
        basis
    }

    fn solve_unique(
        a: &DenseMatrix<Self>,
        b: &[Self],
        cutoff: f64,
        residual_tol: f64,
    ) -> Result<Solution<Self>> {
        let am = to_nalgebra(a);
        let rank = numeric_rank(&am, cutoff);
        if rank < a.cols {
            return Err(Error::RankDeficient { rank, unknowns: a.cols });
        }
        let n = a.cols;
        let bv = DVector::from_column_slice(b);
        // solve with unit-norm columns, then undo the scaling
        let scales: Vec<f64> = am.column_iter().map(|c| if c.norm() > 0.0 { c.norm() } else { 1.0 }).collect();
        let mut scaled = am.clone();
        for (mut col, s) in scaled.column_iter_mut().zip(&scales) {
            col /= Complex64::new(*s, 0.0);
        }
        let rb = DVector::from_iterator(2 * b.len(), b.iter().map(|z| z.re).chain(b.iter().map(|z| z.im)));
        let svd = real_embedding(&scaled).svd(true, true);
        let max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let y = svd.solve(&rb, cutoff * max).map_err(|e| Error::Eigen(e.to_string()))?;
        let x = DVector::from_iterator(n, (0..n).map(|j| Complex64::new(y[j], y[j + n]) / scales[j]));
        let residual = (&am * &x - &bv).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if residual > residual_tol {
            return Err(Error::Inconsistent { residual });
        }
        Ok(Solution { values: x.iter().copied().collect(), residual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::root_of_unity;

    fn q(v: i64) -> BigRational {
        BigRational::from_i64(v)
    }

    #[test]
    fn exact_rank_kernel_solve() {
        let m = DenseMatrix::from_rows(vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(1), q(0), q(1)],
        ]);
        assert_eq!(BigRational::rank(&m, 0.0), 2);
        let ker = BigRational::kernel(&m, 0.0);
        assert_eq!(ker.len(), 1);
        assert!(m.mul_vec(&ker[0]).iter().all(Scalar::is_zero));

        let a = DenseMatrix::from_rows(vec![vec![q(1), q(1)], vec![q(1), q(-1)], vec![q(2), q(0)]]);
        let sol = BigRational::solve_unique(&a, &[q(3), q(1), q(4)], 0.0, 0.0).unwrap();
        assert_eq!(sol.values, vec![q(2), q(1)]);
        assert!(matches!(
            BigRational::solve_unique(&a, &[q(3), q(1), q(5)], 0.0, 0.0),
            Err(Error::Inconsistent { .. })
        ));
        assert!(matches!(
            BigRational::solve_unique(&m, &[q(0), q(0), q(0)], 0.0, 0.0),
            Err(Error::RankDeficient { rank: 2, unknowns: 3 })
        ));
    }

    #[test]
    fn cyclotomic_vandermonde_is_invertible() {
        let w = root_of_unity(3, 1);
        let rows = (0..3)
            .map(|i| (0..3).map(|j| Scalar::pow(&w, (i * j) as u32)).collect())
            .collect();
        let m = DenseMatrix::from_rows(rows);
        assert_eq!(CycloScalar::rank(&m, 0.0), 3);
    }

    #[test]
    fn numeric_backend_matches_exact() {
        let m = DenseMatrix::from_rows(vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(1), q(0), q(1)],
        ]);
        let c = m.to_complex();
        assert_eq!(Complex64::rank(&c, 1e-10), 2);
        let ker = Complex64::kernel(&c, 1e-10);
        assert_eq!(ker.len(), 1);
        assert!(c.mul_vec(&ker[0]).iter().all(|x| x.norm() < 1e-12));
        let a = DenseMatrix::from_rows(vec![vec![q(1), q(1)], vec![q(1), q(-1)], vec![q(2), q(0)]])
            .to_complex();
        let b: Vec<Complex64> = [3, 1, 4].iter().map(|&v| Complex64::new(v as f64, 0.0)).collect();
        let sol = Complex64::solve_unique(&a, &b, 1e-10, 1e-9).unwrap();
        assert!((sol.values[0] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }
}
