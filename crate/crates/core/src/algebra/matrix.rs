//! Dense complex matrices and the Hermitian subtype.

use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use super::scalar::{abs_f64, conj, cplx_one, cplx_zero, real, Cplx, Real};
use crate::error::{Error, Result};

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<R: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Cplx<R>>,
}

impl<R: Real> Mat<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![cplx_zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, cplx_one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cplx<R>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_real_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        Self::from_fn(rows, cols, |i, j| real(f(i, j)))
    }

    /// Real matrix from integer rows.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        Self::from_real_fn(n, m, |i, j| R::from_i64(rows[i][j]))
    }

    pub fn diag(entries: &[R]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { real(entries[i].clone()) } else { cplx_zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cplx<R> {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cplx<R>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Cplx<R>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| conj(self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Mat<R>) -> Mat<R> {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &Cplx<R>) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.clone() * s.clone()).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(abs_f64).fold(0.0, f64::max)
    }

    /// Largest `|m_ij − conj(m_ji)|`; zero for Hermitian matrices.
    pub fn hermitian_defect(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let mut defect = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = self.get(i, j).clone() - conj(self.get(j, i));
                defect = defect.max(abs_f64(&d));
            }
        }
        defect
    }

    /// `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = real(R::from_ratio(1, 2));
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j).clone() + conj(self.get(j, i))) * half.clone()
        })
    }

    pub fn map<S: Real>(&self, f: impl Fn(&R) -> S) -> Mat<S> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| Cplx::new(f(&z.re), f(&z.im))).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Mat<R>) -> Mat<R> {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, c, |i, j| {
            self.get(i / other.rows, j / other.cols).clone() * other.get(i % other.rows, j % other.cols).clone()
        })
    }
}

impl<R: Real> Add for &Mat<R> {
    type Output = Mat<R>;
    fn add(self, rhs: &Mat<R>) -> Mat<R> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<R: Real> Sub for &Mat<R> {
    type Output = Mat<R>;
    fn sub(self, rhs: &Mat<R>) -> Mat<R> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

/// A `d×d` complex Hermitian matrix.
///
/// Exact-backend values are Hermitian exactly. Approx-backend values are
/// accepted when the symmetry defect is at most `1e-12·maxAbsEntry` and are
/// then stored symmetrized.
#[derive(Clone, Debug, PartialEq)]
pub struct HermMatrix<R: Real> {
    mat: Mat<R>,
}

impl<R: Real> HermMatrix<R> {
    pub fn new(mat: Mat<R>) -> Result<Self> {
        if mat.rows != mat.cols {
            return Err(Error::DimensionMismatch { expected: mat.rows, found: mat.cols });
        }
        let defect = mat.hermitian_defect();
        let tolerance = R::SYMMETRY_TOL * mat.max_abs();
        if R::EXACT {
            // exact backend: any defect at all is a violation
            let exact_ok = (0..mat.rows).all(|i| (i..mat.cols).all(|j| *mat.get(i, j) == conj(mat.get(j, i))));
            if !exact_ok {
                return Err(Error::NotHermitian { defect, tolerance: 0.0 });
            }
            return Ok(HermMatrix { mat });
        }
        if !(defect <= tolerance) {
            return Err(Error::NotHermitian { defect, tolerance });
        }
        Ok(HermMatrix { mat: mat.hermitian_part() })
    }

    /// Hermitian part of `mat`, for results that are Hermitian in exact
    /// arithmetic but may carry rounding noise.
    pub fn from_hermitian_part(mat: &Mat<R>) -> Self {
        assert_eq!(mat.rows, mat.cols, "square matrix required");
        HermMatrix { mat: mat.hermitian_part() }
    }

    pub fn zeros(dim: usize) -> Self {
        HermMatrix { mat: Mat::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        HermMatrix { mat: Mat::identity(dim) }
    }

    pub fn diag(entries: &[R]) -> Self {
        HermMatrix { mat: Mat::diag(entries) }
    }

    /// Real symmetric matrix from integer rows.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(Mat::from_int_rows(rows))
    }

    /// Rank-one projector-like matrix `v v*`.
    pub fn outer(v: &[Cplx<R>]) -> Self {
        let n = v.len();
        HermMatrix { mat: Mat::from_fn(n, n, |i, j| v[i].clone() * conj(&v[j])) }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Cplx<R> {
        self.mat.get(i, j)
    }

    pub fn as_mat(&self) -> &Mat<R> {
        &self.mat
    }

    pub fn into_mat(self) -> Mat<R> {
        self.mat
    }

    pub fn is_zero(&self) -> bool {
        self.mat.data.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.max_abs()
    }

    pub fn scale(&self, s: &R) -> Self {
        HermMatrix { mat: self.mat.scale(&real(s.clone())) }
    }

    /// `Re tr(self · other)`, the real inner product on Hermitian matrices.
    pub fn trace_inner(&self, other: &HermMatrix<R>) -> R {
        let d = self.dim();
        let mut acc = R::zero();
        for i in 0..d {
            for j in 0..d {
                let p = self.get(i, j).clone() * other.get(j, i).clone();
                acc = acc + p.re;
            }
        }
        acc
    }

    pub fn trace(&self) -> R {
        (0..self.dim()).fold(R::zero(), |acc, i| acc + self.get(i, i).re.clone())
    }

    /// `⟨M v, v⟩ = v* M v`, which is real for Hermitian `M`.
    pub fn quad_form(&self, v: &[Cplx<R>]) -> R {
        let d = self.dim();
        assert_eq!(v.len(), d, "vector length mismatch");
        let mut acc = cplx_zero::<R>();
        for i in 0..d {
            if v[i].is_zero() {
                continue;
            }
            let mut row = cplx_zero::<R>();
            for j in 0..d {
                row = row + self.get(i, j).clone() * v[j].clone();
            }
            acc = acc + conj(&v[i]) * row;
        }
        acc.re
    }

    /// Symmetric real matrix `[[X, −Y], [Y, X]]` of size `2d` for `M = X + iY`.
    ///
    /// The real vector `(u, s)` has the same quadratic form as `u + i s`.
    pub fn real_embedding(&self) -> Vec<Vec<R>> {
        let d = self.dim();
        let mut out = vec![vec![R::zero(); 2 * d]; 2 * d];
        for i in 0..d {
            for j in 0..d {
                let z = self.get(i, j);
                out[i][j] = z.re.clone();
                out[i + d][j + d] = z.re.clone();
                out[i][j + d] = -z.im.clone();
                out[i + d][j] = z.im.clone();
            }
        }
        out
    }

    /// Congruence `S M S*`.
    pub fn congruence(&self, s: &Mat<R>) -> HermMatrix<R> {
        HermMatrix::from_hermitian_part(&s.mul(&self.mat).mul(&s.adjoint()))
    }

    pub fn map<S: Real>(&self, f: impl Fn(&R) -> S) -> HermMatrix<S> {
        HermMatrix { mat: self.mat.map(f) }
    }

    /// Direct sum of square blocks arranged as a block matrix. `blocks[a][b]`
    /// must equal `blocks[b][a]*`.
    pub fn from_blocks(blocks: &[Vec<HermMatrix<R>>]) -> Self {
        let nb = blocks.len();
        let d = blocks.first().map_or(0, |row| row.first().map_or(0, HermMatrix::dim));
        let mut mat = Mat::zeros(nb * d, nb * d);
        for (a, row) in blocks.iter().enumerate() {
            for (b, blk) in row.iter().enumerate() {
                for i in 0..d {
                    for j in 0..d {
                        mat.set(a * d + i, b * d + j, blk.get(i, j).clone());
                    }
                }
            }
        }
        HermMatrix { mat }
    }
}

impl<R: Real> Add for &HermMatrix<R> {
    type Output = HermMatrix<R>;
    fn add(self, rhs: &HermMatrix<R>) -> HermMatrix<R> {
        HermMatrix { mat: &self.mat + &rhs.mat }
    }
}

impl<R: Real> Sub for &HermMatrix<R> {
    type Output = HermMatrix<R>;
    fn sub(self, rhs: &HermMatrix<R>) -> HermMatrix<R> {
        HermMatrix { mat: &self.mat - &rhs.mat }
    }
}

impl<R: Real> Neg for &HermMatrix<R> {
    type Output = HermMatrix<R>;
    fn neg(self) -> HermMatrix<R> {
        self.scale(&-R::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn rejects_non_hermitian() {
        let m = Mat::<Q>::from_int_rows(&[vec![1, 2], vec![3, 1]]);
        assert!(matches!(HermMatrix::new(m), Err(Error::NotHermitian { .. })));
        let m = Mat::<f64>::from_int_rows(&[vec![1, 2], vec![3, 1]]);
        assert!(matches!(HermMatrix::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn approx_accepts_rounding_noise() {
        let mut m = Mat::<f64>::from_int_rows(&[vec![1, 2], vec![2, 1]]);
        m.set(0, 1, Cplx::new(2.0 + 1e-15, 0.0));
        let h = HermMatrix::new(m).unwrap();
        assert_eq!(h.get(0, 1), h.get(1, 0));
    }

    #[test]
    fn quad_form_matches_embedding() {
        let mut m = Mat::<Q>::zeros(2, 2);
        m.set(0, 0, real(Q::from_i64(2)));
        m.set(1, 1, real(Q::from_i64(3)));
        m.set(0, 1, Cplx::new(Q::from_i64(1), Q::from_i64(-1)));
        m.set(1, 0, Cplx::new(Q::from_i64(1), Q::from_i64(1)));
        let h = HermMatrix::new(m).unwrap();
        let v = vec![Cplx::new(Q::from_i64(1), Q::from_i64(2)), Cplx::new(Q::from_i64(-1), Q::from_i64(1))];
        let emb = h.real_embedding();
        let w: Vec<Q> = v.iter().map(|z| z.re.clone()).chain(v.iter().map(|z| z.im.clone())).collect();
        let mut acc = Q::from_i64(0);
        for i in 0..4 {
            for j in 0..4 {
                acc += w[i].clone() * emb[i][j].clone() * w[j].clone();
            }
        }
        assert_eq!(acc, h.quad_form(&v));
    }
}
