//! Linear maps on `d×d` matrices encoded by their Choi matrix
//! `C = Σ_{jk} E_jk ⊗ Φ(E_jk)`.

use crate::algebra::psd::scaled_tolerance;
use crate::algebra::scalar::{cplx_one, cplx_zero, real};
use crate::algebra::{HermMatrix, Mat, Real, DEFAULT_PSD_TOL};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMap<R: Real> {
    dim: usize,
    choi: HermMatrix<R>,
}

fn unit<R: Real>(d: usize, j: usize, k: usize) -> Mat<R> {
    let mut e = Mat::zeros(d, d);
    e.set(j, k, cplx_one());
    e
}

impl<R: Real> ChoiMap<R> {
    /// Wraps a Hermitian `d²×d²` Choi matrix.
    pub fn from_choi(dim: usize, choi: HermMatrix<R>) -> Result<Self> {
        if choi.dim() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: choi.dim() });
        }
        Ok(ChoiMap { dim, choi })
    }

    /// Choi matrix of a complex-linear map given on all `d×d` matrices.
    /// Fails unless the map preserves Hermiticity.
    pub fn from_fn(dim: usize, f: impl Fn(&Mat<R>) -> Mat<R>) -> Result<Self> {
        let n = dim * dim;
        let mut c = Mat::zeros(n, n);
        for j in 0..dim {
            for k in 0..dim {
                let img = f(&unit(dim, j, k));
                if img.rows() != dim || img.cols() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: img.rows() });
                }
                for a in 0..dim {
                    for b in 0..dim {
                        c.set(j * dim + a, k * dim + b, img.get(a, b).clone());
                    }
                }
            }
        }
        Ok(ChoiMap { dim, choi: HermMatrix::new(c)? })
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, Mat::clone).expect("identity preserves Hermiticity")
    }

    /// `A ↦ S A S*`.
    pub fn congruence(s: &Mat<R>) -> Result<Self> {
        if s.rows() != s.cols() {
            return Err(Error::DimensionMismatch { expected: s.rows(), found: s.cols() });
        }
        let sa = s.adjoint();
        Self::from_fn(s.rows(), |a| s.mul(a).mul(&sa))
    }

    /// `A ↦ tr(A)·I/d`.
    pub fn depolarizing(dim: usize) -> Self {
        let inv = real(R::from_ratio(1, dim as i64));
        Self::from_fn(dim, |a| {
            let tr = (0..dim).fold(cplx_zero::<R>(), |acc, i| acc + a.get(i, i).clone());
            Mat::identity(dim).scale(&(tr * inv.clone()))
        })
        .expect("depolarizing map preserves Hermiticity")
    }

    /// `A ↦ Σ K_i A K_i*`.
    pub fn from_kraus(ops: &[Mat<R>]) -> Result<Self> {
        let d = ops.first().map(Mat::rows).ok_or_else(|| Error::InvalidArgument("empty Kraus list".into()))?;
        Self::from_fn(d, |a| {
            ops.iter().fold(Mat::zeros(d, d), |acc, k| &acc + &k.mul(a).mul(&k.adjoint()))
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn choi(&self) -> &HermMatrix<R> {
        &self.choi
    }

    pub fn scale(&self, s: &R) -> Self {
        ChoiMap { dim: self.dim, choi: self.choi.scale(s) }
    }

    /// Completely positive iff the Choi matrix is PSD. Exact backends ignore
    /// `tol`; the approximate one scales it by `1 + maxAbsEntry`.
    pub fn is_completely_positive(&self, tol: f64) -> bool {
        R::psd_check(&self.choi, scaled_tolerance(&self.choi, tol)).is_psd
    }

    pub fn is_cp(&self) -> bool {
        self.is_completely_positive(DEFAULT_PSD_TOL)
    }

    /// `Φ(A)_{ab} = Σ_{jk} A_jk C_{(j,a),(k,b)}`, the partial-trace contraction
    /// `Tr_1[(Aᵀ ⊗ I) C]`.
    pub fn apply(&self, a: &HermMatrix<R>) -> Result<HermMatrix<R>> {
        let d = self.dim;
        if a.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: a.dim() });
        }
        let mut out = Mat::zeros(d, d);
        for j in 0..d {
            for k in 0..d {
                let ajk = a.get(j, k);
                if num_traits::Zero::is_zero(ajk) {
                    continue;
                }
                for x in 0..d {
                    for y in 0..d {
                        let v = out.get(x, y).clone() + ajk.clone() * self.choi.get(j * d + x, k * d + y).clone();
                        out.set(x, y, v);
                    }
                }
            }
        }
        Ok(HermMatrix::from_hermitian_part(&out))
    }

    pub fn convert<S: Real>(&self) -> ChoiMap<S> {
        ChoiMap { dim: self.dim, choi: self.choi.map(crate::algebra::convert::<R, S>) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Cplx, Q};

    fn qi(v: i64) -> Q {
        <Q as Real>::from_i64(v)
    }

    fn herm(rows: &[Vec<i64>]) -> HermMatrix<Q> {
        HermMatrix::from_int_rows(rows).unwrap()
    }

    #[test]
    fn identity_map() {
        let phi = ChoiMap::<Q>::identity(2);
        let mut m = Mat::<Q>::zeros(2, 2);
        m.set(0, 0, real(qi(3)));
        m.set(0, 1, Cplx::new(qi(1), qi(2)));
        m.set(1, 0, Cplx::new(qi(1), qi(-2)));
        m.set(1, 1, real(qi(-5)));
        let a = HermMatrix::new(m).unwrap();
        assert_eq!(phi.apply(&a).unwrap(), a);
        assert!(phi.is_cp());
    }

    #[test]
    fn depolarizing_map() {
        let phi = ChoiMap::<Q>::depolarizing(2);
        assert_eq!(phi.apply(&herm(&[vec![2, 0], vec![0, 0]])).unwrap(), HermMatrix::identity(2));
        assert_eq!(phi.choi(), &HermMatrix::identity(4).scale(&Q::new(1.into(), 2.into())));
    }

    #[test]
    fn congruence_map() {
        let s = Mat::<Q>::diag(&[qi(1), qi(2)]);
        let phi = ChoiMap::congruence(&s).unwrap();
        assert_eq!(phi.apply(&herm(&[vec![0, 1], vec![1, 0]])).unwrap(), herm(&[vec![0, 2], vec![2, 0]]));
        assert!(phi.is_cp());
    }

    #[test]
    fn transpose_is_positive_but_not_cp() {
        let phi = ChoiMap::<Q>::from_fn(2, Mat::transpose).unwrap();
        assert!(!phi.is_cp());
    }

    #[test]
    fn dimension_mismatch() {
        let phi = ChoiMap::<Q>::identity(2);
        assert!(phi.apply(&HermMatrix::identity(3)).is_err());
        assert!(ChoiMap::from_choi(2, HermMatrix::<Q>::identity(3)).is_err());
    }

    #[test]
    fn kraus_matches_congruence() {
        let s = Mat::<Q>::from_int_rows(&[vec![1, 2], vec![0, 1]]);
        assert_eq!(ChoiMap::from_kraus(std::slice::from_ref(&s)).unwrap(), ChoiMap::congruence(&s).unwrap());
    }
}
