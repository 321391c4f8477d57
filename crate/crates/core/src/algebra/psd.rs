//! Positive semidefiniteness tests.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::eigen::jacobi_eigen;
use super::matrix::HermMatrix;
use super::scalar::{Cplx, Real};

/// Outcome of a PSD test.
#[derive(Clone, Debug, PartialEq)]
pub struct PsdVerdict<R: Real> {
    pub is_psd: bool,
    /// Smallest eigenvalue; only populated by the approximate backend.
    pub min_eigenvalue: Option<f64>,
    /// A vector `v` with `⟨M v, v⟩ < 0` when the matrix is not PSD.
    pub witness: Option<Vec<Cplx<R>>>,
}

impl<R: Real> PsdVerdict<R> {
    fn psd(min_eigenvalue: Option<f64>) -> Self {
        PsdVerdict { is_psd: true, min_eigenvalue, witness: None }
    }
}

/// Default absolute PSD tolerance for the approximate backend, before
/// scaling by `1 + maxAbsEntry`.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

/// `tol · (1 + maxAbsEntry(m))`.
pub fn scaled_tolerance<R: Real>(m: &HermMatrix<R>, tol: f64) -> f64 {
    tol * (1.0 + m.max_abs())
}

/// `isPsd ⇔ eigMin(m) ≥ −tol`.
pub fn psd_check_approx(m: &HermMatrix<f64>, tol: f64) -> PsdVerdict<f64> {
    let d = m.dim();
    if d == 0 {
        return PsdVerdict::psd(None);
    }
    let eig = jacobi_eigen(&m.real_embedding());
    let min = eig.values[0];
    if min >= -tol {
        return PsdVerdict::psd(Some(min));
    }
    let v = &eig.vectors[0];
    let witness = (0..d).map(|i| Cplx::new(v[i], v[i + d])).collect();
    PsdVerdict { is_psd: false, min_eigenvalue: Some(min), witness: Some(witness) }
}

/// Exact PSD decision by symmetric Gaussian elimination (`LDLᵀ` with
/// diagonal pivoting) over the rationals, on the real embedding.
///
/// Zero pivots whose residual row vanishes are dropped, so rank-deficient
/// PSD matrices are accepted. On failure the witness is recovered from the
/// Schur complement and satisfies `⟨M v, v⟩ < 0` exactly.
pub fn psd_check_exact(m: &HermMatrix<BigRational>) -> PsdVerdict<BigRational> {
    let d = m.dim();
    let original = m.real_embedding();
    match ldl_negative_direction(&original) {
        None => PsdVerdict::psd(None),
        Some(x) => {
            let witness: Vec<Cplx<BigRational>> =
                (0..d).map(|i| Cplx::new(x[i].clone(), x[i + d].clone())).collect();
            debug_assert!(m.quad_form(&witness).is_negative());
            PsdVerdict { is_psd: false, min_eigenvalue: None, witness: Some(witness) }
        }
    }
}

fn qi(v: i64) -> BigRational {
    <BigRational as Real>::from_i64(v)
}

/// Returns `None` if the real symmetric matrix `a` is PSD, otherwise a real
/// vector `x` with `xᵀ a x < 0`.
pub fn ldl_negative_direction(a: &[Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut s: Vec<Vec<BigRational>> = a.to_vec();
    let mut active: Vec<usize> = (0..n).collect();
    let mut eliminated: Vec<usize> = Vec::new();

    loop {
        if active.is_empty() {
            return None;
        }
        if let Some(&j) = active.iter().find(|&&j| s[j][j].is_negative()) {
            let mut z = vec![BigRational::zero(); n];
            z[j] = qi(1);
            return Some(lift_witness(a, &eliminated, z));
        }

        let mut dropped = Vec::new();
        for &j in &active {
            if !s[j][j].is_zero() {
                continue;
            }
            if let Some(&k) = active.iter().find(|&&k| k != j && !s[j][k].is_zero()) {
                // (t e_j + e_k)ᵀ S (t e_j + e_k) = 2 t s_jk + s_kk = −1
                let t = -(s[k][k].clone() + qi(1)) / (qi(2) * s[j][k].clone());
                let mut z = vec![BigRational::zero(); n];
                z[j] = t;
                z[k] = qi(1);
                return Some(lift_witness(a, &eliminated, z));
            }
            dropped.push(j);
        }
        active.retain(|j| !dropped.contains(j));
        let pos = active.iter().position(|&j| s[j][j].is_positive())?;
        let p = active.remove(pos);
        let pivot = s[p][p].clone();
        for &i in &active {
            if s[i][p].is_zero() {
                continue;
            }
            let factor = s[i][p].clone() / pivot.clone();
            for &j in &active {
                if s[p][j].is_zero() {
                    continue;
                }
                let delta = factor.clone() * s[p][j].clone();
                s[i][j] -= delta;
            }
        }
        eliminated.push(p);
    }
}

/// Completes `z` (supported off the eliminated set) to `x` with
/// `x_E = −A_EE⁻¹ A_{E,·} z`, so that `xᵀ A x = zᵀ S z` for the Schur
/// complement `S`.
fn lift_witness(a: &[Vec<BigRational>], eliminated: &[usize], mut z: Vec<BigRational>) -> Vec<BigRational> {
    let k = eliminated.len();
    if k == 0 {
        return z;
    }
    let n = a.len();
    // augmented system A_EE y = A_{E,·} z
    let mut sys: Vec<Vec<BigRational>> = eliminated
        .iter()
        .map(|&r| {
            let mut row: Vec<BigRational> = eliminated.iter().map(|&c| a[r][c].clone()).collect();
            let rhs = (0..n)
                .filter(|c| !z[*c].is_zero())
                .fold(BigRational::zero(), |acc, c| acc + a[r][c].clone() * z[c].clone());
            row.push(rhs);
            row
        })
        .collect();
    for col in 0..k {
        let piv = (col..k).find(|&r| !sys[r][col].is_zero()).expect("positive definite leading block");
        sys.swap(col, piv);
        let inv = qi(1) / sys[col][col].clone();
        for c in col..=k {
            sys[col][c] = sys[col][c].clone() * inv.clone();
        }
        for r in 0..k {
            if r == col || sys[r][col].is_zero() {
                continue;
            }
            let f = sys[r][col].clone();
            for c in col..=k {
                let delta = f.clone() * sys[col][c].clone();
                sys[r][c] -= delta;
            }
        }
    }
    for (idx, &e) in eliminated.iter().enumerate() {
        z[e] = -sys[idx][k].clone();
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::Mat;
    use num_bigint::BigInt;
    use num_traits::One;

    type Q = BigRational;

    fn q(v: i64) -> Q {
        <Q as Real>::from_i64(v)
    }

    fn pow2(e: u32) -> Q {
        Q::from_integer(BigInt::one() << e)
    }

    fn qherm(rows: &[Vec<Q>]) -> HermMatrix<Q> {
        let n = rows.len();
        HermMatrix::new(Mat::from_real_fn(n, n, |i, j| rows[i][j].clone())).unwrap()
    }

    /// Signs of leading principal minors by fraction-free (Bareiss) elimination
    /// on big integers; positive definite iff all positive.
    fn leading_minors(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
        let n = rows.len();
        let mut m = rows.to_vec();
        let mut minors = Vec::new();
        let mut prev = BigInt::one();
        for k in 0..n {
            minors.push(m[k][k].clone());
            if k + 1 == n || m[k][k] == BigInt::from(0) {
                break;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    m[i][j] = (m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone()) / prev.clone();
                }
            }
            prev = m[k][k].clone();
        }
        minors
    }

    #[test]
    fn zero_matrix_is_psd() {
        assert!(psd_check_exact(&HermMatrix::<Q>::zeros(3)).is_psd);
    }

    #[test]
    fn bisgaard_scalar_hankel_is_psd() {
        let a2 = pow2(24);
        let a3 = pow2(120);
        let rows = vec![
            vec![q(4), q(0), q(1), q(0)],
            vec![q(0), q(1), q(0), a2.clone()],
            vec![q(1), q(0), a2.clone(), q(0)],
            vec![q(0), a2.clone(), q(0), a3.clone()],
        ];
        // oracle: every leading principal minor positive
        let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
        let minors = leading_minors(&ints);
        assert_eq!(minors.len(), 4);
        assert!(minors.iter().all(|m| *m > BigInt::from(0)));
        assert!(psd_check_exact(&qherm(&rows)).is_psd);
    }

    #[test]
    fn indefinite_two_by_two_has_witness() {
        let m = qherm(&[vec![q(1), q(2)], vec![q(2), q(1)]]);
        let v = psd_check_exact(&m);
        assert!(!v.is_psd);
        assert!(v.min_eigenvalue.is_none());
        let w = v.witness.unwrap();
        assert!(m.quad_form(&w) < q(0));
        // the spectral witness (1, −1) also certifies
        let spectral = vec![Cplx::new(q(1), q(0)), Cplx::new(q(-1), q(0))];
        assert_eq!(m.quad_form(&spectral), q(-2));
    }

    #[test]
    fn rank_deficient_psd_is_accepted() {
        // v vᵀ for v = (1, 2, 0)
        let m = qherm(&[vec![q(1), q(2), q(0)], vec![q(2), q(4), q(0)], vec![q(0), q(0), q(0)]]);
        assert!(psd_check_exact(&m).is_psd);
    }

    #[test]
    fn zero_diagonal_with_coupling_is_rejected() {
        let m = qherm(&[vec![q(0), q(1)], vec![q(1), q(5)]]);
        let v = psd_check_exact(&m);
        assert!(!v.is_psd);
        assert!(m.quad_form(&v.witness.unwrap()) < q(0));
    }

    #[test]
    fn complex_witness_is_recovered() {
        // [[1, 2i], [−2i, 1]] has eigenvalues −1, 3
        let mut mat = Mat::<Q>::zeros(2, 2);
        mat.set(0, 0, Cplx::new(q(1), q(0)));
        mat.set(1, 1, Cplx::new(q(1), q(0)));
        mat.set(0, 1, Cplx::new(q(0), q(2)));
        mat.set(1, 0, Cplx::new(q(0), q(-2)));
        let m = HermMatrix::new(mat).unwrap();
        let v = psd_check_exact(&m);
        assert!(!v.is_psd);
        assert!(m.quad_form(&v.witness.unwrap()) < q(0));
    }

    #[test]
    fn approx_examples() {
        let v = psd_check_approx(&HermMatrix::identity(3), 1e-9);
        assert!(v.is_psd);
        assert!((v.min_eigenvalue.unwrap() - 1.0).abs() < 1e-12);

        let v = psd_check_approx(&HermMatrix::diag(&[1.0, -1e-12]), 1e-9);
        assert!(v.is_psd);

        let m = HermMatrix::<f64>::from_int_rows(&[
            vec![4, 0, 0, 2],
            vec![0, 1, 2, 0],
            vec![0, 2, 1, 0],
            vec![2, 0, 0, 4],
        ])
        .unwrap();
        let v = psd_check_approx(&m, 1e-9);
        assert!(!v.is_psd);
        assert!((v.min_eigenvalue.unwrap() + 1.0).abs() < 1e-9);
        assert!(m.quad_form(&v.witness.unwrap()) < -1e-9);
    }
}
