//! Cyclic Jacobi eigensolver for dense real symmetric matrices.

use super::matrix::{HermMatrix, Mat};
use crate::error::Result;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector of `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Diagonalizes the symmetric matrix `a` by cyclic Jacobi sweeps.
///
/// Only the symmetric part of `a` is used.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> SymEigen {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| 0.5 * (a[i][j] + a[j][i])).collect())
        .collect();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();

    let frob: f64 = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = f64::EPSILON * f64::EPSILON * frob * frob;

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off <= threshold || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].total_cmp(&m[j][j]).then(i.cmp(&j)));
    SymEigen {
        values: order.iter().map(|&k| m[k][k]).collect(),
        vectors: order.iter().map(|&k| (0..n).map(|i| v[i][k]).collect()).collect(),
    }
}

/// Smallest eigenvalue of a Hermitian matrix, computed on its `2d×2d` real
/// symmetric embedding (each eigenvalue appears twice there).
pub fn eig_min(m: &HermMatrix<f64>) -> f64 {
    if m.dim() == 0 {
        return f64::INFINITY;
    }
    jacobi_eigen(&m.real_embedding()).values[0]
}

/// [`eig_min`] for a raw matrix, rejecting inputs that are not Hermitian
/// within `1e-12·maxAbsEntry`.
pub fn eig_min_checked(m: &Mat<f64>) -> Result<f64> {
    Ok(eig_min(&HermMatrix::new(m.clone())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn herm(rows: &[Vec<i64>]) -> HermMatrix<f64> {
        HermMatrix::from_int_rows(rows).unwrap()
    }

    #[test]
    fn identity_has_unit_spectrum() {
        assert_eq!(eig_min(&HermMatrix::identity(2)), 1.0);
    }

    #[test]
    fn central_block_of_bisgaard_matrix() {
        let l = eig_min(&herm(&[vec![1, 2], vec![2, 1]]));
        assert!((l + 1.0).abs() < 1e-10 * 3.0);
    }

    #[test]
    fn decoupled_four_by_four() {
        // spectrum {2, 6} ∪ {−1, 3} from the blocks [[4,2],[2,4]] and [[1,2],[2,1]]
        let m = herm(&[vec![4, 0, 0, 2], vec![0, 1, 2, 0], vec![0, 2, 1, 0], vec![2, 0, 0, 4]]);
        let eig = jacobi_eigen(&m.real_embedding());
        let expected = [-1.0, -1.0, 2.0, 2.0, 3.0, 3.0, 6.0, 6.0];
        for (got, want) in eig.values.iter().zip(expected) {
            assert!((got - want).abs() < 1e-10 * 5.0, "{got} vs {want}");
        }
    }

    #[test]
    fn complex_hermitian() {
        // [[2, i], [−i, 2]] has eigenvalues 1 and 3
        let mut m = Mat::<f64>::zeros(2, 2);
        m.set(0, 0, num_complex::Complex::new(2.0, 0.0));
        m.set(1, 1, num_complex::Complex::new(2.0, 0.0));
        m.set(0, 1, num_complex::Complex::new(0.0, 1.0));
        m.set(1, 0, num_complex::Complex::new(0.0, -1.0));
        assert!((eig_min_checked(&m).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = Mat::<f64>::from_int_rows(&[vec![1, 0], vec![1, 1]]);
        assert!(matches!(eig_min_checked(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        let a = vec![vec![4.0, 1.0, -2.0], vec![1.0, 2.0, 0.5], vec![-2.0, 0.5, 3.0]];
        let e = jacobi_eigen(&a);
        for k in 0..3 {
            let av: Vec<f64> = (0..3).map(|i| (0..3).map(|j| a[i][j] * e.vectors[k][j]).sum()).collect();
            for i in 0..3 {
                assert!((av[i] - e.values[k] * e.vectors[k][i]).abs() < 1e-12);
            }
            let norm: f64 = e.vectors[k].iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }
}
