//! Grid-sampled positivity of matrix polynomials on a region.

use rayon::prelude::*;

use super::poly::MatrixPolynomial;
use super::region::RegionK;
use crate::algebra::{eig_min, MultiIndex, Real};
use crate::error::{Error, Result};

/// Sampling grid: `per_axis` equispaced points on each axis of the region's
/// bounding box, optionally clipped to a window. Unbounded regions need a
/// window.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub per_axis: usize,
    pub window: Option<(Vec<f64>, Vec<f64>)>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { per_axis: 17, window: None }
    }
}

impl GridSpec {
    pub fn new(per_axis: usize) -> Self {
        GridSpec { per_axis, window: None }
    }

    pub fn with_window(mut self, lo: Vec<f64>, hi: Vec<f64>) -> Self {
        self.window = Some((lo, hi));
        self
    }

    /// Grid points lying in `region`, each with its integer grid index.
    /// Points are listed in row-major index order.
    pub fn points(&self, region: &RegionK) -> Result<Vec<(Vec<usize>, Vec<f64>)>> {
        if self.per_axis < 2 {
            return Err(Error::InvalidArgument("grid needs at least 2 points per axis".into()));
        }
        let n = region.nvars();
        let bbox = region
            .bounding_box()
            .map(|(lo, hi)| (lo.iter().map(Real::to_f64).collect::<Vec<_>>(), hi.iter().map(Real::to_f64).collect::<Vec<_>>()));
        let (lo, hi) = match (bbox, &self.window) {
            (Some((lo, hi)), Some((wlo, whi))) => {
                check_window(n, wlo, whi)?;
                (
                    lo.iter().zip(wlo).map(|(a, b)| a.max(*b)).collect::<Vec<_>>(),
                    hi.iter().zip(whi).map(|(a, b)| a.min(*b)).collect::<Vec<_>>(),
                )
            }
            (Some(b), None) => b,
            (None, Some((wlo, whi))) => {
                check_window(n, wlo, whi)?;
                (wlo.clone(), whi.clone())
            }
            (None, None) => {
                return Err(Error::InvalidArgument("unbounded region requires a sampling window".into()))
            }
        };
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::EmptyGrid);
        }
        let m = self.per_axis;
        let total = m.checked_pow(n as u32).ok_or_else(|| Error::InvalidArgument("grid too large".into()))?;
        let mut out = Vec::new();
        for flat in 0..total {
            let mut idx = vec![0usize; n];
            let mut r = flat;
            for i in (0..n).rev() {
                idx[i] = r % m;
                r /= m;
            }
            let x: Vec<f64> = (0..n)
                .map(|i| {
                    if idx[i] == m - 1 {
                        hi[i]
                    } else {
                        lo[i] + (hi[i] - lo[i]) * idx[i] as f64 / (m - 1) as f64
                    }
                })
                .collect();
            if region.contains_point(&x) {
                out.push((idx, x));
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(out)
    }
}

fn check_window(n: usize, lo: &[f64], hi: &[f64]) -> Result<()> {
    if lo.len() != n || hi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: lo.len().min(hi.len()) });
    }
    Ok(())
}

/// Result of [`pos_sample`]. A failing report certifies `p ∉ Pos(K)` at
/// `worst_point`; a passing one is sampled evidence only.
#[derive(Clone, Debug, PartialEq)]
pub struct PositivityReport {
    pub points_tested: usize,
    pub worst_point: Vec<f64>,
    pub worst_min_eig: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Evaluates `p` at every grid point inside `region` and reports the point
/// with the smallest minimum eigenvalue. Ties go to the grid index that is
/// first in graded-lex order, so the report does not depend on evaluation
/// order.
pub fn pos_sample<R: Real>(
    p: &MatrixPolynomial<R>,
    region: &RegionK,
    grid: &GridSpec,
    tol: f64,
) -> Result<PositivityReport> {
    if p.nvars() != region.nvars() {
        return Err(Error::DimensionMismatch { expected: region.nvars(), found: p.nvars() });
    }
    let points = grid.points(region)?;
    let pf: MatrixPolynomial<f64> = p.convert();
    let evaluated: Vec<(Vec<usize>, Vec<f64>, f64)> = points
        .into_par_iter()
        .map(|(idx, x)| {
            let m = pf.eval(&x).expect("arity checked");
            let e = eig_min(&m);
            (idx, x, e)
        })
        .collect();
    let worst = evaluated
        .iter()
        .min_by(|a, b| {
            a.2.total_cmp(&b.2).then_with(|| grid_index_key(&a.0).cmp(&grid_index_key(&b.0)))
        })
        .expect("nonempty grid");
    Ok(PositivityReport {
        points_tested: evaluated.len(),
        worst_point: worst.1.clone(),
        worst_min_eig: worst.2,
        tol,
        pass: worst.2 >= -tol,
    })
}

fn grid_index_key(idx: &[usize]) -> MultiIndex {
    MultiIndex::new(idx.iter().map(|&i| i as u32).collect())
}
