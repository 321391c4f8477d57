//! Closed regions `K ⊆ R^n` and their translates `K − y`.

use num_traits::{Signed, Zero};

use super::poly::ScalarPoly;
use crate::algebra::{convert, Real, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum RegionKind {
    AllSpace { nvars: usize },
    Box { lo: Vec<Q>, hi: Vec<Q> },
    Ball { center: Vec<Q>, radius: Q },
}

/// A region `K` of one of three kinds, translated to `K − shift`.
///
/// Geometry is stored as exact rationals so membership is decided exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionK {
    kind: RegionKind,
    shift: Vec<Q>,
}

impl RegionK {
    pub fn all_space(nvars: usize) -> Self {
        RegionK { kind: RegionKind::AllSpace { nvars }, shift: vec![Q::zero(); nvars] }
    }

    pub fn boxed(lo: Vec<Q>, hi: Vec<Q>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::InvalidRegion(format!(
                "box bounds have lengths {} and {}",
                lo.len(),
                hi.len()
            )));
        }
        if let Some(i) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
            return Err(Error::InvalidRegion(format!("box has lo > hi on axis {i}")));
        }
        let n = lo.len();
        Ok(RegionK { kind: RegionKind::Box { lo, hi }, shift: vec![Q::zero(); n] })
    }

    /// Box with float bounds, converted exactly.
    pub fn boxed_f64(lo: &[f64], hi: &[f64]) -> Result<Self> {
        Self::boxed(to_rationals(lo)?, to_rationals(hi)?)
    }

    pub fn ball(center: Vec<Q>, radius: Q) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::InvalidRegion("ball radius must be positive".into()));
        }
        let n = center.len();
        Ok(RegionK { kind: RegionKind::Ball { center, radius }, shift: vec![Q::zero(); n] })
    }

    pub fn kind(&self) -> &RegionKind {
        &self.kind
    }

    pub fn shift(&self) -> &[Q] {
        &self.shift
    }

    pub fn with_shift(mut self, shift: Vec<Q>) -> Result<Self> {
        if shift.len() != self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), found: shift.len() });
        }
        self.shift = shift;
        Ok(self)
    }

    pub fn nvars(&self) -> usize {
        match &self.kind {
            RegionKind::AllSpace { nvars } => *nvars,
            RegionKind::Box { lo, .. } => lo.len(),
            RegionKind::Ball { center, .. } => center.len(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self.kind, RegionKind::AllSpace { .. })
    }

    /// `K − y` (the shift accumulates).
    pub fn translated<R: Real>(&self, y: &[R]) -> Result<Self> {
        if y.len() != self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), found: y.len() });
        }
        let mut shift = self.shift.clone();
        for (s, v) in shift.iter_mut().zip(y) {
            let v = v
                .to_rational()
                .ok_or_else(|| Error::InvalidArgument("non-finite translation".into()))?;
            *s = s.clone() + v;
        }
        Ok(RegionK { kind: self.kind.clone(), shift })
    }

    /// Exact membership test for `x ∈ K − shift`.
    pub fn contains(&self, x: &[Q]) -> bool {
        if x.len() != self.nvars() {
            return false;
        }
        let p: Vec<Q> = x.iter().zip(&self.shift).map(|(a, s)| a.clone() + s.clone()).collect();
        match &self.kind {
            RegionKind::AllSpace { .. } => true,
            RegionKind::Box { lo, hi } => (0..p.len()).all(|i| lo[i] <= p[i] && p[i] <= hi[i]),
            RegionKind::Ball { center, radius } => {
                let dist2 = p
                    .iter()
                    .zip(center)
                    .fold(Q::zero(), |acc, (a, c)| acc + (a.clone() - c.clone()) * (a.clone() - c.clone()));
                dist2 <= radius.clone() * radius.clone()
            }
        }
    }

    /// Membership for a point in any backend; non-finite coordinates are
    /// never members.
    pub fn contains_point<R: Real>(&self, x: &[R]) -> bool {
        let q: Option<Vec<Q>> = x.iter().map(Real::to_rational).collect();
        q.is_some_and(|q| self.contains(&q))
    }

    /// Bounding box of `K − shift`, `None` when unbounded.
    pub fn bounding_box(&self) -> Option<(Vec<Q>, Vec<Q>)> {
        match &self.kind {
            RegionKind::AllSpace { .. } => None,
            RegionKind::Box { lo, hi } => Some((self.unshift(lo), self.unshift(hi))),
            RegionKind::Ball { center, radius } => {
                let c = self.unshift(center);
                Some((
                    c.iter().map(|v| v.clone() - radius.clone()).collect(),
                    c.iter().map(|v| v.clone() + radius.clone()).collect(),
                ))
            }
        }
    }

    fn unshift(&self, v: &[Q]) -> Vec<Q> {
        v.iter().zip(&self.shift).map(|(a, s)| a.clone() - s.clone()).collect()
    }

    /// Defining polynomials `g_j ≥ 0` of `K − shift`: one
    /// `(x_i − lo_i)(hi_i − x_i)` per box axis, `r² − |x − c|²` for a ball,
    /// none for the whole space.
    pub fn constraints<R: Real>(&self) -> Vec<ScalarPoly<R>> {
        let n = self.nvars();
        match &self.kind {
            RegionKind::AllSpace { .. } => Vec::new(),
            RegionKind::Box { lo, hi } => {
                let lo = self.unshift(lo);
                let hi = self.unshift(hi);
                (0..n)
                    .map(|i| {
                        let x = ScalarPoly::<R>::var(n, i);
                        let left = x.sub(&ScalarPoly::constant(n, convert(&lo[i])));
                        let right = ScalarPoly::constant(n, convert(&hi[i])).sub(&x);
                        left.mul(&right)
                    })
                    .collect()
            }
            RegionKind::Ball { center, radius } => {
                let c = self.unshift(center);
                let mut g = ScalarPoly::constant(n, convert(&(radius.clone() * radius.clone())));
                for (i, ci) in c.iter().enumerate() {
                    let d = ScalarPoly::<R>::var(n, i).sub(&ScalarPoly::constant(n, convert(ci)));
                    g = g.sub(&d.mul(&d));
                }
                vec![g]
            }
        }
    }
}

pub(crate) fn to_rationals(v: &[f64]) -> Result<Vec<Q>> {
    v.iter()
        .map(|x| x.to_rational().ok_or_else(|| Error::InvalidRegion(format!("non-finite bound {x}"))))
        .collect()
}
