//! Finitely atomic operator-valued, map-valued and scalar measures.

use super::choi::ChoiMap;
use crate::algebra::psd::scaled_tolerance;
use crate::algebra::{Cplx, HermMatrix, MultiIndex, Real, DEFAULT_PSD_TOL};
use crate::error::{Error, Result};
use crate::matpoly::{monomial_value, MatrixPolynomial, RegionK, ScalarPoly};

fn check_point<R: Real>(support: &RegionK, point: &[R]) -> Result<()> {
    if point.len() != support.nvars() {
        return Err(Error::DimensionMismatch { expected: support.nvars(), found: point.len() });
    }
    if !support.contains_point(point) {
        return Err(Error::PointOutsideRegion(point.iter().map(Real::to_f64).collect()));
    }
    Ok(())
}

fn translate<R: Real>(point: &[R], y: &[R]) -> Vec<R> {
    point.iter().zip(y).map(|(t, v)| t.clone() - v.clone()).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorAtom<R: Real> {
    pub point: Vec<R>,
    pub weight: HermMatrix<R>,
}

/// `μ = Σ_i W_i δ_{t_i}` with PSD weights `W_i`, supported in a region.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicOperatorMeasure<R: Real> {
    dim: usize,
    atoms: Vec<OperatorAtom<R>>,
    support: RegionK,
}

impl<R: Real> AtomicOperatorMeasure<R> {
    pub fn new(dim: usize, atoms: Vec<OperatorAtom<R>>, support: RegionK) -> Result<Self> {
        Self::with_tol(dim, atoms, support, DEFAULT_PSD_TOL)
    }

    pub fn with_tol(dim: usize, atoms: Vec<OperatorAtom<R>>, support: RegionK, tol: f64) -> Result<Self> {
        for (i, atom) in atoms.iter().enumerate() {
            if atom.weight.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: atom.weight.dim() });
            }
            check_point(&support, &atom.point)?;
            if !R::psd_check(&atom.weight, scaled_tolerance(&atom.weight, tol)).is_psd {
                return Err(Error::NonPsdWeight(i));
            }
        }
        Ok(AtomicOperatorMeasure { dim, atoms, support })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nvars(&self) -> usize {
        self.support.nvars()
    }

    pub fn atoms(&self) -> &[OperatorAtom<R>] {
        &self.atoms
    }

    pub fn support(&self) -> &RegionK {
        &self.support
    }

    /// `∫ t^α dμ = Σ_i t_i^α W_i`.
    pub fn integrate_monomial(&self, alpha: &MultiIndex) -> HermMatrix<R> {
        self.atoms.iter().fold(HermMatrix::zeros(self.dim), |acc, a| {
            &acc + &a.weight.scale(&monomial_value(&a.point, alpha))
        })
    }

    /// `∫ s dμ = Σ_i s(t_i) W_i` for a scalar polynomial.
    pub fn integrate_scalar(&self, s: &ScalarPoly<R>) -> HermMatrix<R> {
        self.atoms
            .iter()
            .fold(HermMatrix::zeros(self.dim), |acc, a| &acc + &a.weight.scale(&s.eval(&a.point)))
    }

    /// Trace pairing `p ↦ Σ_i tr(W_i p(t_i))`, the real-valued map-measure
    /// integral of an operator polynomial.
    pub fn integrate_trace(&self, p: &MatrixPolynomial<R>) -> Result<R> {
        self.atoms.iter().try_fold(R::zero(), |acc, a| Ok(acc + a.weight.trace_inner(&p.eval(&a.point)?)))
    }

    pub fn total_mass(&self) -> HermMatrix<R> {
        self.integrate_monomial(&MultiIndex::zero(self.nvars()))
    }

    /// `μ_a = ⟨μ(·) a, a⟩`.
    pub fn compress(&self, a: &[Cplx<R>]) -> Result<ScalarAtomicMeasure<R>> {
        if a.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.len() });
        }
        let atoms = self.atoms.iter().map(|at| (at.point.clone(), at.weight.quad_form(a))).collect();
        Ok(ScalarAtomicMeasure { nvars: self.nvars(), atoms })
    }

    /// `μ(· + y)`: atoms move to `t_i − y`, the support to `K − y`.
    pub fn pushforward_shift(&self, y: &[R]) -> Result<Self> {
        let support = self.support.translated(y)?;
        let atoms = self
            .atoms
            .iter()
            .map(|a| OperatorAtom { point: translate(&a.point, y), weight: a.weight.clone() })
            .collect();
        Ok(AtomicOperatorMeasure { dim: self.dim, atoms, support })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapAtom<R: Real> {
    pub point: Vec<R>,
    pub map: ChoiMap<R>,
}

/// `ν = Σ_i Φ_i δ_{t_i}` with completely positive `Φ_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMapMeasure<R: Real> {
    dim: usize,
    atoms: Vec<MapAtom<R>>,
    support: RegionK,
}

impl<R: Real> AtomicMapMeasure<R> {
    pub fn new(dim: usize, atoms: Vec<MapAtom<R>>, support: RegionK) -> Result<Self> {
        Self::with_tol(dim, atoms, support, DEFAULT_PSD_TOL)
    }

    pub fn with_tol(dim: usize, atoms: Vec<MapAtom<R>>, support: RegionK, tol: f64) -> Result<Self> {
        for (i, atom) in atoms.iter().enumerate() {
            if atom.map.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: atom.map.dim() });
            }
            check_point(&support, &atom.point)?;
            if !atom.map.is_completely_positive(tol) {
                return Err(Error::NonPsdChoi(i));
            }
        }
        Ok(AtomicMapMeasure { dim, atoms, support })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nvars(&self) -> usize {
        self.support.nvars()
    }

    pub fn atoms(&self) -> &[MapAtom<R>] {
        &self.atoms
    }

    pub fn support(&self) -> &RegionK {
        &self.support
    }

    /// `∫ p dν = Σ_i Φ_i(p(t_i))`.
    pub fn integrate_poly(&self, p: &MatrixPolynomial<R>) -> Result<HermMatrix<R>> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: p.dim() });
        }
        self.atoms
            .iter()
            .try_fold(HermMatrix::zeros(self.dim), |acc, a| Ok(&acc + &a.map.apply(&p.eval(&a.point)?)?))
    }

    /// `Σ_j ∫ p_j dν[A_j]` for `p = Σ_j A_j p_j`.
    pub fn integrate_decomposition(&self, parts: &[(HermMatrix<R>, ScalarPoly<R>)]) -> Result<HermMatrix<R>> {
        let mut acc = HermMatrix::zeros(self.dim);
        for (a, s) in parts {
            acc = &acc + &self.operator_measure(a)?.integrate_scalar(s);
        }
        Ok(acc)
    }

    /// `ν[A] = Σ_i Φ_i(A) δ_{t_i}`; a positive operator measure when `A ⪰ 0`.
    /// Weights are not PSD-checked since `A` may be indefinite.
    pub fn operator_measure(&self, a: &HermMatrix<R>) -> Result<AtomicOperatorMeasure<R>> {
        let atoms = self
            .atoms
            .iter()
            .map(|at| Ok(OperatorAtom { point: at.point.clone(), weight: at.map.apply(a)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(AtomicOperatorMeasure { dim: self.dim, atoms, support: self.support.clone() })
    }

    /// `ν(· + y)`.
    pub fn pushforward_shift(&self, y: &[R]) -> Result<Self> {
        let support = self.support.translated(y)?;
        let atoms = self
            .atoms
            .iter()
            .map(|a| MapAtom { point: translate(&a.point, y), map: a.map.clone() })
            .collect();
        Ok(AtomicMapMeasure { dim: self.dim, atoms, support })
    }
}

/// `Σ_i m_i δ_{t_i}` with `m_i ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarAtomicMeasure<R: Real> {
    nvars: usize,
    atoms: Vec<(Vec<R>, R)>,
}

impl<R: Real> ScalarAtomicMeasure<R> {
    pub fn new(nvars: usize, atoms: Vec<(Vec<R>, R)>) -> Result<Self> {
        for (i, (p, m)) in atoms.iter().enumerate() {
            if p.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: p.len() });
            }
            if m.is_negative() {
                return Err(Error::OutOfRange(format!("mass of atom {i} is negative")));
            }
        }
        Ok(ScalarAtomicMeasure { nvars, atoms })
    }

    pub fn atoms(&self) -> &[(Vec<R>, R)] {
        &self.atoms
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn moment(&self, alpha: &MultiIndex) -> R {
        self.atoms
            .iter()
            .fold(R::zero(), |acc, (p, m)| acc + m.clone() * monomial_value(p, alpha))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::real;
    use crate::algebra::{Mat, Q};

    fn qi(v: i64) -> Q {
        <Q as Real>::from_i64(v)
    }

    fn half() -> Q {
        Q::new(1.into(), 2.into())
    }

    #[test]
    fn single_atom_at_origin() {
        let mu = AtomicOperatorMeasure::new(
            2,
            vec![OperatorAtom { point: vec![qi(0)], weight: HermMatrix::identity(2) }],
            RegionK::all_space(1),
        )
        .unwrap();
        assert_eq!(mu.integrate_monomial(&MultiIndex::univariate(0)), HermMatrix::identity(2));
        assert!(mu.integrate_monomial(&MultiIndex::univariate(3)).is_zero());
    }

    #[test]
    fn symmetric_atoms() {
        let w = HermMatrix::identity(2).scale(&half());
        let mu = AtomicOperatorMeasure::new(
            2,
            vec![OperatorAtom { point: vec![qi(1)], weight: w.clone() }, OperatorAtom { point: vec![qi(-1)], weight: w }],
            RegionK::all_space(1),
        )
        .unwrap();
        for k in 0..6 {
            let m = mu.integrate_monomial(&MultiIndex::univariate(k));
            if k % 2 == 0 {
                assert_eq!(m, HermMatrix::identity(2));
            } else {
                assert!(m.is_zero());
            }
        }
    }

    #[test]
    fn projector_weight() {
        let w = HermMatrix::diag(&[qi(1), qi(0)]);
        let mu = AtomicOperatorMeasure::new(2, vec![OperatorAtom { point: vec![qi(2)], weight: w }], RegionK::all_space(1))
            .unwrap();
        assert_eq!(mu.integrate_monomial(&MultiIndex::univariate(3)), HermMatrix::diag(&[qi(8), qi(0)]));
        let e2 = vec![real(qi(0)), real(qi(1))];
        assert_eq!(mu.compress(&e2).unwrap().atoms()[0].1, qi(0));
    }

    #[test]
    fn validation() {
        let bad = HermMatrix::diag(&[qi(1), qi(-1)]);
        let r = AtomicOperatorMeasure::new(2, vec![OperatorAtom { point: vec![qi(0)], weight: bad }], RegionK::all_space(1));
        assert_eq!(r, Err(Error::NonPsdWeight(0)));
        let k = RegionK::boxed_f64(&[0.0], &[1.0]).unwrap();
        let r = AtomicOperatorMeasure::new(2, vec![OperatorAtom { point: vec![qi(2)], weight: HermMatrix::identity(2) }], k);
        assert!(matches!(r, Err(Error::PointOutsideRegion(_))));
        let transpose = ChoiMap::<Q>::from_fn(2, Mat::transpose).unwrap();
        let r = AtomicMapMeasure::new(2, vec![MapAtom { point: vec![qi(0)], map: transpose }], RegionK::all_space(1));
        assert_eq!(r, Err(Error::NonPsdChoi(0)));
        assert!(ScalarAtomicMeasure::new(1, vec![(vec![qi(0)], qi(-1))]).is_err());
    }

    #[test]
    fn identity_map_atom_evaluates() {
        let nu = AtomicMapMeasure::new(
            2,
            vec![MapAtom { point: vec![qi(3)], map: ChoiMap::identity(2) }],
            RegionK::all_space(1),
        )
        .unwrap();
        let a = HermMatrix::from_int_rows(&[vec![1, 2], vec![2, -1]]).unwrap();
        let p = MatrixPolynomial::monomial(a.clone(), MultiIndex::univariate(2));
        assert_eq!(nu.integrate_poly(&p).unwrap(), a.scale(&qi(9)));
    }

    #[test]
    fn pushforward_translates_atoms() {
        let k = RegionK::boxed_f64(&[0.0], &[4.0]).unwrap();
        let mu = AtomicOperatorMeasure::new(2, vec![OperatorAtom { point: vec![qi(3)], weight: HermMatrix::identity(2) }], k)
            .unwrap();
        let nu = mu.pushforward_shift(&[qi(1)]).unwrap();
        assert_eq!(nu.atoms()[0].point, vec![qi(2)]);
        assert!(nu.support().contains(&[qi(-1)]));
        assert!(!nu.support().contains(&[qi(4)]));
        assert_eq!(mu.pushforward_shift(&[qi(0)]).unwrap(), mu);
        assert_eq!(nu.pushforward_shift(&[qi(-1)]).unwrap(), mu);
        // ∫_{K−y} t^β dν = ∫_K (t − y)^β dμ
        for b in 0..=4 {
            let lhs = nu.integrate_monomial(&MultiIndex::univariate(b));
            let shifted = ScalarPoly::<Q>::var(1, 0).sub(&ScalarPoly::constant(1, qi(1)));
            let s = (0..b).fold(ScalarPoly::constant(1, qi(1)), |acc, _| acc.mul(&shifted));
            assert_eq!(lhs, mu.integrate_scalar(&s));
        }
    }

    #[test]
    fn compression_with_identity_weights() {
        let mu = AtomicOperatorMeasure::new(
            2,
            vec![
                OperatorAtom { point: vec![qi(0)], weight: HermMatrix::identity(2) },
                OperatorAtom { point: vec![qi(5)], weight: HermMatrix::identity(2) },
            ],
            RegionK::all_space(1),
        )
        .unwrap();
        let a = vec![Cplx::new(Q::new(3.into(), 5.into()), qi(0)), Cplx::new(qi(0), Q::new(4.into(), 5.into()))];
        let c = mu.compress(&a).unwrap();
        assert!(c.atoms().iter().all(|(_, m)| *m == qi(1)));
    }
}
