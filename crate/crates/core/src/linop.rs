//! Degree-truncated linear operators on `Herm_d ⊗ R[x_1..x_n]` and their
//! canonical representation `T = Σ_α (1/α!) Q_α × ∂^α`.
//!
//! Operators are stored extensionally, as the images `T(E_i ⊗ x^α)` of a
//! fixed real basis `{E_i}` of `Herm_d` for `|α| ≤ D`. The canonical maps are
//! recovered by the binomial transform
//!
//! ```text
//! Q_β(E_i) = Σ_{α ⪯ β} binom(β, α) (−1)^{|β−α|} T(E_i ⊗ x^α) · x^{β−α}
//! ```
//!
//! and reassembled by `T(E_i ⊗ x^β) = Σ_{α ⪯ β} binom(β, α) Q_α(E_i) x^{β−α}`.

use std::collections::BTreeMap;

use crate::algebra::scalar::{cplx_one, imag_unit};
use crate::algebra::{HermMatrix, Mat, MultiIndex, Real};
use crate::error::{Error, Result};
use crate::matpoly::MatrixPolynomial;
use crate::measures::ChoiMap;

/// The real basis of `Herm_d`, indexed row-major by pairs `(j, k)`:
/// `E_jj` on the diagonal, `E_jk + E_kj` for `j < k`, and for `j > k` the
/// matrix with `i` at `(k, j)` and `−i` at `(j, k)`. For `d = 2` this is
/// `H11, H12, H21, H22` with the off-diagonal elements scaled by `√2` so
/// that every entry stays rational.
pub fn hermitian_basis<R: Real>(dim: usize) -> Vec<HermMatrix<R>> {
    (0..dim * dim).map(|idx| basis_element(dim, idx)).collect()
}

pub fn basis_element<R: Real>(dim: usize, idx: usize) -> HermMatrix<R> {
    let (j, k) = (idx / dim, idx % dim);
    let mut m = Mat::zeros(dim, dim);
    if j == k {
        m.set(j, j, cplx_one());
    } else if j < k {
        m.set(j, k, cplx_one());
        m.set(k, j, cplx_one());
    } else {
        m.set(k, j, imag_unit());
        m.set(j, k, -imag_unit::<R>());
    }
    HermMatrix::new(m).expect("basis elements are Hermitian")
}

/// Coordinates `c` with `A = Σ_i c_i E_i`.
pub fn basis_coords<R: Real>(a: &HermMatrix<R>) -> Vec<R> {
    let d = a.dim();
    (0..d * d)
        .map(|idx| {
            let (j, k) = (idx / d, idx % d);
            if j <= k {
                a.get(j, k).re.clone()
            } else {
                -a.get(j, k).im.clone()
            }
        })
        .collect()
}

/// `Σ_i c_i F_i`.
fn combine<R: Real>(coords: &[R], parts: impl Fn(usize) -> MatrixPolynomial<R>, nvars: usize, dim: usize) -> MatrixPolynomial<R> {
    coords
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(MatrixPolynomial::zero(nvars, dim), |acc, (i, c)| acc.add(&parts(i).scale(c)))
}

fn check_degree<R: Real>(p: &MatrixPolynomial<R>, max_deg: u32) -> Result<()> {
    match p.degree() {
        Some(deg) if deg > max_deg => Err(Error::DegreeOverflow { degree: deg, max_deg }),
        _ => Ok(()),
    }
}

/// A linear operator on operator polynomials of degree at most `max_deg`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyOperator<R: Real> {
    nvars: usize,
    dim: usize,
    max_deg: u32,
    images: BTreeMap<(usize, MultiIndex), MatrixPolynomial<R>>,
}

impl<R: Real> PolyOperator<R> {
    /// Builds `T` from `f(i, E_i, α) = T(E_i ⊗ x^α)` for `|α| ≤ max_deg`.
    pub fn from_fn(
        nvars: usize,
        dim: usize,
        max_deg: u32,
        mut f: impl FnMut(usize, &HermMatrix<R>, &MultiIndex) -> MatrixPolynomial<R>,
    ) -> Result<Self> {
        let basis = hermitian_basis(dim);
        let mut images = BTreeMap::new();
        for alpha in MultiIndex::all_up_to(nvars, max_deg) {
            for (i, e) in basis.iter().enumerate() {
                let img = f(i, e, &alpha);
                if img.nvars() != nvars || img.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: img.dim() });
                }
                images.insert((i, alpha.clone()), img);
            }
        }
        Ok(PolyOperator { nvars, dim, max_deg, images })
    }

    /// From an explicit image table; every `(i, α)` with `|α| ≤ max_deg`
    /// must be present exactly once.
    pub fn from_images(
        nvars: usize,
        dim: usize,
        max_deg: u32,
        images: BTreeMap<(usize, MultiIndex), MatrixPolynomial<R>>,
    ) -> Result<Self> {
        let expected = MultiIndex::all_up_to(nvars, max_deg).len() * dim * dim;
        for ((i, alpha), img) in &images {
            if *i >= dim * dim || alpha.nvars() != nvars || alpha.degree() > max_deg {
                return Err(Error::InvalidArgument(format!("image key ({i}, {alpha}) out of range")));
            }
            if img.nvars() != nvars || img.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: img.dim() });
            }
        }
        if images.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "operator needs {expected} basis images, found {}",
                images.len()
            )));
        }
        Ok(PolyOperator { nvars, dim, max_deg, images })
    }

    pub fn identity(nvars: usize, dim: usize, max_deg: u32) -> Self {
        Self::from_fn(nvars, dim, max_deg, |_, e, a| MatrixPolynomial::monomial(e.clone(), a.clone()))
            .expect("shapes agree")
    }

    /// `p ↦ −p`.
    pub fn negation(nvars: usize, dim: usize, max_deg: u32) -> Self {
        Self::from_fn(nvars, dim, max_deg, |_, e, a| MatrixPolynomial::monomial(-e, a.clone()))
            .expect("shapes agree")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_deg(&self) -> u32 {
        self.max_deg
    }

    pub fn images(&self) -> &BTreeMap<(usize, MultiIndex), MatrixPolynomial<R>> {
        &self.images
    }

    /// `T(E_i ⊗ x^α)`.
    pub fn image(&self, i: usize, alpha: &MultiIndex) -> Option<&MatrixPolynomial<R>> {
        self.images.get(&(i, alpha.clone()))
    }

    /// `T(A ⊗ x^α)` by real-linear expansion of `A` in the basis.
    pub fn apply_monomial(&self, a: &HermMatrix<R>, alpha: &MultiIndex) -> Result<MatrixPolynomial<R>> {
        if alpha.degree() > self.max_deg {
            return Err(Error::DegreeOverflow { degree: alpha.degree(), max_deg: self.max_deg });
        }
        if a.dim() != self.dim || alpha.nvars() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.dim() });
        }
        let coords = basis_coords(a);
        Ok(combine(&coords, |i| self.images[&(i, alpha.clone())].clone(), self.nvars, self.dim))
    }

    /// Linear extension of the stored basis images.
    pub fn apply(&self, p: &MatrixPolynomial<R>) -> Result<MatrixPolynomial<R>> {
        if p.nvars() != self.nvars || p.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: p.dim() });
        }
        check_degree(p, self.max_deg)?;
        p.terms().try_fold(MatrixPolynomial::zero(self.nvars, self.dim), |acc, (alpha, a)| {
            Ok(acc.add(&self.apply_monomial(a, alpha)?))
        })
    }

    /// Restriction to inputs of degree at most `max_deg`.
    pub fn truncate(&self, max_deg: u32) -> Result<Self> {
        if max_deg > self.max_deg {
            return Err(Error::DegreeOverflow { degree: max_deg, max_deg: self.max_deg });
        }
        let images = self
            .images
            .iter()
            .filter(|((_, a), _)| a.degree() <= max_deg)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Ok(PolyOperator { nvars: self.nvars, dim: self.dim, max_deg, images })
    }

    pub fn convert<S: Real>(&self) -> PolyOperator<S> {
        PolyOperator {
            nvars: self.nvars,
            dim: self.dim,
            max_deg: self.max_deg,
            images: self.images.iter().map(|(k, v)| (k.clone(), v.convert())).collect(),
        }
    }
}

/// The canonical maps `Q_β` for `|β| ≤ D`, stored by their values on the
/// basis `{E_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalRep<R: Real> {
    nvars: usize,
    dim: usize,
    max_deg: u32,
    q: BTreeMap<(usize, MultiIndex), MatrixPolynomial<R>>,
}

impl<R: Real> CanonicalRep<R> {
    /// Builds the representation from `f(i, E_i, β) = Q_β(E_i)`.
    pub fn from_fn(
        nvars: usize,
        dim: usize,
        max_deg: u32,
        mut f: impl FnMut(usize, &HermMatrix<R>, &MultiIndex) -> MatrixPolynomial<R>,
    ) -> Result<Self> {
        let basis = hermitian_basis(dim);
        let mut q = BTreeMap::new();
        for beta in MultiIndex::all_up_to(nvars, max_deg) {
            for (i, e) in basis.iter().enumerate() {
                let v = f(i, e, &beta);
                if v.nvars() != nvars || v.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
                }
                q.insert((i, beta.clone()), v);
            }
        }
        Ok(CanonicalRep { nvars, dim, max_deg, q })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_deg(&self) -> u32 {
        self.max_deg
    }

    pub fn entries(&self) -> &BTreeMap<(usize, MultiIndex), MatrixPolynomial<R>> {
        &self.q
    }

    /// `Q_β(E_i)`.
    pub fn q_basis(&self, i: usize, beta: &MultiIndex) -> Option<&MatrixPolynomial<R>> {
        self.q.get(&(i, beta.clone()))
    }

    /// `Q_β(A)` for any Hermitian `A`.
    pub fn q(&self, beta: &MultiIndex, a: &HermMatrix<R>) -> Result<MatrixPolynomial<R>> {
        if beta.degree() > self.max_deg {
            return Err(Error::DegreeOverflow { degree: beta.degree(), max_deg: self.max_deg });
        }
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.dim() });
        }
        Ok(combine(&basis_coords(a), |i| self.q[&(i, beta.clone())].clone(), self.nvars, self.dim))
    }

    /// `T p = Σ_α (1/α!) Q_α(·) ∂^α p`, evaluated through the canonical form.
    pub fn apply(&self, p: &MatrixPolynomial<R>) -> Result<MatrixPolynomial<R>> {
        check_degree(p, self.max_deg)?;
        let mut out = MatrixPolynomial::zero(self.nvars, self.dim);
        for (beta, a) in p.terms() {
            for alpha in beta.lower_set() {
                let rest = beta.checked_sub(&alpha).expect("alpha ⪯ beta");
                let w = R::from_u64(beta.binom(&alpha).expect("alpha ⪯ beta"));
                out = out.add(&self.q(&alpha, a)?.mul_monomial(&rest).scale(&w));
            }
        }
        Ok(out)
    }

    pub fn convert<S: Real>(&self) -> CanonicalRep<S> {
        CanonicalRep {
            nvars: self.nvars,
            dim: self.dim,
            max_deg: self.max_deg,
            q: self.q.iter().map(|(k, v)| (k.clone(), v.convert())).collect(),
        }
    }
}

fn sign<R: Real>(k: u32) -> R {
    if k.is_multiple_of(2) {
        R::one()
    } else {
        -R::one()
    }
}

/// `Q_β(E_i) = Σ_{α⪯β} binom(β,α) (−1)^{|β−α|} T(E_i ⊗ x^α) x^{β−α}`.
pub fn extract_canonical<R: Real>(t: &PolyOperator<R>) -> CanonicalRep<R> {
    CanonicalRep::from_fn(t.nvars, t.dim, t.max_deg, |i, _, beta| {
        beta.lower_set().into_iter().fold(MatrixPolynomial::zero(t.nvars, t.dim), |acc, alpha| {
            let rest = beta.checked_sub(&alpha).expect("alpha ⪯ beta");
            let w = R::from_u64(beta.binom(&alpha).expect("alpha ⪯ beta")) * sign::<R>(rest.degree());
            acc.add(&t.images[&(i, alpha.clone())].mul_monomial(&rest).scale(&w))
        })
    })
    .expect("shapes agree")
}

/// `T(E_i ⊗ x^β) = Σ_{α⪯β} binom(β,α) Q_α(E_i) x^{β−α}`.
pub fn reconstruct<R: Real>(c: &CanonicalRep<R>) -> PolyOperator<R> {
    PolyOperator::from_fn(c.nvars, c.dim, c.max_deg, |i, _, beta| {
        beta.lower_set().into_iter().fold(MatrixPolynomial::zero(c.nvars, c.dim), |acc, alpha| {
            let rest = beta.checked_sub(&alpha).expect("alpha ⪯ beta");
            let w = R::from_u64(beta.binom(&alpha).expect("alpha ⪯ beta"));
            acc.add(&c.q[&(i, alpha.clone())].mul_monomial(&rest).scale(&w))
        })
    })
    .expect("shapes agree")
}

/// The univariate operator `T(A ⊗ x^k) = T̃(A) ⊗ (x + y)^k` for `k ≤ max_deg`,
/// whose canonical maps are the constants `Q_m(A) = y^m T̃(A)`.
pub fn shift_example_operator<R: Real>(ttilde: &ChoiMap<R>, y: &R, max_deg: u32) -> Result<PolyOperator<R>> {
    let d = ttilde.dim();
    let basis = hermitian_basis::<R>(d);
    let mapped: Vec<HermMatrix<R>> = basis.iter().map(|e| ttilde.apply(e)).collect::<Result<_>>()?;
    PolyOperator::from_fn(1, d, max_deg, |i, _, alpha| {
        MatrixPolynomial::monomial(mapped[i].clone(), alpha.clone())
            .shift_arg(std::slice::from_ref(y))
            .expect("univariate")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::pow;
    use crate::algebra::{Cplx, Q};

    fn qi(v: i64) -> Q {
        <Q as Real>::from_i64(v)
    }

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    #[test]
    fn basis_matches_reference_for_d2() {
        let b = hermitian_basis::<Q>(2);
        assert_eq!(b[0], HermMatrix::diag(&[qi(1), qi(0)]));
        assert_eq!(b[1], HermMatrix::from_int_rows(&[vec![0, 1], vec![1, 0]]).unwrap());
        assert_eq!(*b[2].get(0, 1), Cplx::new(qi(0), qi(1)));
        assert_eq!(*b[2].get(1, 0), Cplx::new(qi(0), qi(-1)));
        assert_eq!(b[3], HermMatrix::diag(&[qi(0), qi(1)]));
        // pairwise orthogonal under tr(XY)
        for i in 0..4 {
            for j in 0..4 {
                let ip = b[i].trace_inner(&b[j]);
                assert_eq!(ip == qi(0), i != j);
            }
        }
    }

    #[test]
    fn coords_round_trip() {
        let mut m = Mat::<Q>::zeros(3, 3);
        let vals = [(0, 0, 1, 0), (1, 1, -2, 0), (2, 2, 5, 0), (0, 1, 3, -4), (0, 2, -1, 2), (1, 2, 7, 1)];
        for (j, k, re, im) in vals {
            m.set(j, k, Cplx::new(qi(re), qi(im)));
            m.set(k, j, Cplx::new(qi(re), qi(-im)));
        }
        let a = HermMatrix::new(m).unwrap();
        let c = basis_coords(&a);
        let basis = hermitian_basis::<Q>(3);
        let back = c.iter().zip(&basis).fold(HermMatrix::zeros(3), |acc, (ci, e)| &acc + &e.scale(ci));
        assert_eq!(back, a);
    }

    #[test]
    fn identity_operator() {
        let t = PolyOperator::<Q>::identity(2, 2, 3);
        let a = HermMatrix::from_int_rows(&[vec![1, 2], vec![2, 3]]).unwrap();
        let p = MatrixPolynomial::monomial(a.clone(), mi(&[1, 2])).add(&MatrixPolynomial::constant(2, a));
        assert_eq!(t.apply(&p).unwrap(), p);
        let c = extract_canonical(&t);
        for ((i, beta), q) in c.entries() {
            if beta.is_zero() {
                assert_eq!(q, &MatrixPolynomial::constant(2, basis_element(2, *i)));
            } else {
                assert!(q.is_zero());
            }
        }
    }

    #[test]
    fn degree_overflow() {
        let t = PolyOperator::<Q>::identity(1, 1, 2);
        let p = MatrixPolynomial::monomial(HermMatrix::identity(1), mi(&[3]));
        assert_eq!(t.apply(&p), Err(Error::DegreeOverflow { degree: 3, max_deg: 2 }));
    }

    fn multiplication_by_x() -> CanonicalRep<Q> {
        CanonicalRep::from_fn(1, 2, 4, |_, e, beta| {
            if beta.is_zero() {
                MatrixPolynomial::monomial(e.clone(), mi(&[1]))
            } else {
                MatrixPolynomial::zero(1, 2)
            }
        })
        .unwrap()
    }

    #[test]
    fn multiplication_operator_from_canonical_data() {
        let c = multiplication_by_x();
        let t = reconstruct(&c);
        let a = HermMatrix::from_int_rows(&[vec![2, 1], vec![1, 0]]).unwrap();
        for b in 0..=4 {
            let p = MatrixPolynomial::monomial(a.clone(), mi(&[b]));
            let expected = MatrixPolynomial::monomial(a.clone(), mi(&[b + 1]));
            assert_eq!(t.apply(&p).unwrap(), expected);
            assert_eq!(c.apply(&p).unwrap(), expected);
        }
        // the binomial sum telescopes: x^{β+1} (1 − 1)^β vanishes for β ≥ 1
        assert_eq!(extract_canonical(&t), c);
    }

    #[test]
    fn identity_from_constant_q0() {
        let c = CanonicalRep::<Q>::from_fn(2, 2, 3, |_, e, beta| {
            if beta.is_zero() {
                MatrixPolynomial::constant(2, e.clone())
            } else {
                MatrixPolynomial::zero(2, 2)
            }
        })
        .unwrap();
        assert_eq!(reconstruct(&c), PolyOperator::identity(2, 2, 3));
    }

    #[test]
    fn shift_example_canonical_maps() {
        let cases: Vec<(Q, ChoiMap<Q>)> = vec![
            (qi(0), ChoiMap::identity(2)),
            (qi(2), ChoiMap::identity(2)),
            (qi(1), ChoiMap::congruence(&Mat::diag(&[qi(1), qi(2)])).unwrap()),
        ];
        for (y, tt) in cases {
            let t = shift_example_operator(&tt, &y, 3).unwrap();
            let c = extract_canonical(&t);
            for (i, e) in hermitian_basis::<Q>(2).iter().enumerate() {
                for m in 0..=3u32 {
                    let expected = MatrixPolynomial::constant(1, tt.apply(e).unwrap().scale(&pow(&y, m)));
                    assert_eq!(c.q_basis(i, &mi(&[m])).unwrap(), &expected);
                }
            }
            assert_eq!(reconstruct(&c), t);
        }
    }

    #[test]
    fn shift_example_with_irrational_congruence() {
        // S = diag(1, √3) in floating point: Q_m(A) = S A S for y = 1
        let s = Mat::<f64>::diag(&[1.0, 3f64.sqrt()]);
        let tt = ChoiMap::congruence(&s).unwrap();
        let t = shift_example_operator(&tt, &1.0, 4).unwrap();
        let c = extract_canonical(&t);
        for (i, e) in hermitian_basis::<f64>(2).iter().enumerate() {
            let want = e.congruence(&s);
            for m in 0..=4u32 {
                let got = c.q_basis(i, &mi(&[m])).unwrap();
                let diff = got.sub(&MatrixPolynomial::constant(1, want.clone()));
                assert!(diff.max_abs() <= 1e-10, "m = {m}: {diff:?}");
            }
        }
    }

    #[test]
    fn canonical_and_image_paths_agree() {
        let t = shift_example_operator(&ChoiMap::<Q>::depolarizing(2), &qi(-3), 4).unwrap();
        let c = extract_canonical(&t);
        let a = HermMatrix::from_int_rows(&[vec![5, -2], vec![-2, 1]]).unwrap();
        let p = MatrixPolynomial::monomial(a.clone(), mi(&[4])).add(&MatrixPolynomial::monomial(a, mi(&[1])));
        assert_eq!(t.apply(&p).unwrap(), c.apply(&p).unwrap());
    }

    #[test]
    fn from_images_validates_completeness() {
        let t = PolyOperator::<Q>::identity(1, 2, 2);
        let mut images = t.images().clone();
        assert_eq!(PolyOperator::from_images(1, 2, 2, images.clone()).unwrap(), t);
        images.remove(&(0, mi(&[1])));
        assert!(PolyOperator::from_images(1, 2, 2, images).is_err());
    }
}
