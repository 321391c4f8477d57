//! Scalar and Hermitian-matrix-valued multivariate polynomials.

use std::collections::BTreeMap;

use crate::algebra::scalar::pow;
use crate::algebra::{convert, HermMatrix, MultiIndex, Real};
use crate::error::{Error, Result};

/// `x^α` evaluated at a point.
pub fn monomial_value<R: Real>(x: &[R], alpha: &MultiIndex) -> R {
    x.iter()
        .zip(alpha.exponents())
        .fold(R::one(), |acc, (xi, &e)| if e == 0 { acc } else { acc * pow(xi, e) })
}

/// Real polynomial in `nvars` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarPoly<R: Real> {
    nvars: usize,
    terms: BTreeMap<MultiIndex, R>,
}

impl<R: Real> ScalarPoly<R> {
    pub fn zero(nvars: usize) -> Self {
        ScalarPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: R) -> Self {
        Self::monomial(c, MultiIndex::zero(nvars))
    }

    pub fn monomial(c: R, alpha: MultiIndex) -> Self {
        let mut p = Self::zero(alpha.nvars());
        p.add_term(alpha, c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(R::one(), MultiIndex::unit(nvars, i))
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (MultiIndex, R)>) -> Self {
        let mut p = Self::zero(nvars);
        for (a, c) in terms {
            p.add_term(a, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &R)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> R {
        self.terms.get(alpha).cloned().unwrap_or_else(R::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: R) {
        assert_eq!(alpha.nvars(), self.nvars, "multi-index arity mismatch");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(alpha.clone()).or_insert_with(R::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&alpha);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-R::one()))
    }

    pub fn scale(&self, s: &R) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(a, c)| (a.clone(), c.clone() * s.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (a, c) in &self.terms {
            for (b, e) in &other.terms {
                out.add_term(a.add(b), c.clone() * e.clone());
            }
        }
        out
    }

    pub fn eval(&self, x: &[R]) -> R {
        self.terms
            .iter()
            .fold(R::zero(), |acc, (a, c)| acc + c.clone() * monomial_value(x, a))
    }

    /// `q(x) = p(x + y)`.
    pub fn shift_arg(&self, y: &[R]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (alpha, c) in &self.terms {
            for gamma in alpha.lower_set() {
                let rest = alpha.checked_sub(&gamma).expect("gamma ⪯ alpha");
                let w = R::from_u64(alpha.binom(&gamma).expect("gamma ⪯ alpha")) * monomial_value(y, &rest);
                out.add_term(gamma, c.clone() * w);
            }
        }
        out
    }

    pub fn convert<S: Real>(&self) -> ScalarPoly<S> {
        ScalarPoly::from_terms(self.nvars, self.terms.iter().map(|(a, c)| (a.clone(), convert(c))))
    }
}

/// Hermitian-matrix-valued polynomial `p = Σ p_α x^α`.
///
/// Coefficients are kept in a graded-lex ordered map with no stored zero
/// coefficient, so equal polynomials compare equal structurally.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial<R: Real> {
    nvars: usize,
    dim: usize,
    terms: BTreeMap<MultiIndex, HermMatrix<R>>,
}

impl<R: Real> MatrixPolynomial<R> {
    pub fn zero(nvars: usize, dim: usize) -> Self {
        MatrixPolynomial { nvars, dim, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, a: HermMatrix<R>) -> Self {
        Self::monomial(a, MultiIndex::zero(nvars))
    }

    /// `A ⊗ x^α`.
    pub fn monomial(a: HermMatrix<R>, alpha: MultiIndex) -> Self {
        let mut p = Self::zero(alpha.nvars(), a.dim());
        p.add_term(alpha, &a);
        p
    }

    /// `A ⊗ s` for a scalar polynomial `s`.
    pub fn from_scalar(a: &HermMatrix<R>, s: &ScalarPoly<R>) -> Self {
        let mut p = Self::zero(s.nvars(), a.dim());
        for (alpha, c) in s.terms() {
            p.add_term(alpha.clone(), &a.scale(c));
        }
        p
    }

    pub fn from_terms(
        nvars: usize,
        dim: usize,
        terms: impl IntoIterator<Item = (MultiIndex, HermMatrix<R>)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars, dim);
        for (alpha, a) in terms {
            if alpha.nvars() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: alpha.nvars() });
            }
            if a.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: a.dim() });
            }
            p.add_term(alpha, &a);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &HermMatrix<R>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Option<&HermMatrix<R>> {
        self.terms.get(alpha)
    }

    /// Total degree; `None` stands for the `−∞` degree of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(HermMatrix::max_abs).fold(0.0, f64::max)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, a: &HermMatrix<R>) {
        assert_eq!(alpha.nvars(), self.nvars, "multi-index arity mismatch");
        assert_eq!(a.dim(), self.dim, "coefficient dimension mismatch");
        if a.is_zero() {
            return;
        }
        let sum = match self.terms.get(&alpha) {
            Some(prev) => prev + a,
            None => a.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&alpha);
        } else {
            self.terms.insert(alpha, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-R::one()))
    }

    pub fn scale(&self, s: &R) -> Self {
        let mut out = Self::zero(self.nvars, self.dim);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), &c.scale(s));
        }
        out
    }

    /// `s · p` for a scalar polynomial `s`.
    pub fn mul_scalar(&self, s: &ScalarPoly<R>) -> Self {
        let mut out = Self::zero(self.nvars, self.dim);
        for (a, c) in &self.terms {
            for (b, e) in s.terms() {
                out.add_term(a.add(b), &c.scale(e));
            }
        }
        out
    }

    /// `x^α · p`.
    pub fn mul_monomial(&self, alpha: &MultiIndex) -> Self {
        MatrixPolynomial {
            nvars: self.nvars,
            dim: self.dim,
            terms: self.terms.iter().map(|(a, c)| (a.add(alpha), c.clone())).collect(),
        }
    }

    /// `Σ_α p_α · x^α`, summed monomial by monomial.
    pub fn eval(&self, x: &[R]) -> Result<HermMatrix<R>> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: x.len() });
        }
        let mut acc = HermMatrix::zeros(self.dim);
        for (alpha, c) in &self.terms {
            acc = &acc + &c.scale(&monomial_value(x, alpha));
        }
        Ok(acc)
    }

    /// `∂^α p`.
    pub fn derivative(&self, alpha: &MultiIndex) -> Self {
        let mut out = Self::zero(self.nvars, self.dim);
        for (beta, c) in &self.terms {
            if let Some(gamma) = beta.checked_sub(alpha) {
                let w = R::from_u64(beta.falling_factorial(alpha));
                out.add_term(gamma, &c.scale(&w));
            }
        }
        out
    }

    /// `q(x) = p(x + y)`, via binomial expansion of each monomial.
    pub fn shift_arg(&self, y: &[R]) -> Result<Self> {
        if y.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: y.len() });
        }
        let mut out = Self::zero(self.nvars, self.dim);
        for (alpha, c) in &self.terms {
            for gamma in alpha.lower_set() {
                let rest = alpha.checked_sub(&gamma).expect("gamma ⪯ alpha");
                let w = R::from_u64(alpha.binom(&gamma).expect("gamma ⪯ alpha")) * monomial_value(y, &rest);
                out.add_term(gamma, &c.scale(&w));
            }
        }
        Ok(out)
    }

    pub fn convert<S: Real>(&self) -> MatrixPolynomial<S> {
        MatrixPolynomial {
            nvars: self.nvars,
            dim: self.dim,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c.map(convert::<R, S>))).collect(),
        }
    }
}
