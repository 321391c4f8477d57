//! Truncated operator moment sequences, block moment and localizing
//! matrices, and the block / compression positivity tests.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::psd::scaled_tolerance;
use crate::algebra::scalar::{cplx_one, imag_unit, pow};
use crate::algebra::{Cplx, HermMatrix, MultiIndex, PsdVerdict, Real, Q};
use crate::error::{Error, Result};
use crate::matpoly::{RegionK, ScalarPoly};
use crate::measures::AtomicOperatorMeasure;

/// Largest `kMax` accepted by [`bisgaard_sequence`].
pub const BISGAARD_MAX_K: u32 = 8;

/// `(S_α)_{|α| ≤ order}` with Hermitian entries of a common dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSequence<R: Real> {
    nvars: usize,
    dim: usize,
    order: u32,
    entries: BTreeMap<MultiIndex, HermMatrix<R>>,
}

impl<R: Real> OperatorSequence<R> {
    /// Validates that every `|α| ≤ order` is present and nothing else is.
    pub fn new(nvars: usize, dim: usize, order: u32, entries: BTreeMap<MultiIndex, HermMatrix<R>>) -> Result<Self> {
        for (alpha, s) in &entries {
            if alpha.nvars() != nvars || alpha.degree() > order {
                return Err(Error::InvalidArgument(format!("sequence index {alpha} out of range")));
            }
            if s.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: s.dim() });
            }
        }
        let expected = MultiIndex::all_up_to(nvars, order).len();
        if entries.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "sequence of order {order} needs {expected} entries, found {}",
                entries.len()
            )));
        }
        Ok(OperatorSequence { nvars, dim, order, entries })
    }

    pub fn from_fn(nvars: usize, dim: usize, order: u32, mut f: impl FnMut(&MultiIndex) -> HermMatrix<R>) -> Result<Self> {
        let entries = MultiIndex::all_up_to(nvars, order).into_iter().map(|a| {
            let s = f(&a);
            (a, s)
        });
        Self::new(nvars, dim, order, entries.collect())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn entries(&self) -> &BTreeMap<MultiIndex, HermMatrix<R>> {
        &self.entries
    }

    pub fn entry(&self, alpha: &MultiIndex) -> Option<&HermMatrix<R>> {
        self.entries.get(alpha)
    }

    /// The scalar sequence `⟨S_α a, a⟩`, as a sequence of `1 × 1` matrices.
    pub fn compress(&self, a: &[Cplx<R>]) -> Result<OperatorSequence<R>> {
        if a.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.len() });
        }
        let entries = self.entries.iter().map(|(k, s)| (k.clone(), HermMatrix::diag(&[s.quad_form(a)])));
        Ok(OperatorSequence { nvars: self.nvars, dim: 1, order: self.order, entries: entries.collect() })
    }

    pub fn truncate(&self, order: u32) -> Result<Self> {
        if order > self.order {
            return Err(Error::InsufficientOrder { order: self.order, required: order });
        }
        let entries = self.entries.iter().filter(|(a, _)| a.degree() <= order);
        Ok(OperatorSequence {
            nvars: self.nvars,
            dim: self.dim,
            order,
            entries: entries.map(|(a, s)| (a.clone(), s.clone())).collect(),
        })
    }

    pub fn convert<S: Real>(&self) -> OperatorSequence<S> {
        OperatorSequence {
            nvars: self.nvars,
            dim: self.dim,
            order: self.order,
            entries: self.entries.iter().map(|(a, s)| (a.clone(), s.map(crate::algebra::convert))).collect(),
        }
    }
}

/// Block matrix `(S_{α+β})_{|α|,|β| ≤ D}` in graded-lex order, of size
/// `d · C(n + D, n)`.
pub fn moment_matrix<R: Real>(s: &OperatorSequence<R>, d: u32) -> Result<HermMatrix<R>> {
    localizing_matrix(s, &ScalarPoly::constant(s.nvars, R::one()), d)
}

/// Block matrix with `(α, β)` block `Σ_γ g_γ S_{α+β+γ}`.
pub fn localizing_matrix<R: Real>(s: &OperatorSequence<R>, g: &ScalarPoly<R>, d: u32) -> Result<HermMatrix<R>> {
    if g.nvars() != s.nvars {
        return Err(Error::DimensionMismatch { expected: s.nvars, found: g.nvars() });
    }
    let required = 2 * d + g.degree().unwrap_or(0);
    if required > s.order {
        return Err(Error::InsufficientOrder { order: s.order, required });
    }
    let basis = MultiIndex::all_up_to(s.nvars, d);
    let blocks: Vec<Vec<HermMatrix<R>>> = basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| {
                    let ab = a.add(b);
                    g.terms().fold(HermMatrix::zeros(s.dim), |acc, (gamma, c)| {
                        &acc + &s.entries[&ab.add(gamma)].scale(c)
                    })
                })
                .collect()
        })
        .collect();
    Ok(HermMatrix::from_blocks(&blocks))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentMode {
    Block,
    Compression,
}

impl fmt::Display for MomentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MomentMode::Block => "block",
            MomentMode::Compression => "compression",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixCheck<R: Real> {
    pub label: String,
    pub size: usize,
    pub verdict: PsdVerdict<R>,
}

/// Outcome of a truncated moment test. A failure certifies that the sequence
/// is not a (truncated) moment sequence in the tested sense; a pass is only
/// necessary-condition evidence.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVerdict<R: Real> {
    pub mode: MomentMode,
    pub checks: Vec<MatrixCheck<R>>,
    pub pass: bool,
}

impl<R: Real> MomentVerdict<R> {
    /// The first failing matrix and its witness vector.
    pub fn witness(&self) -> Option<(&str, &[Cplx<R>])> {
        self.checks
            .iter()
            .find(|c| !c.verdict.is_psd)
            .and_then(|c| c.verdict.witness.as_deref().map(|w| (c.label.as_str(), w)))
    }
}

/// Moment and localizing matrices of `s` for `K`, labelled. Localizing
/// matrices use the largest order `D − ⌈deg g / 2⌉` that fits and are
/// omitted when that is negative.
fn block_matrices<R: Real>(s: &OperatorSequence<R>, region: &RegionK, d: u32) -> Result<Vec<(String, HermMatrix<R>)>> {
    let mut out = vec![(format!("moment(D={d})"), moment_matrix(s, d)?)];
    for (j, g) in region.constraints::<R>().iter().enumerate() {
        let half = g.degree().unwrap_or(0).div_ceil(2);
        if half <= d {
            let dj = d - half;
            out.push((format!("localizing[{j}](D={dj})"), localizing_matrix(s, g, dj)?));
        }
    }
    Ok(out)
}

/// Tests the truncated moment conditions of order `D` on `K`.
///
/// `Block` checks the block moment and localizing matrices of `s`;
/// `Compression` checks the scalar ones of `⟨S_α a, a⟩` for every probe `a`.
/// For the floating backend `tol` is scaled by `1 + maxAbsEntry` per matrix.
pub fn truncated_moment_test<R: Real>(
    s: &OperatorSequence<R>,
    region: &RegionK,
    d: u32,
    mode: MomentMode,
    probes: &[Vec<Cplx<R>>],
    tol: f64,
) -> Result<MomentVerdict<R>> {
    if region.nvars() != s.nvars {
        return Err(Error::DimensionMismatch { expected: s.nvars, found: region.nvars() });
    }
    let matrices = match mode {
        MomentMode::Block => block_matrices(s, region, d)?,
        MomentMode::Compression => {
            if probes.is_empty() {
                return Err(Error::InvalidArgument("compression mode needs at least one probe".into()));
            }
            let mut all = Vec::new();
            for (k, a) in probes.iter().enumerate() {
                let compressed = s.compress(a)?;
                for (label, m) in block_matrices(&compressed, region, d)? {
                    all.push((format!("probe[{k}]/{label}"), m));
                }
            }
            all
        }
    };
    let checks: Vec<MatrixCheck<R>> = matrices
        .into_par_iter()
        .map(|(label, m)| {
            let verdict = R::psd_check(&m, scaled_tolerance(&m, tol));
            MatrixCheck { label, size: m.dim(), verdict }
        })
        .collect();
    let pass = checks.iter().all(|c| c.verdict.is_psd);
    Ok(MomentVerdict { mode, checks, pass })
}

/// `e_j`, then `e_j + e_k` and `e_j + i e_k` for `j < k`.
pub fn default_probes<R: Real>(dim: usize) -> Vec<Vec<Cplx<R>>> {
    let unit = |j: usize| {
        let mut v = vec![Cplx::new(R::zero(), R::zero()); dim];
        v[j] = cplx_one();
        v
    };
    let mut out: Vec<Vec<Cplx<R>>> = (0..dim).map(unit).collect();
    for j in 0..dim {
        for k in j + 1..dim {
            let mut v = unit(j);
            v[k] = cplx_one();
            out.push(v);
        }
    }
    for j in 0..dim {
        for k in j + 1..dim {
            let mut v = unit(j);
            v[k] = imag_unit();
            out.push(v);
        }
    }
    out
}

/// `S′_β = Σ_{α⪯β} binom(β, α) (−y)^{β−α} S_α`: the moments of `μ(· + y)`
/// when `S` are the moments of `μ`.
pub fn shift_sequence<R: Real>(s: &OperatorSequence<R>, y: &[R]) -> Result<OperatorSequence<R>> {
    if y.len() != s.nvars {
        return Err(Error::DimensionMismatch { expected: s.nvars, found: y.len() });
    }
    let neg: Vec<R> = y.iter().map(|v| -v.clone()).collect();
    OperatorSequence::from_fn(s.nvars, s.dim, s.order, |beta| {
        beta.lower_set().iter().fold(HermMatrix::zeros(s.dim), |acc, alpha| {
            let rest = beta.checked_sub(alpha).expect("alpha ⪯ beta");
            let w = R::from_u64(beta.binom(alpha).expect("alpha ⪯ beta"))
                * rest.exponents().iter().zip(&neg).fold(R::one(), |p, (e, v)| p * pow(v, *e));
            &acc + &s.entries[alpha].scale(&w)
        })
    })
}

/// `S_α = ∫ t^α dμ` for `|α| ≤ order`.
pub fn sequence_from_measure<R: Real>(mu: &AtomicOperatorMeasure<R>, order: u32) -> OperatorSequence<R> {
    OperatorSequence::from_fn(mu.nvars(), mu.dim(), order, |a| mu.integrate_monomial(a)).expect("complete by construction")
}

/// `a_k = 2^{(k+2)!}`.
pub fn bisgaard_gap(k: u32) -> Q {
    let e = (1..=k + 2).product::<u32>();
    Q::from_integer(BigInt::from(1u8) << e)
}

/// The univariate `2 × 2` sequence `Q_0 = [[4,0],[0,1]]`,
/// `Q_1 = [[0,2],[2,0]]`, `Q_2 = [[1,0],[0,4]]`, `Q_{2k−1} = 0` and
/// `Q_{2k} = a_k I` for `k ≥ 2`, of order `2 kMax`.
pub fn bisgaard_sequence(k_max: u32) -> Result<OperatorSequence<Q>> {
    if !(1..=BISGAARD_MAX_K).contains(&k_max) {
        return Err(Error::OutOfRange(format!("kMax must lie in 1..={BISGAARD_MAX_K}, got {k_max}")));
    }
    OperatorSequence::from_fn(1, 2, 2 * k_max, |alpha| {
        let m = alpha.degree();
        match m {
            0 => HermMatrix::from_int_rows(&[vec![4, 0], vec![0, 1]]).expect("symmetric"),
            1 => HermMatrix::from_int_rows(&[vec![0, 2], vec![2, 0]]).expect("symmetric"),
            2 => HermMatrix::from_int_rows(&[vec![1, 0], vec![0, 4]]).expect("symmetric"),
            _ if m % 2 == 1 => HermMatrix::zeros(2),
            _ => HermMatrix::identity(2).scale(&bisgaard_gap(m / 2)),
        }
    })
}
