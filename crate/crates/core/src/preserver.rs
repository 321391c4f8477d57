//! Positivity preservers built from translation-covariant map-measure
//! families, sampled preservation checks, and the moment-side necessary
//! conditions on the canonical maps `Q_α(A)(y)`.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;

use crate::algebra::scalar::{cplx_one, cplx_zero, imag_unit};
use crate::algebra::{convert, eig_min, Cplx, HermMatrix, Mat, MultiIndex, Real, Q};
use crate::error::{Error, Result};
use crate::linop::{extract_canonical, CanonicalRep, PolyOperator};
use crate::matpoly::{pos_sample, GridSpec, MatrixPolynomial, RegionK, ScalarPoly};
use crate::measures::{AtomicMapMeasure, ChoiMap, MapAtom};
use crate::moments::{
    bisgaard_sequence, default_probes, moment_matrix, truncated_moment_test, MomentMode, MomentVerdict,
    OperatorSequence,
};
use crate::random;

/// `ν_y = Σ_i Φ_i δ_{c_i}` on `K − y` for every `y`, with completely
/// positive `Φ_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct CovariantMeasureFamily<R: Real> {
    dim: usize,
    offsets: Vec<Vec<R>>,
    maps: Vec<ChoiMap<R>>,
    region: RegionK,
}

impl<R: Real> CovariantMeasureFamily<R> {
    pub fn new(offsets: Vec<Vec<R>>, maps: Vec<ChoiMap<R>>, region: RegionK, tol: f64) -> Result<Self> {
        if offsets.len() != maps.len() {
            return Err(Error::InvalidArgument(format!(
                "{} offsets but {} maps",
                offsets.len(),
                maps.len()
            )));
        }
        let dim = maps.first().map_or(1, ChoiMap::dim);
        for (i, (c, m)) in offsets.iter().zip(&maps).enumerate() {
            if c.len() != region.nvars() {
                return Err(Error::DimensionMismatch { expected: region.nvars(), found: c.len() });
            }
            if m.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
            }
            if !m.is_completely_positive(tol) {
                return Err(Error::NonPsdChoi(i));
            }
        }
        Ok(CovariantMeasureFamily { dim, offsets, maps, region })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nvars(&self) -> usize {
        self.region.nvars()
    }

    pub fn offsets(&self) -> &[Vec<R>] {
        &self.offsets
    }

    pub fn maps(&self) -> &[ChoiMap<R>] {
        &self.maps
    }

    pub fn region(&self) -> &RegionK {
        &self.region
    }

    pub fn convert<S: Real>(&self) -> CovariantMeasureFamily<S> {
        CovariantMeasureFamily {
            dim: self.dim,
            offsets: self.offsets.iter().map(|c| c.iter().map(convert).collect()).collect(),
            maps: self.maps.iter().map(ChoiMap::convert).collect(),
            region: self.region.clone(),
        }
    }

    /// `ν_y` as a map-valued measure on `K − y`; fails when some `y + c_i ∉ K`.
    pub fn measure_at(&self, y: &[R]) -> Result<AtomicMapMeasure<R>> {
        let atoms = self
            .offsets
            .iter()
            .zip(&self.maps)
            .map(|(c, m)| MapAtom { point: c.clone(), map: m.clone() })
            .collect();
        AtomicMapMeasure::new(self.dim, atoms, self.region.translated(y)?)
    }
}

/// `T(A ⊗ x^β)(y) = Σ_i (y + c_i)^β Φ_i(A)` for `|β| ≤ max_deg`. The maps
/// are not required to be positive.
pub fn build_from_parts<R: Real>(
    nvars: usize,
    dim: usize,
    offsets: &[Vec<R>],
    maps: &[ChoiMap<R>],
    max_deg: u32,
) -> Result<PolyOperator<R>> {
    let basis = crate::linop::hermitian_basis::<R>(dim);
    let mapped: Vec<Vec<HermMatrix<R>>> = maps
        .iter()
        .map(|m| basis.iter().map(|e| m.apply(e)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut err = None;
    let op = PolyOperator::from_fn(nvars, dim, max_deg, |i, _, beta| {
        offsets.iter().zip(&mapped).fold(MatrixPolynomial::zero(nvars, dim), |acc, (c, m)| {
            match MatrixPolynomial::monomial(m[i].clone(), beta.clone()).shift_arg(c) {
                Ok(term) => acc.add(&term),
                Err(e) => {
                    err.get_or_insert(e);
                    acc
                }
            }
        })
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(op),
    }
}

pub fn build_from_family<R: Real>(family: &CovariantMeasureFamily<R>, max_deg: u32) -> Result<PolyOperator<R>> {
    build_from_parts(family.nvars(), family.dim, &family.offsets, &family.maps, max_deg)
}

/// A random family with between one and `max_atoms` atoms whose offsets lie
/// in `offset_region` on the grid `Z/4`.
pub fn random_family<R: Real>(
    rng: &mut random::TestRng,
    dim: usize,
    max_atoms: usize,
    offset_region: &RegionK,
    region: RegionK,
) -> CovariantMeasureFamily<R> {
    let count = rng.gen_range(1..=max_atoms.max(1));
    let offsets = (0..count).map(|_| random::random_point(rng, offset_region, 4)).collect();
    let maps = (0..count).map(|_| random::random_cp_map(rng, dim)).collect();
    CovariantMeasureFamily::new(offsets, maps, region, crate::algebra::DEFAULT_PSD_TOL)
        .expect("Kraus maps are completely positive")
}

/// The family-built operator with some atom maps negated: each with
/// probability 1/2, and always the one with the largest Choi trace.
pub fn sign_corrupted_operator<R: Real>(
    family: &CovariantMeasureFamily<R>,
    max_deg: u32,
    seed: u64,
) -> Result<PolyOperator<R>> {
    let mut rng = random::rng(seed);
    let heaviest = family
        .maps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.choi().trace().to_f64().total_cmp(&b.1.choi().trace().to_f64()))
        .map_or(0, |(i, _)| i);
    let maps: Vec<ChoiMap<R>> = family
        .maps
        .iter()
        .enumerate()
        .map(|(i, m)| if i == heaviest || rng.gen_bool(0.5) { m.scale(&-R::one()) } else { m.clone() })
        .collect();
    build_from_parts(family.nvars(), family.dim, &family.offsets, &maps, max_deg)
}

/// A rectangular matrix polynomial `G(x) = Σ_α G_α x^α`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFactor<R: Real> {
    pub nvars: usize,
    pub rows: usize,
    pub cols: usize,
    pub terms: BTreeMap<MultiIndex, Mat<R>>,
}

impl<R: Real> MatrixFactor<R> {
    pub fn random(rng: &mut random::TestRng, nvars: usize, rows: usize, cols: usize, deg: u32) -> Self {
        let terms = MultiIndex::all_up_to(nvars, deg)
            .into_iter()
            .map(|a| (a, random::random_mat(rng, rows, cols, 8, 8)))
            .collect();
        MatrixFactor { nvars, rows, cols, terms }
    }

    /// `G(x)* G(x)`.
    pub fn gram(&self) -> MatrixPolynomial<R> {
        let mut acc: BTreeMap<MultiIndex, Mat<R>> = BTreeMap::new();
        for (a, ga) in &self.terms {
            let ga_star = ga.adjoint();
            for (b, gb) in &self.terms {
                let prod = ga_star.mul(gb);
                let key = a.add(b);
                let sum = match acc.remove(&key) {
                    Some(prev) => &prev + &prod,
                    None => prod,
                };
                acc.insert(key, sum);
            }
        }
        let mut p = MatrixPolynomial::zero(self.nvars, self.cols);
        for (a, m) in acc {
            p.add_term(a, &HermMatrix::from_hermitian_part(&m));
        }
        p
    }
}

/// `G*G + Σ_j g_j H_j*H_j`.
pub fn positive_poly_from_factors<R: Real>(
    g: &MatrixFactor<R>,
    weighted: &[(ScalarPoly<R>, MatrixFactor<R>)],
) -> MatrixPolynomial<R> {
    weighted.iter().fold(g.gram(), |acc, (w, h)| acc.add(&h.gram().mul_scalar(w)))
}

/// A seeded element of `Pos(K)`: `G*G + Σ_j g_j H_j*H_j` with `g_j` the
/// defining polynomials of `K` and random complex `d × d` factors with
/// entries in `{k/8 : |k| ≤ 8}`. `G` has degree `⌊deg/2⌋`; `H_j` has the
/// largest degree keeping the total at most `deg`, and is omitted when
/// `deg g_j > deg`.
pub fn random_positive_poly<R: Real>(region: &RegionK, deg: u32, dim: usize, seed: u64) -> MatrixPolynomial<R> {
    let mut rng = random::rng(seed);
    let n = region.nvars();
    let g = MatrixFactor::random(&mut rng, n, dim, dim, deg / 2);
    let weighted: Vec<(ScalarPoly<R>, MatrixFactor<R>)> = region
        .constraints::<R>()
        .into_iter()
        .filter_map(|gj| {
            let dg = gj.degree().unwrap_or(0);
            (dg <= deg).then(|| {
                let h = MatrixFactor::random(&mut rng, n, dim, dim, (deg - dg) / 2);
                (gj, h)
            })
        })
        .collect();
    positive_poly_from_factors(&g, &weighted)
}

/// Seed of trial `k` for a base seed.
pub fn trial_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add(k as u64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct WorstCase {
    pub trial: usize,
    pub seed: u64,
    pub point: Vec<f64>,
    pub min_eig: f64,
}

/// Outcome of [`check_preserver_sampling`]. A failure certifies that `T`
/// is not a `K`-preserver; a pass is sampled evidence only.
#[derive(Clone, Debug, PartialEq)]
pub struct PreserverReport {
    pub trials: usize,
    pub points_per_trial: usize,
    pub worst: Option<WorstCase>,
    pub tol: f64,
    pub pass: bool,
}

/// Applies `T` to `trials` seeded elements of `Pos(K)` of degree `deg` and
/// samples each image on `grid`. Ties between trials go to the earliest.
pub fn check_preserver_sampling<R: Real>(
    t: &PolyOperator<R>,
    region: &RegionK,
    trials: usize,
    deg: u32,
    grid: &GridSpec,
    tol: f64,
    seed: u64,
) -> Result<PreserverReport> {
    if deg > t.max_deg() {
        return Err(Error::DegreeOverflow { degree: deg, max_deg: t.max_deg() });
    }
    if region.nvars() != t.nvars() {
        return Err(Error::DimensionMismatch { expected: t.nvars(), found: region.nvars() });
    }
    let reports = (0..trials)
        .into_par_iter()
        .map(|k| {
            let s = trial_seed(seed, k);
            let p = random_positive_poly::<R>(region, deg, t.dim(), s);
            let image = t.apply(&p)?;
            Ok((k, s, pos_sample(&image, region, grid, tol)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = reports.iter().min_by(|a, b| a.2.worst_min_eig.total_cmp(&b.2.worst_min_eig).then(a.0.cmp(&b.0)));
    Ok(PreserverReport {
        trials,
        points_per_trial: reports.first().map_or(0, |r| r.2.points_tested),
        pass: reports.iter().all(|r| r.2.pass),
        worst: worst.map(|(k, s, r)| WorstCase {
            trial: *k,
            seed: *s,
            point: r.worst_point.clone(),
            min_eig: r.worst_min_eig,
        }),
        tol,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BorceaMode {
    /// Compression of `(Q_α(A)(y))_α` by vector probes.
    Local,
    /// Block moment and localizing matrices of `(Q_α(A)(y))_α`.
    Block,
}

impl std::fmt::Display for BorceaMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BorceaMode::Local => "local",
            BorceaMode::Block => "block",
        })
    }
}

/// `E_jj`, then `(e_j ± e_k)(e_j ± e_k)*` and `(e_j ± i e_k)(e_j ± i e_k)*`
/// for `j < k`.
pub fn default_probe_matrices<R: Real>(dim: usize) -> Vec<HermMatrix<R>> {
    let unit = |j: usize| {
        let mut v = vec![cplx_zero::<R>(); dim];
        v[j] = cplx_one();
        v
    };
    let mut out: Vec<HermMatrix<R>> = (0..dim).map(|j| HermMatrix::outer(&unit(j))).collect();
    let phases: [Cplx<R>; 4] = [cplx_one(), -cplx_one::<R>(), imag_unit(), -imag_unit::<R>()];
    for j in 0..dim {
        for k in j + 1..dim {
            for ph in &phases {
                let mut v = unit(j);
                v[k] = ph.clone();
                out.push(HermMatrix::outer(&v));
            }
        }
    }
    out
}

/// Default `y`-grid: `per_axis` points per axis of `K`'s bounding box (or
/// of `window`) that lie in `K`, converted exactly to the backend.
pub fn default_y_grid<R: Real>(region: &RegionK, grid: &GridSpec) -> Result<Vec<Vec<R>>> {
    Ok(grid
        .points(region)?
        .into_iter()
        .map(|(_, x)| x.iter().map(|v| convert::<f64, R>(v)).collect())
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BorceaCell<R: Real> {
    pub y: Vec<R>,
    pub probe: usize,
    pub verdict: MomentVerdict<R>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BorceaReport<R: Real> {
    pub mode: BorceaMode,
    pub order: u32,
    pub cells: Vec<BorceaCell<R>>,
    pub pass: bool,
}

impl<R: Real> BorceaReport<R> {
    pub fn first_failure(&self) -> Option<&BorceaCell<R>> {
        self.cells.iter().find(|c| !c.verdict.pass)
    }
}

/// The sequence `(Q_α(A)(y))_{|α| ≤ order}`.
pub fn canonical_sequence<R: Real>(
    canon: &CanonicalRep<R>,
    a: &HermMatrix<R>,
    y: &[R],
    order: u32,
) -> Result<OperatorSequence<R>> {
    let mut err = None;
    let seq = OperatorSequence::from_fn(canon.nvars(), canon.dim(), order, |alpha| {
        match canon.q(alpha, a).and_then(|q| q.eval(y)) {
            Ok(m) => m,
            Err(e) => {
                err.get_or_insert(e);
                HermMatrix::zeros(canon.dim())
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(seq),
    }
}

/// For every `y` and probe matrix `A`, tests `(Q_α(A)(y))_{|α| ≤ 2D}` as a
/// truncated moment sequence on `K − y`: by compression with
/// `vector_probes` in local mode, by block matrices in block mode.
#[allow(clippy::too_many_arguments)]
pub fn borcea_necessary_check<R: Real>(
    t: &PolyOperator<R>,
    region: &RegionK,
    y_grid: &[Vec<R>],
    d: u32,
    mode: BorceaMode,
    matrix_probes: &[HermMatrix<R>],
    vector_probes: &[Vec<Cplx<R>>],
    tol: f64,
) -> Result<BorceaReport<R>> {
    if 2 * d > t.max_deg() {
        return Err(Error::InsufficientOrder { order: t.max_deg(), required: 2 * d });
    }
    for y in y_grid {
        if y.len() != region.nvars() {
            return Err(Error::DimensionMismatch { expected: region.nvars(), found: y.len() });
        }
        if !region.contains_point(y) {
            return Err(Error::PointOutsideRegion(y.iter().map(Real::to_f64).collect()));
        }
    }
    let canon = extract_canonical(&t.truncate(2 * d)?);
    let moment_mode = match mode {
        BorceaMode::Local => MomentMode::Compression,
        BorceaMode::Block => MomentMode::Block,
    };
    let jobs: Vec<(&Vec<R>, usize)> =
        y_grid.iter().flat_map(|y| (0..matrix_probes.len()).map(move |k| (y, k))).collect();
    let cells = jobs
        .into_par_iter()
        .map(|(y, k)| {
            let seq = canonical_sequence(&canon, &matrix_probes[k], y, 2 * d)?;
            let shifted = region.translated(y)?;
            let verdict = truncated_moment_test(&seq, &shifted, d, moment_mode, vector_probes, tol)?;
            Ok(BorceaCell { y: y.clone(), probe: k, verdict })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = cells.iter().all(|c| c.verdict.pass);
    Ok(BorceaReport { mode, order: d, cells, pass })
}

/// The univariate operator with `Q_k(E_i) = S_k` for every basis element,
/// where `S` is the Bisgaard sequence of order `2 kMax`.
pub fn bisgaard_operator(k_max: u32) -> Result<PolyOperator<Q>> {
    let seq = bisgaard_sequence(k_max)?;
    let canon = CanonicalRep::from_fn(1, 2, 2 * k_max, |_, _, beta| {
        MatrixPolynomial::constant(1, seq.entry(beta).expect("complete").clone())
    })?;
    Ok(crate::linop::reconstruct(&canon))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BisgaardDemo {
    /// `[[Q_0, Q_1], [Q_1, Q_2]]`.
    pub moment_matrix: HermMatrix<Q>,
    pub witness: Vec<Cplx<Q>>,
    /// `⟨M v, v⟩` at the witness.
    pub witness_value: Q,
    pub min_eigenvalue: f64,
    pub block: BorceaReport<Q>,
    pub local: Vec<BorceaReport<Q>>,
    pub sampling: PreserverReport,
    pub all_expected: bool,
}

pub const BISGAARD_DEMO_SEED: u64 = 2024;

/// Block check at `D = 1` (expected to fail), local checks at `D = 1..3`
/// (expected to pass), and sampled preservation of degree-2 inputs on
/// `[−1, 1]` over 25 trials (expected to pass).
pub fn bisgaard_demo() -> Result<BisgaardDemo> {
    let t = bisgaard_operator(3)?;
    let seq = bisgaard_sequence(1)?;
    let m = moment_matrix(&seq, 1)?;
    let exact = Q::psd_check(&m, 0.0);
    let witness = exact.witness.clone().unwrap_or_default();
    let witness_value = if witness.is_empty() { Q::from_integer(0.into()) } else { m.quad_form(&witness) };
    let min_eigenvalue = eig_min(&m.map(|v| v.to_f64()));

    let line = RegionK::all_space(1);
    let window = GridSpec::new(5).with_window(vec![-1.0], vec![1.0]);
    let ys = default_y_grid::<Q>(&line, &window)?;
    let mats = default_probe_matrices::<Q>(2);
    let vecs = default_probes::<Q>(2);
    let block = borcea_necessary_check(&t, &line, &ys, 1, BorceaMode::Block, &mats, &vecs, 0.0)?;
    let local = (1..=3)
        .map(|d| borcea_necessary_check(&t, &line, &ys, d, BorceaMode::Local, &mats, &vecs, 0.0))
        .collect::<Result<Vec<_>>>()?;
    let grid = GridSpec::default().with_window(vec![-1.0], vec![1.0]);
    let sampling = check_preserver_sampling(&t, &line, 25, 2, &grid, 1e-8, BISGAARD_DEMO_SEED)?;

    let all_expected = !exact.is_psd
        && witness_value < Q::from_integer(0.into())
        && (min_eigenvalue + 1.0).abs() <= 1e-9
        && !block.pass
        && local.iter().all(|r| r.pass)
        && sampling.pass;
    Ok(BisgaardDemo { moment_matrix: m, witness, witness_value, min_eigenvalue, block, local, sampling, all_expected })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftRow {
    pub y: Q,
    pub map: String,
    pub m: u32,
    /// `y^m`.
    pub factor: Q,
    /// `Q_m(E_i) = y^m T̃(E_i)` held for every basis element.
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftDemo {
    pub max_deg: u32,
    pub rows: Vec<ShiftRow>,
    pub all_expected: bool,
}

/// Canonical maps of `T(A ⊗ x^k) = T̃(A) ⊗ (x + y)^k` for
/// `y ∈ {−2, 0, 1/2, 3}`, three maps `T̃` on `2 × 2` matrices and `m ≤ 4`.
pub fn shift_demo() -> Result<ShiftDemo> {
    let max_deg = 4;
    let ys = [Q::from_integer((-2).into()), Q::from_integer(0.into()), Q::new(1.into(), 2.into()), Q::from_integer(3.into())];
    let maps: Vec<(&str, ChoiMap<Q>)> = vec![
        ("identity", ChoiMap::identity(2)),
        ("congruence diag(1,2)", ChoiMap::congruence(&Mat::diag(&[Q::from_integer(1.into()), Q::from_integer(2.into())]))?),
        ("depolarizing", ChoiMap::depolarizing(2)),
    ];
    let basis = crate::linop::hermitian_basis::<Q>(2);
    let mut rows = Vec::new();
    for y in &ys {
        for (name, tt) in &maps {
            let canon = extract_canonical(&crate::linop::shift_example_operator(tt, y, max_deg)?);
            for m in 0..=max_deg {
                let factor = crate::algebra::scalar::pow(y, m);
                let alpha = MultiIndex::univariate(m);
                let ok = basis.iter().enumerate().all(|(i, e)| {
                    let expected = tt.apply(e).map(|v| MatrixPolynomial::constant(1, v.scale(&factor)));
                    matches!((canon.q_basis(i, &alpha), expected), (Some(q), Ok(x)) if *q == x)
                });
                rows.push(ShiftRow { y: y.clone(), map: name.to_string(), m, factor, ok });
            }
        }
    }
    let all_expected = rows.iter().all(|r| r.ok);
    Ok(ShiftDemo { max_deg, rows, all_expected })
}
