//! Seeded generators of random test objects. All entries are small dyadic
//! or decimal rationals so that exact and floating backends see the same
//! values.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{convert, Cplx, HermMatrix, Mat, MultiIndex, Real, Q};
use crate::error::Result;
use crate::linop::PolyOperator;
use crate::matpoly::{MatrixPolynomial, RegionK};
use crate::measures::{AtomicOperatorMeasure, ChoiMap, OperatorAtom};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform `k / den` with `|k| ≤ max_num`.
pub fn ratio<R: Real>(rng: &mut TestRng, max_num: i64, den: i64) -> R {
    R::from_ratio(rng.gen_range(-max_num..=max_num), den)
}

pub fn complex<R: Real>(rng: &mut TestRng, max_num: i64, den: i64) -> Cplx<R> {
    Cplx::new(ratio(rng, max_num, den), ratio(rng, max_num, den))
}

pub fn random_mat<R: Real>(rng: &mut TestRng, rows: usize, cols: usize, max_num: i64, den: i64) -> Mat<R> {
    Mat::from_fn(rows, cols, |_, _| complex(rng, max_num, den))
}

pub fn random_herm<R: Real>(rng: &mut TestRng, dim: usize, max_num: i64, den: i64) -> HermMatrix<R> {
    HermMatrix::from_hermitian_part(&random_mat(rng, dim, dim, max_num, den))
}

/// `B B*` for a random `d × r` factor with `1 ≤ r ≤ d`, so rank-deficient
/// weights occur.
pub fn random_psd<R: Real>(rng: &mut TestRng, dim: usize) -> HermMatrix<R> {
    let r = rng.gen_range(1..=dim.max(1));
    let b = random_mat::<R>(rng, dim, r, 4, 4);
    HermMatrix::from_hermitian_part(&b.mul(&b.adjoint()))
}

/// A completely positive map with one or two random Kraus operators.
pub fn random_cp_map<R: Real>(rng: &mut TestRng, dim: usize) -> ChoiMap<R> {
    let k = rng.gen_range(1..=2);
    let ops: Vec<Mat<R>> = (0..k).map(|_| random_mat(rng, dim, dim, 4, 4)).collect();
    ChoiMap::from_kraus(&ops).expect("square Kraus operators")
}

/// A point of `region` with coordinates on the grid `Z / den`, drawn by
/// rejection from the bounding box (or `[−2, 2]^n` when unbounded).
pub fn random_point<R: Real>(rng: &mut TestRng, region: &RegionK, den: i64) -> Vec<R> {
    let n = region.nvars();
    let (lo, hi) = region
        .bounding_box()
        .unwrap_or_else(|| (vec![Q::from_integer((-2).into()); n], vec![Q::from_integer(2.into()); n]));
    let den_q = Q::from_integer(den.into());
    loop {
        let p: Vec<Q> = (0..n)
            .map(|i| {
                let a = (lo[i].clone() * den_q.clone()).ceil().to_integer();
                let b = (hi[i].clone() * den_q.clone()).floor().to_integer();
                let a: i64 = a.try_into().expect("small bounds");
                let b: i64 = b.try_into().expect("small bounds");
                Q::new(rng.gen_range(a..=b).into(), den.into())
            })
            .collect();
        if region.contains(&p) {
            return p.iter().map(convert).collect();
        }
    }
}

/// Between one and `max_atoms` atoms with random PSD weights in `support`.
pub fn random_operator_measure<R: Real>(
    rng: &mut TestRng,
    dim: usize,
    max_atoms: usize,
    support: &RegionK,
) -> AtomicOperatorMeasure<R> {
    let count = rng.gen_range(1..=max_atoms.max(1));
    let atoms = (0..count)
        .map(|_| OperatorAtom { point: random_point(rng, support, 4), weight: random_psd(rng, dim) })
        .collect();
    AtomicOperatorMeasure::new(dim, atoms, support.clone()).expect("valid by construction")
}

/// A matrix polynomial with up to `terms` random Hermitian coefficients of
/// degree at most `deg`.
pub fn random_matrix_poly<R: Real>(
    rng: &mut TestRng,
    nvars: usize,
    dim: usize,
    deg: u32,
    terms: usize,
) -> MatrixPolynomial<R> {
    let monomials = MultiIndex::all_up_to(nvars, deg);
    let mut p = MatrixPolynomial::zero(nvars, dim);
    for _ in 0..terms {
        let alpha = monomials[rng.gen_range(0..monomials.len())].clone();
        p.add_term(alpha, &random_herm(rng, dim, 6, 2));
    }
    p
}

/// An arbitrary (generally non-positive) operator whose images have degree
/// at most `max_deg + 1`.
pub fn random_operator<R: Real>(rng: &mut TestRng, nvars: usize, dim: usize, max_deg: u32) -> Result<PolyOperator<R>> {
    PolyOperator::from_fn(nvars, dim, max_deg, |_, _, _| {
        let terms = rng.gen_range(0..=3);
        random_matrix_poly(rng, nvars, dim, max_deg + 1, terms)
    })
}
