//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use opmoment::algebra::scalar::{cplx_one, imag_unit};
use opmoment::algebra::{Cplx, HermMatrix, Mat, MultiIndex, Real, Q};
use opmoment::cli::doc::{parse_document, render_document};
use opmoment::linop::{basis_coords, extract_canonical, hermitian_basis, reconstruct, shift_example_operator};
use opmoment::matpoly::{GridSpec, MatrixPolynomial, RegionK, ScalarPoly};
use opmoment::measures::{AtomicMapMeasure, ChoiMap, MapAtom};
use opmoment::moments::{
    bisgaard_sequence, default_probes, moment_matrix, sequence_from_measure, shift_sequence, truncated_moment_test,
    MomentMode, OperatorSequence,
};
use opmoment::preserver::{
    borcea_necessary_check, build_from_family, check_preserver_sampling, default_probe_matrices, default_y_grid,
    random_family, sign_corrupted_operator, BorceaMode,
};
use opmoment::random;
use opmoment::algebra::eig_min;
use rand::Rng;

type Outcome = Result<String, String>;
type Oracle = Box<dyn Fn(&HermMatrix<Q>) -> HermMatrix<Q>>;

fn qi(v: i64) -> Q {
    <Q as Real>::from_i64(v)
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:.2?}, limit {limit:?}"))
}

/// `[[Q0, Q1], [Q1, Q2]]` for `Q0 = diag(4, 1)`, `Q1 = [[0, 2], [2, 0]]`, `Q2 = diag(1, 4)`.
fn expected_block_matrix() -> HermMatrix<Q> {
    HermMatrix::from_int_rows(&[vec![4, 0, 0, 2], vec![0, 1, 2, 0], vec![0, 2, 1, 0], vec![2, 0, 0, 4]]).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let m = moment_matrix(&bisgaard_sequence(1).map_err(|e| e.to_string())?, 1).map_err(|e| e.to_string())?;
    ensure(m == expected_block_matrix(), "moment matrix differs from the expected 4×4 matrix")?;
    let min = eig_min(&m.map(|v| v.to_f64()));
    ensure((min + 1.0).abs() <= 1e-9, format!("min eigenvalue {min}"))?;
    let v = Q::psd_check(&m, 0.0);
    ensure(!v.is_psd, "exact check accepted the matrix")?;
    let w = v.witness.ok_or("no witness")?;
    let val = m.quad_form(&w);
    ensure(val < qi(0), "witness is not a negative direction")?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("min eigenvalue {min:.12}, <Mv,v> = {val} at v = {:?}", w.iter().map(|z| z.re.to_string()).collect::<Vec<_>>()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let s = bisgaard_sequence(3).map_err(|e| e.to_string())?;
    let a3 = Q::from_integer(BigInt::from(1u8) << 120usize);
    ensure(s.entry(&MultiIndex::univariate(6)) == Some(&HermMatrix::identity(2).scale(&a3)), "entry 6 is not 2^120·I")?;
    let e1 = vec![cplx_one::<Q>(), Cplx::new(qi(0), qi(0))];
    let e2 = vec![Cplx::new(qi(0), qi(0)), cplx_one::<Q>()];
    let sum = vec![cplx_one::<Q>(), cplx_one::<Q>()];
    let isum = vec![cplx_one::<Q>(), imag_unit::<Q>()];
    let probes = vec![e1, e2, sum, isum];
    for d in 1..=3 {
        let v = truncated_moment_test(&s, &RegionK::all_space(1), d, MomentMode::Compression, &probes, 0.0)
            .map_err(|e| e.to_string())?;
        ensure(v.pass, format!("compression failed at D = {d}: {:?}", v.witness().map(|w| w.0)))?;
    }
    within(start, Duration::from_secs(5))?;
    Ok("4 probes × D = 1, 2, 3 pass exactly".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = random::rng(3003);
    for k in 0..100 {
        let n = rng.gen_range(1..=2);
        let d = rng.gen_range(1..=2);
        let max_deg = rng.gen_range(0..=3);
        let t = random::random_operator::<Q>(&mut rng, n, d, max_deg).map_err(|e| e.to_string())?;
        let back = reconstruct(&extract_canonical(&t));
        for (key, img) in t.images() {
            ensure(back.images().get(key) == Some(img), format!("operator {k}: image {key:?} differs"))?;
        }
        ensure(back.images().len() == t.images().len(), format!("operator {k}: image count differs"))?;
    }
    within(start, Duration::from_secs(30))?;
    Ok("100 operators reconstructed exactly".into())
}

fn criterion_4() -> Outcome {
    let s = Mat::diag(&[qi(1), qi(2)]);
    // independent images of the basis under each map
    let maps: Vec<(&str, ChoiMap<Q>, Oracle)> = vec![
        ("identity", ChoiMap::identity(2), Box::new(|a: &HermMatrix<Q>| a.clone())),
        (
            "congruence",
            ChoiMap::congruence(&s).unwrap(),
            Box::new(move |a: &HermMatrix<Q>| {
                let m = Mat::from_fn(2, 2, |i, j| {
                    let w = qi([1, 2][i] * [1, 2][j]);
                    a.get(i, j).clone() * Cplx::new(w, qi(0))
                });
                HermMatrix::new(m).unwrap()
            }),
        ),
        (
            "depolarizing",
            ChoiMap::depolarizing(2),
            Box::new(|a: &HermMatrix<Q>| HermMatrix::identity(2).scale(&(a.trace() / qi(2)))),
        ),
    ];
    let ys = [qi(-2), qi(0), Q::new(1.into(), 2.into()), qi(3)];
    let basis = hermitian_basis::<Q>(2);
    let mut checked = 0;
    for y in &ys {
        for (name, tt, oracle) in &maps {
            let canon = extract_canonical(&shift_example_operator(tt, y, 4).map_err(|e| e.to_string())?);
            let mut ym = qi(1);
            for m in 0..=4u32 {
                for (i, e) in basis.iter().enumerate() {
                    let expected = MatrixPolynomial::constant(1, oracle(e).scale(&ym));
                    let got = canon.q_basis(i, &MultiIndex::univariate(m)).ok_or("missing Q")?;
                    ensure(*got == expected, format!("y = {y}, {name}, m = {m}, E_{i}"))?;
                    checked += 1;
                }
                ym *= y.clone();
            }
        }
    }
    Ok(format!("{checked} identities Q_m(E_i) = y^m·T̃(E_i) hold exactly"))
}

fn criterion_5() -> Outcome {
    let mut rng = random::rng(5005);
    for k in 0..50 {
        let n = rng.gen_range(1..=2);
        let d = rng.gen_range(1..=3);
        let region = if rng.gen_bool(0.5) {
            RegionK::all_space(n)
        } else {
            RegionK::boxed(vec![qi(-2); n], vec![qi(2); n]).unwrap()
        };
        let mu = random::random_operator_measure::<Q>(&mut rng, d, 5, &region);
        let y: Vec<Q> = (0..n).map(|_| random::ratio(&mut rng, 12, 4)).collect();
        let lhs = sequence_from_measure(&mu.pushforward_shift(&y).map_err(|e| e.to_string())?, 6);
        let rhs = shift_sequence(&sequence_from_measure(&mu, 6), &y).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, format!("measure {k} differs"))?;
    }
    Ok("50 measures, order 6, exact equality".into())
}

fn criterion_6() -> Outcome {
    let mut rng = random::rng(6006);
    for k in 0..50 {
        let n = rng.gen_range(1..=2);
        let d = rng.gen_range(1..=2);
        let region = RegionK::all_space(n);
        let atoms = (0..rng.gen_range(1..=4))
            .map(|_| MapAtom { point: random::random_point::<Q>(&mut rng, &region, 4), map: random::random_cp_map(&mut rng, d) })
            .collect();
        let nu = AtomicMapMeasure::new(d, atoms, region).map_err(|e| e.to_string())?;
        let p = random::random_matrix_poly::<Q>(&mut rng, n, d, 3, 5);
        // monomial-wise: Σ_α A_α ⊗ x^α
        let by_monomial: Vec<(HermMatrix<Q>, ScalarPoly<Q>)> = p
            .terms()
            .map(|(a, c)| (c.clone(), ScalarPoly::monomial(qi(1), a.clone())))
            .collect();
        // basis-wise: Σ_i E_i ⊗ p_i with p_i the coordinate polynomials
        let basis = hermitian_basis::<Q>(d);
        let by_basis: Vec<(HermMatrix<Q>, ScalarPoly<Q>)> = basis
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let pi = ScalarPoly::from_terms(n, p.terms().map(|(a, c)| (a.clone(), basis_coords(c)[i].clone())));
                (e.clone(), pi)
            })
            .collect();
        let a = nu.integrate_decomposition(&by_monomial).map_err(|e| e.to_string())?;
        let b = nu.integrate_decomposition(&by_basis).map_err(|e| e.to_string())?;
        ensure(a == b, format!("polynomial {k}: decompositions disagree"))?;
        ensure(a == nu.integrate_poly(&p).map_err(|e| e.to_string())?, format!("polynomial {k}: differs from Σ Φ_i(p(t_i))"))?;
    }
    Ok("50 polynomials, two decompositions agree exactly".into())
}

fn square() -> RegionK {
    RegionK::boxed(vec![qi(-1), qi(-1)], vec![qi(1), qi(1)]).unwrap()
}

fn half_square() -> RegionK {
    let h = Q::new(1.into(), 2.into());
    RegionK::boxed(vec![-h.clone(), -h.clone()], vec![h.clone(), h]).unwrap()
}

/// Outputs are sampled, and the y-grid placed, where every atom `y + c_i`
/// stays in K.
fn admissible_grid(per_axis: usize) -> GridSpec {
    GridSpec::new(per_axis).with_window(vec![-0.5, -0.5], vec![0.5, 0.5])
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let k = square();
    let mut rng = random::rng(7007);
    let ys = default_y_grid::<f64>(&k, &admissible_grid(5)).map_err(|e| e.to_string())?;
    ensure(ys.len() == 25, "y-grid is not 5×5")?;
    let mut worst = f64::INFINITY;
    for f_idx in 0..50 {
        let d = rng.gen_range(1..=2);
        let family = random_family::<f64>(&mut rng, d, 3, &half_square(), k.clone());
        let t = build_from_family(&family, 4).map_err(|e| e.to_string())?;
        let r = check_preserver_sampling(&t, &k, 25, 4, &admissible_grid(17), 1e-8, 70_000 + f_idx)
            .map_err(|e| e.to_string())?;
        ensure(r.pass, format!("family {f_idx}: sampling failed {:?}", r.worst))?;
        worst = worst.min(r.worst.map_or(f64::INFINITY, |w| w.min_eig));
        let mats = default_probe_matrices::<f64>(d);
        let b = borcea_necessary_check(&t, &k, &ys, 2, BorceaMode::Block, &mats, &[], 1e-8).map_err(|e| e.to_string())?;
        ensure(b.pass, format!("family {f_idx}: block check failed at {:?}", b.first_failure().map(|c| &c.y)))?;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("50 families pass sampling (worst min eigenvalue {worst:.3e}) and block checks"))
}

fn criterion_8() -> Outcome {
    let k = square();
    let ys = default_y_grid::<Q>(&k, &admissible_grid(5)).map_err(|e| e.to_string())?;
    let mut rng = random::rng(8008);
    let family = random_family::<Q>(&mut rng, 2, 3, &half_square(), k.clone());
    let corrupted = sign_corrupted_operator(&family, 4, 8).map_err(|e| e.to_string())?;
    let negation = opmoment::linop::PolyOperator::<Q>::negation(2, 2, 4);
    let mats = default_probe_matrices::<Q>(2);
    let mut lines = Vec::new();
    for (name, t) in [("negation", negation), ("sign-corrupted", corrupted)] {
        let r = check_preserver_sampling(&t, &k, 25, 4, &admissible_grid(17), 1e-8, 8).map_err(|e| e.to_string())?;
        let w = r.worst.clone().ok_or("no worst case")?;
        ensure(!r.pass && w.min_eig < -1e-8, format!("{name}: sampling did not fail"))?;
        let b = borcea_necessary_check(&t, &k, &ys, 2, BorceaMode::Block, &mats, &[], 0.0).map_err(|e| e.to_string())?;
        let cell = b.first_failure().ok_or_else(|| format!("{name}: block check passed"))?;
        lines.push(format!(
            "{name}: min eig {:.3} at {:?}, block fail at y = {:?}",
            w.min_eig,
            w.point,
            cell.y.iter().map(|v| v.to_string()).collect::<Vec<_>>()
        ));
    }
    Ok(lines.join("; "))
}

/// A sequence with PSD block moment matrix of order `2D`: moments of a random
/// measure, optionally with a PSD matrix added to some top-degree pure powers
/// `x_j^{2D}`, which only enter the diagonal block of `x_j^D`.
fn block_psd_sequence(rng: &mut random::TestRng, n: usize, d: usize, dd: u32) -> OperatorSequence<Q> {
    let region = RegionK::boxed(vec![qi(-1); n], vec![qi(1); n]).unwrap();
    let mu = random::random_operator_measure::<Q>(rng, d, 4, &region);
    let base = sequence_from_measure(&mu, 2 * dd);
    if rng.gen_bool(0.5) {
        return base;
    }
    let mut entries = base.entries().clone();
    for j in 0..n {
        if rng.gen_bool(0.7) {
            let mut e = vec![0; n];
            e[j] = 2 * dd;
            let key = MultiIndex::new(e);
            let boosted = &entries[&key] + &random::random_psd(rng, d);
            entries.insert(key, boosted);
        }
    }
    OperatorSequence::new(n, d, 2 * dd, entries).unwrap()
}

fn criterion_9() -> Outcome {
    let mut rng = random::rng(9009);
    let mut probes_checked = 0;
    for k in 0..50 {
        let n = rng.gen_range(1..=2);
        let d = rng.gen_range(1..=3);
        let dd = rng.gen_range(1..=2);
        let s = block_psd_sequence(&mut rng, n, d, dd);
        let m = moment_matrix(&s, dd).map_err(|e| e.to_string())?;
        ensure(Q::psd_check(&m, 0.0).is_psd, format!("sequence {k}: generator produced a non-PSD block matrix"))?;
        for (p, a) in default_probes::<Q>(d).iter().enumerate() {
            let scalar = moment_matrix(&s.compress(a).map_err(|e| e.to_string())?, dd).map_err(|e| e.to_string())?;
            ensure(Q::psd_check(&scalar, 0.0).is_psd, format!("sequence {k}, probe {p}: scalar matrix not PSD"))?;
            probes_checked += 1;
        }
    }
    Ok(format!("50 block-PSD sequences, {probes_checked} probe compressions PSD, zero exceptions"))
}

fn criterion_10() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests");
    for name in ["bisgaard", "shift"] {
        let golden = std::fs::read(dir.join("golden").join(format!("demo_{name}.json"))).map_err(|e| e.to_string())?;
        for _ in 0..2 {
            let o = Command::new(env!("CARGO_BIN_EXE_opmoment"))
                .args(["demo", name, "--json"])
                .env_remove("OPMOMENT_SEED")
                .output()
                .map_err(|e| e.to_string())?;
            ensure(o.status.code() == Some(0), format!("demo {name} exited with {:?}", o.status.code()))?;
            ensure(o.stdout == golden, format!("demo {name} output differs from golden"))?;
        }
    }
    let mut docs = 0;
    for entry in std::fs::read_dir(dir.join("corpus")).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let doc = parse_document(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure(parse_document(&render_document(&doc)).as_ref() == Ok(&doc), format!("{}: round trip", path.display()))?;
        docs += 1;
    }
    Ok(format!("both demos exit 0 and match goldens; {docs} corpus documents round-trip"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Bisgaard block failure", criterion_1),
        ("Bisgaard local pass", criterion_2),
        ("canonical round trip", criterion_3),
        ("shift example", criterion_4),
        ("change-of-variables coherence", criterion_5),
        ("representation independence", criterion_6),
        ("construction soundness", criterion_7),
        ("negative control", criterion_8),
        ("block implies compression", criterion_9),
        ("CLI goldens", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({secs:.2} s) {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} {name}: FAIL ({secs:.2} s) {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
