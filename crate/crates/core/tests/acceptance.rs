//! One test per acceptance criterion. Each prints a `criterion N: PASS|FAIL`
//! line before asserting.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qcstar::claims::{check_snf, coefficient_trials, random_small_matrix, soundness_for, soundness_targets};
use qcstar::graph::inclusion_isomorphic;
use qcstar::ktheory::{cokernel, k_groups, smith_normal_form, AbelianGroup, IntegerMatrix};
use qcstar::ncalgebra::sample::random_element;
use qcstar::representations::{independence_check, BasisMonomial};
use qcstar::{Element, GeneratorMap, Graph, Presentation, Representation, VertexSet};

const SEED: u64 = 0;
const Q: f64 = 0.5;
const DIM: usize = 64;
const RESIDUAL_TOL: f64 = 1e-10;
const DECAY: f64 = 1e3;
const SPECTRUM_TOL: f64 = 1e-12;
const RECOVERY_TOL: f64 = 1e-8;
const SOUNDNESS_TOL: f64 = 1e-9;

fn report(id: &str, ok: bool, detail: impl AsRef<str>) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("criterion {id}: {status}  {}", detail.as_ref());
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

#[test]
fn criterion_1_k_groups() {
    let expected = [
        ("G1", AbelianGroup::free(2)),
        ("G2", AbelianGroup::free(1)),
        ("G3", AbelianGroup::new(1, [2])),
    ];
    let (got, t) = timed(|| {
        expected
            .iter()
            .map(|(g, _)| k_groups(&Graph::builtin(g).unwrap()))
            .collect::<Vec<_>>()
    });
    let ok = got
        .iter()
        .zip(&expected)
        .all(|(k, (_, k0))| &k.k0 == k0 && k.k1.is_trivial())
        && t < Duration::from_millis(100);
    let shown: Vec<String> = got.iter().map(|k| format!("({}, {})", k.k0, k.k1)).collect();
    report("1", ok, format!("{} in {t:?}", shown.join(" ")));
    assert!(ok);
}

#[test]
fn criterion_2_morphisms() {
    for (id, name) in [("2a", "F"), ("2b", "rp2-inclusion"), ("2c", "r1"), ("2c", "r2")] {
        let (r, t) = timed(|| GeneratorMap::builtin(name).unwrap().verify().unwrap());
        let zero = r.relations.iter().all(|x| x.residue == "0");
        let ok = zero && r.valid && t < Duration::from_secs(1);
        report(id, ok, format!("{name}: {} relations, all residues zero: {zero}, {t:?}", r.relations.len()));
        assert!(ok, "{name}");
    }
    // Involutive: r o r is the identity on generators.
    for name in ["r1", "r2"] {
        let m = GeneratorMap::builtin(name).unwrap();
        assert!(m.after(&m).unwrap().is_identity(), "{name} is not involutive");
    }
}

fn max_residual(rep: &str, dim: usize) -> (f64, bool) {
    let r = Representation::build(rep, Q, 0.0, dim).unwrap();
    let report = r.relation_residuals().unwrap();
    let blocks = report.relations.iter().all(|x| x.block > 0);
    (report.max_residual, blocks)
}

#[test]
fn criterion_3a_residuals() {
    let (res, t) = timed(|| ["rho_rp2", "pi_pm"].map(|r| (r, max_residual(r, DIM))));
    let ok = res.iter().all(|(_, (m, b))| *b && *m <= RESIDUAL_TOL) && t < Duration::from_secs(5);
    let shown: Vec<String> = res.iter().map(|(r, (m, _))| format!("{r} {m:.3e}")).collect();
    report("3a", ok, format!("{} at N={DIM}, {t:?}", shown.join(", ")));
    assert!(ok);
}

#[test]
fn criterion_3b_residual_decay() {
    let mut ok = true;
    let mut shown = Vec::new();
    for rep in ["rho_rp2", "pi_pm"] {
        let (half, _) = max_residual(rep, DIM / 2);
        let (full, _) = max_residual(rep, DIM);
        let ratio = half / full;
        ok &= ratio >= DECAY;
        shown.push(format!("{rep} {half:.3e} -> {full:.3e} (ratio {ratio:.3})"));
    }
    report("3b", ok, shown.join(", "));
    assert!(ok, "residuals did not shrink by {DECAY}: {shown:?}");
}

#[test]
fn criterion_4_spectrum() {
    let r = Representation::build("rho_rp2", Q, 0.0, DIM).unwrap();
    let p = r.presentation().clone();
    let pm = p.generator_index("P").unwrap();
    let expected: Vec<f64> = (0..DIM).map(|k| Q.powi(4 * k as i32)).collect();
    let direct = r.generator_matrix(pm);
    let exact = (0..DIM).all(|k| direct[(k, k)].re == expected[k] && direct[(k, k)].im == 0.0);
    let nf = p.normal_form(&p.product(&p.gen("P"), &Element::one()).unwrap()).unwrap();
    let round = r.evaluate(&nf).unwrap();
    let dev = (0..DIM)
        .map(|k| (round[(k, k)].re - expected[k]).abs().max(round[(k, k)].im.abs()))
        .fold(0.0, f64::max);
    let off_diagonal = (0..DIM)
        .flat_map(|i| (0..DIM).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .all(|(i, j)| direct[(i, j)].norm() == 0.0);
    let ok = exact && off_diagonal && dev <= SPECTRUM_TOL;
    report("4", ok, format!("exact diagonal {exact}, after normal form {dev:.3e}"));
    assert!(ok);
}

#[test]
fn criterion_5_independence() {
    let monomials = BasisMonomial::all(3, 3);
    let trials = coefficient_trials(SEED, 100, monomials.len());
    let (r, t) = timed(|| independence_check(&monomials, Q, 40, &trials).unwrap());
    let ok = monomials.len() == 60
        && r.rank == 60
        && r.trials == 100
        && r.max_recovery_error <= RECOVERY_TOL
        && t < Duration::from_secs(10);
    report(
        "5",
        ok,
        format!(
            "rank {}/{}, {} recoveries, max error {:.3e}, {t:?}",
            r.rank, r.monomials, r.trials, r.max_recovery_error
        ),
    );
    assert!(ok);
}

/// Row echelon basis of the lattice spanned by `gens` (integer row
/// operations only).
fn lattice_basis(mut gens: Vec<Vec<i128>>, width: usize) -> Vec<Vec<i128>> {
    let mut basis = Vec::new();
    for col in 0..width {
        loop {
            let live: Vec<usize> = (0..gens.len()).filter(|&i| gens[i][col] != 0).collect();
            if live.len() <= 1 {
                break;
            }
            let pivot = *live.iter().min_by_key(|&&i| gens[i][col].abs()).unwrap();
            for &i in &live {
                if i != pivot {
                    let f = gens[i][col] / gens[pivot][col];
                    for c in 0..width {
                        gens[i][c] -= f * gens[pivot][c];
                    }
                }
            }
        }
        if let Some(i) = gens.iter().position(|g| g[col] != 0) {
            let mut row = gens.swap_remove(i);
            if row[col] < 0 {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            basis.push(row);
        }
    }
    basis
}

/// Order of the torsion subgroup of `Z^rows / im(m)`, counted by listing
/// the cosets of the image lattice inside its saturation.
fn torsion_by_cosets(m: &IntegerMatrix) -> u64 {
    let (rows, cols) = (m.rows(), m.cols());
    let gens: Vec<Vec<i128>> = (0..cols)
        .map(|c| (0..rows).map(|r| m.get(r, c).to_i128().unwrap()).collect())
        .collect();
    let basis = lattice_basis(gens, rows);
    let pivots: Vec<usize> = basis.iter().map(|b| b.iter().position(|&x| x != 0).unwrap()).collect();
    let ranges: Vec<i128> = basis.iter().zip(&pivots).map(|(b, &p)| b[p]).collect();
    let mut count = 0;
    let mut digits = vec![0i128; basis.len()];
    loop {
        let mut t: Vec<Ratio<i128>> = Vec::new();
        for j in 0..basis.len() {
            let mut rest = Ratio::from_integer(digits[j]);
            for (i, ti) in t.iter().enumerate() {
                rest -= *ti * basis[i][pivots[j]];
            }
            t.push(rest / basis[j][pivots[j]]);
        }
        let integral = (0..rows).all(|c| {
            let x: Ratio<i128> = t.iter().zip(&basis).map(|(ti, b)| *ti * b[c]).sum();
            x.is_integer()
        });
        if integral {
            count += 1;
        }
        let mut j = 0;
        while j < digits.len() {
            digits[j] += 1;
            if digits[j] < ranges[j] {
                break;
            }
            digits[j] = 0;
            j += 1;
        }
        if j == digits.len() {
            return count;
        }
    }
}

#[test]
fn coset_oracle_on_known_groups() {
    let m = IntegerMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    assert_eq!(torsion_by_cosets(&m), 2 * 6 * 12);
    let m = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 0], vec![0, 3]]);
    assert_eq!(torsion_by_cosets(&m), 6);
    let m = IntegerMatrix::from_rows(&[vec![2, 4], vec![1, 2]]);
    assert_eq!(torsion_by_cosets(&m), 1);
    assert_eq!(torsion_by_cosets(&IntegerMatrix::zeros(2, 2)), 1);
}

#[test]
fn criterion_6_smith_normal_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (failures, t) = timed(|| {
        let mut failures = Vec::new();
        for _ in 0..1000 {
            let m = random_small_matrix(&mut rng);
            if let Err(e) = check_snf(&m) {
                failures.push(e);
                continue;
            }
            let r = smith_normal_form(&m);
            let unimodular = [&r.u, &r.v]
                .iter()
                .all(|x| x.determinant().is_some_and(|d| d.abs().is_one()));
            let d = r.invariant_factors();
            let chain = d.iter().all(|x| x.is_positive())
                && d.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
            let oracle = BigInt::from(torsion_by_cosets(&m));
            let torsion = cokernel(&m).torsion_order();
            if !(unimodular && chain && oracle == torsion) {
                failures.push(format!("{m}: torsion {torsion} vs cosets {oracle}"));
            }
        }
        failures
    });
    let ok = failures.is_empty() && t < Duration::from_secs(10);
    report("6", ok, format!("1000 matrices, {} failures, {t:?}", failures.len()));
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_7_rewriting_soundness() {
    let (stats, t) = timed(|| {
        soundness_targets()
            .into_iter()
            .enumerate()
            .map(|(i, (algebra, rep))| {
                let r = Representation::build(rep, Q, 0.0, DIM).unwrap();
                (algebra, soundness_for(&r, 200, SEED + i as u64).unwrap())
            })
            .collect::<Vec<_>>()
    });
    let mut ok = t < Duration::from_secs(30);
    let mut shown = Vec::new();
    for (algebra, s) in &stats {
        ok &= s.samples == 200
            && s.idempotent
            && s.star_consistent
            && s.empty_blocks == 0
            && s.max_scaled_deviation <= SOUNDNESS_TOL;
        shown.push(format!("{algebra} {:.3e}", s.max_scaled_deviation));
    }
    report("7", ok, format!("{}, {t:?}", shown.join(", ")));
    assert!(ok, "{stats:?}");
}

/// All hereditary saturated subsets, straight from the definitions.
fn brute_force_ideals(g: &Graph) -> Vec<VertexSet> {
    let n = g.vertices().len();
    let edges = g.edges();
    (0u32..1 << n)
        .map(|mask| VertexSet::from_indices((0..n).filter(|v| mask >> v & 1 == 1)))
        .filter(|h| {
            let hereditary = edges.iter().all(|e| !h.contains(e.source) || h.contains(e.range));
            let saturated = (0..n).all(|v| {
                let out: Vec<_> = edges.iter().filter(|e| e.source == v).collect();
                h.contains(v) || out.is_empty() || !out.iter().all(|e| h.contains(e.range))
            });
            hereditary && saturated
        })
        .collect()
}

fn is_chain(sets: &[VertexSet]) -> bool {
    sets.iter()
        .all(|a| sets.iter().all(|b| a.is_subset(b) || b.is_subset(a)))
}

#[test]
fn criterion_8_ideal_lattices() {
    let mut counts = Vec::new();
    let mut lattices = Vec::new();
    for name in ["G1", "G2", "G3"] {
        let g = Graph::builtin(name).unwrap();
        let mut got = g.hereditary_saturated_sets();
        let mut oracle = brute_force_ideals(&g);
        got.sort();
        oracle.sort();
        assert_eq!(got, oracle, "{name}");
        counts.push(got.len());
        lattices.push(got);
    }
    let iso = inclusion_isomorphic(&lattices[1], &lattices[2])
        && is_chain(&lattices[1])
        && is_chain(&lattices[2]);
    let ok = counts == [5, 3, 3] && iso;
    report("8", ok, format!("counts {counts:?}, G2 ~ G3: {iso}"));
    assert!(ok);
}

fn parity(p: &Presentation, x: &Element, letters: &[&str]) -> bool {
    let ids: Vec<u8> = letters.iter().map(|l| p.generator_index(l).unwrap()).collect();
    x.terms()
        .all(|(w, _)| w.letters().iter().filter(|g| ids.contains(g)).count() % 2 == 0)
}

#[test]
fn criterion_9_fixed_points() {
    let r1 = GeneratorMap::builtin("r1").unwrap();
    let r2 = GeneratorMap::builtin("r2").unwrap();
    let p = Presentation::builtin("sphere", Some(&One::one())).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut agree, mut fixed) = (0, [0, 0]);
    for i in 0..200 {
        let x = random_element(&p, &mut rng, 6, 4);
        let x = match i % 3 {
            1 => &x + &r1.apply_raw(&x).unwrap(),
            2 => &x + &r2.apply_raw(&x).unwrap(),
            _ => x,
        };
        let nf = p.normal_form(&x).unwrap();
        let f1 = r1.is_fixed(&x).unwrap();
        let f2 = r2.is_fixed(&x).unwrap();
        fixed[0] += f1 as usize;
        fixed[1] += f2 as usize;
        if f1 == parity(&p, &nf, &["K"]) && f2 == parity(&p, &nf, &["K", "L", "L'"]) {
            agree += 1;
        }
    }
    let ok = agree == 200 && fixed.iter().all(|&f| f > 0 && f < 200);
    report("9", ok, format!("{agree}/200 agree, fixed by r1 {}, by r2 {}", fixed[0], fixed[1]));
    assert!(ok);
}
