//! One-shot runner over every checked claim.
//!
//! Each claim is evaluated independently and reported as pass or fail with a
//! short detail line. The output is a pure function of [`ClaimConfig`].

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{inclusion_isomorphic, Graph};
use crate::ktheory::{cokernel, k_groups, smith_normal_form, AbelianGroup, IntegerMatrix};
use crate::ncalgebra::sample::random_element;
use crate::ncalgebra::{Element, GeneratorMap, Presentation};
use crate::representations::{
    independence_check, BasisMonomial, Representation, SpectrumModel, RESIDUAL_TOLERANCE,
};

pub const DECAY_FACTOR: f64 = 1e3;
pub const SPECTRUM_TOLERANCE: f64 = 1e-12;
pub const SOUNDNESS_TOLERANCE: f64 = 1e-9;
pub const SNF_SAMPLES: usize = 1000;
pub const ELEMENT_SAMPLES: usize = 200;
pub const RECOVERY_TRIALS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClaimConfig {
    pub q: f64,
    pub dim: usize,
    pub seed: u64,
}

impl Default for ClaimConfig {
    fn default() -> Self {
        ClaimConfig {
            q: 0.5,
            dim: 64,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimOutcome {
    pub id: &'static str,
    pub claim: &'static str,
    pub status: Status,
    pub detail: String,
}

impl ClaimOutcome {
    fn new(id: &'static str, claim: &'static str, passed: bool, detail: String) -> Self {
        ClaimOutcome {
            id,
            claim,
            status: if passed { Status::Pass } else { Status::Fail },
            detail,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Runs every claim in order.
pub fn run_all(cfg: &ClaimConfig) -> Vec<ClaimOutcome> {
    let mut out = vec![k_theory()];
    out.extend(morphisms());
    out.extend(residuals(cfg));
    out.push(spectrum(cfg));
    out.push(independence(cfg));
    out.push(snf_suite(cfg));
    out.push(rewriting_soundness(cfg));
    out.push(ideal_lattices());
    out.push(fixed_points(cfg));
    out
}

fn failure(id: &'static str, claim: &'static str, err: impl std::fmt::Display) -> ClaimOutcome {
    ClaimOutcome::new(id, claim, false, format!("error: {err}"))
}

pub fn k_theory() -> ClaimOutcome {
    const CLAIM: &str = "K-groups of G1, G2, G3";
    let expected = [
        ("G1", AbelianGroup::free(2)),
        ("G2", AbelianGroup::free(1)),
        ("G3", AbelianGroup::new(1, [2])),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, k0) in expected {
        let g = Graph::builtin(name).expect("builtin graph");
        let k = k_groups(&g);
        ok &= k.k0 == k0 && k.k1.is_trivial();
        parts.push(format!("{name}: K0={} K1={}", k.k0, k.k1));
    }
    ClaimOutcome::new("1", CLAIM, ok, parts.join("; "))
}

pub fn morphisms() -> Vec<ClaimOutcome> {
    let verify = |id, claim, name: &str| match GeneratorMap::builtin(name).and_then(|m| m.verify()) {
        Ok(report) => {
            let bad: Vec<&str> = report
                .relations
                .iter()
                .filter(|r| !r.zero)
                .map(|r| r.relation.as_str())
                .collect();
            let detail = if bad.is_empty() {
                format!("{} relations map to zero", report.relations.len())
            } else {
                format!("nonzero residue on {}", bad.join(", "))
            };
            ClaimOutcome::new(id, claim, report.valid, detail)
        }
        Err(e) => failure(id, claim, e),
    };
    let involutions = || -> Result<ClaimOutcome, crate::ncalgebra::AlgebraError> {
        let mut ok = true;
        let mut parts = Vec::new();
        for name in ["r1", "r2"] {
            let r = GeneratorMap::builtin(name)?;
            let valid = r.verify()?.valid;
            let involutive = r.after(&r)?.is_identity();
            ok &= valid && involutive;
            parts.push(format!("{name}: homomorphism={valid} involutive={involutive}"));
        }
        Ok(ClaimOutcome::new(
            "2c",
            "r1 and r2 are involutive automorphisms of the sphere",
            ok,
            parts.join("; "),
        ))
    };
    vec![
        verify("2a", "F: sphere(s=1) -> suq2_mod_b respects all relations", "F"),
        verify("2b", "P=K^2, R=L^2, T=KL: rp2 -> sphere(s=1) respects all relations", "rp2-inclusion"),
        involutions().unwrap_or_else(|e| failure("2c", "r1 and r2 are involutive automorphisms", e)),
    ]
}

fn max_residual(name: &str, cfg: &ClaimConfig, dim: usize) -> Result<(f64, bool), String> {
    let rep = Representation::build(name, cfg.q, 0.0, dim).map_err(|e| e.to_string())?;
    let report = rep.relation_residuals().map_err(|e| e.to_string())?;
    let blocks_ok = report.relations.iter().all(|r| r.block > 0);
    Ok((report.max_residual, blocks_ok))
}

pub fn residuals(cfg: &ClaimConfig) -> Vec<ClaimOutcome> {
    const CLAIM_A: &str = "relation residuals of rho_rp2 and pi_plus+pi_minus within tolerance";
    const CLAIM_B: &str = "relation residuals shrink by 1e3 from N/2 to N";
    let mut ok = true;
    let mut parts = Vec::new();
    let mut decay_ok = true;
    let mut decay_parts = Vec::new();
    for name in ["rho_rp2", "pi_pm"] {
        match (max_residual(name, cfg, cfg.dim), max_residual(name, cfg, cfg.dim / 2)) {
            (Ok((full, blocks)), Ok((half, half_blocks))) => {
                ok &= blocks && full <= RESIDUAL_TOLERANCE;
                parts.push(format!("{name}: {full:.3e}"));
                let ratio = half / full;
                decay_ok &= half_blocks && blocks && ratio >= DECAY_FACTOR;
                decay_parts.push(format!(
                    "{name}: N={} {half:.3e}, N={} {full:.3e}, ratio {ratio:.3e}",
                    cfg.dim / 2,
                    cfg.dim
                ));
            }
            (Err(e), _) | (_, Err(e)) => {
                return vec![failure("3a", CLAIM_A, &e), failure("3b", CLAIM_B, &e)];
            }
        }
    }
    vec![
        ClaimOutcome::new("3a", CLAIM_A, ok, parts.join("; ")),
        ClaimOutcome::new("3b", CLAIM_B, decay_ok, decay_parts.join("; ")),
    ]
}

pub fn spectrum(cfg: &ClaimConfig) -> ClaimOutcome {
    const CLAIM: &str = "diagonal of rho(P) is q^{4k}, also after normal_form(P*1)";
    let run = || -> Result<ClaimOutcome, Box<dyn std::error::Error>> {
        let rep = Representation::build("rho_rp2", cfg.q, 0.0, cfg.dim)?;
        let model = SpectrumModel::for_generator("rho_rp2", "P").expect("model");
        let direct = rep.spectrum_check("P", &model)?;
        let p = rep.presentation();
        let x = p.normal_form(&p.product(&p.gen("P"), &Element::one())?)?;
        let round = rep.spectrum_check_element("nf(P*1)", &x, &model)?;
        let ok = direct.max_deviation == 0.0 && round.max_deviation <= SPECTRUM_TOLERANCE;
        Ok(ClaimOutcome::new(
            "4",
            CLAIM,
            ok,
            format!(
                "direct deviation {:.3e}, after normal form {:.3e}",
                direct.max_deviation, round.max_deviation
            ),
        ))
    };
    run().unwrap_or_else(|e| failure("4", CLAIM, e))
}

/// Seeded integer coefficient vectors with entries in `[-5, 5]`.
pub fn coefficient_trials(seed: u64, trials: usize, len: usize) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| (0..len).map(|_| rng.gen_range(-5..=5)).collect())
        .collect()
}

pub fn independence(cfg: &ClaimConfig) -> ClaimOutcome {
    const CLAIM: &str = "60 basis monomials (k,l <= 3) are independent under rho";
    let monomials = BasisMonomial::all(3, 3);
    let trials = coefficient_trials(cfg.seed, RECOVERY_TRIALS, monomials.len());
    match independence_check(&monomials, cfg.q, 40, &trials) {
        Ok(r) => ClaimOutcome::new(
            "5",
            CLAIM,
            r.passes() && r.monomials == 60,
            format!(
                "rank {}/{}, {} recoveries, max error {:.3e}",
                r.rank, r.monomials, r.trials, r.max_recovery_error
            ),
        ),
        Err(e) => failure("5", CLAIM, e),
    }
}

/// A random `rows × cols` matrix with `1 ≤ rows, cols ≤ 4` and entries in
/// `[-4, 4]`.
pub fn random_small_matrix<R: Rng + ?Sized>(rng: &mut R) -> IntegerMatrix {
    let rows = rng.gen_range(1..=4);
    let cols = rng.gen_range(1..=4);
    let entries = (0..rows * cols)
        .map(|_| BigInt::from(rng.gen_range(-4..=4)))
        .collect();
    IntegerMatrix::from_entries(rows, cols, entries).expect("sizes match")
}

/// Checks one Smith normal form against its defining properties and the
/// determinantal-divisor description of the torsion order.
pub fn check_snf(m: &IntegerMatrix) -> Result<(), String> {
    let r = smith_normal_form(m);
    if &(&r.u * m) * &r.v != r.s {
        return Err(format!("U M V != S for\n{m}"));
    }
    for (name, w) in [("U", &r.u), ("V", &r.v)] {
        if w.determinant().map(|d| d.abs()) != Some(BigInt::one()) {
            return Err(format!("{name} is not unimodular for\n{m}"));
        }
    }
    if !r.s.is_diagonal() {
        return Err(format!("S is not diagonal for\n{m}"));
    }
    let diag = r.s.diagonal();
    let rank = diag.iter().take_while(|d| !d.is_zero()).count();
    if diag[rank..].iter().any(|d| !d.is_zero()) || diag.iter().any(|d| d.is_negative()) {
        return Err(format!("S has misplaced zeros or signs for\n{m}"));
    }
    if diag[..rank].windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
        return Err(format!("divisibility chain fails for\n{m}"));
    }
    let torsion = cokernel(m).torsion_order();
    if torsion != m.minor_gcd(rank) || !m.minor_gcd(rank + 1).is_zero() {
        return Err(format!("torsion order {torsion} disagrees with minors for\n{m}"));
    }
    Ok(())
}

pub fn snf_suite(cfg: &ClaimConfig) -> ClaimOutcome {
    const CLAIM: &str = "Smith normal form: UMV=S, unimodular U,V, divisibility, torsion order";
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for i in 0..SNF_SAMPLES {
        if let Err(e) = check_snf(&random_small_matrix(&mut rng)) {
            return ClaimOutcome::new("6", CLAIM, false, format!("sample {i}: {e}"));
        }
    }
    ClaimOutcome::new("6", CLAIM, true, format!("{SNF_SAMPLES} random matrices"))
}

/// The presentations paired with the representation used to evaluate them.
pub fn soundness_targets() -> [(&'static str, &'static str); 4] {
    [
        ("sphere", "pi_pm"),
        ("disc", "pi_disc"),
        ("rp2", "rho_rp2"),
        ("suq2_mod_b", "rho_pm"),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct SoundnessStats {
    pub samples: usize,
    pub max_deviation: f64,
    /// Largest deviation divided by `max(1, Σ|c|)` over the coefficients
    /// of `x` and `nf(x)`.
    pub max_scaled_deviation: f64,
    pub idempotent: bool,
    pub star_consistent: bool,
    pub empty_blocks: usize,
}

/// Normal-form idempotence, agreement of `x` and `nf(x)` under a
/// representation, and `nf(nf(x*)*) = nf(x)`.
///
/// Generator matrices have norm at most one, so every entry of `ρ(x)` is
/// bounded by the sum of the absolute coefficients; deviations are compared
/// relative to that sum.
pub fn soundness_for(
    rep: &Representation,
    samples: usize,
    seed: u64,
) -> Result<SoundnessStats, Box<dyn std::error::Error>> {
    let p: &Arc<Presentation> = rep.presentation();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SoundnessStats {
        samples,
        max_deviation: 0.0,
        max_scaled_deviation: 0.0,
        idempotent: true,
        star_consistent: true,
        empty_blocks: 0,
    };
    for _ in 0..samples {
        let x = random_element(p, &mut rng, 6, 4);
        let nf = p.normal_form(&x)?;
        stats.idempotent &= p.normal_form(&nf)? == nf;
        let back = p.normal_form(&p.star(&p.normal_form(&p.star(&x))?))?;
        stats.star_consistent &= back == nf;
        let b = rep.shift_bound(&x).max(rep.shift_bound(&nf));
        let block = rep.block(b);
        if block.is_empty() {
            stats.empty_blocks += 1;
            continue;
        }
        let dev = Representation::block_deviation(&rep.evaluate(&x)?, &rep.evaluate(&nf)?, &block);
        let scale: f64 = x
            .terms()
            .chain(nf.terms())
            .map(|(_, c)| c.eval(rep.coefficient_q()).abs())
            .sum();
        stats.max_deviation = stats.max_deviation.max(dev);
        stats.max_scaled_deviation = stats.max_scaled_deviation.max(dev / scale.max(1.0));
    }
    Ok(stats)
}

pub fn rewriting_soundness(cfg: &ClaimConfig) -> ClaimOutcome {
    const CLAIM: &str = "normal forms are idempotent, star-consistent and agree numerically";
    let mut ok = true;
    let mut parts = Vec::new();
    for (i, (algebra, rep_name)) in soundness_targets().into_iter().enumerate() {
        let rep = match Representation::build(rep_name, cfg.q, 0.0, cfg.dim) {
            Ok(r) => r,
            Err(e) => return failure("7", CLAIM, e),
        };
        match soundness_for(&rep, ELEMENT_SAMPLES, cfg.seed.wrapping_add(i as u64)) {
            Ok(s) => {
                ok &= s.idempotent
                    && s.star_consistent
                    && s.empty_blocks == 0
                    && s.max_scaled_deviation <= SOUNDNESS_TOLERANCE;
                let mut part = format!(
                    "{algebra}: {:.3e} ({:.3e} scaled)",
                    s.max_deviation, s.max_scaled_deviation
                );
                if !s.idempotent {
                    part.push_str(" not idempotent");
                }
                if !s.star_consistent {
                    part.push_str(" star mismatch");
                }
                if s.empty_blocks > 0 {
                    part.push_str(&format!(" {} empty blocks", s.empty_blocks));
                }
                parts.push(part);
            }
            Err(e) => return failure("7", CLAIM, e),
        }
    }
    ClaimOutcome::new("7", CLAIM, ok, parts.join("; "))
}

pub fn ideal_lattices() -> ClaimOutcome {
    const CLAIM: &str = "hereditary saturated sets: 5, 3, 3; G2 and G3 lattices isomorphic";
    let sets: Vec<_> = ["G1", "G2", "G3"]
        .iter()
        .map(|n| Graph::builtin(n).expect("builtin graph").hereditary_saturated_sets())
        .collect();
    let counts: Vec<usize> = sets.iter().map(Vec::len).collect();
    let iso = inclusion_isomorphic(&sets[1], &sets[2]);
    ClaimOutcome::new(
        "8",
        CLAIM,
        counts == [5, 3, 3] && iso,
        format!("counts {counts:?}, G2~G3 {iso}"),
    )
}

/// All words of `x` have an even number of letters from `letters`.
pub fn even_in(x: &Element, letters: &[u8]) -> bool {
    x.terms().all(|(w, _)| {
        w.letters().iter().filter(|g| letters.contains(g)).count() % 2 == 0
    })
}

pub fn fixed_points(cfg: &ClaimConfig) -> ClaimOutcome {
    const CLAIM: &str = "r1-fixed iff even K-degree; r2-fixed iff even total degree";
    let run = || -> Result<ClaimOutcome, crate::ncalgebra::AlgebraError> {
        let r1 = GeneratorMap::builtin("r1")?;
        let r2 = GeneratorMap::builtin("r2")?;
        let p = r1.source().clone();
        let k = p.generator_index("K").expect("K");
        let all: Vec<u8> = (0..p.generators().len() as u8).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let (mut agree, mut fixed1, mut fixed2) = (0, 0, 0);
        for i in 0..ELEMENT_SAMPLES {
            let x = random_element(&p, &mut rng, 6, 4);
            // Symmetrize a third of the samples under each map so that both
            // outcomes of the predicates occur.
            let x = match i % 3 {
                1 => &x + &r1.apply_raw(&x)?,
                2 => &x + &r2.apply_raw(&x)?,
                _ => x,
            };
            let nf = p.normal_form(&x)?;
            let f1 = r1.is_fixed(&x)?;
            let f2 = r2.is_fixed(&x)?;
            fixed1 += f1 as usize;
            fixed2 += f2 as usize;
            if f1 == even_in(&nf, &[k]) && f2 == even_in(&nf, &all) {
                agree += 1;
            }
        }
        Ok(ClaimOutcome::new(
            "9",
            CLAIM,
            agree == ELEMENT_SAMPLES,
            format!(
                "{agree}/{ELEMENT_SAMPLES} agree ({fixed1} fixed by r1, {fixed2} fixed by r2)"
            ),
        ))
    };
    run().unwrap_or_else(|e| failure("9", CLAIM, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_claims_pass() {
        assert!(k_theory().passed());
        assert!(morphisms().iter().all(ClaimOutcome::passed));
        assert!(ideal_lattices().passed());
    }

    #[test]
    fn snf_checker_rejects_nothing_on_known_cases() {
        let m = IntegerMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        check_snf(&m).unwrap();
        check_snf(&IntegerMatrix::zeros(2, 3)).unwrap();
    }

    #[test]
    fn tiny_dimension_fails_truncation_sensitive_claims() {
        let cfg = ClaimConfig {
            dim: 8,
            ..ClaimConfig::default()
        };
        assert!(!rewriting_soundness(&cfg).passed());
    }

    #[test]
    fn trials_are_seeded() {
        assert_eq!(coefficient_trials(3, 2, 5), coefficient_trials(3, 2, 5));
        assert_ne!(coefficient_trials(3, 2, 5), coefficient_trials(4, 2, 5));
        assert!(coefficient_trials(0, 10, 60).iter().flatten().all(|c| c.abs() <= 5));
    }
}
