//! Linear independence of the standard spanning set of `rp2` under `rho_rp2`.
//!
//! A numerical part computes the rank of the matrix whose columns are the
//! vectors `ρ(m)e_n`, `n = 0..=n_max`, for the given monomials. An exact part
//! evaluates `ρ(x)e_n` for `x = Σ c_m m` in rational arithmetic (entries are
//! tracked as `rational · √radicand`) and recovers every `c_m` by solving one
//! Vandermonde system per family and power of `R`.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{pow, Num, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{RepError, Representation, RANK_THRESHOLD};
use crate::ncalgebra::{Element, Presentation};

/// Maximal coefficient error accepted by the exact recovery.
pub const RECOVERY_TOLERANCE: f64 = 1e-8;

/// The four families `P^k R^l`, `P^k R*^l` (`l ≥ 1`), `P^k R^l T` and
/// `P^k R*^l T*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BasisFamily {
    R,
    RStar,
    RT,
    RStarTStar,
}

impl BasisFamily {
    pub const ALL: [BasisFamily; 4] = [
        BasisFamily::R,
        BasisFamily::RStar,
        BasisFamily::RT,
        BasisFamily::RStarTStar,
    ];

    /// Index displacement of `P^k (…)` applied to `e_n`.
    pub fn offset(self, l: u32) -> i64 {
        let l = l as i64;
        match self {
            BasisFamily::R => -2 * l,
            BasisFamily::RStar => 2 * l,
            BasisFamily::RT => -1 - 2 * l,
            BasisFamily::RStarTStar => 1 + 2 * l,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BasisMonomial {
    pub family: BasisFamily,
    pub l: u32,
    pub k: u32,
}

impl BasisMonomial {
    pub fn new(k: u32, l: u32, family: BasisFamily) -> Result<BasisMonomial, RepError> {
        if family == BasisFamily::RStar && l == 0 {
            return Err(RepError::InvalidMonomial { k });
        }
        Ok(BasisMonomial { family, l, k })
    }

    /// Every basis monomial with `k ≤ kmax` and `l ≤ lmax`, ordered by
    /// family, then `l`, then `k`.
    pub fn all(kmax: u32, lmax: u32) -> Vec<BasisMonomial> {
        let mut out = Vec::new();
        for family in BasisFamily::ALL {
            for l in 0..=lmax {
                if family == BasisFamily::RStar && l == 0 {
                    continue;
                }
                for k in 0..=kmax {
                    out.push(BasisMonomial { family, l, k });
                }
            }
        }
        out
    }

    /// The generator letters, left to right.
    pub fn letters(&self) -> Vec<&'static str> {
        let mut w = vec!["P"; self.k as usize];
        let (r, tail) = match self.family {
            BasisFamily::R => ("R", None),
            BasisFamily::RStar => ("R'", None),
            BasisFamily::RT => ("R", Some("T")),
            BasisFamily::RStarTStar => ("R'", Some("T'")),
        };
        w.extend(std::iter::repeat(r).take(self.l as usize));
        w.extend(tail);
        w
    }

    pub fn to_element(&self, rp2: &Presentation) -> Element {
        self.letters()
            .iter()
            .fold(Element::one(), |acc, g| &acc * &rp2.gen(g))
    }

    /// `ρ(self) e_n` as `(index, rational, radicand)`, or `None` when it
    /// vanishes.
    fn exact_image(&self, q: &BigRational, n: usize) -> Option<(i64, BigRational, BigRational)> {
        let qp = |e: i64| pow(q.clone(), e as usize);
        let f = |k: i64| BigRational::one() - qp(4 * k);
        let mut idx = n as i64;
        let mut rational = BigRational::one();
        let mut radicand = BigRational::one();
        for g in self.letters().iter().rev() {
            match *g {
                "P" => rational *= qp(4 * idx),
                "R" => {
                    if idx < 2 {
                        return None;
                    }
                    radicand *= f(idx) * f(idx - 1);
                    idx -= 2;
                }
                "R'" => {
                    radicand *= f(idx + 1) * f(idx + 2);
                    idx += 2;
                }
                "T" => {
                    if idx < 1 {
                        return None;
                    }
                    rational *= qp(2 * (idx - 1));
                    radicand *= f(idx);
                    idx -= 1;
                }
                "T'" => {
                    rational *= qp(2 * idx);
                    radicand *= f(idx + 1);
                    idx += 1;
                }
                _ => unreachable!(),
            }
        }
        Some((idx, rational, radicand))
    }
}

impl fmt::Display for BasisMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, tail) = match self.family {
            BasisFamily::R => ("R", ""),
            BasisFamily::RStar => ("R*", ""),
            BasisFamily::RT => ("R", " T"),
            BasisFamily::RStarTStar => ("R*", " T*"),
        };
        write!(f, "P^{} {r}^{}{tail}", self.k, self.l)
    }
}

/// Solves `Σ_j a_j x_i^j = y_i` (Björck–Pereyra). Returns `None` for
/// repeated nodes or mismatched lengths.
pub fn vandermonde_solve<T: Clone + Num>(nodes: &[T], rhs: &[T]) -> Option<Vec<T>> {
    let m = nodes.len();
    if rhs.len() != m {
        return None;
    }
    let mut a = rhs.to_vec();
    for k in 0..m.saturating_sub(1) {
        for i in (k + 1..m).rev() {
            let d = nodes[i].clone() - nodes[i - k - 1].clone();
            if d.is_zero() {
                return None;
            }
            a[i] = (a[i].clone() - a[i - 1].clone()) / d;
        }
    }
    for k in (0..m.saturating_sub(1)).rev() {
        for i in k..m - 1 {
            a[i] = a[i].clone() - nodes[k].clone() * a[i + 1].clone();
        }
    }
    Some(a)
}

/// `∏_{i<j} (x_j − x_i)`.
pub fn vandermonde_determinant<T: Clone + Num>(nodes: &[T]) -> T {
    let mut det = T::one();
    for j in 0..nodes.len() {
        for i in 0..j {
            det = det * (nodes[j].clone() - nodes[i].clone());
        }
    }
    det
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndependenceReport {
    pub q: f64,
    pub n_max: usize,
    pub monomials: usize,
    /// Nonzero rows of the evaluation matrix.
    pub rows: usize,
    pub rank: usize,
    pub full_rank: bool,
    pub sigma_max: f64,
    pub sigma_min: f64,
    pub threshold: f64,
    /// Every per-family Vandermonde system has nonzero determinant.
    pub vandermonde_nonsingular: bool,
    pub trials: usize,
    pub max_recovery_error: f64,
    pub recovered: bool,
}

impl IndependenceReport {
    pub fn passes(&self) -> bool {
        self.full_rank && self.vandermonde_nonsingular && self.recovered
    }
}

/// Rank of the evaluation matrix of `monomials` on `e_0..e_{n_max}` and exact
/// recovery of each coefficient vector in `trials`.
pub fn independence_check(
    monomials: &[BasisMonomial],
    q: f64,
    n_max: usize,
    trials: &[Vec<i64>],
) -> Result<IndependenceReport, RepError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(RepError::InvalidQ(q));
    }
    let kmax = monomials.iter().map(|m| m.k as usize).max().unwrap_or(0);
    let lmax = monomials.iter().map(|m| m.l as usize).max().unwrap_or(0);
    let needed = 2 * lmax + kmax + 2;
    if n_max < needed {
        return Err(RepError::InsufficientNmax { n_max, needed });
    }
    for t in trials {
        if t.len() != monomials.len() {
            return Err(RepError::CoefficientCount {
                got: t.len(),
                expected: monomials.len(),
            });
        }
    }

    let numeric = numeric_rank(monomials, q, n_max, lmax)?;

    let qx = BigRational::from_float(q).ok_or(RepError::InvalidQ(q))?;
    let mut groups: BTreeMap<(BasisFamily, u32), u32> = BTreeMap::new();
    for m in monomials {
        let e = groups.entry((m.family, m.l)).or_insert(0);
        *e = (*e).max(m.k);
    }
    // Only the rows read by the Vandermonde systems are evaluated exactly.
    let last_row = groups
        .iter()
        .map(|(&(f, l), &k)| (-f.offset(l)).max(0) as usize + k as usize)
        .max()
        .unwrap_or(0);
    // images[m][n] = ρ(monomial m) e_n.
    let images: Vec<Vec<Option<(i64, BigRational, BigRational)>>> = monomials
        .iter()
        .map(|m| (0..=last_row).map(|n| m.exact_image(&qx, n)).collect())
        .collect();

    let mut nonsingular = true;
    let mut systems = Vec::new();
    for (&(family, l), &kg) in &groups {
        let offset = family.offset(l);
        let n0 = (-offset).max(0) as usize;
        let ns: Vec<usize> = (n0..=n0 + kg as usize).collect();
        let nodes: Vec<BigRational> = ns
            .iter()
            .map(|&n| pow(qx.clone(), 4 * (n as i64 + offset) as usize))
            .collect();
        nonsingular &= !vandermonde_determinant(&nodes).is_zero();
        let base = BasisMonomial { family, l, k: 0 };
        let scale: Vec<BigRational> = ns
            .iter()
            .map(|&n| base.exact_image(&qx, n).expect("n0 keeps the image nonzero").1)
            .collect();
        systems.push((family, l, kg, offset, ns, nodes, scale));
    }

    let mut max_err = 0.0f64;
    for coeffs in trials {
        for (family, l, kg, offset, ns, nodes, scale) in &systems {
            let rhs: Vec<BigRational> = ns
                .iter()
                .zip(scale)
                .map(|(&n, s)| coordinate(&images, coeffs, n, n as i64 + offset) / s)
                .collect();
            let solved = vandermonde_solve(nodes, &rhs).expect("nodes are distinct");
            for (k, a) in solved.iter().enumerate().take(*kg as usize + 1) {
                let truth = monomials
                    .iter()
                    .zip(coeffs)
                    .find(|(m, _)| m.family == *family && m.l == *l && m.k as usize == k)
                    .map_or(0, |(_, &c)| c);
                let err = (a - BigRational::from_integer(BigInt::from(truth))).abs();
                max_err = max_err.max(err.to_f64().unwrap_or(f64::INFINITY));
            }
        }
    }

    Ok(IndependenceReport {
        q,
        n_max,
        monomials: monomials.len(),
        rows: numeric.rows,
        rank: numeric.rank,
        full_rank: numeric.rank == monomials.len(),
        sigma_max: numeric.sigma_max,
        sigma_min: numeric.sigma_min,
        threshold: numeric.threshold,
        vandermonde_nonsingular: nonsingular,
        trials: trials.len(),
        max_recovery_error: max_err,
        recovered: max_err <= RECOVERY_TOLERANCE,
    })
}

/// Rational part of the `index` coordinate of `ρ(Σ c_m m) e_n`. All
/// contributions to one coordinate share the same radicand.
fn coordinate(
    images: &[Vec<Option<(i64, BigRational, BigRational)>>],
    coeffs: &[i64],
    n: usize,
    index: i64,
) -> BigRational {
    let mut sum = BigRational::zero();
    let mut radicand: Option<&BigRational> = None;
    for (img, &c) in images.iter().zip(coeffs) {
        if let Some((idx, rational, rad)) = &img[n] {
            if *idx != index || c == 0 {
                continue;
            }
            match radicand {
                None => radicand = Some(rad),
                Some(r) => assert_eq!(r, rad, "coordinate {index} mixes radicands"),
            }
            sum += rational * BigRational::from_integer(BigInt::from(c));
        }
    }
    sum
}

struct NumericRank {
    rows: usize,
    rank: usize,
    sigma_max: f64,
    sigma_min: f64,
    threshold: f64,
}

fn numeric_rank(
    monomials: &[BasisMonomial],
    q: f64,
    n_max: usize,
    lmax: usize,
) -> Result<NumericRank, RepError> {
    let dim = n_max + 2 * lmax + 2;
    let rep = Representation::build("rho_rp2", q, 0.0, dim)?;
    let rp2 = rep.presentation().clone();
    let cols: Vec<Vec<f64>> = monomials
        .iter()
        .map(|m| {
            let a = rep.evaluate(&m.to_element(&rp2))?;
            Ok((0..=n_max)
                .flat_map(|n| (0..dim).map(move |i| (i, n)))
                .map(|(i, n)| a[(i, n)].re)
                .collect())
        })
        .collect::<Result<_, RepError>>()?;
    let total_rows = dim * (n_max + 1);
    let live: Vec<usize> = (0..total_rows)
        .filter(|&r| cols.iter().any(|c| c[r] != 0.0))
        .collect();
    let mut mat = DMatrix::<f64>::zeros(live.len(), monomials.len());
    for (j, c) in cols.iter().enumerate() {
        let norm = live.iter().map(|&r| c[r] * c[r]).sum::<f64>().sqrt();
        for (i, &r) in live.iter().enumerate() {
            mat[(i, j)] = if norm > 0.0 { c[r] / norm } else { 0.0 };
        }
    }
    if mat.ncols() == 0 || mat.nrows() == 0 {
        return Ok(NumericRank {
            rows: live.len(),
            rank: 0,
            sigma_max: 0.0,
            sigma_min: 0.0,
            threshold: 0.0,
        });
    }
    let sv = mat.singular_values();
    let sigma_max = sv.iter().copied().fold(0.0, f64::max);
    let threshold = RANK_THRESHOLD * sigma_max;
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    let sigma_min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(NumericRank {
        rows: live.len(),
        rank,
        sigma_max,
        sigma_min,
        threshold,
    })
}
