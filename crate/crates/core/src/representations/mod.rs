//! Truncated weighted-shift representations.
//!
//! Every representation here acts on `span{e_0, …, e_{N−1}}`; a formula that
//! would produce `e_k` with `k` outside that range contributes zero. The
//! infinite-dimensional operators are reproduced exactly on a leading
//! block whose size depends on how far the evaluated words push indices
//! upward, and all numerical comparisons are restricted to that block.

mod independence;
mod shift;

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::ncalgebra::{AlgebraError, Element, GeneratorMap, Presentation};

pub use independence::{
    independence_check, vandermonde_determinant, vandermonde_solve, BasisFamily, BasisMonomial,
    IndependenceReport,
};
pub use shift::{Motion, SparseOperator};

pub const DEFAULT_Q: f64 = 0.5;
pub const DEFAULT_DIM: usize = 64;
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;
pub const RANK_THRESHOLD: f64 = 1e-10;

pub const BUILTIN_REPS: [&str; 9] = [
    "rho_plus", "rho_minus", "rho_pm", "pi_plus", "pi_minus", "pi_pm", "rho_rp2", "rho_theta",
    "pi_disc",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepError {
    #[error("q = {0} is outside (0, 1)")]
    InvalidQ(f64),
    #[error("dimension {0} is too small (need at least 4)")]
    InvalidDim(usize),
    #[error("unknown representation `{0}`")]
    UnknownRep(String),
    #[error("element does not belong to {0}")]
    GeneratorMismatch(String),
    #[error("generator `{0}` is not diagonal in the built basis")]
    NotDiagonal(String),
    #[error("no spectrum model for generator `{generator}` of `{rep}`")]
    NoSpectrumModel { rep: String, generator: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("n_max = {n_max} is too small; need at least {needed}")]
    InsufficientNmax { n_max: usize, needed: usize },
    #[error("monomial P^{k} R*^0 is not a basis element (use the R family)")]
    InvalidMonomial { k: u32 },
    #[error("coefficient vector has {got} entries, expected {expected}")]
    CoefficientCount { got: usize, expected: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// One irreducible block of a direct sum: indices `offset..offset + dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub offset: usize,
    pub dim: usize,
}

/// Generator matrices for a presentation, together with the index motion of
/// every generator.
#[derive(Debug, Clone)]
pub struct Representation {
    name: String,
    presentation: Arc<Presentation>,
    q: f64,
    coeff_q: f64,
    ops: Vec<SparseOperator>,
    motions: Vec<Motion>,
    summands: Vec<Summand>,
}

impl Representation {
    /// Builds a named representation at deformation parameter `q`.
    ///
    /// * `rho_plus`, `rho_minus`, `rho_pm` on `suq2_mod_b`;
    /// * `pi_plus`, `pi_minus`, `pi_pm` on the sphere `s = 1`, pulled back along `F`;
    /// * `rho_rp2` (alias `rho`) and the character `rho_theta` on `rp2`;
    /// * `pi_disc` on the disc, `pi_pm` pulled back along `disc-embedding`.
    ///
    /// `dim` is the size of each irreducible block; `rho_theta` ignores it.
    pub fn build(name: &str, q: f64, theta: f64, dim: usize) -> Result<Representation, RepError> {
        if !(q > 0.0 && q < 1.0) {
            return Err(RepError::InvalidQ(q));
        }
        if dim < 4 && name != "rho_theta" {
            return Err(RepError::InvalidDim(dim));
        }
        match name {
            "rho_plus" => Ok(rho_suq2(q, dim, 1.0)),
            "rho_minus" => Ok(rho_suq2(q, dim, -1.0)),
            "rho_pm" => Ok(rho_suq2(q, dim, 1.0).direct_sum(&rho_suq2(q, dim, -1.0), "rho_pm")),
            "pi_plus" | "pi_minus" | "pi_pm" => {
                let base = Representation::build(&name.replace("pi", "rho"), q, theta, dim)?;
                let f = GeneratorMap::builtin("F")?;
                Ok(base.pullback(&f, name)?)
            }
            "rho_rp2" | "rho" => Ok(rho_rp2(q, dim)),
            "rho_theta" => Ok(rho_theta(q, theta)),
            "pi_disc" => {
                let base = Representation::build("pi_pm", q, theta, dim)?;
                let e = GeneratorMap::builtin("disc-embedding")?;
                Ok(base.pullback(&e, "pi_disc")?)
            }
            _ => Err(RepError::UnknownRep(name.to_string())),
        }
    }

    /// Builds a representation from explicit generator operators.
    pub fn from_operators(
        name: &str,
        presentation: Arc<Presentation>,
        q: f64,
        ops: Vec<SparseOperator>,
        motions: Vec<Motion>,
    ) -> Representation {
        assert_eq!(ops.len(), presentation.generators().len());
        assert_eq!(motions.len(), ops.len());
        let dim = ops.first().map_or(0, SparseOperator::dim);
        assert!(ops.iter().all(|o| o.dim() == dim));
        Representation {
            name: name.to_string(),
            presentation,
            q,
            coeff_q: q,
            ops,
            motions,
            summands: vec![Summand { offset: 0, dim }],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Value substituted for the symbolic `q` in coefficients.
    pub fn coefficient_q(&self) -> f64 {
        self.coeff_q
    }

    pub fn dim(&self) -> usize {
        self.summands.iter().map(|s| s.dim).sum()
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn motion(&self, g: u8) -> Motion {
        self.motions[g as usize]
    }

    pub fn generator_matrix(&self, g: u8) -> DMatrix<Complex64> {
        self.ops[g as usize].to_dense()
    }

    /// Largest upward index excursion over the words of `x`.
    pub fn shift_bound(&self, x: &Element) -> usize {
        x.terms()
            .map(|(w, _)| Motion::of_word(w.letters(), &self.motions).peak)
            .max()
            .unwrap_or(0)
            .max(0) as usize
    }

    /// Indices on which evaluating elements with shift bound `b` is free of
    /// truncation effects: the leading `dim − b` indices of each summand.
    pub fn block(&self, b: usize) -> Vec<usize> {
        self.summands
            .iter()
            .flat_map(|s| s.offset..s.offset + s.dim.saturating_sub(b))
            .collect()
    }

    pub fn evaluate(&self, x: &Element) -> Result<DMatrix<Complex64>, RepError> {
        self.presentation
            .check(x)
            .map_err(|_| RepError::GeneratorMismatch(self.presentation.name().to_string()))?;
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        for (w, c) in x.terms() {
            let c = Complex64::new(c.eval(self.coeff_q), 0.0);
            for j in 0..n {
                let mut v = vec![(j, c)];
                for &g in w.letters().iter().rev() {
                    if v.is_empty() {
                        break;
                    }
                    v = self.ops[g as usize].apply_sparse(&v);
                }
                for (i, a) in v {
                    out[(i, j)] += a;
                }
            }
        }
        Ok(out)
    }

    /// The representation `self ∘ map` of `map.source()`. Coefficients of
    /// the source are evaluated at `q^k` where `k` is the map's `q` power.
    pub fn pullback(&self, map: &GeneratorMap, name: &str) -> Result<Representation, RepError> {
        if map.target().as_ref() != self.presentation.as_ref() {
            return Err(RepError::GeneratorMismatch(map.target().name().to_string()));
        }
        let source = map.source().clone();
        let mut ops = Vec::new();
        let mut motions = Vec::new();
        for g in 0..source.generators().len() as u8 {
            let image = map.image(g);
            ops.push(SparseOperator::from_dense(&self.evaluate(image)?));
            let motion = image
                .terms()
                .map(|(w, _)| Motion::of_word(w.letters(), &self.motions))
                .reduce(Motion::join)
                .unwrap_or(Motion::STILL);
            motions.push(motion);
        }
        Ok(Representation {
            name: name.to_string(),
            presentation: source,
            q: self.q,
            coeff_q: self.coeff_q.powi(map.q_power()),
            ops,
            motions,
            summands: self.summands.clone(),
        })
    }

    /// Block-diagonal sum of two representations of the same presentation.
    pub fn direct_sum(&self, other: &Representation, name: &str) -> Representation {
        assert_eq!(self.presentation, other.presentation, "different algebras");
        assert_eq!(self.coeff_q, other.coeff_q, "different parameters");
        let ops = self
            .ops
            .iter()
            .zip(&other.ops)
            .map(|(a, b)| SparseOperator::direct_sum(&[a, b]))
            .collect();
        let motions = self
            .motions
            .iter()
            .zip(&other.motions)
            .map(|(a, b)| a.join(*b))
            .collect();
        let shift = self.dim();
        let summands = self
            .summands
            .iter()
            .copied()
            .chain(other.summands.iter().map(|s| Summand {
                offset: s.offset + shift,
                dim: s.dim,
            }))
            .collect();
        Representation {
            name: name.to_string(),
            presentation: self.presentation.clone(),
            q: self.q,
            coeff_q: self.coeff_q,
            ops,
            motions,
            summands,
        }
    }

    /// Largest entry of `|a − b|` over the rows and columns in `block`.
    pub fn block_deviation(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, block: &[usize]) -> f64 {
        let mut worst = 0.0f64;
        for &i in block {
            for &j in block {
                worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
            }
        }
        worst
    }

    /// Evaluates both sides of every rule and records the largest entry of
    /// the difference on the relevant compressed block.
    pub fn relation_residuals(&self) -> Result<ResidualReport, RepError> {
        let mut relations = Vec::new();
        for rule in self.presentation.rules() {
            let lhs = Element::word(rule.lhs.clone());
            let b = self.shift_bound(&lhs).max(self.shift_bound(&rule.rhs));
            let block = self.block(b);
            let diff = self.evaluate(&(&lhs - &rule.rhs))?;
            let zero = DMatrix::zeros(diff.nrows(), diff.ncols());
            relations.push(RelationResidual {
                relation: rule.label.clone(),
                shift_bound: b,
                block: block.len(),
                residual: Self::block_deviation(&diff, &zero, &block),
            });
        }
        let max_residual = relations.iter().map(|r| r.residual).fold(0.0, f64::max);
        Ok(ResidualReport {
            representation: self.name.clone(),
            algebra: self.presentation.name().to_string(),
            q: self.q,
            dim: self.dim(),
            max_residual,
            relations,
        })
    }

    /// Compares the diagonal of a generator with `model` on the leading
    /// `dim` entries of every summand.
    pub fn spectrum_check(
        &self,
        generator: &str,
        model: &SpectrumModel,
    ) -> Result<SpectrumReport, RepError> {
        let g = self
            .presentation
            .generator_index(generator)
            .ok_or_else(|| RepError::UnknownGenerator(generator.to_string()))?;
        let x = self.presentation.normal_form(&Element::generator(g))?;
        let m = self.evaluate(&x)?;
        spectrum_of(&m, generator, model, &self.summands, self.q)
    }

    /// Spectrum check for an arbitrary element expected to act diagonally.
    pub fn spectrum_check_element(
        &self,
        label: &str,
        x: &Element,
        model: &SpectrumModel,
    ) -> Result<SpectrumReport, RepError> {
        let m = self.evaluate(x)?;
        spectrum_of(&m, label, model, &self.summands, self.q)
    }
}

/// `value_k = sign · q^{step·k + offset}` on each summand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumModel {
    pub sign: f64,
    pub step: i32,
    pub offset: i32,
}

impl SpectrumModel {
    /// The diagonal predicted for a generator of a built-in representation.
    pub fn for_generator(rep: &str, generator: &str) -> Option<SpectrumModel> {
        let (sign, step, offset) = match (rep, generator) {
            ("rho_rp2" | "rho", "P") => (1.0, 4, 0),
            ("rho_plus", "b") => (1.0, 2, 2),
            ("rho_minus", "b") => (-1.0, 2, 2),
            ("pi_plus", "K") => (1.0, 2, 0),
            ("pi_minus", "K") => (-1.0, 2, 0),
            _ => return None,
        };
        Some(SpectrumModel { sign, step, offset })
    }

    pub fn value(&self, q: f64, k: usize) -> f64 {
        self.sign * q.powi(self.step * k as i32 + self.offset)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub generator: String,
    pub q: f64,
    pub dim: usize,
    pub model: SpectrumModel,
    pub max_deviation: f64,
    pub min_abs: f64,
    pub max_abs: f64,
}

fn spectrum_of(
    m: &DMatrix<Complex64>,
    label: &str,
    model: &SpectrumModel,
    summands: &[Summand],
    q: f64,
) -> Result<SpectrumReport, RepError> {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..n {
            if i != j && m[(i, j)].norm() != 0.0 {
                return Err(RepError::NotDiagonal(label.to_string()));
            }
        }
    }
    let mut max_deviation = 0.0f64;
    let mut min_abs = f64::INFINITY;
    let mut max_abs = 0.0f64;
    for s in summands {
        for k in 0..s.dim {
            let v = m[(s.offset + k, s.offset + k)];
            max_deviation = max_deviation.max((v - Complex64::new(model.value(q, k), 0.0)).norm());
            min_abs = min_abs.min(v.norm());
            max_abs = max_abs.max(v.norm());
        }
    }
    Ok(SpectrumReport {
        generator: label.to_string(),
        q,
        dim: n,
        model: *model,
        max_deviation,
        min_abs,
        max_abs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationResidual {
    pub relation: String,
    pub shift_bound: usize,
    /// Number of basis indices in the compressed block.
    pub block: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub representation: String,
    pub algebra: String,
    pub q: f64,
    pub dim: usize,
    pub max_residual: f64,
    pub relations: Vec<RelationResidual>,
}

impl ResidualReport {
    /// Every residual is within `tol` and no compressed block is empty.
    pub fn passes(&self, tol: f64) -> bool {
        self.relations.iter().all(|r| r.block > 0 && r.residual <= tol)
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `b e_k = ±q^{2(k+1)} e_k`, `a e_k = √(1 − q^{4k}) e_{k−1}`.
fn rho_suq2(q: f64, dim: usize, sign: f64) -> Representation {
    let p = Arc::new(Presentation::suq2_mod_b());
    let a = SparseOperator::weighted_shift(dim, -1, |k| real((1.0 - q.powi(4 * k as i32)).sqrt()));
    let a_star = SparseOperator::weighted_shift(dim, 1, |k| {
        real((1.0 - q.powi(4 * (k as i32 + 1))).sqrt())
    });
    let b = SparseOperator::weighted_shift(dim, 0, |k| real(sign * q.powi(2 * (k as i32 + 1))));
    let name = if sign > 0.0 { "rho_plus" } else { "rho_minus" };
    Representation::from_operators(
        name,
        p,
        q,
        vec![a, a_star, b],
        vec![Motion::shift(-1), Motion::shift(1), Motion::STILL],
    )
}

/// `P e_k = q^{4k} e_k`, `T e_k = q^{2(k−1)} √(1 − q^{4k}) e_{k−1}`,
/// `R e_k = √((1 − q^{4k})(1 − q^{4(k−1)})) e_{k−2}`.
fn rho_rp2(q: f64, dim: usize) -> Representation {
    let p = Arc::new(Presentation::rp2());
    let f = |k: i32| 1.0 - q.powi(4 * k);
    let pp = SparseOperator::weighted_shift(dim, 0, |k| real(q.powi(4 * k as i32)));
    let r = SparseOperator::weighted_shift(dim, -2, |k| {
        let k = k as i32;
        real((f(k) * f(k - 1)).sqrt())
    });
    let r_star = SparseOperator::weighted_shift(dim, 2, |k| {
        let k = k as i32;
        real((f(k + 1) * f(k + 2)).sqrt())
    });
    let t = SparseOperator::weighted_shift(dim, -1, |k| {
        let k = k as i32;
        real(q.powi(2 * (k - 1)) * f(k).sqrt())
    });
    let t_star = SparseOperator::weighted_shift(dim, 1, |k| {
        let k = k as i32;
        real(q.powi(2 * k) * f(k + 1).sqrt())
    });
    Representation::from_operators(
        "rho_rp2",
        p,
        q,
        vec![pp, r, r_star, t, t_star],
        vec![
            Motion::STILL,
            Motion::shift(-2),
            Motion::shift(2),
            Motion::shift(-1),
            Motion::shift(1),
        ],
    )
}

/// The characters `P = T = 0`, `R = e^{iθ}`.
fn rho_theta(q: f64, theta: f64) -> Representation {
    let p = Arc::new(Presentation::rp2());
    let zero = SparseOperator::zero(1);
    let phase = Complex64::from_polar(1.0, theta);
    let r = SparseOperator::weighted_shift(1, 0, |_| phase);
    let r_star = SparseOperator::weighted_shift(1, 0, |_| phase.conj());
    Representation::from_operators(
        "rho_theta",
        p,
        q,
        vec![zero.clone(), r, r_star, zero.clone(), zero],
        vec![Motion::STILL; 5],
    )
}

#[cfg(test)]
mod tests;
