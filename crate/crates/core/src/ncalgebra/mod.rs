//! Exact *-algebras given by generators and oriented relations.
//!
//! Coefficients are Laurent polynomials in a symbolic `q`; the parameter `s`
//! of the Podleś spheres is specialized to a rational before the rules are
//! built. Normal forms are computed by rewriting with rules oriented along a
//! degree-lexicographic monomial order.

mod coeff;
mod element;
mod morphism;
mod params;
mod parse;
mod presentation;
pub mod sample;

use thiserror::Error;

pub use coeff::Coefficient;
pub use element::{Element, Word};
pub use morphism::{GeneratorMap, MorphismReport, RelationResidue, BUILTIN_MAPS};
pub use params::{param_c_to_s, PodlesC};
pub use presentation::{
    parse_rational, AlgebraKind, Generator, Presentation, Rule, STEP_BUDGET,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("unknown algebra `{0}` (expected sphere, disc, rp2 or suq2_mod_b)")]
    UnknownAlgebra(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("element uses generator #{index}, which {algebra} does not have")]
    GeneratorMismatch { algebra: String, index: u8 },
    #[error("rewriting in {algebra} exceeded {steps} steps; a rule is misoriented")]
    StepBudgetExceeded { algebra: String, steps: usize },
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("no image given for generator `{0}`")]
    UndefinedGenerator(String),
    #[error("`{0}` is not an endomorphism")]
    NotEndomorphism(String),
    #[error("cannot compose `{second}` after `{first}`")]
    NotComposable { first: String, second: String },
}
