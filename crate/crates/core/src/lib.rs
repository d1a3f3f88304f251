//! Graph C*-algebra K-theory and exact *-algebra rewriting for the Podleś
//! equator sphere, the quantum disc and the quantum real projective plane.
//!
//! The crate is split along the natural layers of the computation:
//!
//! * [`graph`]: finite directed graphs, a small text format, the Cuntz map
//!   `A_G` and the lattice of hereditary saturated vertex sets.
//! * [`ktheory`]: exact integer matrices, Smith normal form, and
//!   `K_0 = coker A_G`, `K_1 = ker A_G`.
//! * [`ncalgebra`]: Laurent-polynomial coefficients, words, presentations as
//!   oriented rewrite systems, normal forms and generator maps.
//! * [`representations`]: truncated weighted-shift representations used as
//!   a numerical equality oracle, plus the Vandermonde independence check.
//! * [`claims`]: a one-shot runner over all the checks, used by the CLI.

pub mod claims;
pub mod graph;
pub mod ktheory;
pub mod ncalgebra;
pub mod representations;

pub use graph::{Graph, GraphError, VertexSet};
pub use ktheory::{AbelianGroup, IntegerMatrix, SnfResult};
pub use ncalgebra::{AlgebraError, Coefficient, Element, GeneratorMap, Presentation};
pub use representations::{RepError, Representation};

/// Schema tag carried by every JSON report.
pub const SCHEMA: &str = "qcstar/1";
