//! Exact integer linear algebra and the Cuntz formula
//! `K_0(C*(G)) = coker A_G`, `K_1(C*(G)) = ker A_G`.

mod matrix;
mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::graph::Graph;

pub use matrix::IntegerMatrix;
pub use snf::{smith_normal_form, SnfResult};

/// A finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ … ⊕ Z/d_t` in
/// invariant-factor form (`2 ≤ d_1 | d_2 | … | d_t`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup::free(0)
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn new(free_rank: usize, torsion: impl IntoIterator<Item = i64>) -> Self {
        AbelianGroup {
            free_rank,
            torsion: torsion.into_iter().map(BigInt::from).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

struct TorsionList<'a>(&'a [BigInt]);

impl Serialize for TorsionList<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for d in self.0 {
            match d.to_u64() {
                Some(small) => seq.serialize_element(&small)?,
                None => seq.serialize_element(&d.to_string())?,
            }
        }
        seq.end()
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("AbelianGroup", 2)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        st.serialize_field("torsion", &TorsionList(&self.torsion))?;
        st.end()
    }
}

/// `Z^rows / image(m)`.
pub fn cokernel(m: &IntegerMatrix) -> AbelianGroup {
    let factors = smith_normal_form(m).invariant_factors();
    AbelianGroup {
        free_rank: m.rows() - factors.len(),
        torsion: factors.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// `ker(m) ⊆ Z^cols`; always free.
pub fn kernel(m: &IntegerMatrix) -> AbelianGroup {
    AbelianGroup::free(m.cols() - smith_normal_form(m).rank())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KGroups {
    pub k0: AbelianGroup,
    pub k1: AbelianGroup,
}

/// K-theory of the graph C*-algebra of a finite graph.
pub fn k_groups(g: &Graph) -> KGroups {
    let a = g.cuntz_matrix();
    KGroups {
        k0: cokernel(&a),
        k1: kernel(&a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column(v: &[i64]) -> IntegerMatrix {
        IntegerMatrix::from_rows(&v.iter().map(|&x| vec![x]).collect::<Vec<_>>())
    }

    #[test]
    fn cokernels_of_builtin_columns() {
        assert_eq!(cokernel(&column(&[0, 1, 1])), AbelianGroup::free(2));
        assert_eq!(cokernel(&column(&[0, 2])), AbelianGroup::new(1, [2]));
        assert_eq!(cokernel(&column(&[0, 1])), AbelianGroup::free(1));
    }

    #[test]
    fn kernels() {
        assert!(kernel(&column(&[0, 1, 1])).is_trivial());
        assert!(kernel(&column(&[0, 2])).is_trivial());
        assert_eq!(kernel(&IntegerMatrix::zeros(1, 1)), AbelianGroup::free(1));
    }

    #[test]
    fn graph_k_groups() {
        let k = |name| k_groups(&Graph::builtin(name).unwrap());
        assert_eq!(k("G1"), KGroups { k0: AbelianGroup::free(2), k1: AbelianGroup::trivial() });
        assert_eq!(k("G2"), KGroups { k0: AbelianGroup::free(1), k1: AbelianGroup::trivial() });
        assert_eq!(k("G3"), KGroups { k0: AbelianGroup::new(1, [2]), k1: AbelianGroup::trivial() });
    }

    #[test]
    fn cuntz_algebra_and_sinks() {
        // O_3: one vertex with three loops, K_0 = Z_2, K_1 = 0.
        let o3 = Graph::parse("vertex v\nedge a v v\nedge b v v\nedge c v v").unwrap();
        assert_eq!(k_groups(&o3).k0, AbelianGroup::new(0, [2]));
        assert!(k_groups(&o3).k1.is_trivial());
        // A single loop gives C(S^1).
        let circle = Graph::parse("vertex v\nedge e v v").unwrap();
        assert_eq!(k_groups(&circle), KGroups { k0: AbelianGroup::free(1), k1: AbelianGroup::free(1) });
        // Edgeless graph: A_G has no columns.
        let points = Graph::parse("vertex a\nvertex b").unwrap();
        assert_eq!(k_groups(&points).k0, AbelianGroup::free(2));
    }

    #[test]
    fn display() {
        assert_eq!(AbelianGroup::new(1, [2]).to_string(), "Z + Z_2");
        assert_eq!(AbelianGroup::free(2).to_string(), "Z^2");
        assert_eq!(AbelianGroup::trivial().to_string(), "0");
    }
}
