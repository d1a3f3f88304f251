//! Finite directed multigraphs and the combinatorics needed for their
//! graph C*-algebras.
//!
//! Graphs are written in a line-oriented format:
//!
//! ```text
//! # the Toeplitz graph
//! vertex v
//! vertex w
//! edge e v v
//! edge f v w
//! ```
//!
//! Vertex declaration order fixes the row order of [`Graph::cuntz_matrix`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::ktheory::IntegerMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate vertex `{name}`")]
    DuplicateVertex { line: usize, name: String },
    #[error("line {line}: duplicate edge `{name}`")]
    DuplicateEdge { line: usize, name: String },
    #[error("line {line}: edge `{edge}` uses undeclared vertex `{vertex}`")]
    UndeclaredVertex {
        line: usize,
        edge: String,
        vertex: String,
    },
    #[error("unknown builtin graph `{0}` (expected G1, G2 or G3)")]
    UnknownBuiltin(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub source: usize,
    pub range: usize,
}

/// A finite directed graph with named vertices and named (possibly parallel)
/// edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

/// A subset of the vertices of some graph, stored as sorted vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        VertexSet {
            members: set.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        VertexSet::default()
    }

    pub fn indices(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.members.iter().all(|&v| other.contains(v))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::from_indices(self.members.iter().chain(&other.members).copied())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            members: self
                .members
                .iter()
                .copied()
                .filter(|&v| other.contains(v))
                .collect(),
        }
    }

    pub fn names<'g>(&self, graph: &'g Graph) -> Vec<&'g str> {
        self.members
            .iter()
            .map(|&v| graph.vertices[v].as_str())
            .collect()
    }
}

impl Graph {
    /// Builds a graph from vertex names and `(edge, source, range)` triples.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let mut builder = Builder::default();
        for v in vertices {
            builder.vertex(0, v.into())?;
        }
        for (name, source, range) in edges {
            builder.edge(0, name, &source, &range)?;
        }
        Ok(builder.finish())
    }

    /// Parses the line-oriented graph format.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut builder = Builder::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let tokens: Vec<&str> = content.split_whitespace().collect();
            match tokens.as_slice() {
                [] => {}
                ["vertex", name] => builder.vertex(line, (*name).to_string())?,
                ["edge", name, source, range] => {
                    builder.edge(line, (*name).to_string(), source, range)?
                }
                ["vertex", ..] => {
                    return Err(GraphError::Syntax {
                        line,
                        message: "expected `vertex <name>`".into(),
                    })
                }
                ["edge", ..] => {
                    return Err(GraphError::Syntax {
                        line,
                        message: "expected `edge <name> <source> <target>`".into(),
                    })
                }
                [keyword, ..] => {
                    return Err(GraphError::Syntax {
                        line,
                        message: format!("unknown keyword `{keyword}`"),
                    })
                }
            }
        }
        Ok(builder.finish())
    }

    /// One of the three graphs `G1`, `G2`, `G3` attached to the equator
    /// sphere, the quantum disc and the quantum real projective plane.
    pub fn builtin(name: &str) -> Result<Self, GraphError> {
        let text = match name {
            "G1" => "vertex v\nvertex w1\nvertex w2\nedge e v v\nedge f1 v w1\nedge f2 v w2\n",
            "G2" => "vertex v\nvertex w\nedge e v v\nedge f v w\n",
            "G3" => "vertex v\nvertex w\nedge e v v\nedge g1 v w\nedge g2 v w\n",
            _ => return Err(GraphError::UnknownBuiltin(name.to_string())),
        };
        Graph::parse(text)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.source == v).count()
    }

    /// Vertices emitting at least one edge, in declaration order.
    pub fn emitters(&self) -> VertexSet {
        VertexSet::from_indices((0..self.vertices.len()).filter(|&v| self.out_degree(v) > 0))
    }

    /// The matrix of `A_G : Z G0_+ -> Z G0`, `v ↦ Σ_{s(e)=v} r(e) − v`.
    ///
    /// Rows are indexed by all vertices and columns by the emitters, both in
    /// declaration order.
    pub fn cuntz_matrix(&self) -> IntegerMatrix {
        let emitters = self.emitters();
        let mut m = IntegerMatrix::zeros(self.vertices.len(), emitters.len());
        for (col, &v) in emitters.indices().iter().enumerate() {
            for e in self.edges.iter().filter(|e| e.source == v) {
                *m.get_mut(e.range, col) += 1;
            }
            *m.get_mut(v, col) -= BigInt::from(1);
        }
        m
    }

    /// True iff every edge leaving `set` lands in `set`.
    pub fn is_hereditary(&self, set: &VertexSet) -> bool {
        self.edges
            .iter()
            .all(|e| !set.contains(e.source) || set.contains(e.range))
    }

    /// True iff every emitter whose edges all land in `set` belongs to `set`.
    pub fn is_saturated(&self, set: &VertexSet) -> bool {
        (0..self.vertices.len()).all(|v| {
            let mut out = self.edges.iter().filter(|e| e.source == v).peekable();
            if out.peek().is_none() {
                return true;
            }
            !out.all(|e| set.contains(e.range)) || set.contains(v)
        })
    }

    /// Smallest hereditary saturated set containing `seed`.
    pub fn hereditary_saturated_closure(&self, seed: &VertexSet) -> VertexSet {
        let n = self.vertices.len();
        let mut inside = vec![false; n];
        for &v in seed.indices() {
            inside[v] = true;
        }
        loop {
            let mut changed = false;
            for e in &self.edges {
                if inside[e.source] && !inside[e.range] {
                    inside[e.range] = true;
                    changed = true;
                }
            }
            for v in 0..n {
                if inside[v] {
                    continue;
                }
                let mut out = self.edges.iter().filter(|e| e.source == v).peekable();
                if out.peek().is_some() && out.all(|e| inside[e.range]) {
                    inside[v] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        VertexSet::from_indices((0..n).filter(|&v| inside[v]))
    }

    /// All hereditary saturated vertex sets, ordered by size and then by
    /// their index lists.
    ///
    /// Every closed set above a closed set `C` is reached from `C` by adding
    /// one missing vertex and closing, so a search from the closure of the
    /// empty set visits the whole lattice.
    pub fn hereditary_saturated_sets(&self) -> Vec<VertexSet> {
        let n = self.vertices.len();
        let bottom = self.hereditary_saturated_closure(&VertexSet::empty());
        let mut found: BTreeSet<VertexSet> = BTreeSet::new();
        let mut stack = vec![bottom.clone()];
        found.insert(bottom);
        while let Some(current) = stack.pop() {
            for v in (0..n).filter(|&v| !current.contains(v)) {
                let next =
                    self.hereditary_saturated_closure(&current.union(&VertexSet::from_indices([v])));
                if found.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
        let mut sets: Vec<VertexSet> = found.into_iter().collect();
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        sets
    }

    /// Renders the graph in the text format accepted by [`Graph::parse`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str("vertex ");
            out.push_str(v);
            out.push('\n');
        }
        for e in &self.edges {
            out.push_str(&format!(
                "edge {} {} {}\n",
                e.name, self.vertices[e.source], self.vertices[e.range]
            ));
        }
        out
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Default)]
struct Builder {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_names: BTreeSet<String>,
}

impl Builder {
    fn vertex(&mut self, line: usize, name: String) -> Result<(), GraphError> {
        if self.index.contains_key(&name) {
            return Err(GraphError::DuplicateVertex { line, name });
        }
        self.index.insert(name.clone(), self.vertices.len());
        self.vertices.push(name);
        Ok(())
    }

    fn edge(&mut self, line: usize, name: String, source: &str, range: &str) -> Result<(), GraphError> {
        if self.edge_names.contains(&name) {
            return Err(GraphError::DuplicateEdge { line, name });
        }
        let lookup = |v: &str| {
            self.index
                .get(v)
                .copied()
                .ok_or_else(|| GraphError::UndeclaredVertex {
                    line,
                    edge: name.clone(),
                    vertex: v.to_string(),
                })
        };
        let source = lookup(source)?;
        let range = lookup(range)?;
        self.edge_names.insert(name.clone());
        self.edges.push(Edge {
            name,
            source,
            range,
        });
        Ok(())
    }

    fn finish(self) -> Graph {
        Graph {
            vertices: self.vertices,
            edges: self.edges,
        }
    }
}

/// Whether two families of sets are isomorphic as posets under inclusion.
/// Brute force over bijections; meant for the small lattices of this crate.
pub fn inclusion_isomorphic(a: &[VertexSet], b: &[VertexSet]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    let le = |s: &[VertexSet], i: usize, j: usize| s[i].is_subset(&s[j]);
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn extend(
        perm: &mut Vec<usize>,
        used: &mut [bool],
        ok: &dyn Fn(&[usize]) -> bool,
        n: usize,
    ) -> bool {
        if perm.len() == n {
            return true;
        }
        for j in 0..n {
            if used[j] {
                continue;
            }
            perm.push(j);
            used[j] = true;
            if ok(perm) && extend(perm, used, ok, n) {
                return true;
            }
            perm.pop();
            used[j] = false;
        }
        false
    }
    // Checks the newest assignment against all earlier ones.
    let ok = |p: &[usize]| {
        let i = p.len() - 1;
        (0..=i).all(|k| le(a, k, i) == le(b, p[k], p[i]) && le(a, i, k) == le(b, p[i], p[k]))
    };
    extend(&mut perm, &mut used, &ok, n)
}
