use nalgebra::DMatrix;
use num_complex::Complex64;

/// Sparse square operator stored by columns: `cols[j]` lists the nonzero
/// entries `(row, value)` of column `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    cols: Vec<Vec<(usize, Complex64)>>,
}

impl SparseOperator {
    pub fn zero(dim: usize) -> Self {
        SparseOperator {
            dim,
            cols: vec![Vec::new(); dim],
        }
    }

    /// `e_k ↦ weight(k) e_{k+shift}`; targets outside `0..dim` are dropped.
    pub fn weighted_shift(dim: usize, shift: i64, weight: impl Fn(usize) -> Complex64) -> Self {
        let mut op = Self::zero(dim);
        for k in 0..dim {
            let target = k as i64 + shift;
            if target < 0 || target >= dim as i64 {
                continue;
            }
            let w = weight(k);
            if w != Complex64::new(0.0, 0.0) {
                op.cols[k].push((target as usize, w));
            }
        }
        op
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operator must be square");
        let mut op = Self::zero(m.ncols());
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let v = m[(i, j)];
                if v != Complex64::new(0.0, 0.0) {
                    op.cols[j].push((i, v));
                }
            }
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                m[(i, j)] += v;
            }
        }
        m
    }

    /// `self · v` for a sparse vector given as `(index, value)` pairs.
    pub fn apply_sparse(&self, v: &[(usize, Complex64)]) -> Vec<(usize, Complex64)> {
        let mut out: Vec<(usize, Complex64)> = v
            .iter()
            .flat_map(|&(j, x)| self.cols[j].iter().map(move |&(i, a)| (i, a * x)))
            .collect();
        if out.len() > 1 {
            out.sort_by_key(|e| e.0);
            out.dedup_by(|next, kept| {
                if next.0 == kept.0 {
                    kept.1 += next.1;
                    true
                } else {
                    false
                }
            });
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(parts: &[&SparseOperator]) -> Self {
        let dim = parts.iter().map(|p| p.dim).sum();
        let mut op = Self::zero(dim);
        let mut offset = 0;
        for p in parts {
            for (j, col) in p.cols.iter().enumerate() {
                op.cols[offset + j] = col.iter().map(|&(i, v)| (offset + i, v)).collect();
            }
            offset += p.dim;
        }
        op
    }
}

/// How far an operator can move a basis index: every nonzero entry `(i, j)`
/// satisfies `i ≤ j + net`, and no intermediate index exceeds `j + peak`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Motion {
    pub net: i64,
    pub peak: i64,
}

impl Motion {
    pub const STILL: Motion = Motion { net: 0, peak: 0 };

    pub fn shift(d: i64) -> Motion {
        Motion {
            net: d,
            peak: d.max(0),
        }
    }

    /// Motion of `self ∘ first` (apply `first`, then `self`).
    pub fn after(self, first: Motion) -> Motion {
        Motion {
            net: first.net + self.net,
            peak: first.peak.max(first.net + self.peak),
        }
    }

    /// Bound valid for either operand, used for sums.
    pub fn join(self, other: Motion) -> Motion {
        Motion {
            net: self.net.max(other.net),
            peak: self.peak.max(other.peak),
        }
    }

    /// Motion of a product of letters, evaluated right to left.
    pub fn of_word(letters: &[u8], motions: &[Motion]) -> Motion {
        letters
            .iter()
            .rev()
            .fold(Motion::STILL, |acc, &g| motions[g as usize].after(acc))
    }
}
