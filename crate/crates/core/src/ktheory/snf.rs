use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntegerMatrix;

/// `U · M · V = S` with `U`, `V` unimodular and `S` in Smith normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntegerMatrix,
    pub s: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries of `S`, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.s
            .diagonal()
            .into_iter()
            .filter(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form by repeated pivoting on the entry of least absolute
/// value in the trailing submatrix.
///
/// Ties are broken by `(row, col)` order, so `U`, `S`, `V` are fully
/// determined by the input.
pub fn smith_normal_form(m: &IntegerMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = min_pivot(&s, t) else {
                return SnfResult { u, s, v };
            };
            s.swap_rows(t, pr);
            u.swap_rows(t, pr);
            s.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let pivot = s.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = -(s.get(i, t) / &pivot);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= s.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = -(s.get(t, j) / &pivot);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= s.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }

            // The pivot must divide the whole trailing block; otherwise pull
            // an offending row up and reduce again.
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !s.get(i, j).is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfResult { u, s, v }
}

fn min_pivot(s: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for r in t..s.rows() {
        for c in t..s.cols() {
            let a = s.get(r, c);
            if a.is_zero() {
                continue;
            }
            let a = a.abs();
            if best.as_ref().is_none_or(|(b, _, _)| a < *b) {
                best = Some((a, r, c));
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}
