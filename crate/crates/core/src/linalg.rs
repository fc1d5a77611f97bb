//! Exact linear algebra over the rationals: reduced echelon forms, kernels,
//! ranks and reusable solvers.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Q;

/// A sparse row: column index to nonzero value.
pub type SparseRow = BTreeMap<usize, Q>;

/// Incremental Gaussian elimination on sparse rows.
///
/// Rows are reduced against existing pivots as they arrive, so the stored
/// system never exceeds `rank` rows regardless of how many equations are
/// pushed.
#[derive(Clone, Debug)]
pub struct Eliminator {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl Eliminator {
    pub fn new(ncols: usize) -> Self {
        Eliminator { ncols, pivots: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots; returns true if it was
    /// independent (and has been added).
    pub fn push(&mut self, mut row: SparseRow) -> bool {
        row.retain(|_, v| !v.is_zero());
        while let Some((&col, lead)) = row.iter().find(|(c, _)| self.pivots.contains_key(c)) {
            let factor = lead.clone();
            let pivot = &self.pivots[&col];
            for (c, v) in pivot {
                let e = row.entry(*c).or_insert_with(Q::zero);
                *e -= &factor * v;
                if e.is_zero() {
                    row.remove(c);
                }
            }
        }
        let Some((&lead_col, lead)) = row.iter().next() else {
            return false;
        };
        let inv = Q::one() / lead;
        for v in row.values_mut() {
            *v *= &inv;
        }
        // keep existing pivot rows reduced in the new pivot column
        for prow in self.pivots.values_mut() {
            if let Some(f) = prow.get(&lead_col).cloned() {
                for (c, v) in &row {
                    let e = prow.entry(*c).or_insert_with(Q::zero);
                    *e -= &f * v;
                    if e.is_zero() {
                        prow.remove(c);
                    }
                }
            }
        }
        self.pivots.insert(lead_col, row);
        true
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Rows of the reduced echelon form, ordered by pivot column.
    pub fn rref_rows(&self) -> Vec<&SparseRow> {
        self.pivots.values().collect()
    }

    /// Kernel basis in reduced echelon order: one vector per free column,
    /// with a 1 in that column.
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        let mut out = Vec::new();
        for free in 0..self.ncols {
            if self.pivots.contains_key(&free) {
                continue;
            }
            let mut v = vec![Q::zero(); self.ncols];
            v[free] = Q::one();
            for (&pc, row) in &self.pivots {
                if let Some(x) = row.get(&free) {
                    v[pc] = -x.clone();
                }
            }
            out.push(v);
        }
        out
    }
}

pub fn dense_to_sparse(row: &[Q]) -> SparseRow {
    row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect()
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut e = Eliminator::new(ncols);
    for r in rows {
        e.push(dense_to_sparse(r));
    }
    e.rank()
}

/// Kernel of the matrix whose rows are given.
pub fn kernel(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut e = Eliminator::new(ncols);
    for r in rows {
        e.push(dense_to_sparse(r));
    }
    e.kernel_basis()
}

/// Reduced echelon form of the span of `vectors`, as dense rows. Two
/// families span the same subspace iff their forms are equal.
pub fn span_rref(vectors: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    let mut e = Eliminator::new(dim);
    for v in vectors {
        e.push(dense_to_sparse(v));
    }
    e.rref_rows()
        .into_iter()
        .map(|r| {
            let mut d = vec![Q::zero(); dim];
            for (c, v) in r {
                d[*c] = v.clone();
            }
            d
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    a.iter().map(|row| row.iter().zip(x).fold(Q::zero(), |acc, (r, v)| acc + r * v)).collect()
}

pub fn transpose(a: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| (0..rows).map(|i| a[i][j].clone()).collect()).collect()
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let bt = transpose(b);
    a.iter()
        .map(|row| bt.iter().map(|col| row.iter().zip(col).fold(Q::zero(), |acc, (x, y)| acc + x * y)).collect())
        .collect()
}

/// A factored square or rectangular system `G y = b` that can be solved
/// for many right-hand sides.
#[derive(Clone, Debug)]
pub struct Solver {
    /// `transform · G = rref`
    transform: Vec<Vec<Q>>,
    /// (row index in rref, pivot column)
    pivots: Vec<(usize, usize)>,
    nrows: usize,
    ncols: usize,
}

impl Solver {
    pub fn new(g: &[Vec<Q>]) -> Self {
        let nrows = g.len();
        let ncols = g.first().map_or(0, Vec::len);
        let mut aug: Vec<Vec<Q>> = g
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..nrows).map(|j| if i == j { Q::one() } else { Q::zero() }));
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == nrows {
                break;
            }
            let Some(p) = (r..nrows).find(|&i| !aug[i][c].is_zero()) else {
                continue;
            };
            aug.swap(r, p);
            let inv = Q::one() / &aug[r][c];
            for v in aug[r].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = aug[r].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
            pivots.push((r, c));
            r += 1;
        }
        let transform = aug.into_iter().map(|row| row[ncols..].to_vec()).collect();
        Solver { transform, pivots, nrows, ncols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// A particular solution with free variables set to zero, or `None`
    /// when `b` is outside the column space.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.nrows, "rhs length mismatch");
        let tb = mat_vec(&self.transform, b);
        if tb[self.pivots.len()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut y = vec![Q::zero(); self.ncols];
        for &(r, c) in &self.pivots {
            y[c] = tb[r].clone();
        }
        Some(y)
    }
}

/// Minimum-norm solver for `A x = b`: `x = A_Rᵀ y` with `(A_R A_Rᵀ) y = b_R`,
/// where `A_R` is a maximal set of independent rows of `A`. The result is
/// checked against all rows, so inconsistent right-hand sides give `None`.
#[derive(Clone, Debug)]
pub struct MinNormSolver {
    a: Vec<Vec<Q>>,
    rows: Vec<usize>,
    at: Vec<Vec<Q>>,
    gram: Solver,
}

impl MinNormSolver {
    pub fn new(a: &[Vec<Q>]) -> Self {
        let ncols = a.first().map_or(0, Vec::len);
        let mut e = Eliminator::new(ncols);
        let rows: Vec<usize> = (0..a.len()).filter(|&i| e.push(dense_to_sparse(&a[i]))).collect();
        let ar: Vec<Vec<Q>> = rows.iter().map(|&i| a[i].clone()).collect();
        let at = transpose(&ar);
        let gram = Solver::new(&mat_mul(&ar, &at));
        MinNormSolver { a: a.to_vec(), rows, at, gram }
    }

    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        let br: Vec<Q> = self.rows.iter().map(|&i| b[i].clone()).collect();
        let y = self.gram.solve(&br)?;
        let x = if self.at.is_empty() { Vec::new() } else { mat_vec(&self.at, &y) };
        let x = if x.is_empty() { vec![Q::zero(); self.a.first().map_or(0, Vec::len)] } else { x };
        if mat_vec(&self.a, &x) != b {
            return None;
        }
        Some(x)
    }
}

/// A solution of `A x = b` with every free variable set to zero, or `None`
/// if the system is inconsistent. Its support has at most `rank A` entries.
pub fn basic_solution(a: &[Vec<Q>], b: &[Q], ncols: usize) -> Option<Vec<Q>> {
    let mut e = Eliminator::new(ncols + 1);
    for (row, rhs) in a.iter().zip(b) {
        let mut r = dense_to_sparse(row);
        if !rhs.is_zero() {
            r.insert(ncols, rhs.clone());
        }
        e.push(r);
    }
    if e.pivots.contains_key(&ncols) {
        return None;
    }
    let mut x = vec![Q::zero(); ncols];
    for (&pc, row) in &e.pivots {
        if let Some(v) = row.get(&ncols) {
            x[pc] = v.clone();
        }
    }
    Some(x)
}

/// Determinant of a square matrix.
pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let piv = a[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &piv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn basic_solution_zeroes_free_variables() {
        let a = m(&[&[1, 2, 3], &[0, 0, 1]]);
        let x = basic_solution(&a, &[q(4), q(1)], 3).unwrap();
        assert_eq!(x, vec![q(1), q(0), q(1)]);
        assert!(basic_solution(&m(&[&[1, 1], &[2, 2]]), &[q(1), q(3)], 2).is_none());
    }

    #[test]
    fn det_small() {
        assert_eq!(det(&m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])), q(-1));
        assert_eq!(det(&m(&[&[2, 1], &[4, 2]])), q(0));
        assert_eq!(det(&[vec![q_frac(1, 2), q(3)], vec![q(1), q(4)]]), q(-1));
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&a, v).iter().all(Zero::is_zero));
        }
        assert_eq!(rank(&a), 1);
    }

    #[test]
    fn solver_detects_inconsistency() {
        let g = m(&[&[1, 1], &[2, 2]]);
        let s = Solver::new(&g);
        assert!(s.solve(&[q(1), q(3)]).is_none());
        let y = s.solve(&[q(1), q(2)]).unwrap();
        assert_eq!(mat_vec(&g, &y), vec![q(1), q(2)]);
    }

    #[test]
    fn min_norm_solution() {
        // x + y = 1 -> minimum norm (1/2, 1/2)
        let a = m(&[&[1, 1]]);
        let x = MinNormSolver::new(&a).solve(&[q(1)]).unwrap();
        assert_eq!(x, vec![q_frac(1, 2), q_frac(1, 2)]);
    }

    #[test]
    fn span_comparison() {
        let a = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]];
        let b = vec![vec![q(1), q(2), q(1)], vec![q(1), q(0), q(-1)]];
        assert_eq!(span_rref(&a, 3), span_rref(&b, 3));
    }
}
