use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use super::mat::QMat;
use crate::error::{Error, Result};
use crate::rational::{random_q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Grade {
    Minus,
    Zero,
    Plus,
}

impl Grade {
    pub fn value(self) -> i8 {
        match self {
            Grade::Minus => -1,
            Grade::Zero => 0,
            Grade::Plus => 1,
        }
    }

    pub fn from_value(v: i8) -> Option<Grade> {
        match v {
            -1 => Some(Grade::Minus),
            0 => Some(Grade::Zero),
            1 => Some(Grade::Plus),
            _ => None,
        }
    }
}

/// `sl(n+2, Q)` with the |1|-grading `g₋₁ ⊕ g₀ ⊕ g₁` coming from the
/// block decomposition `R^{n+2} = R² ⊕ Rⁿ`.
///
/// Basis order: `g₋₁` (the `X_p`), then `g₀`, then `g₁` (the `Z^p`), with
/// `p = A·n + A'` throughout. `X_p` has a single 1 at row `2+A'`, column
/// `A`; `Z^p` has a single 1 at row `A`, column `2+A'`, so that
/// `tr(Z^p X_q) = δ_pq`. The `g₀` part walks the diagonal blocks row-major,
/// taking `E_ij` off the diagonal and `H_i = E_ii − E_{i+1,i+1}` on it.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    n: usize,
    basis: Vec<QMat>,
    grading: Vec<Grade>,
    /// `[b_i, b_j] = Σ_k c[i][j][k] b_k`, stored sparsely.
    structure: Vec<Vec<Vec<(usize, Q)>>>,
}

pub fn x_matrix(n: usize, p: usize) -> QMat {
    let (a, ap) = (p / n, p % n);
    QMat::unit(n + 2, 2 + ap, a)
}

pub fn z_matrix(n: usize, p: usize) -> QMat {
    let (a, ap) = (p / n, p % n);
    QMat::unit(n + 2, a, 2 + ap)
}

/// The `g₀` basis: block-diagonal, walking each diagonal block row-major.
pub fn g0_basis(n: usize) -> Vec<QMat> {
    let size = n + 2;
    let mut basis = Vec::new();
    for (lo, hi) in [(0, 2), (2, size)] {
        for i in lo..hi {
            for j in lo..hi {
                if i != j {
                    basis.push(QMat::unit(size, i, j));
                } else if i + 1 < size {
                    let mut h = QMat::unit(size, i, i);
                    h.set(i + 1, i + 1, -Q::from_integer(1.into()));
                    basis.push(h);
                }
            }
        }
    }
    basis
}

pub fn build_graded_algebra(n: usize) -> Result<GradedAlgebra> {
    if n < 3 {
        return Err(Error::UnsupportedN(n));
    }
    let mut basis = Vec::new();
    let mut grading = Vec::new();
    for p in 0..2 * n {
        basis.push(x_matrix(n, p));
        grading.push(Grade::Minus);
    }
    for b in g0_basis(n) {
        basis.push(b);
        grading.push(Grade::Zero);
    }
    for p in 0..2 * n {
        basis.push(z_matrix(n, p));
        grading.push(Grade::Plus);
    }
    let mut alg = GradedAlgebra { n, basis, grading, structure: Vec::new() };
    let dim = alg.basis.len();
    let mut structure = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let c = alg.basis[i].commutator(&alg.basis[j]);
            let coords = alg.coords(&c)?;
            structure[i][j] = coords.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
        }
    }
    alg.structure = structure;
    Ok(alg)
}

impl GradedAlgebra {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Matrix size `n + 2`.
    pub fn size(&self) -> usize {
        self.n + 2
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QMat] {
        &self.basis
    }

    pub fn grade(&self, i: usize) -> Grade {
        self.grading[i]
    }

    pub fn indices(&self, g: Grade) -> std::ops::Range<usize> {
        let m = 2 * self.n;
        match g {
            Grade::Minus => 0..m,
            Grade::Zero => m..self.dim() - m,
            Grade::Plus => self.dim() - m..self.dim(),
        }
    }

    pub fn bracket_coeffs(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.structure[i][j]
    }

    /// Coordinates of a traceless matrix in the basis.
    pub fn coords(&self, m: &QMat) -> Result<Vec<Q>> {
        let size = self.size();
        if m.dim() != size {
            return Err(Error::Representation(format!("matrix of size {} for sl({size})", m.dim())));
        }
        if !m.trace().is_zero() {
            return Err(Error::Representation("matrix is not traceless".into()));
        }
        let mut out = vec![Q::zero(); self.dim()];
        let mut running = Q::zero();
        let mut diag = Vec::with_capacity(size);
        for i in 0..size {
            running += m.get(i, i);
            diag.push(running.clone());
        }
        for (k, b) in self.basis.iter().enumerate() {
            // each basis element has a distinguished entry: its unique
            // off-diagonal 1, or the first diagonal entry of H_i
            let (i, j) = leading_entry(b);
            out[k] = if i == j { diag[i].clone() } else { m.get(i, j).clone() };
        }
        Ok(out)
    }

    pub fn from_coords(&self, coords: &[Q]) -> QMat {
        let mut m = QMat::zeros(self.size());
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                m = &m + &b.scale(c);
            }
        }
        m
    }

    pub fn grade_of(&self, m: &QMat) -> Option<Grade> {
        let size = self.size();
        let mut found = None;
        for i in 0..size {
            for j in 0..size {
                if m.get(i, j).is_zero() {
                    continue;
                }
                let g = match (i < 2, j < 2) {
                    (true, true) | (false, false) => Grade::Zero,
                    (false, true) => Grade::Minus,
                    (true, false) => Grade::Plus,
                };
                match found {
                    None => found = Some(g),
                    Some(f) if f != g => return None,
                    _ => {}
                }
            }
        }
        Some(found.unwrap_or(Grade::Zero))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, g: Grade, rng: &mut R) -> QMat {
        let mut coords = vec![Q::zero(); self.dim()];
        for i in self.indices(g) {
            coords[i] = random_q(rng, 9);
        }
        self.from_coords(&coords)
    }

    /// Exhaustive structural checks, as (name, holds) pairs.
    pub fn check_invariants(&self) -> Vec<(String, bool)> {
        let n = self.n;
        let mut out = Vec::new();
        let dims = (self.indices(Grade::Minus).len(), self.indices(Grade::Zero).len(), self.indices(Grade::Plus).len());
        out.push(("dimensions".to_string(), dims == (2 * n, n * n + 3, 2 * n) && self.dim() == (n + 2) * (n + 2) - 1));
        out.push(("traceless".to_string(), self.basis.iter().all(|b| b.trace().is_zero())));
        out.push((
            "grading_matches_blocks".to_string(),
            self.basis.iter().zip(&self.grading).all(|(b, g)| self.grade_of(b) == Some(*g)),
        ));
        let mut graded = true;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let s = self.grading[i].value() + self.grading[j].value();
                let ok = match Grade::from_value(s) {
                    None => self.structure[i][j].is_empty(),
                    Some(g) => self.structure[i][j].iter().all(|(k, _)| self.grading[*k] == g),
                };
                graded &= ok;
            }
        }
        out.push(("bracket_respects_grading".to_string(), graded));
        out.push(("jacobi".to_string(), self.jacobi_holds()));
        let pairing = (0..2 * n).all(|p| {
            (0..2 * n).all(|q| {
                let t = (&z_matrix(n, p) * &x_matrix(n, q)).trace();
                t == if p == q { Q::from_integer(1.into()) } else { Q::zero() }
            })
        });
        out.push(("trace_pairing_dual".to_string(), pairing));
        out
    }

    /// `[b_i,[b_j,b_k]] + [b_j,[b_k,b_i]] + [b_k,[b_i,b_j]] = 0` on all
    /// basis triples, using only the structure constants.
    pub fn jacobi_holds(&self) -> bool {
        let dim = self.dim();
        let nested = |a: usize, b: usize, c: usize, acc: &mut Vec<Q>| {
            for (m, cm) in &self.structure[b][c] {
                for (l, cl) in &self.structure[a][*m] {
                    acc[*l] += cm * cl;
                }
            }
        };
        for i in 0..dim {
            for j in i + 1..dim {
                for k in j + 1..dim {
                    let mut acc = vec![Q::zero(); dim];
                    nested(i, j, k, &mut acc);
                    nested(j, k, i, &mut acc);
                    nested(k, i, j, &mut acc);
                    if acc.iter().any(|v| !v.is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn leading_entry(b: &QMat) -> (usize, usize) {
    let d = b.dim();
    for i in 0..d {
        for j in 0..d {
            if i != j && !b.get(i, j).is_zero() {
                return (i, j);
            }
        }
    }
    for i in 0..d {
        if !b.get(i, i).is_zero() {
            return (i, i);
        }
    }
    unreachable!("zero basis element")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dimensions_n3() {
        let g = build_graded_algebra(3).unwrap();
        assert_eq!(g.dim(), 24);
        assert_eq!(g.indices(Grade::Minus).len(), 6);
        assert_eq!(g.indices(Grade::Plus).len(), 6);
        assert_eq!(g.indices(Grade::Zero).len(), 12);
    }

    #[test]
    fn small_n_rejected() {
        assert!(matches!(build_graded_algebra(2), Err(Error::UnsupportedN(2))));
    }

    #[test]
    fn invariants_hold() {
        for n in 3..=4 {
            let g = build_graded_algebra(n).unwrap();
            for (name, ok) in g.check_invariants() {
                assert!(ok, "n={n}: {name}");
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let g = build_graded_algebra(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for grade in [Grade::Minus, Grade::Zero, Grade::Plus] {
            let m = g.random_element(grade, &mut rng);
            assert_eq!(g.from_coords(&g.coords(&m).unwrap()), m);
        }
    }

    #[test]
    fn plus_part_is_abelian() {
        let g = build_graded_algebra(3).unwrap();
        for i in g.indices(Grade::Plus) {
            for j in g.indices(Grade::Plus) {
                assert!(g.bracket_coeffs(i, j).is_empty());
            }
        }
    }

    #[test]
    fn bracket_of_opposite_grades_lands_in_g0() {
        let g = build_graded_algebra(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = g.random_element(Grade::Minus, &mut rng);
        let z = g.random_element(Grade::Plus, &mut rng);
        let c = z.commutator(&x);
        assert_eq!(g.grade_of(&c), Some(Grade::Zero));
        assert!(c.trace().is_zero());
    }
}
