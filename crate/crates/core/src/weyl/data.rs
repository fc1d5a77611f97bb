use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::tensor::{IndexedTensor, Poly, DEFAULT_DEGREE_CAP, MAX_VARS, TWO_FORM_SLOTS};

use super::pmat::PMat;

/// Largest supported `n` (the chart has `2n` variables).
pub const MAX_N: usize = MAX_VARS / 2;

pub fn check_n(n: usize) -> Result<()> {
    if (3..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedN(n))
    }
}

/// Pair index `p = A·n + A'`; also the coordinate index of `x^{A'}_A`.
pub fn pair(n: usize, a: usize, ap: usize) -> usize {
    a * n + ap
}

pub fn unpair(n: usize, p: usize) -> (usize, usize) {
    (p / n, p % n)
}

/// An elementary unipotent factor `I + entry · E_{row,col}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shear {
    pub row: usize,
    pub col: usize,
    pub entry: Poly,
}

/// The soldering frame `e_p = Σ_μ S[μ][p] ∂_μ` with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Soldering {
    matrix: PMat,
    inverse: PMat,
    shears: Option<Vec<Shear>>,
}

impl Soldering {
    pub fn identity(n: usize) -> Self {
        let m = PMat::identity(2 * n, 2 * n);
        Soldering { matrix: m.clone(), inverse: m, shears: Some(Vec::new()) }
    }

    /// Product of shears in the given order; the inverse is the product of
    /// the inverted shears in reverse order.
    pub fn from_shears(n: usize, shears: Vec<Shear>) -> Result<Self> {
        let d = 2 * n;
        let mut matrix = PMat::identity(d, d);
        let mut inverse = PMat::identity(d, d);
        for s in &shears {
            if s.row >= d || s.col >= d || s.row == s.col {
                return Err(Error::Precondition(format!(
                    "shear position ({}, {}) must be off-diagonal in a {d}x{d} frame",
                    s.row, s.col
                )));
            }
            if s.entry.nvars() != d {
                return Err(Error::NvarsMismatch { left: s.entry.nvars(), right: d });
            }
            let mut f = PMat::identity(d, d);
            f.set(s.row, s.col, s.entry.clone());
            matrix = matrix.mul(&f);
            let mut g = PMat::identity(d, d);
            g.set(s.row, s.col, -&s.entry);
            inverse = g.mul(&inverse);
        }
        Ok(Soldering { matrix, inverse, shears: Some(shears) })
    }

    /// An explicit matrix with a claimed inverse; `validate` checks it.
    pub fn from_matrices(matrix: PMat, inverse: PMat) -> Self {
        Soldering { matrix, inverse, shears: None }
    }

    pub fn matrix(&self) -> &PMat {
        &self.matrix
    }

    pub fn inverse(&self) -> &PMat {
        &self.inverse
    }

    pub fn shears(&self) -> Option<&[Shear]> {
        self.shears.as_deref()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == PMat::identity(self.matrix.rows(), self.matrix.nvars())
    }
}

/// Frame-level quantities derived once per data set.
#[derive(Debug)]
pub(crate) struct Frame {
    /// `Γ^E(e_p)`, `Γ^F(e_p)`
    pub gamma_e: Vec<PMat>,
    pub gamma_f: Vec<PMat>,
    /// `[e_p, e_q] = Σ_r c[p][q][r] e_r`
    pub brackets: Vec<Vec<Vec<Poly>>>,
}

/// A chart-level almost Grassmannian structure with a choice of Weyl data.
#[derive(Clone, Debug)]
pub struct ChartWeylData {
    n: usize,
    degree_cap: u32,
    soldering: Soldering,
    gamma_e: Vec<PMat>,
    gamma_f: Vec<PMat>,
    rho: IndexedTensor,
    frame: OnceLock<Arc<Frame>>,
}

impl PartialEq for ChartWeylData {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.soldering == other.soldering
            && self.gamma_e == other.gamma_e
            && self.gamma_f == other.gamma_f
            && self.rho == other.rho
    }
}

impl ChartWeylData {
    /// The flat model: `S = I`, `Γ = 0`, `P = 0`.
    pub fn flat(n: usize) -> Result<Self> {
        check_n(n)?;
        let nv = 2 * n;
        Self::new(
            n,
            Soldering::identity(n),
            vec![PMat::zeros(2, 2, nv); nv],
            vec![PMat::zeros(n, n, nv); nv],
            IndexedTensor::zeros(n, nv, &TWO_FORM_SLOTS),
        )
    }

    pub fn new(
        n: usize,
        soldering: Soldering,
        gamma_e: Vec<PMat>,
        gamma_f: Vec<PMat>,
        rho: IndexedTensor,
    ) -> Result<Self> {
        check_n(n)?;
        let nv = 2 * n;
        let shape_ok = soldering.matrix.rows() == nv
            && soldering.matrix.cols() == nv
            && soldering.inverse.rows() == nv
            && soldering.inverse.cols() == nv
            && gamma_e.len() == nv
            && gamma_f.len() == nv
            && gamma_e.iter().all(|g| g.rows() == 2 && g.cols() == 2 && g.nvars() == nv)
            && gamma_f.iter().all(|g| g.rows() == n && g.cols() == n && g.nvars() == nv);
        if !shape_ok {
            return Err(Error::Precondition(format!("chart data shapes inconsistent with n = {n}")));
        }
        if rho.slots() != TWO_FORM_SLOTS || rho.n() != n || rho.nvars() != nv {
            return Err(Error::Slot(format!("rho must have slots {TWO_FORM_SLOTS:?}")));
        }
        Ok(ChartWeylData {
            n,
            degree_cap: DEFAULT_DEGREE_CAP,
            soldering,
            gamma_e,
            gamma_f,
            rho,
            frame: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        2 * self.n
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn soldering(&self) -> &Soldering {
        &self.soldering
    }

    pub fn gamma_e(&self) -> &[PMat] {
        &self.gamma_e
    }

    pub fn gamma_f(&self) -> &[PMat] {
        &self.gamma_f
    }

    pub fn rho(&self) -> &IndexedTensor {
        &self.rho
    }

    pub fn with_degree_cap(mut self, cap: u32) -> Self {
        self.degree_cap = cap;
        self
    }

    pub fn with_rho(&self, rho: IndexedTensor) -> Result<Self> {
        let mut d = Self::new(self.n, self.soldering.clone(), self.gamma_e.clone(), self.gamma_f.clone(), rho)?;
        d.degree_cap = self.degree_cap;
        Ok(d)
    }

    pub fn with_gammas(&self, gamma_e: Vec<PMat>, gamma_f: Vec<PMat>) -> Result<Self> {
        let mut d = Self::new(self.n, self.soldering.clone(), gamma_e, gamma_f, self.rho.clone())?;
        d.degree_cap = self.degree_cap;
        Ok(d)
    }

    pub(crate) fn frame(&self) -> &Frame {
        self.frame.get_or_init(|| Arc::new(self.build_frame()))
    }

    /// `e_p(f) = Σ_μ S[μ][p] ∂_μ f`
    pub fn frame_derivative(&self, p: usize, f: &Poly) -> Poly {
        let s = &self.soldering.matrix;
        let mut out = Poly::zero(self.nvars());
        for mu in 0..self.nvars() {
            let c = s.get(mu, p);
            if c.is_zero() {
                continue;
            }
            let d = f.derivative(mu);
            if !d.is_zero() {
                out += &(c * &d);
            }
        }
        out
    }

    pub fn frame_derivative_mat(&self, p: usize, m: &PMat) -> PMat {
        PMat::from_fn(m.rows(), m.cols(), m.nvars(), |i, j| self.frame_derivative(p, m.get(i, j)))
    }

    /// Coordinate-indexed matrices converted to the frame:
    /// `M(e_p) = Σ_μ S[μ][p] M_μ`.
    pub fn to_frame(&self, per_coord: &[PMat]) -> Vec<PMat> {
        let s = &self.soldering.matrix;
        (0..self.nvars())
            .map(|p| {
                let mut acc = PMat::zeros(per_coord[0].rows(), per_coord[0].cols(), self.nvars());
                for (mu, m) in per_coord.iter().enumerate() {
                    let c = s.get(mu, p);
                    if !c.is_zero() {
                        acc = acc.add(&m.mul_poly(c));
                    }
                }
                acc
            })
            .collect()
    }

    /// Frame-indexed matrices converted to coordinates:
    /// `M_μ = Σ_p S⁻¹[p][μ] M(e_p)`.
    pub fn to_coords(&self, per_frame: &[PMat]) -> Vec<PMat> {
        let si = &self.soldering.inverse;
        (0..self.nvars())
            .map(|mu| {
                let mut acc = PMat::zeros(per_frame[0].rows(), per_frame[0].cols(), self.nvars());
                for (p, m) in per_frame.iter().enumerate() {
                    let c = si.get(p, mu);
                    if !c.is_zero() {
                        acc = acc.add(&m.mul_poly(c));
                    }
                }
                acc
            })
            .collect()
    }

    fn build_frame(&self) -> Frame {
        let nv = self.nvars();
        let s = &self.soldering.matrix;
        let si = &self.soldering.inverse;
        let gamma_e = self.to_frame(&self.gamma_e);
        let gamma_f = self.to_frame(&self.gamma_f);
        // [e_p, e_q]^μ = e_p(S[μ][q]) − e_q(S[μ][p])
        let mut brackets = vec![vec![vec![Poly::zero(nv); nv]; nv]; nv];
        for p in 0..nv {
            for q in 0..nv {
                if p == q {
                    continue;
                }
                let coord: Vec<Poly> = (0..nv)
                    .map(|mu| &self.frame_derivative(p, s.get(mu, q)) - &self.frame_derivative(q, s.get(mu, p)))
                    .collect();
                brackets[p][q] = si.apply(&coord);
            }
        }
        Frame { gamma_e, gamma_f, brackets }
    }
}

/// Checks the two structural invariants of chart data exactly.
pub fn validate(data: &ChartWeylData) -> VerificationReport {
    let mut r = VerificationReport::new();
    let nv = data.nvars();
    let id = PMat::identity(nv, nv);
    let s = data.soldering.matrix();
    let si = data.soldering.inverse();
    r.check("validate.soldering_inverse", s.mul(si) == id && si.mul(s) == id, || {
        "soldering times inverse is not the identity".into()
    });
    let bad: Vec<usize> =
        (0..nv).filter(|&mu| !(&data.gamma_e[mu].trace() + &data.gamma_f[mu].trace()).is_zero()).collect();
    r.check("validate.trace_compatibility", bad.is_empty(), || {
        format!("tr Γ^E + tr Γ^F nonzero in directions {bad:?}")
    });
    let cap = data.degree_cap;
    let max_deg = data
        .gamma_e
        .iter()
        .chain(&data.gamma_f)
        .chain([s, si])
        .map(PMat::degree)
        .chain([data.rho.degree()])
        .max()
        .unwrap_or(0);
    r.check("validate.degree_cap", max_deg <= cap, || format!("degree {max_deg} exceeds cap {cap}"));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn flat_data_validates() {
        let d = ChartWeylData::flat(3).unwrap();
        assert!(validate(&d).all_pass());
    }

    #[test]
    fn trace_incompatible_gamma_fails() {
        let d = ChartWeylData::flat(3).unwrap();
        let ge = vec![PMat::identity(2, 6); 6];
        let d = d.with_gammas(ge, d.gamma_f().to_vec()).unwrap();
        let r = validate(&d);
        assert_eq!(r.get("validate.trace_compatibility").unwrap().status, Status::Fail);
        assert_eq!(r.get("validate.soldering_inverse").unwrap().status, Status::Pass);
    }

    #[test]
    fn unipotent_soldering_has_polynomial_inverse() {
        let n = 3;
        let nv = 6;
        let shears = vec![
            Shear { row: 0, col: 1, entry: Poly::var(nv, 2) },
            Shear { row: 1, col: 4, entry: &Poly::var(nv, 0) * &Poly::var(nv, 3) },
            Shear { row: 0, col: 5, entry: Poly::var(nv, 1) },
        ];
        let s = Soldering::from_shears(n, shears).unwrap();
        let d = ChartWeylData::flat(n).unwrap();
        let d = ChartWeylData::new(n, s, d.gamma_e().to_vec(), d.gamma_f().to_vec(), d.rho().clone()).unwrap();
        assert!(validate(&d).all_pass());
    }

    #[test]
    fn wrong_inverse_detected() {
        let n = 3;
        let mut m = PMat::identity(6, 6);
        m.set(0, 1, Poly::var(6, 0));
        let s = Soldering::from_matrices(m, PMat::identity(6, 6));
        let f = ChartWeylData::flat(n).unwrap();
        let d = ChartWeylData::new(n, s, f.gamma_e().to_vec(), f.gamma_f().to_vec(), f.rho().clone()).unwrap();
        assert!(!validate(&d).all_pass());
    }

    #[test]
    fn out_of_range_n() {
        assert!(ChartWeylData::flat(2).is_err());
        assert!(ChartWeylData::flat(7).is_err());
    }
}
