use crate::error::{Error, Result};
use crate::tensor::{IndexedTensor, Poly, Slot};

use super::pmat::PMat;

fn check_pair(a: &IndexedTensor, b: &IndexedTensor, last_a: Slot, last_b: Slot, what: &str) -> Result<()> {
    let (sa, sb) = (a.slots(), b.slots());
    let ok = !sa.is_empty()
        && sa.len() == sb.len()
        && sa[..sa.len() - 1] == sb[..sb.len() - 1]
        && sa[sa.len() - 1] == last_a
        && sb[sb.len() - 1] == last_b
        && a.n() == b.n()
        && a.nvars() == b.nvars();
    if ok {
        Ok(())
    } else {
        Err(Error::Slot(format!("{what}: incompatible slots {sa:?} / {sb:?}")))
    }
}

/// A section `(η, ξ)_σ` of the tractor bundle in a Weyl splitting:
/// `η` in `F`, `ξ` in `E`. Any leading slots (e.g. a one-form index pair)
/// are shared by both parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitTractor {
    pub eta: IndexedTensor,
    pub xi: IndexedTensor,
}

impl SplitTractor {
    pub fn new(eta: IndexedTensor, xi: IndexedTensor) -> Result<Self> {
        check_pair(&eta, &xi, Slot::FUp, Slot::EUp, "SplitTractor")?;
        Ok(SplitTractor { eta, xi })
    }

    pub fn zero(n: usize, nvars: usize) -> Self {
        SplitTractor {
            eta: IndexedTensor::zeros(n, nvars, &[Slot::FUp]),
            xi: IndexedTensor::zeros(n, nvars, &[Slot::EUp]),
        }
    }

    /// The constant section with standard-representation components
    /// `(ξ⁰, ξ¹, η⁰, …, η^{n−1})`.
    pub fn from_standard(n: usize, nvars: usize, comps: &[Poly]) -> Self {
        assert_eq!(comps.len(), n + 2);
        SplitTractor {
            eta: IndexedTensor::from_components(n, nvars, &[Slot::FUp], comps[2..].to_vec()).unwrap(),
            xi: IndexedTensor::from_components(n, nvars, &[Slot::EUp], comps[..2].to_vec()).unwrap(),
        }
    }

    /// Components in standard-representation order, for a plain section.
    pub fn to_standard(&self) -> Vec<Poly> {
        self.xi.components().iter().chain(self.eta.components()).cloned().collect()
    }

    pub fn slice(&self, fixed: &[usize]) -> Self {
        SplitTractor { eta: self.eta.slice_leading(fixed), xi: self.xi.slice_leading(fixed) }
    }

    pub fn is_zero(&self) -> bool {
        self.eta.is_zero() && self.xi.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        SplitTractor { eta: self.eta.add(&o.eta), xi: self.xi.add(&o.xi) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        SplitTractor { eta: self.eta.sub(&o.eta), xi: self.xi.sub(&o.xi) }
    }
}

/// A section `(φ, μ)^σ` of the cotractor bundle: `φ` in `E*`, `μ` in `F*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCotractor {
    pub phi: IndexedTensor,
    pub mu: IndexedTensor,
}

impl SplitCotractor {
    pub fn new(phi: IndexedTensor, mu: IndexedTensor) -> Result<Self> {
        check_pair(&phi, &mu, Slot::EDown, Slot::FDown, "SplitCotractor")?;
        Ok(SplitCotractor { phi, mu })
    }

    pub fn zero(n: usize, nvars: usize) -> Self {
        SplitCotractor {
            phi: IndexedTensor::zeros(n, nvars, &[Slot::EDown]),
            mu: IndexedTensor::zeros(n, nvars, &[Slot::FDown]),
        }
    }

    /// Components in dual-representation order `(φ_0, φ_1, μ_0, …)`.
    pub fn from_dual(n: usize, nvars: usize, comps: &[Poly]) -> Self {
        assert_eq!(comps.len(), n + 2);
        SplitCotractor {
            phi: IndexedTensor::from_components(n, nvars, &[Slot::EDown], comps[..2].to_vec()).unwrap(),
            mu: IndexedTensor::from_components(n, nvars, &[Slot::FDown], comps[2..].to_vec()).unwrap(),
        }
    }

    pub fn to_dual(&self) -> Vec<Poly> {
        self.phi.components().iter().chain(self.mu.components()).cloned().collect()
    }

    pub fn slice(&self, fixed: &[usize]) -> Self {
        SplitCotractor { phi: self.phi.slice_leading(fixed), mu: self.mu.slice_leading(fixed) }
    }

    pub fn is_zero(&self) -> bool {
        self.phi.is_zero() && self.mu.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        SplitCotractor { phi: self.phi.add(&o.phi), mu: self.mu.add(&o.mu) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        SplitCotractor { phi: self.phi.sub(&o.phi), mu: self.mu.sub(&o.mu) }
    }
}

/// A section of the adjoint tractor bundle, kept as its block matrix
/// `[[a, Z], [X, b]]`: `X` the vector part (F↑, E↓), `(a, b)` the `g₀`
/// part, `Z` the covector part (E↑, F↓).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointSection {
    matrix: PMat,
}

impl AdjointSection {
    pub fn from_matrix(matrix: PMat) -> Result<Self> {
        if matrix.rows() != matrix.cols() || matrix.rows() < 5 {
            return Err(Error::Representation("adjoint section must be (n+2)x(n+2)".into()));
        }
        if !matrix.trace().is_zero() {
            return Err(Error::Representation("adjoint section: g₀ trace-sum nonzero".into()));
        }
        Ok(AdjointSection { matrix })
    }

    pub fn from_parts(
        vector: &IndexedTensor,
        gl_e: &IndexedTensor,
        gl_f: &IndexedTensor,
        covector: &IndexedTensor,
    ) -> Result<Self> {
        let n = vector.n();
        let nv = vector.nvars();
        let expect = [
            (vector, [Slot::FUp, Slot::EDown]),
            (gl_e, [Slot::EUp, Slot::EDown]),
            (gl_f, [Slot::FUp, Slot::FDown]),
            (covector, [Slot::EUp, Slot::FDown]),
        ];
        for (t, s) in &expect {
            if t.slots() != s {
                return Err(Error::Slot(format!("adjoint part expects {s:?}, got {:?}", t.slots())));
            }
        }
        let mut m = PMat::zeros(n + 2, n + 2, nv);
        for i in 0..n + 2 {
            for j in 0..n + 2 {
                let v = match (i < 2, j < 2) {
                    (true, true) => gl_e.get(&[i, j]),
                    (true, false) => covector.get(&[i, j - 2]),
                    (false, true) => vector.get(&[i - 2, j]),
                    (false, false) => gl_f.get(&[i - 2, j - 2]),
                };
                m.set(i, j, v.clone());
            }
        }
        AdjointSection::from_matrix(m)
    }

    pub fn matrix(&self) -> &PMat {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.rows() - 2
    }

    fn part(&self, slots: [Slot; 2], r0: usize, c0: usize) -> IndexedTensor {
        let n = self.n();
        IndexedTensor::from_fn(n, self.matrix.nvars(), &slots, |i| self.matrix.get(r0 + i[0], c0 + i[1]).clone())
    }

    pub fn vector_part(&self) -> IndexedTensor {
        self.part([Slot::FUp, Slot::EDown], 2, 0)
    }

    pub fn gl_e(&self) -> IndexedTensor {
        self.part([Slot::EUp, Slot::EDown], 0, 0)
    }

    pub fn gl_f(&self) -> IndexedTensor {
        self.part([Slot::FUp, Slot::FDown], 2, 2)
    }

    pub fn covector_part(&self) -> IndexedTensor {
        self.part([Slot::EUp, Slot::FDown], 0, 2)
    }
}

/// A change of Weyl structure `Υ^A_{A'}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpsilonForm(IndexedTensor);

impl UpsilonForm {
    pub fn new(t: IndexedTensor) -> Result<Self> {
        if t.slots() != [Slot::EUp, Slot::FDown] {
            return Err(Error::Slot(format!("Upsilon needs slots (Eu, Fd), got {:?}", t.slots())));
        }
        Ok(UpsilonForm(t))
    }

    pub fn zero(n: usize, nvars: usize) -> Self {
        UpsilonForm(IndexedTensor::zeros(n, nvars, &[Slot::EUp, Slot::FDown]))
    }

    pub fn tensor(&self) -> &IndexedTensor {
        &self.0
    }

    /// `Υ(η)^A = Υ^A_{I'} η^{I'}`, contracting the last slot of `η`.
    pub fn apply_f(&self, eta: &IndexedTensor) -> IndexedTensor {
        let r = eta.rank();
        eta.outer(&self.0).contract(r - 1, r + 1).expect("η ends in an F↑ slot")
    }

    /// `Υ(φ)_{A'} = Υ^I_{A'} φ_I`, contracting the last slot of `φ`.
    pub fn apply_e_star(&self, phi: &IndexedTensor) -> IndexedTensor {
        let r = phi.rank();
        phi.outer(&self.0).contract(r - 1, r).expect("φ ends in an E↓ slot")
    }
}
