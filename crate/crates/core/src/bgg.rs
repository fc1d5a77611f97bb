//! Splitting operators, first BGG operators, prolongation connections and a
//! polynomial-ansatz solver for `D s = 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{dense_to_sparse, rank, Eliminator, SparseRow};
use crate::rational::{q, q_frac, Q};
use crate::tensor::decompose::{sym2_decompose, trace_free_decompose, TraceShape};
use crate::tensor::serial::tensor_to_json;
use crate::tensor::{IndexedTensor, Monomial, Poly, Slot};
use crate::weyl::{
    contractions, cotractor_derivative, covariant_derivative, curvature_blocks, tractor_derivative, ChartWeylData,
    NormalityDefects, PMat, SplitCotractor, SplitTractor,
};

/// Which first BGG operator: on sections `η` of `F` (tractor side) or
/// `φ` of `E*` (cotractor side).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bundle {
    Tractor,
    Cotractor,
}

impl Bundle {
    pub fn slot(self) -> Slot {
        match self {
            Bundle::Tractor => Slot::FUp,
            Bundle::Cotractor => Slot::EDown,
        }
    }

    pub fn of_section(s: &IndexedTensor) -> Result<Bundle> {
        match s.slots() {
            [Slot::FUp] => Ok(Bundle::Tractor),
            [Slot::EDown] => Ok(Bundle::Cotractor),
            other => Err(Error::Slot(format!("BGG sections have slot [Fu] or [Ed], got {other:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Bundle::Tractor => "tractor",
            Bundle::Cotractor => "cotractor",
        }
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Bundle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tractor" => Ok(Bundle::Tractor),
            "cotractor" => Ok(Bundle::Cotractor),
            _ => Err(Error::parse("bundle", format!("expected tractor or cotractor, got {s:?}"))),
        }
    }
}

/// A tractor or cotractor in a Weyl splitting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Split {
    Tractor(SplitTractor),
    Cotractor(SplitCotractor),
}

impl Split {
    pub fn is_zero(&self) -> bool {
        match self {
            Split::Tractor(t) => t.is_zero(),
            Split::Cotractor(c) => c.is_zero(),
        }
    }

    /// Values as a standard (resp. dual) representation vector.
    pub fn to_vector(&self) -> Vec<Poly> {
        match self {
            Split::Tractor(t) => t.to_standard(),
            Split::Cotractor(c) => c.to_dual(),
        }
    }
}

fn require(s: &IndexedTensor, bundle: Bundle) -> Result<()> {
    if s.slots() != [bundle.slot()] {
        return Err(Error::Slot(format!("{bundle} section expects slot [{:?}], got {:?}", bundle.slot(), s.slots())));
    }
    Ok(())
}

/// `L η = (η, −(1/n) ∇^A_{I'} η^{I'})_σ`
pub fn split_tractor(data: &ChartWeylData, eta: &IndexedTensor) -> Result<SplitTractor> {
    require(eta, Bundle::Tractor)?;
    let tr = covariant_derivative(data, eta)?.contract(1, 2)?;
    SplitTractor::new(eta.clone(), tr.scale(&q_frac(-1, data.n() as i64)))
}

/// `L φ = (φ, (1/2) ∇^I_{A'} φ_I)^σ`
pub fn split_cotractor(data: &ChartWeylData, phi: &IndexedTensor) -> Result<SplitCotractor> {
    require(phi, Bundle::Cotractor)?;
    let tr = covariant_derivative(data, phi)?.contract(0, 2)?;
    SplitCotractor::new(phi.clone(), tr.scale(&q_frac(1, 2)))
}

pub fn split(data: &ChartWeylData, s: &IndexedTensor) -> Result<Split> {
    Ok(match Bundle::of_section(s)? {
        Bundle::Tractor => Split::Tractor(split_tractor(data, s)?),
        Bundle::Cotractor => Split::Cotractor(split_cotractor(data, s)?),
    })
}

fn shape(bundle: Bundle) -> TraceShape {
    match bundle {
        Bundle::Tractor => TraceShape::TStarMF,
        Bundle::Cotractor => TraceShape::TStarMEStar,
    }
}

/// `D s = (∇s)_o`, the trace-free part of the covariant derivative.
pub fn bgg_operator(data: &ChartWeylData, s: &IndexedTensor) -> Result<IndexedTensor> {
    let bundle = Bundle::of_section(s)?;
    Ok(trace_free_decompose(&covariant_derivative(data, s)?, shape(bundle))?.trace_free)
}

/// The `(0,2)`-tensors `Φ` and `Ψ` correcting the tractor and cotractor
/// connections.
#[derive(Clone, Debug, PartialEq)]
pub struct ProlongationCorrection {
    pub phi: IndexedTensor,
    pub psi: IndexedTensor,
}

/// `Φ = −1/((n−1)n) S^((  − 1/((n+1)(n+4)) S^[[` and
/// `Ψ = −1/n S^((  − 1/(3(n+4)) S^[[` for `S = tr(i_τ τ)`.
pub fn correction_from_itau_tau(s: &IndexedTensor) -> Result<ProlongationCorrection> {
    let n = s.n() as i64;
    let parts = sym2_decompose(s)?;
    let (sym, alt) = (&parts.symmetric, &parts.alternating);
    Ok(ProlongationCorrection {
        phi: sym.scale(&q_frac(-1, (n - 1) * n)).add(&alt.scale(&q_frac(-1, (n + 1) * (n + 4)))),
        psi: sym.scale(&q_frac(-1, n)).add(&alt.scale(&q_frac(-1, 3 * (n + 4)))),
    })
}

fn require_normal(data: &ChartWeylData, op: &str) -> Result<IndexedTensor> {
    let blocks = curvature_blocks(data)?;
    if !NormalityDefects::of(&blocks)?.is_normal() {
        return Err(Error::Precondition(format!("{op} needs normal data (run normalize_rho)")));
    }
    Ok(contractions(&blocks)?.tr_itau_tau)
}

pub fn prolongation_correction(data: &ChartWeylData) -> Result<ProlongationCorrection> {
    correction_from_itau_tau(&require_normal(data, "prolongation_correction")?)
}

/// `Φ^A_{A'}{}^B_{I'} η^{I'}`
pub fn phi_of(phi: &IndexedTensor, eta: &IndexedTensor) -> IndexedTensor {
    phi.outer(eta).contract(3, 4).expect("Φ ⊗ η slots")
}

/// `Ψ^A_{A'}{}^I_{B'} φ_I`
pub fn psi_of(psi: &IndexedTensor, phi: &IndexedTensor) -> IndexedTensor {
    psi.outer(phi).contract(2, 4).expect("Ψ ⊗ φ slots")
}

/// `∇̂^𝒯 (η, ξ) = ∇^𝒯 (η, ξ) − (0, Φ(η))`
pub fn prolonged_tractor_derivative(
    data: &ChartWeylData,
    corr: &ProlongationCorrection,
    s: &SplitTractor,
) -> Result<SplitTractor> {
    let d = tractor_derivative(data, s)?;
    SplitTractor::new(d.eta, d.xi.sub(&phi_of(&corr.phi, &s.eta)))
}

/// `∇̃^{𝒯*} (φ, μ) = ∇^{𝒯*} (φ, μ) − (0, Ψ(φ))`
pub fn prolonged_cotractor_derivative(
    data: &ChartWeylData,
    corr: &ProlongationCorrection,
    s: &SplitCotractor,
) -> Result<SplitCotractor> {
    let d = cotractor_derivative(data, s)?;
    SplitCotractor::new(d.phi, d.mu.sub(&psi_of(&corr.psi, &s.phi)))
}

/// `Z_p ∈ g₁` with `Z_p[B][2+B'] = form^A_{A'}{}^B_{B'}`, `p = (A, A')`.
fn g1_matrices(form: &IndexedTensor) -> Vec<PMat> {
    let n = form.n();
    let nv = form.nvars();
    (0..2 * n)
        .map(|p| {
            PMat::from_fn(n + 2, n + 2, nv, |i, j| {
                if i < 2 && j >= 2 {
                    form.get(&[p / n, p % n, i, j - 2]).clone()
                } else {
                    Poly::zero(nv)
                }
            })
        })
        .collect()
}

/// The one-form `p ↦ Z_p • s` for a `g₁`-valued one-form acting on a plain
/// tractor through matrix multiplication in the standard representation.
pub fn bullet_tractor(form: &IndexedTensor, s: &SplitTractor) -> Result<SplitTractor> {
    let n = form.n();
    let nv = form.nvars();
    let v = s.to_standard();
    let mut eta = IndexedTensor::zeros(n, nv, &[Slot::EUp, Slot::FDown, Slot::FUp]);
    let mut xi = IndexedTensor::zeros(n, nv, &[Slot::EUp, Slot::FDown, Slot::EUp]);
    for (p, z) in g1_matrices(form).iter().enumerate() {
        let w = z.apply(&v);
        for b in 0..2 {
            xi.set(&[p / n, p % n, b], w[b].clone());
        }
        for bp in 0..n {
            eta.set(&[p / n, p % n, bp], w[2 + bp].clone());
        }
    }
    SplitTractor::new(eta, xi)
}

/// The dual-representation action `v ↦ −Zᵀ v` of the same one-form.
pub fn bullet_cotractor(form: &IndexedTensor, s: &SplitCotractor) -> Result<SplitCotractor> {
    let n = form.n();
    let nv = form.nvars();
    let v = s.to_dual();
    let mut phi = IndexedTensor::zeros(n, nv, &[Slot::EUp, Slot::FDown, Slot::EDown]);
    let mut mu = IndexedTensor::zeros(n, nv, &[Slot::EUp, Slot::FDown, Slot::FDown]);
    for (p, z) in g1_matrices(form).iter().enumerate() {
        let w = z.transpose().apply(&v);
        for b in 0..2 {
            phi.set(&[p / n, p % n, b], -&w[b]);
        }
        for bp in 0..n {
            mu.set(&[p / n, p % n, bp], -&w[2 + bp]);
        }
    }
    SplitCotractor::new(phi, mu)
}

/// Outcome of the normal-solution test for one section.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalSolution {
    /// `D s = 0`
    pub solution: bool,
    /// `D s = 0` and `tr(i_τ τ)` contracted with `s` vanishes
    pub normal: bool,
    /// `∇^𝒯 (L s) = 0`, computed directly
    pub parallel: bool,
    /// `tr(i_τ τ)^A_{A'}{}^B_{B'} η^{B'}`, resp. `…{}^B_{B'} φ_B`
    pub contraction: IndexedTensor,
    /// `∇^𝒯 (L s)` as a standard (resp. dual) vector per frame direction
    pub derivative: Vec<Vec<Poly>>,
}

impl NormalSolution {
    /// The characterisation `normal ⇔ parallel` for solutions.
    pub fn consistent(&self) -> bool {
        !self.solution || self.normal == self.parallel
    }
}

fn one_form_vectors(n: usize, parts: [&IndexedTensor; 2]) -> Vec<Vec<Poly>> {
    (0..2 * n)
        .map(|p| {
            let (a, ap) = (p / n, p % n);
            parts.iter().flat_map(|t| t.slice_leading(&[a, ap]).into_components()).collect()
        })
        .collect()
}

/// `∇^𝒯 (L s)` per frame direction.
pub fn derivative_of_split(data: &ChartWeylData, s: &Split) -> Result<Vec<Vec<Poly>>> {
    let n = data.n();
    Ok(match s {
        Split::Tractor(t) => {
            let d = tractor_derivative(data, t)?;
            one_form_vectors(n, [&d.xi, &d.eta])
        }
        Split::Cotractor(c) => {
            let d = cotractor_derivative(data, c)?;
            one_form_vectors(n, [&d.phi, &d.mu])
        }
    })
}

pub fn is_normal_solution(data: &ChartWeylData, s: &IndexedTensor) -> Result<NormalSolution> {
    let itt = require_normal(data, "is_normal_solution")?;
    let solution = bgg_operator(data, s)?.is_zero();
    let contraction = match Bundle::of_section(s)? {
        Bundle::Tractor => itt.outer(s).contract(3, 4)?,
        Bundle::Cotractor => itt.outer(s).contract(2, 4)?,
    };
    let derivative = derivative_of_split(data, &split(data, s)?)?;
    let parallel = derivative.iter().flatten().all(Poly::is_zero);
    Ok(NormalSolution { solution, normal: solution && contraction.is_zero(), parallel, contraction, derivative })
}

/// A basis of the polynomial solutions of `D s = 0` up to a degree bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BggSolutionBasis {
    pub bundle: Bundle,
    pub degree: u32,
    pub basis: Vec<IndexedTensor>,
}

impl BggSolutionBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "bundle": self.bundle,
            "degree": self.degree,
            "dimension": self.dimension(),
            "basis": self.basis.iter().map(tensor_to_json).collect::<Vec<_>>(),
        })
    }
}

fn unit_section(n: usize, nv: usize, bundle: Bundle, comp: usize, m: Monomial) -> IndexedTensor {
    IndexedTensor::from_fn(
        n,
        nv,
        &[bundle.slot()],
        |i| {
            if i[0] == comp {
                Poly::term(nv, m, q(1))
            } else {
                Poly::zero(nv)
            }
        },
    )
}

/// Kernel of `D` on sections with polynomial components of total degree
/// `<= degree`. Unknowns are ordered monomial-major (degree-lexicographic),
/// component-minor; the basis is the reduced-echelon kernel basis.
pub fn solve_bgg_polynomial(data: &ChartWeylData, bundle: Bundle, degree: u32) -> Result<BggSolutionBasis> {
    if degree > data.degree_cap() {
        return Err(Error::DegreeCap { op: "solve_bgg_polynomial".into(), degree, cap: data.degree_cap() });
    }
    let n = data.n();
    let nv = data.nvars();
    let k = bundle.slot().dim(n);
    let monos = Monomial::all_up_to(nv, degree);
    let ncols = monos.len() * k;
    let images: Vec<IndexedTensor> = (0..ncols)
        .into_par_iter()
        .map(|col| bgg_operator(data, &unit_section(n, nv, bundle, col % k, monos[col / k])))
        .collect::<Result<_>>()?;
    let mut rows: BTreeMap<(usize, Monomial), SparseRow> = BTreeMap::new();
    for (col, img) in images.iter().enumerate() {
        for (f, p) in img.components().iter().enumerate() {
            for (m, c) in p.terms() {
                rows.entry((f, *m)).or_default().insert(col, c.clone());
            }
        }
    }
    let mut e = Eliminator::new(ncols);
    for (_, r) in rows {
        e.push(r);
    }
    let basis = e
        .kernel_basis()
        .into_iter()
        .map(|v| {
            IndexedTensor::from_fn(n, nv, &[bundle.slot()], |i| {
                Poly::from_terms(
                    nv,
                    monos
                        .iter()
                        .enumerate()
                        .map(|(mi, m)| (*m, v[mi * k + i[0]].clone()))
                        .filter(|(_, c)| !c.is_zero()),
                )
            })
        })
        .collect();
    Ok(BggSolutionBasis { bundle, degree, basis })
}

/// `(s(x), ∇s(x))` flattened.
pub fn one_jet(data: &ChartWeylData, s: &IndexedTensor, point: &[Q]) -> Result<Vec<Q>> {
    let mut v = s.eval(point);
    v.extend(covariant_derivative(data, s)?.eval(point));
    Ok(v)
}

/// Whether the 1-jet map at `point` is injective on the span of `basis`.
pub fn one_jet_injective(data: &ChartWeylData, basis: &[IndexedTensor], point: &[Q]) -> Result<bool> {
    let jets: Vec<Vec<Q>> = basis.iter().map(|s| one_jet(data, s, point)).collect::<Result<_>>()?;
    Ok(rank(&jets) == basis.len())
}

/// Whether the sections are linearly independent over Q.
pub fn independent(basis: &[IndexedTensor]) -> bool {
    let mut monos = std::collections::BTreeSet::new();
    for s in basis {
        monos.extend(s.monomials());
    }
    let vecs: Vec<Vec<Q>> = basis.iter().map(|s| monos.iter().flat_map(|m| s.coefficients(m)).collect()).collect();
    let mut e = Eliminator::new(vecs.first().map_or(0, Vec::len));
    vecs.iter().all(|v| e.push(dense_to_sparse(v)))
}
