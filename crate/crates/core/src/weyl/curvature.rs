use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::Solver;
use crate::rational::Q;
use crate::report::VerificationReport;
use crate::tensor::decompose::{alt_alt, mixed_parts, sym_sym};
use crate::tensor::serial::tensor_to_json;
use crate::tensor::{IndexedTensor, Poly, TWO_FORM_SLOTS};

use super::blocks::CurvatureBlocks;
use super::connection::{adjoint_derivative, frame_omega, tractor_derivative};
use super::data::ChartWeylData;
use super::pmat::PMat;
use super::sections::{AdjointSection, SplitTractor};
use super::torsion::torsion;

/// `κ(e_p, e_q)` as matrices, from second tractor derivatives of the
/// constant basis sections:
/// `R(e_p, e_q)s = ∇_p∇_q s − ∇_q∇_p s − ∇_{[e_p, e_q]} s`.
pub fn curvature_via_sections(data: &ChartWeylData) -> Result<Vec<Vec<PMat>>> {
    let n = data.n();
    let nv = data.nvars();
    let m = 2 * n;
    let frame = data.frame();
    let columns: Vec<Vec<Vec<Vec<Poly>>>> = (0..n + 2)
        .into_par_iter()
        .map(|j| -> Result<Vec<Vec<Vec<Poly>>>> {
            let mut comps = vec![Poly::zero(nv); n + 2];
            comps[j] = Poly::one(nv);
            let s = SplitTractor::from_standard(n, nv, &comps);
            let d1 = tractor_derivative(data, &s)?;
            let first: Vec<SplitTractor> = (0..m).map(|q| d1.slice(&[q / n, q % n])).collect();
            let second: Vec<SplitTractor> = first.iter().map(|f| tractor_derivative(data, f)).collect::<Result<_>>()?;
            let mut out = vec![vec![vec![Poly::zero(nv); n + 2]; m]; m];
            for p in 0..m {
                for q in 0..m {
                    if p == q {
                        continue;
                    }
                    let mut v = second[q].slice(&[p / n, p % n]).sub(&second[p].slice(&[q / n, q % n]));
                    for (r, f) in first.iter().enumerate() {
                        let c = &frame.brackets[p][q][r];
                        if c.is_zero() {
                            continue;
                        }
                        v = v.sub(&SplitTractor { eta: f.eta.mul_poly(c), xi: f.xi.mul_poly(c) });
                    }
                    out[p][q] = v.to_standard();
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut kappa = vec![vec![PMat::zeros(n + 2, n + 2, nv); m]; m];
    for (j, col) in columns.iter().enumerate() {
        for p in 0..m {
            for q in 0..m {
                for (i, v) in col[p][q].iter().enumerate() {
                    kappa[p][q].set(i, j, v.clone());
                }
            }
        }
    }
    Ok(kappa)
}

/// The same curvature from the structure equation
/// `κ_pq = e_p(ω_q) − e_q(ω_p) + [ω_p, ω_q] − ω([e_p, e_q])`.
pub fn curvature_matrices(data: &ChartWeylData) -> Vec<Vec<PMat>> {
    let n = data.n();
    let m = 2 * n;
    let omega = frame_omega(data);
    let frame = data.frame();
    (0..m)
        .map(|p| {
            (0..m)
                .map(|q| {
                    let mut k = data
                        .frame_derivative_mat(p, &omega[q])
                        .sub(&data.frame_derivative_mat(q, &omega[p]))
                        .add(&omega[p].commutator(&omega[q]));
                    for (r, w) in omega.iter().enumerate() {
                        let c = &frame.brackets[p][q][r];
                        if !c.is_zero() {
                            k = k.sub(&w.mul_poly(c));
                        }
                    }
                    k
                })
                .collect()
        })
        .collect()
}

/// Curvature of the tractor connection split into `(τ, W, W', Y)`; the
/// `τ` block is checked against the directly computed torsion.
pub fn curvature_blocks(data: &ChartWeylData) -> Result<CurvatureBlocks> {
    let kappa = curvature_via_sections(data)?;
    let blocks = CurvatureBlocks::from_matrices(data.n(), data.nvars(), &kappa);
    for (_, t) in blocks.blocks() {
        t.check_degree(data.degree_cap(), "curvature_blocks")?;
    }
    let tor = torsion(data)?;
    if blocks.tau != tor.tau {
        return Err(Error::Consistency("τ block of the tractor curvature differs from the torsion".into()));
    }
    Ok(blocks)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Contractions {
    /// `W^A_{A'}{}^I_{B'}{}^B_I`
    pub tr_w: IndexedTensor,
    /// `W'^A_{A'}{}^B_{I'}{}^{I'}_{B'}`
    pub tr_wp: IndexedTensor,
    /// `τ^I_{I'}{}^A_{A'}{}^{J'}_J τ^J_{J'}{}^B_{B'}{}^{I'}_I`
    pub tr_itau_tau: IndexedTensor,
}

pub fn itau_tau(tau: &IndexedTensor) -> IndexedTensor {
    let n = tau.n();
    let nv = tau.nvars();
    IndexedTensor::from_fn(n, nv, &TWO_FORM_SLOTS, |ix| {
        let (a, ap, b, bp) = (ix[0], ix[1], ix[2], ix[3]);
        let mut acc = Poly::zero(nv);
        for i in 0..2 {
            for ip in 0..n {
                for j in 0..2 {
                    for jp in 0..n {
                        let l = tau.get(&[i, ip, a, ap, jp, j]);
                        if l.is_zero() {
                            continue;
                        }
                        let r = tau.get(&[j, jp, b, bp, ip, i]);
                        if !r.is_zero() {
                            acc += &(l * r);
                        }
                    }
                }
            }
        }
        acc
    })
}

pub fn contractions(blocks: &CurvatureBlocks) -> Result<Contractions> {
    blocks.check_slots()?;
    Ok(Contractions {
        tr_w: blocks.w.contract(2, 5)?.permute(&[0, 1, 3, 2]),
        tr_wp: blocks.wp.contract(3, 4)?,
        tr_itau_tau: itau_tau(&blocks.tau),
    })
}

/// The block conditions of `∂*κ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalityDefects {
    /// `τ^A_{A'}{}^B_{I'}{}^{I'}_C`
    pub tau_f_trace: IndexedTensor,
    /// `τ^A_{A'}{}^I_{C'}{}^{B'}_I`
    pub tau_e_trace: IndexedTensor,
    /// `tr W' − tr W`
    pub trace_difference: IndexedTensor,
}

impl NormalityDefects {
    pub fn of(blocks: &CurvatureBlocks) -> Result<Self> {
        let c = contractions(blocks)?;
        Ok(NormalityDefects {
            tau_f_trace: blocks.tau.contract(3, 4)?,
            tau_e_trace: blocks.tau.contract(2, 5)?,
            trace_difference: c.tr_wp.sub(&c.tr_w),
        })
    }

    pub fn is_normal(&self) -> bool {
        self.tau_f_trace.is_zero() && self.tau_e_trace.is_zero() && self.trace_difference.is_zero()
    }
}

fn zero_check(r: &mut VerificationReport, id: &str, t: &IndexedTensor, what: &str) {
    if t.is_zero() {
        r.pass(id);
    } else {
        r.fail_with_residual(id, what, tensor_to_json(t));
    }
}

pub fn check_normality(data: &ChartWeylData) -> Result<VerificationReport> {
    let blocks = curvature_blocks(data)?;
    let d = NormalityDefects::of(&blocks)?;
    let mut r = VerificationReport::new();
    zero_check(&mut r, "normality.tau_f_trace", &d.tau_f_trace, "F-trace of τ nonzero");
    zero_check(&mut r, "normality.tau_e_trace", &d.tau_e_trace, "E-trace of τ nonzero");
    zero_check(&mut r, "normality.trace_difference", &d.trace_difference, "tr W' − tr W nonzero");
    if d.is_normal() {
        let c = contractions(&blocks)?;
        zero_check(&mut r, "normality.trw_equals_trwp", &c.tr_w.sub(&c.tr_wp), "tr W ≠ tr W'");
    } else {
        r.skipped("normality.trw_equals_trwp", "data not normal");
    }
    Ok(r)
}

fn unit_rho(n: usize, k: usize) -> IndexedTensor {
    let nv = 2 * n;
    let mut t = IndexedTensor::zeros(n, nv, &TWO_FORM_SLOTS);
    t.components_mut()[k] = Poly::one(nv);
    t
}

/// The constant linear map `P ↦ tr W' − tr W`, extracted from curvature
/// blocks of the flat chart at a basis of Rho values.
fn rho_map(n: usize) -> Result<Arc<Solver>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Solver>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("rho map cache").get(&n) {
        return Ok(s.clone());
    }
    let flat = ChartWeylData::flat(n)?;
    let dim = 4 * n * n;
    let cols: Vec<Vec<Q>> = (0..dim)
        .into_par_iter()
        .map(|k| -> Result<Vec<Q>> {
            let d = flat.with_rho(unit_rho(n, k))?;
            let def = NormalityDefects::of(&curvature_blocks(&d)?)?;
            Ok(def.trace_difference.constant_values())
        })
        .collect::<Result<_>>()?;
    let m: Vec<Vec<Q>> = (0..dim).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let solver = Solver::new(&m);
    if solver.rank() != dim {
        return Err(Error::Singular(format!("normalize_rho (rank {} of {dim})", solver.rank())));
    }
    let s = Arc::new(solver);
    cache.lock().expect("rho map cache").insert(n, s.clone());
    Ok(s)
}

/// Replaces `P` by the unique Rho making `tr W' − tr W` vanish.
pub fn normalize_rho(data: &ChartWeylData) -> Result<ChartWeylData> {
    let n = data.n();
    let nv = data.nvars();
    if !torsion(data)?.harmonic {
        return Err(Error::Precondition("normalize_rho needs harmonic torsion (run weylize first)".into()));
    }
    let base = data.with_rho(IndexedTensor::zeros(n, nv, &TWO_FORM_SLOTS))?;
    let c = NormalityDefects::of(&curvature_blocks(&base)?)?.trace_difference;
    let solver = rho_map(n)?;
    let mut rho = IndexedTensor::zeros(n, nv, &TWO_FORM_SLOTS);
    for mono in c.monomials() {
        let rhs: Vec<Q> = c.coefficients(&mono).into_iter().map(|v| -v).collect();
        let x = solver.solve(&rhs).ok_or_else(|| Error::Singular("normalize_rho".into()))?;
        for (k, v) in x.into_iter().enumerate() {
            rho.components_mut()[k].add_term(mono, v);
        }
    }
    let out = data.with_rho(rho)?;
    let report = check_normality(&out)?;
    if !report.all_pass() {
        return Err(Error::Consistency("normalize_rho result is not normal".into()));
    }
    Ok(out)
}

fn first_nonzero(ms: &[PMat]) -> Option<String> {
    ms.iter().flat_map(|m| m.entries()).find(|e| !e.is_zero()).map(|e| e.to_string())
}

/// Bianchi identity of the tractor curvature, using `κ` computed from
/// `kappa_data` and `∇^𝒜` from `conn`. With equal arguments this is the
/// identity itself.
pub fn verify_bianchi_with(kappa_data: &ChartWeylData, conn: &ChartWeylData) -> Result<VerificationReport> {
    let n = kappa_data.n();
    let m = 2 * n;
    let kappa = CurvatureBlocks::from_matrices(n, kappa_data.nvars(), &curvature_via_sections(kappa_data)?);
    let kmat: Vec<Vec<PMat>> = (0..m).map(|p| (0..m).map(|q| kappa.matrix(p, q)).collect()).collect();
    let mut r = VerificationReport::new();

    // frame triples, with bracket terms
    let frame = conn.frame();
    let mut derivs: HashMap<(usize, usize), Vec<PMat>> = HashMap::new();
    for q in 0..m {
        for s in q + 1..m {
            let sec = AdjointSection::from_matrix(kmat[q][s].clone())?;
            derivs.insert((q, s), adjoint_derivative(conn, &sec)?);
        }
    }
    let d = |p: usize, q: usize, s: usize| -> PMat {
        if q < s {
            derivs[&(q, s)][p].clone()
        } else {
            derivs[&(s, q)][p].scale(&-Q::one())
        }
    };
    let mut frame_res = Vec::new();
    for p in 0..m {
        for q in p + 1..m {
            for s in q + 1..m {
                let mut acc = PMat::zeros(n + 2, n + 2, kappa_data.nvars());
                for (a, b, c) in [(p, q, s), (q, s, p), (s, p, q)] {
                    acc = acc.add(&d(a, b, c));
                    for (t, row) in kmat.iter().enumerate() {
                        let coef = &frame.brackets[a][b][t];
                        if !coef.is_zero() {
                            acc = acc.sub(&row[c].mul_poly(coef));
                        }
                    }
                }
                frame_res.push(acc);
            }
        }
    }
    match first_nonzero(&frame_res) {
        None => r.pass("bianchi.frame"),
        Some(e) => r.fail("bianchi.frame", format!("nonzero cyclic sum, e.g. entry {e}")),
    }

    // coordinate triples: brackets vanish
    let omega = conn.to_coords(&frame_omega(conn));
    let half: Vec<Vec<PMat>> =
        (0..m).map(|q| kappa_data.to_coords(&(0..m).map(|p| kmat[p][q].clone()).collect::<Vec<_>>())).collect();
    let kc: Vec<Vec<PMat>> =
        (0..m).map(|mu| kappa_data.to_coords(&(0..m).map(|q| half[q][mu].clone()).collect::<Vec<_>>())).collect();
    let mut coord_res = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                let mut acc = PMat::zeros(n + 2, n + 2, kappa_data.nvars());
                for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                    acc = acc.add(&kc[y][z].derivative(x)).add(&omega[x].commutator(&kc[y][z]));
                }
                coord_res.push(acc);
            }
        }
    }
    match first_nonzero(&coord_res) {
        None => r.pass("bianchi.coordinate"),
        Some(e) => r.fail("bianchi.coordinate", format!("nonzero cyclic sum, e.g. entry {e}")),
    }
    Ok(r)
}

pub fn verify_bianchi(data: &ChartWeylData) -> Result<VerificationReport> {
    verify_bianchi_with(data, data)
}

/// The relations between `tr W`, `tr W'` and `tr(i_τ τ)` for normal data.
pub fn verify_weyl_tensor_relations(data: &ChartWeylData) -> Result<VerificationReport> {
    let n = data.n() as i64;
    let ids =
        ["weyl_tensor.trw_equals_trwp", "weyl_tensor.sym_ratio", "weyl_tensor.alt_ratio", "weyl_tensor.mixed_vanish"];
    let mut r = VerificationReport::new();
    let blocks = curvature_blocks(data)?;
    if !NormalityDefects::of(&blocks)?.is_normal() {
        for id in ids {
            r.skipped(id, "precondition violated: data not normal");
        }
        return Ok(r);
    }
    let c = contractions(&blocks)?;
    zero_check(&mut r, ids[0], &c.tr_w.sub(&c.tr_wp), "tr W ≠ tr W'");
    let t = &c.tr_itau_tau;
    let w = &c.tr_w;
    zero_check(
        &mut r,
        ids[1],
        &sym_sym(t)?.sub(&sym_sym(w)?.scale(&Q::from_integer(n.into()))),
        "tr(iττ)^((  ≠ n tr(W)^((",
    );
    zero_check(
        &mut r,
        ids[2],
        &alt_alt(t)?.sub(&alt_alt(w)?.scale(&Q::from_integer((n + 4).into()))),
        "tr(iττ)^[[  ≠ (n+4) tr(W)^[[",
    );
    let (mt, mw) = (mixed_parts(t)?, mixed_parts(w)?);
    let all = [mt.sym_alt, mt.alt_sym, mw.sym_alt, mw.alt_sym];
    match all.iter().find(|x| !x.is_zero()) {
        None => r.pass(ids[3]),
        Some(x) => r.fail_with_residual(ids[3], "mixed projection nonzero", tensor_to_json(x)),
    }
    Ok(r)
}
