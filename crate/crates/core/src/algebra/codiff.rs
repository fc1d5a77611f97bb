use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;

use super::graded::z_matrix;
use super::rep::{act, Rep, RepVector};
use crate::error::{Error, Result};
use crate::rational::{q, q_frac, random_q, Q};
use crate::report::VerificationReport;
use crate::tensor::{IndexedTensor, Monomial, Poly};
use crate::weyl::{CurvatureBlocks, PMat};

/// An element of `Λ^k g₁ ⊗ V`, keyed by strictly increasing lists of `g₁`
/// basis indices `p` (the `Z^p`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    n: usize,
    k: usize,
    rep: Rep,
    terms: BTreeMap<Vec<usize>, RepVector>,
}

impl Cochain {
    pub fn zero(n: usize, k: usize, rep: Rep) -> Self {
        Cochain { n, k, rep, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn rep(&self) -> Rep {
        self.rep
    }

    /// Adds `Z^{i₀} ∧ … ∧ Z^{i_{k−1}} ⊗ v`, reordering the wedge factors.
    pub fn add_term(&mut self, indices: &[usize], v: &RepVector) -> Result<()> {
        if indices.len() != self.k || v.rep() != self.rep || v.n() != self.n {
            return Err(Error::Representation(format!(
                "term of degree {} in {:?} added to a degree {} {:?} cochain",
                indices.len(),
                v.rep(),
                self.k,
                self.rep
            )));
        }
        if indices.iter().any(|&i| i >= 2 * self.n) {
            return Err(Error::Representation("g₁ index out of range".into()));
        }
        let mut idx = indices.to_vec();
        let mut sign = 1i64;
        for i in 0..idx.len() {
            for j in 0..idx.len() - 1 - i {
                if idx[j] > idx[j + 1] {
                    idx.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Ok(());
        }
        let v = v.scale(&q(sign));
        let entry = self.terms.entry(idx).or_insert_with(|| RepVector::zero(v.rep(), v.n()));
        *entry = entry.add(&v);
        Ok(())
    }

    pub fn get(&self, indices: &[usize]) -> RepVector {
        self.terms.get(indices).cloned().unwrap_or_else(|| RepVector::zero(self.rep, self.n))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &RepVector)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(RepVector::is_zero)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, k: usize, rep: Rep, rng: &mut R) -> Result<Self> {
        let mut c = Cochain::zero(n, k, rep);
        for idx in increasing_tuples(2 * n, k) {
            let mut comps: Vec<Q> = (0..rep.dim(n)).map(|_| random_q(rng, 9)).collect();
            if rep == Rep::Adjoint {
                let d = n + 2;
                let tr: Q = (0..d - 1).map(|i| comps[i * d + i].clone()).sum();
                comps[d * d - 1] = -tr;
            }
            c.add_term(&idx, &RepVector::new(rep, n, comps)?)?;
        }
        Ok(c)
    }
}

fn increasing_tuples(m: usize, k: usize) -> Vec<Vec<usize>> {
    match k {
        0 => vec![vec![]],
        1 => (0..m).map(|i| vec![i]).collect(),
        _ => (0..m).flat_map(|i| (i + 1..m).map(move |j| vec![i, j])).collect(),
    }
}

/// `∂*(Z₀∧…∧Z_{k−1} ⊗ v) = Σ_i (−1)^{i+1} Z₀∧…∧Ẑ_i∧…∧Z_{k−1} ⊗ (Z_i v)`.
/// `g₁` is abelian, so there is no bracket term.
pub fn codifferential(k: usize, c: &Cochain) -> Result<Cochain> {
    if k != 1 && k != 2 {
        return Err(Error::CodiffDegree(k));
    }
    if c.k != k {
        return Err(Error::Representation(format!("degree {} cochain passed as degree {k}", c.k)));
    }
    let mut out = Cochain::zero(c.n, k - 1, c.rep);
    for (idx, v) in &c.terms {
        for i in 0..k {
            let zv = act(&z_matrix(c.n, idx[i]), v)?;
            let sign = if i % 2 == 0 { q(-1) } else { q(1) };
            let rest: Vec<usize> = idx.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| *p).collect();
            out.add_term(&rest, &zv.scale(&sign))?;
        }
    }
    Ok(out)
}

/// Both evaluations of `(½)∂*κ` for a curvature given by its blocks, as
/// one `(n+2)×(n+2)` matrix per frame direction.
#[derive(Clone, Debug)]
pub struct BlockCodifferential {
    pub via_codifferential: Vec<PMat>,
    pub via_blocks: Vec<PMat>,
}

const BLOCK_NAMES: [&str; 4] = ["top_left", "top_right", "bottom_left", "bottom_right"];

fn block_of(m: &PMat, which: usize) -> PMat {
    let n = m.rows() - 2;
    match which {
        0 => m.block(0, 0, 2, 2),
        1 => m.block(0, 2, 2, n),
        2 => m.block(2, 0, n, 2),
        _ => m.block(2, 2, n, n),
    }
}

impl BlockCodifferential {
    pub fn paths_agree(&self) -> bool {
        self.via_codifferential == self.via_blocks
    }

    /// Names of the nonzero blocks of `(½)∂*κ`.
    pub fn offending_blocks(&self) -> Vec<&'static str> {
        (0..4).filter(|&b| self.via_blocks.iter().any(|m| !block_of(m, b).is_zero())).map(|b| BLOCK_NAMES[b]).collect()
    }

    pub fn is_normal(&self) -> bool {
        self.offending_blocks().is_empty()
    }

    pub fn report(&self) -> VerificationReport {
        let mut r = VerificationReport::new();
        let bad: Vec<usize> =
            (0..self.via_blocks.len()).filter(|&p| self.via_blocks[p] != self.via_codifferential[p]).collect();
        r.check("codiff.paths_agree", bad.is_empty(), || format!("paths differ at frame directions {bad:?}"));
        for (b, name) in BLOCK_NAMES.iter().enumerate() {
            let ok = self.via_blocks.iter().all(|m| block_of(m, b).is_zero());
            r.check(format!("codiff.{name}_zero"), ok, || format!("{name} block of ½∂*κ is nonzero"));
        }
        r
    }
}

fn check_kappa_slots(kappa: &CurvatureBlocks) -> Result<()> {
    kappa.check_slots()?;
    let n = kappa.n();
    for (name, t) in kappa.blocks() {
        if t.n() != n || t.nvars() != kappa.nvars() {
            return Err(Error::Slot(format!("block {name} has inconsistent n or nvars")));
        }
    }
    Ok(())
}

/// `(½)∂*κ` through [`codifferential`]: the 2-form is
/// `Σ_{p<q} 2κ_pq Z^p∧Z^q`, evaluated monomial by monomial.
fn via_codifferential(kappa: &CurvatureBlocks) -> Result<Vec<PMat>> {
    let n = kappa.n();
    let nv = kappa.nvars();
    let m = 2 * n;
    let mats: Vec<Vec<PMat>> = (0..m).map(|p| (0..m).map(|q| kappa.matrix(p, q)).collect()).collect();
    let mut monos = std::collections::BTreeSet::<Monomial>::new();
    for (_, t) in kappa.blocks() {
        monos.extend(t.monomials());
    }
    let mut out = vec![PMat::zeros(n + 2, n + 2, nv); m];
    let half = q_frac(1, 2);
    for mono in &monos {
        let mut c = Cochain::zero(n, 2, Rep::Adjoint);
        for p in 0..m {
            for qq in p + 1..m {
                let comps: Vec<Q> = mats[p][qq].entries().iter().map(|e| e.coeff(mono) * q(2)).collect();
                if comps.iter().all(Zero::is_zero) {
                    continue;
                }
                c.add_term(&[p, qq], &RepVector::new(Rep::Adjoint, n, comps)?)?;
            }
        }
        let d = codifferential(2, &c)?;
        for (idx, v) in d.terms() {
            let p = idx[0];
            for (e, val) in v.components().iter().enumerate() {
                if !val.is_zero() {
                    let (i, j) = (e / (n + 2), e % (n + 2));
                    let cur = out[p].get(i, j).clone();
                    out[p].set(i, j, &cur + &Poly::term(nv, *mono, val * &half));
                }
            }
        }
    }
    Ok(out)
}

/// `(½)∂*κ` through the trace formula for its blocks.
fn via_blocks(kappa: &CurvatureBlocks) -> Result<Vec<PMat>> {
    let n = kappa.n();
    let nv = kappa.nvars();
    let tl = kappa.tau.contract(3, 4)?;
    let tr = kappa.wp.contract(3, 4)?.sub(&kappa.w.contract(2, 5)?.permute(&[0, 1, 3, 2]));
    let br = kappa.tau.contract(2, 5)?.permute(&[0, 1, 3, 2]).neg();
    let at = |t: &IndexedTensor, p: usize, i: usize, j: usize| t.get(&[p / n, p % n, i, j]).clone();
    Ok((0..2 * n)
        .map(|p| {
            PMat::from_fn(n + 2, n + 2, nv, |i, j| match (i < 2, j < 2) {
                (true, true) => at(&tl, p, i, j),
                (true, false) => at(&tr, p, i, j - 2),
                (false, true) => Poly::zero(nv),
                (false, false) => at(&br, p, i - 2, j - 2),
            })
        })
        .collect())
}

pub fn block_codifferential(kappa: &CurvatureBlocks) -> Result<BlockCodifferential> {
    check_kappa_slots(kappa)?;
    Ok(BlockCodifferential { via_codifferential: via_codifferential(kappa)?, via_blocks: via_blocks(kappa)? })
}

pub fn check_block_codifferential(kappa: &CurvatureBlocks) -> Result<VerificationReport> {
    Ok(block_codifferential(kappa)?.report())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::graded::z_matrix;
    use crate::weyl::TAU_SLOTS;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn std_vec(n: usize, f: impl Fn(usize) -> i64) -> RepVector {
        RepVector::new(Rep::Standard, n, (0..n + 2).map(|i| q(f(i))).collect()).unwrap()
    }

    #[test]
    fn degree_one_on_e_part_vanishes() {
        let mut c = Cochain::zero(3, 1, Rep::Standard);
        c.add_term(&[4], &std_vec(3, |i| if i < 2 { 5 } else { 0 })).unwrap();
        assert!(codifferential(1, &c).unwrap().is_zero());
    }

    #[test]
    fn degree_one_on_f_part() {
        let n = 3;
        let w = std_vec(n, |i| if i < 2 { 0 } else { i as i64 + 1 });
        for p in 0..2 * n {
            let mut c = Cochain::zero(n, 1, Rep::Standard);
            c.add_term(&[p], &w).unwrap();
            let d = codifferential(1, &c).unwrap();
            let expected = z_matrix(n, p).apply(w.components());
            let got = d.get(&[]);
            let neg: Vec<Q> = expected.iter().map(|x| -x).collect();
            assert_eq!(got.components(), &neg[..]);
            assert!(got.components()[2..].iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn degree_outside_range_rejected() {
        let c = Cochain::zero(3, 3, Rep::Standard);
        assert!(matches!(codifferential(3, &c), Err(Error::CodiffDegree(3))));
        assert!(matches!(codifferential(0, &Cochain::zero(3, 0, Rep::Dual)), Err(Error::CodiffDegree(0))));
    }

    #[test]
    fn wedge_reordering_is_antisymmetric() {
        let mut c = Cochain::zero(3, 2, Rep::Standard);
        let v = std_vec(3, |i| i as i64);
        c.add_term(&[1, 4], &v).unwrap();
        c.add_term(&[4, 1], &v).unwrap();
        c.add_term(&[2, 2], &v).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn codifferential_squares_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for rep in [Rep::Standard, Rep::Dual, Rep::Adjoint] {
            for _ in 0..100 {
                let c = Cochain::random(3, 2, rep, &mut rng).unwrap();
                let d = codifferential(1, &codifferential(2, &c).unwrap()).unwrap();
                assert!(d.is_zero(), "{rep:?}");
            }
        }
    }

    #[test]
    fn block_formula_matches_codifferential() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let k = CurvatureBlocks::random(3, &mut rng);
            let b = block_codifferential(&k).unwrap();
            assert!(b.paths_agree());
        }
    }

    #[test]
    fn zero_curvature_is_normal() {
        let b = block_codifferential(&CurvatureBlocks::zero(3, 6)).unwrap();
        assert!(b.paths_agree() && b.is_normal());
        assert!(b.report().all_pass());
    }

    #[test]
    fn trace_type_torsion_flags_top_left() {
        // τ^A_{A'}{}^B_{B'}{}^{C'}_C = δ^{C'}_{B'} t^{AB}_{A'C} − (swap)
        let n = 3;
        let nv = 6;
        let mut k = CurvatureBlocks::zero(n, nv);
        k.tau = IndexedTensor::from_fn(n, nv, &TAU_SLOTS, |i| {
            let (a, ap, b, bp, cp, c) = (i[0], i[1], i[2], i[3], i[4], i[5]);
            let mut v = 0i64;
            if cp == bp && a == c && b != a {
                v += 1 + ap as i64;
            }
            if cp == ap && b == c && a != b {
                v -= 1 + bp as i64;
            }
            Poly::constant(nv, q(v))
        });
        assert!(k.is_antisymmetric());
        let b = block_codifferential(&k).unwrap();
        assert!(b.paths_agree());
        assert!(!b.is_normal());
        assert!(b.offending_blocks().contains(&"top_left"));
        assert!(!b.report().all_pass());
    }
}
