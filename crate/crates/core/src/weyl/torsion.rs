use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;

use crate::algebra::graded::{g0_basis, x_matrix};
use crate::error::{Error, Result};
use crate::linalg::{rank, MinNormSolver};
use crate::rational::{format_q, Q};
use crate::tensor::{IndexedTensor, Poly, Slot};

use super::blocks::TAU_SLOTS;
use super::connection::covariant_derivative;
use super::data::{pair, ChartWeylData};
use super::pmat::PMat;

#[derive(Clone, Debug, PartialEq)]
pub struct Torsion {
    /// `τ^A_{A'}{}^B_{B'}{}^{C'}_C`
    pub tau: IndexedTensor,
    pub harmonic: bool,
    pub defects: HarmonicDefects,
}

/// The three linear conditions cutting out the harmonic torsion type.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicDefects {
    /// `Λ²E ⊗ Sym²F*` component
    pub lambda2_sym2: IndexedTensor,
    /// `τ^A_{A'}{}^I_{C'}{}^{B'}_I`
    pub e_trace: IndexedTensor,
    /// `τ^A_{A'}{}^B_{I'}{}^{I'}_C`
    pub f_trace: IndexedTensor,
}

impl HarmonicDefects {
    pub fn of(tau: &IndexedTensor) -> Result<Self> {
        Ok(HarmonicDefects {
            lambda2_sym2: tau.alternate(&[0, 2])?.symmetrize(&[1, 3])?,
            e_trace: tau.contract(2, 5)?,
            f_trace: tau.contract(3, 4)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.lambda2_sym2.is_zero() && self.e_trace.is_zero() && self.f_trace.is_zero()
    }

    fn flatten(&self) -> Vec<&Poly> {
        self.lambda2_sym2
            .components()
            .iter()
            .chain(self.e_trace.components())
            .chain(self.f_trace.components())
            .collect()
    }
}

/// `T(e_p, e_q) = ∇_{e_p} e_q − ∇_{e_q} e_p − [e_p, e_q]` on the frame.
pub fn torsion(data: &ChartWeylData) -> Result<Torsion> {
    let n = data.n();
    let nv = data.nvars();
    let frame = data.frame();
    // ∇ of the frame vector fields, viewed as constant (F↑, E↓) tensors
    let frame_fields: Vec<IndexedTensor> = (0..2 * n)
        .map(|q| {
            let (b, bp) = (q / n, q % n);
            let mut t = IndexedTensor::zeros(n, nv, &[Slot::FUp, Slot::EDown]);
            t.set(&[bp, b], Poly::one(nv));
            t
        })
        .collect();
    let derivs: Vec<IndexedTensor> =
        frame_fields.iter().map(|t| covariant_derivative(data, t)).collect::<Result<_>>()?;
    let mut tau = IndexedTensor::zeros(n, nv, &TAU_SLOTS);
    for p in 0..2 * n {
        let (a, ap) = (p / n, p % n);
        for q in 0..2 * n {
            if p == q {
                continue;
            }
            let (b, bp) = (q / n, q % n);
            let dq = derivs[q].slice_leading(&[a, ap]);
            let dp = derivs[p].slice_leading(&[b, bp]);
            for cp in 0..n {
                for c in 0..2 {
                    let mut v = dq.get(&[cp, c]) - dp.get(&[cp, c]);
                    v -= &frame.brackets[p][q][pair(n, c, cp)];
                    tau.set(&[a, ap, b, bp, cp, c], v);
                }
            }
        }
    }
    let defects = HarmonicDefects::of(&tau)?;
    Ok(Torsion { harmonic: defects.is_zero(), tau, defects })
}

/// The Spencer differential `δ(A)_{pq} = [A_p, X_q] − [A_q, X_p]` on the
/// unknown `(p, k)` (frame direction, `g₀` basis element), composed with
/// the harmonic-defect maps. Rows are defect components.
fn defect_of_delta_matrix(n: usize) -> Result<(Vec<Vec<Q>>, Vec<crate::algebra::QMat>)> {
    let basis = g0_basis(n);
    let nv = 2 * n;
    let mut cols = Vec::new();
    for p in 0..2 * n {
        for b in &basis {
            let tau = delta_image(n, p, b);
            let t = IndexedTensor::from_constants(n, nv, &TAU_SLOTS, &tau);
            let d = HarmonicDefects::of(&t)?;
            cols.push(d.flatten().iter().map(|c| c.constant_term()).collect::<Vec<Q>>());
        }
    }
    let rows = cols[0].len();
    let m = (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    Ok((m, basis))
}

/// Components of `δ(A)` for `A` supported in direction `p` with value `b`.
fn delta_image(n: usize, p: usize, b: &crate::algebra::QMat) -> Vec<Q> {
    let t = IndexedTensor::zeros(n, 2 * n, &TAU_SLOTS);
    let mut out = vec![Q::zero(); t.len()];
    for q in 0..2 * n {
        if q == p {
            continue;
        }
        let c = b.commutator(&x_matrix(n, q));
        for cp in 0..n {
            for cc in 0..2 {
                let v = c.get(2 + cp, cc);
                if v.is_zero() {
                    continue;
                }
                // +[A_p, X_q] in slot (p, q), −[A_p, X_q] in slot (q, p)
                let f1 = t.flat_index(&[p / n, p % n, q / n, q % n, cp, cc]);
                let f2 = t.flat_index(&[q / n, q % n, p / n, p % n, cp, cc]);
                out[f1] += v;
                out[f2] -= v;
            }
        }
    }
    out
}

/// The minimum-norm solver for `defect ∘ δ`, built once per `n`.
fn spencer_solver(n: usize) -> Result<(Arc<MinNormSolver>, Vec<crate::algebra::QMat>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<MinNormSolver>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("spencer solver cache").get(&n) {
        return Ok((s.clone(), g0_basis(n)));
    }
    let (m, basis) = defect_of_delta_matrix(n)?;
    let s = Arc::new(MinNormSolver::new(&m));
    cache.lock().expect("spencer solver cache").insert(n, s.clone());
    Ok((s, basis))
}

/// Rank of the Spencer differential `T*M ⊗ g₀ → Λ²T*M ⊗ TM` and the
/// dimension of the complement of the harmonic torsion type.
pub fn spencer_rank(n: usize) -> (usize, usize) {
    let basis = g0_basis(n);
    let mut cols = Vec::new();
    for p in 0..2 * n {
        for b in &basis {
            cols.push(delta_image(n, p, b));
        }
    }
    let m = 2 * n;
    let full = m * (m - 1) / 2 * m;
    let harmonic = 4 * (n * n * (n - 1) / 2 - n);
    (rank(&cols), full - harmonic)
}

/// Adds a `T*M ⊗ g₀` correction to Γ so that the torsion becomes harmonic.
/// Solved coefficient-wise with the minimum-norm solution.
pub fn weylize(data: &ChartWeylData) -> Result<ChartWeylData> {
    let n = data.n();
    let nv = data.nvars();
    let tor = torsion(data)?;
    if tor.harmonic {
        return Ok(data.clone());
    }
    let (solver, basis) = spencer_solver(n)?;
    let defect: Vec<&Poly> = tor.defects.flatten();
    let mut monos = std::collections::BTreeSet::new();
    for p in &defect {
        monos.extend(p.terms().map(|(m, _)| *m));
    }
    let nb = basis.len();
    // frame corrections A_p as (n+2)×(n+2) polynomial matrices
    let mut corr = vec![PMat::zeros(n + 2, n + 2, nv); 2 * n];
    for mono in monos {
        let rhs: Vec<Q> = defect.iter().map(|p| -p.coeff(&mono)).collect();
        let x = solver.solve(&rhs).ok_or_else(|| Error::Inconsistent {
            op: "weylize".into(),
            detail: format!(
                "non-harmonic torsion not in the image of the Spencer differential at monomial {mono:?}; rhs = [{}]",
                rhs.iter().map(format_q).collect::<Vec<_>>().join(", ")
            ),
        })?;
        for p in 0..2 * n {
            for k in 0..nb {
                let c = &x[p * nb + k];
                if c.is_zero() {
                    continue;
                }
                let term = Poly::term(nv, mono, c.clone());
                let delta = PMat::from_constant(&basis[k], nv).mul_poly(&term);
                corr[p] = corr[p].add(&delta);
            }
        }
    }
    let coords = data.to_coords(&corr);
    let ge: Vec<PMat> = data.gamma_e().iter().zip(&coords).map(|(g, c)| g.add(&c.block(0, 0, 2, 2))).collect();
    let gf: Vec<PMat> = data.gamma_f().iter().zip(&coords).map(|(g, c)| g.add(&c.block(2, 2, n, n))).collect();
    let out = data.with_gammas(ge, gf)?;
    let check = torsion(&out)?;
    if !check.harmonic {
        return Err(Error::Consistency("weylize produced non-harmonic torsion".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::data::Soldering;
    use crate::weyl::Shear;

    const N: usize = 3;
    const NV: usize = 6;

    #[test]
    fn flat_torsion_vanishes() {
        let t = torsion(&ChartWeylData::flat(N).unwrap()).unwrap();
        assert!(t.tau.is_zero());
        assert!(t.harmonic);
    }

    #[test]
    fn spencer_rank_matches_nonharmonic_dimension() {
        for n in 3..=4 {
            let (r, d) = spencer_rank(n);
            assert_eq!(r, d, "n={n}");
        }
    }

    #[test]
    fn random_gamma_torsion_not_harmonic_and_weylize_fixes_it() {
        let f = ChartWeylData::flat(N).unwrap();
        let mut ge = f.gamma_e().to_vec();
        let mut gf = f.gamma_f().to_vec();
        ge[1].set(0, 0, Poly::var(NV, 3));
        gf[1].set(0, 0, -&Poly::var(NV, 3));
        gf[4].set(2, 1, Poly::constant(NV, Q::from_integer(2.into())));
        let d = f.with_gammas(ge, gf).unwrap();
        assert!(!torsion(&d).unwrap().harmonic);
        let w = weylize(&d).unwrap();
        let t = torsion(&w).unwrap();
        assert!(t.harmonic);
        assert!(crate::weyl::validate(&w).all_pass());
        let again = weylize(&w).unwrap();
        assert_eq!(torsion(&again).unwrap().tau, t.tau);
    }

    #[test]
    fn sheared_soldering_is_weylized() {
        let s = Soldering::from_shears(N, vec![Shear { row: 3, col: 1, entry: Poly::var(NV, 0) }]).unwrap();
        let f = ChartWeylData::flat(N).unwrap();
        let d = ChartWeylData::new(N, s, f.gamma_e().to_vec(), f.gamma_f().to_vec(), f.rho().clone()).unwrap();
        let w = weylize(&d).unwrap();
        assert!(torsion(&w).unwrap().harmonic);
    }
}
