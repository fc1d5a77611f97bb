use crate::algebra::graded::{x_matrix, z_matrix};
use crate::algebra::QMat;
use crate::error::Result;
use crate::tensor::{IndexedTensor, Poly, Slot};

use super::data::{pair, unpair, ChartWeylData};
use super::pmat::PMat;
use super::sections::{AdjointSection, SplitCotractor, SplitTractor};

/// `∇^A_{A'} T`: the derivative along the frame field `e_p`, `p = (A, A')`,
/// with the pair `(E↑, F↓)` prepended to the slots of `T`.
pub fn covariant_derivative(data: &ChartWeylData, t: &IndexedTensor) -> Result<IndexedTensor> {
    let n = data.n();
    let nv = data.nvars();
    let frame = data.frame();
    let mut slots = vec![Slot::EUp, Slot::FDown];
    slots.extend_from_slice(t.slots());
    let mut out = IndexedTensor::zeros(n, nv, &slots);
    let strides: Vec<usize> = (0..t.rank()).map(|k| t.stride(k)).collect();
    let comps = t.components();
    let len = t.len();
    for p in 0..2 * n {
        let (ge, gf) = (&frame.gamma_e[p], &frame.gamma_f[p]);
        let base = p * len;
        for flat in 0..len {
            let idx = t.multi_index(flat);
            let mut val = data.frame_derivative(p, &comps[flat]);
            for (k, &slot) in t.slots().iter().enumerate() {
                let g = if slot.is_e() { ge } else { gf };
                let i = idx[k];
                for j in 0..slot.dim(n) {
                    let coef = match slot {
                        Slot::EUp | Slot::FUp => g.get(i, j),
                        Slot::EDown | Slot::FDown => g.get(j, i),
                    };
                    if coef.is_zero() {
                        continue;
                    }
                    let other = &comps[flat + j * strides[k] - i * strides[k]];
                    if other.is_zero() {
                        continue;
                    }
                    let term = coef * other;
                    match slot {
                        Slot::EUp | Slot::FUp => val += &term,
                        Slot::EDown | Slot::FDown => val -= &term,
                    }
                }
            }
            out.components_mut()[base + flat] = val;
        }
    }
    out.check_degree(data.degree_cap(), "covariant_derivative")?;
    Ok(out)
}

fn require_plain(t: &IndexedTensor, slot: Slot) -> Result<()> {
    if t.slots() != [slot] {
        return Err(crate::error::Error::Slot(format!(
            "expected a plain section with slot {slot:?}, got {:?}",
            t.slots()
        )));
    }
    Ok(())
}

/// `∇^𝒯 (η, ξ) = (∇η + ξ^A δ^{B'}_{A'}, ∇ξ + η^{I'} P^A_{A'}{}^B_{I'})`
pub fn tractor_derivative(data: &ChartWeylData, s: &SplitTractor) -> Result<SplitTractor> {
    require_plain(&s.eta, Slot::FUp)?;
    require_plain(&s.xi, Slot::EUp)?;
    let n = data.n();
    let mut eta = covariant_derivative(data, &s.eta)?;
    let mut xi = covariant_derivative(data, &s.xi)?;
    let rho = data.rho();
    for a in 0..2 {
        for ap in 0..n {
            *eta.get_mut(&[a, ap, ap]) += s.xi.get(&[a]);
            for b in 0..2 {
                let mut acc = Poly::zero(data.nvars());
                for ip in 0..n {
                    acc += &(s.eta.get(&[ip]) * rho.get(&[a, ap, b, ip]));
                }
                *xi.get_mut(&[a, ap, b]) += &acc;
            }
        }
    }
    SplitTractor::new(eta, xi)
}

/// `∇^{𝒯*} (φ, μ) = (∇φ − μ_{A'} δ^A_B, ∇μ − φ_I P^A_{A'}{}^I_{B'})`
pub fn cotractor_derivative(data: &ChartWeylData, s: &SplitCotractor) -> Result<SplitCotractor> {
    require_plain(&s.phi, Slot::EDown)?;
    require_plain(&s.mu, Slot::FDown)?;
    let n = data.n();
    let mut phi = covariant_derivative(data, &s.phi)?;
    let mut mu = covariant_derivative(data, &s.mu)?;
    let rho = data.rho();
    for a in 0..2 {
        for ap in 0..n {
            *phi.get_mut(&[a, ap, a]) -= s.mu.get(&[ap]);
            for bp in 0..n {
                let mut acc = Poly::zero(data.nvars());
                for i in 0..2 {
                    acc += &(s.phi.get(&[i]) * rho.get(&[a, ap, i, bp]));
                }
                *mu.get_mut(&[a, ap, bp]) -= &acc;
            }
        }
    }
    SplitCotractor::new(phi, mu)
}

/// The tractor connection form in the frame:
/// `ω(e_p) = [[Γ^E(e_p), P(e_p)], [X_p, Γ^F(e_p)]]`.
pub fn frame_omega(data: &ChartWeylData) -> Vec<PMat> {
    let n = data.n();
    let nv = data.nvars();
    let frame = data.frame();
    (0..2 * n)
        .map(|p| {
            let (a, ap) = unpair(n, p);
            let mut w = PMat::from_constant(&x_matrix(n, pair(n, a, ap)), nv);
            w.set_block(0, 0, &frame.gamma_e[p]);
            w.set_block(2, 2, &frame.gamma_f[p]);
            for b in 0..2 {
                for bp in 0..n {
                    w.set(b, 2 + bp, data.rho().get(&[a, ap, b, bp]).clone());
                }
            }
            w
        })
        .collect()
}

/// `∇^𝒜_p s = e_p(s) + [ω(e_p), s]`, one matrix per frame direction.
pub fn adjoint_derivative(data: &ChartWeylData, s: &AdjointSection) -> Result<Vec<PMat>> {
    let omega = frame_omega(data);
    let m = s.matrix();
    let out: Vec<PMat> =
        omega.iter().enumerate().map(|(p, w)| data.frame_derivative_mat(p, m).add(&w.commutator(m))).collect();
    for d in &out {
        for e in d.entries() {
            e.check_degree(data.degree_cap(), "adjoint_derivative")?;
        }
    }
    Ok(out)
}

/// `Z ∈ g₁` with `Z[B][B'] = t[B][B']` for an `(E↑, F↓)` tensor.
pub fn g1_element(t: &[crate::rational::Q], n: usize) -> QMat {
    let mut z = QMat::zeros(n + 2);
    for b in 0..2 {
        for bp in 0..n {
            z = &z + &z_matrix(n, pair(n, b, bp)).scale(&t[b * n + bp]);
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::weyl::data::Soldering;
    use crate::weyl::Shear;

    const N: usize = 3;
    const NV: usize = 6;

    #[test]
    fn flat_coordinate_derivative() {
        // η^{B'} = x^{B'}_0
        let d = ChartWeylData::flat(N).unwrap();
        let eta = IndexedTensor::from_fn(N, NV, &[Slot::FUp], |i| Poly::var(NV, pair(N, 0, i[0])));
        let de = covariant_derivative(&d, &eta).unwrap();
        for a in 0..2 {
            for ap in 0..N {
                for bp in 0..N {
                    let expect = if a == 0 && ap == bp { 1 } else { 0 };
                    assert_eq!(de.get(&[a, ap, bp]), &Poly::constant(NV, q(expect)));
                }
            }
        }
        let c = IndexedTensor::from_constants(N, NV, &[Slot::EUp, Slot::FDown], &vec![q(1); 6]);
        assert!(covariant_derivative(&d, &c).unwrap().is_zero());
    }

    fn curved() -> ChartWeylData {
        let s = Soldering::from_shears(
            N,
            vec![Shear { row: 5, col: 1, entry: Poly::var(NV, 0) }, Shear { row: 2, col: 3, entry: Poly::var(NV, 4) }],
        )
        .unwrap();
        let f = ChartWeylData::flat(N).unwrap();
        let mut ge = f.gamma_e().to_vec();
        let mut gf = f.gamma_f().to_vec();
        ge[0].set(0, 1, Poly::var(NV, 2));
        ge[3].set(1, 1, Poly::var(NV, 1));
        gf[3].set(0, 0, -&Poly::var(NV, 1));
        gf[2].set(1, 2, Poly::var(NV, 5));
        ChartWeylData::new(N, s, ge, gf, f.rho().clone()).unwrap()
    }

    #[test]
    fn leibniz_rule() {
        let d = curved();
        let t = IndexedTensor::from_fn(N, NV, &[Slot::EUp, Slot::FDown], |i| {
            &Poly::var(NV, i[0] + i[1]) + &Poly::constant(NV, q(i[1] as i64))
        });
        let u = IndexedTensor::from_fn(N, NV, &[Slot::FUp], |i| Poly::var(NV, 5 - i[0]));
        let lhs = covariant_derivative(&d, &t.outer(&u)).unwrap();
        let rhs = covariant_derivative(&d, &t)
            .unwrap()
            .outer(&u)
            .add(&t.outer(&covariant_derivative(&d, &u).unwrap()).permute(&[2, 3, 0, 1, 4]));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn constant_tractor_on_flat_data() {
        let d = ChartWeylData::flat(N).unwrap();
        let s = SplitTractor::from_standard(N, NV, &[q(2), q(-1), q(1), q(0), q(3)].map(|v| Poly::constant(NV, v)));
        let ds = tractor_derivative(&d, &s).unwrap();
        assert!(ds.xi.is_zero());
        for a in 0..2 {
            for ap in 0..N {
                for bp in 0..N {
                    let expect = if ap == bp { s.xi.get(&[a]).clone() } else { Poly::zero(NV) };
                    assert_eq!(ds.eta.get(&[a, ap, bp]), &expect);
                }
            }
        }
    }

    #[test]
    fn degree_cap_is_enforced() {
        let d = ChartWeylData::flat(N).unwrap().with_degree_cap(1);
        let t =
            IndexedTensor::from_fn(N, NV, &[Slot::FUp], |_| &Poly::var(NV, 0) * &Poly::var(NV, 0) * Poly::var(NV, 0));
        let err = covariant_derivative(&d, &t).unwrap_err();
        assert!(err.to_string().contains("covariant_derivative"));
    }
}
