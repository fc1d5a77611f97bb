use crate::error::Result;
use crate::tensor::{IndexedTensor, Poly, TWO_FORM_SLOTS};

use super::connection::covariant_derivative;
use super::data::ChartWeylData;
use super::pmat::PMat;
use super::sections::{SplitCotractor, SplitTractor, UpsilonForm};

/// The Weyl structure changed by `Υ`: the connection shift
/// `∇̂^A_{A'}η^{B'} = ∇^A_{A'}η^{B'} + Υ^A_{I'}η^{I'}δ^{B'}_{A'}`,
/// `∇̂^A_{A'}φ_B = ∇^A_{A'}φ_B + Υ^I_{A'}φ_I δ^A_B` and
/// `P̂^A_{A'}{}^B_{B'} = P^A_{A'}{}^B_{B'} + ∇^A_{A'}Υ^B_{B'} − Υ^B_{A'}Υ^A_{B'}`.
pub fn apply_upsilon(data: &ChartWeylData, upsilon: &UpsilonForm) -> Result<ChartWeylData> {
    let n = data.n();
    let nv = data.nvars();
    let u = upsilon.tensor();
    let mut de = Vec::with_capacity(2 * n);
    let mut df = Vec::with_capacity(2 * n);
    for p in 0..2 * n {
        let (a, ap) = (p / n, p % n);
        let mut e = PMat::zeros(2, 2, nv);
        for i in 0..2 {
            e.set(i, a, -u.get(&[i, ap]));
        }
        let mut f = PMat::zeros(n, n, nv);
        for cp in 0..n {
            f.set(ap, cp, u.get(&[a, cp]).clone());
        }
        de.push(e);
        df.push(f);
    }
    let ge: Vec<PMat> = data.gamma_e().iter().zip(data.to_coords(&de)).map(|(g, d)| g.add(&d)).collect();
    let gf: Vec<PMat> = data.gamma_f().iter().zip(data.to_coords(&df)).map(|(g, d)| g.add(&d)).collect();
    let du = covariant_derivative(data, u)?;
    let quad = IndexedTensor::from_fn(n, nv, &TWO_FORM_SLOTS, |i| {
        let (a, ap, b, bp) = (i[0], i[1], i[2], i[3]);
        u.get(&[b, ap]) * u.get(&[a, bp])
    });
    let rho = data.rho().add(&du).sub(&quad);
    rho.check_degree(data.degree_cap(), "apply_upsilon")?;
    data.with_gammas(ge, gf)?.with_rho(rho)
}

/// `(η, ξ)_σ = (η, ξ − Υ(η))_σ̂`, on sections with any leading slots.
pub fn resplit_tractor(upsilon: &UpsilonForm, s: &SplitTractor) -> SplitTractor {
    SplitTractor { eta: s.eta.clone(), xi: s.xi.sub(&upsilon.apply_f(&s.eta)) }
}

/// `(φ, μ)^σ = (φ, μ + Υ(φ))^σ̂`.
pub fn resplit_cotractor(upsilon: &UpsilonForm, s: &SplitCotractor) -> SplitCotractor {
    SplitCotractor { phi: s.phi.clone(), mu: s.mu.add(&upsilon.apply_e_star(&s.phi)) }
}

/// A polynomial `Υ` from explicit components `Υ^A_{A'}`.
pub fn upsilon_from_fn(n: usize, f: impl FnMut(&[usize]) -> Poly) -> UpsilonForm {
    UpsilonForm::new(IndexedTensor::from_fn(n, 2 * n, &[crate::tensor::Slot::EUp, crate::tensor::Slot::FDown], f))
        .expect("slots fixed")
}
