//! The fixed decompositions of `T*M`-valued tensors used by the calculus.

use crate::error::{Error, Result};
use crate::rational::q_frac;
use crate::tensor::indexed::{IndexedTensor, Slot};

/// Slot signature of a `(0,2)`-tensor on `TM = E* ⊗ F`, i.e. `S^A_{A'}^B_{B'}`.
pub const TWO_FORM_SLOTS: [Slot; 4] = [Slot::EUp, Slot::FDown, Slot::EUp, Slot::FDown];

/// Splitting of a symmetric `(0,2)`-tensor into its
/// `Sym²E ⊗ Sym²F*` and `Λ²E ⊗ Λ²F*` parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Sym2Parts {
    /// `S^{(A}_{(A'}^{B)}_{B')}`
    pub symmetric: IndexedTensor,
    /// `S^{[A}_{[A'}^{B]}_{B']}`
    pub alternating: IndexedTensor,
}

/// Both mixed-symmetry projections of a `(0,2)`-tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedParts {
    /// `S^{(A}_{[A'}^{B)}_{B']}`
    pub sym_alt: IndexedTensor,
    /// `S^{[A}_{(A'}^{B]}_{B')}`
    pub alt_sym: IndexedTensor,
}

fn require_slots(t: &IndexedTensor, slots: &[Slot], what: &str) -> Result<()> {
    if t.slots() != slots {
        return Err(Error::Slot(format!("{what} expects slots {slots:?}, got {:?}", t.slots())));
    }
    Ok(())
}

pub fn sym_sym(s: &IndexedTensor) -> Result<IndexedTensor> {
    require_slots(s, &TWO_FORM_SLOTS, "sym_sym")?;
    s.symmetrize(&[0, 2])?.symmetrize(&[1, 3])
}

pub fn alt_alt(s: &IndexedTensor) -> Result<IndexedTensor> {
    require_slots(s, &TWO_FORM_SLOTS, "alt_alt")?;
    s.alternate(&[0, 2])?.alternate(&[1, 3])
}

pub fn mixed_parts(s: &IndexedTensor) -> Result<MixedParts> {
    require_slots(s, &TWO_FORM_SLOTS, "mixed_parts")?;
    Ok(MixedParts {
        sym_alt: s.symmetrize(&[0, 2])?.alternate(&[1, 3])?,
        alt_sym: s.alternate(&[0, 2])?.symmetrize(&[1, 3])?,
    })
}

/// Swaps the two index pairs: `S^A_{A'}^B_{B'} -> S^B_{B'}^A_{A'}`.
pub fn swap_pairs(s: &IndexedTensor) -> IndexedTensor {
    s.permute(&[2, 3, 0, 1])
}

/// Decomposes a symmetric `(0,2)`-tensor; fails if the input is not
/// symmetric under simultaneous exchange of the index pairs.
pub fn sym2_decompose(s: &IndexedTensor) -> Result<Sym2Parts> {
    require_slots(s, &TWO_FORM_SLOTS, "sym2_decompose")?;
    if swap_pairs(s) != *s {
        return Err(Error::Precondition("sym2_decompose: input is not symmetric".into()));
    }
    Ok(Sym2Parts { symmetric: sym_sym(s)?, alternating: alt_alt(s)? })
}

/// Projections of an antisymmetric `(0,2)`-tensor onto
/// `Sym²E ⊗ Λ²F*` and `Λ²E ⊗ Sym²F*`.
pub fn lambda2_split(w: &IndexedTensor) -> Result<(IndexedTensor, IndexedTensor)> {
    require_slots(w, &TWO_FORM_SLOTS, "lambda2_split")?;
    Ok((w.symmetrize(&[0, 2])?.alternate(&[1, 3])?, w.alternate(&[0, 2])?.symmetrize(&[1, 3])?))
}

/// Which `T*M ⊗ (bundle)` decomposition to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceShape {
    /// `Φ^A_{A'}^{B'}` in `T*M ⊗ F = E ⊗ sl(F) ⊕ E`.
    TStarMF,
    /// `Ψ^A_{A'B}` in `T*M ⊗ E* = F* ⊗ sl(E) ⊕ F*`.
    TStarMEStar,
}

impl TraceShape {
    pub fn slots(self) -> [Slot; 3] {
        match self {
            TraceShape::TStarMF => [Slot::EUp, Slot::FDown, Slot::FUp],
            TraceShape::TStarMEStar => [Slot::EUp, Slot::FDown, Slot::EDown],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceDecomposition {
    pub shape: TraceShape,
    pub trace_free: IndexedTensor,
    /// `tr(Φ)^A = Φ^A_{I'}^{I'}`, respectively `tr(Ψ)_{A'} = Ψ^I_{A'I}`.
    pub trace: IndexedTensor,
}

impl TraceDecomposition {
    /// `Φ_o + (1/n) δ ⊗ tr(Φ)`, respectively `Ψ_o + (1/2) δ ⊗ tr(Ψ)`.
    pub fn reconstruct(&self) -> IndexedTensor {
        self.trace_free.add(&trace_term(self.shape, &self.trace))
    }
}

fn trace_term(shape: TraceShape, trace: &IndexedTensor) -> IndexedTensor {
    let (n, nv) = (trace.n(), trace.nvars());
    match shape {
        TraceShape::TStarMF => {
            trace.outer(&IndexedTensor::delta(n, nv, Slot::FUp)).permute(&[0, 2, 1]).scale(&q_frac(1, n as i64))
        }
        TraceShape::TStarMEStar => {
            IndexedTensor::delta(n, nv, Slot::EUp).outer(trace).permute(&[0, 2, 1]).scale(&q_frac(1, 2))
        }
    }
}

pub fn trace_free_decompose(t: &IndexedTensor, shape: TraceShape) -> Result<TraceDecomposition> {
    require_slots(t, &shape.slots(), "trace_free_decompose")?;
    let trace = match shape {
        TraceShape::TStarMF => t.contract(1, 2)?,
        TraceShape::TStarMEStar => t.contract(0, 2)?,
    };
    let trace_free = t.sub(&trace_term(shape, &trace));
    Ok(TraceDecomposition { shape, trace_free, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, random_q};
    use crate::tensor::poly::Poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const N: usize = 3;
    const NV: usize = 6;

    fn random(slots: &[Slot], rng: &mut ChaCha8Rng) -> IndexedTensor {
        IndexedTensor::from_fn(N, NV, slots, |_| {
            let c = random_q(rng, 9);
            let lin = random_q(rng, 9);
            &Poly::constant(NV, c) + &Poly::var(NV, 0).scale(&lin)
        })
    }

    fn random_symmetric(rng: &mut ChaCha8Rng) -> IndexedTensor {
        let t = random(&TWO_FORM_SLOTS, rng);
        t.add(&swap_pairs(&t))
    }

    #[test]
    fn sym2_parts_sum_to_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let s = random_symmetric(&mut rng);
            let parts = sym2_decompose(&s).unwrap();
            assert_eq!(parts.symmetric.add(&parts.alternating), s);
            let mixed = mixed_parts(&s).unwrap();
            assert!(mixed.sym_alt.is_zero());
            assert!(mixed.alt_sym.is_zero());
        }
    }

    #[test]
    fn product_of_symmetric_factors_has_no_alternating_part() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random(&[Slot::EUp, Slot::EUp], &mut rng);
        let g = g.add(&g.permute(&[1, 0]));
        let h = random(&[Slot::FDown, Slot::FDown], &mut rng);
        let h = h.add(&h.permute(&[1, 0]));
        // S^A_{A'}^B_{B'} = g^{AB} h_{A'B'}
        let s = g.outer(&h).permute(&[0, 2, 1, 3]);
        let parts = sym2_decompose(&s).unwrap();
        assert!(parts.alternating.is_zero());
    }

    #[test]
    fn nonsymmetric_input_rejected() {
        let mut t = IndexedTensor::zeros(N, NV, &TWO_FORM_SLOTS);
        t.set(&[0, 0, 1, 1], Poly::one(NV));
        assert!(sym2_decompose(&t).is_err());
    }

    #[test]
    fn pure_trace_inputs() {
        let c = IndexedTensor::from_constants(N, NV, &[Slot::EUp], &[q(2), q(-5)]);
        let phi = c.outer(&IndexedTensor::delta(N, NV, Slot::FUp)).permute(&[0, 2, 1]);
        let d = trace_free_decompose(&phi, TraceShape::TStarMF).unwrap();
        assert!(d.trace_free.is_zero());
        assert_eq!(d.trace, c.scale(&q(N as i64)));

        let m = IndexedTensor::from_constants(N, NV, &[Slot::FDown], &[q(1), q(0), q(-3)]);
        let psi = IndexedTensor::delta(N, NV, Slot::EUp).outer(&m).permute(&[0, 2, 1]);
        let d = trace_free_decompose(&psi, TraceShape::TStarMEStar).unwrap();
        assert!(d.trace_free.is_zero());
        assert_eq!(d.trace, m.scale(&q(2)));
    }

    #[test]
    fn trace_free_part_is_trace_free_and_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for shape in [TraceShape::TStarMF, TraceShape::TStarMEStar] {
            let t = random(&shape.slots(), &mut rng);
            let d = trace_free_decompose(&t, shape).unwrap();
            assert_eq!(d.reconstruct(), t);
            let again = trace_free_decompose(&d.trace_free, shape).unwrap();
            assert!(again.trace.is_zero());
            assert_eq!(again.trace_free, d.trace_free);
        }
    }

    #[test]
    fn wrong_signature_rejected() {
        let t = IndexedTensor::zeros(N, NV, &[Slot::EUp, Slot::FDown, Slot::EUp]);
        assert!(trace_free_decompose(&t, TraceShape::TStarMF).is_err());
    }

    #[test]
    fn lambda2_projectors_complementary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = random(&TWO_FORM_SLOTS, &mut rng);
        let w = t.sub(&swap_pairs(&t));
        let (a, b) = lambda2_split(&w).unwrap();
        assert_eq!(a.add(&b), w);
        let (aa, ab) = lambda2_split(&a).unwrap();
        assert_eq!(aa, a);
        assert!(ab.is_zero());
    }
}
