use crate::error::{Error, Result};
use rand::Rng;

use crate::rational::random_q;
use crate::tensor::{IndexedTensor, Poly, Slot};

use super::pmat::PMat;

pub const TAU_SLOTS: [Slot; 6] = [Slot::EUp, Slot::FDown, Slot::EUp, Slot::FDown, Slot::FUp, Slot::EDown];
pub const W_SLOTS: [Slot; 6] = [Slot::EUp, Slot::FDown, Slot::EUp, Slot::FDown, Slot::EUp, Slot::EDown];
pub const WP_SLOTS: [Slot; 6] = [Slot::EUp, Slot::FDown, Slot::EUp, Slot::FDown, Slot::FUp, Slot::FDown];
pub const Y_SLOTS: [Slot; 6] = [Slot::EUp, Slot::FDown, Slot::EUp, Slot::FDown, Slot::EUp, Slot::FDown];

/// The Cartan curvature in a Weyl splitting, `κ_pq = [[W, Y], [τ, W']]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureBlocks {
    pub tau: IndexedTensor,
    pub w: IndexedTensor,
    pub wp: IndexedTensor,
    pub y: IndexedTensor,
}

impl CurvatureBlocks {
    pub fn new(tau: IndexedTensor, w: IndexedTensor, wp: IndexedTensor, y: IndexedTensor) -> Result<Self> {
        let b = CurvatureBlocks { tau, w, wp, y };
        b.check_slots()?;
        Ok(b)
    }

    /// Random antisymmetric, `sl`-valued blocks with entries affine in `x₀`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let nv = 2 * n;
        let mut t = |slots: &[Slot]| {
            let x = IndexedTensor::from_fn(n, nv, slots, |_| {
                Poly::constant(nv, random_q(rng, 5)) + Poly::var(nv, 0).scale(&random_q(rng, 5))
            });
            x.sub(&x.permute(&[2, 3, 0, 1, 4, 5]))
        };
        let tau = t(&TAU_SLOTS);
        let w = t(&W_SLOTS);
        let mut wp = t(&WP_SLOTS);
        let y = t(&Y_SLOTS);
        // tr W + tr W' = 0, adjusted through the last diagonal entry of W'
        let excess = w.contract(4, 5).expect("W slots").add(&wp.contract(4, 5).expect("W' slots"));
        for f in 0..excess.len() {
            let mut idx = excess.multi_index(f);
            idx.extend([n - 1, n - 1]);
            let v = wp.get(&idx) - &excess.components()[f];
            wp.set(&idx, v);
        }
        CurvatureBlocks { tau, w, wp, y }
    }

    pub fn zero(n: usize, nvars: usize) -> Self {
        CurvatureBlocks {
            tau: IndexedTensor::zeros(n, nvars, &TAU_SLOTS),
            w: IndexedTensor::zeros(n, nvars, &W_SLOTS),
            wp: IndexedTensor::zeros(n, nvars, &WP_SLOTS),
            y: IndexedTensor::zeros(n, nvars, &Y_SLOTS),
        }
    }

    pub fn check_slots(&self) -> Result<()> {
        for (name, t, s) in [
            ("tau", &self.tau, &TAU_SLOTS),
            ("W", &self.w, &W_SLOTS),
            ("W'", &self.wp, &WP_SLOTS),
            ("Y", &self.y, &Y_SLOTS),
        ] {
            if t.slots() != s {
                return Err(Error::Slot(format!("block {name} expects {s:?}, got {:?}", t.slots())));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.tau.n()
    }

    pub fn nvars(&self) -> usize {
        self.tau.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.tau.is_zero() && self.w.is_zero() && self.wp.is_zero() && self.y.is_zero()
    }

    pub fn blocks(&self) -> [(&'static str, &IndexedTensor); 4] {
        [("tau", &self.tau), ("W", &self.w), ("Wp", &self.wp), ("Y", &self.y)]
    }

    /// Each block is antisymmetric under `(A, A') ↔ (B, B')`.
    pub fn is_antisymmetric(&self) -> bool {
        self.blocks().iter().all(|(_, t)| t.add(&t.permute(&[2, 3, 0, 1, 4, 5])).is_zero())
    }

    /// `tr W + tr W'` over the endomorphism slots vanishes (the `g₀`
    /// trace constraint).
    pub fn g0_trace_free(&self) -> bool {
        let tw = self.w.contract(4, 5).expect("W slots");
        let twp = self.wp.contract(4, 5).expect("W' slots");
        tw.add(&twp).is_zero()
    }

    /// Assembles `κ_pq` as an `(n+2)×(n+2)` matrix.
    pub fn matrix(&self, p: usize, q: usize) -> PMat {
        let n = self.n();
        let (a, ap, b, bp) = (p / n, p % n, q / n, q % n);
        PMat::from_fn(n + 2, n + 2, self.nvars(), |i, j| {
            match (i < 2, j < 2) {
                (true, true) => self.w.get(&[a, ap, b, bp, i, j]),
                (true, false) => self.y.get(&[a, ap, b, bp, i, j - 2]),
                (false, true) => self.tau.get(&[a, ap, b, bp, i - 2, j]),
                (false, false) => self.wp.get(&[a, ap, b, bp, i - 2, j - 2]),
            }
            .clone()
        })
    }

    /// Inverse of [`matrix`](Self::matrix) over all frame pairs.
    pub fn from_matrices(n: usize, nvars: usize, kappa: &[Vec<PMat>]) -> Self {
        let mut out = CurvatureBlocks::zero(n, nvars);
        for (p, row) in kappa.iter().enumerate() {
            for (q, m) in row.iter().enumerate() {
                let (a, ap, b, bp) = (p / n, p % n, q / n, q % n);
                for i in 0..n + 2 {
                    for j in 0..n + 2 {
                        let v = m.get(i, j).clone();
                        match (i < 2, j < 2) {
                            (true, true) => out.w.set(&[a, ap, b, bp, i, j], v),
                            (true, false) => out.y.set(&[a, ap, b, bp, i, j - 2], v),
                            (false, true) => out.tau.set(&[a, ap, b, bp, i - 2, j], v),
                            (false, false) => out.wp.set(&[a, ap, b, bp, i - 2, j - 2], v),
                        }
                    }
                }
            }
        }
        out
    }
}
