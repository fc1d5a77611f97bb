//! Dense abstract-index tensors with polynomial components.
//!
//! Slot kinds follow the usual convention for the two auxiliary bundles:
//! unprimed indices live on `E` (rank 2), primed indices on `F` (rank `n`).
//! Components are stored slot-major: the first slot is the most significant
//! digit of the flat index.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::tensor::poly::{Monomial, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slot {
    /// Upper unprimed index, a vector in `E`.
    #[serde(rename = "Eu")]
    EUp,
    /// Lower unprimed index, in `E*`.
    #[serde(rename = "Ed")]
    EDown,
    /// Upper primed index, in `F`.
    #[serde(rename = "Fu")]
    FUp,
    /// Lower primed index, in `F*`.
    #[serde(rename = "Fd")]
    FDown,
}

impl Slot {
    pub fn dim(self, n: usize) -> usize {
        match self {
            Slot::EUp | Slot::EDown => 2,
            Slot::FUp | Slot::FDown => n,
        }
    }

    pub fn dual(self) -> Slot {
        match self {
            Slot::EUp => Slot::EDown,
            Slot::EDown => Slot::EUp,
            Slot::FUp => Slot::FDown,
            Slot::FDown => Slot::FUp,
        }
    }

    pub fn is_e(self) -> bool {
        matches!(self, Slot::EUp | Slot::EDown)
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Slot::EUp => "E^",
            Slot::EDown => "E_",
            Slot::FUp => "F^",
            Slot::FDown => "F_",
        };
        f.write_str(s)
    }
}

/// Whether [`IndexedTensor::sym_ops`] averages with or without sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymMode {
    Symmetrize,
    Alternate,
}

#[derive(Clone, PartialEq, Eq)]
pub struct IndexedTensor {
    n: usize,
    nvars: usize,
    slots: Vec<Slot>,
    comps: Vec<Poly>,
}

impl IndexedTensor {
    pub fn zeros(n: usize, nvars: usize, slots: &[Slot]) -> Self {
        let len = slots.iter().map(|s| s.dim(n)).product();
        IndexedTensor { n, nvars, slots: slots.to_vec(), comps: vec![Poly::zero(nvars); len] }
    }

    pub fn from_fn<F>(n: usize, nvars: usize, slots: &[Slot], mut f: F) -> Self
    where
        F: FnMut(&[usize]) -> Poly,
    {
        let mut t = IndexedTensor::zeros(n, nvars, slots);
        let mut idx = vec![0; slots.len()];
        for flat in 0..t.comps.len() {
            t.unflatten_into(flat, &mut idx);
            t.comps[flat] = f(&idx);
        }
        t
    }

    /// Tensor with constant components given in slot-major order.
    pub fn from_constants(n: usize, nvars: usize, slots: &[Slot], values: &[Q]) -> Self {
        let t = IndexedTensor::zeros(n, nvars, slots);
        assert_eq!(values.len(), t.comps.len(), "component count mismatch");
        IndexedTensor { comps: values.iter().map(|v| Poly::constant(nvars, v.clone())).collect(), ..t }
    }

    pub fn from_components(n: usize, nvars: usize, slots: &[Slot], comps: Vec<Poly>) -> Result<Self> {
        let expected: usize = slots.iter().map(|s| s.dim(n)).product();
        if comps.len() != expected {
            return Err(Error::Slot(format!(
                "expected {expected} components for slots {slots:?}, got {}",
                comps.len()
            )));
        }
        if let Some(p) = comps.iter().find(|p| p.nvars() != nvars) {
            return Err(Error::NvarsMismatch { left: nvars, right: p.nvars() });
        }
        Ok(IndexedTensor { n, nvars, slots: slots.to_vec(), comps })
    }

    pub fn scalar(n: usize, p: Poly) -> Self {
        IndexedTensor { n, nvars: p.nvars(), slots: Vec::new(), comps: vec![p] }
    }

    /// Kronecker delta on `E` (`up = EUp`) or `F` (`up = FUp`).
    pub fn delta(n: usize, nvars: usize, up: Slot) -> Self {
        let slots = [up, up.dual()];
        IndexedTensor::from_fn(n, nvars, &slots, |i| if i[0] == i[1] { Poly::one(nvars) } else { Poly::zero(nvars) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.slots.iter().map(|s| s.dim(self.n)).collect()
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    pub fn components_mut(&mut self) -> &mut [Poly] {
        &mut self.comps
    }

    pub fn into_components(self) -> Vec<Poly> {
        self.comps
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.slots.len());
        let mut flat = 0;
        for (s, &i) in self.slots.iter().zip(idx) {
            let d = s.dim(self.n);
            debug_assert!(i < d);
            flat = flat * d + i;
        }
        flat
    }

    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.slots.len()];
        self.unflatten_into(flat, &mut idx);
        idx
    }

    fn unflatten_into(&self, mut flat: usize, idx: &mut [usize]) {
        for k in (0..self.slots.len()).rev() {
            let d = self.slots[k].dim(self.n);
            idx[k] = flat % d;
            flat /= d;
        }
    }

    pub fn get(&self, idx: &[usize]) -> &Poly {
        &self.comps[self.flat_index(idx)]
    }

    pub fn get_mut(&mut self, idx: &[usize]) -> &mut Poly {
        let f = self.flat_index(idx);
        &mut self.comps[f]
    }

    pub fn set(&mut self, idx: &[usize], p: Poly) {
        let f = self.flat_index(idx);
        self.comps[f] = p;
    }

    /// Distance in the flat array between consecutive values of slot `k`.
    pub fn stride(&self, k: usize) -> usize {
        self.slots[k + 1..].iter().map(|s| s.dim(self.n)).product()
    }

    /// The sub-tensor with the leading slots fixed to `fixed`.
    pub fn slice_leading(&self, fixed: &[usize]) -> IndexedTensor {
        let k = fixed.len();
        let slots = self.slots[k..].to_vec();
        let len: usize = slots.iter().map(|s| s.dim(self.n)).product();
        let mut start = 0;
        for (s, &i) in self.slots[..k].iter().zip(fixed) {
            start = start * s.dim(self.n) + i;
        }
        start *= len;
        IndexedTensor { n: self.n, nvars: self.nvars, slots, comps: self.comps[start..start + len].to_vec() }
    }

    /// All monomials occurring in some component.
    pub fn monomials(&self) -> std::collections::BTreeSet<Monomial> {
        self.comps.iter().flat_map(|p| p.terms().map(|(m, _)| *m)).collect()
    }

    /// The constant tensor of coefficients of `m`.
    pub fn coefficients(&self, m: &Monomial) -> Vec<Q> {
        self.comps.iter().map(|p| p.coeff(m)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn degree(&self) -> u32 {
        self.comps.iter().map(Poly::degree).max().unwrap_or(0)
    }

    pub fn check_degree(&self, cap: u32, op: &str) -> Result<()> {
        self.comps.iter().try_for_each(|p| p.check_degree(cap, op))
    }

    fn same_shape(&self, other: &IndexedTensor) -> Result<()> {
        if self.slots != other.slots || self.n != other.n {
            return Err(Error::Slot(format!("shape mismatch: {:?} vs {:?}", self.slots, other.slots)));
        }
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &IndexedTensor) -> Result<IndexedTensor> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &IndexedTensor) -> Result<IndexedTensor> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    /// Panicking addition for internal use where shapes are known to match.
    pub fn add(&self, other: &IndexedTensor) -> IndexedTensor {
        self.try_add(other).expect("tensor shapes must match")
    }

    pub fn sub(&self, other: &IndexedTensor) -> IndexedTensor {
        self.try_sub(other).expect("tensor shapes must match")
    }

    fn zip_with<F: Fn(&Poly, &Poly) -> Poly>(&self, other: &IndexedTensor, f: F) -> IndexedTensor {
        IndexedTensor {
            n: self.n,
            nvars: self.nvars,
            slots: self.slots.clone(),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> IndexedTensor {
        self.map(|p| p.scale(c))
    }

    pub fn neg(&self) -> IndexedTensor {
        self.map(|p| -p)
    }

    pub fn mul_poly(&self, f: &Poly) -> IndexedTensor {
        self.map(|p| p * f)
    }

    pub fn map<F: Fn(&Poly) -> Poly>(&self, f: F) -> IndexedTensor {
        IndexedTensor {
            n: self.n,
            nvars: self.nvars,
            slots: self.slots.clone(),
            comps: self.comps.iter().map(f).collect(),
        }
    }

    /// Exact partial derivative of every component along `x_var`.
    pub fn derivative(&self, var: usize) -> IndexedTensor {
        self.map(|p| p.derivative(var))
    }

    /// Components evaluated at a rational point, in slot-major order.
    pub fn eval(&self, point: &[Q]) -> Vec<Q> {
        self.comps.iter().map(|p| p.eval(point)).collect()
    }

    /// Contracts slot `i` against slot `j`; the remaining slots keep their
    /// relative order.
    pub fn contract(&self, i: usize, j: usize) -> Result<IndexedTensor> {
        if i == j || i >= self.rank() || j >= self.rank() {
            return Err(Error::Slot(format!("invalid contraction slots ({i}, {j})")));
        }
        if self.slots[i].dual() != self.slots[j] {
            return Err(Error::Slot(format!("cannot contract {} with {}", self.slots[i], self.slots[j])));
        }
        let keep: Vec<usize> = (0..self.rank()).filter(|&k| k != i && k != j).collect();
        let new_slots: Vec<Slot> = keep.iter().map(|&k| self.slots[k]).collect();
        let d = self.slots[i].dim(self.n);
        let mut full = vec![0; self.rank()];
        Ok(IndexedTensor::from_fn(self.n, self.nvars, &new_slots, |idx| {
            for (pos, &k) in keep.iter().enumerate() {
                full[k] = idx[pos];
            }
            let mut acc = Poly::zero(self.nvars);
            for s in 0..d {
                full[i] = s;
                full[j] = s;
                acc += self.get(&full);
            }
            acc
        }))
    }

    /// Reorders slots: slot `k` of the result is slot `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> IndexedTensor {
        assert_eq!(perm.len(), self.rank(), "permutation length mismatch");
        let new_slots: Vec<Slot> = perm.iter().map(|&k| self.slots[k]).collect();
        let mut old = vec![0; self.rank()];
        IndexedTensor::from_fn(self.n, self.nvars, &new_slots, |idx| {
            for (k, &p) in perm.iter().enumerate() {
                old[p] = idx[k];
            }
            self.get(&old).clone()
        })
    }

    /// Outer product; slots of `self` come first.
    pub fn outer(&self, other: &IndexedTensor) -> IndexedTensor {
        assert_eq!(self.nvars, other.nvars);
        let mut slots = self.slots.clone();
        slots.extend_from_slice(&other.slots);
        let mut comps = Vec::with_capacity(self.len() * other.len());
        for a in &self.comps {
            for b in &other.comps {
                comps.push(a * b);
            }
        }
        IndexedTensor { n: self.n, nvars: self.nvars, slots, comps }
    }

    /// Averages over all permutations of the given slots, with sign for
    /// [`SymMode::Alternate`].
    pub fn sym_ops(&self, group: &[usize], mode: SymMode) -> Result<IndexedTensor> {
        let Some(&first) = group.first() else {
            return Ok(self.clone());
        };
        if group.iter().any(|&k| k >= self.rank()) {
            return Err(Error::Slot(format!("slot group {group:?} out of range")));
        }
        if group.iter().any(|&k| self.slots[k] != self.slots[first]) {
            return Err(Error::Slot(format!("slot group {group:?} mixes kinds")));
        }
        let mut sorted = group.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != group.len() {
            return Err(Error::Slot(format!("slot group {group:?} repeats a slot")));
        }
        let perms = permutations(group.len());
        let count = Q::from_integer((perms.len() as i64).into());
        let mut out = IndexedTensor::zeros(self.n, self.nvars, &self.slots);
        let mut src = vec![0; self.rank()];
        for flat in 0..out.len() {
            let idx = out.multi_index(flat);
            let mut acc = Poly::zero(self.nvars);
            for (perm, sign) in &perms {
                src.copy_from_slice(&idx);
                for (a, &b) in perm.iter().enumerate() {
                    src[group[a]] = idx[group[b]];
                }
                let term = self.get(&src);
                if *sign < 0 && mode == SymMode::Alternate {
                    acc -= term;
                } else {
                    acc += term;
                }
            }
            out.comps[flat] = acc.scale(&(Q::from_integer(1.into()) / &count));
        }
        Ok(out)
    }

    pub fn symmetrize(&self, group: &[usize]) -> Result<IndexedTensor> {
        self.sym_ops(group, SymMode::Symmetrize)
    }

    pub fn alternate(&self, group: &[usize]) -> Result<IndexedTensor> {
        self.sym_ops(group, SymMode::Alternate)
    }

    /// Whether every component is a constant polynomial.
    pub fn is_constant(&self) -> bool {
        self.comps.iter().all(Poly::is_constant)
    }

    pub fn constant_values(&self) -> Vec<Q> {
        self.comps.iter().map(|p| p.constant_term()).collect()
    }

    /// Largest number of terms in any component; a cheap size measure.
    pub fn max_terms(&self) -> usize {
        self.comps.iter().map(Poly::num_terms).max().unwrap_or(0)
    }

    pub fn count_nonzero(&self) -> usize {
        self.comps.iter().filter(|p| !p.is_zero()).count()
    }
}

impl fmt::Debug for IndexedTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndexedTensor{:?} {{", self.slots)?;
        for (flat, p) in self.comps.iter().enumerate() {
            if !p.is_zero() {
                write!(f, " {:?}: {};", self.multi_index(flat), p)?;
            }
        }
        write!(f, " }}")
    }
}

/// All permutations of `0..k` with their signs.
fn permutations(k: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    heap(k, &mut cur, &mut out);
    out.into_iter()
        .map(|p| {
            let s = perm_sign(&p);
            (p, s)
        })
        .collect()
}

fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap(k - 1, cur, out);
        if k.is_multiple_of(2) {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}

fn perm_sign(p: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    const N: usize = 3;
    const NV: usize = 6;

    fn random_tensor(slots: &[Slot], seed: i64) -> IndexedTensor {
        let mut k = seed;
        IndexedTensor::from_fn(N, NV, slots, |_| {
            k = (k * 37 + 11) % 19;
            Poly::constant(NV, q(k - 9))
        })
    }

    #[test]
    fn kronecker_traces() {
        let de = IndexedTensor::delta(N, NV, Slot::EUp).contract(0, 1).unwrap();
        assert_eq!(de.components()[0], Poly::constant(NV, q(2)));
        let df = IndexedTensor::delta(N, NV, Slot::FUp).contract(0, 1).unwrap();
        assert_eq!(df.components()[0], Poly::constant(NV, q(N as i64)));
    }

    #[test]
    fn contraction_requires_dual_kinds() {
        let t = IndexedTensor::zeros(N, NV, &[Slot::EUp, Slot::FDown]);
        assert!(t.contract(0, 1).is_err());
    }

    #[test]
    fn symmetrized_alternation_vanishes() {
        let t = random_tensor(&[Slot::FUp, Slot::FUp, Slot::EDown], 3);
        let z = t.alternate(&[0, 1]).unwrap().symmetrize(&[0, 1]).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn alternation_over_three_e_slots_vanishes() {
        let t = random_tensor(&[Slot::EUp, Slot::EUp, Slot::EUp], 5);
        assert!(t.alternate(&[0, 1, 2]).unwrap().is_zero());
    }

    #[test]
    fn sym_ops_idempotent() {
        let t = random_tensor(&[Slot::FDown, Slot::EUp, Slot::FDown, Slot::FDown], 7);
        for mode in [SymMode::Symmetrize, SymMode::Alternate] {
            let once = t.sym_ops(&[0, 2, 3], mode).unwrap();
            let twice = once.sym_ops(&[0, 2, 3], mode).unwrap();
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn mixed_group_rejected() {
        let t = IndexedTensor::zeros(N, NV, &[Slot::EUp, Slot::FUp]);
        assert!(t.symmetrize(&[0, 1]).is_err());
    }

    #[test]
    fn commutator_of_vectors_symmetrizes_to_zero() {
        let u = random_tensor(&[Slot::FUp], 2);
        let v = random_tensor(&[Slot::FUp], 8);
        let w = u.outer(&v).sub(&v.outer(&u));
        assert!(w.symmetrize(&[0, 1]).unwrap().is_zero());
    }

    #[test]
    fn permute_round_trip() {
        let t = random_tensor(&[Slot::EUp, Slot::FDown, Slot::FUp], 4);
        let p = t.permute(&[2, 0, 1]);
        assert_eq!(p.slots(), &[Slot::FUp, Slot::EUp, Slot::FDown]);
        assert_eq!(p.permute(&[1, 2, 0]), t);
    }
}
