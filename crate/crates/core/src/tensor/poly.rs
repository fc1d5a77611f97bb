//! Exact multivariate polynomials over the rationals.
//!
//! A [`Poly`] is a sparse map from exponent vectors to nonzero rational
//! coefficients. Terms are kept in degree-lexicographic order, so two equal
//! polynomials always have identical term sequences and serialize
//! identically.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_q, Q};

/// Largest supported variable count (`2n` with `n <= 6`).
pub const MAX_VARS: usize = 12;

/// Default bound on total degree enforced by the checked operations.
pub const DEFAULT_DEGREE_CAP: u32 = 12;

/// An exponent vector. Unused trailing slots stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::default();
        m.exps[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u8]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many exponents");
        let mut m = Self::default();
        m.exps[..exps.len()].copy_from_slice(exps);
        m
    }

    pub fn exponent(&self, i: usize) -> u8 {
        self.exps[i]
    }

    pub fn exponents(&self, nvars: usize) -> &[u8] {
        &self.exps[..nvars]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (o, e) in out.exps.iter_mut().zip(other.exps.iter()) {
            *o = o.checked_add(*e).expect("exponent overflow");
        }
        out
    }

    /// All monomials in `nvars` variables of total degree `<= degree`, in
    /// ascending degree-lexicographic order.
    pub fn all_up_to(nvars: usize, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in 0..=degree {
            let mut cur = [0u8; MAX_VARS];
            collect_exact(nvars, 0, d, &mut cur, &mut out);
        }
        out.sort();
        out
    }
}

fn collect_exact(nvars: usize, pos: usize, remaining: u32, cur: &mut [u8; MAX_VARS], out: &mut Vec<Monomial>) {
    if pos + 1 == nvars || nvars == 0 {
        if nvars > 0 {
            cur[pos] = remaining as u8;
            out.push(Monomial { exps: *cur });
            cur[pos] = 0;
        } else if remaining == 0 {
            out.push(Monomial::default());
        }
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e as u8;
        collect_exact(nvars, pos + 1, remaining - e, cur, out);
    }
    cur[pos] = 0;
}

impl Ord for Monomial {
    // graded, then lexicographic with x0 most significant
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

/// A polynomial in `nvars` variables with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables supported");
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Q::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        Poly::term(nvars, Monomial::var(i), Q::one())
    }

    pub fn term(nvars: usize, m: Monomial, c: Q) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Q)>,
    {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    /// Exact partial derivative with respect to `x_var`.
    pub fn derivative(&self, var: usize) -> Poly {
        assert!(var < self.nvars, "variable index out of range");
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps[var];
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            dm.exps[var] -= 1;
            out.add_term(dm, c * Q::from_integer(e.into()));
        }
        out
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps[..self.nvars].iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.same_ring(other)?;
        Ok(self + other)
    }

    /// Product with the degree cap enforced; `op` names the calling chain
    /// for the error message.
    pub fn checked_mul(&self, other: &Poly, cap: u32, op: &str) -> Result<Poly> {
        self.same_ring(other)?;
        let degree = self.degree() + other.degree();
        if !self.is_zero() && !other.is_zero() && degree > cap {
            return Err(Error::DegreeCap { op: op.to_string(), degree, cap });
        }
        Ok(self * other)
    }

    /// Fails if the degree exceeds `cap`.
    pub fn check_degree(&self, cap: u32, op: &str) -> Result<()> {
        let degree = self.degree();
        if degree > cap {
            return Err(Error::DegreeCap { op: op.to_string(), degree, cap });
        }
        Ok(())
    }

    fn same_ring(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_q(c))?;
            for (i, &e) in m.exps[..self.nvars].iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c);
        }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    fn x(i: usize) -> Poly {
        Poly::var(2, i)
    }

    #[test]
    fn derivative_of_monomial() {
        // d/dx1 (x1^2 x2) = 2 x1 x2
        let p = &(&x(0) * &x(0)) * &x(1);
        let expected = (&x(0) * &x(1)).scale(&q(2));
        assert_eq!(p.derivative(0), expected);
    }

    #[test]
    fn difference_of_squares() {
        let one = Poly::one(2);
        let p = &(&x(0) + &one) * &(&x(0) - &one);
        let expected = &(&x(0) * &x(0)) - &one;
        assert_eq!(p, expected);
    }

    #[test]
    fn evaluation_at_rational_point() {
        // 3 x1 x2 + 1/2 at (2, 1/3) = 5/2
        let p = &(&x(0) * &x(1)).scale(&q(3)) + &Poly::constant(2, q_frac(1, 2));
        assert_eq!(p.eval(&[q(2), q_frac(1, 3)]), q_frac(5, 2));
    }

    #[test]
    fn degree_cap_is_enforced() {
        let p = Poly::var(2, 0);
        let mut acc = Poly::one(2);
        for _ in 0..3 {
            acc = acc.checked_mul(&p, 3, "test").unwrap();
        }
        let err = acc.checked_mul(&p, 3, "power chain").unwrap_err();
        assert!(err.to_string().contains("power chain"));
    }

    #[test]
    fn mismatched_rings_rejected() {
        let a = Poly::var(2, 0);
        let b = Poly::var(3, 0);
        assert!(matches!(a.checked_add(&b), Err(Error::NvarsMismatch { .. })));
    }

    #[test]
    fn monomial_enumeration_counts() {
        // C(6 + 2, 2) = 28 monomials of degree <= 2 in 6 variables
        let ms = Monomial::all_up_to(6, 2);
        assert_eq!(ms.len(), 28);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(ms[0], Monomial::one());
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = &x(0) - &x(0);
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }
}
