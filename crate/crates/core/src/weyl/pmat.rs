use std::fmt;

use crate::algebra::QMat;
use crate::rational::Q;
use crate::tensor::Poly;

/// A dense matrix of polynomials.
#[derive(Clone, PartialEq, Eq)]
pub struct PMat {
    rows: usize,
    cols: usize,
    nvars: usize,
    data: Vec<Poly>,
}

impl PMat {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        PMat { rows, cols, nvars, data: vec![Poly::zero(nvars); rows * cols] }
    }

    pub fn identity(dim: usize, nvars: usize) -> Self {
        let mut m = PMat::zeros(dim, dim, nvars);
        for i in 0..dim {
            m.set(i, i, Poly::one(nvars));
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Poly>(rows: usize, cols: usize, nvars: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PMat { rows, cols, nvars, data }
    }

    pub fn from_constant(m: &QMat, nvars: usize) -> Self {
        let d = m.dim();
        PMat::from_fn(d, d, nvars, |i, j| Poly::constant(nvars, m.get(i, j).clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Poly {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn degree(&self) -> u32 {
        self.data.iter().map(Poly::degree).max().unwrap_or(0)
    }

    pub fn trace(&self) -> Poly {
        let mut t = Poly::zero(self.nvars);
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    pub fn transpose(&self) -> PMat {
        PMat::from_fn(self.cols, self.rows, self.nvars, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &PMat) -> PMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PMat { data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(), ..self.clone_shape() }
    }

    pub fn sub(&self, other: &PMat) -> PMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PMat { data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(), ..self.clone_shape() }
    }

    pub fn scale(&self, c: &Q) -> PMat {
        PMat { data: self.data.iter().map(|a| a.scale(c)).collect(), ..self.clone_shape() }
    }

    pub fn mul_poly(&self, f: &Poly) -> PMat {
        PMat { data: self.data.iter().map(|a| a * f).collect(), ..self.clone_shape() }
    }

    pub fn mul(&self, other: &PMat) -> PMat {
        assert_eq!(self.cols, other.rows);
        let mut out = PMat::zeros(self.rows, other.cols, self.nvars);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &PMat) -> PMat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn derivative(&self, var: usize) -> PMat {
        PMat { data: self.data.iter().map(|a| a.derivative(var)).collect(), ..self.clone_shape() }
    }

    pub fn eval(&self, point: &[Q]) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).eval(point)).collect()).collect()
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> PMat {
        PMat::from_fn(rows, cols, self.nvars, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &PMat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(self.nvars);
                for (j, vj) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !vj.is_zero() {
                        acc += &(a * vj);
                    }
                }
                acc
            })
            .collect()
    }

    fn clone_shape(&self) -> PMat {
        PMat { rows: self.rows, cols: self.cols, nvars: self.nvars, data: Vec::new() }
    }
}

impl fmt::Debug for PMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
