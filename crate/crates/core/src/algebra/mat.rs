use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{format_q, Q};

/// A dense square rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMat {
    dim: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zeros(dim: usize) -> Self {
        QMat { dim, data: vec![Q::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = QMat::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = QMat::zeros(dim);
        m.set(i, j, Q::one());
        m
    }

    pub fn from_rows(rows: &[Vec<Q>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        QMat { dim, data: rows.iter().flatten().cloned().collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn from_entries(dim: usize, data: Vec<Q>) -> Self {
        assert_eq!(data.len(), dim * dim);
        QMat { dim, data }
    }

    pub fn trace(&self) -> Q {
        (0..self.dim).fold(Q::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, c: &Q) -> QMat {
        QMat { dim: self.dim, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn commutator(&self, other: &QMat) -> QMat {
        &(self * other) - &(other * self)
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim).map(|i| (0..self.dim).fold(Q::zero(), |acc, j| acc + self.get(i, j) * &v[j])).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl Add for &QMat {
    type Output = QMat;
    fn add(self, rhs: &QMat) -> QMat {
        QMat { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &QMat {
    type Output = QMat;
    fn sub(self, rhs: &QMat) -> QMat {
        QMat { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &QMat {
    type Output = QMat;
    fn neg(self) -> QMat {
        QMat { dim: self.dim, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl Mul for &QMat {
    type Output = QMat;
    fn mul(self, rhs: &QMat) -> QMat {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = QMat::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * d + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| format_q(self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
