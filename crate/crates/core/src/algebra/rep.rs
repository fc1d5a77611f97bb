use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::mat::QMat;
use crate::error::{Error, Result};
use crate::rational::Q;

/// Fiber models of the tractor, cotractor and adjoint tractor bundles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rep {
    Standard,
    Dual,
    Adjoint,
}

impl Rep {
    pub fn dim(self, n: usize) -> usize {
        match self {
            Rep::Standard | Rep::Dual => n + 2,
            Rep::Adjoint => (n + 2) * (n + 2),
        }
    }
}

/// A vector of one of the fiber models. Adjoint vectors are stored as the
/// row-major entries of their matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepVector {
    rep: Rep,
    n: usize,
    comps: Vec<Q>,
}

impl RepVector {
    pub fn new(rep: Rep, n: usize, comps: Vec<Q>) -> Result<Self> {
        if comps.len() != rep.dim(n) {
            return Err(Error::Representation(format!(
                "{rep:?} vector for n={n} needs {} components, got {}",
                rep.dim(n),
                comps.len()
            )));
        }
        let v = RepVector { rep, n, comps };
        if rep == Rep::Adjoint && !v.as_matrix().trace().is_zero() {
            return Err(Error::Representation("adjoint vector is not traceless".into()));
        }
        Ok(v)
    }

    pub fn zero(rep: Rep, n: usize) -> Self {
        RepVector { rep, n, comps: vec![Q::zero(); rep.dim(n)] }
    }

    pub fn adjoint(m: &QMat) -> Result<Self> {
        RepVector::new(Rep::Adjoint, m.dim() - 2, m.entries().to_vec())
    }

    pub fn rep(&self) -> Rep {
        self.rep
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Q] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Zero::is_zero)
    }

    /// The adjoint matrix. Panics for the other representations.
    pub fn as_matrix(&self) -> QMat {
        assert_eq!(self.rep, Rep::Adjoint);
        QMat::from_entries(self.n + 2, self.comps.clone())
    }

    pub fn add(&self, other: &RepVector) -> RepVector {
        assert_eq!((self.rep, self.n), (other.rep, other.n));
        RepVector { rep: self.rep, n: self.n, comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &RepVector) -> RepVector {
        self.add(&other.scale(&-Q::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Q) -> RepVector {
        RepVector { rep: self.rep, n: self.n, comps: self.comps.iter().map(|a| a * c).collect() }
    }
}

/// The action of a Lie algebra element: matrix product on the standard
/// representation, negative transpose on the dual, commutator on the
/// adjoint.
pub fn act(element: &QMat, v: &RepVector) -> Result<RepVector> {
    if element.dim() != v.n + 2 {
        return Err(Error::Representation(format!(
            "element of sl({}) acting on a vector for n={}",
            element.dim(),
            v.n
        )));
    }
    let comps = match v.rep {
        Rep::Standard => element.apply(&v.comps),
        Rep::Dual => element.transpose().apply(&v.comps).into_iter().map(|c| -c).collect(),
        Rep::Adjoint => element.commutator(&v.as_matrix()).entries().to_vec(),
    };
    Ok(RepVector { rep: v.rep, n: v.n, comps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::graded::{build_graded_algebra, x_matrix, z_matrix, Grade};
    use crate::rational::{q, random_q};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_vec(rep: Rep, n: usize, rng: &mut ChaCha8Rng) -> RepVector {
        match rep {
            Rep::Adjoint => {
                let g = build_graded_algebra(n).unwrap();
                let m = &(&g.random_element(Grade::Minus, rng) + &g.random_element(Grade::Zero, rng))
                    + &g.random_element(Grade::Plus, rng);
                RepVector::adjoint(&m).unwrap()
            }
            _ => RepVector::new(rep, n, (0..n + 2).map(|_| random_q(rng, 9)).collect()).unwrap(),
        }
    }

    #[test]
    fn upper_right_block_kills_e_part() {
        let n = 3;
        let z = z_matrix(n, 1);
        let v = RepVector::new(Rep::Standard, n, vec![q(2), q(-1), q(0), q(0), q(0)]).unwrap();
        assert!(act(&z, &v).unwrap().is_zero());
        // Z^1 = E_{0,3}: (0, w) -> (w_1, 0, 0, ...)
        let w = RepVector::new(Rep::Standard, n, vec![q(0), q(0), q(4), q(5), q(6)]).unwrap();
        assert_eq!(act(&z, &w).unwrap().components(), &[q(5), q(0), q(0), q(0), q(0)]);
    }

    #[test]
    fn lower_block_on_dual_covector() {
        // X_0 = E_{2,0}: -X^T (0, μ) = (-μ_0, 0, 0, 0, 0)
        let n = 3;
        let v = RepVector::new(Rep::Dual, n, vec![q(0), q(0), q(7), q(1), q(1)]).unwrap();
        let out = act(&x_matrix(n, 0), &v).unwrap();
        assert_eq!(out.components(), &[q(-7), q(0), q(0), q(0), q(0)]);
    }

    #[test]
    fn action_respects_brackets() {
        let n = 3;
        let g = build_graded_algebra(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for rep in [Rep::Standard, Rep::Dual, Rep::Adjoint] {
            for _ in 0..10 {
                let a = g.random_element(Grade::Zero, &mut rng);
                let b = &g.random_element(Grade::Plus, &mut rng) + &g.random_element(Grade::Minus, &mut rng);
                let v = random_vec(rep, n, &mut rng);
                let lhs = act(&a.commutator(&b), &v).unwrap();
                let rhs = act(&a, &act(&b, &v).unwrap()).unwrap().sub(&act(&b, &act(&a, &v).unwrap()).unwrap());
                assert_eq!(lhs, rhs, "{rep:?}");
            }
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let v = RepVector::zero(Rep::Standard, 4);
        assert!(act(&z_matrix(3, 0), &v).is_err());
        assert!(RepVector::new(Rep::Dual, 3, vec![q(1)]).is_err());
    }
}
