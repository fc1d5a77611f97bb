//! Exact rational scalars and their canonical text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

/// The exact scalar field used everywhere in the crate.
pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn q_one() -> Q {
    Q::one()
}

/// Formats as `"p/q"`, or `"p"` for integers.
pub fn format_q(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parses `"p/q"` or `"p"`; the denominator must be nonzero.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

/// A random rational `p/q` with `|p| <= bound` and `1 <= q <= bound`.
pub fn random_q<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Q {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound);
    q_frac(num, den)
}

/// Like [`random_q`] but never zero.
pub fn random_nonzero_q<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Q {
    loop {
        let v = random_q(rng, bound);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn abs_q(v: &Q) -> Q {
    v.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_round_trips() {
        for s in ["0", "-3", "5/2", "-7/9"] {
            assert_eq!(format_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(format_q(&parse_q("4/6").unwrap()), "2/3");
        assert!(parse_q("1/0").is_none());
        assert!(parse_q("x").is_none());
    }
}
