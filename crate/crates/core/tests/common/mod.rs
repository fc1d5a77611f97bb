#![allow(dead_code)]

use agtractor::rational::q;
use agtractor::weyl::{apply_upsilon, upsilon_from_fn, ChartWeylData, Shear, Soldering, UpsilonForm};
use agtractor::Poly;

pub const N: usize = 3;
pub const NV: usize = 6;

pub fn var(i: usize) -> Poly {
    Poly::var(NV, i)
}

pub fn cst(v: i64) -> Poly {
    Poly::constant(NV, q(v))
}

pub fn sheared(shears: Vec<Shear>) -> ChartWeylData {
    let f = ChartWeylData::flat(N).unwrap();
    let s = Soldering::from_shears(N, shears).unwrap();
    ChartWeylData::new(N, s, f.gamma_e().to_vec(), f.gamma_f().to_vec(), f.rho().clone()).unwrap()
}

pub fn shear(row: usize, col: usize, entry: Poly) -> Shear {
    Shear { row, col, entry }
}

/// A constant `Υ` with small integer entries.
pub fn const_upsilon() -> UpsilonForm {
    upsilon_from_fn(N, |i| cst(i[0] as i64 * 2 - i[1] as i64 + 1))
}

/// A polynomial `Υ`.
pub fn poly_upsilon() -> UpsilonForm {
    upsilon_from_fn(N, |i| &var(i[0] * N + i[1]) + &cst(i[1] as i64 - 1))
}

/// The flat model seen through a non-trivial Weyl structure.
pub fn flat_in_other_gauge() -> ChartWeylData {
    apply_upsilon(&ChartWeylData::flat(N).unwrap(), &poly_upsilon()).unwrap()
}
