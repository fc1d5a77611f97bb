//! Built-in example charts.

use crate::error::Result;
use crate::rational::q;
use crate::tensor::Poly;
use crate::weyl::{apply_upsilon, normalize_rho, upsilon_from_fn, weylize, ChartWeylData, Shear, Soldering};

/// A shear `I + x-monomial · E_{row,col}`, the monomial given by its
/// variable indices (with repetition).
pub fn shear(n: usize, row: usize, col: usize, vars: &[usize]) -> Shear {
    let nv = 2 * n;
    let entry = vars.iter().fold(Poly::one(nv), |acc, &v| &acc * &Poly::var(nv, v));
    Shear { row, col, entry }
}

/// Flat connection data on a sheared soldering (not yet a Weyl structure).
pub fn sheared(n: usize, shears: Vec<Shear>) -> Result<ChartWeylData> {
    let f = ChartWeylData::flat(n)?;
    ChartWeylData::new(
        n,
        Soldering::from_shears(n, shears)?,
        f.gamma_e().to_vec(),
        f.gamma_f().to_vec(),
        f.rho().clone(),
    )
}

/// `sheared` followed by `weylize` and `normalize_rho`.
pub fn normal_sheared(n: usize, shears: Vec<Shear>) -> Result<ChartWeylData> {
    normalize_rho(&weylize(&sheared(n, shears)?)?)
}

/// n = 3, torsion with nonzero `tr(i_τ τ)` (its `Λ²E ⊗ Λ²F*` part vanishes
/// identically at n = 3).
pub fn flagship() -> Result<ChartWeylData> {
    normal_sheared(3, vec![shear(3, 3, 1, &[0]), shear(3, 5, 2, &[4])])
}

/// n = 4, where both parts of `tr(i_τ τ)` are nonzero.
pub fn flagship_n4() -> Result<ChartWeylData> {
    normal_sheared(4, vec![shear(4, 5, 1, &[4]), shear(4, 3, 7, &[5])])
}

/// n = 3, admitting cotractor-side solutions `φ` with
/// `tr(i_τ τ)^A_{A'}{}^B_{B'} φ_B ≠ 0`.
pub fn cotractor_example() -> Result<ChartWeylData> {
    normal_sheared(3, vec![shear(3, 3, 2, &[5]), shear(3, 5, 4, &[0, 1])])
}

/// n = 3, admitting tractor-side solutions `η` with
/// `tr(i_τ τ)^A_{A'}{}^B_{B'} η^{B'} ≠ 0`.
pub fn tractor_example() -> Result<ChartWeylData> {
    normal_sheared(3, vec![shear(3, 3, 1, &[0]), shear(3, 4, 3, &[5])])
}

/// n = 4, cotractor-side solutions against both parts of `tr(i_τ τ)`.
pub fn cotractor_example_n4() -> Result<ChartWeylData> {
    normal_sheared(4, vec![shear(4, 4, 5, &[2]), shear(4, 1, 0, &[7])])
}

/// n = 3, with harmonic torsion but `tr(i_τ τ) = 0`; normal solutions on both
/// sides.
pub fn single_shear() -> Result<ChartWeylData> {
    normal_sheared(3, vec![shear(3, 3, 1, &[0])])
}

/// The flat model in a non-trivial Weyl structure.
pub fn flat_regauged(n: usize) -> Result<ChartWeylData> {
    let nv = 2 * n;
    let u = upsilon_from_fn(n, |i| {
        &Poly::var(nv, (i[0] * n + i[1] + 1) % nv) + &Poly::constant(nv, q(i[1] as i64 - i[0] as i64))
    });
    apply_upsilon(&ChartWeylData::flat(n)?, &u)
}

/// The named examples used by the verification suites for a given `n`.
pub fn catalogue(n: usize) -> Result<Vec<(&'static str, ChartWeylData)>> {
    let mut out = vec![("flat", ChartWeylData::flat(n)?), ("flat_regauged", flat_regauged(n)?)];
    match n {
        3 => {
            out.push(("flagship", flagship()?));
            out.push(("single_shear", single_shear()?));
            out.push(("tractor_example", tractor_example()?));
            out.push(("cotractor_example", cotractor_example()?));
        }
        4 => {
            out.push(("flagship_n4", flagship_n4()?));
            out.push(("cotractor_example_n4", cotractor_example_n4()?));
        }
        _ => out.push(("sheared", normal_sheared(n, vec![shear(n, n, 1, &[0]), shear(n, 2 * n - 1, 2, &[n + 1])])?)),
    }
    Ok(out)
}
