//! Zero loci of first BGG solutions and the structures induced on them.
//!
//! Tangent vectors are given by frame components `ζ_A^{A'}`, flattened with
//! the pair index `p = A·n + A'`; `∇_ζ = ζ_A^{A'} ∇^A_{A'}`.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bgg::{bgg_operator, split, split_cotractor, split_tractor, Bundle, Split};
use crate::error::{Error, Result};
use crate::linalg::{basic_solution, det, kernel, span_rref};
use crate::rational::{format_q, random_q, Q};
use crate::report::VerificationReport;
use crate::tensor::{IndexedTensor, Monomial, Poly, Slot};
use crate::weyl::{
    apply_upsilon, covariant_derivative, pair, torsion, tractor_derivative, upsilon_from_fn, ChartWeylData, UpsilonForm,
};

fn qvec_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_q(x))).collect())
}

fn qmat_json(m: &[Vec<Q>]) -> Value {
    Value::Array(m.iter().map(|r| qvec_json(r)).collect())
}

/// `D s = 0` and `s ≠ 0`.
pub fn require_solution(data: &ChartWeylData, s: &IndexedTensor) -> Result<Bundle> {
    let bundle = Bundle::of_section(s)?;
    if s.is_zero() {
        return Err(Error::Precondition("the zero section is excluded".into()));
    }
    let d = bgg_operator(data, s)?;
    if !d.is_zero() {
        return Err(Error::Precondition(format!(
            "section is not a solution: D s has {} nonzero components",
            d.count_nonzero()
        )));
    }
    Ok(bundle)
}

fn check_point(data: &ChartWeylData, x: &[Q]) -> Result<()> {
    if x.len() != data.nvars() {
        return Err(Error::Precondition(format!("point has {} coordinates, expected {}", x.len(), data.nvars())));
    }
    Ok(())
}

fn eval_all(ps: &[Poly], x: &[Q]) -> Vec<Q> {
    ps.iter().map(|p| p.eval(x)).collect()
}

fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `(∇_p s^i)(x)` as a `k × 2n` matrix.
fn derivative_matrix(ds: &IndexedTensor, k: usize, x: &[Q]) -> Vec<Vec<Q>> {
    let vals = ds.eval(x);
    let np = vals.len() / k;
    (0..k).map(|i| (0..np).map(|p| vals[p * k + i].clone()).collect()).collect()
}

/// `ζ^p M_p` for a tensor `M` whose first two slots are the frame pair.
fn along(vals: &[Q], zeta: &[Q]) -> Vec<Q> {
    let rest = vals.len() / zeta.len();
    (0..rest).map(|j| zeta.iter().enumerate().fold(Q::zero(), |acc, (p, z)| acc + z * &vals[p * rest + j])).collect()
}

/// The pointwise orbit type of `L s`: open where `s(x) ≠ 0`, closed where
/// `s(x) = 0` but `L s(x) ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orbit {
    Open,
    Closed,
    /// `L s(x) = 0`; impossible for a nonzero solution.
    Degenerate,
}

fn orbit_of(s: &[Q], ls: &[Q]) -> Orbit {
    if !is_zero_vec(s) {
        Orbit::Open
    } else if !is_zero_vec(ls) {
        Orbit::Closed
    } else {
        Orbit::Degenerate
    }
}

/// At each point, `(s(x), ∇s(x)) ≠ 0` and `L s(x) ≠ 0`.
pub fn jet_check(data: &ChartWeylData, s: &IndexedTensor, points: &[Vec<Q>]) -> Result<VerificationReport> {
    require_solution(data, s)?;
    let ds = covariant_derivative(data, s)?;
    let ls = split(data, s)?;
    let mut r = VerificationReport::new();
    for (i, x) in points.iter().enumerate() {
        check_point(data, x)?;
        let sx = s.eval(x);
        let mut jet = sx.clone();
        jet.extend(ds.eval(x));
        r.check(format!("jet.{i:03}.one_jet_nonzero"), !is_zero_vec(&jet), || "s and ∇s both vanish".into());
        let lx = eval_all(&ls.to_vector(), x);
        let orbit = orbit_of(&sx, &lx);
        r.check(format!("jet.{i:03}.splitting_nonzero"), orbit != Orbit::Degenerate, || "L s vanishes".into());
    }
    r.sort();
    Ok(r)
}

/// The orbit type of `L s` at `x`.
pub fn orbit(data: &ChartWeylData, s: &IndexedTensor, x: &[Q]) -> Result<Orbit> {
    check_point(data, x)?;
    let ls = split(data, s)?;
    Ok(orbit_of(&s.eval(x), &eval_all(&ls.to_vector(), x)))
}

/// An affine subspace `base + span(directions)` of the chart.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSubspace {
    pub base: Vec<Q>,
    pub directions: Vec<Vec<Q>>,
}

impl AffineSubspace {
    /// `count` points with seeded random rational coordinates along the
    /// directions.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<Vec<Q>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let mut x = self.base.clone();
                for d in &self.directions {
                    let c = random_q(&mut rng, 9);
                    for (xi, di) in x.iter_mut().zip(d) {
                        *xi += &c * di;
                    }
                }
                x
            })
            .collect()
    }
}

/// `count` pairs of seeded random combinations of `basis`.
pub fn random_pairs(basis: &[Vec<Q>], count: usize, seed: u64) -> Vec<(Vec<Q>, Vec<Q>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = basis.first().map_or(0, Vec::len);
    let mut combo = || {
        let mut v = vec![Q::zero(); dim];
        for b in basis {
            let c = random_q(&mut rng, 9);
            for (x, y) in v.iter_mut().zip(b) {
                *x += &c * y;
            }
        }
        v
    };
    (0..count).map(|_| (combo(), combo())).collect()
}

/// The exact zero set of a section with components of degree `<= 1`;
/// `None` if it is empty.
pub fn affine_zero_set(s: &IndexedTensor) -> Result<Option<AffineSubspace>> {
    if s.degree() > 1 {
        return Err(Error::Precondition(format!(
            "closed-form zero sets need degree <= 1, section has degree {}",
            s.degree()
        )));
    }
    let nv = s.nvars();
    let rows: Vec<Vec<Q>> =
        s.components().iter().map(|c| (0..nv).map(|v| c.coeff(&Monomial::var(v))).collect()).collect();
    let rhs: Vec<Q> = s.components().iter().map(|c| -c.constant_term()).collect();
    let Some(base) = basic_solution(&rows, &rhs, nv) else {
        return Ok(None);
    };
    Ok(Some(AffineSubspace { base, directions: kernel(&rows, nv) }))
}

/// Data of one point of a zero locus.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroPoint {
    pub point: Vec<Q>,
    /// Rank of `ζ ↦ ∇_ζ s(x)`.
    pub rank: usize,
    /// Reduced-echelon basis of its kernel, in frame components.
    pub kernel: Vec<Vec<Q>>,
    /// Reduced-echelon basis of `ℓ_x ⊗ F_x` or `E*_x ⊗ F̃_x`.
    pub predicted: Vec<Vec<Q>>,
    /// The coordinate Jacobian kernel, moved to the frame, equals `kernel`.
    pub coordinate_kernel_agrees: bool,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroLocusReport {
    pub bundle: Bundle,
    pub expected_codimension: usize,
    pub points: Vec<ZeroPoint>,
}

impl ZeroLocusReport {
    /// The codimension shared by all points, if they agree.
    pub fn codimension(&self) -> Option<usize> {
        let first = self.points.first()?.rank;
        self.points.iter().all(|p| p.rank == first).then_some(first)
    }

    pub fn all_match(&self) -> bool {
        self.points.iter().all(|p| p.matches && p.coordinate_kernel_agrees)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "bundle": self.bundle,
            "expected_codimension": self.expected_codimension,
            "codimension": self.codimension(),
            "all_match": self.all_match(),
            "points": self.points.iter().map(|p| json!({
                "point": qvec_json(&p.point),
                "rank": p.rank,
                "kernel": qmat_json(&p.kernel),
                "predicted": qmat_json(&p.predicted),
                "coordinate_kernel_agrees": p.coordinate_kernel_agrees,
                "matches": p.matches,
            })).collect::<Vec<_>>(),
        })
    }
}

/// `ε(ξ, ·)_B = ε_{AB} ξ^A` with `ε_{01} = 1`.
fn area_contract(xi: &[Q]) -> [Q; 2] {
    [-xi[1].clone(), xi[0].clone()]
}

/// `λ ⊗ f` for `λ ∈ E*`, `f ∈ F`, flattened by the pair index.
fn decomposable(n: usize, lambda: &[Q], f: &[Q]) -> Vec<Q> {
    let mut v = vec![Q::zero(); 2 * n];
    for a in 0..2 {
        for ap in 0..n {
            v[pair(n, a, ap)] = &lambda[a] * &f[ap];
        }
    }
    v
}

fn unit(dim: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    v[i] = Q::from_integer(1.into());
    v
}

/// `ℓ ⊗ F` with `ℓ` spanned by `ε(ξ, ·)`.
pub fn tractor_tangent_model(n: usize, xi: &[Q]) -> Vec<Vec<Q>> {
    let lambda = area_contract(xi);
    let vs: Vec<Vec<Q>> = (0..n).map(|ap| decomposable(n, &lambda, &unit(n, ap))).collect();
    span_rref(&vs, 2 * n)
}

/// A basis of `F̃ = ker μ`.
pub fn f_tilde(mu: &[Q]) -> Vec<Vec<Q>> {
    kernel(&[mu.to_vec()], mu.len())
}

/// `E* ⊗ F̃` with `F̃ = ker μ`.
pub fn cotractor_tangent_model(n: usize, mu: &[Q]) -> Vec<Vec<Q>> {
    let mut vs = Vec::new();
    for u in f_tilde(mu) {
        for a in 0..2 {
            vs.push(decomposable(n, &unit(2, a), &u));
        }
    }
    span_rref(&vs, 2 * n)
}

/// `ζ^p = Σ_μ S⁻¹[p][μ](x) v^μ`
fn coords_to_frame(data: &ChartWeylData, x: &[Q], v: &[Q]) -> Vec<Q> {
    let si = data.soldering().inverse().eval(x);
    si.iter().map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (a, b)| acc + a * b)).collect()
}

fn analyse_point(
    data: &ChartWeylData,
    s: &IndexedTensor,
    ds: &IndexedTensor,
    ls: &Split,
    x: &[Q],
) -> Result<ZeroPoint> {
    let n = data.n();
    let nv = data.nvars();
    let k = s.len();
    let m = derivative_matrix(ds, k, x);
    let ker = kernel(&m, nv);
    let rank = nv - ker.len();
    let ker = span_rref(&ker, nv);
    let predicted = match ls {
        Split::Tractor(l) => tractor_tangent_model(n, &l.xi.eval(x)),
        Split::Cotractor(l) => cotractor_tangent_model(n, &l.mu.eval(x)),
    };
    let jac: Vec<Vec<Q>> = s.components().iter().map(|c| (0..nv).map(|v| c.derivative(v).eval(x)).collect()).collect();
    let moved: Vec<Vec<Q>> = kernel(&jac, nv).iter().map(|v| coords_to_frame(data, x, v)).collect();
    let coordinate_kernel_agrees = span_rref(&moved, nv) == ker;
    Ok(ZeroPoint {
        point: x.to_vec(),
        rank,
        matches: ker == predicted,
        kernel: ker,
        predicted,
        coordinate_kernel_agrees,
    })
}

/// Rank and kernel of `∇s(x)` at points of the zero set, compared with the
/// predicted tangent model. Points where `s(x) ≠ 0` are rejected.
pub fn zero_locus_analysis(data: &ChartWeylData, s: &IndexedTensor, points: &[Vec<Q>]) -> Result<ZeroLocusReport> {
    let bundle = require_solution(data, s)?;
    let ds = covariant_derivative(data, s)?;
    let ls = split(data, s)?;
    let mut out = Vec::with_capacity(points.len());
    for (i, x) in points.iter().enumerate() {
        check_point(data, x)?;
        if !is_zero_vec(&s.eval(x)) {
            return Err(Error::Precondition(format!("point {i} is not on the zero set")));
        }
        out.push(analyse_point(data, s, &ds, &ls, x)?);
    }
    let expected_codimension = match bundle {
        Bundle::Tractor => data.n(),
        Bundle::Cotractor => 2,
    };
    Ok(ZeroLocusReport { bundle, expected_codimension, points: out })
}

/// The pointwise target `Υ(s)`: `ξ` on the tractor side, `−μ` on the
/// cotractor side.
fn upsilon_target(ls: &Split) -> IndexedTensor {
    match ls {
        Split::Tractor(l) => l.xi.clone(),
        Split::Cotractor(l) => l.mu.neg(),
    }
}

/// `Υ(s)` as a tensor with slot of the target.
fn upsilon_applied(u: &UpsilonForm, s: &IndexedTensor) -> IndexedTensor {
    match s.slots()[0] {
        Slot::FUp => u.apply_f(s),
        _ => u.apply_e_star(s),
    }
}

/// A polynomial `Υ` of degree `<= degree` with `Υ(s)` equal to the target,
/// choosing a basic (few nonzero coefficients) solution.
fn polynomial_upsilon(
    data: &ChartWeylData,
    s: &IndexedTensor,
    target: &IndexedTensor,
    degree: u32,
) -> Option<UpsilonForm> {
    let n = data.n();
    let nv = data.nvars();
    let monos = Monomial::all_up_to(nv, degree);
    let nunk = 2 * n * monos.len();
    let unknown = |a: usize, ap: usize, mi: usize| mi * 2 * n + pair(n, a, ap);
    // images of each unknown, as tensors with the target's slot
    let mut rows_by_key: std::collections::BTreeMap<(Monomial, usize), Vec<(usize, Q)>> = Default::default();
    for a in 0..2 {
        for ap in 0..n {
            for (mi, m) in monos.iter().enumerate() {
                let u = upsilon_from_fn(n, |i| {
                    if i[0] == a && i[1] == ap {
                        Poly::term(nv, *m, Q::from_integer(1.into()))
                    } else {
                        Poly::zero(nv)
                    }
                });
                let img = upsilon_applied(&u, s);
                for (c, p) in img.components().iter().enumerate() {
                    for (mono, coef) in p.terms() {
                        rows_by_key.entry((*mono, c)).or_default().push((unknown(a, ap, mi), coef.clone()));
                    }
                }
            }
        }
    }
    for (c, p) in target.components().iter().enumerate() {
        for (mono, _) in p.terms() {
            rows_by_key.entry((*mono, c)).or_default();
        }
    }
    let mut rows = Vec::with_capacity(rows_by_key.len());
    let mut rhs = Vec::with_capacity(rows_by_key.len());
    for ((mono, c), entries) in rows_by_key {
        let mut row = vec![Q::zero(); nunk];
        for (j, v) in entries {
            row[j] += v;
        }
        rows.push(row);
        rhs.push(target.components()[c].coeff(&mono));
    }
    let x = basic_solution(&rows, &rhs, nunk)?;
    Some(upsilon_from_fn(n, |i| {
        Poly::from_terms(
            nv,
            monos
                .iter()
                .enumerate()
                .map(|(mi, m)| (*m, x[unknown(i[0], i[1], mi)].clone()))
                .filter(|(_, c)| !c.is_zero()),
        )
    }))
}

/// The pointwise `Υ(x)` supported on the first index where `s(x) ≠ 0`.
fn pointwise_upsilon(n: usize, nv: usize, sx: &[Q], tx: &[Q], tractor: bool) -> UpsilonForm {
    let j = sx.iter().position(|v| !v.is_zero()).expect("s(x) is nonzero");
    upsilon_from_fn(n, |i| {
        let (a, ap) = (i[0], i[1]);
        let v = if tractor && ap == j {
            &tx[a] / &sx[j]
        } else if !tractor && a == j {
            &tx[ap] / &sx[j]
        } else {
            Q::zero()
        };
        Poly::constant(nv, v)
    })
}

/// For a solution without zeros at the sample points: a Weyl structure
/// for which `s` is parallel. A polynomial `Υ` is searched first (an
/// inconclusive result if none exists within the degree bounds); at every
/// point the pointwise change is also verified.
pub fn nowhere_vanishing_weyl_check(
    data: &ChartWeylData,
    s: &IndexedTensor,
    points: &[Vec<Q>],
) -> Result<VerificationReport> {
    let bundle = require_solution(data, s)?;
    let n = data.n();
    let nv = data.nvars();
    for (i, x) in points.iter().enumerate() {
        check_point(data, x)?;
        if is_zero_vec(&s.eval(x)) {
            return Err(Error::Precondition(format!("s vanishes at point {i}")));
        }
    }
    let ls = split(data, s)?;
    let target = upsilon_target(&ls);
    let mut r = VerificationReport::new();

    let max_deg = (target.degree() + 1).min(data.degree_cap().saturating_sub(s.degree()));
    let found = (0..=max_deg).find_map(|d| polynomial_upsilon(data, s, &target, d));
    match found {
        Some(u) => {
            let dh = apply_upsilon(data, &u)?;
            let d = covariant_derivative(&dh, s)?;
            r.check("weyl.polynomial.parallel", d.is_zero(), || "∇̂ s ≠ 0".into());
            let reset = match split(&dh, s)? {
                Split::Tractor(l) => l.xi.is_zero(),
                Split::Cotractor(l) => l.mu.is_zero(),
            };
            r.check("weyl.polynomial.splitting", reset, || "L s has a nonzero second slot".into());
        }
        None => r.inconclusive("weyl.polynomial.parallel", format!("no polynomial Upsilon of degree <= {max_deg}")),
    }
    for (i, x) in points.iter().enumerate() {
        let u = pointwise_upsilon(n, nv, &s.eval(x), &target.eval(x), bundle == Bundle::Tractor);
        let dh = apply_upsilon(data, &u)?;
        let d = covariant_derivative(&dh, s)?.eval(x);
        r.check(format!("weyl.point.{i:03}.parallel"), is_zero_vec(&d), || "∇̂ s(x) ≠ 0".into());
    }
    r.sort();
    Ok(r)
}

fn require_kernel(m: &[Vec<Q>], zeta: &[Q], what: &str) -> Result<()> {
    if zeta.len() != m.first().map_or(0, Vec::len) || m.iter().any(|row| !along(row, zeta)[0].is_zero()) {
        return Err(Error::Precondition(format!("{what} is not tangent to the zero locus")));
    }
    Ok(())
}

/// Coordinate components of a frame vector field `V^{B'}_B`.
fn to_coordinate_field(data: &ChartWeylData, v: &IndexedTensor) -> Vec<Poly> {
    let n = data.n();
    let s = data.soldering().matrix();
    (0..data.nvars())
        .map(|mu| {
            let mut acc = Poly::zero(data.nvars());
            for p in 0..2 * n {
                let c = s.get(mu, p);
                if !c.is_zero() {
                    acc += &(c * v.get(&[p % n, p / n]));
                }
            }
            acc
        })
        .collect()
}

/// The field `ε(ξ, ·) ⊗ f` with constant `f`, whose value at `x` is the
/// tangent vector `ζ`.
fn tangent_extension(data: &ChartWeylData, alpha: &IndexedTensor, alpha_x: &[Q], zeta: &[Q]) -> IndexedTensor {
    let n = data.n();
    let b0 = alpha_x.iter().position(|v| !v.is_zero()).expect("α(x) ≠ 0");
    let f: Vec<Q> = (0..n).map(|ap| &zeta[pair(n, b0, ap)] / &alpha_x[b0]).collect();
    IndexedTensor::from_fn(n, data.nvars(), &[Slot::FUp, Slot::EDown], |i| alpha.get(&[i[1]]).scale(&f[i[0]]))
}

/// Frame components of `∇_ζ V` at `x`, flattened by pair index.
fn derivative_along(data: &ChartWeylData, v: &IndexedTensor, x: &[Q], zeta: &[Q]) -> Result<Vec<Q>> {
    let n = data.n();
    let d = along(&covariant_derivative(data, v)?.eval(x), zeta);
    // d is indexed (B', B); reorder to p = pair(B, B')
    Ok((0..2 * n).map(|p| d[(p % n) * 2 + p / n].clone()).collect())
}

fn in_span(basis: &[Vec<Q>], v: &[Q]) -> bool {
    let mut with = basis.to_vec();
    with.push(v.to_vec());
    span_rref(&with, v.len()) == span_rref(basis, v.len())
}

/// `T(ξ₁, ξ₂) = ∇_{ξ₁}ξ₂ − ∇_{ξ₂}ξ₁ − [ξ₁, ξ₂]` at `x` for vector fields
/// `e1`, `e2` with values `z1`, `z2` there.
fn field_torsion(
    data: &ChartWeylData,
    e1: &IndexedTensor,
    e2: &IndexedTensor,
    x: &[Q],
    z1: &[Q],
    z2: &[Q],
) -> Result<Vec<Q>> {
    let nv = data.nvars();
    let c12 = derivative_along(data, e2, x, z1)?;
    let c21 = derivative_along(data, e1, x, z2)?;
    let v1 = to_coordinate_field(data, e1);
    let v2 = to_coordinate_field(data, e2);
    let bracket: Vec<Q> = (0..nv)
        .map(|mu| {
            (0..nv).fold(Q::zero(), |acc, nu| {
                acc + v1[nu].eval(x) * v2[mu].derivative(nu).eval(x) - v2[nu].eval(x) * v1[mu].derivative(nu).eval(x)
            })
        })
        .collect();
    let bracket = coords_to_frame(data, x, &bracket);
    Ok((0..nv).map(|p| &c12[p] - &c21[p] - &bracket[p]).collect())
}

/// `τ(ζ₁, ζ₂)` from the components `τ^A_{A'}{}^B_{B'}{}^{C'}_C` at a point,
/// flattened by pair index.
fn tau_on(n: usize, tau: &[Q], z1: &[Q], z2: &[Q]) -> Vec<Q> {
    let vlen = 2 * n;
    let mut out = vec![Q::zero(); vlen];
    for p in 0..vlen {
        for q in 0..vlen {
            let w = &z1[p] * &z2[q];
            if w.is_zero() {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                let (cc, cp) = (c / n, c % n);
                *o += &w * &tau[(p * vlen + q) * vlen + cp * 2 + cc];
            }
        }
    }
    out
}

/// Checks of the projective structure induced on the zero locus `N` of a
/// tractor-side solution `η`, comparing the Weyl structures `data` and
/// `data` changed by `upsilon`. `pairs` are pairs of tangent vectors at `x`.
pub fn induced_projective_structure(
    data: &ChartWeylData,
    upsilon: &UpsilonForm,
    eta: &IndexedTensor,
    x: &[Q],
    pairs: &[(Vec<Q>, Vec<Q>)],
) -> Result<VerificationReport> {
    if require_solution(data, eta)? != Bundle::Tractor {
        return Err(Error::Precondition("the projective structure needs a tractor-side solution".into()));
    }
    check_point(data, x)?;
    if !is_zero_vec(&eta.eval(x)) {
        return Err(Error::Precondition("point is not on the zero set".into()));
    }
    let n = data.n();
    let nv = data.nvars();
    let dm = derivative_matrix(&covariant_derivative(data, eta)?, n, x);
    for (z1, z2) in pairs {
        require_kernel(&dm, z1, "tangent vector")?;
        require_kernel(&dm, z2, "tangent vector")?;
    }
    let other = apply_upsilon(data, upsilon)?;
    let l = split_tractor(data, eta)?;
    let tangent = tractor_tangent_model(n, &l.xi.eval(x));
    let alpha = IndexedTensor::from_fn(n, nv, &[Slot::EDown], |i| {
        if i[0] == 0 {
            l.xi.get(&[1]).scale(&Q::from_integer((-1).into()))
        } else {
            l.xi.get(&[0]).clone()
        }
    });
    let alpha_x = alpha.eval(x);
    let xi_x = l.xi.eval(x);
    let dl = tractor_derivative(data, &l)?;
    let (dl_eta, dl_xi) = (dl.eta.eval(x), dl.xi.eval(x));
    let dalpha = covariant_derivative(data, &alpha)?.eval(x);
    let ux = upsilon.tensor().eval(x);
    let pairing = |z: &[Q]| z.iter().zip(&ux).fold(Q::zero(), |acc, (a, b)| acc + a * b);
    let tau = torsion(data)?.tau.eval(x);
    let vlen = 2 * n;

    let mut r = VerificationReport::new();
    for (i, (z1, z2)) in pairs.iter().enumerate() {
        let id = |what: &str| format!("projective.{i:03}.{what}");
        let mut restricted = along(&dl_eta, z1);
        restricted.extend(along(&dl_xi, z1));
        r.check(id("restriction"), is_zero_vec(&restricted), || "∇_ζ(Lη)(x) ≠ 0".into());
        let da = along(&dalpha, z1);
        let preserved = da.iter().zip(&xi_x).fold(Q::zero(), |acc, (a, b)| acc + a * b);
        r.check(id("line_preserved"), preserved.is_zero(), || format!("(∇_ζ α)(Lη) = {}", format_q(&preserved)));

        let e1 = tangent_extension(data, &alpha, &alpha_x, z1);
        let e2 = tangent_extension(data, &alpha, &alpha_x, z2);
        let c1 = derivative_along(data, &e2, x, z1)?;
        let c2 = derivative_along(&other, &e2, x, z1)?;
        r.check(id("connection_tangent"), in_span(&tangent, &c1) && in_span(&tangent, &c2), || {
            "∇_{ξ₁}ξ₂ leaves ℓ⊗F".into()
        });
        let expected: Vec<Q> = (0..vlen).map(|p| &pairing(z1) * &z2[p] + &pairing(z2) * &z1[p]).collect();
        let diff: Vec<Q> = c2.iter().zip(&c1).map(|(a, b)| a - b).collect();
        r.check(id("projective_difference"), diff == expected, || {
            format!("difference {:?} expected {:?}", qvec_json(&diff), qvec_json(&expected))
        });

        let induced = field_torsion(data, &e1, &e2, x, z1, z2)?;
        let restricted_tau = tau_on(n, &tau, z1, z2);
        r.check(id("torsion"), induced == restricted_tau, || {
            format!("induced {:?} vs τ {:?}", qvec_json(&induced), qvec_json(&restricted_tau))
        });
    }
    r.sort();
    Ok(r)
}

/// The AG data induced at a point of the zero locus of a cotractor-side
/// solution.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedAg {
    /// `μ = (Lφ)(x)` restricted to `F`.
    pub mu: Vec<Q>,
    /// A basis `u_1, …, u_{n−1}` of `F̃ = ker μ`.
    pub f_tilde: Vec<Vec<Q>>,
    /// `u_1 ∧ … ∧ u_{n−1} ∧ β₀` in units of `f_0 ∧ … ∧ f_{n−1}`.
    pub wedge: Q,
}

impl InducedAg {
    /// `e^0 ∧ e^1 ↦ c · u_1 ∧ … ∧ u_{n−1}`: the coefficient `c` of the
    /// composite `Λ²E* ≅ Λ^n F ≅ Λ^{n−1}F̃`, given the standard volume
    /// identification in the frame.
    pub fn composite(&self) -> Option<Q> {
        (!self.wedge.is_zero()).then(|| Q::from_integer(1.into()) / &self.wedge)
    }
}

/// `μ` at `x`, after checking that `φ` is a cotractor-side solution
/// vanishing at `x`.
pub fn cotractor_covector(data: &ChartWeylData, phi: &IndexedTensor, x: &[Q]) -> Result<Vec<Q>> {
    if require_solution(data, phi)? != Bundle::Cotractor {
        return Err(Error::Precondition("the induced AG structure needs a cotractor-side solution".into()));
    }
    check_point(data, x)?;
    if !is_zero_vec(&phi.eval(x)) {
        return Err(Error::Precondition("point is not on the zero set".into()));
    }
    Ok(split_cotractor(data, phi)?.mu.eval(x))
}

/// The map `Λ^{n−1}F̃ → Λ^n F, w ↦ w ∧ β₀` on the basis element of
/// `Λ^{n−1}F̃`. Requires `⟨μ, β₀⟩ = 1`.
pub fn ag_isomorphism(mu: &[Q], beta0: &[Q]) -> Result<InducedAg> {
    let n = mu.len();
    if beta0.len() != n {
        return Err(Error::Precondition(format!("β₀ has {} components, expected {n}", beta0.len())));
    }
    let p = mu.iter().zip(beta0).fold(Q::zero(), |acc, (a, b)| acc + a * b);
    if p != Q::from_integer(1.into()) {
        return Err(Error::Precondition(format!("⟨μ, β₀⟩ = {}, expected 1", format_q(&p))));
    }
    let ft = f_tilde(mu);
    // columns u_1, …, u_{n−1}, β₀
    let m: Vec<Vec<Q>> =
        (0..n).map(|row| ft.iter().map(|u| u[row].clone()).chain([beta0[row].clone()]).collect()).collect();
    Ok(InducedAg { mu: mu.to_vec(), wedge: det(&m), f_tilde: ft })
}

/// Two admissible choices of `β₀`: a scaled basis vector, and that plus
/// the first vector of `F̃`.
pub fn default_betas(mu: &[Q]) -> Result<(Vec<Q>, Vec<Q>)> {
    let j = mu.iter().position(|v| !v.is_zero()).ok_or_else(|| Error::Precondition("μ vanishes: L φ(x) = 0".into()))?;
    let mut b = vec![Q::zero(); mu.len()];
    b[j] = Q::from_integer(1.into()) / &mu[j];
    let mut b2 = b.clone();
    if let Some(u) = f_tilde(mu).first() {
        for (x, y) in b2.iter_mut().zip(u) {
            *x += y;
        }
    }
    Ok((b, b2))
}

/// Checks of the AG structure of type `(2, n−1)` induced on the zero locus
/// of a cotractor-side solution: the wedge map is an isomorphism, does not
/// depend on `β₀`, the composite with the volume identification is
/// nondegenerate, and the tangent space is `E* ⊗ F̃`.
pub fn induced_ag_structure(
    data: &ChartWeylData,
    phi: &IndexedTensor,
    x: &[Q],
    beta0: &[Q],
    beta0_alt: &[Q],
) -> Result<VerificationReport> {
    let n = data.n();
    let mu = cotractor_covector(data, phi, x)?;
    let a = ag_isomorphism(&mu, beta0)?;
    let b = ag_isomorphism(&mu, beta0_alt)?;
    let mut r = VerificationReport::new();
    r.check("ag.f_tilde_dimension", a.f_tilde.len() == n - 1, || format!("dim F̃ = {}", a.f_tilde.len()));
    r.check("ag.isomorphism", !a.wedge.is_zero(), || "w ∧ β₀ = 0".into());
    r.check("ag.beta_independent", a.wedge == b.wedge, || format!("{} vs {}", format_q(&a.wedge), format_q(&b.wedge)));
    r.check("ag.volume_nondegenerate", a.composite().is_some(), || "composite is zero".into());
    let zl = zero_locus_analysis(data, phi, &[x.to_vec()])?;
    let pt = &zl.points[0];
    r.check("ag.tangent", pt.matches && pt.kernel.len() == 2 * (n - 1), || {
        format!("kernel dimension {}", pt.kernel.len())
    });
    r.sort();
    Ok(r)
}
