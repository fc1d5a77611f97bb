//! Seeded verification suites over the built-in examples.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{
    block_codifferential, build_graded_algebra, check_block_codifferential, codifferential, Cochain, Rep,
};
use crate::bgg::{
    bgg_operator, bullet_cotractor, bullet_tractor, is_normal_solution, one_jet_injective, prolongation_correction,
    prolonged_cotractor_derivative, prolonged_tractor_derivative, solve_bgg_polynomial, split, split_cotractor,
    split_tractor, Bundle, Split,
};
use crate::error::{Error, Result};
use crate::examples::catalogue;
use crate::linalg::span_rref;
use crate::loci::{
    affine_zero_set, cotractor_covector, default_betas, induced_ag_structure, induced_projective_structure, jet_check,
    nowhere_vanishing_weyl_check, random_pairs, zero_locus_analysis,
};
use crate::rational::{q, random_q, Q};
use crate::report::{Status, VerificationReport};
use crate::tensor::{IndexedTensor, Monomial, Poly, Slot};
use crate::weyl::{
    apply_upsilon, check_n, check_normality, cotractor_derivative, curvature_blocks, curvature_matrices,
    curvature_via_sections, pair, resplit_cotractor, resplit_tractor, torsion, tractor_derivative, upsilon_from_fn,
    validate, verify_bianchi, verify_weyl_tensor_relations, ChartWeylData, CurvatureBlocks, NormalityDefects,
    UpsilonForm,
};

/// Number of seeded `Υ` per example in the invariance checks.
pub const UPSILON_SAMPLES: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Algebra,
    Weyl,
    Bgg,
    Loci,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Algebra => "algebra",
            Suite::Weyl => "weyl",
            Suite::Bgg => "bgg",
            Suite::Loci => "loci",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "algebra" => Ok(Suite::Algebra),
            "weyl" => Ok(Suite::Weyl),
            "bgg" => Ok(Suite::Bgg),
            "loci" => Ok(Suite::Loci),
            _ => Err(Error::parse("suite", format!("expected all, algebra, weyl, bgg or loci, got {s:?}"))),
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// A random polynomial with a few terms of degree `<= degree`.
pub fn random_poly<R: Rng + ?Sized>(nv: usize, degree: u32, terms: usize, rng: &mut R) -> Poly {
    let monos = Monomial::all_up_to(nv, degree);
    Poly::from_terms(nv, (0..terms).map(|_| (monos[rng.gen_range(0..monos.len())], random_q(rng, 9))))
}

/// A seeded polynomial `Υ` of degree `<= 2`.
pub fn random_upsilon<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UpsilonForm {
    upsilon_from_fn(n, |_| random_poly(2 * n, 2, 2, rng))
}

fn random_section<R: Rng + ?Sized>(n: usize, slot: Slot, rng: &mut R) -> IndexedTensor {
    IndexedTensor::from_fn(n, 2 * n, &[slot], |_| random_poly(2 * n, 2, 3, rng))
}

/// One check summarizing several reports: fails if any failed, is
/// inconclusive if any was, skipped if all were.
fn summarize(r: &mut VerificationReport, id: &str, parts: &[VerificationReport]) {
    let all: Vec<_> = parts.iter().flat_map(|p| &p.checks).collect();
    let total = all.len();
    if let Some(f) = all.iter().find(|c| c.status == Status::Fail) {
        let detail = format!("{}: {}", f.id, f.detail.clone().unwrap_or_default());
        r.fail(id, detail);
    } else if total > 0 && all.iter().all(|c| c.status == Status::Skipped) {
        r.skipped(id, all[0].detail.clone().unwrap_or_default());
    } else if let Some(c) = all.iter().find(|c| c.status == Status::Inconclusive) {
        r.inconclusive(id, format!("{}: {}", c.id, c.detail.clone().unwrap_or_default()));
    } else {
        r.pass(id);
    }
}

/// Appends per-example reports; an example that errored becomes one failing check.
fn collect_parts(
    r: &mut VerificationReport,
    module: &str,
    examples: &[(&str, ChartWeylData)],
    parts: Vec<Result<VerificationReport>>,
) {
    for (p, (name, _)) in parts.into_iter().zip(examples) {
        match p {
            Ok(p) => r.extend(p),
            Err(e) => r.fail(format!("{module}.{name}.error"), e.to_string()),
        }
    }
}

fn is_normal(data: &ChartWeylData) -> Result<bool> {
    Ok(NormalityDefects::of(&curvature_blocks(data)?)?.is_normal())
}

/// Runs a suite; the report is sorted by check id.
pub fn run_suite(suite: Suite, n: usize, seed: u64) -> Result<VerificationReport> {
    run_suite_capped(suite, n, seed, None)
}

/// As [`run_suite`], with every example's degree cap replaced by `cap`.
pub fn run_suite_capped(suite: Suite, n: usize, seed: u64, cap: Option<u32>) -> Result<VerificationReport> {
    check_n(n)?;
    let mut r = VerificationReport::new();
    if matches!(suite, Suite::All | Suite::Algebra) {
        r.extend(algebra_suite(n, seed)?);
    }
    if matches!(suite, Suite::All | Suite::Weyl) {
        r.extend(weyl_suite(n, cap)?);
    }
    if matches!(suite, Suite::All | Suite::Bgg) {
        r.extend(bgg_suite(n, seed, cap)?);
    }
    if matches!(suite, Suite::All | Suite::Loci) {
        r.extend(loci_suite(n, seed, cap)?);
    }
    r.sort();
    Ok(r)
}

fn capped(d: ChartWeylData, cap: Option<u32>) -> ChartWeylData {
    match cap {
        Some(c) => d.with_degree_cap(c),
        None => d,
    }
}

fn examples(n: usize, cap: Option<u32>) -> Result<Vec<(&'static str, ChartWeylData)>> {
    Ok(catalogue(n)?.into_iter().map(|(name, d)| (name, capped(d, cap))).collect())
}

/// The JSON document written by `verify`.
pub fn suite_report_json(suite: Suite, n: usize, seed: u64, report: &VerificationReport) -> Value {
    let body = report.to_json();
    json!({
        "suite": suite,
        "n": n,
        "seed": seed,
        "version": env!("CARGO_PKG_VERSION"),
        "summary": body["summary"],
        "checks": body["checks"],
    })
}

fn algebra_suite(n: usize, seed: u64) -> Result<VerificationReport> {
    let mut r = VerificationReport::new();
    let g = build_graded_algebra(n)?;
    for (name, ok) in g.check_invariants() {
        r.check(format!("algebra.graded.{name}"), ok, || "invariant violated".into());
    }
    for (k, rep) in [Rep::Standard, Rep::Dual, Rep::Adjoint].into_iter().enumerate() {
        let mut rng = rng_for(seed, 10 + k as u64);
        let mut bad = 0;
        for _ in 0..100 {
            let c = Cochain::random(n, 2, rep, &mut rng)?;
            if !codifferential(1, &codifferential(2, &c)?)?.is_zero() {
                bad += 1;
            }
        }
        let name = serde_json::to_value(rep)?.as_str().unwrap_or_default().to_string();
        r.check(format!("algebra.codiff.square_zero.{name}"), bad == 0, || format!("{bad} of 100 nonzero"));
    }
    let mut rng = rng_for(seed, 20);
    let blocks: Vec<CurvatureBlocks> = (0..50).map(|_| CurvatureBlocks::random(n, &mut rng)).collect();
    let bad = blocks
        .par_iter()
        .map(|k| block_codifferential(k).map(|b| !b.paths_agree()))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    r.check("algebra.codiff.block_paths_agree", bad == 0, || format!("{bad} of 50 random blocks disagree"));
    let z = block_codifferential(&CurvatureBlocks::zero(n, 2 * n))?;
    r.check("algebra.codiff.zero_curvature_normal", z.paths_agree() && z.is_normal(), || {
        "zero curvature not normal".into()
    });
    Ok(r)
}

fn weyl_example(name: &str, d: &ChartWeylData) -> Result<VerificationReport> {
    let mut r = VerificationReport::new();
    r.extend(validate(d));
    r.extend(check_normality(d)?);
    let blocks = curvature_blocks(d)?;
    let tau = torsion(d)?.tau;
    r.check("tau_block_equals_torsion", blocks.tau == tau, || "τ-block differs from the torsion".into());
    r.check("sections_match_structure_equations", curvature_via_sections(d)? == curvature_matrices(d), || {
        "curvature on sections differs from the structure equation".into()
    });
    r.extend(verify_bianchi(d)?);
    r.extend(verify_weyl_tensor_relations(d)?);
    r.extend(check_block_codifferential(&blocks)?.prefixed("codiff"));
    if !name.starts_with("flat") {
        r.check("torsion_nonzero", !tau.is_zero(), || "expected a curved example".into());
    }
    Ok(r.prefixed(&format!("weyl.{name}")))
}

fn weyl_suite(n: usize, cap: Option<u32>) -> Result<VerificationReport> {
    let examples = examples(n, cap)?;
    let parts: Vec<Result<VerificationReport>> = examples.par_iter().map(|(name, d)| weyl_example(name, d)).collect();
    let mut r = VerificationReport::new();
    collect_parts(&mut r, "weyl", &examples, parts);
    Ok(r)
}

/// `η = a + x·b` and `φ = a + x·m` families spanning the flat solutions.
pub fn flat_oracle(n: usize, bundle: Bundle) -> Vec<IndexedTensor> {
    let nv = 2 * n;
    let unit = |slot: Slot, f: &dyn Fn(usize) -> Poly| IndexedTensor::from_fn(n, nv, &[slot], |i| f(i[0]));
    let delta = |i: usize, k: usize| Poly::constant(nv, q((i == k) as i64));
    let mut out = Vec::new();
    match bundle {
        Bundle::Tractor => {
            for k in 0..n {
                out.push(unit(Slot::FUp, &|i| delta(i, k)));
            }
            for b in 0..2 {
                out.push(unit(Slot::FUp, &|i| Poly::var(nv, pair(n, b, i))));
            }
        }
        Bundle::Cotractor => {
            for k in 0..2 {
                out.push(unit(Slot::EDown, &|i| delta(i, k)));
            }
            for m in 0..n {
                out.push(unit(Slot::EDown, &|i| Poly::var(nv, pair(n, i, m))));
            }
        }
    }
    out
}

fn span_of(sections: &[IndexedTensor], degree: u32) -> Vec<Vec<Q>> {
    let nv = sections.first().map_or(0, IndexedTensor::nvars);
    let monos = Monomial::all_up_to(nv, degree);
    let vecs: Vec<Vec<Q>> = sections.iter().map(|s| monos.iter().flat_map(|m| s.coefficients(m)).collect()).collect();
    let dim = vecs.first().map_or(0, Vec::len);
    span_rref(&vecs, dim)
}

fn flat_bgg(n: usize, cap: Option<u32>) -> Result<VerificationReport> {
    let d = capped(ChartWeylData::flat(n)?, cap);
    let corr = prolongation_correction(&d)?;
    let pt: Vec<Q> = (0..2 * n).map(|i| q(i as i64 % 3 - 1)).collect();
    let mut r = VerificationReport::new();
    for b in [Bundle::Tractor, Bundle::Cotractor] {
        let basis = solve_bgg_polynomial(&d, b, 2)?;
        let dim = basis.dimension();
        r.check(format!("bgg.flat.{b}.dimension"), dim == n + 2, || format!("dimension {dim}, expected {}", n + 2));
        let oracle = flat_oracle(n, b);
        r.check(format!("bgg.flat.{b}.oracle_span"), span_of(&basis.basis, 2) == span_of(&oracle, 2), || {
            "solution span differs from the closed-form family".into()
        });
        r.check(format!("bgg.flat.{b}.one_jet_injective"), one_jet_injective(&d, &basis.basis, &pt)?, || {
            "1-jet map not injective".into()
        });
        let mut bad = 0;
        for s in &basis.basis {
            let parallel = match split(&d, s)? {
                Split::Tractor(l) => prolonged_tractor_derivative(&d, &corr, &l)?.is_zero(),
                Split::Cotractor(l) => prolonged_cotractor_derivative(&d, &corr, &l)?.is_zero(),
            };
            bad += usize::from(!parallel);
        }
        r.check(format!("bgg.flat.{b}.prolongation_parallel"), bad == 0, || format!("{bad} solutions not parallel"));
    }
    Ok(r)
}

/// Υ-invariance of splittings and `D` under [`UPSILON_SAMPLES`] seeded polynomial `Υ`.
pub fn upsilon_invariance(name: &str, d: &ChartWeylData, seed: u64, stream: u64) -> Result<VerificationReport> {
    let n = d.n();
    let mut rng = rng_for(seed, stream);
    let mut bad = Vec::new();
    let mut capped = 0;
    for k in 0..UPSILON_SAMPLES {
        let u = random_upsilon(n, &mut rng);
        let eta = random_section(n, Slot::FUp, &mut rng);
        let phi = random_section(n, Slot::EDown, &mut rng);
        let dh = match apply_upsilon(d, &u) {
            Ok(dh) => dh,
            Err(Error::DegreeCap { .. }) => {
                capped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let ok = split_tractor(&dh, &eta)? == resplit_tractor(&u, &split_tractor(d, &eta)?)
            && split_cotractor(&dh, &phi)? == resplit_cotractor(&u, &split_cotractor(d, &phi)?)
            && bgg_operator(&dh, &eta)? == bgg_operator(d, &eta)?
            && bgg_operator(&dh, &phi)? == bgg_operator(d, &phi)?;
        if !ok {
            bad.push(k);
        }
    }
    let mut r = VerificationReport::new();
    let id = format!("bgg.{name}.upsilon_invariance");
    if capped == UPSILON_SAMPLES {
        r.inconclusive(id, "every sample exceeded the degree cap");
    } else {
        r.check(id, bad.is_empty() && capped == 0, || format!("failing samples {bad:?}, {capped} over the degree cap"));
    }
    Ok(r)
}

fn curved_bgg(name: &str, d: &ChartWeylData, seed: u64, stream: u64) -> Result<VerificationReport> {
    let n = d.n();
    let mut r = VerificationReport::new();
    r.extend(upsilon_invariance(name, d, seed, stream)?);
    if !is_normal(d)? {
        r.skipped(format!("bgg.{name}.prolongation"), "data not normal");
        return Ok(r);
    }
    let corr = prolongation_correction(d)?;
    let mut rng = rng_for(seed, stream + 1);
    let mut bullet_ok = true;
    for _ in 0..3 {
        let l = split_tractor(d, &random_section(n, Slot::FUp, &mut rng))?;
        let diff = prolonged_tractor_derivative(d, &corr, &l)?.sub(&tractor_derivative(d, &l)?);
        bullet_ok &= diff == bullet_tractor(&corr.phi.neg(), &l)?;
        let l = split_cotractor(d, &random_section(n, Slot::EDown, &mut rng))?;
        let diff = prolonged_cotractor_derivative(d, &corr, &l)?.sub(&cotractor_derivative(d, &l)?);
        bullet_ok &= diff == bullet_cotractor(&corr.psi, &l)?;
    }
    r.check(format!("bgg.{name}.prolongation_is_bullet"), bullet_ok, || {
        "prolongation differs from the bullet action".into()
    });
    let degree = if n == 3 { 2 } else { 1 };
    for b in [Bundle::Tractor, Bundle::Cotractor] {
        let basis = solve_bgg_polynomial(d, b, degree)?;
        let id = format!("bgg.{name}.{b}.solutions");
        if basis.basis.is_empty() {
            r.skipped(id, format!("no solutions of degree <= {degree}"));
            continue;
        }
        let mut problems = Vec::new();
        let mut normal = 0;
        for (k, s) in basis.basis.iter().enumerate() {
            let ns = is_normal_solution(d, s)?;
            let prolonged = match split(d, s)? {
                Split::Tractor(l) => prolonged_tractor_derivative(d, &corr, &l)?.is_zero(),
                Split::Cotractor(l) => prolonged_cotractor_derivative(d, &corr, &l)?.is_zero(),
            };
            if !(ns.solution && ns.consistent() && prolonged) {
                problems.push(k);
            }
            normal += usize::from(ns.normal);
        }
        let total = basis.dimension();
        r.check(id, problems.is_empty(), || format!("biconditional or prolongation fails for {problems:?}"));
        r.pass_with(format!("bgg.{name}.{b}.normal_count"), format!("{normal} of {total} basis solutions normal"));
    }
    Ok(r)
}

fn bgg_suite(n: usize, seed: u64, cap: Option<u32>) -> Result<VerificationReport> {
    let mut r = flat_bgg(n, cap)?;
    let examples = examples(n, cap)?;
    let parts: Vec<Result<VerificationReport>> =
        examples.par_iter().enumerate().map(|(k, (name, d))| curved_bgg(name, d, seed, 100 + 10 * k as u64)).collect();
    collect_parts(&mut r, "bgg", &examples, parts);
    Ok(r)
}

fn row0(n: usize) -> IndexedTensor {
    IndexedTensor::from_fn(n, 2 * n, &[Slot::FUp], |i| Poly::var(2 * n, pair(n, 0, i[0])))
}

fn col0(n: usize) -> IndexedTensor {
    IndexedTensor::from_fn(n, 2 * n, &[Slot::EDown], |i| Poly::var(2 * n, pair(n, i[0], 0)))
}

/// Zero-locus, jet, projective and AG checks for one vanishing solution.
fn vanishing_solution_checks(
    d: &ChartWeylData,
    s: &IndexedTensor,
    count: usize,
    seed: u64,
    stream: u64,
) -> Result<VerificationReport> {
    let n = d.n();
    let mut r = VerificationReport::new();
    let zs = affine_zero_set(s)?.ok_or_else(|| Error::Precondition("empty zero set".into()))?;
    let pts = zs.sample(count, seed.wrapping_add(stream));
    let z = zero_locus_analysis(d, s, &pts)?;
    let expected = z.expected_codimension;
    r.check("zero_locus", z.all_match() && z.codimension() == Some(expected) && pts.len() == count, || {
        format!("codimension {:?}, expected {expected}; all match: {}", z.codimension(), z.all_match())
    });
    summarize(&mut r, "jet", &[jet_check(d, s, &pts)?]);
    match Bundle::of_section(s)? {
        Bundle::Tractor => {
            let mut rng = rng_for(seed, stream + 1);
            let mut parts = Vec::new();
            for (k, x) in pts.iter().take(10).enumerate() {
                let kernel = &z.points[k].kernel;
                let pairs = random_pairs(kernel, 5, seed.wrapping_add(stream + k as u64));
                for u in
                    [upsilon_from_fn(n, |_| Poly::constant(2 * n, random_q(&mut rng, 9))), random_upsilon(n, &mut rng)]
                {
                    parts.push(induced_projective_structure(d, &u, s, x, &pairs)?);
                }
            }
            summarize(&mut r, "projective", &parts);
        }
        Bundle::Cotractor => {
            let mut parts = Vec::new();
            for x in pts.iter().take(10) {
                let mu = cotractor_covector(d, s, x)?;
                let (b1, b2) = default_betas(&mu)?;
                parts.push(induced_ag_structure(d, s, x, &b1, &b2)?);
            }
            summarize(&mut r, "ag", &parts);
        }
    }
    Ok(r)
}

fn loci_flat(n: usize, seed: u64, cap: Option<u32>) -> Result<VerificationReport> {
    let d = capped(ChartWeylData::flat(n)?, cap);
    let mut r = VerificationReport::new();
    r.extend(vanishing_solution_checks(&d, &row0(n), 20, seed, 200)?.prefixed("loci.flat.tractor"));
    r.extend(vanishing_solution_checks(&d, &col0(n), 20, seed, 300)?.prefixed("loci.flat.cotractor"));

    // nowhere-vanishing solutions: a constant one, and an affine one off its zero set
    let nv = 2 * n;
    let mut rng = rng_for(seed, 400);
    let c = IndexedTensor::from_fn(n, nv, &[Slot::FUp], |i| Poly::constant(nv, q(i[0] as i64 + 1)));
    let pts: Vec<Vec<Q>> = (0..5).map(|_| (0..nv).map(|_| random_q(&mut rng, 9)).collect()).collect();
    summarize(&mut r, "loci.flat.weyl.constant", &[nowhere_vanishing_weyl_check(&d, &c, &pts)?]);
    let affine = IndexedTensor::from_fn(n, nv, &[Slot::FUp], |i| {
        &Poly::constant(nv, q(i[0] as i64 + 1)) + &Poly::var(nv, pair(n, 1, i[0]))
    });
    let off: Vec<Vec<Q>> = pts.into_iter().filter(|x| affine.eval(x).iter().any(|v| *v != q(0))).collect();
    let wr = nowhere_vanishing_weyl_check(&d, &affine, &off)?;
    let pointwise =
        VerificationReport { checks: wr.checks.iter().filter(|c| c.id.starts_with("weyl.point.")).cloned().collect() };
    summarize(&mut r, "loci.flat.weyl.affine_pointwise", &[pointwise]);
    Ok(r)
}

/// The first degree-1 basis solution with a nonempty zero set.
fn vanishing_solution(d: &ChartWeylData, b: Bundle) -> Result<Option<IndexedTensor>> {
    let basis = solve_bgg_polynomial(d, b, 1)?;
    for s in basis.basis {
        if s.degree() == 1 && affine_zero_set(&s)?.is_some() {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

fn loci_curved(name: &str, d: &ChartWeylData, seed: u64, stream: u64) -> Result<VerificationReport> {
    let mut r = VerificationReport::new();
    for b in [Bundle::Tractor, Bundle::Cotractor] {
        let prefix = format!("loci.{name}.{b}");
        match vanishing_solution(d, b)? {
            Some(s) => r.extend(vanishing_solution_checks(d, &s, 10, seed, stream)?.prefixed(&prefix)),
            None => r.skipped(prefix, "no degree-1 solution with zeros"),
        }
    }
    Ok(r)
}

fn loci_suite(n: usize, seed: u64, cap: Option<u32>) -> Result<VerificationReport> {
    let mut r = loci_flat(n, seed, cap)?;
    let examples: Vec<_> = examples(n, cap)?.into_iter().filter(|(name, _)| *name != "flat").collect();
    let parts: Vec<Result<VerificationReport>> =
        examples.par_iter().enumerate().map(|(k, (name, d))| loci_curved(name, d, seed, 500 + 10 * k as u64)).collect();
    collect_parts(&mut r, "loci", &examples, parts);
    Ok(r)
}
