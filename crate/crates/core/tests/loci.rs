mod common;

use agtractor::bgg::bgg_operator;
use agtractor::examples;
use agtractor::linalg::span_rref;
use agtractor::loci::*;
use agtractor::rational::{q, Q};
use agtractor::report::Status;
use agtractor::weyl::{covariant_derivative, pair, upsilon_from_fn, ChartWeylData, UpsilonForm};
use agtractor::{IndexedTensor, Poly, Slot};
use common::*;

fn flat(n: usize) -> ChartWeylData {
    ChartWeylData::flat(n).unwrap()
}

/// `η^{B'} = x^{B'}_0`
fn eta_row0(n: usize) -> IndexedTensor {
    IndexedTensor::from_fn(n, 2 * n, &[Slot::FUp], |i| Poly::var(2 * n, pair(n, 0, i[0])))
}

/// `φ_B = x^{0'}_B`
fn phi_col0(n: usize) -> IndexedTensor {
    IndexedTensor::from_fn(n, 2 * n, &[Slot::EDown], |i| Poly::var(2 * n, pair(n, i[0], 0)))
}

fn units(dim: usize, which: impl Iterator<Item = usize>) -> Vec<Vec<Q>> {
    which
        .map(|i| {
            let mut v = vec![q(0); dim];
            v[i] = q(1);
            v
        })
        .collect()
}

fn origin(n: usize) -> Vec<Q> {
    vec![q(0); 2 * n]
}

#[test]
fn one_jet_at_a_zero() {
    let d = flat(N);
    let eta = eta_row0(N);
    // ∇^A_{A'}η^{B'} = δ^A_0 δ^{B'}_{A'}
    let expect =
        IndexedTensor::from_fn(
            N,
            NV,
            &[Slot::EUp, Slot::FDown, Slot::FUp],
            |i| cst((i[0] == 0 && i[1] == i[2]) as i64),
        );
    assert_eq!(covariant_derivative(&d, &eta).unwrap(), expect);
    let r = jet_check(&d, &eta, &[origin(N), vec![q(1); NV]]).unwrap();
    assert!(r.all_pass(), "{:?}", r);
    assert_eq!(orbit(&d, &eta, &origin(N)).unwrap(), Orbit::Closed);
    assert_eq!(orbit(&d, &eta, &vec![q(1); NV]).unwrap(), Orbit::Open);

    let c = IndexedTensor::from_fn(N, NV, &[Slot::FUp], |i| cst(i[0] as i64 + 1));
    assert!(jet_check(&d, &c, &[origin(N)]).unwrap().all_pass());
    assert!(jet_check(&d, &IndexedTensor::zeros(N, NV, &[Slot::FUp]), &[origin(N)]).is_err());
}

#[test]
fn jet_check_on_curved_solutions() {
    let d = examples::cotractor_example().unwrap();
    let phi = IndexedTensor::from_fn(N, NV, &[Slot::EDown], |i| var([1, 4][i[0]]));
    let pts = affine_zero_set(&phi).unwrap().unwrap().sample(10, 3);
    let r = jet_check(&d, &phi, &pts).unwrap();
    assert!(r.all_pass());
    assert_eq!(r.checks.len(), 20);
}

#[test]
fn affine_zero_sets() {
    let z = affine_zero_set(&eta_row0(N)).unwrap().unwrap();
    assert_eq!(z.directions.len(), N);
    for x in z.sample(5, 1) {
        assert!(eta_row0(N).eval(&x).iter().all(|v| *v == q(0)));
    }
    let c = IndexedTensor::from_fn(N, NV, &[Slot::FUp], |_| cst(1));
    assert!(affine_zero_set(&c).unwrap().is_none());
    let quad = IndexedTensor::from_fn(N, NV, &[Slot::FUp], |_| &var(0) * &var(1));
    assert!(affine_zero_set(&quad).is_err());
}

#[test]
fn tractor_zero_locus_on_flat_model() {
    for n in [3, 4, 5] {
        let d = flat(n);
        let eta = eta_row0(n);
        let pts = affine_zero_set(&eta).unwrap().unwrap().sample(20, 7);
        let r = zero_locus_analysis(&d, &eta, &pts).unwrap();
        assert_eq!(r.points.len(), 20);
        assert_eq!(r.codimension(), Some(n));
        assert_eq!(r.expected_codimension, n);
        assert!(r.all_match());
        // {ζ_0^{B'} = 0}: only the A = 1 frame components are free
        let oracle = span_rref(&units(2 * n, n..2 * n), 2 * n);
        for p in &r.points {
            assert_eq!(p.kernel, oracle);
            assert_eq!(p.predicted, oracle);
        }
    }
}

#[test]
fn cotractor_zero_locus_on_flat_model() {
    for n in [3, 4] {
        let d = flat(n);
        let phi = phi_col0(n);
        let pts = affine_zero_set(&phi).unwrap().unwrap().sample(20, 11);
        let r = zero_locus_analysis(&d, &phi, &pts).unwrap();
        assert_eq!(r.codimension(), Some(2));
        assert!(r.all_match());
        // {ζ_B^{0'} = 0}
        let free = (0..2 * n).filter(|p| p % n != 0);
        let oracle = span_rref(&units(2 * n, free), 2 * n);
        assert!(r.points.iter().all(|p| p.kernel == oracle));
    }
}

#[test]
fn zero_locus_preconditions() {
    let d = flat(N);
    assert!(zero_locus_analysis(&d, &eta_row0(N), &[vec![q(1); NV]]).is_err());
    let not_solution = IndexedTensor::from_fn(N, NV, &[Slot::FUp], |i| &var(i[0]) * &var(0));
    assert!(!bgg_operator(&d, &not_solution).unwrap().is_zero());
    assert!(zero_locus_analysis(&d, &not_solution, &[origin(N)]).is_err());
    let nowhere = IndexedTensor::from_fn(N, NV, &[Slot::FUp], |_| cst(2));
    let r = zero_locus_analysis(&d, &nowhere, &[]).unwrap();
    assert!(r.points.is_empty() && r.codimension().is_none());
}

#[test]
fn zero_locus_in_another_gauge_and_on_curved_data() {
    let r = zero_locus_analysis(
        &flat_in_other_gauge(),
        &eta_row0(N),
        &[origin(N), vec![q(0), q(0), q(0), q(1), q(2), q(3)]],
    )
    .unwrap();
    assert!(r.all_match() && r.codimension() == Some(N));

    let d = examples::single_shear().unwrap();
    let eta = eta_row0(N);
    let pts = affine_zero_set(&eta).unwrap().unwrap().sample(10, 5);
    let r = zero_locus_analysis(&d, &eta, &pts).unwrap();
    assert!(r.all_match() && r.codimension() == Some(N));

    let d = examples::cotractor_example().unwrap();
    let phi = IndexedTensor::from_fn(N, NV, &[Slot::EDown], |i| var([1, 4][i[0]]));
    let pts = affine_zero_set(&phi).unwrap().unwrap().sample(10, 5);
    let r = zero_locus_analysis(&d, &phi, &pts).unwrap();
    assert!(r.all_match() && r.codimension() == Some(2));

    // a quadratic solution with user-supplied points on {x1 = x4 = 0}
    let d = examples::single_shear().unwrap();
    let phi = IndexedTensor::from_fn(N, NV, &[Slot::EDown], |i| {
        if i[0] == 0 {
            var(1).scale(&q(4))
        } else {
            &var(4).scale(&q(4)) + &(&var(1) * &var(1))
        }
    });
    let pts = vec![origin(N), vec![q(3), q(0), q(-2), q(5), q(0), q(1)]];
    let r = zero_locus_analysis(&d, &phi, &pts).unwrap();
    assert!(r.all_match() && r.codimension() == Some(2));
}

#[test]
fn weyl_structures_for_nowhere_vanishing_solutions() {
    let d = flat(N);
    let c = IndexedTensor::from_fn(N, NV, &[Slot::FUp], |i| cst(i[0] as i64 + 1));
    let r = nowhere_vanishing_weyl_check(&d, &c, &[origin(N)]).unwrap();
    assert_eq!(r.get("weyl.polynomial.parallel").unwrap().status, Status::Pass);
    assert!(r.all_pass());

    // η = a + x·b vanishes somewhere, so only the pointwise change exists
    let eta = IndexedTensor::from_fn(N, NV, &[Slot::FUp], |i| {
        &(&cst([2, -1, 3][i[0]]) + &var(pair(N, 0, i[0]))) + &var(pair(N, 1, i[0])).scale(&q(-2))
    });
    let pts: Vec<Vec<Q>> = (0..6).map(|k| (0..NV).map(|v| q((k * 7 + v as i64 * 3) % 5 - 2)).collect()).collect();
    let pts: Vec<Vec<Q>> = pts.into_iter().filter(|x| eta.eval(x).iter().any(|v| *v != q(0))).collect();
    assert!(pts.len() >= 4);
    let r = nowhere_vanishing_weyl_check(&d, &eta, &pts).unwrap();
    assert_eq!(r.get("weyl.polynomial.parallel").unwrap().status, Status::Inconclusive);
    assert_eq!(r.count(Status::Pass), pts.len());
    assert_eq!(r.count(Status::Fail), 0);

    let phi = IndexedTensor::from_fn(N, NV, &[Slot::EDown], |i| cst(3 - 2 * i[0] as i64));
    assert!(nowhere_vanishing_weyl_check(&d, &phi, &[origin(N)]).unwrap().all_pass());
    assert!(nowhere_vanishing_weyl_check(&d, &eta_row0(N), &[origin(N)]).is_err());
}

#[test]
fn weyl_structures_on_curved_data() {
    // constant solutions on the curved examples
    let d = examples::tractor_example().unwrap();
    let eta = IndexedTensor::from_fn(N, NV, &[Slot::FUp], |i| cst((i[0] == 1) as i64));
    assert!(nowhere_vanishing_weyl_check(&d, &eta, &[origin(N), vec![q(1); NV]]).unwrap().all_pass());
    let eta = IndexedTensor::from_fn(N, NV, &[Slot::FUp], |i| [cst(-3), var(5), cst(0)][i[0]].clone());
    let r = nowhere_vanishing_weyl_check(&d, &eta, &[origin(N), vec![q(1); NV]]).unwrap();
    assert_eq!(r.count(Status::Fail), 0);
    let d = examples::cotractor_example().unwrap();
    let phi = IndexedTensor::from_fn(N, NV, &[Slot::EDown], |i| [&var(1) + &cst(1), var(4)][i[0]].clone());
    let r = nowhere_vanishing_weyl_check(&d, &phi, &[origin(N), vec![q(2); NV]]).unwrap();
    assert_eq!(r.count(Status::Fail), 0);
    assert!(r.count(Status::Pass) >= 2);
}

fn projective_pairs(d: &ChartWeylData, eta: &IndexedTensor, x: &[Q], seed: u64) -> Vec<(Vec<Q>, Vec<Q>)> {
    let z = zero_locus_analysis(d, eta, &[x.to_vec()]).unwrap();
    random_pairs(&z.points[0].kernel, 5, seed)
}

#[test]
fn projective_structure_on_flat_model() {
    let d = flat(N);
    let eta = eta_row0(N);
    let pts = affine_zero_set(&eta).unwrap().unwrap().sample(10, 2);
    let zero = UpsilonForm::zero(N, NV);
    let r = induced_projective_structure(&d, &zero, &eta, &pts[0], &projective_pairs(&d, &eta, &pts[0], 0)).unwrap();
    assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());

    for u in [const_upsilon(), poly_upsilon()] {
        for (k, x) in pts.iter().enumerate() {
            let pairs = projective_pairs(&d, &eta, x, k as u64);
            let r = induced_projective_structure(&d, &u, &eta, x, &pairs).unwrap();
            assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
            assert_eq!(r.checks.len(), 5 * 5);
        }
    }
}

#[test]
fn projective_difference_needs_tangent_vectors() {
    let d = flat(N);
    let eta = eta_row0(N);
    let mut bad = vec![q(0); NV];
    bad[0] = q(1);
    let good = units(NV, [N].into_iter()).remove(0);
    assert!(induced_projective_structure(&d, &const_upsilon(), &eta, &origin(N), &[(bad, good)]).is_err());
    let off = vec![q(1); NV];
    assert!(induced_projective_structure(&d, &const_upsilon(), &eta, &off, &[]).is_err());
}

#[test]
fn projective_structure_on_curved_data() {
    let d = examples::single_shear().unwrap();
    let eta = eta_row0(N);
    let pts = affine_zero_set(&eta).unwrap().unwrap().sample(10, 9);
    let u = upsilon_from_fn(N, |i| &var(5 - i[1]) + &cst(i[0] as i64));
    for (k, x) in pts.iter().enumerate() {
        let pairs = projective_pairs(&d, &eta, x, 100 + k as u64);
        let r = induced_projective_structure(&d, &u, &eta, x, &pairs).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn induced_ag_structure_on_flat_model() {
    let d = flat(N);
    let phi = phi_col0(N);
    let mu = cotractor_covector(&d, &phi, &origin(N)).unwrap();
    assert_eq!(mu, vec![q(1), q(0), q(0)]);
    let iso = ag_isomorphism(&mu, &[q(1), q(0), q(0)]).unwrap();
    assert_eq!(span_rref(&iso.f_tilde, N), span_rref(&units(N, 1..N), N));
    assert_eq!(iso.composite(), Some(q(1) / &iso.wedge));
    let r = induced_ag_structure(&d, &phi, &origin(N), &[q(1), q(0), q(0)], &[q(1), q(1), q(0)]).unwrap();
    assert!(r.all_pass());
    assert!(induced_ag_structure(&d, &phi, &origin(N), &[q(0), q(1), q(0)], &[q(1), q(0), q(0)]).is_err());

    for n in [3, 4] {
        let d = flat(n);
        let phi = phi_col0(n);
        for x in affine_zero_set(&phi).unwrap().unwrap().sample(10, 4) {
            let mu = cotractor_covector(&d, &phi, &x).unwrap();
            let (b1, b2) = default_betas(&mu).unwrap();
            assert!(induced_ag_structure(&d, &phi, &x, &b1, &b2).unwrap().all_pass());
        }
    }
}

#[test]
fn induced_ag_structure_on_curved_data() {
    let d = examples::cotractor_example().unwrap();
    let phi = IndexedTensor::from_fn(N, NV, &[Slot::EDown], |i| var([1, 4][i[0]]));
    for x in affine_zero_set(&phi).unwrap().unwrap().sample(10, 8) {
        let mu = cotractor_covector(&d, &phi, &x).unwrap();
        let (b1, b2) = default_betas(&mu).unwrap();
        let mut b3 = b1.clone();
        for (v, u) in b3.iter_mut().zip(&ag_isomorphism(&mu, &b1).unwrap().f_tilde[1]) {
            *v -= u * q(3);
        }
        assert!(induced_ag_structure(&d, &phi, &x, &b1, &b2).unwrap().all_pass());
        assert!(induced_ag_structure(&d, &phi, &x, &b2, &b3).unwrap().all_pass());
    }
}
