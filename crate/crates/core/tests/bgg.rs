mod common;

use agtractor::bgg::*;
use agtractor::examples;
use agtractor::linalg::span_rref;
use agtractor::rational::q;
use agtractor::tensor::{trace_free_decompose, TraceShape};
use agtractor::weyl::*;
use agtractor::{IndexedTensor, Poly, Slot};
use common::*;

fn x(a: usize, ap: usize) -> Poly {
    var(pair(N, a, ap))
}

fn eta_affine(a: [i64; 3], b: [i64; 2]) -> IndexedTensor {
    IndexedTensor::from_fn(N, NV, &[Slot::FUp], |i| {
        let mut p = cst(a[i[0]]);
        for (bb, &c) in b.iter().enumerate() {
            p += &x(bb, i[0]).scale(&q(c));
        }
        p
    })
}

fn phi_affine(a: [i64; 2], m: [i64; 3]) -> IndexedTensor {
    IndexedTensor::from_fn(N, NV, &[Slot::EDown], |i| {
        let mut p = cst(a[i[0]]);
        for (ip, &c) in m.iter().enumerate() {
            p += &x(i[0], ip).scale(&q(c));
        }
        p
    })
}

fn coefficient_vectors(sections: &[IndexedTensor], degree: u32) -> Vec<Vec<agtractor::Q>> {
    let monos = agtractor::Monomial::all_up_to(NV, degree);
    sections.iter().map(|s| monos.iter().flat_map(|m| s.coefficients(m)).collect()).collect()
}

#[test]
fn split_on_flat_examples() {
    let d = agtractor::weyl::ChartWeylData::flat(N).unwrap();
    let c = eta_affine([1, -2, 3], [0, 0]);
    let l = split_tractor(&d, &c).unwrap();
    assert_eq!(l.eta, c);
    assert!(l.xi.is_zero());

    let e = eta_affine([1, 0, 2], [4, -1]);
    let l = split_tractor(&d, &e).unwrap();
    assert_eq!(l.xi, IndexedTensor::from_fn(N, NV, &[Slot::EUp], |i| cst([-4, 1][i[0]])));

    // φ_B = x^{0'}_B
    let phi = IndexedTensor::from_fn(N, NV, &[Slot::EDown], |i| x(i[0], 0));
    let l = split_cotractor(&d, &phi).unwrap();
    assert_eq!(l.mu, IndexedTensor::from_fn(N, NV, &[Slot::FDown], |i| cst(if i[0] == 0 { 1 } else { 0 })));
}

fn curved_sections() -> (IndexedTensor, IndexedTensor) {
    let eta = IndexedTensor::from_fn(N, NV, &[Slot::FUp], |i| &(&var(i[0]) * &var(4)) + &cst(i[0] as i64 - 1));
    let phi = IndexedTensor::from_fn(N, NV, &[Slot::EDown], |i| &(&var(2 * i[0] + 1) * &var(5)) + &var(0));
    (eta, phi)
}

#[test]
fn splitting_has_trace_free_derivative() {
    let d = examples::flagship().unwrap();
    let (eta, phi) = curved_sections();
    let l = split_tractor(&d, &eta).unwrap();
    let dl = tractor_derivative(&d, &l).unwrap();
    assert!(trace_free_decompose(&dl.eta, TraceShape::TStarMF).unwrap().trace.is_zero());
    assert_eq!(l.eta, eta);
    let l = split_cotractor(&d, &phi).unwrap();
    let dl = cotractor_derivative(&d, &l).unwrap();
    assert!(trace_free_decompose(&dl.phi, TraceShape::TStarMEStar).unwrap().trace.is_zero());
    assert_eq!(l.phi, phi);
}

#[test]
fn splitting_and_bgg_operator_are_weyl_invariant() {
    let (eta, phi) = curved_sections();
    for d in [agtractor::weyl::ChartWeylData::flat(N).unwrap(), examples::flagship().unwrap()] {
        for u in [const_upsilon(), poly_upsilon()] {
            let dh = apply_upsilon(&d, &u).unwrap();
            assert_eq!(split_tractor(&dh, &eta).unwrap(), resplit_tractor(&u, &split_tractor(&d, &eta).unwrap()));
            assert_eq!(split_cotractor(&dh, &phi).unwrap(), resplit_cotractor(&u, &split_cotractor(&d, &phi).unwrap()));
            assert_eq!(bgg_operator(&dh, &eta).unwrap(), bgg_operator(&d, &eta).unwrap());
            assert_eq!(bgg_operator(&dh, &phi).unwrap(), bgg_operator(&d, &phi).unwrap());
        }
    }
}

#[test]
fn bgg_operator_examples() {
    let d = agtractor::weyl::ChartWeylData::flat(N).unwrap();
    assert!(bgg_operator(&d, &eta_affine([1, 2, 3], [5, -7])).unwrap().is_zero());
    assert!(bgg_operator(&d, &phi_affine([1, 2], [5, -7, 1])).unwrap().is_zero());
    // η^{B'} = x^{B'}_0 x^{0'}_0
    let eta = IndexedTensor::from_fn(N, NV, &[Slot::FUp], |i| &x(0, i[0]) * &x(0, 0));
    let de = bgg_operator(&d, &eta).unwrap();
    assert!(!de.is_zero());
    assert_eq!(de.degree(), 1);
    assert!(de.contract(1, 2).unwrap().is_zero());
    let (eta, phi) = curved_sections();
    let c = examples::flagship().unwrap();
    assert!(bgg_operator(&c, &eta).unwrap().contract(1, 2).unwrap().is_zero());
    assert!(bgg_operator(&c, &phi).unwrap().contract(0, 2).unwrap().is_zero());
}

#[test]
fn flat_solution_spaces() {
    let d = agtractor::weyl::ChartWeylData::flat(N).unwrap();
    let t = solve_bgg_polynomial(&d, Bundle::Tractor, 2).unwrap();
    assert_eq!(t.dimension(), N + 2);
    assert!(independent(&t.basis));
    let mut oracle = Vec::new();
    for k in 0..3 {
        let mut a = [0; 3];
        a[k] = 1;
        oracle.push(eta_affine(a, [0, 0]));
    }
    oracle.push(eta_affine([0; 3], [1, 0]));
    oracle.push(eta_affine([0; 3], [0, 1]));
    assert_eq!(
        span_rref(&coefficient_vectors(&t.basis, 2), 28 * 3),
        span_rref(&coefficient_vectors(&oracle, 2), 28 * 3)
    );

    let c = solve_bgg_polynomial(&d, Bundle::Cotractor, 2).unwrap();
    assert_eq!(c.dimension(), N + 2);
    let oracle = vec![
        phi_affine([1, 0], [0; 3]),
        phi_affine([0, 1], [0; 3]),
        phi_affine([0, 0], [1, 0, 0]),
        phi_affine([0, 0], [0, 1, 0]),
        phi_affine([0, 0], [0, 0, 1]),
    ];
    assert_eq!(
        span_rref(&coefficient_vectors(&c.basis, 2), 28 * 2),
        span_rref(&coefficient_vectors(&oracle, 2), 28 * 2)
    );

    assert_eq!(solve_bgg_polynomial(&d, Bundle::Tractor, 0).unwrap().dimension(), N);
    assert_eq!(solve_bgg_polynomial(&d, Bundle::Cotractor, 0).unwrap().dimension(), 2);
}

#[test]
fn solver_respects_degree_cap() {
    let d = agtractor::weyl::ChartWeylData::flat(N).unwrap().with_degree_cap(2);
    assert!(matches!(solve_bgg_polynomial(&d, Bundle::Tractor, 3), Err(agtractor::Error::DegreeCap { .. })));
}

#[test]
fn flat_solutions_are_determined_by_one_jets() {
    let d = agtractor::weyl::ChartWeylData::flat(N).unwrap();
    let pt: Vec<agtractor::Q> = (0..NV).map(|i| q(i as i64 - 2)).collect();
    for b in [Bundle::Tractor, Bundle::Cotractor] {
        let basis = solve_bgg_polynomial(&d, b, 2).unwrap();
        assert!(one_jet_injective(&d, &basis.basis, &pt).unwrap());
    }
}

#[test]
fn flat_parallel_tractors_are_splittings_of_solutions() {
    let d = agtractor::weyl::ChartWeylData::flat(N).unwrap();
    for (a, c) in [([1, 0, 0], [0, 0]), ([0, 2, -1], [0, 0]), ([0, 0, 0], [1, 0]), ([1, 1, 1], [-2, 3])] {
        // (a − x·c, c)
        let s = SplitTractor::new(
            eta_affine(a, [-c[0], -c[1]]),
            IndexedTensor::from_fn(N, NV, &[Slot::EUp], |i| cst(c[i[0]])),
        )
        .unwrap();
        assert!(tractor_derivative(&d, &s).unwrap().is_zero());
        assert!(bgg_operator(&d, &s.eta).unwrap().is_zero());
        assert_eq!(split_tractor(&d, &s.eta).unwrap(), s);
    }
}

#[test]
fn prolongation_on_flat_model() {
    let d = agtractor::weyl::ChartWeylData::flat(N).unwrap();
    let corr = prolongation_correction(&d).unwrap();
    assert!(corr.phi.is_zero() && corr.psi.is_zero());
    for s in solve_bgg_polynomial(&d, Bundle::Tractor, 2).unwrap().basis {
        let l = split_tractor(&d, &s).unwrap();
        assert!(prolonged_tractor_derivative(&d, &corr, &l).unwrap().is_zero());
        let ns = is_normal_solution(&d, &s).unwrap();
        assert!(ns.solution && ns.normal && ns.parallel);
    }
    for s in solve_bgg_polynomial(&d, Bundle::Cotractor, 2).unwrap().basis {
        let l = split_cotractor(&d, &s).unwrap();
        assert!(prolonged_cotractor_derivative(&d, &corr, &l).unwrap().is_zero());
    }
}

#[test]
fn prolongation_is_a_bullet_action() {
    let (eta, phi) = curved_sections();
    for d in [examples::flagship().unwrap(), examples::cotractor_example().unwrap()] {
        let corr = prolongation_correction(&d).unwrap();
        assert!(!corr.phi.is_zero());
        let l = split_tractor(&d, &eta).unwrap();
        let diff = prolonged_tractor_derivative(&d, &corr, &l).unwrap().sub(&tractor_derivative(&d, &l).unwrap());
        assert_eq!(diff, bullet_tractor(&corr.phi.neg(), &l).unwrap());
        let l = split_cotractor(&d, &phi).unwrap();
        let diff = prolonged_cotractor_derivative(&d, &corr, &l).unwrap().sub(&cotractor_derivative(&d, &l).unwrap());
        assert_eq!(diff, bullet_cotractor(&corr.psi, &l).unwrap());
    }
}

#[test]
fn correction_vanishes_without_torsion() {
    let corr = prolongation_correction(&flat_in_other_gauge()).unwrap();
    assert!(corr.phi.is_zero() && corr.psi.is_zero());
}

#[test]
fn correction_requires_normal_data() {
    let d = agtractor::weyl::ChartWeylData::flat(N)
        .unwrap()
        .with_rho(IndexedTensor::from_fn(N, NV, &agtractor::tensor::TWO_FORM_SLOTS, |i| cst(i[0] as i64)))
        .unwrap();
    assert!(matches!(prolongation_correction(&d), Err(agtractor::Error::Precondition(_))));
}

fn check_curved_solutions(d: &agtractor::weyl::ChartWeylData, bundle: Bundle) -> (usize, usize) {
    let corr = prolongation_correction(d).unwrap();
    let basis = solve_bgg_polynomial(d, bundle, 3).unwrap();
    let (mut normal, mut non_normal) = (0, 0);
    for s in &basis.basis {
        let ns = is_normal_solution(d, s).unwrap();
        assert!(ns.solution && ns.consistent());
        match split(d, s).unwrap() {
            Split::Tractor(l) => {
                assert!(prolonged_tractor_derivative(d, &corr, &l).unwrap().is_zero());
                let dl = tractor_derivative(d, &l).unwrap();
                assert!(dl.eta.is_zero());
                assert_eq!(dl.xi, phi_of(&corr.phi, s));
            }
            Split::Cotractor(l) => {
                assert!(prolonged_cotractor_derivative(d, &corr, &l).unwrap().is_zero());
                let dl = cotractor_derivative(d, &l).unwrap();
                assert!(dl.phi.is_zero());
                assert_eq!(dl.mu, psi_of(&corr.psi, s));
            }
        }
        if ns.normal {
            normal += 1;
        } else {
            non_normal += 1;
        }
    }
    (normal, non_normal)
}

#[test]
fn curved_tractor_solutions() {
    let (normal, non_normal) = check_curved_solutions(&examples::tractor_example().unwrap(), Bundle::Tractor);
    assert!(normal > 0 && non_normal > 0);
}

#[test]
fn curved_cotractor_solutions() {
    let (_, non_normal) = check_curved_solutions(&examples::cotractor_example().unwrap(), Bundle::Cotractor);
    assert!(non_normal > 0);
}

#[test]
fn torsion_free_contraction_means_normal_iff_solution() {
    let d = examples::single_shear().unwrap();
    for b in [Bundle::Tractor, Bundle::Cotractor] {
        for s in solve_bgg_polynomial(&d, b, 2).unwrap().basis {
            let ns = is_normal_solution(&d, &s).unwrap();
            assert!(ns.contraction.is_zero());
            assert!(ns.normal && ns.parallel);
        }
    }
}
