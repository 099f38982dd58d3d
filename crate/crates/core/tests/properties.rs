//! Seeded randomized checks of the algebraic identities.

use approx::assert_abs_diff_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weakval::hilbert::operator_norm;
use weakval::logic::{
    check_orthomodular, commutes, effective_commutativity, join, meet, orthocomplement, MEET_MAX_ITER, MEET_TOL,
};
use weakval::sample::{random_basis, random_hermitian, random_projector, random_state};
use weakval::weak::{
    classify, decompose_expectation, real_imag_split, squared_weak_value_check, weak_value, Classification,
};
use weakval::{Operator, StateVector};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Basis vectors are nonorthogonal to `phi` with probability one; resample
/// anyway so that every term is defined.
fn basis_with_nonzero_overlaps(rng: &mut ChaCha8Rng, phi: &StateVector) -> Vec<StateVector> {
    loop {
        let b = random_basis(rng, phi.dim());
        if b.iter().all(|v| v.inner(phi).unwrap().norm() > 1e-6) {
            return b;
        }
    }
}

fn commuting_projector_pair(rng: &mut ChaCha8Rng, dim: usize) -> (Operator, Operator) {
    // both diagonal in one random basis
    let basis = random_basis(rng, dim);
    let mut p = Operator::zero(dim);
    let mut q = Operator::zero(dim);
    for v in &basis {
        if rng.random_bool(0.5) {
            p = p.add(&v.projector()).unwrap();
        }
        if rng.random_bool(0.5) {
            q = q.add(&v.projector()).unwrap();
        }
    }
    (p, q)
}

#[test]
fn expectation_decomposition_closes() {
    let mut r = rng(1);
    for _ in 0..150 {
        let dim = r.random_range(2..=16);
        let a = random_hermitian(&mut r, dim);
        let phi = random_state(&mut r, dim);
        let basis = basis_with_nonzero_overlaps(&mut r, &phi);
        let terms = decompose_expectation(&a, &phi, &basis).unwrap();
        let sum: weakval::C64 = terms.iter().map(|t| t.weak_value.unwrap() * t.probability).sum();
        let direct = a.expectation(&phi).unwrap();
        assert!((sum - direct).norm() <= 1e-10, "dim {dim}: {sum} vs {direct}");
    }
}

#[test]
fn squared_decomposition_closes_for_rank_one() {
    let mut r = rng(2);
    for _ in 0..150 {
        let dim = r.random_range(2..=16);
        let a = random_state(&mut r, dim).projector();
        let phi = random_state(&mut r, dim);
        let basis = basis_with_nonzero_overlaps(&mut r, &phi);
        let terms = decompose_expectation(&a, &phi, &basis).unwrap();
        let sum: f64 = terms
            .iter()
            .map(|t| t.probability * t.weak_value.unwrap().norm_sqr())
            .sum();
        assert_abs_diff_eq!(sum, a.expectation(&phi).unwrap().re, epsilon = 1e-10);
    }
}

#[test]
fn commuting_rank_one_weak_values_are_zero_or_one() {
    let mut r = rng(3);
    for _ in 0..200 {
        let dim = r.random_range(2..=8);
        let basis = random_basis(&mut r, dim);
        let (i, j) = (r.random_range(0..dim), r.random_range(0..dim));
        let a = basis[i].projector();
        let psi = &basis[j];
        assert!(commutes(&a, &psi.projector(), 1e-12).unwrap());
        let phi = random_state(&mut r, dim);
        let w = weak_value(&a, &phi, psi).unwrap();
        let target = if i == j { 1.0 } else { 0.0 };
        assert!((w - target).norm() <= 1e-10, "{w}");
    }
}

#[test]
fn conditional_probabilities_are_in_range() {
    let mut r = rng(4);
    let mut conditional = 0;
    for trial in 0..300 {
        let dim = r.random_range(2..=6);
        let rank = r.random_range(1..dim);
        let a = random_projector(&mut r, dim, rank);
        let pre = random_state(&mut r, dim);
        // make a third of the cases commute with the post-selection
        let post = if trial % 3 == 0 {
            let spec = a.eig_hermitian().unwrap();
            let range = spec.projectors().last().unwrap();
            StateVector::new(range.apply(&pre).unwrap().as_slice()).unwrap()
        } else {
            random_state(&mut r, dim)
        };
        let rep = classify(&a, &pre, &post, 1e-10).unwrap();
        if rep.classification.is_conditional_probability() {
            conditional += 1;
            assert!(rep.value.im.abs() <= 1e-10);
            assert!(rep.value.re >= -1e-10 && rep.value.re <= 1.0 + 1e-10);
        }
    }
    assert!(conditional >= 100);
}

#[test]
fn realness_follows_commutator_expectation() {
    let mut r = rng(5);
    for _ in 0..200 {
        let dim = r.random_range(2..=6);
        let a = random_state(&mut r, dim).projector();
        let psi = random_state(&mut r, dim);
        let phi = random_state(&mut r, dim);
        let psi_hat = psi.projector();
        let w = weak_value(&a, &phi, &psi).unwrap();
        let (sym, comm) = real_imag_split(&psi_hat, &a, &phi).unwrap();
        let pr = psi.inner(&phi).unwrap().norm_sqr();
        assert!(sym.im.abs() <= 1e-14);
        assert!(comm.re.abs() <= 1e-14);
        assert_abs_diff_eq!(w.im * pr, comm.im, epsilon = 1e-12);
        assert_abs_diff_eq!(w.re * pr, sym.re, epsilon = 1e-12);
    }
}

#[test]
fn product_of_probabilities_identity() {
    let mut r = rng(6);
    for _ in 0..500 {
        let dim = r.random_range(2..=8);
        let a = random_state(&mut r, dim).projector();
        let psi = random_state(&mut r, dim);
        let phi = random_state(&mut r, dim);
        let (lhs, rhs) = squared_weak_value_check(&a, &psi, &phi).unwrap();
        assert!((lhs - rhs).abs() <= 1e-11 * lhs.abs().max(rhs.abs()).max(1e-300));
    }
}

#[test]
fn meet_equals_product_for_commuting_pairs() {
    let mut r = rng(7);
    for _ in 0..100 {
        let dim = r.random_range(2..=8);
        let (p, q) = commuting_projector_pair(&mut r, dim);
        let m = meet(&p, &q, MEET_MAX_ITER, MEET_TOL).unwrap();
        let pq = p.compose(&q).unwrap();
        assert!(m
            .entries()
            .iter()
            .zip(pq.entries().iter())
            .all(|(x, y)| (x - y).norm() <= 1e-10));
    }
}

#[test]
fn meet_is_symmetric_and_below_both() {
    let mut r = rng(8);
    for _ in 0..100 {
        let dim = r.random_range(2..=8);
        // random subspaces sharing a common random subspace
        let shared = r.random_range(0..dim / 2 + 1);
        let basis = random_basis(&mut r, dim);
        let common = basis[..shared]
            .iter()
            .fold(Operator::zero(dim), |acc, v| acc.add(&v.projector()).unwrap());
        let extra_p = random_state(&mut r, dim).projector();
        let extra_q = random_state(&mut r, dim).projector();
        let p = join(&common, &extra_p).unwrap();
        let q = join(&common, &extra_q).unwrap();

        let pq = meet(&p, &q, MEET_MAX_ITER, MEET_TOL).unwrap();
        let qp = meet(&q, &p, MEET_MAX_ITER, MEET_TOL).unwrap();
        assert!(pq.approx_eq(&qp, 1e-8));
        assert!(p.compose(&pq).unwrap().approx_eq(&pq, 1e-9));
        assert!(q.compose(&pq).unwrap().approx_eq(&pq, 1e-9));
        // the shared subspace lies in the meet
        assert!(pq.compose(&common).unwrap().approx_eq(&common, 1e-8));
    }
}

#[test]
fn join_is_a_projector() {
    let mut r = rng(9);
    for _ in 0..100 {
        let dim = r.random_range(2..=8);
        let (rp, rq) = (r.random_range(1..=dim), r.random_range(1..=dim));
        let p = random_projector(&mut r, dim, rp);
        let q = random_projector(&mut r, dim, rq);
        let j = join(&p, &q).unwrap();
        let e = j.entries();
        assert!(operator_norm(&(e * e - e)) <= 1e-9);
        assert!(operator_norm(&(e - e.adjoint())) <= 1e-9);
        let jc = orthocomplement(&j).unwrap();
        assert!(jc.compose(&p).unwrap().max_abs() <= 1e-8);
    }
}

#[test]
fn commutator_identity_for_rank_one_pairs() {
    let mut r = rng(10);
    for _ in 0..200 {
        let dim = r.random_range(2..=8);
        let x = random_state(&mut r, dim);
        let y = random_state(&mut r, dim);
        let res = effective_commutativity(&y.projector(), &x.projector(), 1.0, &x, &y).unwrap();
        assert!(res.identity_residual <= 1e-10, "{}", res.identity_residual);
        assert_abs_diff_eq!(res.coefficient.re, y.inner(&x).unwrap().norm_sqr(), epsilon = 1e-12);
    }
}

#[test]
fn orthomodular_law_on_commuting_chains() {
    let mut r = rng(11);
    for _ in 0..200 {
        let dim = r.random_range(2..=8);
        let basis = random_basis(&mut r, dim);
        let mut p = Operator::zero(dim);
        let mut q = Operator::zero(dim);
        for v in &basis {
            let u: f64 = r.random();
            if u < 0.33 {
                p = p.add(&v.projector()).unwrap();
                q = q.add(&v.projector()).unwrap();
            } else if u < 0.66 {
                q = q.add(&v.projector()).unwrap();
            }
        }
        let verdict = check_orthomodular(&p, &q, 1e-10).unwrap();
        assert!(verdict.holds, "defect {}", verdict.defect);
    }
}

/// The converse of the commutator criterion is not a range statement: a
/// non-commuting configuration can still produce a real weak value in
/// [0, 1]. Record that such configurations exist.
#[test]
fn unremarkable_values_without_commutation_exist() {
    let mut r = rng(12);
    let mut found = 0;
    for _ in 0..500 {
        let raw = |r: &mut ChaCha8Rng| StateVector::from_real(&[r.random(), r.random(), r.random()]).unwrap();
        let (a, pre, post) = (raw(&mut r).projector(), raw(&mut r), raw(&mut r));
        let rep = classify(&a, &pre, &post, 1e-10).unwrap();
        if rep.classification == Classification::NotProbability && (0.0..=1.0).contains(&rep.value.re) {
            found += 1;
        }
    }
    assert!(found > 0);
}
