//! Random states, operators and bases for property checks and benchmarks.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::hilbert::{c64, Operator, StateVector, C64};

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StateVector {
    loop {
        let raw: Vec<C64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
        if let Ok(s) = StateVector::new(&raw) {
            return s;
        }
    }
}

/// Random hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Operator {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian_c64(rng));
    let h = (&g + g.adjoint()).unscale(2.0);
    Operator::new(h).expect("square")
}

/// Random orthonormal basis by modified Gram–Schmidt on Gaussian vectors.
pub fn random_basis<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<StateVector> {
    'retry: loop {
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(dim);
        for _ in 0..dim {
            let mut v: Vec<C64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
            for _pass in 0..2 {
                for b in &basis {
                    let proj: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= proj * bi;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                continue 'retry;
            }
            v.iter_mut().for_each(|z| *z /= norm);
            basis.push(v);
        }
        return basis
            .iter()
            .map(|v| StateVector::new(v).expect("unit vector"))
            .collect();
    }
}

/// Random projector of the given rank.
pub fn random_projector<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> Operator {
    let basis = random_basis(rng, dim);
    basis
        .iter()
        .take(rank)
        .fold(Operator::zero(dim), |acc, v| acc.add(&v.projector()).expect("dims"))
}
