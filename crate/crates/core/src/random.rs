//! Seeded random draws shared by the probes and the generators.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg;
use crate::matrix::{CMatrix, CVector};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of trial `i` in a run seeded with `seed`.
pub fn trial_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Standard complex Gaussian (unit total variance).
pub fn gaussian(rng: &mut Rng64) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix(rng: &mut Rng64, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn unit_vector(rng: &mut Rng64, dim: usize) -> CVector {
    loop {
        let v = CVector((0..dim).map(|_| gaussian(rng)).collect());
        if v.norm() > 1e-3 {
            return v.normalized();
        }
    }
}

/// Haar-distributed unitary from Gram-Schmidt on a Gaussian matrix.
pub fn unitary(rng: &mut Rng64, dim: usize) -> CMatrix {
    loop {
        let q = linalg::gram_schmidt(&gaussian_matrix(rng, dim, dim));
        if q.columns().iter().all(|c| c.norm() > 0.5) {
            return q;
        }
    }
}

/// `k` unimodular numbers with pairwise distance at least `min_sep`.
pub fn unimodular_set(rng: &mut Rng64, k: usize, min_sep: f64) -> Vec<Complex64> {
    for _ in 0..1000 {
        let zs: Vec<Complex64> = (0..k)
            .map(|_| Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU))
            .collect();
        if separated(&zs, min_sep) {
            return zs;
        }
    }
    // Equispaced with a random rotation always works when k * min_sep < 2 pi.
    let phase = rng.random::<f64>() * std::f64::consts::TAU;
    (0..k)
        .map(|j| Complex64::from_polar(1.0, phase + std::f64::consts::TAU * j as f64 / k as f64))
        .collect()
}

pub fn separated(zs: &[Complex64], min_sep: f64) -> bool {
    zs.iter()
        .enumerate()
        .all(|(i, a)| zs[i + 1..].iter().all(|b| (a - b).norm() >= min_sep))
}
