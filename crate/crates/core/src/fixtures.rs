//! Hard-coded reference operators.

use num_complex::Complex64;

use crate::matrix::{CMatrix, CVector, I, ONE};

/// Irrational rotation parameter used for the orbit density probes.
pub const SQRT2_THETA: f64 = std::f64::consts::SQRT_2;

/// Unitary 4x4 discrete Fourier transform `(1/2) [w^(jk)]` with `w = -i`.
///
/// `F^4 = I`, and its spectrum is `{1, -1, -i}` with 1 double, so the
/// minimal polynomial is `(x - 1)(x + 1)(x + i)`.
pub fn dft4() -> CMatrix {
    let w = -I;
    CMatrix::from_fn(4, 4, |j, k| w.powu((j * k) as u32) * 0.5)
}

/// Unitary `n x n` DFT `n^(-1/2) [e^(-2 pi i jk / n)]`. For `n >= 5` the
/// spectrum is all of `{1, -1, i, -i}` and the minimal polynomial is `x^4 - 1`.
pub fn dft(n: usize) -> CMatrix {
    let s = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |j, k| {
        Complex64::from_polar(s, -std::f64::consts::TAU * ((j * k) % n) as f64 / n as f64)
    })
}

/// `[[1, 1], [0, 1]] = I + N` with `N = [[0, 1], [0, 0]]`.
pub fn jordan_2x2() -> CMatrix {
    CMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0])
}

/// The square-zero matrix `[[0, 1], [0, 0]]`.
pub fn nilpotent_2x2() -> CMatrix {
    CMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0])
}

/// Shear similarity `S = [[1, 1], [0, 1]]`.
pub fn shear() -> CMatrix {
    CMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0])
}

/// `S diag(1, -1) S^-1 = [[1, -2], [0, -1]]`: diagonalizable with unimodular
/// spectrum, power bounded, not unitary.
pub fn oblique_2x2() -> CMatrix {
    CMatrix::from_real(2, &[1.0, -2.0, 0.0, -1.0])
}

/// `diag(3) (+) [[0, 1], [0, 0]]`: normaloid with norm 3 but not normal.
pub fn normaloid_nonnormal_3x3() -> CMatrix {
    CMatrix::direct_sum(&[&CMatrix::from_real(1, &[3.0]), &nilpotent_2x2()])
}

/// `e^(2 pi i theta)`, exact at quarter turns.
pub fn rotation(theta: f64) -> Complex64 {
    let t = theta.rem_euclid(1.0);
    let q = 4.0 * t;
    if q.fract() == 0.0 {
        return [ONE, I, -ONE, -I][q as usize % 4];
    }
    Complex64::from_polar(1.0, std::f64::consts::TAU * t)
}

pub fn e1(dim: usize) -> CVector {
    CVector::basis(dim, 0)
}
