use num_complex::Complex64;

use crate::matrix::{CMatrix, CVector};

/// Orthonormalizes the columns of `a` (classical Gram-Schmidt applied twice).
///
/// The implied `R` factor has a positive real diagonal, so applied to a complex
/// Gaussian matrix the result is Haar distributed. Columns that become
/// numerically dependent are returned as zero.
pub fn gram_schmidt(a: &CMatrix) -> CMatrix {
    let m = a.rows();
    let mut q: Vec<CVector> = Vec::with_capacity(a.cols());
    for j in 0..a.cols() {
        let mut v = a.column(j);
        let original = v.norm();
        for _ in 0..2 {
            for qk in &q {
                let c = v.inner(qk);
                for i in 0..m {
                    v[i] -= c * qk[i];
                }
            }
        }
        let nrm = v.norm();
        if nrm <= 1e-13 * original.max(f64::MIN_POSITIVE) {
            q.push(CVector::zeros(m));
        } else {
            q.push(v.scale(Complex64::new(1.0 / nrm, 0.0)));
        }
    }
    CMatrix::from_columns(m, &q)
}

/// Orthonormal basis of the orthogonal complement of the column span of `a`.
pub fn orthonormal_complement(a: &CMatrix) -> CMatrix {
    let m = a.rows();
    let q = gram_schmidt(a);
    let mut basis: Vec<CVector> = q.columns().into_iter().filter(|c| c.norm() > 0.5).collect();
    let start = basis.len();
    for k in 0..m {
        let mut v = CVector::basis(m, k);
        for _ in 0..2 {
            for b in &basis {
                let c = v.inner(b);
                for i in 0..m {
                    v[i] -= c * b[i];
                }
            }
        }
        let nrm = v.norm();
        if nrm > 1e-8 {
            basis.push(v.scale(Complex64::new(1.0 / nrm, 0.0)));
        }
        if basis.len() == m {
            break;
        }
    }
    CMatrix::from_columns(m, &basis[start..])
}
