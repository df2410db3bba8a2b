use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Solves `A X = B` by Gaussian elimination with partial pivoting.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let n = a.rows();
    if !a.is_square() || b.rows() != n {
        return Err(Error::InvalidInput("solve: shape mismatch".into()));
    }
    let scale = a.max_abs();
    let mut lu = a.clone();
    let mut x = b.clone();
    let m = b.cols();
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .fold((k, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
        if pmax <= 1e-14 * scale || pmax == 0.0 {
            return Err(Error::NumericalFailure("matrix is singular to working precision".into()));
        }
        if p != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = t;
            }
            for j in 0..m {
                let t = x[(k, j)];
                x[(k, j)] = x[(p, j)];
                x[(p, j)] = t;
            }
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            if f.norm() == 0.0 {
                continue;
            }
            for j in k..n {
                let v = lu[(k, j)];
                lu[(i, j)] -= f * v;
            }
            for j in 0..m {
                let v = x[(k, j)];
                x[(i, j)] -= f * v;
            }
        }
    }
    for k in (0..n).rev() {
        for j in 0..m {
            let mut s = x[(k, j)];
            for t in k + 1..n {
                s -= lu[(k, t)] * x[(t, j)];
            }
            x[(k, j)] = s / lu[(k, k)];
        }
    }
    Ok(x)
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    solve(a, &CMatrix::identity(a.rows()))
}
