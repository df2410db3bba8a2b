use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, ZERO};

const MAX_SWEEPS: usize = 80;

/// Thin singular value decomposition `A = U diag(s) V*` with `s` sorted in
/// decreasing order.
///
/// For an `m x n` input with `m >= n`, `u` is `m x n` and `v` is `n x n`.
/// Columns of `u` that belong to zero singular values are left zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    /// Orthonormal basis (as columns) of the right null space at threshold `tol`.
    pub fn null_space(&self, tol: f64) -> CMatrix {
        let idx: Vec<usize> = (0..self.singular_values.len())
            .filter(|&j| self.singular_values[j] <= tol)
            .collect();
        CMatrix::from_fn(self.v.rows(), idx.len(), |i, j| self.v[(i, idx[j])])
    }
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(a: &CMatrix) -> Result<Svd> {
    if a.rows() < a.cols() {
        // A* = V S U*
        let t = svd(&a.adjoint())?;
        return Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }
    let (scaled, f) = power_of_two_scaled(a);
    let (cols, v) = jacobi(&scaled, true)?;
    let n = a.cols();
    let m = a.rows();
    let mut sv: Vec<(f64, usize)> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| (col_norm(c), j))
        .collect();
    sv.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));

    let v = v.expect("accumulated");
    let mut u = CMatrix::zeros(m, n);
    let mut vs = CMatrix::zeros(n, n);
    for (k, &(s, j)) in sv.iter().enumerate() {
        if s > 0.0 {
            for i in 0..m {
                u[(i, k)] = cols[j][i] / s;
            }
        }
        for i in 0..n {
            vs[(i, k)] = v[j][i];
        }
    }
    Ok(Svd {
        u,
        singular_values: sv.iter().map(|p| p.0 * f).collect(),
        v: vs,
    })
}

/// Singular values only, sorted in decreasing order.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    let src = if a.rows() < a.cols() { a.adjoint() } else { a.clone() };
    let (scaled, f) = power_of_two_scaled(&src);
    let (cols, _) = jacobi(&scaled, false)?;
    let mut s: Vec<f64> = cols.iter().map(|c| col_norm(c) * f).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

/// `(a / f, f)` with `f` a power of two near the largest entry, so squared
/// entries neither overflow nor underflow. Exact, so singular vectors are unchanged.
fn power_of_two_scaled(a: &CMatrix) -> (CMatrix, f64) {
    let m = a.max_abs();
    if m == 0.0 || !m.is_finite() {
        return (a.clone(), 1.0);
    }
    let e = m.log2().round() as i32;
    if e.abs() < 64 {
        return (a.clone(), 1.0);
    }
    // Two half steps, since 2^-e alone can overflow for subnormal entries.
    let half = Complex64::new(2f64.powi(-e / 2), 0.0);
    let rest = Complex64::new(2f64.powi(-e - (-e / 2)), 0.0);
    (a.scale(half).scale(rest), 2f64.powi(e / 2) * 2f64.powi(e - e / 2))
}

fn col_norm(c: &[Complex64]) -> f64 {
    c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

type Columns = Vec<Vec<Complex64>>;

fn jacobi(a: &CMatrix, want_v: bool) -> Result<(Columns, Option<Columns>)> {
    let m = a.rows();
    let n = a.cols();
    let mut cols: Columns = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut v: Option<Columns> = want_v.then(|| {
        (0..n)
            .map(|j| {
                let mut e = vec![ZERO; n];
                e[j] = Complex64::new(1.0, 0.0);
                e
            })
            .collect()
    });
    let tol = f64::EPSILON * (m.max(1) as f64);
    // Columns below this squared norm are rounding noise; rotating them never settles.
    let negligible = (tol * a.frobenius_norm()).powi(2);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() || alpha.min(beta) <= negligible {
                    continue;
                }
                rotated = true;
                // Rotate (a_p, e^{-i phi} a_q), which have a real positive inner product.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, phase, c, s);
                if let Some(v) = v.as_mut() {
                    rotate(v, p, q, phase, c, s);
                }
            }
        }
        if !rotated {
            return Ok((cols, v));
        }
    }
    Err(Error::NumericalFailure(format!(
        "Jacobi SVD did not converge in {MAX_SWEEPS} sweeps"
    )))
}

fn rotate(cols: &mut Columns, p: usize, q: usize, phase: Complex64, c: f64, s: f64) {
    let conj_phase = phase.conj();
    let (left, right) = cols.split_at_mut(q);
    let cp = &mut left[p];
    let cq = &mut right[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = *y * conj_phase;
        let xp = *x;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}
