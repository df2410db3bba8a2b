use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, ZERO};

/// Unitary reduction to upper Hessenberg form with Householder reflectors.
pub fn hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.rows();
    let mut h = a.clone();
    if n < 3 {
        return h;
    }
    for k in 0..n - 2 {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { Complex64::new(1.0, 0.0) };
        let mut v = x;
        v[0] += phase * xnorm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H <- (I - 2vv*) H
        for j in 0..n {
            let w: Complex64 = v.iter().enumerate().map(|(t, vi)| vi.conj() * h[(k + 1 + t, j)]).sum();
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= 2.0 * vi * w;
            }
        }
        // H <- H (I - 2vv*)
        for i in 0..n {
            let w: Complex64 = v.iter().enumerate().map(|(t, vj)| h[(i, k + 1 + t)] * vj).sum();
            for (t, vj) in v.iter().enumerate() {
                h[(i, k + 1 + t)] -= 2.0 * w * vj.conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

/// Eigenvalues of a square complex matrix: Hessenberg reduction followed by
/// single-shift QR iteration with Wilkinson shifts and exceptional shifts
/// every tenth iteration. Fails after `100 * dim` iterations.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    let n = a.rows();
    let mut h = hessenberg(a);
    let mut eig = vec![ZERO; n];
    if n == 0 {
        return Ok(eig);
    }
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let max_iter = 100 * n;
    let mut total = 0usize;
    let mut its = 0usize;
    let mut hi = n - 1;

    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        // Locate the top of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let mut s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if s == 0.0 {
                s = scale;
            }
            if h[(lo, lo - 1)].norm() <= f64::EPSILON * s {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            its = 0;
            continue;
        }

        total += 1;
        its += 1;
        if total > max_iter {
            return Err(Error::NumericalFailure(format!(
                "QR iteration did not converge after {max_iter} iterations"
            )));
        }

        let mu = if its.is_multiple_of(10) {
            h[(hi, hi)] + h[(hi, hi - 1)].norm() * Complex64::new(0.75, 0.4)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_step(&mut h, lo, hi, mu);
    }
    Ok(eig)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Explicit shifted QR step on the active block `lo..=hi`.
fn qr_step(h: &mut CMatrix, lo: usize, hi: usize, mu: Complex64) {
    for k in lo..=hi {
        h[(k, k)] -= mu;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = -s.conj() * x + y * c;
        }
        rots.push((c, s));
    }
    for (offset, &(c, s)) in rots.iter().enumerate() {
        let k = lo + offset;
        for i in lo..=(k + 1).min(hi) {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + s.conj() * y;
            h[(i, k + 1)] = -s * x + y * c;
        }
    }
    for k in lo..=hi {
        h[(k, k)] += mu;
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` (c real) mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    (an / r, (a / an) * b.conj() / r)
}
