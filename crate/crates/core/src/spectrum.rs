//! Operator norm, numerical rank and clustered spectra.
//!
//! QR iteration returns a multiple eigenvalue of index `k` as a ring of
//! perturbed copies whose radius scales like `eps^(1/k)`. The clustering here
//! merges such rings and accepts a merged cluster of size `k` only when
//! `(A - zI)^k` has nullity exactly `k` at its centroid `z`. Clusters failing
//! that test are split at progressively smaller radii down to the base
//! radius `1e-8 * max(1, ||A||)`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Cluster, Error, Result};
use crate::linalg;
use crate::matrix::CMatrix;

/// Relative factor of the default rank threshold `1e-10 * dim * sigma_max`.
pub const RANK_REL_TOL: f64 = 1e-10;
/// Relative factor of the base clustering radius `1e-8 * max(1, ||A||)`.
pub const CLUSTER_REL_RADIUS: f64 = 1e-8;
/// Relative factor of the coarsest trial radius used before validation.
const COARSE_REL_RADIUS: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Clustered spectrum with algebraic multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumInfo {
    pub eigenvalues: Vec<Eigenvalue>,
    pub spectral_radius: f64,
}

impl SpectrumInfo {
    pub fn values(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.eigenvalues.iter().map(|e| e.value)
    }
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("entries must be finite".into()));
    }
    Ok(linalg::singular_values(a)?.first().copied().unwrap_or(0.0))
}

/// Default rank threshold for a matrix with the given singular values.
pub fn default_rank_tol(dim: usize, sigma_max: f64) -> f64 {
    rank_tol(RANK_REL_TOL, dim, sigma_max)
}

/// `rel * dim * sigma_max`.
pub fn rank_tol(rel: f64, dim: usize, sigma_max: f64) -> f64 {
    rel * dim as f64 * sigma_max
}

/// Number of singular values above `tol`; `tol = 0` selects the default threshold.
pub fn rank(a: &CMatrix, tol: f64) -> Result<usize> {
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidInput(format!("tol: must be nonnegative, got {tol}")));
    }
    if !a.is_finite() {
        return Err(Error::InvalidInput("entries must be finite".into()));
    }
    let s = linalg::singular_values(a)?;
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(0);
    }
    let tol = if tol == 0.0 {
        default_rank_tol(a.rows().max(a.cols()), smax)
    } else {
        tol
    };
    Ok(s.iter().filter(|&&x| x > tol).count())
}

/// `dim - rank` at the default threshold.
pub fn nullity(a: &CMatrix) -> Result<usize> {
    Ok(a.cols() - rank(a, 0.0)?)
}

/// Orthonormal bases of `ker (A - zI)^j` for `j = 1, 2, ...`, built without
/// forming powers: `ker (A - zI)^j` is the kernel of `Q (A - zI)` where `Q`
/// projects onto the orthogonal complement of `ker (A - zI)^(j-1)`. Singular
/// values up to `rel * dim * max(sigma_max, ||A||)` count as zero. Stops after
/// `max_steps` or once the dimension stops growing (the repeated kernel is
/// not included).
pub fn kernel_chain(a: &CMatrix, z: Complex64, max_steps: usize, norm: f64, rel: f64) -> Result<Vec<CMatrix>> {
    let dim = a.dim();
    let m = a.shift(z);
    let mut chain: Vec<CMatrix> = Vec::new();
    let mut q = m.clone();
    for _ in 0..max_steps {
        let svd = linalg::svd(&q)?;
        let smax = svd.singular_values.first().copied().unwrap_or(0.0);
        let basis = svd.null_space(rank_tol(rel, dim, smax.max(norm)));
        let prev = chain.last().map_or(0, CMatrix::cols);
        if basis.cols() <= prev && !chain.is_empty() {
            break;
        }
        let complement = &CMatrix::identity(dim) - &basis.matmul(&basis.adjoint());
        q = complement.matmul(&m);
        let full = basis.cols() == dim;
        chain.push(basis);
        if full {
            break;
        }
    }
    Ok(chain)
}

pub fn clustering_radius(norm: f64) -> f64 {
    CLUSTER_REL_RADIUS * norm.max(1.0)
}

/// Eigenvalues of `a`, clustered into distinct roots with multiplicities.
pub fn spectrum(a: &CMatrix) -> Result<SpectrumInfo> {
    spectrum_with(a, RANK_REL_TOL)
}

/// [`spectrum`] with relative rank factor `rel` in the cluster validation.
pub fn spectrum_with(a: &CMatrix, rel: f64) -> Result<SpectrumInfo> {
    a.ensure_operator()?;
    let norm = operator_norm(a)?;
    let raw = linalg::eigenvalues(a)?;
    let clusters = cluster_eigenvalues(a, &raw, norm, rel)?;
    let spectral_radius = clusters.iter().map(|c| c.center.norm()).fold(0.0, f64::max);
    Ok(SpectrumInfo {
        eigenvalues: clusters
            .into_iter()
            .map(|c| Eigenvalue {
                value: c.center,
                multiplicity: c.multiplicity,
            })
            .collect(),
        spectral_radius,
    })
}

/// Validated clustering of raw eigenvalues (see the module docs).
pub fn cluster_eigenvalues(a: &CMatrix, raw: &[Complex64], norm: f64, rel: f64) -> Result<Vec<Cluster>> {
    let delta = clustering_radius(norm);
    let coarse = COARSE_REL_RADIUS * norm.max(1.0);
    let mut out = Vec::new();
    let ctx = Ctx { a, norm, rel, delta };
    ctx.refine(raw.to_vec(), coarse, &mut out)?;

    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let d = (out[i].center - out[j].center).norm();
            if d < 2.0 * delta {
                let merged = Cluster {
                    center: (out[i].center * out[i].multiplicity as f64
                        + out[j].center * out[j].multiplicity as f64)
                        / (out[i].multiplicity + out[j].multiplicity) as f64,
                    multiplicity: out[i].multiplicity + out[j].multiplicity,
                };
                return Err(Error::IllConditionedSpectrum {
                    reason: format!("two roots are {d:e} apart, within twice the clustering radius {delta:e}"),
                    coarse: vec![merged],
                    fine: vec![out[i].clone(), out[j].clone()],
                });
            }
        }
    }
    out.sort_by(|x, y| {
        angle_key(x.center)
            .total_cmp(&angle_key(y.center))
            .then(y.center.norm().total_cmp(&x.center.norm()))
    });
    Ok(out)
}

struct Ctx<'a> {
    a: &'a CMatrix,
    norm: f64,
    rel: f64,
    delta: f64,
}

impl Ctx<'_> {
    fn refine(&self, members: Vec<Complex64>, radius: f64, out: &mut Vec<Cluster>) -> Result<()> {
        let delta = self.delta;
        for group in single_linkage(&members, radius) {
            let k = group.len();
            let center = group.iter().sum::<Complex64>() / k as f64;
            if k == 1 || self.nullity_of_power(center, k)? == k {
                out.push(Cluster { center, multiplicity: k });
                continue;
            }
            if radius <= delta {
                return Err(Error::IllConditionedSpectrum {
                    reason: format!(
                        "{k} eigenvalues within {delta:e} of each other do not span a generalized eigenspace of dimension {k}"
                    ),
                    coarse: vec![Cluster { center, multiplicity: k }],
                    fine: group.iter().map(|&z| Cluster { center: z, multiplicity: 1 }).collect(),
                });
            }
            self.refine(group, (radius * 0.1).max(delta), out)?;
        }
        Ok(())
    }

    fn nullity_of_power(&self, z: Complex64, k: usize) -> Result<usize> {
        let chain = kernel_chain(self.a, z, k, self.norm, self.rel)?;
        Ok(chain.last().map_or(0, CMatrix::cols))
    }
}

/// Connected components of the graph joining points closer than `radius`.
fn single_linkage(points: &[Complex64], radius: f64) -> Vec<Vec<Complex64>> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).norm() <= radius {
                let (ri, rj) = (find(&mut label, i), find(&mut label, j));
                if ri != rj {
                    label[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        let r = find(&mut label, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => g.1.push(p),
            None => groups.push((r, vec![p])),
        }
    }
    groups.into_iter().map(|g| g.1).collect()
}

/// Argument in `[0, 2pi)` with values just below `2pi` snapped to zero.
fn angle_key(z: Complex64) -> f64 {
    if z.norm() == 0.0 {
        return 0.0;
    }
    let mut t = z.arg();
    if t < 0.0 {
        t += TAU;
    }
    if TAU - t < 1e-9 {
        0.0
    } else {
        t
    }
}
