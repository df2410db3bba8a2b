//! Minimal polynomial and the generalized-eigenspace direct sum
//! `C^d = H_1 + ... + H_m` with `H_j = ker (A - z_j I)^(i_j)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{CMatrix, CVector};
use crate::spectrum::{self, SpectrumInfo, RANK_REL_TOL};

/// One factor `(x - z)^index` of the minimal polynomial. `multiplicity` is
/// the algebraic multiplicity, i.e. `dim ker (A - zI)^index`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Root {
    pub z: Complex64,
    pub index: usize,
    pub multiplicity: usize,
}

/// Monic minimal polynomial in factored form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalPoly {
    pub roots: Vec<Root>,
    pub degree: usize,
}

impl MinimalPoly {
    /// `p(A) = prod_j (A - z_j I)^(i_j)`.
    pub fn eval(&self, a: &CMatrix) -> CMatrix {
        self.roots.iter().fold(CMatrix::identity(a.rows()), |acc, r| {
            acc.matmul(&a.shift(r.z).pow(r.index as u32))
        })
    }

    /// Annihilation residual `||p(A)||` relative to `max(1, ||A||)^degree`.
    pub fn relative_residual(&self, a: &CMatrix) -> Result<f64> {
        let norm = spectrum::operator_norm(a)?;
        Ok(spectrum::operator_norm(&self.eval(a))? / norm.max(1.0).powi(self.degree as i32))
    }

    pub fn spectral_radius(&self) -> f64 {
        self.roots.iter().map(|r| r.z.norm()).fold(0.0, f64::max)
    }
}

/// Minimal polynomial from the clustered spectrum; each index is the first
/// power at which `dim ker (A - zI)^k` stops growing.
pub fn minimal_polynomial(a: &CMatrix) -> Result<MinimalPoly> {
    minimal_polynomial_with(a, RANK_REL_TOL)
}

/// [`minimal_polynomial`] with relative rank factor `rel`.
pub fn minimal_polynomial_with(a: &CMatrix, rel: f64) -> Result<MinimalPoly> {
    let spec = spectrum::spectrum_with(a, rel)?;
    minimal_polynomial_from_spectrum(a, &spec, rel)
}

pub fn minimal_polynomial_from_spectrum(a: &CMatrix, spec: &SpectrumInfo, rel: f64) -> Result<MinimalPoly> {
    let dim = a.dim();
    let norm = spectrum::operator_norm(a)?;
    let mut roots = Vec::with_capacity(spec.eigenvalues.len());
    for e in &spec.eigenvalues {
        let chain = spectrum::kernel_chain(a, e.value, dim, norm, rel)?;
        let index = chain.len();
        let kernel_dim = chain.last().map_or(0, CMatrix::cols);
        if kernel_dim == 0 {
            return Err(Error::NumericalFailure(format!("A - ({}) I is numerically invertible", e.value)));
        }
        if index > e.multiplicity || kernel_dim != e.multiplicity {
            return Err(Error::IllConditionedSpectrum {
                reason: format!(
                    "root {} has multiplicity {} but a generalized eigenspace of dimension {kernel_dim} and index {index}",
                    e.value, e.multiplicity
                ),
                coarse: vec![],
                fine: vec![],
            });
        }
        roots.push(Root {
            z: e.value,
            index,
            multiplicity: e.multiplicity,
        });
    }
    let degree = roots.iter().map(|r| r.index).sum();
    Ok(MinimalPoly { roots, degree })
}

#[derive(Debug, Clone, Serialize)]
pub struct Block {
    pub z: Complex64,
    pub index: usize,
    /// Orthonormal columns spanning `H_j`.
    pub basis: CMatrix,
    /// Oblique projection `P_j` onto `H_j` along the other blocks.
    pub projection: CMatrix,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// `T_j` in the orthonormal block basis: `basis* A basis`.
    pub fn compression(&self, a: &CMatrix) -> CMatrix {
        self.basis.adjoint().matmul(a).matmul(&self.basis)
    }

    /// `T_j - z_j I_j` in the block basis.
    pub fn nilpotent_part(&self, a: &CMatrix) -> CMatrix {
        self.compression(a).shift(self.z)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    pub blocks: Vec<Block>,
    pub constant_c: f64,
}

/// Residuals of the direct-sum conditions, all expected to be at rounding level.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionChecks {
    pub total_dim: usize,
    pub invariance: f64,
    pub nilpotency: f64,
    pub idempotence: f64,
    pub cross_products: f64,
    pub partition_of_unity: f64,
    pub range: f64,
}

impl DecompositionChecks {
    pub fn max_residual(&self) -> f64 {
        [
            self.invariance,
            self.nilpotency,
            self.idempotence,
            self.cross_products,
            self.partition_of_unity,
            self.range,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Builds `H_j` as the numerical kernel of `(A - z_j I)^(i_j)` and the
/// projections `P_j = B E_j B^-1` for the concatenated basis `B`.
pub fn decompose(a: &CMatrix, p: &MinimalPoly) -> Result<Decomposition> {
    decompose_with(a, p, RANK_REL_TOL)
}

/// [`decompose`] with relative rank factor `rel`.
pub fn decompose_with(a: &CMatrix, p: &MinimalPoly, rel: f64) -> Result<Decomposition> {
    a.ensure_operator()?;
    let dim = a.dim();
    let norm = spectrum::operator_norm(a)?;
    let mut bases = Vec::with_capacity(p.roots.len());
    for r in &p.roots {
        let chain = spectrum::kernel_chain(a, r.z, r.index, norm, rel)?;
        let basis = chain.last().cloned().unwrap_or_else(|| CMatrix::zeros(dim, 0));
        if basis.cols() == 0 {
            return Err(Error::DecompositionFailure(format!("root {} has an empty generalized eigenspace", r.z)));
        }
        bases.push(basis);
    }
    let total: usize = bases.iter().map(|b| b.cols()).sum();
    if total != dim {
        return Err(Error::DecompositionFailure(format!(
            "generalized eigenspaces have total dimension {total}, expected {dim}"
        )));
    }
    let joined = CMatrix::hstack(&bases.iter().collect::<Vec<_>>());
    let inv = linalg::inverse(&joined)
        .map_err(|_| Error::DecompositionFailure("generalized eigenspaces are not independent".into()))?;

    let mut blocks = Vec::with_capacity(bases.len());
    let mut offset = 0;
    let mut constant_c: f64 = 0.0;
    for (r, basis) in p.roots.iter().zip(bases) {
        let d = basis.cols();
        let rows = CMatrix::from_fn(d, dim, |i, j| inv[(offset + i, j)]);
        let projection = basis.matmul(&rows);
        constant_c = constant_c.max(spectrum::operator_norm(&projection)?);
        blocks.push(Block {
            z: r.z,
            index: r.index,
            basis,
            projection,
        });
        offset += d;
    }
    Ok(Decomposition { blocks, constant_c })
}

/// Minimal polynomial and decomposition in one call.
pub fn analyze(a: &CMatrix) -> Result<(MinimalPoly, Decomposition)> {
    analyze_with(a, RANK_REL_TOL)
}

pub fn analyze_with(a: &CMatrix, rel: f64) -> Result<(MinimalPoly, Decomposition)> {
    let p = minimal_polynomial_with(a, rel)?;
    let d = decompose_with(a, &p, rel)?;
    Ok((p, d))
}

impl Decomposition {
    pub fn components(&self, h: &CVector) -> Vec<CVector> {
        self.blocks.iter().map(|b| b.projection.mul_vec(h)).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Block::dim).collect()
    }

    pub fn verify(&self, a: &CMatrix) -> DecompositionChecks {
        let dim = a.dim();
        let norm = a.frobenius_norm().max(1.0);
        let mut invariance: f64 = 0.0;
        let mut nilpotency: f64 = 0.0;
        let mut idempotence: f64 = 0.0;
        let mut cross: f64 = 0.0;
        let mut range: f64 = 0.0;
        let mut sum = CMatrix::zeros(dim, dim);
        for (j, b) in self.blocks.iter().enumerate() {
            let t = b.compression(a);
            let ab = a.matmul(&b.basis);
            invariance = invariance.max((&ab - &b.basis.matmul(&t)).frobenius_norm() / norm);
            let n = t.shift(b.z).pow(b.index as u32);
            nilpotency = nilpotency.max(n.frobenius_norm() / norm.powi(b.index as i32));
            let p = &b.projection;
            idempotence = idempotence.max((&p.matmul(p) - p).frobenius_norm());
            for (k, other) in self.blocks.iter().enumerate() {
                if k != j {
                    cross = cross.max(p.matmul(&other.projection).frobenius_norm());
                }
            }
            // P_j fixes its range and its range lies in span(basis_j).
            let fixed = (&p.matmul(&b.basis) - &b.basis).frobenius_norm();
            let outside = (&p.clone() - &b.basis.matmul(&b.basis.adjoint()).matmul(p)).frobenius_norm();
            range = range.max(fixed).max(outside);
            sum = &sum + p;
        }
        DecompositionChecks {
            total_dim: self.dims().iter().sum(),
            invariance,
            nilpotency,
            idempotence,
            cross_products: cross,
            partition_of_unity: (&sum - &CMatrix::identity(dim)).frobenius_norm(),
            range,
        }
    }
}

/// Spectra of the compressions `basis_j* A basis_j`.
pub fn restriction_spectra(a: &CMatrix, d: &Decomposition) -> Result<Vec<SpectrumInfo>> {
    a.ensure_operator()?;
    d.blocks.iter().map(|b| spectrum::spectrum(&b.compression(a))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matrix::{I, ONE};

    fn has_root(p: &MinimalPoly, z: Complex64, index: usize) -> bool {
        p.roots.iter().any(|r| (r.z - z).norm() < 1e-10 && r.index == index)
    }

    #[test]
    fn minimal_polynomial_examples() {
        // F^4 = I, F^2 != +-I, yet the 4x4 DFT misses the eigenvalue +i.
        let p = minimal_polynomial(&fixtures::dft4()).unwrap();
        assert_eq!(p.degree, 3);
        for z in [ONE, -ONE, -I] {
            assert!(has_root(&p, z, 1));
        }
        let p = minimal_polynomial(&fixtures::dft(5)).unwrap();
        assert_eq!(p.degree, 4);
        for z in [ONE, -ONE, I, -I] {
            assert!(has_root(&p, z, 1));
        }

        let p = minimal_polynomial(&CMatrix::identity(5)).unwrap();
        assert_eq!(p.degree, 1);
        assert!(has_root(&p, ONE, 1));
        assert_eq!(p.roots[0].multiplicity, 5);

        let p = minimal_polynomial(&fixtures::jordan_2x2()).unwrap();
        assert_eq!(p.degree, 2);
        assert!(has_root(&p, ONE, 2));
        assert!(p.relative_residual(&fixtures::jordan_2x2()).unwrap() < 1e-8);
    }

    #[test]
    fn index_counts_the_largest_jordan_block() {
        // J_2(0.5) (+) J_1(0.5) (+) J_1(-0.3): p(x) = (x - 0.5)^2 (x + 0.3).
        let mut a = CMatrix::diag(&[
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.3, 0.0),
        ]);
        a[(0, 1)] = ONE;
        let p = minimal_polynomial(&a).unwrap();
        assert_eq!(p.degree, 3);
        assert!(has_root(&p, Complex64::new(0.5, 0.0), 2));
        let r = p.roots.iter().find(|r| r.index == 2).unwrap();
        assert_eq!(r.multiplicity, 3);
    }

    #[test]
    fn decompose_orthogonal_eigenspaces() {
        let a = CMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]);
        let (_, d) = analyze(&a).unwrap();
        assert_eq!(d.blocks.len(), 2);
        assert!((d.constant_c - 1.0).abs() < 1e-12);
        for b in &d.blocks {
            let p = &b.projection;
            assert!((&p.adjoint() - p).frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn decompose_oblique_fixture() {
        // P_1 = S diag(1,0) S^-1 = [[1,-1],[0,0]], ||P_1|| = sqrt 2.
        let a = fixtures::oblique_2x2();
        let (_, d) = analyze(&a).unwrap();
        assert_eq!(d.blocks.len(), 2);
        assert!((d.constant_c - 2f64.sqrt()).abs() < 1e-12);
        let b1 = d.blocks.iter().find(|b| (b.z - ONE).norm() < 1e-12).unwrap();
        let expect = CMatrix::from_real(2, &[1.0, -1.0, 0.0, 0.0]);
        assert!((&b1.projection - &expect).frobenius_norm() < 1e-12);
        let b2 = d.blocks.iter().find(|b| (b.z + ONE).norm() < 1e-12).unwrap();
        let v = b2.basis.column(0);
        // span of (1, 1) / sqrt 2
        assert!((v[0].norm() - v[1].norm()).abs() < 1e-12);
        assert!(((v[0] * v[1].conj()).re - 0.5).abs() < 1e-12);
        let checks = d.verify(&a);
        assert_eq!(checks.total_dim, 2);
        assert!(checks.max_residual() < 1e-12);
    }

    #[test]
    fn single_block_has_identity_projection() {
        let a = fixtures::jordan_2x2();
        let (_, d) = analyze(&a).unwrap();
        assert_eq!(d.blocks.len(), 1);
        assert_eq!(d.blocks[0].dim(), 2);
        assert!((&d.blocks[0].projection - &CMatrix::identity(2)).frobenius_norm() < 1e-12);
        assert!((d.constant_c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn restriction_spectra_examples() {
        for (a, expected) in [
            (CMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]), vec![ONE, -ONE]),
            (fixtures::oblique_2x2(), vec![ONE, -ONE]),
            (fixtures::dft4(), vec![ONE, -ONE, -I]),
            (fixtures::dft(5), vec![ONE, I, -ONE, -I]),
        ] {
            let (_, d) = analyze(&a).unwrap();
            let specs = restriction_spectra(&a, &d).unwrap();
            assert_eq!(specs.len(), expected.len());
            for (b, s) in d.blocks.iter().zip(&specs) {
                assert_eq!(s.eigenvalues.len(), 1);
                assert!((s.eigenvalues[0].value - b.z).norm() < 1e-10);
            }
            for z in expected {
                assert!(d.blocks.iter().any(|b| (b.z - z).norm() < 1e-10));
            }
        }
    }

    #[test]
    fn wrong_polynomial_fails_decomposition() {
        let a = fixtures::jordan_2x2();
        let bogus = MinimalPoly {
            roots: vec![Root { z: ONE, index: 1, multiplicity: 2 }],
            degree: 1,
        };
        assert!(matches!(decompose(&a, &bogus), Err(Error::DecompositionFailure(_))));
    }
}
