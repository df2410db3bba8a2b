//! Seeded constructors for the example and counterexample families.
//!
//! Same arguments, same bits: every draw comes from a ChaCha stream seeded
//! with the instance seed.

use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::matrix::{CMatrix, CVector, MAX_DIM, ONE, ZERO};
use crate::random::{self, Rng64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    UnitaryFiniteSpectrum,
    ObliqueDiagonalizable,
    JordanPerturbation,
    ScalarRotation,
    NormaloidNonnormal,
    PlantedJordan,
}

impl Kind {
    pub const ALL: [Kind; 6] = [
        Kind::UnitaryFiniteSpectrum,
        Kind::ObliqueDiagonalizable,
        Kind::JordanPerturbation,
        Kind::ScalarRotation,
        Kind::NormaloidNonnormal,
        Kind::PlantedJordan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::UnitaryFiniteSpectrum => "unitary-finite-spectrum",
            Kind::ObliqueDiagonalizable => "oblique-diagonalizable",
            Kind::JordanPerturbation => "jordan-perturbation",
            Kind::ScalarRotation => "scalar-rotation",
            Kind::NormaloidNonnormal => "normaloid-nonnormal",
            Kind::PlantedJordan => "planted-jordan",
        }
    }

    fn short(self) -> &'static str {
        match self {
            Kind::UnitaryFiniteSpectrum => "unitary",
            Kind::ObliqueDiagonalizable => "oblique",
            Kind::JordanPerturbation => "jordan",
            Kind::ScalarRotation => "rotation",
            Kind::NormaloidNonnormal => "normaloid",
            Kind::PlantedJordan => "planted",
        }
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s || k.short() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Kind::ALL.iter().map(|k| k.short()).collect();
                Error::InvalidInput(format!("kind: unknown kind '{s}', expected one of {}", names.join(", ")))
            })
    }
}

/// Kind-specific parameters; `None` selects the kind's default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Extra {
    /// Condition-number cap of the similarity (oblique, planted).
    pub cond_cap: Option<f64>,
    /// `||N||` (jordan) or `r(N) = ||A||` (normaloid).
    pub scale: Option<f64>,
    /// Rotation parameter (rotation).
    pub theta: Option<f64>,
    /// Oblique only: fail rather than return a unitary matrix.
    #[serde(default)]
    pub require_oblique: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub kind: Kind,
    pub dim: usize,
    /// Empty means drawn from the seed.
    pub eigenvalues: Vec<Complex64>,
    pub seed: u64,
    #[serde(default)]
    pub extra: Extra,
}

pub const DEFAULT_OBLIQUE_CAP: f64 = 50.0;
pub const MAX_PLANTED_CAP: f64 = 100.0;
pub const DEFAULT_NORMALOID_SCALE: f64 = 3.0;
/// Minimum distance between drawn eigenvalues.
pub const DRAW_SEPARATION: f64 = 0.2;

pub fn generate(spec: &InstanceSpec) -> Result<CMatrix> {
    check_dim(spec.dim)?;
    let x = &spec.extra;
    let seed = spec.seed;
    let mut rng = random::rng(seed);
    match spec.kind {
        Kind::UnitaryFiniteSpectrum => {
            let eig = if spec.eigenvalues.is_empty() {
                let k = rng.random_range(1..=spec.dim.min(6));
                random::unimodular_set(&mut rng, k, DRAW_SEPARATION)
            } else {
                spec.eigenvalues.clone()
            };
            gen_unitary_finite_spectrum(spec.dim, &eig, seed)
        }
        Kind::ObliqueDiagonalizable => {
            let eig = if spec.eigenvalues.is_empty() {
                random::unimodular_set(&mut rng, spec.dim, DRAW_SEPARATION)
            } else {
                spec.eigenvalues.clone()
            };
            gen_oblique(spec.dim, &eig, x.cond_cap.unwrap_or(DEFAULT_OBLIQUE_CAP), x.require_oblique, seed)
        }
        Kind::JordanPerturbation => {
            let alpha = spec.eigenvalues.first().copied().unwrap_or(ONE);
            gen_jordan_perturbation(spec.dim, alpha, x.scale.unwrap_or(1.0), seed)
        }
        Kind::ScalarRotation => gen_scalar_rotation(spec.dim, x.theta.unwrap_or(fixtures::SQRT2_THETA), seed),
        Kind::NormaloidNonnormal => gen_normaloid_nonnormal(spec.dim, x.scale.unwrap_or(DEFAULT_NORMALOID_SCALE), seed),
        Kind::PlantedJordan => {
            let eig = (!spec.eigenvalues.is_empty()).then_some(spec.eigenvalues.as_slice());
            gen_planted_jordan(spec.dim, eig, x.cond_cap.unwrap_or(MAX_PLANTED_CAP), seed).map(|p| p.matrix)
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidInput("dim: must be a positive integer".into()));
    }
    if dim > MAX_DIM {
        return Err(Error::TooLarge { dim, max: MAX_DIM });
    }
    Ok(())
}

fn check_unimodular(eigenvalues: &[Complex64]) -> Result<()> {
    for z in eigenvalues {
        if !z.is_finite() || (z.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("eigenvalues: {z} is not unimodular")));
        }
    }
    Ok(())
}

/// `U D U*` with Haar `U` and `D` drawing from `eigenvalues`, each used at
/// least once. A single eigenvalue gives the scalar matrix exactly.
pub fn gen_unitary_finite_spectrum(dim: usize, eigenvalues: &[Complex64], seed: u64) -> Result<CMatrix> {
    check_dim(dim)?;
    check_unimodular(eigenvalues)?;
    if eigenvalues.is_empty() || eigenvalues.len() > dim {
        return Err(Error::InvalidInput(format!(
            "eigenvalues: need between 1 and {dim} values, got {}",
            eigenvalues.len()
        )));
    }
    if eigenvalues.len() == 1 {
        return Ok(CMatrix::identity(dim).scale(eigenvalues[0]));
    }
    let mut rng = random::rng(seed);
    let mut d: Vec<Complex64> = eigenvalues.to_vec();
    while d.len() < dim {
        d.push(eigenvalues[rng.random_range(0..eigenvalues.len())]);
    }
    Ok(gen_normal_with(&mut rng, &d))
}

/// `U diag(d) U*` for a Haar unitary `U`.
pub fn gen_normal(eigenvalues: &[Complex64], seed: u64) -> Result<CMatrix> {
    check_dim(eigenvalues.len())?;
    Ok(gen_normal_with(&mut random::rng(seed), eigenvalues))
}

fn gen_normal_with(rng: &mut Rng64, d: &[Complex64]) -> CMatrix {
    let u = random::unitary(rng, d.len());
    u.matmul(&CMatrix::diag(d)).matmul(&u.adjoint())
}

/// `U diag(sigma) V*` with `sigma_1 = 1`, `sigma_d = 1/cap` and the rest
/// log-uniform in between, together with its inverse.
fn similarity(rng: &mut Rng64, dim: usize, cap: f64) -> (CMatrix, CMatrix) {
    let u = random::unitary(rng, dim);
    let v = random::unitary(rng, dim);
    let sigma: Vec<f64> = (0..dim)
        .map(|i| match i {
            0 => 1.0,
            _ if i == dim - 1 => 1.0 / cap,
            _ => cap.powf(-rng.random::<f64>()),
        })
        .collect();
    let s = u
        .matmul(&CMatrix::diag(&sigma.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>()))
        .matmul(&v.adjoint());
    let inv = v
        .matmul(&CMatrix::diag(&sigma.iter().map(|&x| Complex64::new(1.0 / x, 0.0)).collect::<Vec<_>>()))
        .matmul(&u.adjoint());
    (s, inv)
}

/// Largest `|cos|` of the angle between two columns.
pub fn max_column_cosine(s: &CMatrix) -> f64 {
    let cols = s.columns();
    let mut best: f64 = 0.0;
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            best = best.max(cols[i].inner(&cols[j]).norm() / (cols[i].norm() * cols[j].norm()));
        }
    }
    best
}

/// Cosine of the largest admissible angle between some pair of eigenvectors.
pub const OBLIQUE_COS: f64 = 0.173_648_177_666_930_4; // cos 80 degrees

/// `S diag(eigenvalues) S^-1` with `cond(S) <= cond_cap`. For `cond_cap > 1`,
/// `S` is redrawn until `||S*S - I||_F > 0.1` and two eigenvectors meet at an
/// angle of at most 80 degrees. `dim = 2` with seed 0 uses `S = [[1,1],[0,1]]`.
pub fn gen_oblique(dim: usize, eigenvalues: &[Complex64], cond_cap: f64, require_oblique: bool, seed: u64) -> Result<CMatrix> {
    check_dim(dim)?;
    check_unimodular(eigenvalues)?;
    if eigenvalues.len() != dim {
        return Err(Error::InvalidInput(format!(
            "eigenvalues: need exactly {dim} values, got {}",
            eigenvalues.len()
        )));
    }
    if !random::separated(eigenvalues, 1e-6) {
        return Err(Error::InvalidInput("eigenvalues: must be distinct".into()));
    }
    if !(cond_cap.is_finite() && cond_cap >= 1.0) {
        return Err(Error::InvalidInput(format!("cond_cap: must be a finite real >= 1, got {cond_cap}")));
    }
    let d = CMatrix::diag(eigenvalues);
    if require_oblique && (cond_cap == 1.0 || dim == 1) {
        return Err(Error::Contradiction(format!(
            "a non-unitary output needs cond_cap > 1 and dim > 1, got cond_cap {cond_cap} and dim {dim}"
        )));
    }
    let phi2 = (3.0 + 5f64.sqrt()) / 2.0;
    if dim == 2 && seed == 0 && cond_cap >= phi2 {
        let s = fixtures::shear();
        let inv = CMatrix::from_real(2, &[1.0, -1.0, 0.0, 1.0]);
        return Ok(s.matmul(&d).matmul(&inv));
    }
    let mut rng = random::rng(seed);
    if cond_cap == 1.0 || dim == 1 {
        let u = random::unitary(&mut rng, dim);
        return Ok(u.matmul(&d).matmul(&u.adjoint()));
    }
    if 1.0 - cond_cap.powi(-2) <= 0.1 {
        return Err(Error::Contradiction(format!(
            "cond_cap {cond_cap} is too close to 1 for ||S*S - I||_F > 0.1"
        )));
    }
    for _ in 0..1000 {
        let (s, inv) = similarity(&mut rng, dim, cond_cap);
        let gram = &s.adjoint().matmul(&s) - &CMatrix::identity(dim);
        if gram.frobenius_norm() > 0.1 && max_column_cosine(&s) >= OBLIQUE_COS {
            return Ok(s.matmul(&d).matmul(&inv));
        }
    }
    Err(Error::NumericalFailure("no admissible oblique similarity in 1000 draws".into()))
}

/// `alpha I + N` with `N^2 = 0` and `||N|| = nilpotent_scale`. `N = B C` with
/// `range B` orthogonal to the row space of `C`, so `C B = 0`. `dim = 2`
/// with seed 0 uses `N = scale [[0,1],[0,0]]`.
pub fn gen_jordan_perturbation(dim: usize, alpha: Complex64, nilpotent_scale: f64, seed: u64) -> Result<CMatrix> {
    check_dim(dim)?;
    if dim < 2 {
        return Err(Error::InvalidInput("dim: a nonzero square-zero matrix needs dim >= 2".into()));
    }
    check_unimodular(&[alpha])?;
    if !(nilpotent_scale.is_finite() && nilpotent_scale > 0.0) {
        return Err(Error::InvalidInput(format!("scale: must be positive, got {nilpotent_scale}")));
    }
    let n = if dim == 2 && seed == 0 {
        fixtures::nilpotent_2x2().scale(Complex64::new(nilpotent_scale, 0.0))
    } else {
        let n = square_zero(&mut random::rng(seed), dim);
        let norm = crate::spectrum::operator_norm(&n)?;
        n.scale(Complex64::new(nilpotent_scale / norm, 0.0))
    };
    Ok(&CMatrix::identity(dim).scale(alpha) + &n)
}

fn square_zero(rng: &mut Rng64, dim: usize) -> CMatrix {
    let rank = rng.random_range(1..=dim / 2);
    let q = random::unitary(rng, dim);
    let range = q.column_range(0, rank);
    let rest = q.column_range(rank, dim);
    let b = range.matmul(&random::gaussian_matrix(rng, rank, rank));
    let c = random::gaussian_matrix(rng, rank, dim - rank).matmul(&rest.adjoint());
    b.matmul(&c)
}

/// `e^(2 pi i theta) I`.
pub fn gen_scalar_rotation(dim: usize, theta: f64, _seed: u64) -> Result<CMatrix> {
    check_dim(dim)?;
    if !theta.is_finite() {
        return Err(Error::InvalidInput("theta: must be finite".into()));
    }
    Ok(CMatrix::identity(dim).scale(fixtures::rotation(theta)))
}

/// `W (N (+) K) W*` with `N` normal, `r(N) = ||N|| = scale` attained by one
/// eigenvalue (the others have modulus in `[0.1, 0.9] scale`), `K` strictly upper
/// triangular and `0 < ||K|| <= scale`, `W` Haar. `dim = 3` with seed 0 gives
/// `diag(scale) (+) [[0, min(1, scale)], [0, 0]]`.
pub fn gen_normaloid_nonnormal(dim: usize, scale: f64, seed: u64) -> Result<CMatrix> {
    check_dim(dim)?;
    if dim < 3 {
        return Err(Error::InvalidInput("dim: must be at least 3".into()));
    }
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::InvalidInput(format!("scale: must be positive, got {scale}")));
    }
    if dim == 3 && seed == 0 {
        let n = CMatrix::from_real(1, &[scale]);
        let k = fixtures::nilpotent_2x2().scale(Complex64::new(scale.min(1.0), 0.0));
        return Ok(CMatrix::direct_sum(&[&n, &k]));
    }
    let mut rng = random::rng(seed);
    let k_dim = rng.random_range(2..=(dim - 1).min(4));
    let n_dim = dim - k_dim;
    // Kept apart from each other and from the eigenvalue 0 of K.
    let eig = loop {
        let mut eig = vec![ZERO, Complex64::from_polar(scale, rng.random::<f64>() * std::f64::consts::TAU)];
        for _ in 1..n_dim {
            let m = scale * (0.1 + 0.8 * rng.random::<f64>());
            eig.push(Complex64::from_polar(m, rng.random::<f64>() * std::f64::consts::TAU));
        }
        if random::separated(&eig, 0.05 * scale) {
            eig.remove(0);
            break eig;
        }
    };
    let n = gen_normal_with(&mut rng, &eig);
    let raw = CMatrix::from_fn(k_dim, k_dim, |i, j| if j > i { random::gaussian(&mut rng) } else { ZERO });
    let target = scale * (0.3 + 0.7 * rng.random::<f64>());
    let k = raw.scale(Complex64::new(target / crate::spectrum::operator_norm(&raw)?, 0.0));
    let w = random::unitary(&mut rng, dim);
    Ok(w.matmul(&CMatrix::direct_sum(&[&n, &k])).matmul(&w.adjoint()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlantedRoot {
    pub z: Complex64,
    pub index: usize,
    pub multiplicity: usize,
    /// Jordan block sizes at `z`.
    pub blocks: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Planted {
    pub matrix: CMatrix,
    pub roots: Vec<PlantedRoot>,
}

/// Largest Jordan block drawn by [`gen_planted_jordan`].
pub const MAX_PLANTED_BLOCK: usize = 4;
/// Minimum distance between drawn planted eigenvalues.
pub const PLANTED_SEPARATION: f64 = 0.25;

/// Draws up to 4 distinct eigenvalues of modulus 1 or in `[0.2, 0.9]`.
pub fn draw_planted_eigenvalues(rng: &mut Rng64, dim: usize) -> Vec<Complex64> {
    let m = rng.random_range(1..=dim.min(4));
    loop {
        let zs: Vec<Complex64> = (0..m)
            .map(|_| {
                let r = if rng.random::<f64>() < 0.4 { 1.0 } else { 0.2 + 0.7 * rng.random::<f64>() };
                Complex64::from_polar(r, rng.random::<f64>() * std::f64::consts::TAU)
            })
            .collect();
        if random::separated(&zs, PLANTED_SEPARATION) {
            return zs;
        }
    }
}

/// `S J S^-1` with a seeded Jordan matrix `J` and `cond(S) <= cond_cap <= 100`.
/// Multiplicities and block sizes (at most 4) are drawn from the seed.
pub fn gen_planted_jordan(dim: usize, eigenvalues: Option<&[Complex64]>, cond_cap: f64, seed: u64) -> Result<Planted> {
    check_dim(dim)?;
    if !(1.0..=MAX_PLANTED_CAP).contains(&cond_cap) {
        return Err(Error::InvalidInput(format!("cond_cap: must lie in [1, 100], got {cond_cap}")));
    }
    let mut rng = random::rng(seed);
    let zs = match eigenvalues {
        Some(z) => z.to_vec(),
        None => draw_planted_eigenvalues(&mut rng, dim),
    };
    if zs.is_empty() || zs.len() > dim || zs.iter().any(|z| !z.is_finite()) {
        return Err(Error::InvalidInput(format!("eigenvalues: need between 1 and {dim} finite values")));
    }
    if !random::separated(&zs, 1e-3) {
        return Err(Error::InvalidInput("eigenvalues: must be distinct".into()));
    }
    let mut mult = vec![1usize; zs.len()];
    for _ in zs.len()..dim {
        mult[rng.random_range(0..zs.len())] += 1;
    }
    let mut roots = Vec::with_capacity(zs.len());
    let mut diag = Vec::with_capacity(dim);
    let mut superdiag = Vec::with_capacity(dim);
    for (&z, &m) in zs.iter().zip(&mult) {
        let mut left = m;
        let mut blocks = Vec::new();
        while left > 0 {
            let size = rng.random_range(1..=left.min(MAX_PLANTED_BLOCK));
            blocks.push(size);
            for i in 0..size {
                diag.push(z);
                superdiag.push(i + 1 < size);
            }
            left -= size;
        }
        roots.push(PlantedRoot {
            z,
            index: *blocks.iter().max().unwrap_or(&1),
            multiplicity: m,
            blocks,
        });
    }
    let mut j = CMatrix::diag(&diag);
    for i in 0..dim - 1 {
        if superdiag[i] {
            j[(i, i + 1)] = ONE;
        }
    }
    let matrix = if cond_cap == 1.0 {
        let u = random::unitary(&mut rng, dim);
        u.matmul(&j).matmul(&u.adjoint())
    } else {
        let (s, inv) = similarity(&mut rng, dim, cond_cap);
        s.matmul(&j).matmul(&inv)
    };
    Ok(Planted { matrix, roots })
}

/// Projection of `h` onto the kernel of `n` (numerical, via SVD).
pub fn kernel_component(n: &CMatrix, h: &CVector) -> Result<CVector> {
    let svd = crate::linalg::svd(n)?;
    let smax = svd.singular_values.first().copied().unwrap_or(0.0);
    let k = svd.null_space(crate::spectrum::default_rank_tol(n.dim(), smax));
    Ok(k.matmul(&k.adjoint()).mul_vec(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic;
    use crate::criteria;
    use crate::matrix::I;

    #[test]
    fn kind_names_round_trip() {
        for k in Kind::ALL {
            assert_eq!(k.name().parse::<Kind>().unwrap(), k);
            assert_eq!(k.short().parse::<Kind>().unwrap(), k);
        }
        assert!("spiral".parse::<Kind>().is_err());
    }

    #[test]
    fn unitary_examples() {
        let a = gen_unitary_finite_spectrum(4, &[ONE, -ONE, I, -I], 7).unwrap();
        assert!(criteria::is_unitary(&a));
        assert_eq!(algebraic::minimal_polynomial(&a).unwrap().degree, 4);
        assert_eq!(gen_unitary_finite_spectrum(1, &[ONE], 0).unwrap(), CMatrix::identity(1));
        let w = fixtures::rotation(1.0 / 3.0);
        assert_eq!(gen_unitary_finite_spectrum(3, &[w], 5).unwrap(), CMatrix::identity(3).scale(w));
        assert!(gen_unitary_finite_spectrum(2, &[Complex64::new(2.0, 0.0)], 0).is_err());
    }

    #[test]
    fn oblique_examples() {
        let a = gen_oblique(2, &[ONE, -ONE], 50.0, true, 0).unwrap();
        assert_eq!(a, fixtures::oblique_2x2());
        let u = gen_oblique(3, &[ONE, I, -ONE], 1.0, false, 4).unwrap();
        assert!(criteria::is_unitary(&u));
        assert!(matches!(gen_oblique(2, &[ONE, -ONE], 1.0, true, 1), Err(Error::Contradiction(_))));
        let a = gen_oblique(4, &[ONE, I, -ONE, -I], 50.0, true, 3).unwrap();
        assert!(criteria::is_power_bounded(&a).unwrap());
        assert!(!criteria::is_unitary(&a));
    }

    #[test]
    fn jordan_perturbation_examples() {
        assert_eq!(gen_jordan_perturbation(2, ONE, 1.0, 0).unwrap(), fixtures::jordan_2x2());
        let a = gen_jordan_perturbation(5, I, 2.5, 9).unwrap();
        let n = a.shift(I);
        assert!(n.matmul(&n).frobenius_norm() < 1e-13);
        assert!((crate::spectrum::operator_norm(&n).unwrap() - 2.5).abs() < 1e-12);
        assert!(!criteria::is_normaloid(&a));
        assert!(crate::spectrum::operator_norm(&a).unwrap() > 1.0);
        let p = algebraic::minimal_polynomial(&a).unwrap();
        assert_eq!(p.degree, 2);
        assert!(gen_jordan_perturbation(1, ONE, 1.0, 0).is_err());
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(gen_scalar_rotation(1, 0.25, 0).unwrap(), CMatrix::diag(&[I]));
        let a = gen_scalar_rotation(3, fixtures::SQRT2_THETA, 0).unwrap();
        assert!(criteria::is_unitary(&a));
    }

    #[test]
    fn normaloid_examples() {
        assert_eq!(gen_normaloid_nonnormal(3, 3.0, 0).unwrap(), fixtures::normaloid_nonnormal_3x3());
        for seed in 1..6 {
            let a = gen_normaloid_nonnormal(6, 1.0, seed).unwrap();
            assert!(criteria::is_normaloid(&a));
            let comm = &a.adjoint().matmul(&a) - &a.matmul(&a.adjoint());
            assert!(comm.frobenius_norm() > 1e-3);
        }
    }

    #[test]
    fn planted_structure_is_recovered() {
        for seed in 0..10 {
            let p = gen_planted_jordan(6, None, 100.0, seed).unwrap();
            let mp = algebraic::minimal_polynomial(&p.matrix).unwrap();
            assert_eq!(mp.roots.len(), p.roots.len(), "seed {seed}");
            for r in &p.roots {
                assert!(mp.roots.iter().any(|q| (q.z - r.z).norm() < 1e-6 && q.index == r.index), "seed {seed}");
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        for kind in Kind::ALL {
            let spec = InstanceSpec {
                kind,
                dim: 4,
                eigenvalues: vec![],
                seed: 11,
                extra: Extra::default(),
            };
            assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap(), "{kind:?}");
        }
    }
}
