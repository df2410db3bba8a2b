//! Normaloid equivalences, the normal-contraction orbit limit, the growth
//! bound `||A^n|| <= alpha n^kappa r^n`, uniform and strong stability, and
//! root limits of orbits.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebraic::{self, Decomposition, MinimalPoly};
use crate::criteria::{self, Classification, OrbitRecord, COMPONENT_TOL, UNIMODULAR_TOL};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{CMatrix, CVector};
use crate::sequence::fit_growth;
use crate::settings::Settings;
use crate::spectrum::{clustering_radius, operator_norm};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormaloidEquivalence {
    pub orbits_convergent: bool,
    pub power_bounded: bool,
    pub contraction: bool,
}

impl NormaloidEquivalence {
    pub fn agree(&self) -> bool {
        self.orbits_convergent == self.power_bounded && self.power_bounded == self.contraction
    }
}

/// For normaloid `A`: all probe orbits convergent, power bounded, and
/// `||A|| <= 1` must agree.
pub fn normaloid_equivalence(a: &CMatrix) -> Result<NormaloidEquivalence> {
    normaloid_equivalence_with(a, &Settings::default())
}

pub fn normaloid_equivalence_with(a: &CMatrix, s: &Settings) -> Result<NormaloidEquivalence> {
    a.ensure_operator()?;
    if !criteria::normaloid_check(a)?.normaloid {
        return Err(Error::Precondition("the matrix is not normaloid".into()));
    }
    let (p, d) = algebraic::analyze_with(a, s.rank_rel)?;
    let orbits = criteria::probe_orbits(a, Some(&d), s)?;
    let eq = NormaloidEquivalence {
        orbits_convergent: orbits.iter().all(|(_, r)| r.classification.is_convergent()),
        power_bounded: criteria::power_bounded_checked(a, &p, &d)?,
        contraction: criteria::is_contraction(a)?,
    };
    if !eq.agree() {
        return Err(Error::Inconsistency(format!("normaloid conditions disagree: {eq:?}")));
    }
    Ok(eq)
}

/// `<Qh, h>` with `Q` the orthogonal projection onto the eigenvectors of
/// modulus 1, for a normal contraction `A`. This is `lim ||A^n h||^2`, which
/// is checked at `n = n_max` to within `1e-6`.
pub fn normal_limit(a: &CMatrix, h: &CVector) -> Result<f64> {
    normal_limit_with(a, h, None, &Settings::default())
}

pub fn normal_limit_with(a: &CMatrix, h: &CVector, d: Option<&Decomposition>, s: &Settings) -> Result<f64> {
    a.ensure_operator()?;
    if h.len() != a.dim() || !h.is_finite() {
        return Err(Error::InvalidInput(format!("h: expected {} finite entries", a.dim())));
    }
    let norm = operator_norm(a)?;
    let comm = &a.adjoint().matmul(a) - &a.matmul(&a.adjoint());
    if comm.frobenius_norm() > 1e-10 * norm * norm {
        return Err(Error::Precondition("the matrix is not normal".into()));
    }
    if norm > 1.0 + 1e-10 {
        return Err(Error::Precondition(format!("the matrix is not a contraction (norm {norm})")));
    }
    let owned;
    let d = match d {
        Some(d) => d,
        None => {
            owned = algebraic::analyze_with(a, s.rank_rel)?.1;
            &owned
        }
    };
    let q: f64 = d
        .blocks
        .iter()
        .filter(|b| b.z.norm() >= 1.0 - UNIMODULAR_TOL)
        .map(|b| b.basis.adjoint().mul_vec(h).norm().powi(2))
        .sum();
    let orbit = criteria::iterate(a, h, s.n_max);
    let last = orbit.norms.last().copied().unwrap_or(0.0);
    let gap = (last * last - q).abs();
    if gap > NORMAL_LIMIT_TOL * h.norm().powi(2).max(1.0) {
        return Err(Error::Inconsistency(format!(
            "||A^{}h||^2 = {} but <Qh,h> = {q}",
            s.n_max,
            last * last
        )));
    }
    Ok(q)
}

/// Certified bound `||A^n|| <= alpha n^kappa r^n` for `n >= valid_from`.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthBound {
    pub kappa: usize,
    pub alpha: f64,
    pub spectral_radius: f64,
    pub valid_from: usize,
    /// Largest observed `||A^n|| / (alpha n^kappa r^n)` for `valid_from <= n <= horizon`.
    /// When `r = 0` the bound is `A^n = 0` and the ratio is taken against
    /// `1e-10 max(1, ||A||)^n` instead.
    pub max_violation_ratio: f64,
    pub horizon: usize,
    /// Rows `(n, ||A^n||, bound_n)`.
    #[serde(skip)]
    pub table: Vec<(usize, f64, f64)>,
}

impl GrowthBound {
    pub fn holds(&self) -> bool {
        self.max_violation_ratio <= 1.0 + GROWTH_SLACK
    }
}

pub const GROWTH_HORIZON: usize = 1000;
/// Relative slack allowed on the growth bound.
pub const GROWTH_SLACK: f64 = 1e-8;
/// `| ||A^n h||^2 - <Qh, h> |` allowed at the horizon.
pub const NORMAL_LIMIT_TOL: f64 = 1e-6;
/// Allowed gap between empirical and structural root limits.
pub const ROOT_LIMIT_TOL: f64 = 1e-3;

pub fn growth_bound(a: &CMatrix) -> Result<GrowthBound> {
    let (p, d) = algebraic::analyze(a)?;
    growth_bound_from(a, &p, &d, GROWTH_HORIZON)
}

/// `alpha = sum_j ||P_j|| sum_{k < i_j} ||N_j^k|| / (k! |z_j|^k)`, with `r` in
/// place of `|z_j|` for a zero root, and `kappa = deg p - 1`.
pub fn growth_bound_from(a: &CMatrix, p: &MinimalPoly, d: &Decomposition, horizon: usize) -> Result<GrowthBound> {
    let r = p.spectral_radius();
    if r > 1.0 + 1e-10 {
        return Err(Error::OutOfScope(format!("spectral radius {r} exceeds 1")));
    }
    let norm = operator_norm(a)?;
    let kappa = p.degree - 1;
    let dim = a.dim();
    let mut table = Vec::with_capacity(horizon);

    if r <= clustering_radius(norm) {
        // Nilpotent: A^n = 0 from n = deg p on.
        let mut pw = CMatrix::identity(dim);
        let mut alpha: f64 = 1.0;
        let mut ratio: f64 = 0.0;
        for n in 1..=horizon {
            pw = pw.matmul(a);
            let f = pw.frobenius_norm();
            if n < p.degree {
                alpha = alpha.max(operator_norm(&pw)?);
                continue;
            }
            let actual = if f == 0.0 { 0.0 } else { operator_norm(&pw)? };
            table.push((n, actual, 0.0));
            ratio = ratio.max(actual / (1e-10 * norm.max(1.0).powi(n as i32)));
            if f == 0.0 {
                table.extend((n + 1..=horizon).map(|m| (m, 0.0, 0.0)));
                break;
            }
        }
        return Ok(GrowthBound {
            kappa,
            alpha,
            spectral_radius: 0.0,
            valid_from: p.degree,
            max_violation_ratio: ratio,
            horizon,
            table,
        });
    }

    let mut alpha = 0.0;
    for b in &d.blocks {
        let n = b.nilpotent_part(a);
        let denom = if b.z.norm() <= clustering_radius(norm) { r } else { b.z.norm() };
        let mut nk = CMatrix::identity(n.dim());
        let mut fact = 1.0;
        let mut aj = 0.0;
        for k in 0..b.index {
            if k > 0 {
                nk = nk.matmul(&n);
                fact *= k as f64;
            }
            aj += operator_norm(&nk)? / (fact * denom.powi(k as i32));
        }
        alpha += operator_norm(&b.projection)? * aj;
    }

    // Check on B = A / r, whose powers grow at most polynomially.
    let scaled = a.scale(Complex64::new(1.0 / r, 0.0));
    let mut pw = CMatrix::identity(dim);
    let mut ratio: f64 = 0.0;
    for n in 1..=horizon {
        pw = pw.matmul(&scaled);
        let bound = alpha * (n as f64).powi(kappa as i32);
        let op = operator_norm(&pw)?;
        ratio = ratio.max(op / bound);
        let rn = r.powi(n as i32);
        table.push((n, op * rn, bound * rn));
    }
    Ok(GrowthBound {
        kappa,
        alpha,
        spectral_radius: r,
        valid_from: 1,
        max_violation_ratio: ratio,
        horizon,
        table,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeLimit {
    pub label: String,
    /// `lim ||A^n h||^2` when the orbit norms converge.
    pub limit_norm_sq: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityVerdict {
    pub uniformly_stable: bool,
    pub strongly_stable: bool,
    pub power_bounded: bool,
    pub limit_projection_norm_sq: Vec<ProbeLimit>,
    pub warnings: Vec<String>,
}

pub fn uniform_stability(a: &CMatrix) -> Result<StabilityVerdict> {
    uniform_stability_with(a, &Settings::default())
}

pub fn uniform_stability_with(a: &CMatrix, s: &Settings) -> Result<StabilityVerdict> {
    a.ensure_operator()?;
    let analysis = algebraic::analyze_with(a, s.rank_rel).ok();
    uniform_stability_from(a, analysis.as_ref(), s)
}

/// `r(A) < 1` decides uniform stability; probe orbits decide strong
/// stability; the checked structural test decides power boundedness.
pub fn uniform_stability_from(a: &CMatrix, analysis: Option<&(MinimalPoly, Decomposition)>, s: &Settings) -> Result<StabilityVerdict> {
    let mut warnings = Vec::new();
    let r = match analysis {
        Some((p, _)) => p.spectral_radius(),
        None => linalg::eigenvalues(a)?.iter().map(|z| z.norm()).fold(0.0, f64::max),
    };
    let uniformly_stable = r < 1.0 - 1e-10;

    let logs = criteria::power_log_norms(a, s.n_max);
    let last = logs.last().copied().unwrap_or(f64::NEG_INFINITY);
    let decaying = last < (1e-12f64).ln() || fit_growth(&logs).is_some_and(|f| f.b < DECAY_SLOPE);
    // Radii in [1 - 1e-3, 1 - 1e-10) decay too slowly to judge on the horizon.
    let visible = r < 1.0 - 1e-3 || !uniformly_stable;
    if visible && decaying != uniformly_stable {
        warnings.push(format!(
            "r(A) = {r} but ||A^{}|| = {:e} {} decay",
            s.n_max,
            last.exp(),
            if decaying { "shows" } else { "does not show" }
        ));
    }

    let d = analysis.map(|x| &x.1);
    let orbits = criteria::probe_orbits(a, d, s)?;
    let strongly_stable = orbits.iter().all(|(_, r)| vanishes(r, s));
    let power_bounded = match analysis {
        Some((p, d)) => criteria::power_bounded_checked(a, p, d).unwrap_or_else(|e| {
            warnings.push(e.to_string());
            criteria::power_bounded_structural(p)
        }),
        None => orbits.iter().all(|(_, r)| r.classification.is_bounded()),
    };
    if (uniformly_stable && !strongly_stable) || (strongly_stable && !power_bounded) {
        warnings.push("uniform => strong => power bounded fails on this matrix".into());
    }
    Ok(StabilityVerdict {
        uniformly_stable,
        strongly_stable,
        power_bounded,
        limit_projection_norm_sq: orbits
            .iter()
            .map(|(label, r)| ProbeLimit {
                label: label.clone(),
                limit_norm_sq: match r.classification {
                    Classification::Convergent { limit } => Some(limit * limit),
                    _ => None,
                },
            })
            .collect(),
        warnings,
    })
}

/// Fitted log-slope below which a sequence counts as decaying. Bounded
/// oscillation and polynomial growth fit well above it.
pub const DECAY_SLOPE: f64 = -1e-4;

/// `A^n h -> 0` on the horizon: tiny final norm or a decaying fit.
fn vanishes(r: &OrbitRecord, s: &Settings) -> bool {
    let h = r.norms[0];
    let last = r.norms.last().copied().unwrap_or(0.0);
    last <= s.rule.tol * h || fit_growth(&r.log_norms).is_some_and(|f| f.b < DECAY_SLOPE)
}

/// Largest, over `targets` equispaced points `t` of the unit circle, of the
/// smallest `||A^n h - t h|| / ||h||` for `n <= n_max`.
pub fn circle_density(a: &CMatrix, h: &CVector, n_max: usize, targets: usize) -> Result<f64> {
    a.ensure_operator()?;
    let hn = h.norm();
    if hn == 0.0 {
        return Err(Error::Precondition("h must be nonzero".into()));
    }
    let pts: Vec<Complex64> = (0..targets)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / targets as f64))
        .collect();
    let mut best = vec![f64::INFINITY; targets];
    let mut v = h.clone();
    for n in 0..=n_max {
        if n > 0 {
            v = a.mul_vec(&v);
        }
        for (t, b) in pts.iter().zip(best.iter_mut()) {
            let dist = (&v - &h.scale(*t)).norm() / hn;
            if dist < *b {
                *b = dist;
            }
        }
    }
    Ok(best.into_iter().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootLimit {
    pub empirical: f64,
    /// `max{|z_j| : P_j h != 0}`.
    pub predicted: f64,
}

/// Empirical `lim ||A^n h||^(1/n)`, asserted within `1e-3` of the prediction.
pub fn orbit_root_limit(a: &CMatrix, h: &CVector, n_max: usize) -> Result<f64> {
    let (_, d) = algebraic::analyze(a)?;
    orbit_root_limit_from(a, &d, h, n_max).map(|r| r.empirical)
}

/// The `n`-th root converges like `1 + O(log n / n)`, too slowly for the
/// window rule; the estimate is `e^b` from the fit `ln s_n ~ a + d ln n + b n`.
pub fn orbit_root_limit_from(a: &CMatrix, d: &Decomposition, h: &CVector, n_max: usize) -> Result<RootLimit> {
    a.ensure_operator()?;
    let hn = h.norm();
    if h.len() != a.dim() || !h.is_finite() || hn == 0.0 {
        return Err(Error::Precondition("h must be finite, nonzero and of matching size".into()));
    }
    if n_max < 100 {
        return Err(Error::Precondition(format!("n_max must be at least 100, got {n_max}")));
    }
    let predicted = d
        .blocks
        .iter()
        .filter(|b| b.projection.mul_vec(h).norm() > COMPONENT_TOL * hn)
        .map(|b| b.z.norm())
        .fold(0.0, f64::max);
    let orbit = criteria::iterate(a, h, n_max);
    let empirical = if orbit.logs.contains(&f64::NEG_INFINITY) {
        0.0
    } else if orbit.overflow {
        let n = orbit.logs.len() - 1;
        ((orbit.logs[n] - orbit.logs[n / 2]) / (n - n / 2) as f64).exp()
    } else {
        match fit_growth(&orbit.logs) {
            Some(f) => f.b.exp(),
            None => return Err(Error::NumericalFailure("orbit too short to fit".into())),
        }
    };
    if (empirical - predicted).abs() > ROOT_LIMIT_TOL {
        return Err(Error::Inconsistency(format!(
            "root limit {empirical} differs from the structural value {predicted}"
        )));
    }
    Ok(RootLimit { empirical, predicted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matrix::{I, ONE};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normaloid_equivalence_examples() {
        let a = CMatrix::diag(&[c(0.5, 0.0), fixtures::rotation(0.3)]);
        let e = normaloid_equivalence(&a).unwrap();
        assert!(e.orbits_convergent && e.power_bounded && e.contraction);

        let e = normaloid_equivalence(&CMatrix::from_real(2, &[2.0, 0.0, 0.0, 1.0])).unwrap();
        assert!(!e.orbits_convergent && !e.power_bounded && !e.contraction);

        let e = normaloid_equivalence(&fixtures::normaloid_nonnormal_3x3()).unwrap();
        assert!(!e.orbits_convergent && !e.power_bounded && !e.contraction);

        assert!(matches!(normaloid_equivalence(&fixtures::jordan_2x2()), Err(Error::Precondition(_))));
    }

    #[test]
    fn normal_limit_examples() {
        let h = CVector::from_real(&[1.0, 1.0]);
        let q = normal_limit(&CMatrix::from_real(2, &[1.0, 0.0, 0.0, 0.5]), &h).unwrap();
        assert!((q - 1.0).abs() < 1e-12);
        let q = normal_limit(&CMatrix::from_real(2, &[0.9, 0.0, 0.0, 0.5]), &h).unwrap();
        assert!(q.abs() < 1e-12);
        let a = CMatrix::diag(&[fixtures::rotation(fixtures::SQRT2_THETA), c(0.3, 0.0)]);
        let h = CVector(vec![c(0.6, 0.2), c(-1.0, 0.5)]);
        let q = normal_limit(&a, &h).unwrap();
        assert!((q - 0.4).abs() < 1e-12);
        assert!(matches!(normal_limit(&fixtures::jordan_2x2(), &h), Err(Error::Precondition(_))));
    }

    #[test]
    fn growth_bound_examples() {
        let g = growth_bound(&fixtures::jordan_2x2()).unwrap();
        assert_eq!(g.kappa, 1);
        assert!((g.alpha - 2.0).abs() < 1e-12);
        assert!(g.holds(), "{}", g.max_violation_ratio);
        // ||A^n|| = (n + sqrt(n^2 + 4)) / 2.
        for &(n, norm, _) in g.table.iter().take(50) {
            let nf = n as f64;
            assert!((norm - (nf + (nf * nf + 4.0).sqrt()) / 2.0).abs() < 1e-10 * nf);
        }

        let u = CMatrix::diag(&[ONE, I, -ONE]);
        let g = growth_bound(&u).unwrap();
        assert_eq!(g.kappa, 2);
        assert!(g.holds());

        let g = growth_bound(&fixtures::nilpotent_2x2()).unwrap();
        assert_eq!(g.valid_from, 2);
        assert_eq!(g.spectral_radius, 0.0);
        assert!(g.table.iter().all(|&(_, norm, _)| norm == 0.0));
        assert!(g.holds());

        assert!(matches!(growth_bound(&CMatrix::from_real(1, &[1.5])), Err(Error::OutOfScope(_))));
    }

    #[test]
    fn uniform_stability_examples() {
        let v = uniform_stability(&CMatrix::diag(&[c(0.99, 0.0), c(0.0, 0.5)])).unwrap();
        assert!(v.uniformly_stable && v.strongly_stable && v.power_bounded);
        assert!(v.warnings.is_empty(), "{:?}", v.warnings);

        let a = CMatrix::identity(2).scale(fixtures::rotation(fixtures::SQRT2_THETA));
        let v = uniform_stability(&a).unwrap();
        assert!(!v.uniformly_stable && !v.strongly_stable && v.power_bounded);
        assert!(circle_density(&a, &CVector::basis(2, 0), 100_000, 100).unwrap() <= 1e-2);

        let v = uniform_stability(&fixtures::jordan_2x2()).unwrap();
        assert!(!v.uniformly_stable && !v.strongly_stable && !v.power_bounded);
    }

    #[test]
    fn root_limit_examples() {
        let u = fixtures::dft(5);
        let h = CVector::from_real(&[0.6, 0.0, 0.8, 0.0, 0.0]);
        assert!((orbit_root_limit(&u, &h, 2000).unwrap() - 1.0).abs() < 1e-3);
        let a = CMatrix::from_real(2, &[0.5, 0.0, 0.0, 0.25]);
        let r = orbit_root_limit(&a, &CVector::from_real(&[1.0, 1.0]), 2000).unwrap();
        assert!((r - 0.5).abs() < 1e-3);
        let r = orbit_root_limit(&a, &CVector::from_real(&[0.0, 1.0]), 2000).unwrap();
        assert!((r - 0.25).abs() < 1e-3);
        let r = orbit_root_limit(&fixtures::nilpotent_2x2(), &CVector::from_real(&[0.0, 1.0]), 200).unwrap();
        assert_eq!(r, 0.0);
    }
}
