//! The four conditions of the unitarity criterion for algebraic operators with
//! unimodular spectrum, power boundedness, and finite-horizon orbit analysis.
//!
//! For such operators the following agree: unitary; normaloid; contraction;
//! every orbit norm sequence `||A^n h||` convergent. Orbit convergence is
//! certified on a finite probe set only.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic::{self, Decomposition, MinimalPoly};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{CMatrix, CVector, I};
use crate::random;
use crate::sequence::{self, fit_growth, growth_kind, WindowRule};
use crate::settings::Settings;
use crate::spectrum::operator_norm;

/// Tolerance on `| |z| - 1 |` for a root to count as unimodular.
pub const UNIMODULAR_TOL: f64 = 1e-8;
/// Relative size below which a block component or power is treated as zero.
pub const COMPONENT_TOL: f64 = 1e-10;
/// Number of random unit probes added to the basis vectors.
pub const RANDOM_PROBES: usize = 20;
/// Horizon of the empirical power-boundedness check.
pub const POWER_HORIZON: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Classification {
    Convergent { limit: f64 },
    BoundedNonconvergent,
    PolynomialGrowth { degree: u32 },
    ExponentialGrowth { rate: f64 },
}

impl Classification {
    pub fn is_convergent(&self) -> bool {
        matches!(self, Classification::Convergent { .. })
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Classification::Convergent { .. } | Classification::BoundedNonconvergent)
    }

    /// Same kind, and the same degree, rate within 1%, or limit within `1e-5`.
    pub fn agrees_with(&self, other: &Classification) -> bool {
        use Classification::*;
        match (self, other) {
            (Convergent { limit: a }, Convergent { limit: b }) => (a - b).abs() <= 1e-5 * a.abs().max(b.abs()).max(1.0),
            (BoundedNonconvergent, BoundedNonconvergent) => true,
            (PolynomialGrowth { degree: a }, PolynomialGrowth { degree: b }) => a == b,
            (ExponentialGrowth { rate: a }, ExponentialGrowth { rate: b }) => (a - b).abs() <= 1e-2 * a.max(*b),
            _ => false,
        }
    }
}

/// Orbit norms `||A^n h||`, `n = 0..=n_max` (shorter after an overflow).
#[derive(Debug, Clone, Serialize)]
pub struct OrbitRecord {
    pub h: CVector,
    pub norms: Vec<f64>,
    /// `N(h)`: largest `k` with `(A - z_j I)^k P_j h != 0` over the dominant blocks.
    pub structural_exponent: Option<usize>,
    pub classification: Classification,
    /// Classification predicted from the decomposition, when one is available.
    pub predicted: Option<Classification>,
    #[serde(skip)]
    pub log_norms: Vec<f64>,
}

const LOG_OVERFLOW: f64 = 690.775_527_898_213_7; // ln 1e300

pub(crate) struct Orbit {
    pub norms: Vec<f64>,
    pub logs: Vec<f64>,
    pub overflow: bool,
}

/// Iterates `v <- A v`, rescaling by exact powers of two so that neither the
/// vector nor its logged norm loses precision.
pub(crate) fn iterate(a: &CMatrix, h: &CVector, n_max: usize) -> Orbit {
    let mut norms = Vec::with_capacity(n_max + 1);
    let mut logs = Vec::with_capacity(n_max + 1);
    let mut v = h.clone();
    let mut exp2 = 0i32;
    let mut overflow = false;
    for n in 0..=n_max {
        if n > 0 {
            v = a.mul_vec(&v);
        }
        let nv = v.norm();
        if nv == 0.0 {
            norms.resize(n_max + 1, 0.0);
            logs.resize(n_max + 1, f64::NEG_INFINITY);
            break;
        }
        let log = nv.ln() + exp2 as f64 * std::f64::consts::LN_2;
        norms.push(log.exp());
        logs.push(log);
        if log > LOG_OVERFLOW {
            overflow = true;
            break;
        }
        let e = nv.log2().round() as i32;
        if e != 0 {
            v = v.scale(Complex64::new(pow2(-e), 0.0));
            exp2 += e;
        }
    }
    Orbit { norms, logs, overflow }
}

/// `2^e`, exact for the exponents produced by the rescaling.
fn pow2(e: i32) -> f64 {
    f64::from_bits(((e + 1023).clamp(1, 2046) as u64) << 52)
}

/// Empirical classification ladder: overflow, window rule, then the growth fit.
pub(crate) fn classify(orbit: &Orbit, rule: &WindowRule) -> Classification {
    if orbit.overflow {
        let n = orbit.logs.len() - 1;
        let half = n / 2;
        let slope = (orbit.logs[n] - orbit.logs[half]) / (n - half).max(1) as f64;
        let rate = match fit_growth(&orbit.logs) {
            Some(f) if f.b > 0.0 => f.b.exp(),
            _ => slope.exp(),
        };
        return Classification::ExponentialGrowth { rate: rate.max(1.0) };
    }
    if let Some(limit) = rule.limit(&orbit.norms) {
        return Classification::Convergent { limit: limit.max(0.0) };
    }
    match fit_growth(&orbit.logs).as_ref().and_then(growth_kind) {
        Some(Ok(rate)) => Classification::ExponentialGrowth { rate },
        Some(Err(degree)) => Classification::PolynomialGrowth { degree: degree.max(1) },
        None => Classification::BoundedNonconvergent,
    }
}

/// Structural exponent and predicted classification of the orbit of `h`.
pub fn predict_orbit(a: &CMatrix, d: &Decomposition, h: &CVector, rule: &WindowRule) -> (usize, Classification) {
    let hn = h.norm();
    let parts: Vec<(Complex64, usize, CVector)> = d
        .blocks
        .iter()
        .map(|b| (b.z, b.index, b.projection.mul_vec(h)))
        .filter(|(_, _, u)| u.norm() > COMPONENT_TOL * hn)
        .collect();
    let rho = parts.iter().map(|p| p.0.norm()).fold(0.0, f64::max);
    let top: Vec<&(Complex64, usize, CVector)> = parts.iter().filter(|p| p.0.norm() >= rho - UNIMODULAR_TOL).collect();
    let exponent = top
        .iter()
        .map(|(z, index, u)| {
            let shifted = a.shift(*z);
            let mut v = u.clone();
            let mut k = 0;
            for step in 1..*index {
                v = shifted.mul_vec(&v);
                if v.norm() > COMPONENT_TOL * hn {
                    k = step;
                } else {
                    break;
                }
            }
            k
        })
        .max()
        .unwrap_or(0);

    let predicted = if rho > 1.0 + UNIMODULAR_TOL {
        Classification::ExponentialGrowth { rate: rho }
    } else if rho < 1.0 - UNIMODULAR_TOL {
        Classification::Convergent { limit: 0.0 }
    } else if exponent > 0 {
        Classification::PolynomialGrowth { degree: exponent as u32 }
    } else {
        // ||sum_j z_j^n u_j||^2 = sum_{j,k} (z_j conj z_k)^n <u_j, u_k>; it
        // converges iff the coefficient of every ratio w != 1 vanishes.
        let mut groups: Vec<(Complex64, Complex64)> = Vec::new();
        for (j, (zj, _, uj)) in top.iter().enumerate() {
            for (k, (zk, _, uk)) in top.iter().enumerate() {
                if j == k {
                    continue;
                }
                let w = zj * zk.conj();
                let c = uj.inner(uk);
                match groups.iter_mut().find(|g| (g.0 - w).norm() <= UNIMODULAR_TOL) {
                    Some(g) => g.1 += c,
                    None => groups.push((w, c)),
                }
            }
        }
        let oscillates = groups
            .iter()
            .any(|(w, c)| (w - 1.0).norm() > UNIMODULAR_TOL && c.norm() > rule.tol * hn * hn);
        if oscillates {
            Classification::BoundedNonconvergent
        } else {
            let limit = top.iter().map(|p| p.2.norm().powi(2)).sum::<f64>().sqrt();
            Classification::Convergent { limit }
        }
    };
    (exponent, predicted)
}

/// Orbit of `h` under `A` up to `n_max`, classified empirically and, when the
/// decomposition succeeds, structurally.
pub fn orbit_analyze(a: &CMatrix, h: &CVector, n_max: usize) -> Result<OrbitRecord> {
    let settings = Settings { n_max, ..Settings::default() };
    let d = algebraic::analyze(a).ok().map(|(_, d)| d);
    orbit_analyze_with(a, h, d.as_ref(), &settings)
}

pub fn orbit_analyze_with(a: &CMatrix, h: &CVector, d: Option<&Decomposition>, s: &Settings) -> Result<OrbitRecord> {
    a.ensure_operator()?;
    if h.len() != a.dim() {
        return Err(Error::InvalidInput(format!("h: expected {} entries, got {}", a.dim(), h.len())));
    }
    if !h.is_finite() || h.norm() == 0.0 {
        return Err(Error::Precondition("h must be finite and nonzero".into()));
    }
    if s.n_max < 100 {
        return Err(Error::Precondition(format!("n_max must be at least 100, got {}", s.n_max)));
    }
    let orbit = iterate(a, h, s.n_max);
    let classification = classify(&orbit, &s.rule);
    let (structural_exponent, predicted) = match d {
        Some(d) => {
            let (e, p) = predict_orbit(a, d, h, &s.rule);
            (Some(e), Some(p))
        }
        None => (None, None),
    };
    Ok(OrbitRecord {
        h: h.clone(),
        norms: orbit.norms,
        structural_exponent,
        classification,
        predicted,
        log_norms: orbit.logs,
    })
}

pub fn is_unitary(a: &CMatrix) -> bool {
    if !a.is_square() || !a.is_finite() {
        return false;
    }
    let id = CMatrix::identity(a.dim());
    let tol = 1e-10 * a.dim() as f64;
    let ah = a.adjoint();
    (&ah.matmul(a) - &id).frobenius_norm() <= tol && (&a.matmul(&ah) - &id).frobenius_norm() <= tol
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormaloidCheck {
    pub normaloid: bool,
    /// Whether `||A^n|| = ||A||^n` within relative `1e-6` for `n = 2..=10`.
    pub powers_agree: bool,
}

/// `|r(A) - ||A||| <= 1e-8 max(1, ||A||)`, cross-checked on powers.
pub fn normaloid_check(a: &CMatrix) -> Result<NormaloidCheck> {
    a.ensure_operator()?;
    let norm = operator_norm(a)?;
    let r = linalg::eigenvalues(a)?.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let normaloid = (r - norm).abs() <= 1e-8 * norm.max(1.0);
    let mut p = a.clone();
    let mut powers_agree = true;
    for n in 2..=10 {
        p = p.matmul(a);
        let expect = norm.powi(n);
        if (operator_norm(&p)? - expect).abs() > 1e-6 * expect {
            powers_agree = false;
            break;
        }
    }
    Ok(NormaloidCheck { normaloid, powers_agree })
}

pub fn is_normaloid(a: &CMatrix) -> bool {
    normaloid_check(a).map(|c| c.normaloid).unwrap_or(false)
}

pub fn is_contraction(a: &CMatrix) -> Result<bool> {
    Ok(operator_norm(a)? <= 1.0 + 1e-10)
}

/// `sum_j ||P_j|| sum_{k < i_j} C(n, k) |z_j|^(n-k) ||N_j^k||`, a pointwise
/// upper bound on `||A^n||`.
pub(crate) struct PowerBound {
    blocks: Vec<(f64, f64, Vec<f64>)>,
}

impl PowerBound {
    pub fn new(a: &CMatrix, d: &Decomposition) -> Result<Self> {
        let mut blocks = Vec::with_capacity(d.blocks.len());
        for b in &d.blocks {
            let n = b.nilpotent_part(a);
            let mut nk = CMatrix::identity(n.dim());
            let mut norms = Vec::with_capacity(b.index);
            for _ in 0..b.index {
                norms.push(operator_norm(&nk)?);
                nk = nk.matmul(&n);
            }
            blocks.push((operator_norm(&b.projection)?, b.z.norm(), norms));
        }
        Ok(PowerBound { blocks })
    }

    pub fn at(&self, n: usize) -> f64 {
        self.blocks
            .iter()
            .map(|(p, z, norms)| {
                let mut binom = 1.0;
                let mut sum = 0.0;
                for (k, nk) in norms.iter().enumerate() {
                    if k > n {
                        break;
                    }
                    let zp = if *z == 0.0 { if n == k { 1.0 } else { 0.0 } } else { z.powi((n - k) as i32) };
                    sum += binom * zp * nk;
                    binom *= (n - k) as f64 / (k + 1) as f64;
                }
                p * sum
            })
            .sum()
    }
}

/// `ln ||A^n||_F` for `n = 0..=n_max` by repeated multiplication with
/// power-of-two rescaling.
pub(crate) fn power_log_norms(a: &CMatrix, n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut p = CMatrix::identity(a.dim());
    let mut exp2 = 0i32;
    for n in 0..=n_max {
        if n > 0 {
            p = p.matmul(a);
        }
        let f = p.frobenius_norm();
        if f == 0.0 {
            out.resize(n_max + 1, f64::NEG_INFINITY);
            break;
        }
        out.push(f.ln() + exp2 as f64 * std::f64::consts::LN_2);
        let e = f.log2().round() as i32;
        if e != 0 {
            p = p.scale(Complex64::new(pow2(-e), 0.0));
            exp2 += e;
        }
    }
    out
}

/// Structural answer: `r(A) <= 1 + 1e-10` and index 1 at every root with
/// `|z| >= 1 - 1e-8`.
pub fn power_bounded_structural(p: &MinimalPoly) -> bool {
    p.spectral_radius() <= 1.0 + 1e-10
        && p.roots.iter().all(|r| r.z.norm() < 1.0 - UNIMODULAR_TOL || r.index == 1)
}

/// Structural decision checked against `||A^n||`, `n <= 1000`: a bounded
/// verdict must respect the certified pointwise bound, an unbounded one must
/// show polynomial or exponential growth.
pub fn power_bounded_checked(a: &CMatrix, p: &MinimalPoly, d: &Decomposition) -> Result<bool> {
    let structural = power_bounded_structural(p);
    if structural {
        let bound = PowerBound::new(a, d)?;
        let mut pw = CMatrix::identity(a.dim());
        for n in 1..=POWER_HORIZON {
            pw = pw.matmul(a);
            let b = bound.at(n) * (1.0 + 1e-8) + 1e-12;
            if pw.frobenius_norm() <= b {
                continue;
            }
            let actual = operator_norm(&pw)?;
            if actual > b {
                return Err(Error::Inconsistency(format!(
                    "structurally power bounded, but ||A^{n}|| = {actual:e} exceeds the certified bound {b:e}"
                )));
            }
        }
    } else {
        let fit = fit_growth(&power_log_norms(a, POWER_HORIZON));
        if fit.as_ref().and_then(growth_kind).is_none() {
            return Err(Error::Inconsistency(format!(
                "structurally not power bounded, but ||A^n|| shows no growth up to n = {POWER_HORIZON}"
            )));
        }
    }
    Ok(structural)
}

pub fn is_power_bounded(a: &CMatrix) -> Result<bool> {
    let (p, d) = algebraic::analyze(a)?;
    power_bounded_checked(a, &p, &d)
}

/// Probe vectors for condition (iv): basis vectors, seeded random unit
/// vectors, then `h_k + h_l` and `i h_k + h_l` for block pairs `k < l`.
pub fn probe_set(dim: usize, d: Option<&Decomposition>, seed: u64) -> Vec<(String, CVector)> {
    let mut probes: Vec<(String, CVector)> = (0..dim).map(|k| (format!("e{}", k + 1), CVector::basis(dim, k))).collect();
    let mut rng = random::rng(seed);
    for k in 0..RANDOM_PROBES {
        probes.push((format!("random{}", k + 1), random::unit_vector(&mut rng, dim)));
    }
    if let Some(d) = d {
        let heads: Vec<CVector> = d.blocks.iter().map(|b| b.basis.column(0)).collect();
        for k in 0..heads.len() {
            for l in k + 1..heads.len() {
                probes.push((format!("h{}+h{}", k + 1, l + 1), &heads[k] + &heads[l]));
                probes.push((format!("i*h{}+h{}", k + 1, l + 1), &heads[k].scale(I) + &heads[l]));
            }
        }
    }
    probes
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeSummary {
    pub label: String,
    pub classification: Classification,
    pub structural_exponent: Option<usize>,
    pub predicted: Option<Classification>,
}

/// Orbits of every probe, in probe order.
pub fn probe_orbits(a: &CMatrix, d: Option<&Decomposition>, s: &Settings) -> Result<Vec<(String, OrbitRecord)>> {
    probe_set(a.dim(), d, s.probe_seed)
        .into_par_iter()
        .map(|(label, h)| orbit_analyze_with(a, &h, d, s).map(|r| (label, r)))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CriteriaReport {
    /// Always true in finite dimension.
    pub is_algebraic: bool,
    pub minimal_degree: Option<usize>,
    pub spectrum_in_circle: bool,
    pub unitary: bool,
    pub normaloid: bool,
    pub contraction: bool,
    pub orbits_convergent: bool,
    pub orbits_certification: &'static str,
    pub power_bounded: bool,
    pub witness: Option<CVector>,
    pub consistent: bool,
    pub warnings: Vec<String>,
    pub probes: Vec<ProbeSummary>,
}

impl CriteriaReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.is_algebraic && self.spectrum_in_circle
    }
}

pub fn theorem_check(a: &CMatrix) -> Result<CriteriaReport> {
    theorem_check_with(a, &Settings::default())
}

pub fn theorem_check_with(a: &CMatrix, s: &Settings) -> Result<CriteriaReport> {
    a.ensure_operator()?;
    let analysis = algebraic::analyze_with(a, s.rank_rel);
    theorem_check_from(a, analysis.as_ref().ok(), analysis.as_ref().err(), s)
}

/// [`theorem_check_with`] on a precomputed minimal polynomial and decomposition.
pub fn theorem_check_from(
    a: &CMatrix,
    analysis: Option<&(MinimalPoly, Decomposition)>,
    analysis_error: Option<&Error>,
    s: &Settings,
) -> Result<CriteriaReport> {
    let mut warnings = Vec::new();
    if let Some(e) = analysis_error {
        warnings.push(format!("structural analysis unavailable: {e}"));
    }
    let spectrum_in_circle = match analysis {
        Some((p, _)) => p.roots.iter().all(|r| (r.z.norm() - 1.0).abs() <= UNIMODULAR_TOL),
        None => linalg::eigenvalues(a)?.iter().all(|z| (z.norm() - 1.0).abs() <= 1e-6),
    };
    let unitary = is_unitary(a);
    let nc = normaloid_check(a)?;
    if nc.normaloid != nc.powers_agree {
        warnings.push(format!(
            "normaloid test says {} but ||A^n|| = ||A||^n for n <= 10 says {}",
            nc.normaloid, nc.powers_agree
        ));
    }
    let contraction = is_contraction(a)?;
    let d = analysis.map(|x| &x.1);
    let orbits = probe_orbits(a, d, s)?;
    for (label, r) in &orbits {
        if let Some(p) = &r.predicted {
            if !p.agrees_with(&r.classification) {
                warnings.push(format!(
                    "probe {label}: observed {:?} but the decomposition predicts {:?}",
                    r.classification, p
                ));
            }
        }
    }
    let witness = orbits.iter().find(|(_, r)| !r.classification.is_convergent()).map(|(_, r)| r.h.clone());
    let orbits_convergent = witness.is_none();

    let power_bounded = match analysis {
        Some((p, d)) => match power_bounded_checked(a, p, d) {
            Ok(b) => b,
            Err(e) => {
                warnings.push(e.to_string());
                power_bounded_structural(p)
            }
        },
        None => {
            let fit = fit_growth(&power_log_norms(a, POWER_HORIZON));
            fit.as_ref().and_then(growth_kind).is_none()
        }
    };

    let normaloid = nc.normaloid;
    let hypotheses = spectrum_in_circle;
    let consistent = if hypotheses {
        unitary == normaloid && normaloid == contraction && contraction == orbits_convergent && (!unitary || power_bounded)
    } else {
        !unitary || (normaloid && contraction && orbits_convergent && power_bounded)
    };
    Ok(CriteriaReport {
        is_algebraic: true,
        minimal_degree: analysis.map(|x| x.0.degree),
        spectrum_in_circle,
        unitary,
        normaloid,
        contraction,
        orbits_convergent,
        orbits_certification: "certified via probes",
        power_bounded,
        witness,
        consistent,
        warnings,
        probes: orbits
            .into_iter()
            .map(|(label, r)| ProbeSummary {
                label,
                classification: r.classification,
                structural_exponent: r.structural_exponent,
                predicted: r.predicted,
            })
            .collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarSeqVerdict {
    pub w: Complex64,
    pub b: Complex64,
    pub convergent: bool,
    pub limit: Option<f64>,
    /// Tail-half values grouped at radius `1e-6`.
    pub cluster_points: Vec<f64>,
    #[serde(skip)]
    pub values: Vec<f64>,
}

/// `Re(w^n b)` for `n <= n_max` with `|w| = 1`, `w != +-1`.
pub fn scalar_re_sequence(w: Complex64, b: Complex64, n_max: usize) -> Result<ScalarSeqVerdict> {
    scalar_re_sequence_with(w, b, n_max, &WindowRule::default())
}

pub fn scalar_re_sequence_with(w: Complex64, b: Complex64, n_max: usize, rule: &WindowRule) -> Result<ScalarSeqVerdict> {
    if !w.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput("w and b must be finite".into()));
    }
    if (w.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!("|w| must be 1, got {}", w.norm())));
    }
    if (w - 1.0).norm() <= 1e-12 || (w + 1.0).norm() <= 1e-12 {
        return Err(Error::Precondition("w must differ from 1 and -1".into()));
    }
    if n_max <= rule.window {
        return Err(Error::Precondition(format!("n_max must exceed the window {}", rule.window)));
    }
    let mut values = Vec::with_capacity(n_max + 1);
    let mut x = b;
    for _ in 0..=n_max {
        values.push(x.re);
        x *= w;
    }
    let limit = rule.limit(&values);
    let convergent = limit.is_some();
    if convergent && b.norm() > rule.tol {
        return Err(Error::Inconsistency(format!(
            "Re(w^n b) judged convergent with |b| = {} > {}",
            b.norm(),
            rule.tol
        )));
    }
    let cluster_points = sequence::cluster_points(&values[values.len() / 2..], 1e-6);
    Ok(ScalarSeqVerdict {
        w,
        b,
        convergent,
        limit,
        cluster_points,
        values,
    })
}
