//! Seeded property suites. Every property draws its instances from
//! `trial_seed(seed, i)`, runs trials in parallel and reports in trial order.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic::{self, Decomposition, MinimalPoly};
use crate::criteria::{self, UNIMODULAR_TOL};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::generators::{self, Extra, InstanceSpec, Kind, Planted, MAX_PLANTED_CAP};
use crate::matrix::{CMatrix, CVector, ZERO};
use crate::random::{self, Rng64};
use crate::settings::Settings;
use crate::spectrum::{default_rank_tol, operator_norm};
use crate::stability::{self, GROWTH_HORIZON};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Theorem,
    Jordan,
    Growth,
    Decomposition,
    Stability,
    Scalar,
    All,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Theorem,
        Suite::Jordan,
        Suite::Growth,
        Suite::Decomposition,
        Suite::Stability,
        Suite::Scalar,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem => "theorem",
            Suite::Jordan => "jordan",
            Suite::Growth => "growth",
            Suite::Decomposition => "decomposition",
            Suite::Stability => "stability",
            Suite::Scalar => "scalar",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            Error::InvalidInput(format!("suite: unknown suite '{s}', expected one of {}", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// Messages of the first few failing trials.
    pub failures: Vec<String>,
}

const KEPT_FAILURES: usize = 5;

impl PropertyResult {
    fn collect(name: &'static str, outcomes: Vec<std::result::Result<(), String>>) -> Self {
        let total = outcomes.len();
        let failures: Vec<String> = outcomes
            .into_iter()
            .enumerate()
            .filter_map(|(i, o)| o.err().map(|m| format!("trial {i}: {m}")))
            .collect();
        PropertyResult {
            name,
            passed: total - failures.len(),
            total,
            failures: failures.into_iter().take(KEPT_FAILURES).collect(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for PropertyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}/{} passed", self.name, self.passed, self.total)
    }
}

type Outcome = std::result::Result<(), String>;

/// Relative tolerance and horizon of the exact Jordan-perturbation formula.
pub const JORDAN_REL_TOL: f64 = 1e-10;
pub const JORDAN_HORIZON: usize = 100;
/// Condition cap of the oblique instances.
pub const OBLIQUE_CAP: f64 = 50.0;
/// Distance within which recovered roots must match planted ones, relative to `max(1, ||A||)`.
pub const ROOT_MATCH_TOL: f64 = 1e-6;
/// Horizon of the scalar sequence probes.
pub const SCALAR_N_MAX: usize = 100_000;
pub const DENSITY_TOL: f64 = 1e-2;
pub const DENSITY_TARGETS: usize = 100;
pub const DENSITY_N_MAX: usize = 100_000;

fn trials_of(name: &'static str, trials: usize, seed: u64, check: impl Fn(u64) -> Outcome + Sync) -> PropertyResult {
    let outcomes = (0..trials).into_par_iter().map(|i| check(random::trial_seed(seed, i))).collect();
    PropertyResult::collect(name, outcomes)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

pub fn run(suite: Suite, trials: usize, seed: u64, s: &Settings) -> Vec<PropertyResult> {
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Theorem {
        out.push(theorem_unitary(trials, seed, s));
        out.push(theorem_oblique(trials, seed, s));
    }
    if all || suite == Suite::Jordan {
        out.push(jordan_formula(trials, 20, seed, s));
    }
    if all || suite == Suite::Growth {
        out.push(growth_planted(trials, seed));
        out.push(growth_nilpotent(trials.div_ceil(5), seed));
    }
    if all || suite == Suite::Decomposition {
        out.push(decomposition(trials, seed));
    }
    if all || suite == Suite::Stability {
        out.push(normal_limit(trials, 10, seed, s));
        out.push(normaloid_equivalence(trials, seed, s));
        out.push(root_limit(trials, seed, s));
        out.push(stability_taxonomy(trials, seed, s));
        out.push(density());
    }
    if all || suite == Suite::Scalar {
        out.push(scalar_nonconvergent(trials, seed, SCALAR_N_MAX));
        out.push(scalar_zero(trials, seed, SCALAR_N_MAX));
    }
    out
}

fn draw_dim(rng: &mut Rng64, lo: usize) -> usize {
    rng.random_range(lo..=8)
}

fn planted(rng: &mut Rng64, seed: u64) -> std::result::Result<Planted, String> {
    let dim = draw_dim(rng, 1);
    generators::gen_planted_jordan(dim, None, MAX_PLANTED_CAP, seed).map_err(err)
}

fn analysis(a: &CMatrix) -> std::result::Result<(MinimalPoly, Decomposition), String> {
    algebraic::analyze(a).map_err(|e| format!("analysis: {e}"))
}

/// Unitary instances satisfy every condition; oblique ones are power bounded
/// but have a nonconvergent orbit.
pub fn theorem_unitary(trials: usize, seed: u64, s: &Settings) -> PropertyResult {
    trials_of("theorem-unitary", trials, seed, |ts| {
        let dim = draw_dim(&mut random::rng(ts), 1);
        let spec = InstanceSpec {
            kind: Kind::UnitaryFiniteSpectrum,
            dim,
            eigenvalues: vec![],
            seed: ts,
            extra: Extra::default(),
        };
        let a = generators::generate(&spec).map_err(err)?;
        let r = criteria::theorem_check_with(&a, s).map_err(err)?;
        ensure(
            r.spectrum_in_circle && r.unitary && r.normaloid && r.contraction && r.orbits_convergent && r.power_bounded && r.consistent,
            || format!("dim {dim}: {r:?}"),
        )
    })
}

pub fn theorem_oblique(trials: usize, seed: u64, s: &Settings) -> PropertyResult {
    trials_of("theorem-oblique", trials, seed, |ts| {
        let dim = draw_dim(&mut random::rng(ts), 2);
        let spec = InstanceSpec {
            kind: Kind::ObliqueDiagonalizable,
            dim,
            eigenvalues: vec![],
            seed: ts,
            extra: Extra { cond_cap: Some(OBLIQUE_CAP), require_oblique: true, ..Extra::default() },
        };
        let a = generators::generate(&spec).map_err(err)?;
        let r = criteria::theorem_check_with(&a, s).map_err(err)?;
        ensure(
            r.power_bounded && !r.unitary && !r.orbits_convergent && r.witness.is_some() && r.consistent,
            || format!("dim {dim}: {r:?}"),
        )
    })
}

/// `||T^n h||^2 = ||h||^2 + 2n Re(conj(alpha) <Nh, h>) + n^2 ||Nh||^2` for
/// `T = alpha I + N`, `N^2 = 0`; the orbit diverges iff `Nh != 0`.
pub fn jordan_formula(trials: usize, probes: usize, seed: u64, s: &Settings) -> PropertyResult {
    trials_of("jordan-formula", trials, seed, |ts| {
        let mut rng = random::rng(ts);
        let dim = draw_dim(&mut rng, 2);
        let alpha = Complex64::from_polar(1.0, TAU * rng.random::<f64>());
        let scale = 0.5 + 1.5 * rng.random::<f64>();
        let t = generators::gen_jordan_perturbation(dim, alpha, scale, ts).map_err(err)?;
        let n = t.shift(alpha);
        let tol = default_rank_tol(dim, operator_norm(&n).map_err(err)?.max(1.0));
        for k in 0..probes {
            let mut h = random::unit_vector(&mut rng, dim);
            if k % 2 == 1 {
                let kh = generators::kernel_component(&n, &h).map_err(err)?;
                h = kh.normalized();
            }
            let nh = n.mul_vec(&h);
            let (h2, cross, nh2) = (h.norm().powi(2), (alpha.conj() * nh.inner(&h)).re, nh.norm().powi(2));
            let mut v = h.clone();
            for step in 1..=JORDAN_HORIZON {
                v = t.mul_vec(&v);
                let nf = step as f64;
                let expect = h2 + 2.0 * nf * cross + nf * nf * nh2;
                let got = v.norm().powi(2);
                ensure((got - expect).abs() <= JORDAN_REL_TOL * expect, || {
                    format!("probe {k}, n = {step}: ||T^n h||^2 = {got}, formula {expect}")
                })?;
            }
            let rec = criteria::orbit_analyze_with(&t, &h, None, s).map_err(err)?;
            let outside = nh.norm() > tol * h.norm();
            ensure(rec.classification.is_convergent() != outside, || {
                format!("probe {k}: ||Nh|| = {:e} but orbit {:?}", nh.norm(), rec.classification)
            })?;
        }
        Ok(())
    })
}

/// `||A^n|| <= alpha n^kappa r^n (1 + 1e-8)` on planted instances with `0 < r <= 1`.
pub fn growth_planted(trials: usize, seed: u64) -> PropertyResult {
    trials_of("growth-bound", trials, seed, |ts| {
        let p = planted(&mut random::rng(ts), ts)?;
        let (mp, d) = analysis(&p.matrix)?;
        let g = stability::growth_bound_from(&p.matrix, &mp, &d, GROWTH_HORIZON).map_err(err)?;
        ensure(g.holds(), || format!("violation ratio {}", g.max_violation_ratio))
    })
}

/// Nilpotent planted instances: `A^n` vanishes from `n = deg p` on.
pub fn growth_nilpotent(trials: usize, seed: u64) -> PropertyResult {
    trials_of("growth-bound-nilpotent", trials, seed ^ 0x6E69_6C70, |ts| {
        let dim = draw_dim(&mut random::rng(ts), 1);
        let p = generators::gen_planted_jordan(dim, Some(&[ZERO]), MAX_PLANTED_CAP, ts).map_err(err)?;
        let (mp, d) = analysis(&p.matrix)?;
        let g = stability::growth_bound_from(&p.matrix, &mp, &d, GROWTH_HORIZON).map_err(err)?;
        ensure(g.holds() && g.valid_from == mp.degree && g.valid_from == p.roots[0].index, || {
            format!("valid_from {} degree {} ratio {}", g.valid_from, mp.degree, g.max_violation_ratio)
        })
    })
}

/// Planted roots and indices are recovered, dimensions add up, the component
/// inequality holds with `constant_c`, and restrictions have singleton spectra.
pub fn decomposition(trials: usize, seed: u64) -> PropertyResult {
    trials_of("decomposition", trials, seed, |ts| {
        let mut rng = random::rng(ts);
        let p = planted(&mut rng, ts)?;
        let a = &p.matrix;
        let (_, d) = analysis(a)?;
        let ztol = ROOT_MATCH_TOL * operator_norm(a).map_err(err)?.max(1.0);
        ensure(d.blocks.len() == p.roots.len(), || format!("{} roots recovered, {} planted", d.blocks.len(), p.roots.len()))?;
        for root in &p.roots {
            ensure(d.blocks.iter().any(|b| (b.z - root.z).norm() <= ztol && b.index == root.index && b.dim() == root.multiplicity), || {
                format!("planted {root:?} not recovered")
            })?;
        }
        ensure(d.dims().iter().sum::<usize>() == a.dim(), || format!("dims {:?}", d.dims()))?;
        for sample in 0..20 {
            let parts: Vec<CVector> = d
                .blocks
                .iter()
                .map(|b| {
                    let c = CVector((0..b.dim()).map(|_| random::gaussian(&mut rng)).collect());
                    b.basis.mul_vec(&c)
                })
                .collect();
            let total = parts.iter().fold(CVector::zeros(a.dim()), |acc, x| &acc + x);
            for (j, h) in parts.iter().enumerate() {
                ensure(h.norm() <= d.constant_c * total.norm() * (1.0 + 1e-8), || {
                    format!("sample {sample}: ||h_{j}|| = {} > C ||sum|| = {}", h.norm(), d.constant_c * total.norm())
                })?;
            }
        }
        let spectra = algebraic::restriction_spectra(a, &d).map_err(err)?;
        for (b, sp) in d.blocks.iter().zip(&spectra) {
            ensure(sp.eigenvalues.len() == 1 && (sp.eigenvalues[0].value - b.z).norm() <= ztol, || {
                format!("restriction at {} has spectrum {:?}", b.z, sp.eigenvalues)
            })?;
        }
        Ok(())
    })
}

/// Distinct eigenvalues: `unimodular` of modulus 1, the rest of modulus at most `inner`.
fn draw_normal_spectrum(rng: &mut Rng64, dim: usize, unimodular: usize, inner: f64) -> Vec<Complex64> {
    loop {
        let zs: Vec<Complex64> = (0..dim)
            .map(|k| {
                let m = if k < unimodular { 1.0 } else { inner * rng.random::<f64>() };
                Complex64::from_polar(m, TAU * rng.random::<f64>())
            })
            .collect();
        if random::separated(&zs, 0.05) {
            return zs;
        }
    }
}

/// Normal contractions: `||A^n h||^2 -> <Qh, h>`, and strong stability iff `Q = 0`.
pub fn normal_limit(trials: usize, probes: usize, seed: u64, s: &Settings) -> PropertyResult {
    trials_of("normal-limit", trials, seed, |ts| {
        let mut rng = random::rng(ts);
        let dim = draw_dim(&mut rng, 1);
        let k = rng.random_range(0..=dim);
        let a = generators::gen_normal(&draw_normal_spectrum(&mut rng, dim, k, 0.9), ts).map_err(err)?;
        let an = analysis(&a)?;
        for j in 0..probes {
            let h = random::unit_vector(&mut rng, dim);
            stability::normal_limit_with(&a, &h, Some(&an.1), s).map_err(|e| format!("probe {j}: {e}"))?;
        }
        let v = stability::uniform_stability_from(&a, Some(&an), s).map_err(err)?;
        ensure(v.strongly_stable == (k == 0), || format!("{k} unimodular eigenvalues, strongly stable {}", v.strongly_stable))
    })
}

/// Probe orbits convergent, power bounded and contraction agree on normaloid
/// instances, half normal and half normaloid but not normal.
pub fn normaloid_equivalence(trials: usize, seed: u64, s: &Settings) -> PropertyResult {
    trials_of("normaloid-equivalence", trials, seed, |ts| {
        let mut rng = random::rng(ts);
        let top = match rng.random_range(0..3) {
            0 => 0.5 + 0.49 * rng.random::<f64>(),
            1 => 1.0,
            _ => 1.01 + 0.5 * rng.random::<f64>(),
        };
        let a = if rng.random::<bool>() {
            let dim = draw_dim(&mut rng, 1);
            let unimodular = if top == 1.0 { rng.random_range(1..=dim) } else { 0 };
            let mut zs = draw_normal_spectrum(&mut rng, dim, unimodular, 0.9);
            if top != 1.0 {
                zs[0] = Complex64::from_polar(top, zs[0].arg());
            }
            generators::gen_normal(&zs, ts).map_err(err)?
        } else {
            generators::gen_normaloid_nonnormal(draw_dim(&mut rng, 3), top, ts).map_err(err)?
        };
        stability::normaloid_equivalence_with(&a, s).map(|_| ()).map_err(err)
    })
}

/// `lim ||A^n h||^(1/n) = max{|z_j| : P_j h != 0}` within `1e-3`. Odd trials
/// use diagonal matrices with probes supported on a random subset of the
/// coordinates, where `P_j h = 0` holds exactly.
pub fn root_limit(trials: usize, seed: u64, s: &Settings) -> PropertyResult {
    trials_of("root-limit", trials, seed, |ts| {
        let mut rng = random::rng(ts);
        if rng.random::<bool>() {
            let p = planted(&mut rng, ts)?;
            let (_, d) = analysis(&p.matrix)?;
            for j in 0..3 {
                let h = random::unit_vector(&mut rng, p.matrix.dim());
                stability::orbit_root_limit_from(&p.matrix, &d, &h, s.n_max).map_err(|e| format!("probe {j}: {e}"))?;
            }
        } else {
            let dim = draw_dim(&mut rng, 2);
            let zs: Vec<Complex64> =
                (0..dim).map(|_| Complex64::from_polar(0.1 + 0.9 * rng.random::<f64>(), TAU * rng.random::<f64>())).collect();
            let a = CMatrix::diag(&zs);
            let (_, d) = analysis(&a)?;
            for j in 0..3 {
                let mut h = random::unit_vector(&mut rng, dim);
                let keep = rng.random_range(0..dim);
                for (i, x) in h.0.iter_mut().enumerate() {
                    if i != keep && rng.random::<bool>() {
                        *x = ZERO;
                    }
                }
                stability::orbit_root_limit_from(&a, &d, &h, s.n_max).map_err(|e| format!("probe {j}: {e}"))?;
            }
        }
        Ok(())
    })
}

/// On planted instances: strongly stable iff uniformly stable iff no root on
/// the unit circle, and power bounded iff every unimodular root has index 1.
pub fn stability_taxonomy(trials: usize, seed: u64, s: &Settings) -> PropertyResult {
    trials_of("stability-taxonomy", trials, seed ^ 0x7461_786F, |ts| {
        let p = planted(&mut random::rng(ts), ts)?;
        let an = analysis(&p.matrix)?;
        let v = stability::uniform_stability_from(&p.matrix, Some(&an), s).map_err(err)?;
        let on_circle = p.roots.iter().filter(|r| (r.z.norm() - 1.0).abs() <= UNIMODULAR_TOL);
        let stable = on_circle.clone().next().is_none();
        let bounded = on_circle.clone().all(|r| r.index == 1);
        ensure(
            v.uniformly_stable == stable && v.strongly_stable == stable && v.power_bounded == bounded && v.warnings.is_empty(),
            || format!("roots {:?}: {v:?}", p.roots),
        )
    })
}

/// The orbit of `e1` under `e^(2 pi i sqrt 2) I` passes within `1e-2` of 100
/// equispaced points of the circle by `n = 1e5`.
pub fn density() -> PropertyResult {
    let a = CMatrix::identity(1).scale(fixtures::rotation(fixtures::SQRT2_THETA));
    let outcome = stability::circle_density(&a, &fixtures::e1(1), DENSITY_N_MAX, DENSITY_TARGETS)
        .map_err(err)
        .and_then(|gap| ensure(gap <= DENSITY_TOL, || format!("largest gap {gap}")));
    PropertyResult::collect("density", vec![outcome])
}

/// `w = e^(2 pi i t)` with `t` at least `1e-3` away from `0` and `1/2`.
fn draw_w(rng: &mut Rng64) -> Complex64 {
    loop {
        let t: f64 = rng.random();
        if [0.0, 0.5, 1.0].iter().all(|c| (t - c).abs() >= 1e-3) {
            return Complex64::from_polar(1.0, TAU * t);
        }
    }
}

/// `Re(w^n b)` is nonconvergent for `|w| = 1`, `w != +-1`, `|b| >= 0.1`.
pub fn scalar_nonconvergent(trials: usize, seed: u64, n_max: usize) -> PropertyResult {
    trials_of("scalar-nonconvergent", trials, seed, |ts| {
        let mut rng = random::rng(ts);
        let w = draw_w(&mut rng);
        let b = Complex64::from_polar(0.1 + 1.9 * rng.random::<f64>(), TAU * rng.random::<f64>());
        let v = criteria::scalar_re_sequence(w, b, n_max).map_err(err)?;
        ensure(!v.convergent, || format!("w = {w}, b = {b} judged convergent"))
    })
}

pub fn scalar_zero(trials: usize, seed: u64, n_max: usize) -> PropertyResult {
    trials_of("scalar-zero", trials, seed, |ts| {
        let w = draw_w(&mut random::rng(ts));
        let v = criteria::scalar_re_sequence(w, ZERO, n_max).map_err(err)?;
        ensure(v.convergent && v.limit == Some(0.0), || format!("w = {w}: {v:?}"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn small_runs_pass() {
        let s = Settings::default();
        for r in run(Suite::All, 3, 11, &s) {
            assert!(r.all_passed(), "{r}: {:?}", r.failures);
        }
    }
}
