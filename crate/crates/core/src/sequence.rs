//! Finite-horizon tests on real sequences: the convergence window rule, a
//! log-linear growth fit, and 1-d clustering of sequence values.

use serde::{Deserialize, Serialize};

/// `s` converges iff its last `window` terms lie within `max(tol, tol*|L|)` of
/// their mean `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowRule {
    pub window: usize,
    pub tol: f64,
}

impl Default for WindowRule {
    fn default() -> Self {
        WindowRule { window: 50, tol: 1e-6 }
    }
}

impl WindowRule {
    /// The window mean when the rule passes.
    pub fn limit(&self, s: &[f64]) -> Option<f64> {
        let w = self.window.min(s.len());
        if w == 0 {
            return None;
        }
        let tail = &s[s.len() - w..];
        if tail.iter().any(|x| !x.is_finite()) {
            return None;
        }
        let mean = tail.iter().sum::<f64>() / w as f64;
        let tol = self.tol.max(self.tol * mean.abs());
        tail.iter().all(|x| (x - mean).abs() <= tol).then_some(mean)
    }
}

/// `ln s_n ~ a + d ln n + b n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthFit {
    pub a: f64,
    pub d: f64,
    pub b: f64,
}

/// Fits the growth model to `log_s[n] = ln s_n` from window means over
/// `[3N/4, N]`, `[3N/8, N/2]` and `[3N/16, N/4]`, which averages out bounded
/// oscillation. Needs `N >= 32` and finite logs in the windows.
pub fn fit_growth(log_s: &[f64]) -> Option<GrowthFit> {
    let n = log_s.len().checked_sub(1)?;
    if n < 32 {
        return None;
    }
    let window = |lo: usize, hi: usize| -> Option<(f64, f64, f64)> {
        let lo = lo.max(1);
        let count = (hi - lo + 1) as f64;
        let (mut m, mut l, mut k) = (0.0, 0.0, 0.0);
        for (i, &v) in log_s.iter().enumerate().take(hi + 1).skip(lo) {
            if !v.is_finite() {
                return None;
            }
            m += v;
            l += (i as f64).ln();
            k += i as f64;
        }
        Some((m / count, l / count, k / count))
    };
    let w1 = window(3 * n / 4, n)?;
    let w2 = window(3 * n / 8, n / 2)?;
    let w3 = window(3 * n / 16, n / 4)?;
    // Differences eliminate `a`; solve the remaining 2x2 system for (d, b).
    let (r1, l1, k1) = (w1.0 - w2.0, w1.1 - w2.1, w1.2 - w2.2);
    let (r2, l2, k2) = (w2.0 - w3.0, w2.1 - w3.1, w2.2 - w3.2);
    let det = l1 * k2 - l2 * k1;
    if det == 0.0 {
        return None;
    }
    let d = (r1 * k2 - r2 * k1) / det;
    let b = (l1 * r2 - l2 * r1) / det;
    let a = w1.0 - d * w1.1 - b * w1.2;
    Some(GrowthFit { a, d, b })
}

/// Slope above which a fitted `b` counts as exponential growth.
pub const EXP_SLOPE: f64 = 1e-3;
/// Fitted power above which a sequence counts as polynomially growing.
pub const POLY_POWER: f64 = 0.5;

/// Growth of a fitted sequence ignoring convergence: `Some(Ok(rate))` for
/// exponential, `Some(Err(degree))` for polynomial, `None` for bounded.
pub fn growth_kind(fit: &GrowthFit) -> Option<std::result::Result<f64, u32>> {
    if fit.b > EXP_SLOPE {
        Some(Ok(fit.b.exp()))
    } else if fit.d >= POLY_POWER {
        Some(Err(fit.d.round() as u32))
    } else {
        None
    }
}

/// Groups sorted values greedily: a new group starts when a value is more than
/// `radius` above the current group's first member. Returns group means.
pub fn cluster_points(values: &[f64], radius: f64) -> Vec<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    v.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let leader = v[i];
        let mut j = i;
        let mut sum = 0.0;
        while j < v.len() && v[j] - leader <= radius {
            sum += v[j];
            j += 1;
        }
        out.push(sum / (j - i) as f64);
        i = j;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn logs(f: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
        (0..=n).map(|i| f(i as f64).ln()).collect()
    }

    #[test]
    fn window_rule_examples() {
        let rule = WindowRule::default();
        assert_eq!(rule.limit(&vec![2.0; 60]), Some(2.0));
        let alt: Vec<f64> = (0..100).map(|n| if n % 2 == 0 { 5f64.sqrt() } else { 1.0 }).collect();
        assert_eq!(rule.limit(&alt), None);
        // Relative tolerance for large limits.
        let big: Vec<f64> = (0..60).map(|n| 1e8 + (n % 2) as f64 * 50.0).collect();
        assert!(rule.limit(&big).is_some());
    }

    #[test]
    fn fit_recovers_polynomial_and_exponential_rates() {
        let f = fit_growth(&logs(|n| (1.0 + n * n).sqrt(), 2000)).unwrap();
        assert!((f.d - 1.0).abs() < 1e-3 && f.b.abs() < 1e-6, "{f:?}");
        let f = fit_growth(&logs(|n| 3.0 * n.powi(3) * 0.9f64.powf(n) + 1e-300, 2000)).unwrap();
        assert!((f.d - 3.0).abs() < 1e-3 && (f.b - 0.9f64.ln()).abs() < 1e-6, "{f:?}");
        let f = fit_growth(&logs(|n| 1.5f64.powf(n), 1000)).unwrap();
        match growth_kind(&f) {
            Some(Ok(rate)) => assert!((rate - 1.5).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bounded_oscillation_fits_flat() {
        let s: Vec<f64> = (0..=2000).map(|n| (2.0 + (n as f64 * 0.7).sin()).ln()).collect();
        let f = fit_growth(&s).unwrap();
        assert_eq!(growth_kind(&f), None);
    }

    #[test]
    fn cluster_points_of_a_four_cycle() {
        let s: Vec<f64> = (0..400).map(|n| [1.0, 0.0, -1.0, 0.0][n % 4]).collect();
        assert_eq!(cluster_points(&s, 1e-6), vec![-1.0, 0.0, 1.0]);
    }
}
