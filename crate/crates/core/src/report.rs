//! The combined analysis report, its canonical JSON text and the CSV table of
//! power norms.

use std::io;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::algebraic::{self, Decomposition, MinimalPoly};
use crate::criteria::{self, CriteriaReport};
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::settings::Settings;
use crate::stability::{self, GrowthBound, StabilityVerdict, GROWTH_HORIZON};

/// Pretty printing with every float written as `d.ddddddddddddddddde±x`
/// (17 significant digits), so equal values always print identically.
struct FixedFloats<'a>(PrettyFormatter<'a>);

impl Formatter for FixedFloats<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Canonical JSON text: fields in declaration order, fixed float format,
/// trailing newline. Non-finite floats become `null`.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockSummary {
    pub z: Complex64,
    pub index: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionSummary {
    pub blocks: Vec<BlockSummary>,
    pub constant_c: f64,
}

impl From<&Decomposition> for DecompositionSummary {
    fn from(d: &Decomposition) -> Self {
        DecompositionSummary {
            blocks: d
                .blocks
                .iter()
                .map(|b| BlockSummary { z: b.z, index: b.index, dim: b.dim() })
                .collect(),
            constant_c: d.constant_c,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub dim: usize,
    pub settings: Settings,
    pub minimal_polynomial: Option<MinimalPoly>,
    pub decomposition: Option<DecompositionSummary>,
    pub criteria: CriteriaReport,
    pub growth_bound: Option<GrowthBound>,
    pub stability: StabilityVerdict,
    pub notes: Vec<String>,
    /// False when any cross-check disagreed or the structure could not be resolved.
    pub consistent: bool,
    #[serde(skip)]
    pub power_norms: Vec<f64>,
}

/// Runs every analysis on `a`. Only input errors are returned as `Err`;
/// numerical disagreements land in `notes` and clear `consistent`.
pub fn analyze(a: &CMatrix, s: &Settings) -> Result<AnalyzeReport> {
    s.validate()?;
    a.ensure_operator()?;
    let mut notes = Vec::new();
    let mut consistent = true;
    let analysis = algebraic::analyze_with(a, s.rank_rel);
    if let Err(e) = &analysis {
        notes.push(format!("structure: {e}"));
        consistent = false;
    }
    let ok = analysis.as_ref().ok();
    let crit = criteria::theorem_check_from(a, ok, analysis.as_ref().err(), s)?;
    consistent &= crit.consistent;

    let growth_bound = match ok {
        Some((p, d)) => match stability::growth_bound_from(a, p, d, GROWTH_HORIZON) {
            Ok(g) => {
                if !g.holds() {
                    notes.push(format!("growth bound violated: ratio {}", g.max_violation_ratio));
                    consistent = false;
                }
                Some(g)
            }
            Err(Error::OutOfScope(m)) => {
                notes.push(format!("growth bound: {m}"));
                None
            }
            Err(e) => {
                notes.push(format!("growth bound: {e}"));
                consistent = false;
                None
            }
        },
        None => None,
    };
    let stab = stability::uniform_stability_from(a, ok, s)?;

    let power_norms = match &growth_bound {
        Some(g) => g.table.iter().map(|r| r.1).collect(),
        None => criteria::power_log_norms(a, GROWTH_HORIZON).iter().skip(1).map(|l| l.exp()).collect(),
    };
    Ok(AnalyzeReport {
        dim: a.dim(),
        settings: *s,
        minimal_polynomial: ok.map(|x| x.0.clone()),
        decomposition: ok.map(|x| DecompositionSummary::from(&x.1)),
        criteria: crit,
        growth_bound,
        stability: stab,
        notes,
        consistent,
        power_norms,
    })
}

/// Rows `n,power_norm,bound` for `n = 1..`; `bound` is empty without a growth bound.
pub fn power_csv(r: &AnalyzeReport) -> String {
    let mut out = String::from("n,power_norm,bound\n");
    for (i, norm) in r.power_norms.iter().enumerate() {
        let n = i + 1;
        let bound = r.growth_bound.as_ref().and_then(|g| g.table.get(i)).map(|row| row.2);
        match bound {
            Some(b) => out.push_str(&format!("{n},{norm:.16e},{b:.16e}\n")),
            None => out.push_str(&format!("{n},{norm:.16e},\n")),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn floats_have_seventeen_digits() {
        let text = to_json(&vec![0.1, 1.0, -2.5e-300, f64::NAN]);
        assert_eq!(
            text,
            "[\n  1.0000000000000001e-1,\n  1.0000000000000000e0,\n  -2.5000000000000000e-300,\n  null\n]\n"
        );
        let back: Vec<Option<f64>> = serde_json::from_str(&text).unwrap();
        assert_eq!(back[0], Some(0.1));
    }

    #[test]
    fn dft4_and_jordan_reports() {
        let s = Settings::default();
        let r = analyze(&fixtures::dft4(), &s).unwrap();
        assert!(r.consistent && r.criteria.unitary && r.criteria.orbits_convergent);
        assert_eq!(to_json(&r), to_json(&analyze(&fixtures::dft4(), &s).unwrap()));

        let r = analyze(&fixtures::jordan_2x2(), &s).unwrap();
        assert!(r.consistent, "{:?}", r.notes);
        let c = &r.criteria;
        assert!(!c.unitary && !c.normaloid && !c.contraction && !c.orbits_convergent);
        assert!(c.witness.is_some());
        let csv = power_csv(&r);
        let row: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        assert!((row[1] - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14 && row[2] == 2.0);
        assert_eq!(csv.lines().count(), GROWTH_HORIZON + 1);
    }
}
