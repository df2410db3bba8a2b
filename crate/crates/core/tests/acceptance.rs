//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use aolab::report::to_json;
use aolab::settings::Settings;
use aolab::stability::{GROWTH_HORIZON, GROWTH_SLACK, NORMAL_LIMIT_TOL, ROOT_LIMIT_TOL};
use aolab::verify::{self, PropertyResult};
use aolab::{fixtures, CMatrix};

const SEED: u64 = 0;

type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn props(results: &[PropertyResult], pinned: bool, started: Instant, budget: Option<Duration>) -> Outcome {
    let elapsed = started.elapsed();
    let mut detail: Vec<String> = results.iter().map(|r| r.to_string()).collect();
    detail.push(format!("{:.1} s", elapsed.as_secs_f64()));
    let in_budget = budget.is_none_or(|b| elapsed <= b);
    if let Some(b) = budget {
        detail.push(format!("budget {} s", b.as_secs()));
    }
    if !pinned {
        detail.push("tolerances differ from the contract".into());
    }
    for r in results {
        detail.extend(r.failures.iter().map(|f| format!("{}: {}", r.name, f.chars().take(300).collect::<String>())));
    }
    Outcome {
        pass: pinned && in_budget && results.iter().all(|r| r.all_passed()),
        detail: detail.join("; "),
    }
}

fn theorem_equivalence(s: &Settings) -> Outcome {
    let t = Instant::now();
    let r = [verify::theorem_unitary(200, SEED, s), verify::theorem_oblique(200, SEED, s)];
    props(&r, verify::OBLIQUE_CAP == 50.0, t, Some(Duration::from_secs(60)))
}

fn jordan_formula(s: &Settings) -> Outcome {
    let t = Instant::now();
    let r = [verify::jordan_formula(50, 20, SEED, s)];
    props(&r, verify::JORDAN_REL_TOL == 1e-10 && verify::JORDAN_HORIZON == 100, t, None)
}

fn growth_bound() -> Outcome {
    let t = Instant::now();
    let r = [verify::growth_planted(100, SEED), verify::growth_nilpotent(20, SEED)];
    props(&r, GROWTH_SLACK == 1e-8 && GROWTH_HORIZON == 1000, t, Some(Duration::from_secs(120)))
}

fn scalar_sequences() -> Outcome {
    let t = Instant::now();
    let n = verify::SCALAR_N_MAX;
    let r = [verify::scalar_nonconvergent(100, SEED, n), verify::scalar_zero(100, SEED, n)];
    props(&r, n == 100_000, t, None)
}

fn decomposition() -> Outcome {
    let t = Instant::now();
    props(&[verify::decomposition(100, SEED)], true, t, None)
}

fn normal_limit(s: &Settings) -> Outcome {
    let t = Instant::now();
    let r = [verify::normal_limit(100, 10, SEED, s)];
    props(&r, NORMAL_LIMIT_TOL == 1e-6 && s.n_max == 2000, t, None)
}

fn normaloid_equivalence(s: &Settings) -> Outcome {
    let t = Instant::now();
    props(&[verify::normaloid_equivalence(100, SEED, s)], true, t, None)
}

fn root_limit(s: &Settings) -> Outcome {
    let t = Instant::now();
    props(&[verify::root_limit(100, SEED, s)], ROOT_LIMIT_TOL == 1e-3, t, None)
}

fn density() -> Outcome {
    let t = Instant::now();
    let pinned = verify::DENSITY_TOL == 1e-2 && verify::DENSITY_TARGETS == 100 && verify::DENSITY_N_MAX == 100_000;
    props(&[verify::density()], pinned, t, None)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut detail = Vec::new();
    let mut pass = true;
    for (name, a) in [("dft4", fixtures::dft4()), ("jordan", CMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0]))] {
        let path = dir.path().join(format!("{name}.json"));
        std::fs::write(&path, to_json(&a)).expect("write fixture");
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_aolab"))
                .args(["analyze", "--input"])
                .arg(&path)
                .env_remove("AOLAB_SEED")
                .output()
                .expect("run aolab")
        };
        let (first, second) = (run(), run());
        let same = first.stdout == second.stdout && !first.stdout.is_empty();
        let ok = first.status.success() && second.status.success();
        detail.push(format!(
            "{name}: exit {:?}, {} bytes, {}",
            first.status.code(),
            first.stdout.len(),
            if same { "identical" } else { "different" }
        ));
        pass &= same && ok;
    }
    Outcome { pass, detail: detail.join("; ") }
}

fn main() -> ExitCode {
    let s = Settings::default();
    let criteria: Vec<Criterion> = vec![
        ("theorem equivalence", Box::new(|| theorem_equivalence(&s))),
        ("jordan perturbation formula", Box::new(|| jordan_formula(&s))),
        ("growth bound", Box::new(growth_bound)),
        ("scalar sequence probe", Box::new(scalar_sequences)),
        ("decomposition certification", Box::new(decomposition)),
        ("normal limit identity", Box::new(|| normal_limit(&s))),
        ("normaloid equivalence", Box::new(|| normaloid_equivalence(&s))),
        ("root limit", Box::new(|| root_limit(&s))),
        ("density probe", Box::new(density)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {name}: {} ({})", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
