use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use aolab::generators::{self, Extra, InstanceSpec, Kind};
use aolab::report::{self, to_json};
use aolab::sequence::WindowRule;
use aolab::verify::{self, Suite};
use aolab::{CMatrix, Error, Settings};

#[derive(Parser)]
#[command(name = "aolab", version, about = "Decide when an algebraic matrix is unitary, and why not")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a matrix JSON file and emit a report.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write `n,power_norm,bound` rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Emit a generated matrix as JSON.
    Generate {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Comma-separated complex numbers such as `1,-1,0.5+0.5i`.
        #[arg(long, allow_hyphen_values = true)]
        eigenvalues: Option<String>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        cond_cap: Option<f64>,
        #[arg(long)]
        scale: Option<f64>,
        #[arg(long, env = "AOLAB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a property suite and print per-property pass counts.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long = "nmax", default_value_t = 2000)]
    n_max: usize,
    #[arg(long, default_value_t = 50)]
    window: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol_conv: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol_rank: f64,
    #[arg(long, env = "AOLAB_SEED", default_value_t = 0)]
    seed: u64,
}

impl RunArgs {
    fn settings(&self) -> Result<Settings, Error> {
        let s = Settings {
            n_max: self.n_max,
            rule: WindowRule { window: self.window, tol: self.tol_conv },
            rank_rel: self.tol_rank,
            probe_seed: self.seed,
        };
        s.validate()?;
        Ok(s)
    }
}

const EXIT_INPUT: u8 = 1;
const EXIT_INCONSISTENT: u8 = 2;
const EXIT_SUITE: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Inconsistency(_) | Error::NumericalFailure(_) | Error::DecompositionFailure(_) => EXIT_INCONSISTENT,
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits with 2 on usage errors, which is reserved for inconsistencies here.
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Analyze { input, out, csv, run } => analyze(&input, out.as_deref(), csv.as_deref(), &run),
        Command::Generate { kind, dim, eigenvalues, theta, cond_cap, scale, seed, out } => {
            generate(&kind, dim, eigenvalues.as_deref(), Extra { cond_cap, scale, theta, require_oblique: false }, seed, out.as_deref())
        }
        Command::Verify { suite, trials, out, run } => verify(&suite, trials, out.as_deref(), &run),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("aolab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::InvalidInput(format!("out: cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_matrix(path: &Path) -> Result<CMatrix, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("input: cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("input: {e}")))
}

fn analyze(input: &Path, out: Option<&Path>, csv: Option<&Path>, run: &RunArgs) -> Result<u8, Error> {
    let s = run.settings()?;
    let a = read_matrix(input)?;
    let r = report::analyze(&a, &s)?;
    write_or_print(out, &to_json(&r))?;
    if let Some(p) = csv {
        fs::write(p, report::power_csv(&r)).map_err(|e| Error::InvalidInput(format!("csv: cannot write {}: {e}", p.display())))?;
    }
    if !r.consistent {
        for n in &r.notes {
            eprintln!("aolab: {n}");
        }
        return Ok(EXIT_INCONSISTENT);
    }
    Ok(0)
}

fn generate(kind: &str, dim: usize, eigenvalues: Option<&str>, extra: Extra, seed: u64, out: Option<&Path>) -> Result<u8, Error> {
    let spec = InstanceSpec {
        kind: kind.parse::<Kind>()?,
        dim,
        eigenvalues: match eigenvalues {
            Some(list) => parse_complex_list(list)?,
            None => vec![],
        },
        seed,
        extra,
    };
    let a = generators::generate(&spec).map_err(|e| match e {
        Error::Contradiction(m) | Error::Precondition(m) => Error::InvalidInput(m),
        other => other,
    })?;
    write_or_print(out, &to_json(&a))?;
    Ok(0)
}

fn verify(suite: &str, trials: usize, out: Option<&Path>, run: &RunArgs) -> Result<u8, Error> {
    let suite: Suite = suite.parse()?;
    if trials == 0 {
        return Err(Error::InvalidInput("trials: must be positive".into()));
    }
    let s = run.settings()?;
    let results = verify::run(suite, trials, run.seed, &s);
    for r in &results {
        println!("{r}");
        for f in &r.failures {
            println!("  {f}");
        }
    }
    let ok = results.iter().all(|r| r.all_passed());
    println!("suite {suite}: {}", if ok { "PASS" } else { "FAIL" });
    if let Some(p) = out {
        fs::write(p, to_json(&results)).map_err(|e| Error::InvalidInput(format!("out: cannot write {}: {e}", p.display())))?;
    }
    Ok(if ok { 0 } else { EXIT_SUITE })
}

/// `1`, `-0.5`, `2i`, `-i`, `0.5+0.25i`, `1e-3-2i`.
fn parse_complex(text: &str) -> Result<Complex64, Error> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidInput(format!("eigenvalues: cannot parse '{text}'"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not the leading one or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |s: &str| -> Result<f64, Error> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => Ok(Complex64::new(body[..k].parse::<f64>().map_err(|_| bad())?, imag(&body[k..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

fn parse_complex_list(text: &str) -> Result<Vec<Complex64>, Error> {
    text.split(',').map(parse_complex).collect()
}
