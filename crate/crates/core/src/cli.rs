//! Command-line front end: JSON in, JSON reports out.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure,
//! 2 on unreadable or invalid input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::complex_structure::{hodge_star, ComplexStructure};
use crate::error::Error;
use crate::linalg::hermitian_eigenvalues;
use crate::multivector::{Multivector, C64};
use crate::symplectic::{rows, SymplecticForm};
use crate::timorin::{af_check, psi_convexity_scan, uniform_grid, MhrReport, MixedCollection};
use crate::verify::{run_suite, Suite, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "lefschetz", version, about = "Symplectic star, Lefschetz decomposition and mixed Hodge-Riemann checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply the symplectic star (or the Hodge star with --hodge) to a form.
    Star {
        /// Symplectic form JSON; the standard form when omitted.
        #[arg(long)]
        omega: Option<PathBuf>,
        #[arg(long)]
        form: PathBuf,
        /// Use the Hodge star `*_s∘J` instead of the symplectic star.
        #[arg(long)]
        hodge: bool,
        /// Complex structure JSON for --hodge; the standard one when omitted.
        #[arg(long)]
        j: Option<PathBuf>,
    },
    /// Lefschetz decomposition of a homogeneous form.
    Decompose {
        #[arg(long)]
        omega: Option<PathBuf>,
        #[arg(long)]
        form: PathBuf,
    },
    /// Darboux basis of a symplectic form.
    Darboux {
        #[arg(long)]
        omega: PathBuf,
    },
    /// Run a randomized verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Run every check at this half-dimension only.
        #[arg(long)]
        n: Option<usize>,
        /// Trials per check (default: each check's own count).
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tolerance for algebraic residuals.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Finite-difference step.
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Mixed Hodge-Riemann Gram blocks of a collection.
    MixedHr {
        #[arg(long)]
        input: PathBuf,
        /// Only this grade (default: all k <= n).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Alexandrov-Fenchel inequality check.
    Af {
        #[arg(long)]
        input: PathBuf,
    },
    /// Convexity scan of -log c(ω_t²/2 ∧ T).
    Psi {
        #[arg(long)]
        input: PathBuf,
        /// Number of uniform grid points in (0, 1), unless the input has a grid.
        #[arg(long, default_value_t = 33)]
        points: usize,
    },
}

/// Input of `af` and `psi`.
#[derive(Deserialize)]
struct AfInput {
    n: usize,
    #[serde(rename = "J", default)]
    j: Option<Vec<Vec<f64>>>,
    alpha1: Vec<Vec<f64>>,
    alpha2: Vec<Vec<f64>>,
    #[serde(default)]
    t_factors: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    grid: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct MhrEntry {
    k: usize,
    pq: [usize; 2],
    dimension: usize,
    min_eigenvalue: f64,
    eigenvalues: Vec<f64>,
    asymmetry: f64,
    positive: bool,
    /// Rows of the Gram matrix, entries as `[re, im]`.
    gram: Vec<Vec<C64>>,
}

impl From<&MhrReport> for MhrEntry {
    fn from(r: &MhrReport) -> Self {
        MhrEntry {
            k: r.k,
            pq: r.pq,
            dimension: r.dimension,
            min_eigenvalue: r.min_eigenvalue,
            eigenvalues: hermitian_eigenvalues(&r.gram).0,
            asymmetry: r.asymmetry,
            positive: r.positive(),
            gram: r.gram.row_iter().map(|row| row.iter().copied().collect()).collect(),
        }
    }
}

enum Failure {
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn matrix(rows_: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>, Failure> {
    rows::from_rows(rows_).map_err(|e| Failure::Input(format!("{what}: {e}")))
}

fn omega_for(path: &Option<PathBuf>, n: usize) -> Result<SymplecticForm, Failure> {
    match path {
        Some(p) => {
            let w: SymplecticForm = read_json(p)?;
            if w.n() != n {
                return Err(Error::DimensionMismatch { left: w.n(), right: n }.into());
            }
            Ok(w)
        }
        None => Ok(SymplecticForm::standard(n)?),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut emit = |s: String| {
        let _ = out.write_all(s.as_bytes());
    };
    match cmd {
        Command::Star { omega, form, hodge, j } => {
            let u: Multivector = read_json(&form)?;
            let w = omega_for(&omega, u.n())?;
            let image = if hodge {
                let j = match j {
                    Some(p) => read_json::<ComplexStructure>(&p)?,
                    None => ComplexStructure::standard(u.n())?,
                };
                hodge_star(&w, &j, &u)?
            } else {
                w.star(&u)?
            };
            emit(to_json(&image));
            Ok(EXIT_OK)
        }
        Command::Decompose { omega, form } => {
            let u: Multivector = read_json(&form)?;
            let w = omega_for(&omega, u.n())?;
            let d = w.lefschetz_decompose(&u)?;
            emit(to_json(&d.report(&w, &u)));
            Ok(EXIT_OK)
        }
        Command::Darboux { omega } => {
            let w: SymplecticForm = read_json(&omega)?;
            emit(to_json(w.darboux()));
            Ok(EXIT_OK)
        }
        Command::Verify { suite, n, trials, seed, tol, h, format } => {
            let report = run_suite(&VerifyOptions { suite, n, trials, seed, tol, h })?;
            match format {
                Format::Json => emit(report.to_json() + "\n"),
                Format::Text => emit(report.to_text()),
            }
            Ok(if report.pass { EXIT_OK } else { EXIT_FAILED })
        }
        Command::MixedHr { input, k } => {
            let mc: MixedCollection = read_json(&input)?;
            let grades: Vec<usize> = match k {
                Some(k) => vec![k],
                None => (0..=mc.n()).collect(),
            };
            let mut entries = Vec::new();
            for k in grades {
                for r in mc.mixed_hr_all(k)? {
                    entries.push(MhrEntry::from(&r));
                }
            }
            let pass = entries.iter().all(|e| e.positive);
            emit(to_json(&entries));
            Ok(if pass { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Af { input } => {
            let inp: AfInput = read_json(&input)?;
            let (j, a1, a2, t) = af_parts(&inp)?;
            let r = af_check(&j, &a1, &a2, &t)?;
            emit(to_json(&r));
            Ok(if r.holds { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Psi { input, points } => {
            let inp: AfInput = read_json(&input)?;
            let (j, a1, a2, t) = af_parts(&inp)?;
            let grid = inp.grid.clone().unwrap_or_else(|| uniform_grid(points));
            let scan = psi_convexity_scan(&j, &a1, &a2, &t, &grid)?;
            emit(to_json(&scan));
            Ok(if scan.convex { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

type AfParts = (ComplexStructure, DMatrix<f64>, DMatrix<f64>, Vec<DMatrix<f64>>);

fn af_parts(inp: &AfInput) -> Result<AfParts, Failure> {
    crate::multivector::check_n(inp.n)?;
    let j = match &inp.j {
        Some(m) => ComplexStructure::new(matrix(m, "J")?)?,
        None => ComplexStructure::standard(inp.n)?,
    };
    if j.n() != inp.n {
        return Err(Error::DimensionMismatch { left: inp.n, right: j.n() }.into());
    }
    let t = inp
        .t_factors
        .iter()
        .enumerate()
        .map(|(i, m)| matrix(m, &format!("t_factors[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((j, matrix(&inp.alpha1, "alpha1")?, matrix(&inp.alpha2, "alpha2")?, t))
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("lefschetz").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_subcommand_is_an_input_error() {
        let (code, _, err) = run_args(&["frobnicate"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(!err.is_empty());
    }

    #[test]
    fn help_exits_cleanly() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("verify"));
    }

    #[test]
    fn missing_file_is_an_input_error() {
        let (code, _, err) = run_args(&["darboux", "--omega", "/nonexistent/w.json"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("/nonexistent/w.json"));
    }
}
