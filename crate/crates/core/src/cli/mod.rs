//! The `mrdp` command line.
//!
//! ```text
//! mrdp divergence <F_FILE> <G_FILE>
//! mrdp independence --p1 X --p2 Y [--tol T]
//! mrdp sweep --p1 X --p2 Y --steps N --out PATH
//! mrdp solve <PROBLEM_FILE> [--tol T]
//! ```
//!
//! Exit codes: 0 success, 2 input validation, 3 I/O, 4 non-convergence,
//! 5 infeasible problem.

pub mod problem_file;
pub mod values;

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand};

use crate::chain::{Chain, GradingFunction};
use crate::divergence::relative_divergence;
use crate::error::Error;
use crate::independence::{IndependenceInstance, ObjectiveCurve};
use crate::solver::DEFAULT_TOLERANCE;

pub use problem_file::{ProblemFile, ProblemFileError};
pub use values::{parse_values, LineValue};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_NOT_CONVERGED: u8 = 4;
pub const EXIT_INFEASIBLE: u8 = 5;

pub const CSV_HEADER: &str = "x,d,d_prime,d_double_prime";

#[derive(Debug, Parser)]
#[command(
    name = "mrdp",
    version,
    about = "Relative divergence and maximum relative divergence solver"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Relative divergence of F from G, read as value files
    Divergence { f_file: PathBuf, g_file: PathBuf },
    /// Least presuming P(A∩B) for events with marginals p1 and p2
    Independence {
        #[arg(long, value_parser = probability)]
        p1: f64,
        #[arg(long, value_parser = probability)]
        p2: f64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE, value_parser = tolerance)]
        tol: f64,
    },
    /// Write d, d' and d'' over the feasible interval as CSV
    Sweep {
        #[arg(long, value_parser = probability)]
        p1: f64,
        #[arg(long, value_parser = probability)]
        p2: f64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        steps: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve a problem file
    Solve {
        problem_file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE, value_parser = tolerance)]
        tol: f64,
    },
}

fn probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("{p} is outside [0, 1]"))
    }
}

fn tolerance(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(format!("tolerance must be positive, got {t}"))
    }
}

/// A failed command: exit code plus the message for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }

    fn io(path: &Path, err: io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::EmptyRegion { .. } | Error::EmptyLine { .. } | Error::InfeasiblePoint { .. } => {
                EXIT_INFEASIBLE
            }
            _ => EXIT_VALIDATION,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let rendered = e.render().to_string();
            let _ = write!(err, "{rendered}");
            if !rendered.contains("Usage:") {
                let _ = write!(err, "\n{}\n", Cli::command().render_usage());
            }
            return EXIT_VALIDATION;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Divergence { f_file, g_file } => cmd_divergence(&f_file, &g_file, out),
        Command::Independence { p1, p2, tol } => cmd_independence(p1, p2, tol, out),
        Command::Sweep {
            p1,
            p2,
            steps,
            out: path,
        } => {
            let steps =
                usize::try_from(steps).map_err(|_| Failure::validation("too many steps"))?;
            cmd_sweep(p1, p2, steps, &path, out)
        }
        Command::Solve { problem_file, tol } => cmd_solve(&problem_file, tol, out),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn read_values(path: &Path) -> Result<Vec<LineValue>, Failure> {
    let values = parse_values(&read(path)?)
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    if values.len() < 2 {
        return Err(Failure::validation(format!(
            "{}: need at least 2 values, found {}",
            path.display(),
            values.len()
        )));
    }
    Ok(values)
}

fn emit(out: &mut dyn Write, text: std::fmt::Arguments<'_>) -> Result<(), Failure> {
    out.write_fmt(text).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("writing output: {e}"),
    })
}

/// `D(F ‖ G)` for value files `f_path` and `g_path`. G must strictly
/// increase; F may repeat values.
pub fn cmd_divergence(f_path: &Path, g_path: &Path, out: &mut dyn Write) -> CmdResult {
    let f = read_values(f_path)?;
    let g = read_values(g_path)?;
    if f.len() != g.len() {
        return Err(Failure::validation(format!(
            "{} has {} values but {} has {}",
            f_path.display(),
            f.len(),
            g_path.display(),
            g.len()
        )));
    }
    for pair in f.windows(2) {
        if pair[1].value < pair[0].value {
            return Err(Failure::validation(format!(
                "{}: line {}: value {} decreases from {}",
                f_path.display(),
                pair[1].line,
                pair[1].value,
                pair[0].value
            )));
        }
    }
    let chain = Chain::new((0..g.len()).map(|k| format!("w{k}"))).expect("distinct labels");
    let g_values = g.iter().map(|lv| lv.value).collect();
    let gf = GradingFunction::new(chain, g_values).map_err(|e| match e {
        Error::NotIncreasing { index, .. } => {
            Failure::validation(format!("{}: line {}: {e}", g_path.display(), g[index].line))
        }
        other => Failure::validation(format!("{}: {other}", g_path.display())),
    })?;
    let f_increments: Vec<f64> = f.windows(2).map(|w| w[1].value - w[0].value).collect();
    let d = relative_divergence(&f_increments, &gf.increments())?;
    emit(out, format_args!("{}\n", format_significant(d, 12)))?;
    Ok(EXIT_OK)
}

pub fn cmd_independence(p1: f64, p2: f64, tol: f64, out: &mut dyn Write) -> CmdResult {
    let instance = IndependenceInstance::new(p1, p2)?;
    let argmax = instance.solve(tol)?;
    let product = p1 * p2;
    let interval = instance.interval();
    emit(
        out,
        format_args!(
            "argmax: {argmax}\nclosed_form: {product}\nabs_diff: {:e}\ninterval: [{}, {}]\nd_at_argmax: {}\n",
            (argmax - product).abs(),
            interval.lo,
            interval.hi,
            instance.d(argmax)?
        ),
    )?;
    Ok(EXIT_OK)
}

pub fn cmd_sweep(p1: f64, p2: f64, steps: usize, path: &Path, out: &mut dyn Write) -> CmdResult {
    let curve = IndependenceInstance::new(p1, p2)?.sweep(steps)?;
    let file = fs::File::create(path).map_err(|e| Failure::io(path, e))?;
    let mut writer = BufWriter::new(file);
    write_csv(&curve, &mut writer)
        .and_then(|_| writer.flush())
        .map_err(|e| Failure::io(path, e))?;
    emit(
        out,
        format_args!("rows: {}\nout: {}\n", curve.len(), path.display()),
    )?;
    Ok(EXIT_OK)
}

/// Writes `curve` as CSV with 17 significant digits; undefined derivatives
/// are empty cells.
pub fn write_csv(curve: &ObjectiveCurve, w: &mut dyn Write) -> io::Result<()> {
    let cell = |v: Option<f64>| v.map(|v| format!("{v:.16e}")).unwrap_or_default();
    writeln!(w, "{CSV_HEADER}")?;
    for p in &curve.points {
        writeln!(
            w,
            "{:.16e},{:.16e},{},{}",
            p.x,
            p.d,
            cell(p.d_prime),
            cell(p.d_double_prime)
        )?;
    }
    Ok(())
}

pub fn cmd_solve(path: &Path, tol: f64, out: &mut dyn Write) -> CmdResult {
    let text = read(path)?;
    let locate = |e: ProblemFileError| Failure {
        code: if e.is_infeasible() {
            EXIT_INFEASIBLE
        } else {
            EXIT_VALIDATION
        },
        message: format!("{}: {e}", path.display()),
    };
    let problem = ProblemFile::parse(&text)
        .and_then(|f| f.to_problem())
        .map_err(locate)?;
    let report = problem.maximize(tol)?;
    let argmax: Vec<String> = report.argmax.iter().map(f64::to_string).collect();
    emit(
        out,
        format_args!(
            "argmax: [{}]\nobjective: {}\niterations: {}\nsweeps: {}\ngradient_norm: {}\nconverged: {}\n",
            argmax.join(", "),
            report.objective_at_argmax,
            report.iterations,
            report.sweeps,
            report.gradient_norm_at_exit,
            report.converged
        ),
    )?;
    Ok(if report.converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

/// Formats `v` with `digits` significant digits, dropping trailing zeros,
/// like C's `%g`.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_owned()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
