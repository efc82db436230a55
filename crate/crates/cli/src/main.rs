use std::fs;
use std::io::Write;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ocgen_core::expansion::{
    default_workers, fixed_from_pairs, leading_error_with_workers, order_conditions_with_workers,
    WORKERS_ENV,
};
use ocgen_core::numeric::{
    check_conditions, estimate_order, geometric_grid, random_operators, FitWarning,
};
use ocgen_core::words::{bracket_expansion, bracket_string, lyndon_words};
use ocgen_core::{Alphabet, Ansatz, OrderConditionSystem, SchemeCoefficients, SchemeSpec};

/// Order conditions for splitting methods.
#[derive(Parser, Debug)]
#[command(name = "ocgen", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the Lyndon words of one degree.
    Lyndon {
        /// Alphabet size: 2 for {A,B}, 3 for {A,B,C}.
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long)]
        degree: usize,
        /// Also print the standard bracketing and its expansion.
        #[arg(long)]
        bracket: bool,
    },
    /// Generate the order conditions of an s-stage scheme.
    Gen {
        #[arg(long)]
        stages: usize,
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 2)]
        operators: usize,
        #[arg(long, default_value = "plain")]
        ansatz: String,
        /// A-priori coefficient value, e.g. `--fix a1=1/2`. Repeatable.
        #[arg(long = "fix", value_name = "NAME=VALUE")]
        fixed: Vec<String>,
        /// Append the leading error block of order p+1.
        #[arg(long)]
        leading: bool,
        #[arg(long, env = WORKERS_ENV)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a stored system at concrete coefficients.
    Verify {
        /// System in JSON as written by `gen --format json`.
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        coeffs: PathBuf,
        /// Largest accepted |residual|; 0 demands exact zeros.
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
    },
    /// Fit the observed order of a scheme on random matrices.
    EstimateOrder {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-1)]
        h_max: f64,
        #[arg(long, default_value_t = 1e-3)]
        h_min: f64,
        #[arg(long, default_value_t = 8)]
        points: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Failure classes, mapped to exit codes 2 and 1.
enum Failure {
    Usage(String),
    Internal(String),
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("{flag}: {msg}"))
}

fn internal(msg: impl std::fmt::Display) -> Failure {
    Failure::Internal(msg.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Lyndon {
            alphabet,
            degree,
            bracket,
        } => lyndon(alphabet, degree, bracket),
        Command::Gen {
            stages,
            order,
            operators,
            ansatz,
            fixed,
            leading,
            workers,
            format,
            output,
        } => {
            let spec = build_spec(stages, order, operators, &ansatz, &fixed)?;
            let workers = match workers {
                Some(0) => return Err(usage("--workers", "must be at least 1")),
                Some(n) => NonZeroUsize::new(n).expect("nonzero"),
                None => default_workers(),
            };
            let mut system =
                order_conditions_with_workers(&spec, order, workers).map_err(internal)?;
            if leading {
                system = system.with_leading(
                    leading_error_with_workers(&spec, order, workers).map_err(internal)?,
                );
            }
            let text = match format {
                Format::Text => system.to_text(),
                Format::Json => system.to_json(),
            };
            emit(&text, output.as_deref())
        }
        Command::Verify {
            system,
            coeffs,
            tol,
        } => verify(&system, &coeffs, tol),
        Command::EstimateOrder {
            coeffs,
            dim,
            seed,
            h_max,
            h_min,
            points,
        } => estimate(&coeffs, dim, seed, h_max, h_min, points),
    }
}

fn lyndon(alphabet: usize, degree: usize, bracket: bool) -> Result<(), Failure> {
    let alphabet = Alphabet::new(alphabet).map_err(|e| usage("--alphabet", e))?;
    let words = lyndon_words(alphabet, degree).map_err(|e| usage("--degree", e))?;
    let mut out = String::new();
    for w in words {
        if bracket {
            let b = bracket_string(&w).map_err(internal)?;
            let e = bracket_expansion(&w).map_err(internal)?;
            out.push_str(&format!("{w}\t{b}\t{e}\n"));
        } else {
            out.push_str(&format!("{w}\n"));
        }
    }
    emit(&out, None)
}

fn build_spec(
    stages: usize,
    order: usize,
    operators: usize,
    ansatz: &str,
    fixed: &[String],
) -> Result<SchemeSpec, Failure> {
    if stages == 0 {
        return Err(usage("--stages", "must be at least 1"));
    }
    if order == 0 {
        return Err(usage("--order", "must be at least 1"));
    }
    let ansatz: Ansatz = ansatz.parse().map_err(|e| usage("--ansatz", e))?;
    let spec = SchemeSpec::new(stages, operators).map_err(|e| usage("--operators", e))?;
    let spec = spec.with_ansatz(ansatz).map_err(|e| usage("--ansatz", e))?;
    let pairs = fixed
        .iter()
        .map(|item| {
            item.split_once('=')
                .map(|(n, v)| (n.trim(), v.trim()))
                .ok_or_else(|| usage("--fix", format!("expected NAME=VALUE, got {item:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let values = fixed_from_pairs(pairs).map_err(|e| usage("--fix", e))?;
    spec.with_fixed(values).map_err(|e| usage("--fix", e))
}

fn read_input(path: &Path, flag: &str) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| usage(flag, format!("cannot read {}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| usage("--output", format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not worth reporting
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn verify(system: &Path, coeffs: &Path, tol: f64) -> Result<(), Failure> {
    if tol.is_nan() || tol < 0.0 {
        return Err(usage("--tol", "must be a nonnegative number"));
    }
    let system = OrderConditionSystem::from_json(&read_input(system, "--system")?)
        .map_err(|e| usage("--system", e))?;
    let coeffs = SchemeCoefficients::from_json(&read_input(coeffs, "--coeffs")?)
        .map_err(|e| usage("--coeffs", e))?;
    let report = match check_conditions(&system, &coeffs, tol) {
        Ok(r) => r,
        Err(e @ ocgen_core::VerifyError::Dimension(_)) => return Err(usage("--coeffs", e)),
        Err(e) => return Err(internal(e)),
    };

    let mut out = String::new();
    for r in &report.residuals {
        let value = match &r.exact {
            Some(x) => ocgen_core::poly::format_rational(x),
            None => format!("{:.3e}", r.magnitude),
        };
        let mark = if report.within(r) { "ok" } else { "FAIL" };
        out.push_str(&format!("q={} {} {} {}\n", r.q, r.word, value, mark));
    }
    for (u, gap) in &report.ansatz_violations {
        out.push_str(&format!("ansatz {u} off by {gap:.3e} FAIL\n"));
    }
    out.push_str(&format!(
        "status: {} (max |residual| {:.3e}, tol {:e})\n",
        if report.passed() { "pass" } else { "fail" },
        report.max_residual(),
        tol
    ));
    emit(&out, None)
}

fn estimate(
    coeffs: &Path,
    dim: usize,
    seed: u64,
    h_max: f64,
    h_min: f64,
    points: usize,
) -> Result<(), Failure> {
    let coeffs = SchemeCoefficients::from_json(&read_input(coeffs, "--coeffs")?)
        .map_err(|e| usage("--coeffs", e))?;
    if dim == 0 {
        return Err(usage("--dim", "must be at least 1"));
    }
    if !(h_max > 0.0 && h_min > 0.0 && h_min < h_max && h_max.is_finite()) {
        return Err(usage("--h-min", "need 0 < h-min < h-max"));
    }
    if points < 4 {
        return Err(usage("--points", "at least 4 step sizes are needed"));
    }
    let ops = random_operators(coeffs.operators(), dim, seed);
    let grid = geometric_grid(h_max, h_min, points);
    let fit = if coeffs.is_real() {
        estimate_order(&coeffs, &ops, &grid)
    } else {
        let ops: Vec<_> = ops.iter().map(|m| m.map(|x| x.into())).collect();
        estimate_order::<ocgen_core::numeric::Complex64>(&coeffs, &ops, &grid)
    }
    .map_err(internal)?;

    let mut out = String::new();
    for (h, e) in &fit.samples {
        out.push_str(&format!("h={h:.6e} err={e:.6e}\n"));
    }
    match fit.slope {
        Some(s) => out.push_str(&format!("slope: {s:.4}\norder: {:.4}\n", s - 1.0)),
        None => out.push_str("slope: undetermined\n"),
    }
    if let Some(FitWarning::Degenerate { usable }) = fit.warning {
        out.push_str(&format!(
            "warning: only {usable} errors above the rounding floor; the fit is degenerate\n"
        ));
    }
    emit(&out, None)
}
