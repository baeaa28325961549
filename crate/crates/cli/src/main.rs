//! `raney`: bounds, transducers and period computations from the command
//! line.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 for bad
//! input. Reports go to standard output, progress to standard error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use raney_core::bounds::{s_n_closed_form, Verdict};
use raney_core::search::search;
use raney_core::verify::{transform, verify, VerifyConfig};
use raney_core::{build_transducer, Error, Mat2, PeriodicCF};

#[derive(Parser, Debug)]
#[command(name = "raney", version, about = "Periods of Möbius images of quadratic irrationals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the bound S_n.
    Bound {
        n: u64,
        /// List every (t, j) term of the divisor sum.
        #[arg(long)]
        breakdown: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the transducer T_n.
    Transducer {
        n: u64,
        #[arg(long, value_enum, default_value_t = GraphFormat::Table)]
        format: GraphFormat,
        /// Write to this file instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Compute h_M(x) and compare its period with the bound.
    Transform {
        /// Matrix entries `a,b,c,d`.
        #[arg(long, allow_hyphen_values = true)]
        matrix: Mat2,
        /// Continued fraction `[p0,...;r0,...]`.
        #[arg(long, allow_hyphen_values = true)]
        cf: PeriodicCF,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Randomized check of the transducer against the surd oracle.
    Verify {
        n: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, env = "CFM_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_period: usize,
        #[arg(long, default_value_t = 50)]
        max_quotient: u64,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Largest image period over all states and rotations of x.
    Search {
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        cf: PeriodicCF,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Table,
    Dot,
    Csv,
    Json,
}

/// Failure of a command, carrying its exit status.
enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::FactorizationViolation(_)
            | Error::IterationCap(_)
            | Error::ThreadPool(_)
            | Error::Output(_) => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn verdict_text(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::ViolatesUpper => "violates upper bound",
        Verdict::ViolatesLower => "violates lower bound",
    }
}

/// Output text and whether the command's check passed.
type Outcome = Result<(String, bool), Failure>;

fn cmd_bound(n: u64, breakdown: bool, format: Format) -> Outcome {
    let b = s_n_closed_form(n)?;
    let text = match (format, breakdown) {
        (Format::Json, true) => json(&b),
        (Format::Json, false) => json(&serde_json::json!({ "n": n, "s_n": b.total })),
        (Format::Text, false) => format!("S_{n} = {}\n", b.total),
        (Format::Text, true) => {
            let mut s = format!("S_{n} = {}\n", b.total);
            for (t, terms) in b.per_divisor() {
                let sum: u64 = terms.iter().map(|x| x.term).sum();
                let _ = writeln!(s, "t = {t}: {sum}");
                for x in terms {
                    let _ = writeln!(s, "  j = {:<4} xi = {:<3} term = {}", x.j, x.xi, x.term);
                }
            }
            s
        }
    };
    Ok((text, true))
}

fn cmd_transducer(n: u64, format: GraphFormat, output: Option<PathBuf>) -> Outcome {
    let t = build_transducer(n)?;
    let text = match format {
        GraphFormat::Table => t.to_table(),
        GraphFormat::Dot => t.to_dot(),
        GraphFormat::Csv => t.to_csv()?,
        GraphFormat::Json => t.to_json()? + "\n",
    };
    match output {
        Some(path) => {
            std::fs::write(&path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Ok((String::new(), true))
        }
        None => Ok((text, true)),
    }
}

fn cmd_transform(m: &Mat2, x: &PeriodicCF, format: Format) -> Outcome {
    let r = transform(m, x)?;
    let ok = r.verdict == Verdict::Holds && r.per_hx == r.oracle_per;
    let text = match format {
        Format::Json => json(&r),
        Format::Text => format!(
            "h(x) = {}\nper(x) = {}\nper(h(x)) = {} (oracle {})\nS_{} = {}\nverdict: {}\n",
            r.result_cf,
            r.per_x,
            r.per_hx,
            r.oracle_per,
            r.n,
            r.s_n,
            verdict_text(r.verdict)
        ),
    };
    Ok((text, ok))
}

fn cmd_verify(cfg: VerifyConfig, format: Format) -> Outcome {
    let total = cfg.samples;
    let step = (total / 10).max(1);
    let progress = move |k: usize| {
        if k.is_multiple_of(step) || k == total {
            eprintln!("verify: {k}/{total}");
        }
    };
    let r = verify(&cfg, Some(&progress))?;
    let text = match format {
        Format::Json => json(&r),
        Format::Text => {
            let mut s = format!(
                "n = {}, samples = {}, seed = {}, S_{} = {}: {} failures\n",
                r.n,
                r.samples,
                r.seed,
                r.n,
                r.s_n,
                r.failures.len()
            );
            for f in &r.failures {
                let _ = writeln!(
                    s,
                    "  #{} M = {} x = {} per(x) = {} per(h(x)) = {:?} oracle = {:?} verdict = {:?} error = {:?}",
                    f.index, f.matrix, f.cf, f.per_x, f.per_hx, f.oracle_per, f.verdict, f.error
                );
            }
            s
        }
    };
    Ok((text, r.passed()))
}

fn cmd_search(n: u64, x: &PeriodicCF, format: Format) -> Outcome {
    let r = search(n, x)?;
    let text = match format {
        Format::Json => json(&r),
        Format::Text => format!(
            "n = {}, x = {}, per(x) = {}\nbest ratio {} (period {}) from state {}\nwitness x = {}\nh(x) = {}\nevaluated {} pairs\n",
            r.n,
            r.cf,
            r.per_x,
            r.best_ratio,
            r.best_period,
            r.witness_state,
            r.witness_x,
            r.witness_image,
            r.evaluated
        ),
    };
    Ok((text, true))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Bound { n, breakdown, format } => cmd_bound(n, breakdown, format),
        Command::Transducer { n, format, output } => cmd_transducer(n, format, output),
        Command::Transform { matrix, cf, format } => cmd_transform(&matrix, &cf, format),
        Command::Verify {
            n,
            samples,
            seed,
            max_period,
            max_quotient,
            jobs,
            format,
        } => {
            let cfg = VerifyConfig {
                max_period,
                max_quotient,
                jobs,
                ..VerifyConfig::new(n, samples, seed)
            };
            cmd_verify(cfg, format)
        }
        Command::Search { n, cf, format } => cmd_search(n, &cf, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok((text, ok)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
