use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use qcluster::*;

/// Exit codes: 0 success, 1 a check failed, 2 usage or bounds error,
/// 3 timeout, 4 internal error.
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "qck", version, about = "Quantum cluster realization of U_q(sl_{n+1}): quivers, schedules, R-matrix factors")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Vertex labels: figure numbering (n <= 2) or internal names.
    #[arg(long, global = true, value_enum, default_value = "internal")]
    seed_labels: LabelArg,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Export a quiver.
    Build {
        #[arg(value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Run a verification suite and print a JSON report.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        n: usize,
        /// Series truncation degree for the pentagon suite.
        #[arg(long)]
        truncate: Option<i64>,
        /// Give up after this many seconds.
        #[arg(long)]
        timeout: Option<f64>,
        /// Include per-check timings in the report.
        #[arg(long)]
        timings: bool,
        /// Rank cap for every suite.
        #[arg(long, env = "QCK_MAX_N", hide = true)]
        max_n: Option<usize>,
    },
    /// The half-Dehn twist schedule on Z_n with its dilogarithm arguments.
    Schedule {
        #[arg(long)]
        n: usize,
    },
    /// A factor sequence of the quasi R-matrix.
    Factors {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "rfact1")]
        which: WhichArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LabelArg {
    #[value(name = "paper", alias = "figure")]
    Figure,
    Internal,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Triangle,
    Dn,
    Zn,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Embedding,
    #[value(name = "lemK", alias = "lemk")]
    LemK,
    Rsequences,
    Pentagon,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    Rfact1,
    Rfact2,
    Phi,
    Triangular,
}

fn emit(out: &Option<PathBuf>, text: &str, artifacts: &mut Vec<String>) -> Result<(), CliError> {
    match out {
        Some(p) => {
            std::fs::write(p, text)?;
            artifacts.push(p.display().to_string());
        }
        None => print!("{}", text),
    }
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let labels = match cli.seed_labels {
        LabelArg::Figure => Labels::Figure,
        LabelArg::Internal => Labels::Internal,
    };
    let mut artifacts = Vec::new();
    match cli.cmd {
        Cmd::Build { kind, n, m, format } => {
            let (kind, size) = match (kind, n, m) {
                (KindArg::Triangle, None, Some(m)) => (QuiverKind::Triangle, m),
                (KindArg::Dn, Some(n), None) => (QuiverKind::Dn, n),
                (KindArg::Zn, Some(n), None) => (QuiverKind::Zn, n),
                (KindArg::Triangle, _, _) => return Err(CliError::Usage("triangle takes --m only".into())),
                _ => return Err(CliError::Usage("dn and zn take --n only".into())),
            };
            let q = build_quiver(kind, size, labels)?;
            let text = match format {
                FormatArg::Json => pretty(&quiver_json(&q)),
                FormatArg::Dot => quiver_dot(&q),
            };
            emit(&cli.out, &text, &mut artifacts)?;
            Ok(0)
        }
        Cmd::Schedule { n } => {
            emit(&cli.out, &pretty(&schedule_json(n, labels)?), &mut artifacts)?;
            Ok(0)
        }
        Cmd::Factors { n, which } => {
            let which = match which {
                WhichArg::Rfact1 => Which::Rfact1,
                WhichArg::Rfact2 => Which::Rfact2,
                WhichArg::Phi => Which::Phi,
                WhichArg::Triangular => Which::Triangular,
            };
            let s = factor_sequence(n, which)?;
            emit(&cli.out, &pretty(&factors_json(&s)), &mut artifacts)?;
            Ok(0)
        }
        Cmd::Verify { suite, n, truncate, timeout, timings, max_n } => {
            let suite = match suite {
                SuiteArg::Embedding => Suite::Embedding,
                SuiteArg::LemK => Suite::LemK,
                SuiteArg::Rsequences => Suite::RSequences,
                SuiteArg::Pentagon => Suite::Pentagon,
                SuiteArg::All => Suite::All,
            };
            check_bounds(suite, n, max_n)?;
            if matches!(truncate, Some(d) if d < 0) {
                return Err(CliError::Usage("--truncate must be >= 0".into()));
            }
            let (tx, rx) = mpsc::channel();
            thread::spawn(move || {
                run_suite(suite, n, truncate, |c| {
                    let _ = tx.send(c);
                })
            });
            let deadline = timeout.map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0)));
            let mut checks = Vec::new();
            loop {
                let next = match deadline {
                    Some(d) => match rx.recv_timeout(d.saturating_duration_since(Instant::now())) {
                        Ok(c) => Some(c),
                        Err(mpsc::RecvTimeoutError::Disconnected) => None,
                        Err(mpsc::RecvTimeoutError::Timeout) => {
                            eprintln!("qck: verify {} timed out after {} checks", suite.name(), checks.len());
                            return Ok(EXIT_TIMEOUT);
                        }
                    },
                    None => rx.recv().ok(),
                };
                match next {
                    Some(c) => {
                        eprintln!("{:5} {}", c.status.as_str(), c.name);
                        checks.push(c);
                    }
                    None => break,
                }
            }
            if let Some(p) = &cli.out {
                artifacts.push(p.display().to_string());
            }
            let rep = report_json(&format!("verify {}", suite.name()), n, &checks, &artifacts, timings);
            let text = pretty(&rep);
            match &cli.out {
                Some(p) => std::fs::write(p, &text)?,
                None => print!("{}", text),
            }
            let ok = checks.iter().all(|c| c.status == Status::Pass);
            Ok(if ok { 0 } else { EXIT_FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(m)) => {
            eprintln!("qck: {}", m);
            ExitCode::from(EXIT_USAGE)
        }
        Err(e) => {
            eprintln!("qck: {}", e);
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
