//! Command-line front end.
//!
//! Exit codes: 0 success or verdict reached, 1 a verification failed or I/O
//! failed, 2 usage error, 3 budget exhausted.

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::cayley::{brute_force_aut, compare_reported_claim, decide_cayley, ClaimComparison, Decision, DEFAULT_BUDGET};
use crate::error::Error;
use crate::perm::orbits;
use crate::reports::{cache_dir_from_env, export_graph, render_report, survey, verify_square, write_report, ExportFormat};
use crate::torus::{build_torus, TorusParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "c4c8", version, about = "Rhomboidal C4C8 nanotori: construction, symmetry checks, Cayley decisions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build TRC4C8(R)[m,n] and export it
    Build {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = ["dot", "json", "edgelist"])]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the generator symmetries, their relations and the regular action on [n,n]
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Compute the full automorphism group by exhaustive search
    Aut {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Decide whether TRC4C8(R)[m,n] is a Cayley graph
    Cayley {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Decide a range of shapes and write a CSV table
    Survey {
        #[arg(long, value_parser = parse_range)]
        m: RangeInclusive<usize>,
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Overrides the C4C8_CACHE_DIR environment variable
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
}

/// `A..B` (inclusive) or a single `A`.
fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(format!("range {s:?} must be nonempty and start at 1 or more"));
    }
    Ok(lo..=hi)
}

#[derive(Serialize)]
struct AutSummary {
    params: TorusParams,
    order: usize,
    aut_order: usize,
    vertex_orbits: usize,
    orbit_sizes: Vec<usize>,
    generators: Vec<String>,
    claim_check: Option<ClaimComparison>,
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parameter(_) | Error::Range(_) | Error::Capacity { .. } | Error::Shape { .. } => EXIT_USAGE,
        Error::Budget { .. } => EXIT_BUDGET,
        _ => EXIT_FAILED,
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serialises");
    s.push('\n');
    s
}

/// Runs the CLI with the given arguments (program name first).
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => out.write_all(bytes)?,
    }
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    match command {
        Command::Build { m, n, format, out: path } => {
            let graph = build_torus(TorusParams::new(m, n)?)?;
            let format: ExportFormat = format.parse()?;
            emit(out, path.as_ref(), &export_graph(&graph, format))?;
            Ok(EXIT_OK)
        }
        Command::Verify { n, out: path, budget } => {
            let report = verify_square(n, budget)?;
            match path {
                Some(p) => {
                    write_report(&report, &p)?;
                    writeln!(out, "[{n},{n}]: all checks {}", if report.all_passed { "passed" } else { "FAILED" })?;
                }
                None => out.write_all(render_report(&report).as_bytes())?,
            }
            if !report.all_passed {
                writeln!(err, "verification failed for [{n},{n}]")?;
                return Ok(EXIT_FAILED);
            }
            Ok(EXIT_OK)
        }
        Command::Aut { m, n, budget } => {
            let params = TorusParams::new(m, n)?;
            let graph = build_torus(params)?;
            let aut = brute_force_aut(&graph, budget)?;
            let orbit_list = orbits(aut.generators(), aut.degree());
            let summary = AutSummary {
                params,
                order: params.order(),
                aut_order: aut.order(),
                vertex_orbits: orbit_list.len(),
                orbit_sizes: orbit_list.iter().map(Vec::len).collect(),
                generators: aut.generators().iter().map(ToString::to_string).collect(),
                claim_check: compare_reported_claim(params, aut.order()),
            };
            if let Some(c) = summary.claim_check.as_ref().filter(|c| !c.agrees) {
                writeln!(
                    err,
                    "note: previously reported Aut ≅ {} (order {}) disagrees with computed order {}",
                    c.claimed, c.claimed_order, c.computed_order
                )?;
            }
            out.write_all(to_json(&summary).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Cayley { m, n, budget } => {
            let verdict = decide_cayley(TorusParams::new(m, n)?, budget)?;
            out.write_all(to_json(&verdict).as_bytes())?;
            Ok(if verdict.is_cayley == Decision::Inconclusive { EXIT_BUDGET } else { EXIT_OK })
        }
        Command::Survey { m, n, out: path, budget, cache_dir } => {
            let cache = cache_dir.unwrap_or_else(cache_dir_from_env);
            let rows = survey(m, n, &path, budget, Some(&cache))?;
            let inconclusive = rows.iter().filter(|r| r.is_cayley == Decision::Inconclusive).count();
            writeln!(out, "wrote {} rows to {} ({inconclusive} inconclusive)", rows.len(), path.display())?;
            Ok(EXIT_OK)
        }
    }
}
