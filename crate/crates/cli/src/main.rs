use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use codebound::report::{compute_table, TableId, TableReport};
use codebound::sdp::{build_sdp, export_sdpa};
use codebound::{compute_bound, Choice, Error, PseudoDistanceKind, SolverParams};
use serde_json::json;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_WRITE: u8 = 4;

#[derive(Parser)]
#[command(name = "codebound", version, about = "Upper bounds on binary codes under triple pseudo-distances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one bound.
    Bound(BoundArgs),
    /// Recompute a reference table and diff it against the shipped values.
    Table(TableArgs),
    /// Write the semidefinite program in SDPA sparse format.
    Export(ExportArgs),
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// d, r, rbar, d1 (or daff for classical methods)
    #[arg(long, value_parser = parse_kind)]
    kind: PseudoDistanceKind,
    /// singleton, hamming, plotkin, elias, classical, sdp, lp, oracle
    #[arg(long, value_parser = parse_choice)]
    method: Choice,
    /// Restrict to codes with all pairwise distances even.
    #[arg(long)]
    even_only: bool,
    #[arg(long)]
    json: bool,
    /// Iteration cap for the SDP solver.
    #[arg(long, default_value_t = SolverParams::default().max_iterations, value_parser = parse_positive)]
    max_iterations: usize,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    table: u8,
    /// Inclusive row range such as `10..13`.
    #[arg(long, value_parser = parse_range)]
    n_range: Option<RangeInclusive<usize>>,
    #[arg(long)]
    skip_sdp: bool,
    #[arg(long, conflicts_with = "json")]
    csv: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, value_parser = parse_kind)]
    kind: PseudoDistanceKind,
    #[arg(long)]
    even_only: bool,
    #[arg(long)]
    out: PathBuf,
}

fn parse_kind(s: &str) -> Result<PseudoDistanceKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_choice(s: &str) -> Result<Choice, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad range end in {s:?}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok(a..=b)
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Solver(_) => EXIT_SOLVER,
        _ => EXIT_USAGE,
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("codebound: {e}");
    ExitCode::from(exit_for(e))
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("CODEBOUND_THREADS") else { return Ok(()) };
    let threads: usize =
        v.trim().parse().map_err(|_| format!("CODEBOUND_THREADS must be a positive integer, got {v:?}"))?;
    if threads == 0 {
        return Err("CODEBOUND_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("codebound: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    match cli.command {
        Command::Bound(a) => bound(a),
        Command::Table(a) => table(a),
        Command::Export(a) => export(a),
    }
}

fn bound(a: BoundArgs) -> ExitCode {
    let start = Instant::now();
    let params = SolverParams { max_iterations: a.max_iterations, ..SolverParams::default() };
    let r = match compute_bound(a.n, a.kind, a.m, a.method, a.even_only, &params) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let runtime = start.elapsed().as_secs_f64();
    if a.json {
        let out = json!({
            "n": a.n,
            "m": a.m,
            "kind": a.kind.tag(),
            "even_only": a.even_only,
            "requested": a.method.name(),
            "value": r.value,
            "method": r.method.tag(),
            "detail": r.detail,
            "runtime_seconds": runtime,
        });
        println!("{out}");
    } else {
        println!("{} {}", r.value, r.method.tag());
        if a.method == Choice::Sdp {
            for (k, v) in &r.detail {
                println!("  {k}: {v}");
            }
        }
    }
    ExitCode::SUCCESS
}

fn table(a: TableArgs) -> ExitCode {
    let id = match TableId::from_number(a.table) {
        Ok(id) => id,
        Err(e) => return fail(&e),
    };
    let start = Instant::now();
    let rows = a.n_range.unwrap_or(1..=usize::MAX);
    let report = compute_table(id, rows, a.skip_sdp, &SolverParams::default());
    let runtime = start.elapsed().as_secs_f64();
    if report.rows.is_empty() {
        eprintln!("codebound: no rows of table {} in the requested range", id.number());
        return ExitCode::from(EXIT_USAGE);
    }
    if a.json {
        let out = json!({
            "table": id.number(),
            "rows": report.rows,
            "classical_ok": report.classical_ok(),
            "sdp_ok": report.sdp_ok(),
            "runtime_seconds": runtime,
        });
        println!("{out}");
    } else if a.csv {
        print_csv(&report);
    } else {
        print_plain(&report, runtime);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_MISMATCH)
    }
}

fn print_csv(report: &TableReport) {
    let kind = report.table.kind_label();
    println!("n,m,kind,method,value,match");
    for r in &report.rows {
        let method = r.classical_method.map_or("classical", |m| m.tag());
        let value = r.classical_value.map(|v| v.to_string()).unwrap_or_default();
        let flag = if r.classical_error.is_some() {
            "error"
        } else if r.classical_matches() {
            "yes"
        } else {
            "no"
        };
        println!("{},{},{kind},{method},{value},{flag}", r.n, r.m);
        if let Some(s) = &r.sdp {
            let value = s.value.map(|v| v.to_string()).unwrap_or_default();
            let flag = if s.error.is_some() {
                "error"
            } else if s.matches() {
                "yes"
            } else {
                "no"
            };
            println!("{},{},{kind},sdp,{value},{flag}", r.n, r.m);
        }
    }
}

fn print_plain(report: &TableReport, runtime: f64) {
    println!("{:>3} {:>3} {:>12} {:>12} {:>10} {:>10}", "n", "m", "classical", "expected", "sdp", "expected");
    let mut classical_bad = 0;
    let mut sdp_bad = 0;
    let mut sdp_near = 0;
    for r in &report.rows {
        let c = match (r.classical_value, r.classical_method) {
            (Some(v), Some(m)) => format!("{v}^{}", m.superscript().unwrap_or(0)),
            _ => "error".into(),
        };
        let ce = match r.expected_method {
            Some(m) => format!("{}^{}", r.expected_classical, m.superscript().unwrap_or(0)),
            None => r.expected_classical.to_string(),
        };
        let mark_c = if r.classical_matches() { ' ' } else { '*' };
        if !r.classical_matches() {
            classical_bad += 1;
        }
        let (s, se, mark_s) = match &r.sdp {
            None => ("-".to_string(), "-".to_string(), ' '),
            Some(cell) => {
                if !cell.matches() {
                    sdp_bad += 1;
                    if cell.delta().is_some_and(|d| d.abs() == 1) {
                        sdp_near += 1;
                    }
                }
                let v = cell.value.map_or_else(|| "error".to_string(), |v| v.to_string());
                (v, cell.expected.to_string(), if cell.matches() { ' ' } else { '*' })
            }
        };
        println!("{:>3} {:>3} {:>12}{mark_c}{:>12} {:>10}{mark_s}{:>10}", r.n, r.m, c, ce, s, se);
        if let Some(e) = r.sdp.as_ref().and_then(|c| c.error.as_ref()) {
            println!("        sdp failed: {e}");
        }
    }
    println!(
        "table {}: {} rows, {classical_bad} classical mismatches, {sdp_bad} sdp mismatches ({sdp_near} off by one), {runtime:.1}s",
        report.table.number(),
        report.rows.len(),
    );
    println!("{}", if report.passed() { "PASS" } else { "FAIL" });
}

fn export(a: ExportArgs) -> ExitCode {
    let p = match build_sdp(a.n, a.kind, a.m, a.even_only) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    if let Err(e) = std::fs::write(&a.out, export_sdpa(&p)) {
        eprintln!("codebound: cannot write {}: {e}", a.out.display());
        return ExitCode::from(EXIT_WRITE);
    }
    ExitCode::SUCCESS
}
