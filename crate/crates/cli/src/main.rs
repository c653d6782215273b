//! `plr`: deciders, completers, and scanners for partial latin
//! rectangles, frequency squares, saturated rectangles, and partial
//! k-plexes. Files use the shared text formats; every affirmative
//! answer prints its witness or completion so it can be re-checked.

mod output;

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

use clap::{Args, Parser, Subcommand};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use plr_core::format::{parse_rect, serialize_rect, RectJson};
use plr_core::frequency::{self, FrequencyRectangle, FrequencySquare, Partition};
use plr_core::rect::{LatinSquare, PartialLatinRectangle};
use plr_core::saturated::{self, FgAssignment, SaturationTarget};
use plr_core::{cruse, kplex, oracle};

use output::{Outcome, Status};

#[derive(Parser)]
#[command(
    name = "plr",
    version,
    about = "Extend partial latin rectangles to latin squares, frequency squares, and saturated rectangles"
)]
struct Cli {
    /// Emit one machine-readable JSON object instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized test-data subcommands; all deciders are
    /// seed-independent
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a question, printing the witness and its condition report
    #[command(subcommand)]
    Check(CheckCmd),
    /// Complete a rectangle to a latin square of order n
    Complete {
        file: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Frequency-square operations
    #[command(subcommand)]
    Freq(FreqCmd),
    /// Extend a rectangle to a saturated rectangle of the target type
    Saturate {
        file: PathBuf,
        /// Target type as R,S,T
        #[arg(long, value_parser = parse_triple)]
        target: (usize, usize, usize),
    },
    /// Saturation scans
    #[command(subcommand)]
    Sat(SatCmd),
    /// Partial k-plex search, scans, and quasi-embedding
    #[command(subcommand)]
    Kplex(KplexCmd),
    /// Brute-force reference deciders and enumerators
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Witness for completing FILE to a latin square of order n
    Cruse {
        file: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Witness for extending FILE to a frequency square of order n
    Freq {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        /// Override the file's target multiplicities, e.g. 2,2,1
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<usize>>,
    },
    /// Witness and representative system for saturating FILE
    Sat {
        file: PathBuf,
        /// Target type as R,S,T with R,S <= T
        #[arg(long, value_parser = parse_triple)]
        target: (usize, usize, usize),
    },
}

#[derive(Subcommand)]
enum FreqCmd {
    /// Extend FILE to a frequency square of order n
    Complete {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<usize>>,
    },
}

#[derive(Subcommand)]
enum SatCmd {
    /// List every saturable type within the caps
    Types {
        file: PathBuf,
        /// Componentwise caps as R,S,T
        #[arg(long, value_parser = parse_triple)]
        caps: (usize, usize, usize),
        #[command(flatten)]
        jobs: Jobs,
    },
}

#[derive(Subcommand)]
enum KplexCmd {
    /// Find a partial k-plex of m cells in a latin square
    Find {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        /// Cell count; defaults to k(n-k)
        #[arg(long)]
        m: Option<usize>,
    },
    /// Test every reduced square of the order for a k(n-k) partial
    /// k-plex
    Scan {
        #[arg(long)]
        order: usize,
        /// k values to test, e.g. --k 1,2,3; defaults to 1..=order
        #[arg(long = "k", value_delimiter = ',')]
        ks: Option<Vec<usize>>,
        #[command(flatten)]
        jobs: Jobs,
    },
    /// Embed a latin square into order n+k with at most k(n-k) changes
    Embed {
        file: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Brute-force completion decision
    Complete {
        file: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Brute-force frequency completion decision
    Freq {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<usize>>,
    },
    /// Enumerate latin squares of an order
    Enum {
        #[arg(long)]
        order: usize,
        /// Fix the first row and column to the identity
        #[arg(long)]
        reduced: bool,
        /// Print only the number of squares
        #[arg(long)]
        count_only: bool,
        /// Emit this many pseudorandom squares (from --seed) instead of
        /// enumerating
        #[arg(long)]
        sample: Option<usize>,
    },
}

#[derive(Args)]
struct Jobs {
    /// Worker threads for independent subtasks; output order is
    /// canonical regardless
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn parse_triple(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected R,S,T but found '{s}'"));
    }
    let mut vals = [0usize; 3];
    for (v, p) in vals.iter_mut().zip(&parts) {
        *v = p
            .trim()
            .parse()
            .map_err(|_| format!("bad component '{p}' in '{s}'"))?;
    }
    Ok((vals[0], vals[1], vals[2]))
}

fn main() {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(outcome) => outcome,
        Err(message) => {
            eprintln!("error: {message}");
            Outcome::error(message)
        }
    };
    outcome.print(cli.json);
    std::process::exit(outcome.status.exit_code());
}

fn read_file(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_rect(path: &PathBuf) -> Result<PartialLatinRectangle, String> {
    let text = read_file(path)?;
    parse_rect(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_square(path: &PathBuf) -> Result<LatinSquare, String> {
    let rect = load_rect(path)?;
    LatinSquare::try_from_rect(&rect).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_freq(
    path: &PathBuf,
    n: usize,
    lambda_override: &Option<Vec<usize>>,
) -> Result<(FrequencyRectangle, Partition), String> {
    let text = read_file(path)?;
    let (rect, file_lambda) =
        frequency::parse_freq(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let lambda = match lambda_override {
        Some(parts) => Partition::new(parts.clone()).map_err(|e| format!("--lambda: {e}"))?,
        None => file_lambda,
    };
    if lambda.total() != n {
        return Err(format!(
            "--n {n} disagrees with the target multiplicities summing to {}",
            lambda.total()
        ));
    }
    Ok((rect, lambda))
}

// Payloads are re-validated through a parse round trip before emission.
fn rect_payload(p: &PartialLatinRectangle) -> Result<(String, Value), String> {
    let text = serialize_rect(p);
    let reparsed = parse_rect(&text).map_err(|e| format!("internal: invalid payload: {e}"))?;
    if &reparsed != p {
        return Err("internal: payload round trip mismatch".into());
    }
    let json = serde_json::to_value(RectJson::from(p)).expect("rectangles serialize");
    Ok((text, json))
}

fn square_payload(sq: &LatinSquare) -> Result<(String, Value), String> {
    LatinSquare::try_from_rect(&sq.as_rect())
        .map_err(|e| format!("internal: invalid square payload: {e}"))?;
    rect_payload(&sq.as_rect())
}

fn freq_square_payload(sq: &FrequencySquare) -> Result<(String, Value), String> {
    let n = sq.order();
    let grid: Vec<Vec<usize>> = (0..n)
        .map(|r| (0..n).map(|c| sq.get(r, c)).collect())
        .collect();
    FrequencySquare::new(sq.lambda().clone(), grid.clone())
        .map_err(|e| format!("internal: invalid frequency payload: {e}"))?;
    let text = sq.to_string();
    let json = json!({
        "order": n,
        "lambda": sq.lambda().parts(),
        "grid": grid.iter().map(|row| row.iter().map(|c| c + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    Ok((text, json))
}

fn cells_text(cells: &plr_core::CellSet) -> String {
    cells
        .iter()
        .map(|(r, c)| format!("{},{}", r + 1, c + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cells_json(cells: &plr_core::CellSet) -> Value {
    Value::Array(
        cells
            .iter()
            .map(|(r, c)| json!([r + 1, c + 1]))
            .collect(),
    )
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    match &cli.command {
        Command::Check(cmd) => run_check(cmd),
        Command::Complete { file, n } => run_complete(file, *n),
        Command::Freq(FreqCmd::Complete { file, n, lambda }) => run_freq_complete(file, *n, lambda),
        Command::Saturate { file, target } => run_saturate(file, *target),
        Command::Sat(SatCmd::Types { file, caps, jobs }) => run_sat_types(file, *caps, jobs.jobs),
        Command::Kplex(cmd) => run_kplex(cmd),
        Command::Oracle(cmd) => run_oracle(cmd, cli.seed),
    }
}

fn run_check(cmd: &CheckCmd) -> Result<Outcome, String> {
    match cmd {
        CheckCmd::Cruse { file, n } => {
            let rect = load_rect(file)?;
            ensure_fits(&rect, *n)?;
            match cruse::find_witness(&rect, *n) {
                Some(witness) => {
                    let (text, json) = rect_payload(&witness)?;
                    Ok(Outcome::with_payload(Status::Yes, text, json)
                        .diagnostics(cruse::check_conditions(&witness, *n)))
                }
                None => Ok(Outcome::bare(Status::No)
                    .diagnostics(cruse::check_conditions(&rect, *n))),
            }
        }
        CheckCmd::Freq { file, n, lambda } => {
            let (rect, lambda) = load_freq(file, *n, lambda)?;
            match frequency::find_freq_witness(&rect, &lambda, *n).map_err(|e| e.to_string())? {
                Some(witness) => {
                    let report = frequency::check_freq_conditions(&witness, &lambda, *n)
                        .map_err(|e| e.to_string())?;
                    let text = frequency::serialize_freq(&witness, &lambda);
                    let json = json!({
                        "rows": witness.rows(),
                        "cols": witness.cols(),
                        "mu": witness.mu().parts(),
                        "lambda": lambda.parts(),
                        "grid": witness.to_grid().iter()
                            .map(|row| row.iter().map(|c| c.map(|v| v + 1)).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                    });
                    Ok(Outcome::with_payload(Status::Yes, text, json).diagnostics(report))
                }
                None => {
                    let report = frequency::check_freq_conditions(&rect, &lambda, *n)
                        .map_err(|e| e.to_string())?;
                    Ok(Outcome::bare(Status::No).diagnostics(report))
                }
            }
        }
        CheckCmd::Sat { file, target } => {
            let rect = load_rect(file)?;
            let (rr, ss, tt) = *target;
            let target = SaturationTarget::new(rr, ss, tt).map_err(|e| {
                format!("{e}; `saturate` handles general targets through conjugation")
            })?;
            if rect.rows() > rr || rect.cols() > ss || rect.symbols() > tt {
                return Err(format!(
                    "target ({rr}, {ss}, {tt}) does not dominate the instance type"
                ));
            }
            if rect.cols() > 63 || tt > 63 {
                return Err("supported sizes stop at 63".into());
            }
            match saturated::find_sat_witness(&rect, &target) {
                Some((witness, fg)) => {
                    let report = saturated::check_sat_conditions(&witness, &target, &fg)
                        .map_err(|e| e.to_string())?;
                    let (mut text, rect_json) = rect_payload(&witness)?;
                    text.push_str(&format!("g: {:?}\nf: {:?}\n", fg.g(), fg.f()));
                    let json = json!({
                        "witness": rect_json,
                        "g": fg.g(),
                        "f": fg.f(),
                        "chosen": fg.chosen().iter()
                            .map(|row| row.iter().map(|x| x + 1).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                    });
                    Ok(Outcome::with_payload(Status::Yes, text, json).diagnostics(report))
                }
                None => {
                    let padded = rect
                        .widen(rr, rect.cols(), rect.symbols())
                        .map_err(|e| e.to_string())?;
                    let zero = FgAssignment::new(vec![Vec::new(); rr], rect.symbols())
                        .expect("empty assignment is well-formed");
                    let report = saturated::check_sat_conditions(&padded, &target, &zero)
                        .map_err(|e| e.to_string())?;
                    Ok(Outcome::bare(Status::No).diagnostics(report))
                }
            }
        }
    }
}

fn ensure_fits(rect: &PartialLatinRectangle, n: usize) -> Result<(), String> {
    if rect.rows() > n || rect.cols() > n || rect.symbols() > n {
        return Err(format!(
            "type ({}, {}, {}) does not fit in order {n}",
            rect.rows(),
            rect.cols(),
            rect.symbols()
        ));
    }
    if n > 63 {
        return Err("supported orders stop at 63".into());
    }
    Ok(())
}

fn run_complete(file: &PathBuf, n: usize) -> Result<Outcome, String> {
    let rect = load_rect(file)?;
    ensure_fits(&rect, n)?;
    match cruse::complete(&rect, n) {
        Some(square) => {
            let (text, json) = square_payload(&square)?;
            Ok(Outcome::with_payload(Status::Completed, text, json))
        }
        None => Ok(Outcome::bare(Status::No).diagnostics(cruse::check_conditions(&rect, n))),
    }
}

fn run_freq_complete(
    file: &PathBuf,
    n: usize,
    lambda: &Option<Vec<usize>>,
) -> Result<Outcome, String> {
    let (rect, lambda) = load_freq(file, n, lambda)?;
    match frequency::complete_frequency(&rect, &lambda, n).map_err(|e| e.to_string())? {
        Some(square) => {
            let (text, json) = freq_square_payload(&square)?;
            Ok(Outcome::with_payload(Status::Completed, text, json))
        }
        None => {
            let report = frequency::check_freq_conditions(&rect, &lambda, n)
                .map_err(|e| e.to_string())?;
            Ok(Outcome::bare(Status::No).diagnostics(report))
        }
    }
}

fn run_saturate(file: &PathBuf, target: (usize, usize, usize)) -> Result<Outcome, String> {
    let rect = load_rect(file)?;
    let (rr, ss, tt) = target;
    if rr > 63 || ss > 63 || tt > 63 {
        return Err("supported sizes stop at 63".into());
    }
    match saturated::saturate_any(&rect, rr, ss, tt).map_err(|e| e.to_string())? {
        Some(sat) => {
            let (text, json) = rect_payload(&sat)?;
            Ok(Outcome::with_payload(Status::Completed, text, json))
        }
        None => Ok(Outcome::bare(Status::No)),
    }
}

fn run_sat_types(
    file: &PathBuf,
    caps: (usize, usize, usize),
    jobs: usize,
) -> Result<Outcome, String> {
    let rect = load_rect(file)?;
    if caps.0 > 63 || caps.1 > 63 || caps.2 > 63 {
        return Err("supported sizes stop at 63".into());
    }
    let (lo_r, lo_s, lo_t) = rect.shape();
    let targets: Vec<(usize, usize, usize)> = (lo_r..=caps.0)
        .flat_map(|r| (lo_s..=caps.1).flat_map(move |s| (lo_t..=caps.2).map(move |t| (r, s, t))))
        .collect();
    let saturable = parallel_map(&targets, jobs, |&(r, s, t)| {
        saturated::saturate_any(&rect, r, s, t)
            .expect("targets dominate by construction")
            .is_some()
    });
    let types: Vec<(usize, usize, usize)> = targets
        .into_iter()
        .zip(saturable)
        .filter_map(|(t, ok)| ok.then_some(t))
        .collect();
    let text = types
        .iter()
        .map(|(r, s, t)| format!("{r} {s} {t}\n"))
        .collect::<String>();
    let json = Value::Array(types.iter().map(|(r, s, t)| json!([r, s, t])).collect());
    Ok(Outcome::with_payload(Status::Completed, text, json))
}

fn run_kplex(cmd: &KplexCmd) -> Result<Outcome, String> {
    match cmd {
        KplexCmd::Find { file, k, m } => {
            let square = load_square(file)?;
            let n = square.order();
            if *k == 0 || *k > n {
                return Err(format!("--k must lie in 1..={n}"));
            }
            let m = m.unwrap_or(k * (n - k));
            match kplex::find_partial_kplex(&square, *k, m) {
                Some(cells) => {
                    if !kplex::is_partial_kplex(&square, &cells, *k) {
                        return Err("internal: invalid cell payload".into());
                    }
                    let text = format!("{}\n", cells_text(&cells));
                    let json = json!({ "k": k, "m": m, "cells": cells_json(&cells) });
                    Ok(Outcome::with_payload(Status::Yes, text, json))
                }
                None => Ok(Outcome::bare(Status::No)),
            }
        }
        KplexCmd::Scan { order, ks, jobs } => {
            let n = *order;
            if n == 0 || n > 6 {
                return Err("--order must lie in 1..=6 for enumeration".into());
            }
            let ks: Vec<usize> = match ks {
                Some(list) => {
                    if list.iter().any(|&k| k == 0 || k > n) {
                        return Err(format!("--ks values must lie in 1..={n}"));
                    }
                    list.clone()
                }
                None => (1..=n).collect(),
            };
            let squares: Vec<LatinSquare> = oracle::enumerate_latin_squares(n, true).collect();
            let tasks: Vec<(usize, usize)> = (0..squares.len())
                .flat_map(|i| ks.iter().map(move |&k| (i, k)))
                .collect();
            let reports = parallel_map(&tasks, jobs.jobs, |&(i, k)| {
                kplex::scan_one(&squares[i], i, k)
            });
            let mut text = String::new();
            let mut items = Vec::new();
            for rep in &reports {
                let cells = rep
                    .cells
                    .as_ref()
                    .map(cells_text)
                    .unwrap_or_default();
                text.push_str(&format!(
                    "{} {} {} {}{}{}\n",
                    rep.square_index,
                    rep.k,
                    rep.m,
                    rep.found,
                    if cells.is_empty() { "" } else { " " },
                    cells
                ));
                items.push(json!({
                    "square_index": rep.square_index,
                    "n": rep.n,
                    "k": rep.k,
                    "m": rep.m,
                    "found": rep.found,
                    "cells": rep.cells.as_ref().map(cells_json),
                }));
            }
            Ok(Outcome::with_payload(
                Status::Completed,
                text,
                Value::Array(items),
            ))
        }
        KplexCmd::Embed { file, k } => {
            let square = load_square(file)?;
            let n = square.order();
            if *k == 0 || *k > n {
                return Err(format!("--k must lie in 1..={n}"));
            }
            if n + k > 63 {
                return Err("supported orders stop at 63".into());
            }
            match kplex::quasi_embed(&square, *k) {
                Some(embedded) => {
                    let (text, json) = square_payload(&embedded)?;
                    Ok(Outcome::with_payload(Status::Completed, text, json))
                }
                None => Ok(Outcome::bare(Status::No)),
            }
        }
    }
}

fn run_oracle(cmd: &OracleCmd, seed: u64) -> Result<Outcome, String> {
    match cmd {
        OracleCmd::Complete { file, n } => {
            let rect = load_rect(file)?;
            ensure_fits(&rect, *n)?;
            let status = if oracle::brute_complete(&rect, *n) {
                Status::Yes
            } else {
                Status::No
            };
            Ok(Outcome::bare(status))
        }
        OracleCmd::Freq { file, n, lambda } => {
            let (rect, lambda) = load_freq(file, *n, lambda)?;
            if rect.classes() != lambda.len() {
                return Err("class counts of the instance and target differ".into());
            }
            let status = if oracle::brute_freq_complete(&rect, &lambda, *n) {
                Status::Yes
            } else {
                Status::No
            };
            Ok(Outcome::bare(status))
        }
        OracleCmd::Enum {
            order,
            reduced,
            count_only,
            sample,
        } => {
            let n = *order;
            if n == 0 || n > 63 {
                return Err("--order must be positive and at most 63".into());
            }
            if let Some(count) = sample {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut text = String::new();
                let mut items = Vec::new();
                for _ in 0..*count {
                    let sq = random_square(&mut rng, n);
                    let (t, j) = square_payload(&sq)?;
                    text.push_str(&t);
                    text.push('\n');
                    items.push(j);
                }
                return Ok(Outcome::with_payload(
                    Status::Completed,
                    text,
                    Value::Array(items),
                ));
            }
            if n > 6 || (!*reduced && n > 5) {
                return Err(
                    "full enumeration supports orders up to 5 (6 with --reduced)".into(),
                );
            }
            if *count_only {
                let count = oracle::enumerate_latin_squares(n, *reduced).count();
                return Ok(Outcome::with_payload(
                    Status::Completed,
                    format!("{count}\n"),
                    json!(count),
                ));
            }
            let mut text = String::new();
            let mut items = Vec::new();
            for sq in oracle::enumerate_latin_squares(n, *reduced) {
                let (t, j) = square_payload(&sq)?;
                text.push_str(&t);
                text.push('\n');
                items.push(j);
            }
            Ok(Outcome::with_payload(
                Status::Completed,
                text,
                Value::Array(items),
            ))
        }
    }
}

// Splits independent subtasks over worker threads, preserving input
// order in the results.
fn parallel_map<T: Sync, R: Send>(
    items: &[T],
    jobs: usize,
    f: impl Fn(&T) -> R + Sync,
) -> Vec<R> {
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut gathered: Vec<(usize, R)> = Vec::with_capacity(items.len());
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(jobs);
        for _ in 0..jobs {
            handles.push(scope.spawn(|| {
                let mut local = Vec::new();
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= items.len() {
                        break;
                    }
                    local.push((i, f(&items[i])));
                }
                local
            }));
        }
        for handle in handles {
            gathered.extend(handle.join().expect("worker panicked"));
        }
    });
    gathered.sort_by_key(|(i, _)| *i);
    gathered.into_iter().map(|(_, r)| r).collect()
}

fn random_square(rng: &mut ChaCha8Rng, n: usize) -> LatinSquare {
    fn rec(
        n: usize,
        grid: &mut Vec<usize>,
        pos: usize,
        row_used: &mut [u64],
        col_used: &mut [u64],
        order: &[Vec<usize>],
    ) -> bool {
        if pos == n * n {
            return true;
        }
        let (r, c) = (pos / n, pos % n);
        for &sym in &order[pos] {
            let bit = 1u64 << sym;
            if row_used[r] & bit == 0 && col_used[c] & bit == 0 {
                row_used[r] |= bit;
                col_used[c] |= bit;
                grid.push(sym);
                if rec(n, grid, pos + 1, row_used, col_used, order) {
                    return true;
                }
                grid.pop();
                row_used[r] &= !bit;
                col_used[c] &= !bit;
            }
        }
        false
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let order: Vec<Vec<usize>> = (0..n * n)
        .map(|_| {
            perm.shuffle(rng);
            perm.clone()
        })
        .collect();
    let mut grid = Vec::with_capacity(n * n);
    assert!(rec(n, &mut grid, 0, &mut vec![0; n], &mut vec![0; n], &order));
    LatinSquare::new(n, grid).expect("generator yields latin squares")
}

