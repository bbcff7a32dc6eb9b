//! The `grapevine` command-line driver.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};

use crate::algebra::AlgebraExpr;
use crate::delta::{DeltaBag, TupleBag};
use crate::io::{emission_lines, read_graph, read_updates, Transaction};
use crate::ivm::ViewHandle;
use crate::reference::evaluate_counted;
use crate::rewrite::compile;
use crate::{algebra, query};

/// Maintain openCypher views over a property graph under a stream of updates.
#[derive(Debug, Parser)]
#[command(name = "grapevine", version)]
struct Args {
    /// Graph file (JSON-lines).
    #[arg(long, value_name = "FILE")]
    graph: PathBuf,
    /// Query file; repeat for several views.
    #[arg(long = "query", value_name = "FILE", required = true)]
    queries: Vec<PathBuf>,
    /// Update stream (JSON-lines); `-` reads stdin.
    #[arg(long, value_name = "FILE")]
    updates: Option<PathBuf>,
    /// Emit full snapshots or only changes after each transaction.
    #[arg(long, value_enum, default_value_t = Emit::Snapshots)]
    emit: Emit,
    /// Re-evaluate every view from scratch instead of maintaining it.
    #[arg(long)]
    full: bool,
    /// Per-transaction statistics as CSV on stderr.
    #[arg(long)]
    stats: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Snapshots,
    Deltas,
}

/// Exit status for malformed input: arguments, files, query syntax.
pub const EXIT_LOAD: i32 = 1;
/// Exit status for well-formed queries the engine does not support.
pub const EXIT_SEMANTIC: i32 = 2;

enum Failure {
    Load(String),
    Semantic(String),
}

enum View {
    Incremental(ViewHandle),
    Full { fra: AlgebraExpr, rows: TupleBag },
}

/// Runs the driver with `args` (including the program name) and returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_LOAD } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = drive(&args, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => 0,
        Err(Failure::Load(msg)) => {
            eprintln!("error: {msg}");
            EXIT_LOAD
        }
        Err(Failure::Semantic(msg)) => {
            eprintln!("error: {msg}");
            EXIT_SEMANTIC
        }
    }
}

fn open(path: &Path) -> Result<Box<dyn BufRead>, Failure> {
    if path == Path::new("-") {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    File::open(path)
        .map(|f| Box::new(BufReader::new(f)) as Box<dyn BufRead>)
        .map_err(|e| Failure::Load(format!("{}: {e}", path.display())))
}

fn compile_file(path: &Path) -> Result<AlgebraExpr, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Load(format!("{}: {e}", path.display())))?;
    let q = query::parse(&text).map_err(|e| {
        let msg = format!("{}:{e}", path.display());
        if e.is_syntax() {
            Failure::Load(msg)
        } else {
            Failure::Semantic(msg)
        }
    })?;
    compile(&q)
        .map(|c| c.fra)
        .map_err(|e| Failure::Semantic(format!("{}: {e}", path.display())))
}

fn drive(args: &Args, out: &mut impl Write) -> Result<(), Failure> {
    let fras = args
        .queries
        .iter()
        .map(|p| compile_file(p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut graph = read_graph(open(&args.graph)?)
        .map_err(|e| Failure::Load(format!("{}: {e}", args.graph.display())))?;
    let transactions: Vec<Transaction> = match &args.updates {
        Some(p) => {
            read_updates(open(p)?).map_err(|e| Failure::Load(format!("{}: {e}", p.display())))?
        }
        None => Vec::new(),
    };

    let mut views = Vec::new();
    for fra in &fras {
        views.push(if args.full {
            let mut n = 0;
            let rows = evaluate_counted(&graph, fra, &mut n)
                .map_err(|e| Failure::Semantic(e.to_string()))?
                .rows;
            View::Full {
                fra: fra.clone(),
                rows,
            }
        } else {
            View::Incremental(
                ViewHandle::instantiate(&mut graph, fra)
                    .map_err(|e| Failure::Semantic(e.to_string()))?,
            )
        });
    }
    let schemas = fras
        .iter()
        .map(|f| algebra::schema_of(f).map_err(|e| Failure::Semantic(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;

    if args.stats {
        eprintln!("tx,view,mode,tuples,micros");
    }
    let mode = if args.full { "full" } else { "ivm" };
    for (k, view) in views.iter().enumerate() {
        let rows = snapshot(view);
        write_lines(out, emission_lines(0, k, "snapshot", &schemas[k], rows))?;
    }

    for tx in &transactions {
        let deltas = graph
            .apply_transaction(&tx.ops)
            .map_err(|e| Failure::Load(format!("transaction {}: {e}", tx.tx)))?;
        for (k, view) in views.iter_mut().enumerate() {
            let started = Instant::now();
            let (change, tuples) = match view {
                View::Incremental(h) => {
                    let before = h.processed();
                    let change = h
                        .on_transaction(&deltas)
                        .map_err(|e| Failure::Semantic(e.to_string()))?;
                    (change, h.processed() - before)
                }
                View::Full { fra, rows } => {
                    let mut n = 0;
                    let fresh = evaluate_counted(&graph, fra, &mut n)
                        .map_err(|e| Failure::Semantic(e.to_string()))?
                        .rows;
                    let change = DeltaBag::diff(schemas[k].names(), rows, &fresh);
                    *rows = fresh;
                    (change, n)
                }
            };
            let micros = started.elapsed().as_micros();
            if args.stats {
                eprintln!("{},{k},{mode},{tuples},{micros}", tx.tx);
            }
            let lines = match args.emit {
                Emit::Snapshots => {
                    emission_lines(tx.tx, k, "snapshot", &schemas[k], snapshot(view))
                }
                Emit::Deltas => emission_lines(
                    tx.tx,
                    k,
                    "delta",
                    &schemas[k],
                    change.iter().map(|(t, m)| (t.clone(), m)),
                ),
            };
            write_lines(out, lines)?;
        }
    }
    Ok(())
}

fn snapshot(view: &View) -> Vec<(crate::value::Tuple, i64)> {
    let rows = match view {
        View::Incremental(h) => h.contents(),
        View::Full { rows, .. } => rows,
    };
    rows.iter().map(|(t, &m)| (t.clone(), m as i64)).collect()
}

fn write_lines(out: &mut impl Write, lines: Vec<String>) -> Result<(), Failure> {
    for l in lines {
        writeln!(out, "{l}").map_err(|e| Failure::Load(format!("writing output: {e}")))?;
    }
    Ok(())
}
