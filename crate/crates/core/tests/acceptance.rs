//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed.

mod support;

use std::collections::{BTreeSet, HashSet};
use std::process::Command;
use std::time::{Duration, Instant};

use grapevine::algebra::{pretty, AlgebraExpr};
use grapevine::delta::{bag_of, TupleBag};
use grapevine::fixtures::{running_example, THREAD_QUERY};
use grapevine::graph::{EdgeRecord, PropertyGraph, UpdateOp, VertexRecord};
use grapevine::ivm::ViewHandle;
use grapevine::query::{parse, EdgeLength};
use grapevine::reference::evaluate;
use grapevine::rewrite::{compile, Compiled};
use grapevine::value::{EdgeId, Path, Value, VertexId};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use support::{path_well_formed, random_graph, random_transaction, IdSource, CORPUS};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("running example", running_example_check),
        ("golden rewrites", golden_rewrites),
        ("rewrite preservation", rewrite_preservation),
        ("ivm oracle equivalence", ivm_oracle),
        ("zero-sum rollback", zero_sum_rollback),
        ("schema minimality", schema_minimality),
        ("incrementality wins", incrementality_wins),
        ("termination on cycles", termination_on_cycles),
    ];
    // Optional criterion numbers on the command line select a subset.
    let only: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}; {secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({detail}; {secs:.2}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn compiled(q: &str) -> Compiled {
    compile(&parse(q).unwrap()).unwrap()
}

fn running_example_check() -> Outcome {
    let started = Instant::now();
    let fra = compiled(THREAD_QUERY).fra;
    let mut graph = running_example();
    let view = ViewHandle::instantiate(&mut graph, &fra).map_err(|e| e.to_string())?;
    let vertex_only: Vec<(Vec<u64>, u64)> = view
        .read_view()
        .into_iter()
        .map(|(t, m)| {
            let p = t[1].as_path().expect("path column");
            let mut row = vec![t[0].as_vertex().expect("vertex column").0];
            row.extend(p.vertices().map(|v| v.0));
            (row, m)
        })
        .collect();
    let expected = vec![(vec![1, 1, 2], 1), (vec![1, 1, 2, 3], 1)];
    ensure(vertex_only == expected, || format!("got {vertex_only:?}"))?;
    let reference = evaluate(&graph, &compiled(THREAD_QUERY).gra).map_err(|e| e.to_string())?;
    ensure(&reference.rows == view.contents(), || {
        "reference disagrees".into()
    })?;
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok("{(p=1, t=[1,2]), (p=1, t=[1,2,3])}".into())
}

fn golden_rewrites() -> Outcome {
    let c = compiled(THREAD_QUERY);
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");
    for (ext, expr) in [("gra", &c.gra), ("nra", &c.nra), ("fra", &c.fra)] {
        let golden =
            std::fs::read_to_string(format!("{dir}/thread.{ext}")).map_err(|e| e.to_string())?;
        let actual = pretty(expr);
        ensure(actual == golden, || format!("{ext} differs:\n{actual}"))?;
    }
    Ok("3 of 3 byte-exact".into())
}

fn rewrite_preservation() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    let graphs: Vec<PropertyGraph> = (0..25).map(|_| random_graph(&mut rng, 50, 100)).collect();
    let mut checks = 0;
    for q in CORPUS {
        let c = compiled(q);
        for (gi, g) in graphs.iter().enumerate() {
            let gra = evaluate(g, &c.gra).map_err(|e| e.to_string())?.rows;
            let nra = evaluate(g, &c.nra).map_err(|e| e.to_string())?.rows;
            let fra = evaluate(g, &c.fra).map_err(|e| e.to_string())?.rows;
            ensure(gra == nra && nra == fra, || {
                format!("mismatch for {q:?} on graph {gi}")
            })?;
            checks += 1;
        }
    }
    Ok(format!(
        "{} queries x {} graphs, {checks} checks, 0 mismatches",
        CORPUS.len(),
        graphs.len()
    ))
}

struct Trial {
    seed: u64,
    query: &'static str,
}

fn trials() -> Vec<Trial> {
    (0..520)
        .map(|i| Trial {
            seed: 0x1f00 + i as u64,
            query: CORPUS[i % CORPUS.len()],
        })
        .collect()
}

/// Runs one randomized trial. After every transaction the view must match
/// the reference; with `rollback` the inverse transaction is applied and the
/// prior bag must come back before the sequence continues.
fn run_trial(trial: &Trial, rollback: bool) -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(trial.seed);
    let fra = compiled(trial.query).fra;
    let mut graph = random_graph(&mut rng, 50, 75);
    let mut view = ViewHandle::instantiate(&mut graph, &fra).map_err(|e| e.to_string())?;
    let fail = |step: usize, what: &str| {
        format!(
            "seed {:#x} query {:?} step {step}: {what}",
            trial.seed, trial.query
        )
    };
    let oracle = |g: &PropertyGraph| evaluate(g, &fra).map(|r| r.rows).map_err(|e| e.to_string());
    ensure(view.contents() == &oracle(&graph)?, || {
        fail(0, "initial contents")
    })?;
    let mut ids = IdSource(10_000);
    let steps = rng.gen_range(3..=8);
    let mut ops = 0;
    for step in 1..=steps {
        let tx = random_transaction(&mut rng, &graph, &mut ids, 25);
        ops += tx.len();
        let before: TupleBag = view.contents().clone();
        let (deltas, inverse) = graph
            .apply_transaction_logged(&tx)
            .map_err(|e| fail(step, &e.to_string()))?;
        view.on_transaction(&deltas)
            .map_err(|e| fail(step, &e.to_string()))?;
        ensure(view.contents() == &oracle(&graph)?, || {
            fail(step, "view differs from reference")
        })?;
        check_paths(&graph, &fra, view.contents()).map_err(|e| fail(step, &e))?;
        if rollback {
            let deltas = graph
                .apply_transaction(&inverse)
                .map_err(|e| fail(step, &e.to_string()))?;
            view.on_transaction(&deltas)
                .map_err(|e| fail(step, &e.to_string()))?;
            ensure(view.contents() == &before, || {
                fail(step, "inverse did not restore the view")
            })?;
            let deltas = graph
                .apply_transaction(&tx)
                .map_err(|e| fail(step, &e.to_string()))?;
            view.on_transaction(&deltas)
                .map_err(|e| fail(step, &e.to_string()))?;
        }
    }
    Ok(ops)
}

// Path bounds of the query: the sum of its segments' bounds.
fn path_bounds(fra: &AlgebraExpr) -> (usize, Option<usize>) {
    let mut min = 0;
    let mut max = Some(0);
    fra.visit(&mut |e| match e {
        AlgebraExpr::TransitiveJoin {
            min: lo,
            max: hi,
            path: Some(_),
            ..
        } => {
            min += *lo as usize;
            max = max.zip(*hi).map(|(a, b)| a + b as usize);
        }
        AlgebraExpr::ExpandOut {
            length: EdgeLength::One,
            path: Some(_),
            ..
        } => {
            min += 1;
            max = max.map(|a| a + 1);
        }
        _ => {}
    });
    (min, max)
}

fn check_paths(graph: &PropertyGraph, fra: &AlgebraExpr, rows: &TupleBag) -> Result<(), String> {
    let (min, max) = path_bounds(fra);
    for (t, &m) in rows {
        ensure(m > 0, || format!("non-positive multiplicity {m}"))?;
        for v in t {
            if let Value::Path(p) = v {
                ensure(path_well_formed(graph, p, min.max(1), max), || {
                    format!("malformed path {p}")
                })?;
            }
        }
    }
    Ok(())
}

fn ivm_oracle() -> Outcome {
    let started = Instant::now();
    let trials = trials();
    let mut ops = 0;
    for t in &trials {
        ops += run_trial(t, false)?;
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(300), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} trials, {ops} update ops, 0 mismatches",
        trials.len()
    ))
}

fn zero_sum_rollback() -> Outcome {
    let trials = trials();
    for t in &trials {
        run_trial(t, true)?;
    }
    Ok(format!(
        "{} trials, every inverse restored the prior bag",
        trials.len()
    ))
}

fn schema_minimality() -> Outcome {
    for q in CORPUS {
        let query = parse(q).unwrap();
        let fra = compile(&query).unwrap().fra;
        let requested: BTreeSet<(String, String)> = fra
            .prop_requests()
            .into_iter()
            .map(|(v, k, _)| (v, k))
            .collect();
        let referenced: BTreeSet<(String, String)> = query.property_refs().into_iter().collect();
        ensure(requested == referenced, || {
            format!("{q:?}: requested {requested:?}, referenced {referenced:?}")
        })?;
        let attrs: Vec<String> = fra.prop_requests().into_iter().map(|(_, _, a)| a).collect();
        let distinct: HashSet<&String> = attrs.iter().collect();
        ensure(distinct.len() == attrs.len(), || {
            format!("{q:?}: property requested twice")
        })?;
    }
    Ok(format!("{} queries", CORPUS.len()))
}

fn chain_files(dir: &std::path::Path) -> std::io::Result<()> {
    let mut graph = String::new();
    for i in 1..=1000u64 {
        let label = if i == 1 { "Post" } else { "Comm" };
        graph += &format!(
            "{{\"vertex\": {{\"id\": {i}, \"labels\": [\"{label}\"], \"properties\": {{\"lang\": \"en\"}}}}}}\n"
        );
    }
    for i in 1..1000u64 {
        graph += &format!(
            "{{\"edge\": {{\"id\": {}, \"source\": {i}, \"target\": {}, \"type\": \"REPLY\"}}}}\n",
            10_000 + i,
            i + 1
        );
    }
    std::fs::write(dir.join("chain.jsonl"), graph)?;
    std::fs::write(dir.join("thread.cypher"), THREAD_QUERY)?;
    std::fs::write(
        dir.join("tail.jsonl"),
        "{\"tx\": 1, \"add_edge\": {\"id\": 20000, \"source\": 1000, \"target\": 999, \"type\": \"REPLY\"}}\n",
    )
}

struct Stats {
    tuples: u64,
    micros: u64,
    output: String,
}

fn run_cli(dir: &std::path::Path, full: bool) -> Result<Stats, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_grapevine"));
    cmd.arg("--graph")
        .arg(dir.join("chain.jsonl"))
        .arg("--query")
        .arg(dir.join("thread.cypher"))
        .arg("--updates")
        .arg(dir.join("tail.jsonl"))
        .args(["--emit", "deltas", "--stats"]);
    if full {
        cmd.arg("--full");
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        String::from_utf8_lossy(&out.stderr).into_owned()
    })?;
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr
        .lines()
        .find(|l| l.starts_with("1,0,"))
        .ok_or_else(|| format!("no stats line in {stderr:?}"))?;
    let fields: Vec<&str> = line.split(',').collect();
    Ok(Stats {
        tuples: fields[3].parse().map_err(|_| line.to_string())?,
        micros: fields[4].parse().map_err(|_| line.to_string())?,
        output: String::from_utf8_lossy(&out.stdout)
            .lines()
            .filter(|l| l.contains("\"kind\":\"delta\""))
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn incrementality_wins() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    chain_files(dir.path()).map_err(|e| e.to_string())?;
    let ivm = run_cli(dir.path(), false)?;
    let full = run_cli(dir.path(), true)?;
    ensure(ivm.output == full.output && !ivm.output.is_empty(), || {
        format!("outputs differ: {:?} vs {:?}", ivm.output, full.output)
    })?;
    ensure(ivm.tuples * 10 < full.tuples, || {
        format!("ivm {} tuples vs full {}", ivm.tuples, full.tuples)
    })?;
    ensure(ivm.micros < full.micros, || {
        format!("ivm {}us vs full {}us", ivm.micros, full.micros)
    })?;
    Ok(format!(
        "tuples ivm {} vs full {} ({:.2}%), wall {}us vs {}us",
        ivm.tuples,
        full.tuples,
        100.0 * ivm.tuples as f64 / full.tuples as f64,
        ivm.micros,
        full.micros
    ))
}

fn termination_on_cycles() -> Outcome {
    let vertices = (1..=10).map(|i| {
        VertexRecord::new(i)
            .with_label(if i == 1 { "Post" } else { "Comm" })
            .with_property("lang", "en")
    });
    let edges = (1..=10).map(|i| EdgeRecord::new(100 + i, i, i % 10 + 1, "REPLY"));
    let mut graph = PropertyGraph::from_records(vertices, edges).map_err(|e| e.to_string())?;
    let fra = compiled(THREAD_QUERY).fra;
    let mut view = ViewHandle::instantiate(&mut graph, &fra).map_err(|e| e.to_string())?;
    // One edge-distinct path per length 1..=9 ends at a Comm vertex; the
    // full cycle returns to the Post.
    let expected = bag_of((1..=9u64).map(|len| {
        let hops = (1..=len)
            .map(|i| (EdgeId(100 + i), VertexId(i + 1)))
            .collect::<Vec<_>>();
        vec![
            Value::Vertex(VertexId(1)),
            Value::Path(Path::from_hops(VertexId(1), hops)),
        ]
    }));
    ensure(view.contents() == &expected, || {
        format!("got {:?}", view.read_view())
    })?;
    check_paths(&graph, &fra, view.contents())?;
    let deltas = graph
        .apply_transaction(&[UpdateOp::AddEdge(EdgeRecord::new(200, 5, 1, "REPLY"))])
        .map_err(|e| e.to_string())?;
    view.on_transaction(&deltas).map_err(|e| e.to_string())?;
    ensure(
        view.contents() == &evaluate(&graph, &fra).map_err(|e| e.to_string())?.rows,
        || "view differs from reference after closing a second cycle".into(),
    )?;
    check_paths(&graph, &fra, view.contents())?;
    Ok(format!(
        "{} paths, all edge-distinct",
        view.contents().len()
    ))
}
