//! Shared generators for the integration tests.
#![allow(dead_code)]

use grapevine::graph::{EdgeRecord, PropertyGraph, UpdateOp, VertexRecord};
use grapevine::value::{Bag, EdgeId, Path, Value, VertexId};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub const CORPUS: &[&str] = &[
    grapevine::fixtures::THREAD_QUERY,
    "MATCH (n) RETURN n",
    "MATCH (p:Person) WHERE p.age >= 30 AND p.name <> 'bob' RETURN p.name AS name, p",
    "MATCH (a:Person)-[:KNOWS]->(b:Person) RETURN a, b",
    "MATCH (a)-[k:KNOWS]->(b) WHERE k.since < 2015 RETURN a, k, b.name",
    "MATCH (a)-[:KNOWS]->(b)-[:KNOWS]->(c) WHERE a.age = c.age RETURN a, c",
    "MATCH t = (p:Post)-[:REPLY*2..3]->(c) RETURN t",
    "MATCH (p:Post)-[:REPLY*]->(c:Comm) WHERE c.lang <> p.lang RETURN p, c",
    "MATCH t = (a:Post)-[:REPLY]->(b)-[:REPLY*]->(c:Comm) RETURN t, c.lang",
    "MATCH (p:Post)-[:REPLY*1..2]->(c)-[r:LIKES]->(d) RETURN p, c, r, d",
    "MATCH (a)-->(b) RETURN a, b",
    "MATCH t = (a)-[*1..3]->(b:Comm) WHERE a.lang = 'en' RETURN t",
    "MATCH t = (a:Comm)-[:REPLY*]->(b)-[:REPLY*..2]->(c) RETURN t",
    "MATCH (a:Post)-[:REPLY]->(b:Comm) WHERE b.tags = a.tags RETURN a.tags AS tags, b",
];

const LABELS: &[&str] = &["Post", "Comm", "Person"];
const TYPES: &[&str] = &["REPLY", "REPLY", "KNOWS", "LIKES", "FOLLOWS"];
const LANGS: &[&str] = &["en", "de"];
const NAMES: &[&str] = &["alice", "bob", "carol"];

fn random_value(rng: &mut StdRng, key: &str) -> Value {
    match key {
        "lang" => Value::from(*LANGS.choose(rng).unwrap()),
        "name" => Value::from(*NAMES.choose(rng).unwrap()),
        "age" => {
            if rng.gen_bool(0.2) {
                Value::Float(rng.gen_range(26..32) as f64)
            } else {
                Value::Int(rng.gen_range(26..32))
            }
        }
        "since" => Value::Int(rng.gen_range(2010..2020)),
        _ => Value::Bag(Bag::new(
            (0..rng.gen_range(0..2))
                .map(|_| Value::from(*LANGS.choose(rng).unwrap()))
                .collect(),
        )),
    }
}

const VERTEX_KEYS: &[&str] = &["lang", "name", "age", "tags"];

pub fn random_vertex(rng: &mut StdRng, id: u64) -> VertexRecord {
    let mut v = VertexRecord::new(id);
    if rng.gen_bool(0.9) {
        v = v.with_label(LABELS.choose(rng).unwrap());
    }
    if rng.gen_bool(0.1) {
        v = v.with_label(LABELS.choose(rng).unwrap());
    }
    for key in VERTEX_KEYS {
        if rng.gen_bool(0.85) {
            v = v.with_property(key, random_value(rng, key));
        }
    }
    v
}

/// Replies mostly point from older to newer vertices, so reply threads are
/// long but cycles stay rare.
pub fn random_edge(rng: &mut StdRng, id: u64, source: u64, target: u64) -> EdgeRecord {
    let edge_type = *TYPES.choose(rng).unwrap();
    let (source, target) = if edge_type == "REPLY" && source > target && rng.gen_bool(0.85) {
        (target, source)
    } else {
        (source, target)
    };
    let mut e = EdgeRecord::new(id, source, target, edge_type);
    if rng.gen_bool(0.7) {
        e = e.with_property("since", random_value(rng, "since"));
    }
    e
}

/// Edges per vertex the generators stay below. Denser graphs, especially
/// with parallel edges and self-loops on few vertices, have factorially
/// many edge-distinct paths.
const MAX_DENSITY: f64 = 1.5;

/// Vertex ids start at 1, edge ids at 1000.
pub fn random_graph(rng: &mut StdRng, max_vertices: u64, max_edges: u64) -> PropertyGraph {
    let n = rng.gen_range((max_vertices / 3).max(1)..=max_vertices);
    let m = rng.gen_range(0..=max_edges.min((n as f64 * MAX_DENSITY) as u64));
    let vertices: Vec<_> = (1..=n).map(|i| random_vertex(rng, i)).collect();
    let edges: Vec<_> = (0..m)
        .map(|i| {
            let s = rng.gen_range(1..=n);
            let t = rng.gen_range(1..=n);
            random_edge(rng, 1000 + i, s, t)
        })
        .collect();
    PropertyGraph::from_records(vertices, edges).unwrap()
}

/// Fresh ids for generated elements.
pub struct IdSource(pub u64);

impl IdSource {
    pub fn next(&mut self) -> u64 {
        self.0 += 1;
        self.0
    }
}

/// A valid transaction of up to `max_ops` random operations against `graph`.
pub fn random_transaction(
    rng: &mut StdRng,
    graph: &PropertyGraph,
    ids: &mut IdSource,
    max_ops: usize,
) -> Vec<UpdateOp> {
    let mut scratch = graph.clone();
    let mut ops = Vec::new();
    for _ in 0..rng.gen_range(1..=max_ops) {
        let vertices: Vec<VertexId> = scratch.vertices().map(|v| v.id).collect();
        let edges: Vec<EdgeId> = scratch.edges().map(|e| e.id).collect();
        let op = match rng.gen_range(0..10) {
            0 => UpdateOp::AddVertex(random_vertex(rng, ids.next())),
            1..=3
                if !vertices.is_empty()
                    && (edges.len() as f64) < vertices.len() as f64 * MAX_DENSITY =>
            {
                let s = vertices.choose(rng).unwrap().0;
                let t = vertices.choose(rng).unwrap().0;
                UpdateOp::AddEdge(random_edge(rng, ids.next(), s, t))
            }
            4 | 5 if !edges.is_empty() => UpdateOp::RemoveEdge(*edges.choose(rng).unwrap()),
            6 if !vertices.is_empty() => {
                let v = *vertices.choose(rng).unwrap();
                let incident: Vec<EdgeId> = scratch
                    .out_edges(v)
                    .chain(scratch.in_edges(v))
                    .map(|e| e.id)
                    .collect();
                let mut batch: Vec<UpdateOp> = Vec::new();
                let mut seen = std::collections::HashSet::new();
                for e in incident {
                    if seen.insert(e) {
                        batch.push(UpdateOp::RemoveEdge(e));
                    }
                }
                batch.push(UpdateOp::RemoveVertex(v));
                scratch.apply_transaction(&batch).unwrap();
                ops.extend(batch);
                continue;
            }
            7 | 8 if !vertices.is_empty() => {
                let v = *vertices.choose(rng).unwrap();
                let key = VERTEX_KEYS.choose(rng).unwrap();
                if rng.gen_bool(0.2) {
                    UpdateOp::RemoveVertexProperty(v, key.to_string())
                } else {
                    UpdateOp::SetVertexProperty(v, key.to_string(), random_value(rng, key))
                }
            }
            9 if !edges.is_empty() => {
                let e = *edges.choose(rng).unwrap();
                if rng.gen_bool(0.3) {
                    UpdateOp::RemoveEdgeProperty(e, "since".into())
                } else {
                    UpdateOp::SetEdgeProperty(e, "since".into(), random_value(rng, "since"))
                }
            }
            _ => UpdateOp::AddVertex(random_vertex(rng, ids.next())),
        };
        scratch
            .apply_transaction(std::slice::from_ref(&op))
            .unwrap();
        ops.push(op);
    }
    ops
}

/// Checks that `p` is a well-formed path of `graph` with distinct edges and
/// a hop count within `min..=max`.
pub fn path_well_formed(graph: &PropertyGraph, p: &Path, min: usize, max: Option<usize>) -> bool {
    let mut at = p.start();
    for &(e, v) in p.hops() {
        match graph.edge(e) {
            Some(rec) if rec.source == at && rec.target == v => at = v,
            _ => return false,
        }
    }
    p.has_distinct_edges() && p.len() >= min && max.is_none_or(|m| p.len() <= m)
}
