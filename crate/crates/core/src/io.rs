//! JSON-lines formats: graph files, update streams and view output.

use std::io::BufRead;

use serde::Deserialize;
use serde_json::{json, Map, Value as Json};
use thiserror::Error;

use crate::algebra::Schema;
use crate::error::GraphError;
use crate::graph::{EdgeRecord, PropertyGraph, UpdateOp, VertexRecord};
use crate::value::{Bag, EdgeId, PropertyMap, Tuple, Value, VertexId};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("line {line}: {reason}")]
    Invalid { line: usize, reason: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexJson {
    id: u64,
    #[serde(default)]
    labels: Vec<String>,
    #[serde(default)]
    properties: Map<String, Json>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeJson {
    id: u64,
    source: u64,
    target: u64,
    #[serde(rename = "type")]
    edge_type: String,
    #[serde(default)]
    properties: Map<String, Json>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum GraphLine {
    Vertex(VertexJson),
    Edge(EdgeJson),
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum UpdateJson {
    AddVertex(VertexJson),
    RemoveVertex { id: u64 },
    AddEdge(EdgeJson),
    RemoveEdge { id: u64 },
    SetVertexProperty { id: u64, key: String, value: Json },
    RemoveVertexProperty { id: u64, key: String },
    SetEdgeProperty { id: u64, key: String, value: Json },
    RemoveEdgeProperty { id: u64, key: String },
}

#[derive(Debug, Deserialize)]
struct UpdateLine {
    tx: u64,
    #[serde(flatten)]
    op: UpdateJson,
}

/// Converts a JSON property value: scalars become atomic values, arrays
/// become bags.
pub fn property_from_json(v: &Json) -> Result<Value, String> {
    Ok(match v {
        Json::Bool(b) => Value::Bool(*b),
        Json::Number(n) => match n.as_i64() {
            Some(i) => Value::Int(i),
            None => Value::Float(
                n.as_f64()
                    .ok_or_else(|| format!("number {n} out of range"))?,
            ),
        },
        Json::String(s) => Value::Str(s.clone()),
        Json::Array(items) => Value::Bag(Bag::new(
            items
                .iter()
                .map(property_from_json)
                .collect::<Result<_, _>>()?,
        )),
        Json::Null => return Err("null is not a property value".into()),
        Json::Object(_) => return Err("objects are not property values".into()),
    })
}

fn properties(map: &Map<String, Json>, line: usize) -> Result<PropertyMap, LoadError> {
    map.iter()
        .map(|(k, v)| {
            property_from_json(v)
                .map(|v| (k.clone(), v))
                .map_err(|reason| LoadError::Invalid {
                    line,
                    reason: format!("property `{k}`: {reason}"),
                })
        })
        .collect()
}

fn vertex_record(v: VertexJson, line: usize) -> Result<VertexRecord, LoadError> {
    Ok(VertexRecord {
        id: VertexId(v.id),
        labels: v.labels.into_iter().collect(),
        properties: properties(&v.properties, line)?,
    })
}

fn edge_record(e: EdgeJson, line: usize) -> Result<EdgeRecord, LoadError> {
    Ok(EdgeRecord {
        id: EdgeId(e.id),
        source: VertexId(e.source),
        target: VertexId(e.target),
        edge_type: e.edge_type,
        properties: properties(&e.properties, line)?,
    })
}

fn lines(reader: impl BufRead) -> impl Iterator<Item = Result<(usize, String), LoadError>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)).map_err(LoadError::from))
        .filter(|r| !matches!(r, Ok((_, l)) if l.trim().is_empty()))
}

/// Reads a graph file. Vertices and edges may appear in any order.
pub fn read_graph(reader: impl BufRead) -> Result<PropertyGraph, LoadError> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for item in lines(reader) {
        let (line, text) = item?;
        match serde_json::from_str(&text).map_err(|source| LoadError::Json { line, source })? {
            GraphLine::Vertex(v) => vertices.push((line, vertex_record(v, line)?)),
            GraphLine::Edge(e) => edges.push((line, edge_record(e, line)?)),
        }
    }
    let mut graph = PropertyGraph::new();
    for (line, v) in vertices {
        graph
            .apply_transaction(&[UpdateOp::AddVertex(v)])
            .map_err(|source| LoadError::Graph { line, source })?;
    }
    for (line, e) in edges {
        graph
            .apply_transaction(&[UpdateOp::AddEdge(e)])
            .map_err(|source| LoadError::Graph { line, source })?;
    }
    Ok(graph)
}

/// One transaction of an update stream.
#[derive(Debug, Clone, PartialEq)]
pub struct Transaction {
    pub tx: u64,
    pub ops: Vec<UpdateOp>,
}

/// Reads an update stream. Lines of one transaction must be adjacent and
/// transaction numbers strictly ascending.
pub fn read_updates(reader: impl BufRead) -> Result<Vec<Transaction>, LoadError> {
    let mut out: Vec<Transaction> = Vec::new();
    for item in lines(reader) {
        let (line, text) = item?;
        let parsed: UpdateLine =
            serde_json::from_str(&text).map_err(|source| LoadError::Json { line, source })?;
        let op = update_op(parsed.op, line)?;
        match out.last_mut() {
            Some(last) if last.tx == parsed.tx => last.ops.push(op),
            Some(last) if last.tx > parsed.tx => {
                return Err(LoadError::Invalid {
                    line,
                    reason: format!("transaction {} follows {}", parsed.tx, last.tx),
                })
            }
            _ => out.push(Transaction {
                tx: parsed.tx,
                ops: vec![op],
            }),
        }
    }
    Ok(out)
}

fn update_op(op: UpdateJson, line: usize) -> Result<UpdateOp, LoadError> {
    let value =
        |v: &Json| property_from_json(v).map_err(|reason| LoadError::Invalid { line, reason });
    Ok(match op {
        UpdateJson::AddVertex(v) => UpdateOp::AddVertex(vertex_record(v, line)?),
        UpdateJson::RemoveVertex { id } => UpdateOp::RemoveVertex(VertexId(id)),
        UpdateJson::AddEdge(e) => UpdateOp::AddEdge(edge_record(e, line)?),
        UpdateJson::RemoveEdge { id } => UpdateOp::RemoveEdge(EdgeId(id)),
        UpdateJson::SetVertexProperty { id, key, value: v } => {
            UpdateOp::SetVertexProperty(VertexId(id), key, value(&v)?)
        }
        UpdateJson::RemoveVertexProperty { id, key } => {
            UpdateOp::RemoveVertexProperty(VertexId(id), key)
        }
        UpdateJson::SetEdgeProperty { id, key, value: v } => {
            UpdateOp::SetEdgeProperty(EdgeId(id), key, value(&v)?)
        }
        UpdateJson::RemoveEdgeProperty { id, key } => UpdateOp::RemoveEdgeProperty(EdgeId(id), key),
    })
}

/// JSON rendering of a view value: elements as ids, paths as alternating
/// id arrays, missing as null.
pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Missing => Json::Null,
        Value::Bool(b) => json!(b),
        Value::Int(i) => json!(i),
        Value::Float(f) => json!(f),
        Value::Str(s) => json!(s),
        Value::Bag(b) => Json::Array(b.iter().map(value_to_json).collect()),
        Value::Path(p) => json!(p.to_alternating()),
        Value::Vertex(v) => json!(v.0),
        Value::Edge(e) => json!(e.0),
        Value::Record(r) => Json::Object(
            r.iter()
                .map(|(k, v)| (k.clone(), value_to_json(v)))
                .collect(),
        ),
    }
}

/// `{attr: value}` for one tuple.
pub fn tuple_to_json(schema: &Schema, tuple: &Tuple) -> Json {
    Json::Object(
        schema
            .attrs
            .iter()
            .zip(tuple)
            .map(|(a, v)| (a.name.clone(), value_to_json(v)))
            .collect(),
    )
}

/// Output lines for one emission, sorted by the serialized tuple.
pub fn emission_lines(
    tx: u64,
    view: usize,
    kind: &str,
    schema: &Schema,
    rows: impl IntoIterator<Item = (Tuple, i64)>,
) -> Vec<String> {
    let mut rendered: Vec<(String, i64)> = rows
        .into_iter()
        .map(|(t, m)| (tuple_to_json(schema, &t).to_string(), m))
        .collect();
    rendered.sort();
    rendered
        .into_iter()
        .map(|(tuple, m)| {
            format!(
                r#"{{"tx":{tx},"view":{view},"kind":"{kind}","tuple":{tuple},"multiplicity":{m}}}"#
            )
        })
        .collect()
}
