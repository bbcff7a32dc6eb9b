//! Brute-force evaluation of any algebra expression straight from the graph.
//!
//! This is the oracle for the rewrite and maintenance tests and the
//! baseline of the `--full` CLI mode. It follows the operator definitions
//! literally: nested loops, full rescans, and depth-first enumeration of
//! edge-distinct paths for transitive operators.

use std::collections::HashSet;

use crate::algebra::{schema_of, AlgebraExpr, ColumnSource, GetEdges, Operand, Schema, VertexSlot};
use crate::delta::TupleBag;
use crate::error::SchemaError;
use crate::graph::PropertyGraph;
use crate::query::EdgeLength;
use crate::value::{EdgeId, Path, Tuple, Value, VertexId};

/// A materialized relation: schema plus bag of rows.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Relation {
    pub schema: Schema,
    pub rows: TupleBag,
}

impl Relation {
    fn new(schema: Schema) -> Self {
        Relation {
            schema,
            rows: TupleBag::new(),
        }
    }

    fn add(&mut self, row: Tuple, n: u64, counter: &mut u64) {
        *counter += 1;
        *self.rows.entry(row).or_insert(0) += n;
    }

    /// Total number of rows counting duplicates.
    pub fn cardinality(&self) -> u64 {
        self.rows.values().sum()
    }
}

/// Evaluates `expr` on `graph`.
pub fn evaluate(graph: &PropertyGraph, expr: &AlgebraExpr) -> Result<Relation, SchemaError> {
    let mut counter = 0;
    evaluate_counted(graph, expr, &mut counter)
}

/// Like [`evaluate`], adding to `processed` one unit per row an operator
/// emits and per partial path explored.
pub fn evaluate_counted(
    graph: &PropertyGraph,
    expr: &AlgebraExpr,
    processed: &mut u64,
) -> Result<Relation, SchemaError> {
    let schema = schema_of(expr)?;
    let mut out = Relation::new(schema.clone());
    match expr {
        AlgebraExpr::GetVertices(slot) => {
            for row in vertex_rows(graph, slot) {
                out.add(row, 1, processed);
            }
        }
        AlgebraExpr::GetEdges(g) => {
            for e in graph.edges() {
                if g.edge.edge_type.as_ref().is_some_and(|t| *t != e.edge_type)
                    || !has_label(graph, e.source, &g.src.label)
                    || !has_label(graph, e.target, &g.tgt.label)
                {
                    continue;
                }
                let mut row = vec![Value::Vertex(e.source)];
                if g.edge.var.is_some() {
                    row.push(Value::Edge(e.id));
                }
                row.push(Value::Vertex(e.target));
                for p in &g.src.props {
                    row.push(vertex_prop(graph, e.source, &p.key));
                }
                for p in &g.edge.props {
                    row.push(edge_prop(graph, e.id, &p.key));
                }
                for p in &g.tgt.props {
                    row.push(vertex_prop(graph, e.target, &p.key));
                }
                out.add(row, 1, processed);
            }
        }
        AlgebraExpr::ExpandOut {
            child,
            from,
            to_label,
            edge_var,
            edge_type,
            length,
            path,
            ..
        } => {
            let input = evaluate_counted(graph, child, processed)?;
            let from_pos = position(&input.schema, from);
            let path_pos = path.as_ref().and_then(|p| input.schema.position(p));
            for (row, &n) in &input.rows {
                let start = row[from_pos].as_vertex().expect("vertex attribute");
                let prefix = path_pos.and_then(|i| row[i].as_path());
                match length {
                    EdgeLength::One => {
                        for e in graph.out_edges(start) {
                            *processed += 1;
                            if edge_type.as_ref().is_some_and(|t| *t != e.edge_type)
                                || !has_label(graph, e.target, to_label)
                                || prefix.is_some_and(|p| p.contains_edge(e.id))
                            {
                                continue;
                            }
                            let mut next = row.clone();
                            if edge_var.is_some() {
                                next.push(Value::Edge(e.id));
                            }
                            next.push(Value::Vertex(e.target));
                            let hop = Path::from_hops(start, vec![(e.id, e.target)]);
                            extend_path(&mut next, path.is_some(), path_pos, &hop);
                            out.add(next, n, processed);
                        }
                    }
                    EdgeLength::Variable { min, max } => {
                        let forbidden = prefix.map(|p| p.edges().collect()).unwrap_or_default();
                        for seg in trails(
                            graph,
                            start,
                            edge_type.as_deref(),
                            *min,
                            *max,
                            &forbidden,
                            processed,
                        ) {
                            if !has_label(graph, seg.end(), to_label) {
                                continue;
                            }
                            let mut next = row.clone();
                            next.push(Value::Vertex(seg.end()));
                            extend_path(&mut next, path.is_some(), path_pos, &seg);
                            out.add(next, n, processed);
                        }
                    }
                }
            }
        }
        AlgebraExpr::Selection { child, predicate } => {
            let input = evaluate_counted(graph, child, processed)?;
            for (row, &n) in &input.rows {
                if predicate.holds(|o| resolve(graph, &input.schema, row, o)) {
                    out.add(row.clone(), n, processed);
                }
            }
        }
        AlgebraExpr::Projection { child, columns } => {
            let input = evaluate_counted(graph, child, processed)?;
            for (row, &n) in &input.rows {
                let projected = columns
                    .iter()
                    .map(|c| match &c.source {
                        ColumnSource::Attr(a) => row[position(&input.schema, a)].clone(),
                        ColumnSource::Property { var, key } => {
                            element_prop(graph, &row[position(&input.schema, var)], key)
                        }
                    })
                    .collect();
                out.add(projected, n, processed);
            }
        }
        AlgebraExpr::Unnest { child, items } => {
            let input = evaluate_counted(graph, child, processed)?;
            for (row, &n) in &input.rows {
                let mut next = row.clone();
                for item in items {
                    next.push(element_prop(
                        graph,
                        &row[position(&input.schema, &item.var)],
                        &item.key,
                    ));
                }
                out.add(next, n, processed);
            }
        }
        AlgebraExpr::NaturalJoin { left, right } => {
            let l = evaluate_counted(graph, left, processed)?;
            let r = evaluate_counted(graph, right, processed)?;
            let shared: Vec<(usize, usize)> = r
                .schema
                .attrs
                .iter()
                .enumerate()
                .filter_map(|(ri, a)| l.schema.position(&a.name).map(|li| (li, ri)))
                .collect();
            let rest: Vec<usize> = (0..r.schema.len())
                .filter(|ri| !shared.iter().any(|&(_, s)| s == *ri))
                .collect();
            for (lrow, &ln) in &l.rows {
                for (rrow, &rn) in &r.rows {
                    *processed += 1;
                    if shared.iter().all(|&(li, ri)| lrow[li] == rrow[ri]) {
                        let mut row = lrow.clone();
                        row.extend(rest.iter().map(|&ri| rrow[ri].clone()));
                        out.add(row, ln * rn, processed);
                    }
                }
            }
        }
        AlgebraExpr::TransitiveJoin {
            left,
            right,
            min,
            max,
            path,
        } => {
            let l = evaluate_counted(graph, left, processed)?;
            let src_pos = position(&l.schema, &right.src.var);
            let path_pos = path.as_ref().and_then(|p| l.schema.position(p));
            for (row, &n) in &l.rows {
                let start = row[src_pos].as_vertex().expect("vertex attribute");
                if !has_label(graph, start, &right.src.label) {
                    continue;
                }
                let prefix = path_pos.and_then(|i| row[i].as_path());
                let forbidden = prefix.map(|p| p.edges().collect()).unwrap_or_default();
                let edge_type = right.edge.edge_type.as_deref();
                for seg in trails(graph, start, edge_type, *min, *max, &forbidden, processed) {
                    if let Some(next) =
                        transitive_row(graph, right, row, &seg, path.is_some(), path_pos)
                    {
                        out.add(next, n, processed);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn transitive_row(
    graph: &PropertyGraph,
    right: &GetEdges,
    row: &Tuple,
    seg: &Path,
    has_path: bool,
    path_pos: Option<usize>,
) -> Option<Tuple> {
    let end = seg.end();
    if !has_label(graph, end, &right.tgt.label) {
        return None;
    }
    let mut next = row.clone();
    next.push(Value::Vertex(end));
    for p in &right.tgt.props {
        next.push(vertex_prop(graph, end, &p.key));
    }
    extend_path(&mut next, has_path, path_pos, seg);
    Some(next)
}

// Writes the path accumulator: extends the existing one in place or appends
// the segment as a new path.
fn extend_path(row: &mut Tuple, has_path: bool, path_pos: Option<usize>, seg: &Path) {
    if !has_path {
        return;
    }
    match path_pos {
        Some(i) => {
            let prefix = row[i].as_path().expect("path attribute").clone();
            row[i] = Value::Path(prefix.concat(seg));
        }
        None => row.push(Value::Path(seg.clone())),
    }
}

/// All edge-distinct paths from `start` with `min..=max` hops along edges of
/// `edge_type`, never using an edge in `forbidden`.
pub(crate) fn trails(
    graph: &PropertyGraph,
    start: VertexId,
    edge_type: Option<&str>,
    min: u32,
    max: Option<u32>,
    forbidden: &HashSet<EdgeId>,
    processed: &mut u64,
) -> Vec<Path> {
    let mut out = Vec::new();
    let mut path = Path::new(start);
    dfs(
        graph, &mut path, edge_type, min, max, forbidden, processed, &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    graph: &PropertyGraph,
    path: &mut Path,
    edge_type: Option<&str>,
    min: u32,
    max: Option<u32>,
    forbidden: &HashSet<EdgeId>,
    processed: &mut u64,
    out: &mut Vec<Path>,
) {
    let len = path.len() as u32;
    if len >= min {
        out.push(path.clone());
    }
    if max.is_some_and(|m| len >= m) {
        return;
    }
    for e in graph.out_edges(path.end()) {
        if edge_type.is_some_and(|t| t != e.edge_type)
            || forbidden.contains(&e.id)
            || path.contains_edge(e.id)
        {
            continue;
        }
        *processed += 1;
        let mut next = path.clone();
        next.push(e.id, e.target);
        dfs(
            graph, &mut next, edge_type, min, max, forbidden, processed, out,
        );
    }
}

fn vertex_rows(graph: &PropertyGraph, slot: &VertexSlot) -> Vec<Tuple> {
    let build = |id: VertexId| {
        let mut row = vec![Value::Vertex(id)];
        for p in &slot.props {
            row.push(vertex_prop(graph, id, &p.key));
        }
        row
    };
    match &slot.label {
        // π_{id→v} σ_{label=V} (α)
        Some(label) => graph
            .alpha_relation()
            .into_iter()
            .filter(|row| matches!(&row[1], Value::Str(l) if l == label))
            .map(|row| build(row[0].as_vertex().expect("alpha id")))
            .collect(),
        None => graph.vertices().map(|v| build(v.id)).collect(),
    }
}

fn has_label(graph: &PropertyGraph, v: VertexId, label: &Option<String>) -> bool {
    match label {
        None => true,
        Some(l) => graph.vertex(v).is_some_and(|r| r.has_label(l)),
    }
}

fn vertex_prop(graph: &PropertyGraph, v: VertexId, key: &str) -> Value {
    graph
        .vertex(v)
        .and_then(|r| r.properties.get(key))
        .cloned()
        .unwrap_or(Value::Missing)
}

fn edge_prop(graph: &PropertyGraph, e: EdgeId, key: &str) -> Value {
    graph
        .edge(e)
        .and_then(|r| r.properties.get(key))
        .cloned()
        .unwrap_or(Value::Missing)
}

fn element_prop(graph: &PropertyGraph, element: &Value, key: &str) -> Value {
    match element {
        Value::Vertex(v) => vertex_prop(graph, *v, key),
        Value::Edge(e) => edge_prop(graph, *e, key),
        _ => Value::Missing,
    }
}

fn position(schema: &Schema, name: &str) -> usize {
    schema
        .position(name)
        .unwrap_or_else(|| panic!("attribute `{name}` checked by schema_of"))
}

fn resolve(graph: &PropertyGraph, schema: &Schema, row: &Tuple, o: &Operand) -> Value {
    match o {
        Operand::Attr(a) => row[position(schema, a)].clone(),
        Operand::Property { var, key } => element_prop(graph, &row[position(schema, var)], key),
        Operand::Literal(v) => v.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::bag_of;
    use crate::fixtures::{running_example, THREAD_QUERY};
    use crate::graph::{EdgeRecord, VertexRecord};
    use crate::query::parse;
    use crate::rewrite::compile;

    fn path(ids: &[u64]) -> Value {
        Value::Path(Path::from_alternating(ids).unwrap())
    }

    #[test]
    fn thread_query_on_running_example() {
        let c = compile(&parse(THREAD_QUERY).unwrap()).unwrap();
        let g = running_example();
        let expected = bag_of([
            vec![Value::Vertex(VertexId(1)), path(&[1, 101, 2])],
            vec![Value::Vertex(VertexId(1)), path(&[1, 101, 2, 102, 3])],
        ]);
        for stage in [&c.gra, &c.nra, &c.fra] {
            assert_eq!(evaluate(&g, stage).unwrap().rows, expected);
        }
    }

    #[test]
    fn empty_graph_gives_empty_bag() {
        let c = compile(&parse(THREAD_QUERY).unwrap()).unwrap();
        assert!(evaluate(&PropertyGraph::new(), &c.fra)
            .unwrap()
            .rows
            .is_empty());
    }

    #[test]
    fn three_cycle_yields_three_paths() {
        let g = PropertyGraph::from_records(
            [
                VertexRecord::new(1).with_label("Post"),
                VertexRecord::new(2),
                VertexRecord::new(3),
            ],
            [
                EdgeRecord::new(11, 1, 2, "REPLY"),
                EdgeRecord::new(12, 2, 3, "REPLY"),
                EdgeRecord::new(13, 3, 1, "REPLY"),
            ],
        )
        .unwrap();
        let q = parse("MATCH t = (p:Post)-[:REPLY*]->(c) RETURN t").unwrap();
        let rel = evaluate(&g, &compile(&q).unwrap().fra).unwrap();
        let expected = bag_of([
            vec![path(&[1, 11, 2])],
            vec![path(&[1, 11, 2, 12, 3])],
            vec![path(&[1, 11, 2, 12, 3, 13, 1])],
        ]);
        assert_eq!(rel.rows, expected);
    }

    #[test]
    fn parallel_edges_are_counted() {
        let g = PropertyGraph::from_records(
            [VertexRecord::new(1), VertexRecord::new(2)],
            [
                EdgeRecord::new(11, 1, 2, "R"),
                EdgeRecord::new(12, 1, 2, "R"),
            ],
        )
        .unwrap();
        let q = parse("MATCH (a)-[:R]->(b) RETURN a, b").unwrap();
        let rel = evaluate(&g, &compile(&q).unwrap().fra).unwrap();
        assert_eq!(rel.cardinality(), 2);
        assert_eq!(rel.rows.len(), 1);
    }
}
