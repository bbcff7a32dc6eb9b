//! Incremental view maintenance over FRA expressions.
//!
//! A [`ViewHandle`] turns an FRA tree into a network of stateful nodes fed
//! by base scans registered with the graph. After every transaction the
//! graph reports scan deltas; [`ViewHandle::on_transaction`] propagates them
//! bottom-up and returns the signed change of the view.
//!
//! ```
//! use grapevine::fixtures::{running_example, THREAD_QUERY};
//! use grapevine::graph::UpdateOp;
//! use grapevine::ivm::ViewHandle;
//! use grapevine::value::EdgeId;
//! use grapevine::{query, rewrite};
//!
//! let fra = rewrite::compile(&query::parse(THREAD_QUERY).unwrap()).unwrap().fra;
//! let mut graph = running_example();
//! let mut view = ViewHandle::instantiate(&mut graph, &fra).unwrap();
//! assert_eq!(view.read_view().len(), 2);
//!
//! let deltas = graph.apply_transaction(&[UpdateOp::RemoveEdge(EdgeId(102))]).unwrap();
//! let change = view.on_transaction(&deltas).unwrap();
//! assert_eq!(change.len(), 1);
//! assert_eq!(view.read_view().len(), 1);
//! ```

mod transitive;

use std::collections::HashMap;

use crate::algebra::{
    dialect_of, schema_of, AlgebraExpr, ColumnSource, Dialect, GetEdges, Operand, Predicate, Schema,
};
use crate::delta::{DeltaBag, TupleBag};
use crate::error::EngineError;
use crate::graph::{BaseDeltas, PropertyGraph, ScanId, ScanSpec};
use crate::value::{Tuple, Value};

use transitive::TransJoin;

/// A materialized, incrementally maintained view.
#[derive(Debug)]
pub struct ViewHandle {
    root: Node,
    schema: Schema,
    contents: TupleBag,
    processed: u64,
}

impl ViewHandle {
    /// Builds the maintenance network for `fra`, registers its base scans
    /// with `graph` and computes the initial contents.
    pub fn instantiate(graph: &mut PropertyGraph, fra: &AlgebraExpr) -> Result<Self, EngineError> {
        let schema = schema_of(fra)?;
        check_flat(fra)?;
        let mut root = Node::build(graph, fra)?;
        let initial: BaseDeltas = root
            .scans()
            .into_iter()
            .map(|id| {
                let spec = graph.scan_spec(id).expect("registered scan");
                let mut d = DeltaBag::new(crate::graph::scan_schema(spec));
                for row in graph.scan(spec) {
                    d.add(row, 1);
                }
                (id, d)
            })
            .collect();
        let mut processed = 0;
        let delta = root.on_delta(&initial, &mut processed)?;
        let mut contents = TupleBag::new();
        delta.apply_to(&mut contents)?;
        Ok(ViewHandle {
            root,
            schema,
            contents,
            processed: 0,
        })
    }

    /// Propagates the base deltas of one transaction and returns the change
    /// of the view. An empty delta means the view is unchanged.
    pub fn on_transaction(&mut self, deltas: &BaseDeltas) -> Result<DeltaBag, EngineError> {
        let delta = self.root.on_delta(deltas, &mut self.processed)?;
        delta.apply_to(&mut self.contents)?;
        Ok(delta)
    }

    /// Current contents, sorted.
    pub fn read_view(&self) -> Vec<(Tuple, u64)> {
        let mut rows: Vec<_> = self.contents.iter().map(|(t, &m)| (t.clone(), m)).collect();
        rows.sort();
        rows
    }

    pub fn contents(&self) -> &TupleBag {
        &self.contents
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// Tuples handled by the network since instantiation, excluding the
    /// initial load.
    pub fn processed(&self) -> u64 {
        self.processed
    }

    /// Unregisters the view's base scans from `graph`.
    pub fn detach(self, graph: &mut PropertyGraph) {
        for id in self.root.scans() {
            graph.unregister_scan(id);
        }
    }
}

type Keyed = HashMap<Tuple, HashMap<Tuple, i64>>;

#[derive(Debug)]
enum Node {
    Base {
        scan: ScanId,
        names: Vec<String>,
    },
    Select {
        child: Box<Node>,
        predicate: Predicate,
        schema: Schema,
        names: Vec<String>,
    },
    Project {
        child: Box<Node>,
        columns: Vec<usize>,
        names: Vec<String>,
    },
    Join {
        left: Box<Node>,
        right: Box<Node>,
        left_keys: Vec<usize>,
        right_keys: Vec<usize>,
        right_rest: Vec<usize>,
        left_state: Keyed,
        right_state: Keyed,
        names: Vec<String>,
    },
    Transitive {
        left: Box<Node>,
        join: Box<TransJoin>,
        names: Vec<String>,
    },
}

fn position(schema: &Schema, name: &str) -> usize {
    schema
        .position(name)
        .expect("attribute checked by schema_of")
}

fn get_edges_spec(g: &GetEdges) -> ScanSpec {
    let keys =
        |props: &[crate::algebra::PropRequest]| props.iter().map(|p| p.key.clone()).collect();
    ScanSpec::Edges {
        src_label: g.src.label.clone(),
        edge_type: g.edge.edge_type.clone(),
        tgt_label: g.tgt.label.clone(),
        include_edge: g.edge.var.is_some(),
        src_props: keys(&g.src.props),
        edge_props: keys(&g.edge.props),
        tgt_props: keys(&g.tgt.props),
    }
}

impl Node {
    fn build(graph: &mut PropertyGraph, expr: &AlgebraExpr) -> Result<Node, EngineError> {
        let names = schema_of(expr)?.names();
        Ok(match expr {
            AlgebraExpr::GetVertices(slot) => Node::Base {
                scan: graph.register_scan(ScanSpec::Vertices {
                    label: slot.label.clone(),
                    props: slot.props.iter().map(|p| p.key.clone()).collect(),
                }),
                names,
            },
            AlgebraExpr::GetEdges(g) => Node::Base {
                scan: graph.register_scan(get_edges_spec(g)),
                names,
            },
            AlgebraExpr::ExpandOut { .. } => return Err(EngineError::NotFlat("expand-out")),
            AlgebraExpr::Unnest { .. } => return Err(EngineError::NotFlat("unnest")),
            AlgebraExpr::Selection { child, predicate } => {
                let flat = predicate.conditions.iter().all(|c| {
                    !matches!(c.left, Operand::Property { .. })
                        && !matches!(c.right, Operand::Property { .. })
                });
                if !flat {
                    return Err(EngineError::NotFlat("property access in a selection"));
                }
                Node::Select {
                    schema: schema_of(child)?,
                    child: Box::new(Node::build(graph, child)?),
                    predicate: predicate.clone(),
                    names,
                }
            }
            AlgebraExpr::Projection { child, columns } => {
                let schema = schema_of(child)?;
                let columns = columns
                    .iter()
                    .map(|c| match &c.source {
                        ColumnSource::Attr(a) => Ok(position(&schema, a)),
                        ColumnSource::Property { .. } => {
                            Err(EngineError::NotFlat("property access in a projection"))
                        }
                    })
                    .collect::<Result<_, _>>()?;
                Node::Project {
                    child: Box::new(Node::build(graph, child)?),
                    columns,
                    names,
                }
            }
            AlgebraExpr::NaturalJoin { left, right } => {
                let ls = schema_of(left)?;
                let rs = schema_of(right)?;
                let mut left_keys = Vec::new();
                let mut right_keys = Vec::new();
                let mut right_rest = Vec::new();
                for (ri, a) in rs.attrs.iter().enumerate() {
                    match ls.position(&a.name) {
                        Some(li) => {
                            left_keys.push(li);
                            right_keys.push(ri);
                        }
                        None => right_rest.push(ri),
                    }
                }
                Node::Join {
                    left: Box::new(Node::build(graph, left)?),
                    right: Box::new(Node::build(graph, right)?),
                    left_keys,
                    right_keys,
                    right_rest,
                    left_state: Keyed::new(),
                    right_state: Keyed::new(),
                    names,
                }
            }
            AlgebraExpr::TransitiveJoin {
                left,
                right,
                min,
                max,
                path,
            } => {
                let ls = schema_of(left)?;
                let join = TransJoin::new(graph, &ls, right, *min, *max, path.as_deref());
                Node::Transitive {
                    left: Box::new(Node::build(graph, left)?),
                    join: Box::new(join),
                    names,
                }
            }
        })
    }

    fn scans(&self) -> Vec<ScanId> {
        match self {
            Node::Base { scan, .. } => vec![*scan],
            Node::Select { child, .. } | Node::Project { child, .. } => child.scans(),
            Node::Join { left, right, .. } => {
                let mut s = left.scans();
                s.extend(right.scans());
                s
            }
            Node::Transitive { left, join, .. } => {
                let mut s = left.scans();
                s.extend(join.scans());
                s
            }
        }
    }

    fn on_delta(
        &mut self,
        base: &BaseDeltas,
        processed: &mut u64,
    ) -> Result<DeltaBag, EngineError> {
        match self {
            Node::Base { scan, names } => {
                let mut out = DeltaBag::new(names.clone());
                if let Some(d) = base.get(scan) {
                    for (t, m) in d.iter() {
                        *processed += 1;
                        out.add(t.clone(), m);
                    }
                }
                Ok(out)
            }
            Node::Select {
                child,
                predicate,
                schema,
                names,
            } => {
                let input = child.on_delta(base, processed)?;
                let mut out = DeltaBag::new(names.clone());
                for (t, m) in input.iter() {
                    *processed += 1;
                    let keep = predicate.holds(|o| match o {
                        Operand::Attr(a) => t[position(schema, a)].clone(),
                        Operand::Literal(v) => v.clone(),
                        Operand::Property { .. } => Value::Missing,
                    });
                    if keep {
                        out.add(t.clone(), m);
                    }
                }
                Ok(out)
            }
            Node::Project {
                child,
                columns,
                names,
            } => {
                let input = child.on_delta(base, processed)?;
                let mut out = DeltaBag::new(names.clone());
                for (t, m) in input.iter() {
                    *processed += 1;
                    out.add(columns.iter().map(|&i| t[i].clone()).collect(), m);
                }
                Ok(out)
            }
            Node::Join {
                left,
                right,
                left_keys,
                right_keys,
                right_rest,
                left_state,
                right_state,
                names,
            } => {
                let dl = left.on_delta(base, processed)?;
                let dr = right.on_delta(base, processed)?;
                let mut out = DeltaBag::new(names.clone());
                let key = |t: &Tuple, idx: &[usize]| -> Tuple {
                    idx.iter().map(|&i| t[i].clone()).collect()
                };
                let combine = |l: &Tuple, r: &Tuple| -> Tuple {
                    let mut row = l.clone();
                    row.extend(right_rest.iter().map(|&i| r[i].clone()));
                    row
                };
                // ΔL ⋈ R_old
                for (l, lm) in dl.iter() {
                    if let Some(matches) = right_state.get(&key(l, left_keys)) {
                        for (r, &rm) in matches {
                            *processed += 1;
                            out.add(combine(l, r), lm * rm);
                        }
                    }
                }
                // L_new ⋈ ΔR
                apply_keyed(left_state, &dl, left_keys)?;
                for (r, rm) in dr.iter() {
                    if let Some(matches) = left_state.get(&key(r, right_keys)) {
                        for (l, &lm) in matches {
                            *processed += 1;
                            out.add(combine(l, r), lm * rm);
                        }
                    }
                }
                apply_keyed(right_state, &dr, right_keys)?;
                Ok(out)
            }
            Node::Transitive { left, join, names } => {
                let dl = left.on_delta(base, processed)?;
                let mut out = DeltaBag::new(names.clone());
                join.on_delta(&dl, base, &mut out, processed);
                Ok(out)
            }
        }
    }
}

fn check_flat(expr: &AlgebraExpr) -> Result<(), EngineError> {
    if dialect_of(expr) == Dialect::Fra {
        return Ok(());
    }
    let mut found = None;
    expr.visit(&mut |e| {
        if found.is_none()
            && dialect_of(e) != Dialect::Fra
            && e.children().iter().all(|c| dialect_of(c) == Dialect::Fra)
        {
            found = Some(match e {
                AlgebraExpr::ExpandOut { .. } => "expand-out",
                AlgebraExpr::Unnest { .. } => "unnest",
                AlgebraExpr::Selection { .. } => "property access in a selection",
                _ => "property access in a projection",
            });
        }
    });
    Err(EngineError::NotFlat(found.unwrap_or("non-flat operator")))
}

fn apply_keyed(state: &mut Keyed, delta: &DeltaBag, keys: &[usize]) -> Result<(), EngineError> {
    for (t, m) in delta.iter() {
        let k: Tuple = keys.iter().map(|&i| t[i].clone()).collect();
        let group = state.entry(k.clone()).or_default();
        let next = group.get(t).copied().unwrap_or(0) + m;
        if next < 0 {
            return Err(EngineError::NegativeMultiplicity {
                tuple: format!("{t:?}"),
                multiplicity: next,
            });
        }
        if next == 0 {
            group.remove(t);
            if group.is_empty() {
                state.remove(&k);
            }
        } else {
            group.insert(t.clone(), next);
        }
    }
    Ok(())
}
