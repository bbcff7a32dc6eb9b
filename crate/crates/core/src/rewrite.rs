//! The compilation pipeline: query → GRA → NRA → FRA.
//!
//! 1. [`compile_to_gra`] maps the pattern to get-vertices and expand-out
//!    operators, WHERE to a selection and RETURN to a projection.
//! 2. [`expand_to_joins`] replaces single-hop expansions by natural joins
//!    with get-edges and variable-length ones by transitive joins. Property
//!    reads become attributes introduced by an unnest placed right below the
//!    operator that consumes them.
//! 3. [`push_down_properties`] moves every unnested property into the base
//!    operator binding its variable, which yields the minimal schema each
//!    base operator has to produce.

use std::collections::{HashMap, HashSet};

use crate::algebra::{
    dialect_of, schema_of, AlgebraExpr, ColumnSource, Condition, Dialect, EdgeSlot, GetEdges,
    Operand, Predicate, ProjectColumn, PropRequest, UnnestItem, VertexSlot,
};
use crate::error::RewriteError;
use crate::query::{self, EdgeLength, Query, ReturnExpr};

/// The three forms of one compiled query.
#[derive(Debug, Clone, PartialEq)]
pub struct Compiled {
    pub gra: AlgebraExpr,
    pub nra: AlgebraExpr,
    pub fra: AlgebraExpr,
}

/// Runs all three passes.
pub fn compile(query: &Query) -> Result<Compiled, RewriteError> {
    let gra = compile_to_gra(query);
    schema_of(&gra)?;
    let nra = expand_to_joins(&gra)?;
    let fra = push_down_properties(&nra)?;
    schema_of(&fra)?;
    Ok(Compiled { gra, nra, fra })
}

fn fresh_name(base: &str, used: &HashSet<String>) -> String {
    if !used.contains(base) {
        return base.to_owned();
    }
    (2..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !used.contains(n))
        .expect("unbounded counter")
}

/// Maps a parsed query to a GRA expression.
pub fn compile_to_gra(q: &Query) -> AlgebraExpr {
    let pattern = &q.pattern;
    let mut used: HashSet<String> = pattern
        .nodes
        .iter()
        .filter_map(|n| n.var.clone())
        .chain(pattern.edges.iter().filter_map(|e| e.var.clone()))
        .chain(pattern.path_binding.clone())
        .collect();
    let node_vars: Vec<String> = pattern
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| match &n.var {
            Some(v) => v.clone(),
            None => {
                let name = fresh_name(&format!("_n{i}"), &used);
                used.insert(name.clone());
                name
            }
        })
        .collect();

    let first = &pattern.nodes[0];
    let mut expr = AlgebraExpr::get_vertices(&node_vars[0], first.label.as_deref());
    for (i, edge) in pattern.edges.iter().enumerate() {
        expr = AlgebraExpr::ExpandOut {
            child: Box::new(expr),
            from: node_vars[i].clone(),
            to: node_vars[i + 1].clone(),
            to_label: pattern.nodes[i + 1].label.clone(),
            edge_var: edge.var.clone(),
            edge_type: edge.edge_type.clone(),
            length: edge.length,
            path: pattern.path_binding.clone(),
        };
    }

    // Binding order of variables, used to orient symmetric comparisons.
    let mut order: HashMap<&str, usize> = HashMap::new();
    for (i, v) in node_vars.iter().enumerate() {
        order.insert(v, 2 * i);
    }
    for (i, e) in pattern.edges.iter().enumerate() {
        if let Some(v) = &e.var {
            order.insert(v, 2 * i + 1);
        }
    }

    if let Some(w) = &q.where_clause {
        let conditions = w
            .comparisons
            .iter()
            .map(|c| {
                let mut cond = Condition {
                    left: operand(&c.left),
                    op: c.op,
                    right: operand(&c.right),
                };
                // `=`/`<>` between two properties: later-bound variable first.
                if let (
                    query::Operand::Property { var: l, .. },
                    query::Operand::Property { var: r, .. },
                ) = (&c.left, &c.right)
                {
                    if c.op.is_symmetric() && order.get(l.as_str()) < order.get(r.as_str()) {
                        std::mem::swap(&mut cond.left, &mut cond.right);
                    }
                }
                cond
            })
            .collect();
        expr = expr.select(Predicate { conditions });
    }

    let columns = q
        .return_items
        .iter()
        .map(|item| ProjectColumn {
            source: match &item.expr {
                ReturnExpr::Variable(v) => ColumnSource::Attr(v.clone()),
                ReturnExpr::Property { var, key } => ColumnSource::Property {
                    var: var.clone(),
                    key: key.clone(),
                },
            },
            name: item.name.clone(),
        })
        .collect();
    expr.project(columns)
}

fn operand(o: &query::Operand) -> Operand {
    match o {
        query::Operand::Property { var, key } => Operand::Property {
            var: var.clone(),
            key: key.clone(),
        },
        query::Operand::Literal(v) => Operand::Literal(v.clone()),
    }
}

/// Label of the base operator or expansion that binds `var`.
fn label_of(expr: &AlgebraExpr, var: &str) -> Option<String> {
    let mut found = None;
    expr.visit(&mut |e| {
        if found.is_some() {
            return;
        }
        match e {
            AlgebraExpr::GetVertices(s) if s.var == var => found = Some(s.label.clone()),
            AlgebraExpr::GetEdges(g) => {
                if g.src.var == var {
                    found = Some(g.src.label.clone());
                } else if g.tgt.var == var {
                    found = Some(g.tgt.label.clone());
                }
            }
            AlgebraExpr::ExpandOut { to, to_label, .. } if to == var => {
                found = Some(to_label.clone())
            }
            AlgebraExpr::TransitiveJoin { right, .. } if right.tgt.var == var => {
                found = Some(right.tgt.label.clone())
            }
            _ => {}
        }
    });
    found.flatten()
}

struct Unnester {
    /// `(var, key) -> attr` for properties already unnested below.
    unnested: HashMap<(String, String), String>,
    used: HashSet<String>,
}

impl Unnester {
    fn new(expr: &AlgebraExpr) -> Self {
        let mut used = HashSet::new();
        expr.visit(&mut |e| {
            if let Ok(s) = schema_of(e) {
                used.extend(s.names());
            }
            if let AlgebraExpr::Projection { columns, .. } = e {
                used.extend(columns.iter().map(|c| c.name.clone()));
            }
        });
        Unnester {
            unnested: HashMap::new(),
            used,
        }
    }

    /// Attribute holding `var.key` in `child`, adding an unnest item if needed.
    fn attr_for(
        &mut self,
        var: &str,
        key: &str,
        child: &AlgebraExpr,
        items: &mut Vec<UnnestItem>,
    ) -> Result<String, RewriteError> {
        let k = (var.to_owned(), key.to_owned());
        if let Some(item) = items.iter().find(|i| i.var == var && i.key == key) {
            return Ok(item.attr.clone());
        }
        if let Some(attr) = self.unnested.get(&k) {
            if schema_of(child)?.contains(attr) {
                return Ok(attr.clone());
            }
        }
        let initial = key
            .chars()
            .next()
            .map(|c| c.to_uppercase().to_string())
            .unwrap_or_default();
        let attr = fresh_name(&format!("{var}{initial}"), &self.used);
        self.used.insert(attr.clone());
        self.unnested.insert(k, attr.clone());
        items.push(UnnestItem {
            var: var.to_owned(),
            key: key.to_owned(),
            attr: attr.clone(),
        });
        Ok(attr)
    }

    fn rewrite(&mut self, expr: &AlgebraExpr) -> Result<AlgebraExpr, RewriteError> {
        Ok(match expr {
            AlgebraExpr::GetVertices(_) | AlgebraExpr::GetEdges(_) => expr.clone(),
            AlgebraExpr::ExpandOut {
                child,
                from,
                to,
                to_label,
                edge_var,
                edge_type,
                length,
                path,
            } => {
                let left = self.rewrite(child)?;
                let src = VertexSlot {
                    var: from.clone(),
                    label: label_of(&left, from),
                    props: Vec::new(),
                };
                let tgt = VertexSlot {
                    var: to.clone(),
                    label: to_label.clone(),
                    props: Vec::new(),
                };
                match (length, path) {
                    (EdgeLength::One, None) => left.join(AlgebraExpr::GetEdges(GetEdges {
                        src,
                        edge: EdgeSlot {
                            var: edge_var.clone(),
                            edge_type: edge_type.clone(),
                            props: Vec::new(),
                        },
                        tgt,
                    })),
                    _ => {
                        let (min, max) = match length {
                            EdgeLength::One => (1, Some(1)),
                            EdgeLength::Variable { min, max } => (*min, *max),
                        };
                        AlgebraExpr::TransitiveJoin {
                            left: Box::new(left),
                            right: GetEdges {
                                src,
                                edge: EdgeSlot::new(None, edge_type.as_deref()),
                                tgt,
                            },
                            min,
                            max,
                            path: path.clone(),
                        }
                    }
                }
            }
            AlgebraExpr::Selection { child, predicate } => {
                let child = self.rewrite(child)?;
                let mut items = Vec::new();
                let mut conditions = Vec::with_capacity(predicate.conditions.len());
                for c in &predicate.conditions {
                    let mut side = |o: &Operand| -> Result<Operand, RewriteError> {
                        Ok(match o {
                            Operand::Property { var, key } => {
                                Operand::Attr(self.attr_for(var, key, &child, &mut items)?)
                            }
                            other => other.clone(),
                        })
                    };
                    let left = side(&c.left)?;
                    let right = side(&c.right)?;
                    conditions.push(Condition {
                        left,
                        op: c.op,
                        right,
                    });
                }
                wrap_unnest(child, items).select(Predicate { conditions })
            }
            AlgebraExpr::Projection { child, columns } => {
                let child = self.rewrite(child)?;
                let mut items = Vec::new();
                let mut out = Vec::with_capacity(columns.len());
                for c in columns {
                    let source = match &c.source {
                        ColumnSource::Property { var, key } => {
                            ColumnSource::Attr(self.attr_for(var, key, &child, &mut items)?)
                        }
                        other => other.clone(),
                    };
                    out.push(ProjectColumn {
                        source,
                        name: c.name.clone(),
                    });
                }
                wrap_unnest(child, items).project(out)
            }
            AlgebraExpr::Unnest { child, items } => {
                let child = self.rewrite(child)?;
                for i in items {
                    self.unnested
                        .insert((i.var.clone(), i.key.clone()), i.attr.clone());
                }
                AlgebraExpr::Unnest {
                    child: Box::new(child),
                    items: items.clone(),
                }
            }
            AlgebraExpr::NaturalJoin { left, right } => {
                let l = self.rewrite(left)?;
                let r = self.rewrite(right)?;
                l.join(r)
            }
            AlgebraExpr::TransitiveJoin {
                left,
                right,
                min,
                max,
                path,
            } => AlgebraExpr::TransitiveJoin {
                left: Box::new(self.rewrite(left)?),
                right: right.clone(),
                min: *min,
                max: *max,
                path: path.clone(),
            },
        })
    }
}

fn wrap_unnest(child: AlgebraExpr, items: Vec<UnnestItem>) -> AlgebraExpr {
    if items.is_empty() {
        child
    } else {
        AlgebraExpr::Unnest {
            child: Box::new(child),
            items,
        }
    }
}

fn expect_dialect(
    expr: &AlgebraExpr,
    pass: &'static str,
    allowed: Dialect,
) -> Result<(), RewriteError> {
    let actual = dialect_of(expr);
    if actual < allowed {
        return Err(RewriteError::DialectMismatch {
            pass,
            expected: allowed.name(),
            actual: actual.name(),
        });
    }
    Ok(())
}

/// GRA → NRA. Expressions without expansions or property reads are returned
/// unchanged.
pub fn expand_to_joins(gra: &AlgebraExpr) -> Result<AlgebraExpr, RewriteError> {
    expect_dialect(gra, "expand_to_joins", Dialect::Gra)?;
    let out = Unnester::new(gra).rewrite(gra)?;
    debug_assert!(dialect_of(&out) >= Dialect::Nra);
    Ok(out)
}

/// NRA → FRA: every unnest item becomes a property request on the base
/// operator that binds its variable.
pub fn push_down_properties(nra: &AlgebraExpr) -> Result<AlgebraExpr, RewriteError> {
    expect_dialect(nra, "push_down_properties", Dialect::Nra)?;
    let mut items = Vec::new();
    let mut out = strip_unnests(nra, &mut items);
    for item in items {
        let request = PropRequest {
            key: item.key.clone(),
            attr: item.attr.clone(),
        };
        if !attach(&mut out, &item.var, request) {
            return Err(RewriteError::AmbiguousBinding {
                var: item.var,
                key: item.key,
                reason: "no base operator binds the variable".into(),
            });
        }
    }
    Ok(out)
}

fn strip_unnests(expr: &AlgebraExpr, items: &mut Vec<UnnestItem>) -> AlgebraExpr {
    match expr {
        AlgebraExpr::Unnest { child, items: own } => {
            let child = strip_unnests(child, items);
            items.extend(own.iter().cloned());
            child
        }
        AlgebraExpr::GetVertices(_) | AlgebraExpr::GetEdges(_) => expr.clone(),
        AlgebraExpr::ExpandOut { .. } => unreachable!("checked by expect_dialect"),
        AlgebraExpr::Selection { child, predicate } => {
            strip_unnests(child, items).select(predicate.clone())
        }
        AlgebraExpr::Projection { child, columns } => {
            strip_unnests(child, items).project(columns.clone())
        }
        AlgebraExpr::NaturalJoin { left, right } => {
            let l = strip_unnests(left, items);
            l.join(strip_unnests(right, items))
        }
        AlgebraExpr::TransitiveJoin {
            left,
            right,
            min,
            max,
            path,
        } => AlgebraExpr::TransitiveJoin {
            left: Box::new(strip_unnests(left, items)),
            right: right.clone(),
            min: *min,
            max: *max,
            path: path.clone(),
        },
    }
}

fn add_request(props: &mut Vec<PropRequest>, request: PropRequest) {
    if !props.contains(&request) {
        props.push(request);
    }
}

// Attaches `request` to the leftmost base operator introducing `var`. The
// source of a transitive join's get-edges is a join key bound on the left.
fn attach(expr: &mut AlgebraExpr, var: &str, request: PropRequest) -> bool {
    match expr {
        AlgebraExpr::GetVertices(slot) => {
            if slot.var == var {
                add_request(&mut slot.props, request);
                return true;
            }
            false
        }
        AlgebraExpr::GetEdges(g) => {
            if g.src.var == var {
                add_request(&mut g.src.props, request);
            } else if g.edge.var.as_deref() == Some(var) {
                add_request(&mut g.edge.props, request);
            } else if g.tgt.var == var {
                add_request(&mut g.tgt.props, request);
            } else {
                return false;
            }
            true
        }
        AlgebraExpr::Selection { child, .. } | AlgebraExpr::Projection { child, .. } => {
            attach(child, var, request)
        }
        AlgebraExpr::NaturalJoin { left, right } => {
            attach(left, var, request.clone()) || attach(right, var, request)
        }
        AlgebraExpr::TransitiveJoin { left, right, .. } => {
            if attach(left, var, request.clone()) {
                return true;
            }
            if right.tgt.var == var {
                add_request(&mut right.tgt.props, request);
                return true;
            }
            false
        }
        AlgebraExpr::ExpandOut { .. } | AlgebraExpr::Unnest { .. } => false,
    }
}
