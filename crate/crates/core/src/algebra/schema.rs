use std::fmt;

use super::{AlgebraExpr, ColumnSource, GetEdges, Operand, PropRequest, VertexSlot};
use crate::error::SchemaError;
use crate::query::EdgeLength;

/// Domain of an attribute of a graph relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttrKind {
    Vertex,
    Edge,
    Path,
    /// Property values (atomic values or bags of them).
    Atomic,
}

impl fmt::Display for AttrKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttrKind::Vertex => "vertex",
            AttrKind::Edge => "edge",
            AttrKind::Path => "path",
            AttrKind::Atomic => "atomic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Attribute {
    pub name: String,
    pub kind: AttrKind,
}

/// Ordered attribute list of a relation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schema {
    pub attrs: Vec<Attribute>,
}

impl Schema {
    pub fn position(&self, name: &str) -> Option<usize> {
        self.attrs.iter().position(|a| a.name == name)
    }

    pub fn get(&self, name: &str) -> Option<&Attribute> {
        self.attrs.iter().find(|a| a.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    pub fn names(&self) -> Vec<String> {
        self.attrs.iter().map(|a| a.name.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.attrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attrs.is_empty()
    }

    fn push(&mut self, name: &str, kind: AttrKind, node: &str) -> Result<(), SchemaError> {
        if self.contains(name) {
            return Err(SchemaError::DuplicateAttribute {
                name: name.to_owned(),
                node: node.to_owned(),
            });
        }
        self.attrs.push(Attribute {
            name: name.to_owned(),
            kind,
        });
        Ok(())
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.attrs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}: {}", a.name, a.kind)?;
        }
        f.write_str("]")
    }
}

fn node_name(expr: &AlgebraExpr) -> &'static str {
    match expr {
        AlgebraExpr::GetVertices(_) => "get-vertices",
        AlgebraExpr::GetEdges(_) => "get-edges",
        AlgebraExpr::ExpandOut { .. } => "expand-out",
        AlgebraExpr::Selection { .. } => "selection",
        AlgebraExpr::Projection { .. } => "projection",
        AlgebraExpr::Unnest { .. } => "unnest",
        AlgebraExpr::NaturalJoin { .. } => "join",
        AlgebraExpr::TransitiveJoin { .. } => "transitive join",
    }
}

fn push_props(schema: &mut Schema, props: &[PropRequest], node: &str) -> Result<(), SchemaError> {
    for p in props {
        schema.push(&p.attr, AttrKind::Atomic, node)?;
    }
    Ok(())
}

fn slot_schema(slot: &VertexSlot) -> Result<Schema, SchemaError> {
    let mut s = Schema::default();
    s.push(&slot.var, AttrKind::Vertex, "get-vertices")?;
    push_props(&mut s, &slot.props, "get-vertices")?;
    Ok(s)
}

pub(crate) fn get_edges_schema(g: &GetEdges) -> Result<Schema, SchemaError> {
    let node = "get-edges";
    let mut s = Schema::default();
    s.push(&g.src.var, AttrKind::Vertex, node)?;
    if let Some(e) = &g.edge.var {
        s.push(e, AttrKind::Edge, node)?;
    } else if !g.edge.props.is_empty() {
        return Err(SchemaError::Malformed {
            node: node.into(),
            reason: "edge properties requested without an edge variable".into(),
        });
    }
    s.push(&g.tgt.var, AttrKind::Vertex, node)?;
    push_props(&mut s, &g.src.props, node)?;
    push_props(&mut s, &g.edge.props, node)?;
    push_props(&mut s, &g.tgt.props, node)?;
    Ok(s)
}

fn require(schema: &Schema, name: &str, node: &str) -> Result<AttrKind, SchemaError> {
    schema
        .get(name)
        .map(|a| a.kind)
        .ok_or_else(|| SchemaError::UnknownAttribute {
            name: name.to_owned(),
            node: node.to_owned(),
        })
}

fn require_element(schema: &Schema, var: &str, node: &str) -> Result<(), SchemaError> {
    match require(schema, var, node)? {
        AttrKind::Vertex | AttrKind::Edge => Ok(()),
        kind => Err(SchemaError::Malformed {
            node: node.to_owned(),
            reason: format!("`{var}` is a {kind} attribute and has no properties"),
        }),
    }
}

fn require_kind(
    schema: &Schema,
    name: &str,
    kind: AttrKind,
    node: &str,
) -> Result<(), SchemaError> {
    let actual = require(schema, name, node)?;
    if actual != kind {
        return Err(SchemaError::Malformed {
            node: node.to_owned(),
            reason: format!("`{name}` is a {actual} attribute, expected {kind}"),
        });
    }
    Ok(())
}

// Adds the path accumulator unless the child already carries it.
fn push_path(schema: &mut Schema, path: &Option<String>, node: &str) -> Result<(), SchemaError> {
    if let Some(p) = path {
        if schema.contains(p) {
            require_kind(schema, p, AttrKind::Path, node)?;
        } else {
            schema.push(p, AttrKind::Path, node)?;
        }
    }
    Ok(())
}

fn check_bounds(min: u32, max: Option<u32>, node: &str) -> Result<(), SchemaError> {
    if min == 0 || max.is_some_and(|m| m < min) {
        return Err(SchemaError::Malformed {
            node: node.to_owned(),
            reason: format!("invalid hop bounds {min}..{max:?}"),
        });
    }
    Ok(())
}

/// Computes the output schema of `expr`: child attributes first, newly
/// introduced attributes appended in the order the operator defines them.
pub fn schema_of(expr: &AlgebraExpr) -> Result<Schema, SchemaError> {
    let node = node_name(expr);
    match expr {
        AlgebraExpr::GetVertices(slot) => slot_schema(slot),
        AlgebraExpr::GetEdges(g) => get_edges_schema(g),
        AlgebraExpr::ExpandOut {
            child,
            from,
            to,
            edge_var,
            length,
            path,
            ..
        } => {
            let mut s = schema_of(child)?;
            require_kind(&s, from, AttrKind::Vertex, node)?;
            match length {
                EdgeLength::One => {
                    if let Some(e) = edge_var {
                        s.push(e, AttrKind::Edge, node)?;
                    }
                }
                EdgeLength::Variable { min, max } => {
                    check_bounds(*min, *max, node)?;
                    if edge_var.is_some() {
                        return Err(SchemaError::Malformed {
                            node: node.into(),
                            reason: "variable-length expansion cannot bind an edge variable".into(),
                        });
                    }
                }
            }
            s.push(to, AttrKind::Vertex, node)?;
            push_path(&mut s, path, node)?;
            Ok(s)
        }
        AlgebraExpr::Selection { child, predicate } => {
            let s = schema_of(child)?;
            for c in &predicate.conditions {
                for o in [&c.left, &c.right] {
                    match o {
                        Operand::Attr(a) => {
                            require(&s, a, node)?;
                        }
                        Operand::Property { var, .. } => require_element(&s, var, node)?,
                        Operand::Literal(_) => {}
                    }
                }
            }
            Ok(s)
        }
        AlgebraExpr::Projection { child, columns } => {
            let s = schema_of(child)?;
            let mut out = Schema::default();
            for c in columns {
                let kind = match &c.source {
                    ColumnSource::Attr(a) => require(&s, a, node)?,
                    ColumnSource::Property { var, .. } => {
                        require_element(&s, var, node)?;
                        AttrKind::Atomic
                    }
                };
                out.push(&c.name, kind, node)?;
            }
            Ok(out)
        }
        AlgebraExpr::Unnest { child, items } => {
            let mut s = schema_of(child)?;
            for item in items {
                require_element(&s, &item.var, node)?;
                s.push(&item.attr, AttrKind::Atomic, node)?;
            }
            Ok(s)
        }
        AlgebraExpr::NaturalJoin { left, right } => {
            let mut s = schema_of(left)?;
            let r = schema_of(right)?;
            for a in r.attrs {
                match s.get(&a.name) {
                    Some(existing) if existing.kind != a.kind => {
                        return Err(SchemaError::Malformed {
                            node: node.into(),
                            reason: format!(
                                "shared attribute `{}` is {} on the left and {} on the right",
                                a.name, existing.kind, a.kind
                            ),
                        })
                    }
                    Some(_) => {}
                    None => s.attrs.push(a),
                }
            }
            Ok(s)
        }
        AlgebraExpr::TransitiveJoin {
            left,
            right,
            min,
            max,
            path,
        } => {
            check_bounds(*min, *max, node)?;
            if right.edge.var.is_some()
                || !right.edge.props.is_empty()
                || !right.src.props.is_empty()
            {
                return Err(SchemaError::Malformed {
                    node: node.into(),
                    reason: "only the target of a transitive join may carry attributes".into(),
                });
            }
            let mut s = schema_of(left)?;
            require_kind(&s, &right.src.var, AttrKind::Vertex, node)?;
            s.push(&right.tgt.var, AttrKind::Vertex, node)?;
            push_props(&mut s, &right.tgt.props, node)?;
            push_path(&mut s, path, node)?;
            Ok(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Condition, Predicate};
    use crate::semantics::CmpOp;

    #[test]
    fn get_vertices_schema() {
        let s = schema_of(&AlgebraExpr::get_vertices("p", Some("Post"))).unwrap();
        assert_eq!(s.to_string(), "[p: vertex]");
    }

    #[test]
    fn unknown_attribute_in_selection() {
        let e = AlgebraExpr::get_vertices("p", None).select(Predicate {
            conditions: vec![Condition {
                left: Operand::Attr("x".into()),
                op: CmpOp::Eq,
                right: Operand::Literal(1.into()),
            }],
        });
        assert_eq!(
            schema_of(&e),
            Err(SchemaError::UnknownAttribute {
                name: "x".into(),
                node: "selection".into()
            })
        );
    }

    #[test]
    fn join_keeps_shared_attribute_once() {
        let right = AlgebraExpr::GetEdges(GetEdges {
            src: VertexSlot::new("a", None),
            edge: super::super::EdgeSlot::new(Some("r"), Some("R")),
            tgt: VertexSlot::new("b", None),
        });
        let e = AlgebraExpr::get_vertices("a", None).join(right);
        assert_eq!(
            schema_of(&e).unwrap().to_string(),
            "[a: vertex, r: edge, b: vertex]"
        );
    }
}
