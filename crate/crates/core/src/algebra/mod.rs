//! One expression tree for all three algebra dialects.
//!
//! * GRA (graph relational algebra) navigates with `ExpandOut` and reads
//!   properties with `var.key` operands.
//! * NRA (nested relational algebra) replaces navigation by joins with
//!   get-edges and reads properties only through `Unnest`.
//! * FRA (flat relational algebra) has neither: properties are requested by
//!   the nullary base operators themselves.
//!
//! [`dialect_of`] reports the most restrictive dialect a tree belongs to, so
//! each rewrite pass can check its input and output.

mod pretty;
mod schema;

pub use pretty::pretty;
pub use schema::{schema_of, AttrKind, Attribute, Schema};

use crate::query::EdgeLength;
use crate::semantics::CmpOp;
use crate::value::Value;

/// `key -> attribute`: a property a base operator must include in its output.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PropRequest {
    pub key: String,
    pub attr: String,
}

impl PropRequest {
    pub fn new(key: &str, attr: &str) -> Self {
        PropRequest {
            key: key.to_owned(),
            attr: attr.to_owned(),
        }
    }
}

/// A vertex position of a base operator: variable, optional label and
/// requested properties.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSlot {
    pub var: String,
    pub label: Option<String>,
    pub props: Vec<PropRequest>,
}

impl VertexSlot {
    pub fn new(var: &str, label: Option<&str>) -> Self {
        VertexSlot {
            var: var.to_owned(),
            label: label.map(str::to_owned),
            props: Vec::new(),
        }
    }
}

/// The edge position of get-edges. Without a variable the edge is not part
/// of the output schema; parallel edges still count through multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeSlot {
    pub var: Option<String>,
    pub edge_type: Option<String>,
    pub props: Vec<PropRequest>,
}

impl EdgeSlot {
    pub fn new(var: Option<&str>, edge_type: Option<&str>) -> Self {
        EdgeSlot {
            var: var.map(str::to_owned),
            edge_type: edge_type.map(str::to_owned),
            props: Vec::new(),
        }
    }
}

/// get-edges: triples `(src, edge, tgt)` for every edge of the given type
/// between vertices with the given labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GetEdges {
    pub src: VertexSlot,
    pub edge: EdgeSlot,
    pub tgt: VertexSlot,
}

/// An operand of a selection condition.
#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    Attr(String),
    /// `var.key`; only legal in GRA.
    Property {
        var: String,
        key: String,
    },
    Literal(Value),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub left: Operand,
    pub op: CmpOp,
    pub right: Operand,
}

/// A conjunction of conditions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Predicate {
    pub conditions: Vec<Condition>,
}

impl Predicate {
    /// Evaluates the conjunction, resolving every operand through `resolve`.
    /// An empty predicate holds.
    pub fn holds(&self, mut resolve: impl FnMut(&Operand) -> Value) -> bool {
        self.conditions
            .iter()
            .all(|c| c.op.apply(&resolve(&c.left), &resolve(&c.right)))
    }
}

/// Source of a projected column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSource {
    Attr(String),
    /// `var.key`; only legal in GRA.
    Property {
        var: String,
        key: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectColumn {
    pub source: ColumnSource,
    pub name: String,
}

/// `var.key -> attr`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnnestItem {
    pub var: String,
    pub key: String,
    pub attr: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraExpr {
    GetVertices(VertexSlot),
    GetEdges(GetEdges),
    /// Navigates from `from` along outgoing `edge_type` edges to `to`. With a
    /// `path` accumulator the traversed hops are appended to that path
    /// attribute (created starting at `from` if the child lacks it).
    ExpandOut {
        child: Box<AlgebraExpr>,
        from: String,
        to: String,
        to_label: Option<String>,
        edge_var: Option<String>,
        edge_type: Option<String>,
        length: EdgeLength,
        path: Option<String>,
    },
    Selection {
        child: Box<AlgebraExpr>,
        predicate: Predicate,
    },
    Projection {
        child: Box<AlgebraExpr>,
        columns: Vec<ProjectColumn>,
    },
    Unnest {
        child: Box<AlgebraExpr>,
        items: Vec<UnnestItem>,
    },
    NaturalJoin {
        left: Box<AlgebraExpr>,
        right: Box<AlgebraExpr>,
    },
    /// Joins `left` with the edge-distinct paths of `min..=max` hops that
    /// start at `right.src.var`. Hops follow edges of `right.edge.edge_type`;
    /// the start must satisfy `right.src`'s label and the end `right.tgt`'s.
    TransitiveJoin {
        left: Box<AlgebraExpr>,
        right: GetEdges,
        min: u32,
        max: Option<u32>,
        path: Option<String>,
    },
}

/// The three algebra dialects, ordered from most to least expressive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dialect {
    Gra,
    Nra,
    Fra,
}

impl Dialect {
    pub fn name(self) -> &'static str {
        match self {
            Dialect::Gra => "GRA",
            Dialect::Nra => "NRA",
            Dialect::Fra => "FRA",
        }
    }
}

impl AlgebraExpr {
    pub fn get_vertices(var: &str, label: Option<&str>) -> Self {
        AlgebraExpr::GetVertices(VertexSlot::new(var, label))
    }

    pub fn select(self, predicate: Predicate) -> Self {
        AlgebraExpr::Selection {
            child: Box::new(self),
            predicate,
        }
    }

    pub fn project(self, columns: Vec<ProjectColumn>) -> Self {
        AlgebraExpr::Projection {
            child: Box::new(self),
            columns,
        }
    }

    pub fn join(self, right: AlgebraExpr) -> Self {
        AlgebraExpr::NaturalJoin {
            left: Box::new(self),
            right: Box::new(right),
        }
    }

    pub fn children(&self) -> Vec<&AlgebraExpr> {
        match self {
            AlgebraExpr::GetVertices(_) | AlgebraExpr::GetEdges(_) => vec![],
            AlgebraExpr::ExpandOut { child, .. }
            | AlgebraExpr::Selection { child, .. }
            | AlgebraExpr::Projection { child, .. }
            | AlgebraExpr::Unnest { child, .. } => vec![child],
            AlgebraExpr::NaturalJoin { left, right } => vec![left, right],
            AlgebraExpr::TransitiveJoin { left, .. } => vec![left],
        }
    }

    /// Pre-order visit of every node.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a AlgebraExpr)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// All property requests of nullary operators, as `(var, key, attr)`.
    pub fn prop_requests(&self) -> Vec<(String, String, String)> {
        let mut out = Vec::new();
        let mut slot = |var: &str, props: &[PropRequest]| {
            for p in props {
                out.push((var.to_owned(), p.key.clone(), p.attr.clone()));
            }
        };
        let mut leaves = Vec::new();
        self.visit(&mut |e| match e {
            AlgebraExpr::GetVertices(v) => leaves.push(Leaf::V(v)),
            AlgebraExpr::GetEdges(g) => leaves.push(Leaf::E(g)),
            AlgebraExpr::TransitiveJoin { right, .. } => leaves.push(Leaf::E(right)),
            _ => {}
        });
        for leaf in leaves {
            match leaf {
                Leaf::V(v) => slot(&v.var, &v.props),
                Leaf::E(g) => {
                    slot(&g.src.var, &g.src.props);
                    if let Some(var) = &g.edge.var {
                        slot(var, &g.edge.props);
                    }
                    slot(&g.tgt.var, &g.tgt.props);
                }
            }
        }
        out
    }
}

enum Leaf<'a> {
    V(&'a VertexSlot),
    E(&'a GetEdges),
}

/// The most restrictive dialect `expr` satisfies.
pub fn dialect_of(expr: &AlgebraExpr) -> Dialect {
    let mut dialect = Dialect::Fra;
    expr.visit(&mut |e| {
        let here = match e {
            AlgebraExpr::ExpandOut { .. } => Dialect::Gra,
            AlgebraExpr::Selection { predicate, .. }
                if predicate.conditions.iter().any(|c| {
                    matches!(c.left, Operand::Property { .. })
                        || matches!(c.right, Operand::Property { .. })
                }) =>
            {
                Dialect::Gra
            }
            AlgebraExpr::Projection { columns, .. }
                if columns
                    .iter()
                    .any(|c| matches!(c.source, ColumnSource::Property { .. })) =>
            {
                Dialect::Gra
            }
            AlgebraExpr::Unnest { .. } => Dialect::Nra,
            _ => Dialect::Fra,
        };
        dialect = dialect.min(here);
    });
    dialect
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn get_vertices_alone_is_flat() {
        assert_eq!(
            dialect_of(&AlgebraExpr::get_vertices("n", None)),
            Dialect::Fra
        );
    }

    #[test]
    fn property_access_is_graph_dialect() {
        let e = AlgebraExpr::get_vertices("a", Some("Post")).select(Predicate {
            conditions: vec![Condition {
                left: Operand::Property {
                    var: "a".into(),
                    key: "lang".into(),
                },
                op: CmpOp::Eq,
                right: Operand::Literal("en".into()),
            }],
        });
        assert_eq!(dialect_of(&e), Dialect::Gra);
    }

    #[test]
    fn unnest_is_nested_dialect() {
        let e = AlgebraExpr::Unnest {
            child: Box::new(AlgebraExpr::get_vertices("a", None)),
            items: vec![UnnestItem {
                var: "a".into(),
                key: "x".into(),
                attr: "aX".into(),
            }],
        };
        assert_eq!(dialect_of(&e), Dialect::Nra);
    }
}
