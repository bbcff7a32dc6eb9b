use std::fmt::Write;

use super::{
    AlgebraExpr, ColumnSource, Condition, EdgeSlot, GetEdges, Operand, PropRequest, VertexSlot,
};
use crate::query::EdgeLength;

/// Renders `expr` one operator per line, children indented by two spaces.
///
/// ```
/// use grapevine::algebra::{pretty, AlgebraExpr};
/// assert_eq!(pretty(&AlgebraExpr::get_vertices("p", Some("Post"))), "get-vertices(p:Post)\n");
/// ```
pub fn pretty(expr: &AlgebraExpr) -> String {
    let mut out = String::new();
    write_node(&mut out, expr, 0);
    out
}

fn write_node(out: &mut String, expr: &AlgebraExpr, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    out.push_str(&header(expr));
    out.push('\n');
    match expr {
        AlgebraExpr::TransitiveJoin { left, right, .. } => {
            write_node(out, left, depth + 1);
            for _ in 0..depth + 1 {
                out.push_str("  ");
            }
            out.push_str(&get_edges(right));
            out.push('\n');
        }
        _ => {
            for c in expr.children() {
                write_node(out, c, depth + 1);
            }
        }
    }
}

fn props(props: &[PropRequest]) -> String {
    if props.is_empty() {
        return String::new();
    }
    let items: Vec<String> = props
        .iter()
        .map(|p| format!("{}->{}", p.key, p.attr))
        .collect();
    format!(" {{{}}}", items.join(", "))
}

fn vertex(slot: &VertexSlot) -> String {
    let mut s = slot.var.clone();
    if let Some(l) = &slot.label {
        write!(s, ":{l}").unwrap();
    }
    s + &props(&slot.props)
}

fn edge(slot: &EdgeSlot) -> String {
    let ty = slot.edge_type.as_deref().unwrap_or("_");
    let s = match &slot.var {
        Some(v) => format!("{v}:{ty}"),
        None => ty.to_owned(),
    };
    s + &props(&slot.props)
}

fn get_edges(g: &GetEdges) -> String {
    format!(
        "get-edges({}, {}, {})",
        vertex(&g.src),
        edge(&g.edge),
        vertex(&g.tgt)
    )
}

fn bounds(min: u32, max: Option<u32>) -> String {
    match (min, max) {
        (1, None) => String::new(),
        (min, None) => format!("{min}.."),
        (min, Some(max)) => format!("{min}..{max}"),
    }
}

fn operand(o: &Operand) -> String {
    match o {
        Operand::Attr(a) => a.clone(),
        Operand::Property { var, key } => format!("{var}.{key}"),
        Operand::Literal(v) => v.to_string(),
    }
}

fn condition(c: &Condition) -> String {
    format!("{} {} {}", operand(&c.left), c.op, operand(&c.right))
}

fn header(expr: &AlgebraExpr) -> String {
    match expr {
        AlgebraExpr::GetVertices(slot) => format!("get-vertices({})", vertex(slot)),
        AlgebraExpr::GetEdges(g) => get_edges(g),
        AlgebraExpr::ExpandOut {
            from,
            to,
            to_label,
            edge_var,
            edge_type,
            length,
            path,
            ..
        } => {
            let star = match length {
                EdgeLength::One => String::new(),
                EdgeLength::Variable { min, max } => format!("*{}", bounds(*min, *max)),
            };
            let mut params = format!("{from}->{to}");
            if let Some(l) = to_label {
                write!(params, ":{l}").unwrap();
            }
            let slot = EdgeSlot {
                var: edge_var.clone(),
                edge_type: edge_type.clone(),
                props: Vec::new(),
            };
            write!(params, ", {}", edge(&slot)).unwrap();
            if let Some(p) = path {
                write!(params, ", path={p}").unwrap();
            }
            format!("expand-out{star}[{params}]")
        }
        AlgebraExpr::Selection { predicate, .. } => {
            let conds: Vec<String> = predicate.conditions.iter().map(condition).collect();
            format!("select[{}]", conds.join(" AND "))
        }
        AlgebraExpr::Projection { columns, .. } => {
            let cols: Vec<String> = columns
                .iter()
                .map(|c| {
                    let src = match &c.source {
                        ColumnSource::Attr(a) => a.clone(),
                        ColumnSource::Property { var, key } => format!("{var}.{key}"),
                    };
                    if src == c.name {
                        src
                    } else {
                        format!("{src} as {}", c.name)
                    }
                })
                .collect();
            format!("project[{}]", cols.join(", "))
        }
        AlgebraExpr::Unnest { items, .. } => {
            let items: Vec<String> = items
                .iter()
                .map(|i| format!("{}.{}->{}", i.var, i.key, i.attr))
                .collect();
            format!("unnest[{}]", items.join(", "))
        }
        AlgebraExpr::NaturalJoin { .. } => "join".to_owned(),
        AlgebraExpr::TransitiveJoin { min, max, path, .. } => {
            let mut s = format!("join*{}", bounds(*min, *max));
            if let Some(p) = path {
                write!(s, "[path={p}]").unwrap();
            }
            s
        }
    }
}
