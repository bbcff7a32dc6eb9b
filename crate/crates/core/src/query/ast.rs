use std::fmt;

use crate::semantics::CmpOp;
use crate::value::Value;

/// `MATCH pattern [WHERE conjunction] RETURN items`
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub pattern: PatternGraph,
    pub where_clause: Option<BoolExpr>,
    pub return_items: Vec<ReturnItem>,
}

/// A linear pattern `(n0)-[e0]->(n1)-[e1]->…`, optionally bound to a path variable.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternGraph {
    pub path_binding: Option<String>,
    pub nodes: Vec<PatternNode>,
    /// `edges[i]` connects `nodes[i]` to `nodes[i + 1]`.
    pub edges: Vec<PatternEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternNode {
    pub var: Option<String>,
    pub label: Option<String>,
}

/// An outgoing relationship pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternEdge {
    pub var: Option<String>,
    pub edge_type: Option<String>,
    pub length: EdgeLength,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeLength {
    One,
    /// `*min..max`; `min >= 1`, `max == None` is unbounded.
    Variable {
        min: u32,
        max: Option<u32>,
    },
}

/// A conjunction of comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct BoolExpr {
    pub comparisons: Vec<Comparison>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub left: Operand,
    pub op: CmpOp,
    pub right: Operand,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    Property { var: String, key: String },
    Literal(Value),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReturnExpr {
    Variable(String),
    Property { var: String, key: String },
}

impl ReturnExpr {
    pub fn var(&self) -> &str {
        match self {
            ReturnExpr::Variable(v) | ReturnExpr::Property { var: v, .. } => v,
        }
    }

    /// The column name used when no alias is given.
    pub fn default_name(&self) -> String {
        match self {
            ReturnExpr::Variable(v) => v.clone(),
            ReturnExpr::Property { var, key } => format!("{var}.{key}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnItem {
    pub expr: ReturnExpr,
    pub name: String,
}

impl Query {
    /// Every `variable.property` pair the query reads, in first-use order.
    pub fn property_refs(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        let mut push = |var: &str, key: &str| {
            if !out.iter().any(|(v, k)| v == var && k == key) {
                out.push((var.to_owned(), key.to_owned()));
            }
        };
        if let Some(w) = &self.where_clause {
            for c in &w.comparisons {
                for o in [&c.left, &c.right] {
                    if let Operand::Property { var, key } = o {
                        push(var, key);
                    }
                }
            }
        }
        for item in &self.return_items {
            if let ReturnExpr::Property { var, key } = &item.expr {
                push(var, key);
            }
        }
        out
    }
}

const KEYWORDS: &[&str] = &[
    "match",
    "optional",
    "where",
    "return",
    "with",
    "unwind",
    "and",
    "or",
    "xor",
    "not",
    "as",
    "order",
    "by",
    "skip",
    "limit",
    "distinct",
    "true",
    "false",
    "null",
    "create",
    "merge",
    "delete",
    "detach",
    "set",
    "remove",
    "call",
    "union",
    "is",
    "in",
    "starts",
    "ends",
    "contains",
    "asc",
    "desc",
    "ascending",
    "descending",
    "yield",
    "case",
    "when",
    "then",
    "else",
    "end",
];

pub(crate) fn is_keyword(word: &str) -> bool {
    KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(word))
}

pub(crate) fn is_plain_identifier(word: &str) -> bool {
    let mut chars = word.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Writes an identifier, backtick-quoting it when it would not lex as one.
pub(crate) struct Ident<'a>(pub &'a str);

impl fmt::Display for Ident<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if is_plain_identifier(self.0) && !is_keyword(self.0) {
            f.write_str(self.0)
        } else {
            write!(f, "`{}`", self.0.replace('`', "``"))
        }
    }
}

impl fmt::Display for EdgeLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            EdgeLength::One => Ok(()),
            EdgeLength::Variable { min: 1, max: None } => f.write_str("*"),
            EdgeLength::Variable { min, max: None } => write!(f, "*{min}.."),
            EdgeLength::Variable {
                min,
                max: Some(max),
            } if min == max => write!(f, "*{min}"),
            EdgeLength::Variable {
                min,
                max: Some(max),
            } => write!(f, "*{min}..{max}"),
        }
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Property { var, key } => write!(f, "{}.{}", Ident(var), Ident(key)),
            Operand::Literal(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.left, self.op, self.right)
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.comparisons.iter().enumerate() {
            if i > 0 {
                f.write_str(" AND ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Display for PatternNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        if let Some(v) = &self.var {
            write!(f, "{}", Ident(v))?;
        }
        if let Some(l) = &self.label {
            write!(f, ":{}", Ident(l))?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for PatternEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("-[")?;
        if let Some(v) = &self.var {
            write!(f, "{}", Ident(v))?;
        }
        if let Some(t) = &self.edge_type {
            write!(f, ":{}", Ident(t))?;
        }
        write!(f, "{}]->", self.length)
    }
}

impl fmt::Display for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = &self.path_binding {
            write!(f, "{} = ", Ident(p))?;
        }
        write!(f, "{}", self.nodes[0])?;
        for (edge, node) in self.edges.iter().zip(&self.nodes[1..]) {
            write!(f, "{edge}{node}")?;
        }
        Ok(())
    }
}

impl fmt::Display for ReturnItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.expr {
            ReturnExpr::Variable(v) => write!(f, "{}", Ident(v))?,
            ReturnExpr::Property { var, key } => write!(f, "{}.{}", Ident(var), Ident(key))?,
        }
        if self.name != self.expr.default_name() {
            write!(f, " AS {}", Ident(&self.name))?;
        }
        Ok(())
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MATCH {}", self.pattern)?;
        if let Some(w) = &self.where_clause {
            write!(f, " WHERE {w}")?;
        }
        f.write_str(" RETURN ")?;
        for (i, item) in self.return_items.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{item}")?;
        }
        Ok(())
    }
}
