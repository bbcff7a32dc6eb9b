use std::collections::HashMap;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::QueryError;
use crate::semantics::CmpOp;
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarKind {
    Node,
    Edge,
    Path,
}

const AGGREGATES: &[&str] = &[
    "count", "sum", "avg", "min", "max", "collect", "stdev", "stdevp",
];

// Clause keywords that are recognized but outside the fragment.
const UNSUPPORTED_CLAUSES: &[(&str, &str)] = &[
    ("with", "WITH"),
    ("unwind", "UNWIND"),
    ("skip", "SKIP"),
    ("limit", "LIMIT"),
    ("create", "CREATE"),
    ("merge", "MERGE"),
    ("delete", "DELETE"),
    ("detach", "DETACH DELETE"),
    ("set", "SET"),
    ("remove", "REMOVE"),
    ("call", "CALL"),
    ("union", "UNION"),
];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    vars: HashMap<String, VarKind>,
}

/// Parses a query of the supported fragment.
pub fn parse(text: &str) -> Result<Query, QueryError> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        vars: HashMap::new(),
    };
    p.query()
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Token {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn check(&self, tok: &Tok) -> bool {
        &self.peek().tok == tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.check(tok) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.peek().is_keyword(kw) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn syntax_at(&self, t: &Token, message: impl Into<String>) -> QueryError {
        QueryError::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn unsupported_at(&self, t: &Token, construct: impl Into<String>) -> QueryError {
        QueryError::Unsupported {
            line: t.line,
            column: t.column,
            construct: construct.into(),
        }
    }

    fn expected(&self, what: &str) -> QueryError {
        let t = self.peek();
        let found = match &t.tok {
            Tok::Eof => "end of input".to_string(),
            Tok::Ident { name, .. } => format!("`{name}`"),
            other => format!("{other:?}"),
        };
        self.syntax_at(t, format!("expected {what}, found {found}"))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token, QueryError> {
        if self.check(&tok) {
            Ok(self.advance())
        } else {
            Err(self.expected(what))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), QueryError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.expected(kw))
        }
    }

    fn identifier(&mut self, what: &str) -> Result<String, QueryError> {
        match &self.peek().tok {
            Tok::Ident { name, .. } => {
                let name = name.clone();
                self.advance();
                Ok(name)
            }
            _ => Err(self.expected(what)),
        }
    }

    /// Fails with `UnsupportedFeature` if the next token opens a clause the
    /// fragment excludes.
    fn reject_unsupported_clause(&self) -> Result<(), QueryError> {
        let t = self.peek();
        if t.is_keyword("optional") {
            return Err(self.unsupported_at(t, "OPTIONAL MATCH"));
        }
        if t.is_keyword("order") {
            return Err(self.unsupported_at(t, "ORDER BY"));
        }
        for (kw, name) in UNSUPPORTED_CLAUSES {
            if t.is_keyword(kw) {
                return Err(self.unsupported_at(t, *name));
            }
        }
        Ok(())
    }

    fn query(&mut self) -> Result<Query, QueryError> {
        self.reject_unsupported_clause()?;
        self.expect_keyword("match")?;
        let pattern = self.pattern()?;
        if self.check(&Tok::Comma) {
            return Err(self.unsupported_at(self.peek(), "multiple comma-separated patterns"));
        }
        if self.peek().is_keyword("match") {
            return Err(self.unsupported_at(self.peek(), "multiple MATCH clauses"));
        }
        self.reject_unsupported_clause()?;
        let where_clause = if self.eat_keyword("where") {
            Some(self.conjunction()?)
        } else {
            None
        };
        self.reject_unsupported_clause()?;
        if self.peek().is_keyword("match") {
            return Err(self.unsupported_at(self.peek(), "multiple MATCH clauses"));
        }
        self.expect_keyword("return")?;
        if self.peek().is_keyword("distinct") {
            return Err(self.unsupported_at(self.peek(), "DISTINCT"));
        }
        if self.check(&Tok::Star) {
            return Err(self.unsupported_at(self.peek(), "RETURN *"));
        }
        let mut return_items = vec![self.return_item()?];
        while self.eat(&Tok::Comma) {
            return_items.push(self.return_item()?);
        }
        let mut names: Vec<&str> = Vec::new();
        for item in &return_items {
            if names.contains(&item.name.as_str()) {
                let t = self.peek().clone();
                return Err(
                    self.syntax_at(&t, format!("duplicate RETURN column name `{}`", item.name))
                );
            }
            names.push(&item.name);
        }
        self.reject_unsupported_clause()?;
        self.eat(&Tok::Semicolon);
        if !self.check(&Tok::Eof) {
            return Err(self.expected("end of query"));
        }
        Ok(Query {
            pattern,
            where_clause,
            return_items,
        })
    }

    fn bind(&mut self, name: &str, kind: VarKind, at: &Token) -> Result<(), QueryError> {
        if self.vars.insert(name.to_owned(), kind).is_some() {
            return Err(QueryError::DuplicateVariable {
                line: at.line,
                column: at.column,
                name: name.to_owned(),
            });
        }
        Ok(())
    }

    fn pattern(&mut self) -> Result<PatternGraph, QueryError> {
        let mut path_binding = None;
        if matches!(self.peek().tok, Tok::Ident { .. }) && self.peek_at(1).tok == Tok::Eq {
            let at = self.peek().clone();
            let name = self.identifier("path variable")?;
            self.advance();
            self.bind(&name, VarKind::Path, &at)?;
            path_binding = Some((name, at));
        }
        let mut nodes = vec![self.node()?];
        let mut edges = Vec::new();
        loop {
            let t = self.peek().clone();
            match t.tok {
                Tok::Lt if self.peek_at(1).tok == Tok::Minus => {
                    return Err(self.unsupported_at(&t, "incoming relationship pattern"));
                }
                Tok::Minus => {
                    edges.push(self.relationship(path_binding.is_some())?);
                    nodes.push(self.node()?);
                }
                _ => break,
            }
        }
        if let Some((_, at)) = &path_binding {
            if edges.is_empty() {
                return Err(self.unsupported_at(at, "path binding without relationships"));
            }
        }
        Ok(PatternGraph {
            path_binding: path_binding.map(|(n, _)| n),
            nodes,
            edges,
        })
    }

    fn node(&mut self) -> Result<PatternNode, QueryError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut var = None;
        if matches!(self.peek().tok, Tok::Ident { .. }) {
            let at = self.peek().clone();
            let name = self.identifier("variable")?;
            self.bind(&name, VarKind::Node, &at)?;
            var = Some(name);
        }
        let mut label = None;
        if self.eat(&Tok::Colon) {
            label = Some(self.identifier("label")?);
            if self.check(&Tok::Colon) {
                return Err(self.unsupported_at(self.peek(), "multiple labels on one node"));
            }
        }
        if self.check(&Tok::LBrace) {
            return Err(self.unsupported_at(self.peek(), "inline property map"));
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(PatternNode { var, label })
    }

    fn relationship(&mut self, in_path: bool) -> Result<PatternEdge, QueryError> {
        let start = self.expect(Tok::Minus, "`-`")?;
        let mut var = None;
        let mut edge_type = None;
        let mut length = EdgeLength::One;
        if self.eat(&Tok::LBracket) {
            if matches!(self.peek().tok, Tok::Ident { .. }) {
                let at = self.peek().clone();
                let name = self.identifier("variable")?;
                var = Some((name, at));
            }
            if self.eat(&Tok::Colon) {
                edge_type = Some(self.identifier("relationship type")?);
                if self.check(&Tok::Pipe) {
                    return Err(self.unsupported_at(self.peek(), "alternative relationship types"));
                }
            }
            if self.check(&Tok::Star) {
                length = self.length()?;
            }
            if self.check(&Tok::LBrace) {
                return Err(self.unsupported_at(self.peek(), "inline property map"));
            }
            self.expect(Tok::RBracket, "`]`")?;
        }
        self.expect(Tok::Minus, "`-`")?;
        if !self.eat(&Tok::Gt) {
            return Err(self.unsupported_at(&start, "undirected relationship pattern"));
        }
        let var = match var {
            Some((name, at)) => {
                if matches!(length, EdgeLength::Variable { .. }) {
                    return Err(
                        self.unsupported_at(&at, "variable on a variable-length relationship")
                    );
                }
                if in_path {
                    return Err(
                        self.unsupported_at(&at, "named relationship inside a path binding")
                    );
                }
                self.bind(&name, VarKind::Edge, &at)?;
                Some(name)
            }
            None => None,
        };
        Ok(PatternEdge {
            var,
            edge_type,
            length,
        })
    }

    fn length(&mut self) -> Result<EdgeLength, QueryError> {
        let star = self.expect(Tok::Star, "`*`")?;
        let int = |p: &mut Self| -> Result<Option<u32>, QueryError> {
            match p.peek().tok {
                Tok::Int(n) => {
                    let t = p.advance();
                    u32::try_from(n)
                        .map(Some)
                        .map_err(|_| p.syntax_at(&t, "path length bound is too large"))
                }
                _ => Ok(None),
            }
        };
        let first = int(self)?;
        let (min, max) = if self.eat(&Tok::DotDot) {
            (first.unwrap_or(1), int(self)?)
        } else {
            match first {
                Some(n) => (n, Some(n)),
                None => (1, None),
            }
        };
        if min == 0 {
            return Err(self.unsupported_at(&star, "zero-length relationship pattern"));
        }
        if max.is_some_and(|m| m < min) {
            return Err(self.syntax_at(&star, "upper path length bound is below the lower bound"));
        }
        Ok(EdgeLength::Variable { min, max })
    }

    fn conjunction(&mut self) -> Result<BoolExpr, QueryError> {
        let mut comparisons = vec![self.comparison()?];
        loop {
            if self.eat_keyword("and") {
                comparisons.push(self.comparison()?);
                continue;
            }
            let t = self.peek();
            for kw in ["or", "xor"] {
                if t.is_keyword(kw) {
                    return Err(self.unsupported_at(t, kw.to_ascii_uppercase()));
                }
            }
            break;
        }
        Ok(BoolExpr { comparisons })
    }

    fn comparison(&mut self) -> Result<Comparison, QueryError> {
        let t = self.peek().clone();
        if t.is_keyword("not") {
            return Err(self.unsupported_at(&t, "NOT"));
        }
        let left = self.operand()?;
        let t = self.peek().clone();
        let op = match t.tok {
            Tok::Eq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            Tok::Plus | Tok::Minus | Tok::Star | Tok::Slash | Tok::Percent | Tok::Caret => {
                return Err(self.unsupported_at(&t, "arithmetic expression"))
            }
            _ if t.is_keyword("is") => return Err(self.unsupported_at(&t, "IS NULL test")),
            _ if ["in", "starts", "ends", "contains"]
                .iter()
                .any(|k| t.is_keyword(k)) =>
            {
                return Err(self.unsupported_at(&t, "string or list predicate"))
            }
            _ => return Err(self.expected("comparison operator")),
        };
        self.advance();
        let right = self.operand()?;
        let t = self.peek().clone();
        if matches!(
            t.tok,
            Tok::Plus | Tok::Minus | Tok::Star | Tok::Slash | Tok::Percent | Tok::Caret
        ) {
            return Err(self.unsupported_at(&t, "arithmetic expression"));
        }
        if matches!(
            t.tok,
            Tok::Eq | Tok::Ne | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge
        ) {
            return Err(self.unsupported_at(&t, "chained comparison"));
        }
        Ok(Comparison { left, op, right })
    }

    fn operand(&mut self) -> Result<Operand, QueryError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(_) | Tok::Float(_) | Tok::Str(_) | Tok::Minus => {
                Ok(Operand::Literal(self.literal()?))
            }
            Tok::Ident {
                quoted: false,
                name,
            } if ["true", "false"]
                .iter()
                .any(|k| name.eq_ignore_ascii_case(k)) =>
            {
                Ok(Operand::Literal(self.literal()?))
            }
            Tok::Ident {
                quoted: false,
                name,
            } if name.eq_ignore_ascii_case("null") => Err(self.unsupported_at(&t, "null literal")),
            Tok::Ident { .. } => {
                let (var, key) = self.property_access()?;
                match key {
                    Some(key) => Ok(Operand::Property { var, key }),
                    None => Err(self.unsupported_at(&t, "comparison on a bare variable")),
                }
            }
            Tok::Dollar => Err(self.unsupported_at(&t, "query parameter")),
            Tok::LBracket => Err(self.unsupported_at(&t, "list literal")),
            Tok::LBrace => Err(self.unsupported_at(&t, "map literal")),
            Tok::LParen => Err(self.unsupported_at(&t, "parenthesized expression")),
            _ => Err(self.expected("property access or literal")),
        }
    }

    fn literal(&mut self) -> Result<Value, QueryError> {
        let t = self.advance();
        match t.tok {
            Tok::Int(n) => i64::try_from(n)
                .map(Value::Int)
                .map_err(|_| self.syntax_at(&t, "integer literal is out of range")),
            Tok::Float(f) => Ok(Value::Float(f)),
            Tok::Str(s) => Ok(Value::Str(s)),
            Tok::Minus => {
                let n = self.advance();
                match n.tok {
                    Tok::Int(v) => {
                        let v = -(v as i128);
                        i64::try_from(v)
                            .map(Value::Int)
                            .map_err(|_| self.syntax_at(&n, "integer literal is out of range"))
                    }
                    Tok::Float(f) => Ok(Value::Float(-f)),
                    _ => Err(self.unsupported_at(&t, "arithmetic expression")),
                }
            }
            Tok::Ident { name, .. } => Ok(Value::Bool(name.eq_ignore_ascii_case("true"))),
            _ => Err(self.syntax_at(&t, "expected literal")),
        }
    }

    /// `var` or `var.key`, checking that `var` is bound and may be accessed.
    fn property_access(&mut self) -> Result<(String, Option<String>), QueryError> {
        let at = self.peek().clone();
        let var = self.identifier("variable")?;
        if self.check(&Tok::LParen) {
            let construct = if AGGREGATES.iter().any(|a| var.eq_ignore_ascii_case(a)) {
                format!("aggregation function {}()", var.to_ascii_lowercase())
            } else {
                format!("function call {var}()")
            };
            return Err(self.unsupported_at(&at, construct));
        }
        let Some(&kind) = self.vars.get(&var) else {
            return Err(QueryError::UnboundVariable {
                line: at.line,
                column: at.column,
                name: var,
            });
        };
        if !self.eat(&Tok::Dot) {
            return Ok((var, None));
        }
        let key = self.identifier("property key")?;
        if kind == VarKind::Path {
            return Err(QueryError::InvalidReference {
                line: at.line,
                column: at.column,
                message: format!("path variable `{var}` has no properties"),
            });
        }
        if self.check(&Tok::Dot) {
            return Err(self.unsupported_at(self.peek(), "nested property access"));
        }
        Ok((var, Some(key)))
    }

    fn return_item(&mut self) -> Result<ReturnItem, QueryError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident {
                quoted: false,
                name,
            } if AGGREGATES.iter().any(|a| name.eq_ignore_ascii_case(a))
                && self.peek_at(1).tok == Tok::LParen =>
            {
                return Err(self.unsupported_at(
                    &t,
                    format!("aggregation function {}()", name.to_ascii_lowercase()),
                ));
            }
            Tok::Ident { .. } => {}
            Tok::LBracket => return Err(self.unsupported_at(&t, "list literal in RETURN")),
            Tok::LBrace => return Err(self.unsupported_at(&t, "map literal in RETURN")),
            Tok::Int(_) | Tok::Float(_) | Tok::Str(_) | Tok::Minus => {
                return Err(self.unsupported_at(&t, "literal in RETURN"))
            }
            _ => return Err(self.expected("return item")),
        }
        let (var, key) = self.property_access()?;
        let t = self.peek().clone();
        if matches!(
            t.tok,
            Tok::Plus | Tok::Minus | Tok::Star | Tok::Slash | Tok::Percent | Tok::Caret
        ) {
            return Err(self.unsupported_at(&t, "arithmetic expression"));
        }
        if matches!(
            t.tok,
            Tok::Eq | Tok::Ne | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge
        ) {
            return Err(self.unsupported_at(&t, "comparison in RETURN"));
        }
        let expr = match key {
            Some(key) => ReturnExpr::Property { var, key },
            None => ReturnExpr::Variable(var),
        };
        let name = if self.eat_keyword("as") {
            self.identifier("column alias")?
        } else {
            expr.default_name()
        };
        Ok(ReturnItem { expr, name })
    }
}
