//! Comparison semantics shared by every evaluator.
//!
//! Comparisons involving `Missing` are false. Ordering comparisons are only
//! defined between atomic values of the same type; across types (and on
//! bags, paths, vertices, edges) they are false. `=` and `<>` are structural,
//! so an integer never equals a float.

use std::cmp::Ordering;
use std::fmt;

use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "<>",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    /// True for `=` and `<>`, whose operands may be swapped.
    pub fn is_symmetric(self) -> bool {
        matches!(self, CmpOp::Eq | CmpOp::Ne)
    }

    pub fn apply(self, left: &Value, right: &Value) -> bool {
        compare(left, self, right)
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

fn same_atomic_order(left: &Value, right: &Value) -> Option<Ordering> {
    match (left, right) {
        (Value::Bool(a), Value::Bool(b)) => Some(a.cmp(b)),
        (Value::Int(a), Value::Int(b)) => Some(a.cmp(b)),
        (Value::Float(a), Value::Float(b)) => a.partial_cmp(b),
        (Value::Str(a), Value::Str(b)) => Some(a.cmp(b)),
        _ => None,
    }
}

/// Evaluates `left op right`.
pub fn compare(left: &Value, op: CmpOp, right: &Value) -> bool {
    if left.is_missing() || right.is_missing() {
        return false;
    }
    match op {
        CmpOp::Eq => left == right,
        CmpOp::Ne => left != right,
        CmpOp::Lt | CmpOp::Le | CmpOp::Gt | CmpOp::Ge => {
            let Some(ord) = same_atomic_order(left, right) else {
                return false;
            };
            match op {
                CmpOp::Lt => ord.is_lt(),
                CmpOp::Le => ord.is_le(),
                CmpOp::Gt => ord.is_gt(),
                _ => ord.is_ge(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{Bag, Path, VertexId};

    #[test]
    fn missing_is_never_true() {
        for op in [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Ge] {
            assert!(!compare(&Value::Missing, op, &Value::Int(1)));
            assert!(!compare(&Value::Missing, op, &Value::Missing));
        }
    }

    #[test]
    fn cross_type_ordering_is_false() {
        assert!(!compare(&Value::Int(1), CmpOp::Lt, &Value::Float(2.0)));
        assert!(!compare(&Value::Int(1), CmpOp::Eq, &Value::Float(1.0)));
        assert!(compare(&Value::Int(1), CmpOp::Ne, &Value::Float(1.0)));
        assert!(compare(&"a".into(), CmpOp::Lt, &"b".into()));
    }

    #[test]
    fn bags_and_paths_compare_structurally_only() {
        let a = Value::Bag(Bag::new(vec![1.into(), 2.into()]));
        let b = Value::Bag(Bag::new(vec![2.into(), 1.into()]));
        assert!(compare(&a, CmpOp::Eq, &b));
        assert!(!compare(&a, CmpOp::Le, &b));
        let p = Value::Path(Path::new(VertexId(1)));
        assert!(compare(&p, CmpOp::Eq, &p.clone()));
        assert!(!compare(&p, CmpOp::Ge, &p.clone()));
    }
}
