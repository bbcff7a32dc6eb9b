//! Values carried by graph properties and by the tuples flowing between operators.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

/// Opaque vertex identifier, taken verbatim from the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u64);

/// Opaque edge identifier, taken verbatim from the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u64);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Property key/value mapping of one vertex or edge.
pub type PropertyMap = BTreeMap<String, Value>;

/// A row of a relation. Positions follow the relation's schema.
pub type Tuple = Vec<Value>;

/// A single value.
///
/// `Vertex` and `Edge` only appear in tuples, never as property values.
/// `Record` is the nested `properties` column of the base relations.
#[derive(Debug, Clone)]
pub enum Value {
    Missing,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Bag(Bag),
    Path(Path),
    Vertex(VertexId),
    Edge(EdgeId),
    Record(PropertyMap),
}

impl Value {
    fn rank(&self) -> u8 {
        match self {
            Value::Missing => 0,
            Value::Bool(_) => 1,
            Value::Int(_) => 2,
            Value::Float(_) => 3,
            Value::Str(_) => 4,
            Value::Bag(_) => 5,
            Value::Path(_) => 6,
            Value::Vertex(_) => 7,
            Value::Edge(_) => 8,
            Value::Record(_) => 9,
        }
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, Value::Missing)
    }

    /// Atomic values are the members of the property domain `D`.
    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Value::Bool(_) | Value::Int(_) | Value::Float(_) | Value::Str(_)
        )
    }

    pub fn as_vertex(&self) -> Option<VertexId> {
        match self {
            Value::Vertex(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_edge(&self) -> Option<EdgeId> {
        match self {
            Value::Edge(e) => Some(*e),
            _ => None,
        }
    }

    pub fn as_path(&self) -> Option<&Path> {
        match self {
            Value::Path(p) => Some(p),
            _ => None,
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl From<VertexId> for Value {
    fn from(v: VertexId) -> Self {
        Value::Vertex(v)
    }
}

impl From<EdgeId> for Value {
    fn from(v: EdgeId) -> Self {
        Value::Edge(v)
    }
}

impl From<Path> for Value {
    fn from(v: Path) -> Self {
        Value::Path(v)
    }
}

impl From<Bag> for Value {
    fn from(v: Bag) -> Self {
        Value::Bag(v)
    }
}

// Total structural order. Used for hashing, bag canonicalization and output
// ordering; predicate semantics live in `semantics`.
impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        use Value::*;
        match (self, other) {
            (Missing, Missing) => Ordering::Equal,
            (Bool(a), Bool(b)) => a.cmp(b),
            (Int(a), Int(b)) => a.cmp(b),
            (Float(a), Float(b)) => a.total_cmp(b),
            (Str(a), Str(b)) => a.cmp(b),
            (Bag(a), Bag(b)) => a.cmp(b),
            (Path(a), Path(b)) => a.cmp(b),
            (Vertex(a), Vertex(b)) => a.cmp(b),
            (Edge(a), Edge(b)) => a.cmp(b),
            (Record(a), Record(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank().hash(state);
        match self {
            Value::Missing => {}
            Value::Bool(b) => b.hash(state),
            Value::Int(i) => i.hash(state),
            Value::Float(f) => f.to_bits().hash(state),
            Value::Str(s) => s.hash(state),
            Value::Bag(b) => b.hash(state),
            Value::Path(p) => p.hash(state),
            Value::Vertex(v) => v.hash(state),
            Value::Edge(e) => e.hash(state),
            Value::Record(r) => r.hash(state),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Missing => f.write_str("null"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => write!(f, "{x:?}"),
            Value::Str(s) => write!(f, "'{}'", s.replace('\\', "\\\\").replace('\'', "\\'")),
            Value::Bag(b) => {
                f.write_str("bag[")?;
                for (i, v) in b.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
            Value::Path(p) => write!(f, "{p}"),
            Value::Vertex(v) => write!(f, "{v}"),
            Value::Edge(e) => write!(f, "{e}"),
            Value::Record(r) => {
                f.write_str("{")?;
                for (i, (k, v)) in r.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k}: {v}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// An unordered multiset of values.
///
/// Elements are kept sorted so that derived equality is multiset equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bag(Vec<Value>);

impl Bag {
    pub fn new(mut items: Vec<Value>) -> Self {
        items.sort();
        Bag(items)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Value> {
        self.0.iter()
    }
}

impl FromIterator<Value> for Bag {
    fn from_iter<I: IntoIterator<Item = Value>>(iter: I) -> Self {
        Bag::new(iter.into_iter().collect())
    }
}

/// An atomic path: a start vertex followed by `(edge, vertex)` hops.
///
/// Paths are immutable values; extending one produces a new path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    start: VertexId,
    hops: Vec<(EdgeId, VertexId)>,
}

impl Path {
    pub fn new(start: VertexId) -> Self {
        Path {
            start,
            hops: Vec::new(),
        }
    }

    pub fn from_hops(start: VertexId, hops: Vec<(EdgeId, VertexId)>) -> Self {
        Path { start, hops }
    }

    /// Builds a path from the alternating id list `v, e, v, …, v`.
    pub fn from_alternating(ids: &[u64]) -> Option<Self> {
        if ids.len().is_multiple_of(2) {
            return None;
        }
        let start = VertexId(ids[0]);
        let hops = ids[1..]
            .chunks(2)
            .map(|c| (EdgeId(c[0]), VertexId(c[1])))
            .collect();
        Some(Path { start, hops })
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        self.hops.last().map_or(self.start, |&(_, v)| v)
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }

    pub fn hops(&self) -> &[(EdgeId, VertexId)] {
        &self.hops
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.hops.iter().map(|&(e, _)| e)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        std::iter::once(self.start).chain(self.hops.iter().map(|&(_, v)| v))
    }

    pub fn contains_edge(&self, edge: EdgeId) -> bool {
        self.hops.iter().any(|&(e, _)| e == edge)
    }

    /// The alternating `v, e, v, …` id list.
    pub fn to_alternating(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(1 + 2 * self.hops.len());
        out.push(self.start.0);
        for &(e, v) in &self.hops {
            out.push(e.0);
            out.push(v.0);
        }
        out
    }

    pub fn push(&mut self, edge: EdgeId, to: VertexId) {
        self.hops.push((edge, to));
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn concat(&self, other: &Path) -> Path {
        debug_assert_eq!(self.end(), other.start);
        let mut hops = self.hops.clone();
        hops.extend_from_slice(&other.hops);
        Path {
            start: self.start,
            hops,
        }
    }

    /// True when no edge id repeats.
    pub fn has_distinct_edges(&self) -> bool {
        let mut seen: Vec<EdgeId> = self.edges().collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.start)?;
        for (e, v) in &self.hops {
            write!(f, ", {e}, {v}")?;
        }
        f.write_str("]")
    }
}
