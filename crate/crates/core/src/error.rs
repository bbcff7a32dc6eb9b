use thiserror::Error;

/// Errors raised by the graph store when a transaction is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex id {0}")]
    UnknownVertex(u64),
    #[error("unknown edge id {0}")]
    UnknownEdge(u64),
    #[error("duplicate id {0}")]
    DuplicateId(u64),
    #[error("vertex {vertex} still has {edges} incident edge(s)")]
    DanglingVertexRemoval { vertex: u64, edges: usize },
    #[error("invalid property value for key `{key}`: {reason}")]
    InvalidProperty { key: String, reason: String },
}

/// Errors found while computing the schema of an algebra expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("unknown attribute `{name}` referenced by {node}")]
    UnknownAttribute { name: String, node: String },
    #[error("attribute `{name}` introduced twice by {node}")]
    DuplicateAttribute { name: String, node: String },
    #[error("malformed {node}: {reason}")]
    Malformed { node: String, reason: String },
}

/// Errors raised by the rewrite passes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("pass `{pass}` expects {expected} input, got {actual}")]
    DialectMismatch {
        pass: &'static str,
        expected: &'static str,
        actual: &'static str,
    },
    #[error("cannot push down `{var}.{key}`: {reason}")]
    AmbiguousBinding {
        var: String,
        key: String,
        reason: String,
    },
    #[error(transparent)]
    Schema(#[from] SchemaError),
}

/// Errors raised while instantiating or maintaining a view.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("view requires an FRA expression, got {0}")]
    NotFlat(&'static str),
    #[error("multiplicity of {tuple} would become {multiplicity}")]
    NegativeMultiplicity { tuple: String, multiplicity: i64 },
    #[error(transparent)]
    Schema(#[from] SchemaError),
}
