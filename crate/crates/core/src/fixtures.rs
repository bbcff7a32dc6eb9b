//! The running example used throughout the docs and tests: a post (1) with a
//! two-level reply thread (2, 3), all written in English.

use crate::graph::{EdgeRecord, PropertyGraph, VertexRecord};

/// Posts with transitive replies in the same language, returned with the thread path.
pub const THREAD_QUERY: &str =
    "MATCH t = (p:Post)-[:REPLY*]->(c:Comm)\nWHERE p.lang = c.lang\nRETURN p, t";

/// Vertices 1 (Post), 2 and 3 (Comm); edges 101: 1→2 and 102: 2→3, both REPLY.
pub fn running_example() -> PropertyGraph {
    PropertyGraph::from_records(
        [
            VertexRecord::new(1)
                .with_label("Post")
                .with_property("lang", "en"),
            VertexRecord::new(2)
                .with_label("Comm")
                .with_property("lang", "en"),
            VertexRecord::new(3)
                .with_label("Comm")
                .with_property("lang", "en"),
        ],
        [
            EdgeRecord::new(101, 1, 2, "REPLY"),
            EdgeRecord::new(102, 2, 3, "REPLY"),
        ],
    )
    .expect("fixture is well-formed")
}
