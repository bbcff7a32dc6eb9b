//! The property graph store.
//!
//! The store owns the vertices and edges, exposes them as the nested base
//! relations α (vertices) and β (edges), and turns update transactions into
//! signed deltas for every registered base scan.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::delta::DeltaBag;
use crate::error::GraphError;
use crate::value::{EdgeId, PropertyMap, Tuple, Value, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexRecord {
    pub id: VertexId,
    pub labels: BTreeSet<String>,
    pub properties: PropertyMap,
}

impl VertexRecord {
    pub fn new(id: u64) -> Self {
        VertexRecord {
            id: VertexId(id),
            labels: BTreeSet::new(),
            properties: PropertyMap::new(),
        }
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.labels.insert(label.to_owned());
        self
    }

    pub fn with_property(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.properties.insert(key.to_owned(), value.into());
        self
    }

    pub fn has_label(&self, label: &str) -> bool {
        self.labels.contains(label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub source: VertexId,
    pub target: VertexId,
    pub edge_type: String,
    pub properties: PropertyMap,
}

impl EdgeRecord {
    pub fn new(id: u64, source: u64, target: u64, edge_type: &str) -> Self {
        EdgeRecord {
            id: EdgeId(id),
            source: VertexId(source),
            target: VertexId(target),
            edge_type: edge_type.to_owned(),
            properties: PropertyMap::new(),
        }
    }

    pub fn with_property(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.properties.insert(key.to_owned(), value.into());
        self
    }
}

/// One atomic graph update.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UpdateOp {
    AddVertex(VertexRecord),
    RemoveVertex(VertexId),
    AddEdge(EdgeRecord),
    RemoveEdge(EdgeId),
    SetVertexProperty(VertexId, String, Value),
    RemoveVertexProperty(VertexId, String),
    SetEdgeProperty(EdgeId, String, Value),
    RemoveEdgeProperty(EdgeId, String),
}

/// Handle of a base scan registered with a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScanId(pub u32);

/// A base relation whose deltas the store reports on every transaction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ScanSpec {
    /// The α relation: `(id, label, properties)`, one row per vertex label.
    Alpha,
    /// The β relation: `(s, t, type, properties)`, one row per edge.
    Beta,
    /// get-vertices: `(v, props…)`.
    Vertices {
        label: Option<String>,
        props: Vec<String>,
    },
    /// get-edges: `(src, [edge], tgt, src props…, edge props…, tgt props…)`.
    Edges {
        src_label: Option<String>,
        edge_type: Option<String>,
        tgt_label: Option<String>,
        include_edge: bool,
        src_props: Vec<String>,
        edge_props: Vec<String>,
        tgt_props: Vec<String>,
    },
}

impl ScanSpec {
    pub fn vertices(label: Option<&str>) -> Self {
        ScanSpec::Vertices {
            label: label.map(str::to_owned),
            props: Vec::new(),
        }
    }

    pub fn edges(edge_type: Option<&str>) -> Self {
        ScanSpec::Edges {
            src_label: None,
            edge_type: edge_type.map(str::to_owned),
            tgt_label: None,
            include_edge: true,
            src_props: Vec::new(),
            edge_props: Vec::new(),
            tgt_props: Vec::new(),
        }
    }

    fn reads_vertices(&self) -> bool {
        matches!(self, ScanSpec::Alpha | ScanSpec::Vertices { .. })
    }
}

/// Column names of the α relation.
pub const ALPHA_SCHEMA: [&str; 3] = ["id", "label", "properties"];
/// Column names of the β relation.
pub const BETA_SCHEMA: [&str; 4] = ["s", "t", "type", "properties"];

/// Signed deltas of the registered scans, keyed by scan. Scans whose output
/// did not change are absent.
pub type BaseDeltas = BTreeMap<ScanId, DeltaBag>;

/// The mutable property graph.
#[derive(Debug, Clone, Default)]
pub struct PropertyGraph {
    vertices: BTreeMap<VertexId, VertexRecord>,
    edges: BTreeMap<EdgeId, EdgeRecord>,
    outgoing: HashMap<VertexId, BTreeSet<EdgeId>>,
    incoming: HashMap<VertexId, BTreeSet<EdgeId>>,
    scans: BTreeMap<ScanId, ScanSpec>,
    next_scan: u32,
}

impl PartialEq for PropertyGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl PropertyGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from records, checking ids and endpoints.
    pub fn from_records(
        vertices: impl IntoIterator<Item = VertexRecord>,
        edges: impl IntoIterator<Item = EdgeRecord>,
    ) -> Result<Self, GraphError> {
        let mut g = PropertyGraph::new();
        let tx: Vec<UpdateOp> = vertices
            .into_iter()
            .map(UpdateOp::AddVertex)
            .chain(edges.into_iter().map(UpdateOp::AddEdge))
            .collect();
        g.apply_transaction(&tx)?;
        Ok(g)
    }

    pub fn vertex(&self, id: VertexId) -> Option<&VertexRecord> {
        self.vertices.get(&id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&EdgeRecord> {
        self.edges.get(&id)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexRecord> {
        self.vertices.values()
    }

    pub fn edges(&self) -> impl Iterator<Item = &EdgeRecord> {
        self.edges.values()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = &EdgeRecord> {
        self.outgoing
            .get(&v)
            .into_iter()
            .flatten()
            .map(move |e| &self.edges[e])
    }

    pub fn in_edges(&self, v: VertexId) -> impl Iterator<Item = &EdgeRecord> {
        self.incoming
            .get(&v)
            .into_iter()
            .flatten()
            .map(move |e| &self.edges[e])
    }

    fn degree(&self, v: VertexId) -> usize {
        self.outgoing.get(&v).map_or(0, BTreeSet::len)
            + self.incoming.get(&v).map_or(0, BTreeSet::len)
    }

    fn id_in_use(&self, id: u64) -> bool {
        self.vertices.contains_key(&VertexId(id)) || self.edges.contains_key(&EdgeId(id))
    }

    /// Registers a base scan; its deltas are reported by every subsequent
    /// transaction.
    pub fn register_scan(&mut self, spec: ScanSpec) -> ScanId {
        let id = ScanId(self.next_scan);
        self.next_scan += 1;
        self.scans.insert(id, spec);
        id
    }

    pub fn unregister_scan(&mut self, id: ScanId) -> Option<ScanSpec> {
        self.scans.remove(&id)
    }

    pub fn scan_spec(&self, id: ScanId) -> Option<&ScanSpec> {
        self.scans.get(&id)
    }

    /// Full contents of a scan over the current graph.
    pub fn scan(&self, spec: &ScanSpec) -> Vec<Tuple> {
        if spec.reads_vertices() {
            self.vertices
                .values()
                .flat_map(|v| vertex_rows(spec, v))
                .collect()
        } else {
            self.edges
                .values()
                .flat_map(|e| self.edge_rows(spec, e))
                .collect()
        }
    }

    /// The α relation. A vertex with k labels yields k rows; an unlabeled
    /// vertex yields one row with a missing label.
    pub fn alpha_relation(&self) -> Vec<Tuple> {
        self.scan(&ScanSpec::Alpha)
    }

    /// The β relation, one row per edge.
    pub fn beta_relation(&self) -> Vec<Tuple> {
        self.scan(&ScanSpec::Beta)
    }

    fn edge_rows(&self, spec: &ScanSpec, e: &EdgeRecord) -> Vec<Tuple> {
        match spec {
            ScanSpec::Beta => vec![vec![
                Value::Vertex(e.source),
                Value::Vertex(e.target),
                Value::Str(e.edge_type.clone()),
                Value::Record(e.properties.clone()),
            ]],
            ScanSpec::Edges {
                src_label,
                edge_type,
                tgt_label,
                include_edge,
                src_props,
                edge_props,
                tgt_props,
            } => {
                if edge_type.as_ref().is_some_and(|t| *t != e.edge_type) {
                    return Vec::new();
                }
                let src = &self.vertices[&e.source];
                let tgt = &self.vertices[&e.target];
                if src_label.as_ref().is_some_and(|l| !src.has_label(l))
                    || tgt_label.as_ref().is_some_and(|l| !tgt.has_label(l))
                {
                    return Vec::new();
                }
                let mut row = vec![Value::Vertex(e.source)];
                if *include_edge {
                    row.push(Value::Edge(e.id));
                }
                row.push(Value::Vertex(e.target));
                row.extend(project_props(&src.properties, src_props));
                row.extend(project_props(&e.properties, edge_props));
                row.extend(project_props(&tgt.properties, tgt_props));
                vec![row]
            }
            ScanSpec::Alpha | ScanSpec::Vertices { .. } => Vec::new(),
        }
    }

    /// Applies `tx` atomically and returns the deltas of every registered scan.
    pub fn apply_transaction(&mut self, tx: &[UpdateOp]) -> Result<BaseDeltas, GraphError> {
        self.apply_transaction_logged(tx).map(|(d, _)| d)
    }

    /// Like [`apply_transaction`](Self::apply_transaction), additionally
    /// returning the transaction that undoes `tx`.
    pub fn apply_transaction_logged(
        &mut self,
        tx: &[UpdateOp],
    ) -> Result<(BaseDeltas, Vec<UpdateOp>), GraphError> {
        if tx.is_empty() {
            return Ok((BaseDeltas::new(), Vec::new()));
        }
        let (touched_v, touched_e) = self.touched(tx);
        let mut deltas: BTreeMap<ScanId, DeltaBag> = BTreeMap::new();
        self.collect_rows(&touched_v, &touched_e, -1, &mut deltas);

        let mut undo = Vec::with_capacity(tx.len());
        for op in tx {
            match self.apply_op(op) {
                Ok(inverse) => undo.push(inverse),
                Err(err) => {
                    for inverse in undo.iter().rev() {
                        self.apply_op(inverse)
                            .expect("inverse of an applied op always applies");
                    }
                    return Err(err);
                }
            }
        }

        self.collect_rows(&touched_v, &touched_e, 1, &mut deltas);
        deltas.retain(|_, d| !d.is_empty());
        undo.reverse();
        Ok((deltas, undo))
    }

    // Entities whose scan rows may change under `tx`: every vertex/edge an
    // op names, plus the pre-state incident edges of touched vertices (edge
    // rows carry endpoint labels and properties).
    fn touched(&self, tx: &[UpdateOp]) -> (BTreeSet<VertexId>, BTreeSet<EdgeId>) {
        let mut vs = BTreeSet::new();
        let mut es = BTreeSet::new();
        for op in tx {
            match op {
                UpdateOp::AddVertex(v) => {
                    vs.insert(v.id);
                }
                UpdateOp::RemoveVertex(v)
                | UpdateOp::SetVertexProperty(v, _, _)
                | UpdateOp::RemoveVertexProperty(v, _) => {
                    vs.insert(*v);
                }
                UpdateOp::AddEdge(e) => {
                    es.insert(e.id);
                }
                UpdateOp::RemoveEdge(e)
                | UpdateOp::SetEdgeProperty(e, _, _)
                | UpdateOp::RemoveEdgeProperty(e, _) => {
                    es.insert(*e);
                }
            }
        }
        for v in &vs {
            for map in [&self.outgoing, &self.incoming] {
                if let Some(adj) = map.get(v) {
                    es.extend(adj.iter().copied());
                }
            }
        }
        (vs, es)
    }

    fn collect_rows(
        &self,
        vs: &BTreeSet<VertexId>,
        es: &BTreeSet<EdgeId>,
        sign: i64,
        deltas: &mut BTreeMap<ScanId, DeltaBag>,
    ) {
        for (&id, spec) in &self.scans {
            let delta = deltas
                .entry(id)
                .or_insert_with(|| DeltaBag::new(scan_schema(spec)));
            if spec.reads_vertices() {
                for v in vs.iter().filter_map(|v| self.vertices.get(v)) {
                    for row in vertex_rows(spec, v) {
                        delta.add(row, sign);
                    }
                }
            } else {
                for e in es.iter().filter_map(|e| self.edges.get(e)) {
                    for row in self.edge_rows(spec, e) {
                        delta.add(row, sign);
                    }
                }
            }
        }
    }

    // Applies one op, returning its inverse.
    fn apply_op(&mut self, op: &UpdateOp) -> Result<UpdateOp, GraphError> {
        match op {
            UpdateOp::AddVertex(rec) => {
                if self.id_in_use(rec.id.0) {
                    return Err(GraphError::DuplicateId(rec.id.0));
                }
                for (k, v) in &rec.properties {
                    check_property(k, v)?;
                }
                self.vertices.insert(rec.id, rec.clone());
                Ok(UpdateOp::RemoveVertex(rec.id))
            }
            UpdateOp::RemoveVertex(id) => {
                if !self.vertices.contains_key(id) {
                    return Err(GraphError::UnknownVertex(id.0));
                }
                let degree = self.degree(*id);
                if degree > 0 {
                    return Err(GraphError::DanglingVertexRemoval {
                        vertex: id.0,
                        edges: degree,
                    });
                }
                self.outgoing.remove(id);
                self.incoming.remove(id);
                let rec = self.vertices.remove(id).expect("checked above");
                Ok(UpdateOp::AddVertex(rec))
            }
            UpdateOp::AddEdge(rec) => {
                if self.id_in_use(rec.id.0) {
                    return Err(GraphError::DuplicateId(rec.id.0));
                }
                for v in [rec.source, rec.target] {
                    if !self.vertices.contains_key(&v) {
                        return Err(GraphError::UnknownVertex(v.0));
                    }
                }
                for (k, v) in &rec.properties {
                    check_property(k, v)?;
                }
                self.outgoing.entry(rec.source).or_default().insert(rec.id);
                self.incoming.entry(rec.target).or_default().insert(rec.id);
                self.edges.insert(rec.id, rec.clone());
                Ok(UpdateOp::RemoveEdge(rec.id))
            }
            UpdateOp::RemoveEdge(id) => {
                let rec = self.edges.remove(id).ok_or(GraphError::UnknownEdge(id.0))?;
                for (map, v) in [
                    (&mut self.outgoing, rec.source),
                    (&mut self.incoming, rec.target),
                ] {
                    if let Some(adj) = map.get_mut(&v) {
                        adj.remove(id);
                        if adj.is_empty() {
                            map.remove(&v);
                        }
                    }
                }
                Ok(UpdateOp::AddEdge(rec))
            }
            UpdateOp::SetVertexProperty(id, key, value) => {
                check_property(key, value)?;
                let rec = self
                    .vertices
                    .get_mut(id)
                    .ok_or(GraphError::UnknownVertex(id.0))?;
                Ok(match rec.properties.insert(key.clone(), value.clone()) {
                    Some(old) => UpdateOp::SetVertexProperty(*id, key.clone(), old),
                    None => UpdateOp::RemoveVertexProperty(*id, key.clone()),
                })
            }
            UpdateOp::RemoveVertexProperty(id, key) => {
                let rec = self
                    .vertices
                    .get_mut(id)
                    .ok_or(GraphError::UnknownVertex(id.0))?;
                Ok(match rec.properties.remove(key) {
                    Some(old) => UpdateOp::SetVertexProperty(*id, key.clone(), old),
                    None => UpdateOp::RemoveVertexProperty(*id, key.clone()),
                })
            }
            UpdateOp::SetEdgeProperty(id, key, value) => {
                check_property(key, value)?;
                let rec = self
                    .edges
                    .get_mut(id)
                    .ok_or(GraphError::UnknownEdge(id.0))?;
                Ok(match rec.properties.insert(key.clone(), value.clone()) {
                    Some(old) => UpdateOp::SetEdgeProperty(*id, key.clone(), old),
                    None => UpdateOp::RemoveEdgeProperty(*id, key.clone()),
                })
            }
            UpdateOp::RemoveEdgeProperty(id, key) => {
                let rec = self
                    .edges
                    .get_mut(id)
                    .ok_or(GraphError::UnknownEdge(id.0))?;
                Ok(match rec.properties.remove(key) {
                    Some(old) => UpdateOp::SetEdgeProperty(*id, key.clone(), old),
                    None => UpdateOp::RemoveEdgeProperty(*id, key.clone()),
                })
            }
        }
    }
}

/// Column names of a scan's output.
pub fn scan_schema(spec: &ScanSpec) -> Vec<String> {
    match spec {
        ScanSpec::Alpha => ALPHA_SCHEMA.iter().map(|s| s.to_string()).collect(),
        ScanSpec::Beta => BETA_SCHEMA.iter().map(|s| s.to_string()).collect(),
        ScanSpec::Vertices { props, .. } => std::iter::once("v".to_string())
            .chain(props.iter().map(|p| format!("v.{p}")))
            .collect(),
        ScanSpec::Edges {
            include_edge,
            src_props,
            edge_props,
            tgt_props,
            ..
        } => {
            let mut cols = vec!["src".to_string()];
            if *include_edge {
                cols.push("edge".to_string());
            }
            cols.push("tgt".to_string());
            cols.extend(src_props.iter().map(|p| format!("src.{p}")));
            cols.extend(edge_props.iter().map(|p| format!("edge.{p}")));
            cols.extend(tgt_props.iter().map(|p| format!("tgt.{p}")));
            cols
        }
    }
}

fn vertex_rows(spec: &ScanSpec, v: &VertexRecord) -> Vec<Tuple> {
    match spec {
        ScanSpec::Alpha => {
            let props = Value::Record(v.properties.clone());
            if v.labels.is_empty() {
                return vec![vec![Value::Vertex(v.id), Value::Missing, props]];
            }
            v.labels
                .iter()
                .map(|l| vec![Value::Vertex(v.id), Value::Str(l.clone()), props.clone()])
                .collect()
        }
        ScanSpec::Vertices { label, props } => {
            if label.as_ref().is_some_and(|l| !v.has_label(l)) {
                return Vec::new();
            }
            let mut row = vec![Value::Vertex(v.id)];
            row.extend(project_props(&v.properties, props));
            vec![row]
        }
        ScanSpec::Beta | ScanSpec::Edges { .. } => Vec::new(),
    }
}

fn project_props<'a>(
    props: &'a PropertyMap,
    keys: &'a [String],
) -> impl Iterator<Item = Value> + 'a {
    keys.iter()
        .map(|k| props.get(k).cloned().unwrap_or(Value::Missing))
}

/// Property values are atomic values or (nested) bags of them.
pub fn check_property(key: &str, value: &Value) -> Result<(), GraphError> {
    match value {
        v if v.is_atomic() => Ok(()),
        Value::Bag(b) => b.iter().try_for_each(|v| check_property(key, v)),
        other => Err(GraphError::InvalidProperty {
            key: key.to_owned(),
            reason: format!("{other} is not an atomic value or bag"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::{bag_of, TupleBag};
    use crate::fixtures::running_example;

    #[test]
    fn alpha_contains_post_row() {
        let g = running_example();
        let mut props = PropertyMap::new();
        props.insert("lang".into(), "en".into());
        let row = vec![
            Value::Vertex(VertexId(1)),
            "Post".into(),
            Value::Record(props),
        ];
        assert!(g.alpha_relation().contains(&row));
        assert!(PropertyGraph::new().alpha_relation().is_empty());
    }

    #[test]
    fn multi_label_vertex_yields_one_alpha_row_per_label() {
        let g =
            PropertyGraph::from_records([VertexRecord::new(7).with_label("A").with_label("B")], [])
                .unwrap();
        let rows = g.alpha_relation();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r[0] == Value::Vertex(VertexId(7))));
    }

    #[test]
    fn beta_of_running_example() {
        let g = running_example();
        let beta = bag_of(g.beta_relation());
        let row = |s, t| {
            vec![
                Value::Vertex(VertexId(s)),
                Value::Vertex(VertexId(t)),
                "REPLY".into(),
                Value::Record(PropertyMap::new()),
            ]
        };
        assert_eq!(beta, bag_of([row(1, 2), row(2, 3)]));
        assert!(PropertyGraph::new().beta_relation().is_empty());
    }

    #[test]
    fn self_loop_beta_row() {
        let g =
            PropertyGraph::from_records([VertexRecord::new(1)], [EdgeRecord::new(10, 1, 1, "T")])
                .unwrap();
        let beta = g.beta_relation();
        assert_eq!(beta.len(), 1);
        assert_eq!(beta[0][0], beta[0][1]);
    }

    #[test]
    fn add_edge_reports_get_edges_delta() {
        let mut g = running_example();
        g.apply_transaction(&[UpdateOp::AddVertex(
            VertexRecord::new(4)
                .with_label("Comm")
                .with_property("lang", "en"),
        )])
        .unwrap();
        let scan = g.register_scan(ScanSpec::edges(Some("REPLY")));
        let beta = g.register_scan(ScanSpec::Beta);
        let before = bag_of(g.beta_relation());
        let deltas = g
            .apply_transaction(&[UpdateOp::AddEdge(EdgeRecord::new(103, 3, 4, "REPLY"))])
            .unwrap();
        let d = &deltas[&scan];
        assert_eq!(d.len(), 1);
        assert_eq!(
            d.get(&vec![
                Value::Vertex(VertexId(3)),
                Value::Edge(EdgeId(103)),
                Value::Vertex(VertexId(4))
            ]),
            1
        );
        let mut rebuilt: TupleBag = before;
        deltas[&beta].apply_to(&mut rebuilt).unwrap();
        assert_eq!(rebuilt, bag_of(g.beta_relation()));
    }

    #[test]
    fn empty_transaction_is_identity() {
        let mut g = running_example();
        g.register_scan(ScanSpec::Alpha);
        let before = g.clone();
        assert!(g.apply_transaction(&[]).unwrap().is_empty());
        assert_eq!(g, before);
    }

    #[test]
    fn dangling_vertex_removal_rejected() {
        let mut g = running_example();
        let err = g
            .apply_transaction(&[UpdateOp::RemoveVertex(VertexId(1))])
            .unwrap_err();
        assert_eq!(
            err,
            GraphError::DanglingVertexRemoval {
                vertex: 1,
                edges: 1
            }
        );
    }

    #[test]
    fn failed_transaction_leaves_graph_untouched() {
        let mut g = running_example();
        let before = g.clone();
        let tx = [
            UpdateOp::SetVertexProperty(VertexId(2), "lang".into(), "de".into()),
            UpdateOp::RemoveEdge(EdgeId(101)),
            UpdateOp::RemoveEdge(EdgeId(999)),
        ];
        assert_eq!(g.apply_transaction(&tx), Err(GraphError::UnknownEdge(999)));
        assert_eq!(g, before);
        assert_eq!(g.out_edges(VertexId(1)).count(), 1);
    }

    #[test]
    fn duplicate_ids_across_id_spaces() {
        let mut g = running_example();
        let err = g
            .apply_transaction(&[UpdateOp::AddVertex(VertexRecord::new(101))])
            .unwrap_err();
        assert_eq!(err, GraphError::DuplicateId(101));
        let err = g
            .apply_transaction(&[UpdateOp::AddEdge(EdgeRecord::new(2, 1, 3, "X"))])
            .unwrap_err();
        assert_eq!(err, GraphError::DuplicateId(2));
    }

    #[test]
    fn property_update_is_delete_plus_insert() {
        let mut g = running_example();
        let scan = g.register_scan(ScanSpec::Vertices {
            label: Some("Comm".into()),
            props: vec!["lang".into()],
        });
        let deltas = g
            .apply_transaction(&[UpdateOp::SetVertexProperty(
                VertexId(3),
                "lang".into(),
                "de".into(),
            )])
            .unwrap();
        let d = &deltas[&scan];
        assert_eq!(d.get(&vec![Value::Vertex(VertexId(3)), "en".into()]), -1);
        assert_eq!(d.get(&vec![Value::Vertex(VertexId(3)), "de".into()]), 1);
    }

    #[test]
    fn rejects_path_valued_property() {
        let mut g = running_example();
        let p = crate::value::Path::new(VertexId(1));
        let err = g
            .apply_transaction(&[UpdateOp::SetVertexProperty(
                VertexId(1),
                "p".into(),
                p.into(),
            )])
            .unwrap_err();
        assert!(matches!(err, GraphError::InvalidProperty { .. }));
    }
}
