//! Maintenance of the transitive join.
//!
//! The node keeps every edge-distinct segment (including the empty one)
//! that starts at an active origin and has at most `max` hops, whether or
//! not it currently ends at a valid target. An origin is active while some
//! left tuple starts there and the vertex satisfies the source label.
//! Outputs pair a left tuple with a segment of its origin that ends at a
//! target vertex, has at least `min` hops and shares no edge with the left
//! tuple's path prefix.
//!
//! Changes are applied one input at a time against the current state, so
//! the emitted deltas add up to the exact change of the output.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::algebra::{GetEdges, Schema};
use crate::delta::DeltaBag;
use crate::graph::{BaseDeltas, PropertyGraph, ScanId, ScanSpec};
use crate::value::{EdgeId, Path, Tuple, Value, VertexId};

type SegId = u64;
type Changes = Vec<(Tuple, i64)>;

#[derive(Debug)]
pub(super) struct TransJoin {
    src_pos: usize,
    path_pos: Option<usize>,
    emits_path: bool,
    min: u32,
    max: Option<u32>,
    check_start: bool,

    edge_scan: ScanId,
    end_scan: ScanId,
    start_scan: Option<ScanId>,

    left: HashMap<VertexId, HashMap<Tuple, i64>>,
    adjacency: HashMap<VertexId, BTreeMap<EdgeId, VertexId>>,
    ends: HashMap<VertexId, Vec<Value>>,
    starts: HashSet<VertexId>,

    segments: HashMap<SegId, Path>,
    next_seg: SegId,
    by_edge: HashMap<EdgeId, HashSet<SegId>>,
    by_end: HashMap<VertexId, HashSet<SegId>>,
    by_origin: HashMap<VertexId, HashSet<SegId>>,
}

impl TransJoin {
    pub(super) fn new(
        graph: &mut PropertyGraph,
        left_schema: &Schema,
        right: &GetEdges,
        min: u32,
        max: Option<u32>,
        path: Option<&str>,
    ) -> Self {
        let edge_scan = graph.register_scan(ScanSpec::Edges {
            src_label: None,
            edge_type: right.edge.edge_type.clone(),
            tgt_label: None,
            include_edge: true,
            src_props: Vec::new(),
            edge_props: Vec::new(),
            tgt_props: Vec::new(),
        });
        let end_scan = graph.register_scan(ScanSpec::Vertices {
            label: right.tgt.label.clone(),
            props: right.tgt.props.iter().map(|p| p.key.clone()).collect(),
        });
        let start_scan = right
            .src
            .label
            .as_deref()
            .map(|l| graph.register_scan(ScanSpec::vertices(Some(l))));
        let path_pos = path.and_then(|p| left_schema.position(p));
        TransJoin {
            src_pos: left_schema
                .position(&right.src.var)
                .expect("source checked by schema_of"),
            path_pos,
            emits_path: path.is_some(),
            min,
            max,
            check_start: start_scan.is_some(),
            edge_scan,
            end_scan,
            start_scan,
            left: HashMap::new(),
            adjacency: HashMap::new(),
            ends: HashMap::new(),
            starts: HashSet::new(),
            segments: HashMap::new(),
            next_seg: 0,
            by_edge: HashMap::new(),
            by_end: HashMap::new(),
            by_origin: HashMap::new(),
        }
    }

    pub(super) fn scans(&self) -> Vec<ScanId> {
        let mut s = vec![self.edge_scan, self.end_scan];
        s.extend(self.start_scan);
        s
    }

    pub(super) fn on_delta(
        &mut self,
        left: &DeltaBag,
        base: &BaseDeltas,
        out: &mut DeltaBag,
        processed: &mut u64,
    ) {
        let split = |d: Option<&DeltaBag>| -> (Changes, Changes) {
            let mut del = Vec::new();
            let mut ins = Vec::new();
            if let Some(d) = d {
                for (t, m) in d.iter() {
                    if m < 0 {
                        del.push((t.clone(), m));
                    } else {
                        ins.push((t.clone(), m));
                    }
                }
            }
            del.sort();
            ins.sort();
            (del, ins)
        };
        let (edge_del, edge_ins) = split(base.get(&self.edge_scan));
        let (end_del, end_ins) = split(base.get(&self.end_scan));
        let (start_del, start_ins) = split(self.start_scan.and_then(|s| base.get(&s)));
        let (left_del, left_ins) = split(Some(left));

        for (t, _) in &edge_del {
            self.remove_edge(vertex_id(&t[0]), edge_id(t), out, processed);
        }
        for (t, _) in &end_del {
            self.remove_end(vertex_id(&t[0]), out, processed);
        }
        for (t, _) in &start_del {
            self.update_origin(vertex_id(&t[0]), out, processed, |j, v| {
                j.starts.remove(&v);
            });
        }
        for (t, m) in left_del.iter().chain(&left_ins) {
            self.update_left(t, *m, out, processed);
        }
        for (t, _) in &start_ins {
            self.update_origin(vertex_id(&t[0]), out, processed, |j, v| {
                j.starts.insert(v);
            });
        }
        for (t, _) in &end_ins {
            self.insert_end(vertex_id(&t[0]), t[1..].to_vec(), out, processed);
        }
        for (t, _) in &edge_ins {
            self.insert_edge(
                vertex_id(&t[0]),
                edge_id(t),
                vertex_id(&t[2]),
                out,
                processed,
            );
        }
    }

    fn is_active(&self, v: VertexId) -> bool {
        self.left.get(&v).is_some_and(|l| !l.is_empty())
            && (!self.check_start || self.starts.contains(&v))
    }

    // Emits the output of one left tuple with one segment, `mult` times.
    fn emit(&self, tuple: &Tuple, mult: i64, seg: &Path, out: &mut DeltaBag, processed: &mut u64) {
        if (seg.len() as u32) < self.min {
            return;
        }
        let Some(props) = self.ends.get(&seg.end()) else {
            return;
        };
        let prefix = self
            .path_pos
            .map(|i| tuple[i].as_path().expect("path attribute"));
        if prefix.is_some_and(|p| seg.edges().any(|e| p.contains_edge(e))) {
            return;
        }
        *processed += 1;
        let mut row = tuple.clone();
        row.push(Value::Vertex(seg.end()));
        row.extend(props.iter().cloned());
        if self.emits_path {
            match self.path_pos {
                Some(i) => row[i] = Value::Path(prefix.expect("path attribute").concat(seg)),
                None => row.push(Value::Path(seg.clone())),
            }
        }
        out.add(row, mult);
    }

    // Emits the outputs of a segment for every left tuple at its origin.
    fn emit_segment(&self, seg: &Path, sign: i64, out: &mut DeltaBag, processed: &mut u64) {
        if let Some(tuples) = self.left.get(&seg.start()) {
            for (t, &m) in tuples {
                self.emit(t, sign * m, seg, out, processed);
            }
        }
    }

    fn emit_origin(&self, v: VertexId, sign: i64, out: &mut DeltaBag, processed: &mut u64) {
        if !self.is_active(v) {
            return;
        }
        if let Some(ids) = self.by_origin.get(&v) {
            for id in ids {
                self.emit_segment(&self.segments[id], sign, out, processed);
            }
        }
    }

    // Applies a change that may switch `v` between active and inactive.
    fn update_origin(
        &mut self,
        v: VertexId,
        out: &mut DeltaBag,
        processed: &mut u64,
        change: impl FnOnce(&mut Self, VertexId),
    ) {
        self.emit_origin(v, -1, out, processed);
        let was_active = self.is_active(v);
        change(self, v);
        let now_active = self.is_active(v);
        if was_active && !now_active {
            self.drop_origin(v, processed);
        } else if !was_active && now_active {
            self.materialize_origin(v, processed);
        }
        self.emit_origin(v, 1, out, processed);
    }

    fn update_left(&mut self, tuple: &Tuple, m: i64, out: &mut DeltaBag, processed: &mut u64) {
        let v = vertex_id(&tuple[self.src_pos]);
        let count = self
            .left
            .get(&v)
            .and_then(|l| l.get(tuple))
            .copied()
            .unwrap_or(0);
        let group_size = self.left.get(&v).map_or(0, |l| l.len());
        let toggles = (count == 0 && group_size == 0) || (count + m == 0 && group_size == 1);
        if toggles {
            self.update_origin(v, out, processed, |j, v| j.add_left(v, tuple, m));
            return;
        }
        self.add_left(v, tuple, m);
        if self.is_active(v) {
            if let Some(ids) = self.by_origin.get(&v) {
                for id in ids {
                    self.emit(tuple, m, &self.segments[id], out, processed);
                }
            }
        }
    }

    fn add_left(&mut self, v: VertexId, tuple: &Tuple, m: i64) {
        let group = self.left.entry(v).or_default();
        let next = group.get(tuple).copied().unwrap_or(0) + m;
        debug_assert!(next >= 0, "negative left multiplicity");
        if next <= 0 {
            group.remove(tuple);
            if group.is_empty() {
                self.left.remove(&v);
            }
        } else {
            group.insert(tuple.clone(), next);
        }
    }

    fn remove_end(&mut self, v: VertexId, out: &mut DeltaBag, processed: &mut u64) {
        self.for_segments_ending_at(v, -1, out, processed);
        self.ends.remove(&v);
    }

    fn insert_end(
        &mut self,
        v: VertexId,
        props: Vec<Value>,
        out: &mut DeltaBag,
        processed: &mut u64,
    ) {
        self.ends.insert(v, props);
        self.for_segments_ending_at(v, 1, out, processed);
    }

    fn for_segments_ending_at(
        &self,
        v: VertexId,
        sign: i64,
        out: &mut DeltaBag,
        processed: &mut u64,
    ) {
        if let Some(ids) = self.by_end.get(&v) {
            for id in ids {
                self.emit_segment(&self.segments[id], sign, out, processed);
            }
        }
    }

    fn remove_edge(&mut self, s: VertexId, e: EdgeId, out: &mut DeltaBag, processed: &mut u64) {
        if let Some(ids) = self.by_edge.remove(&e) {
            for id in ids {
                self.emit_segment(&self.segments[&id], -1, out, processed);
                self.remove_segment(id, processed);
            }
        }
        if let Some(targets) = self.adjacency.get_mut(&s) {
            targets.remove(&e);
            if targets.is_empty() {
                self.adjacency.remove(&s);
            }
        }
    }

    fn insert_edge(
        &mut self,
        s: VertexId,
        e: EdgeId,
        t: VertexId,
        out: &mut DeltaBag,
        processed: &mut u64,
    ) {
        self.adjacency.entry(s).or_default().insert(e, t);
        let seeds: Vec<Path> = self
            .by_end
            .get(&s)
            .map(|ids| {
                let mut seeds: Vec<Path> = ids.iter().map(|id| self.segments[id].clone()).collect();
                seeds.sort();
                seeds
            })
            .unwrap_or_default();
        let mut created = Vec::new();
        for seed in seeds {
            if self.max.is_some_and(|m| seed.len() as u32 >= m) {
                continue;
            }
            let mut next = seed;
            next.push(e, t);
            self.extend_from(next, &mut created);
        }
        for p in created {
            self.emit_segment(&p, 1, out, processed);
            self.add_segment(p, processed);
        }
    }

    // Collects `path` and every edge-distinct extension within `max` hops.
    fn extend_from(&self, path: Path, acc: &mut Vec<Path>) {
        let full = self.max.is_some_and(|m| path.len() as u32 >= m);
        if !full {
            if let Some(targets) = self.adjacency.get(&path.end()) {
                for (&e, &t) in targets {
                    if !path.contains_edge(e) {
                        let mut next = path.clone();
                        next.push(e, t);
                        self.extend_from(next, acc);
                    }
                }
            }
        }
        acc.push(path);
    }

    fn materialize_origin(&mut self, v: VertexId, processed: &mut u64) {
        let mut created = Vec::new();
        self.extend_from(Path::new(v), &mut created);
        for p in created {
            self.add_segment(p, processed);
        }
    }

    fn drop_origin(&mut self, v: VertexId, processed: &mut u64) {
        if let Some(ids) = self.by_origin.get(&v).cloned() {
            for id in ids {
                self.remove_segment(id, processed);
            }
        }
    }

    fn add_segment(&mut self, p: Path, processed: &mut u64) {
        *processed += 1;
        let id = self.next_seg;
        self.next_seg += 1;
        for e in p.edges() {
            self.by_edge.entry(e).or_default().insert(id);
        }
        self.by_end.entry(p.end()).or_default().insert(id);
        self.by_origin.entry(p.start()).or_default().insert(id);
        self.segments.insert(id, p);
    }

    fn remove_segment(&mut self, id: SegId, processed: &mut u64) {
        *processed += 1;
        let p = self.segments.remove(&id).expect("live segment");
        for e in p.edges() {
            remove_from(&mut self.by_edge, &e, id);
        }
        remove_from(&mut self.by_end, &p.end(), id);
        remove_from(&mut self.by_origin, &p.start(), id);
    }
}

fn remove_from<K: std::hash::Hash + Eq>(
    index: &mut HashMap<K, HashSet<SegId>>,
    key: &K,
    id: SegId,
) {
    if let Some(set) = index.get_mut(key) {
        set.remove(&id);
        if set.is_empty() {
            index.remove(key);
        }
    }
}

fn vertex_id(v: &Value) -> VertexId {
    v.as_vertex().expect("vertex column")
}

fn edge_id(row: &Tuple) -> EdgeId {
    row[1].as_edge().expect("edge column")
}
