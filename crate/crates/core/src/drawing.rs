//! Topological multigraph drawings with polyline arcs, general-position validation
//! and the JSON interchange format.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{segment_intersection, CoarseBox, IntersectionKind, Point, Segment};

pub type VertexId = usize;
pub type EdgeId = usize;

/// A simple polyline from one endpoint vertex to the other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    points: Vec<Point>,
}

impl Arc {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::schema("arc", "needs at least two points"));
        }
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::schema("arc", format!("repeated consecutive point {:?}", w[0])));
        }
        Ok(Arc { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn first(&self) -> &Point {
        &self.points[0]
    }

    pub fn last(&self) -> &Point {
        &self.points[self.points.len() - 1]
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.points.windows(2).map(|w| Segment {
            a: w[0].clone(),
            b: w[1].clone(),
        })
    }

    pub fn reversed(&self) -> Arc {
        let mut points = self.points.clone();
        points.reverse();
        Arc { points }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub arc: Arc,
}

impl Edge {
    /// The unordered endpoint pair as `(min, max)`.
    pub fn key(&self) -> (VertexId, VertexId) {
        (self.u.min(self.v), self.u.max(self.v))
    }

    pub fn is_incident(&self, w: VertexId) -> bool {
        self.u == w || self.v == w
    }

    pub fn shares_endpoint(&self, other: &Edge) -> bool {
        self.is_incident(other.u) || self.is_incident(other.v)
    }

    /// The arc oriented from the smaller to the larger endpoint id.
    pub fn canonical_arc(&self) -> Arc {
        if self.u <= self.v {
            self.arc.clone()
        } else {
            self.arc.reversed()
        }
    }
}

/// One segment of one arc together with its coarse bounding box.
#[derive(Debug, Clone)]
pub struct ArcSegment {
    pub edge: EdgeId,
    pub index: usize,
    pub last_index: usize,
    pub segment: Segment,
    pub bbox: CoarseBox,
}

/// An immutable drawing of a loopless multigraph.
#[derive(Debug, Clone)]
pub struct Drawing {
    vertices: Vec<Point>,
    edges: Vec<Edge>,
    segments: OnceLock<Vec<ArcSegment>>,
}

impl PartialEq for Drawing {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Drawing {}

impl Drawing {
    /// Checks the structural invariants: distinct vertex points, no loops, valid
    /// endpoint ids and arcs that start and end at their endpoint vertices.
    pub fn new(vertices: Vec<Point>, edges: Vec<Edge>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (i, p) in vertices.iter().enumerate() {
            if let Some(j) = seen.insert(p, i) {
                return Err(Error::schema(
                    format!("vertices[{i}]"),
                    format!("duplicates the point of vertex {j}"),
                ));
            }
        }
        let n = vertices.len();
        for (i, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(Error::schema(
                    format!("edges[{i}]"),
                    format!("endpoint out of range (n = {n})"),
                ));
            }
            if e.u == e.v {
                return Err(Error::schema(
                    format!("edges[{i}]"),
                    "loop edges are not allowed",
                ));
            }
            if *e.arc.first() != vertices[e.u] {
                return Err(Error::schema(
                    format!("edges[{i}].arc[0]"),
                    format!("does not match the point of vertex {}", e.u),
                ));
            }
            if *e.arc.last() != vertices[e.v] {
                return Err(Error::schema(
                    format!("edges[{i}].arc[-1]"),
                    format!("does not match the point of vertex {}", e.v),
                ));
            }
        }
        Ok(Drawing {
            vertices,
            edges,
            segments: OnceLock::new(),
        })
    }

    /// Builds an edge whose arc is the straight segment between its endpoints.
    pub fn straight_edge(vertices: &[Point], u: VertexId, v: VertexId) -> Edge {
        Edge {
            u,
            v,
            arc: Arc {
                points: vec![vertices[u].clone(), vertices[v].clone()],
            },
        }
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn e(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, id: VertexId) -> &Point {
        &self.vertices[id]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    /// All arc segments, indexed once per drawing.
    pub fn segment_table(&self) -> &[ArcSegment] {
        self.segments.get_or_init(|| {
            self.edges
                .iter()
                .enumerate()
                .flat_map(|(edge, e)| {
                    let last_index = e.arc.points.len() - 2;
                    e.arc.segments().enumerate().map(move |(index, segment)| {
                        let bbox = segment.coarse_box();
                        ArcSegment {
                            edge,
                            index,
                            last_index,
                            segment,
                            bbox,
                        }
                    })
                })
                .collect()
        })
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n()];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    pub fn max_multiplicity(&self) -> usize {
        let mut counts: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
        for e in &self.edges {
            *counts.entry(e.key()).or_default() += 1;
        }
        counts.values().copied().max().unwrap_or(0)
    }

    /// The drawing restricted to `vertices` (renumbered in the given order) and the
    /// listed edges. Returns the new drawing and, per new edge, its original id.
    pub fn subdrawing(&self, vertices: &[VertexId], edges: &[EdgeId]) -> Result<(Drawing, Vec<EdgeId>)> {
        let mut index = vec![usize::MAX; self.n()];
        for (new, &old) in vertices.iter().enumerate() {
            index[old] = new;
        }
        let mut out = Vec::with_capacity(edges.len());
        for &id in edges {
            let e = &self.edges[id];
            let (u, v) = (index[e.u], index[e.v]);
            if u == usize::MAX || v == usize::MAX {
                return Err(Error::schema(
                    format!("edges[{id}]"),
                    "endpoint outside the vertex subset",
                ));
            }
            out.push(Edge {
                u,
                v,
                arc: e.arc.clone(),
            });
        }
        let points = vertices.iter().map(|&v| self.vertices[v].clone()).collect();
        Ok((Drawing::new(points, out)?, edges.to_vec()))
    }

    /// Adds an isolated vertex.
    pub fn with_vertex(&self, p: Point) -> Result<Drawing> {
        let mut vertices = self.vertices.clone();
        vertices.push(p);
        Drawing::new(vertices, self.edges.clone())
    }

    /// Removes a vertex that has no incident edges.
    pub fn without_isolated_vertex(&self, w: VertexId) -> Result<Drawing> {
        if self.edges.iter().any(|e| e.is_incident(w)) {
            return Err(Error::schema(format!("vertices[{w}]"), "vertex is not isolated"));
        }
        let keep: Vec<VertexId> = (0..self.n()).filter(|&v| v != w).collect();
        let all: Vec<EdgeId> = (0..self.e()).collect();
        Ok(self.subdrawing(&keep, &all)?.0)
    }

    /// Drops the listed edges.
    pub fn without_edges(&self, removed: &[EdgeId]) -> Drawing {
        let removed: BTreeSet<_> = removed.iter().copied().collect();
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, e)| e.clone())
            .collect();
        Drawing {
            vertices: self.vertices.clone(),
            edges,
            segments: OnceLock::new(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

/// Which general-position rule a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ViolationKind {
    /// An arc passes through a vertex point other than at its own ends.
    PassesThroughVertex,
    /// An endpoint of one segment touches the interior of a segment of another arc.
    Touching,
    /// Two arcs meet at a polyline breakpoint instead of segment interiors.
    BreakpointIncidence,
    /// Three or more arcs pass through one point.
    Concurrent,
    /// Two arcs share a piece of positive length.
    Overlap,
    /// An arc meets itself.
    SelfIntersection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub edges: Vec<EdgeId>,
    pub witness: Option<Point>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

fn is_arc_end(seg: &ArcSegment, p: &Point) -> bool {
    (seg.index == 0 && *p == seg.segment.a) || (seg.index == seg.last_index && *p == seg.segment.b)
}

/// Reports every general-position violation of the drawing. Crossings between
/// edges that share an endpoint are legal.
/// Violations and crossings found from one segment.
type SegmentFindings = (Vec<Violation>, Vec<(Point, EdgeId, EdgeId)>);

pub fn validate(d: &Drawing) -> ValidationReport {
    let table = d.segment_table();
    let mut violations = Vec::new();

    for (w, p) in d.vertices().iter().enumerate() {
        let pbox = CoarseBox::of_point(p);
        for s in table.iter().filter(|s| s.bbox.overlaps(&pbox)) {
            if !s.segment.contains(p) {
                continue;
            }
            let own_end = d.edge(s.edge).is_incident(w) && is_arc_end(s, p);
            if !own_end {
                violations.push(Violation {
                    kind: ViolationKind::PassesThroughVertex,
                    edges: vec![s.edge],
                    witness: Some(p.clone()),
                });
            }
        }
    }

    let per_segment: Vec<SegmentFindings> = (0..table.len())
        .into_par_iter()
        .map(|i| {
            let mut local = Vec::new();
            let mut crossings = Vec::new();
            let si = &table[i];
            for sj in &table[i + 1..] {
                if !si.bbox.overlaps(&sj.bbox) {
                    continue;
                }
                let kind = segment_intersection(&si.segment, &sj.segment);
                if si.edge == sj.edge {
                    let adjacent = si.index + 1 == sj.index;
                    let ok = match &kind {
                        IntersectionKind::Disjoint => true,
                        IntersectionKind::EndpointTouch(_) => adjacent,
                        _ => false,
                    };
                    if !ok {
                        local.push(Violation {
                            kind: ViolationKind::SelfIntersection,
                            edges: vec![si.edge],
                            witness: kind.point().cloned(),
                        });
                    }
                    continue;
                }
                let pair = vec![si.edge, sj.edge];
                match kind {
                    IntersectionKind::Disjoint => {}
                    IntersectionKind::ProperCross(p) => crossings.push((p, si.edge, sj.edge)),
                    IntersectionKind::EndpointTouch(p) => {
                        if !(is_arc_end(si, &p) && is_arc_end(sj, &p)) {
                            local.push(Violation {
                                kind: ViolationKind::BreakpointIncidence,
                                edges: pair,
                                witness: Some(p),
                            });
                        }
                    }
                    IntersectionKind::ImproperTouch(p) => {
                        let at_breakpoint = (p == si.segment.a || p == si.segment.b)
                            && !is_arc_end(si, &p)
                            || (p == sj.segment.a || p == sj.segment.b) && !is_arc_end(sj, &p);
                        local.push(Violation {
                            kind: if at_breakpoint {
                                ViolationKind::BreakpointIncidence
                            } else {
                                ViolationKind::Touching
                            },
                            edges: pair,
                            witness: Some(p),
                        });
                    }
                    IntersectionKind::Overlap => local.push(Violation {
                        kind: ViolationKind::Overlap,
                        edges: pair,
                        witness: None,
                    }),
                }
            }
            (local, crossings)
        })
        .collect();

    let mut through: BTreeMap<Point, BTreeSet<EdgeId>> = BTreeMap::new();
    for (local, crossings) in per_segment {
        violations.extend(local);
        for (p, a, b) in crossings {
            let set = through.entry(p).or_default();
            set.insert(a);
            set.insert(b);
        }
    }
    for (p, edges) in through {
        if edges.len() >= 3 {
            violations.push(Violation {
                kind: ViolationKind::Concurrent,
                edges: edges.into_iter().collect(),
                witness: Some(p),
            });
        }
    }

    ValidationReport {
        ok: violations.is_empty(),
        violations,
    }
}

#[derive(Serialize, Deserialize)]
struct EdgeRecord {
    u: usize,
    v: usize,
    arc: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct DrawingRecord {
    vertices: Vec<Point>,
    edges: Vec<EdgeRecord>,
}

/// Parses the JSON drawing format.
pub fn load(bytes: &[u8]) -> Result<Drawing> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let record: DrawingRecord = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Parse(format!("{} (field {})", e.into_inner(), path))
    })?;
    let mut edges = Vec::with_capacity(record.edges.len());
    for (i, e) in record.edges.into_iter().enumerate() {
        let arc = Arc::new(e.arc).map_err(|err| match err {
            Error::Schema { message, .. } => Error::schema(format!("edges[{i}].arc"), message),
            other => other,
        })?;
        edges.push(Edge { u: e.u, v: e.v, arc });
    }
    Drawing::new(record.vertices, edges)
}

/// Canonical JSON: one vertex or edge per line.
pub fn save(d: &Drawing) -> Vec<u8> {
    let mut out = String::from("{\n  \"vertices\": [");
    for (i, p) in d.vertices().iter().enumerate() {
        out.push_str(if i == 0 { "\n    " } else { ",\n    " });
        out.push_str(&serde_json::to_string(p).expect("point serializes"));
    }
    out.push_str(if d.n() == 0 { "],\n" } else { "\n  ],\n" });
    out.push_str("  \"edges\": [");
    for (i, e) in d.edges().iter().enumerate() {
        out.push_str(if i == 0 { "\n    " } else { ",\n    " });
        let arc = serde_json::to_string(e.arc.points()).expect("arc serializes");
        out.push_str(&format!("{{\"u\": {}, \"v\": {}, \"arc\": {}}}", e.u, e.v, arc));
    }
    out.push_str(if d.e() == 0 { "]\n}\n" } else { "\n  ]\n}\n" });
    out.into_bytes()
}
