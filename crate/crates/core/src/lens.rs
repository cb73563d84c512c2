//! Parallel classes, lenses and the separated / single-crossing verdict.
//!
//! Two noncrossing parallel arcs bound a lens when no other arc of the same class
//! enters the region between them. Regions are computed per class; arcs of other
//! classes may pass through a lens without affecting it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::crossing::{count_crossings_unchecked, require_valid, CrossingReport};
use crate::drawing::{Drawing, EdgeId, VertexId};
use crate::error::{Error, Result};
use crate::geometry::{point_in_polygon, Point, PolygonLocation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelClass {
    pub endpoints: (VertexId, VertexId),
    pub edge_ids: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LensRecord {
    pub bounding_edges: (EdgeId, EdgeId),
    pub endpoints: (VertexId, VertexId),
    /// First bounding arc from the smaller endpoint, then the second one back.
    pub region: Vec<Point>,
    pub interior_vertices: Vec<VertexId>,
    pub size: usize,
}

impl LensRecord {
    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.interior_vertices.binary_search(&v).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeparationViolationKind {
    CrossingParallelPair,
    EmptyLens,
    DoubleCrossingPair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationViolation {
    pub kind: SeparationViolationKind,
    pub edges: (EdgeId, EdgeId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatedVerdict {
    pub separated: bool,
    pub single_crossing: bool,
    pub violations: Vec<SeparationViolation>,
}

/// Partition of the edge ids by unordered endpoint pair, sorted by endpoints.
pub fn parallel_classes(d: &Drawing) -> Vec<ParallelClass> {
    let mut classes: BTreeMap<(VertexId, VertexId), Vec<EdgeId>> = BTreeMap::new();
    for (id, e) in d.edges().iter().enumerate() {
        classes.entry(e.key()).or_default().push(id);
    }
    classes
        .into_iter()
        .map(|(endpoints, edge_ids)| ParallelClass { endpoints, edge_ids })
        .collect()
}

/// Region between two parallel arcs and what lies strictly inside it.
#[derive(Debug, Clone)]
pub(crate) struct PairRegion {
    pub a: EdgeId,
    pub b: EdgeId,
    pub region: Vec<Point>,
    /// Other edges of the class lying inside the region.
    pub inside_edges: Vec<EdgeId>,
    pub inside_vertices: Vec<VertexId>,
}

fn pair_polygon(d: &Drawing, a: EdgeId, b: EdgeId) -> Vec<Point> {
    let first = d.edge(a).canonical_arc();
    let second = d.edge(b).canonical_arc();
    let mut region = first.points().to_vec();
    let back = second.points();
    region.extend(back[1..back.len() - 1].iter().rev().cloned());
    region
}

fn inside(p: &Point, region: &[Point]) -> bool {
    // Regions from noncrossing arcs of a valid drawing are simple and no vertex or
    // other arc touches their boundary.
    matches!(point_in_polygon(p, region), Ok(PolygonLocation::Inside))
}

/// Probe point on an arc away from its endpoints.
fn probe(d: &Drawing, e: EdgeId) -> Point {
    let pts = d.edge(e).arc.points();
    pts[0].midpoint(&pts[1])
}

/// All pair regions of one noncrossing class.
pub(crate) fn class_regions(d: &Drawing, class: &ParallelClass) -> Vec<PairRegion> {
    let ids = &class.edge_ids;
    let probes: Vec<Point> = ids.iter().map(|&e| probe(d, e)).collect();
    let mut out = Vec::new();
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            let region = pair_polygon(d, ids[i], ids[j]);
            let inside_edges = (0..ids.len())
                .filter(|&k| k != i && k != j && inside(&probes[k], &region))
                .map(|k| ids[k])
                .collect();
            let (u, v) = class.endpoints;
            let inside_vertices = (0..d.n())
                .filter(|&w| w != u && w != v && inside(d.vertex(w), &region))
                .collect();
            out.push(PairRegion {
                a: ids[i],
                b: ids[j],
                region,
                inside_edges,
                inside_vertices,
            });
        }
    }
    out
}

fn class_lenses(d: &Drawing, class: &ParallelClass) -> Vec<LensRecord> {
    if class.edge_ids.len() < 2 {
        return Vec::new();
    }
    class_regions(d, class)
        .into_iter()
        .filter(|r| r.inside_edges.is_empty())
        .map(|r| LensRecord {
            bounding_edges: (r.a, r.b),
            endpoints: class.endpoints,
            size: r.inside_vertices.len(),
            interior_vertices: r.inside_vertices,
            region: r.region,
        })
        .collect()
}

fn first_crossing_pair(class: &ParallelClass, report: &CrossingReport) -> Option<(EdgeId, EdgeId)> {
    let ids = &class.edge_ids;
    for i in 0..ids.len() {
        for &b in &ids[i + 1..] {
            if report.pair_count(ids[i], b) > 0 {
                return Some((ids[i], b));
            }
        }
    }
    None
}

/// The lens set `L` of the drawing.
pub fn lenses(d: &Drawing) -> Result<Vec<LensRecord>> {
    require_valid(d)?;
    let report = count_crossings_unchecked(d);
    let classes = parallel_classes(d);
    if let Some((a, b)) = classes.iter().find_map(|c| first_crossing_pair(c, &report)) {
        return Err(Error::CrossingParallelPair(a, b));
    }
    Ok(classes.iter().flat_map(|c| class_lenses(d, c)).collect())
}

/// Everything the checkers need about one validated drawing.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub crossings: CrossingReport,
    pub classes: Vec<ParallelClass>,
    /// Lenses of every class whose arcs are pairwise noncrossing.
    pub lenses: Vec<LensRecord>,
    pub verdict: SeparatedVerdict,
}

impl Analysis {
    pub fn is_separated_single_crossing(&self) -> bool {
        self.verdict.separated && self.verdict.single_crossing
    }
}

pub fn analyze(d: &Drawing) -> Result<Analysis> {
    require_valid(d)?;
    Ok(analyze_unchecked(d))
}

pub(crate) fn analyze_unchecked(d: &Drawing) -> Analysis {
    let crossings = count_crossings_unchecked(d);
    analyze_with(d, crossings)
}

pub(crate) fn analyze_with(d: &Drawing, crossings: CrossingReport) -> Analysis {
    let classes = parallel_classes(d);
    let mut violations = Vec::new();
    let mut all_lenses = Vec::new();
    for class in &classes {
        let ids = &class.edge_ids;
        let mut crossing = false;
        for i in 0..ids.len() {
            for &b in &ids[i + 1..] {
                if crossings.pair_count(ids[i], b) > 0 {
                    crossing = true;
                    violations.push(SeparationViolation {
                        kind: SeparationViolationKind::CrossingParallelPair,
                        edges: (ids[i], b),
                    });
                }
            }
        }
        if crossing {
            continue;
        }
        for lens in class_lenses(d, class) {
            if lens.size == 0 {
                violations.push(SeparationViolation {
                    kind: SeparationViolationKind::EmptyLens,
                    edges: lens.bounding_edges,
                });
            }
            all_lenses.push(lens);
        }
    }
    let separated = violations.is_empty();
    for (&pair, &count) in &crossings.pair_counts {
        if count >= 2 {
            violations.push(SeparationViolation {
                kind: SeparationViolationKind::DoubleCrossingPair,
                edges: pair,
            });
        }
    }
    let verdict = SeparatedVerdict {
        separated,
        single_crossing: crossings.max_pair <= 1,
        violations,
    };
    Analysis {
        crossings,
        classes,
        lenses: all_lenses,
        verdict,
    }
}

pub fn separated_verdict(d: &Drawing) -> Result<SeparatedVerdict> {
    Ok(analyze(d)?.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::{Arc, Edge};
    use crate::generators::gen_nested_lenses;

    fn pt(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn nested_classes_and_lenses() {
        let d = gen_nested_lenses(4);
        let classes = parallel_classes(&d);
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].edge_ids.len(), 4);
        let ls = lenses(&d).unwrap();
        assert_eq!(ls.len(), 3);
        assert!(ls.iter().all(|l| l.size == 1));
        let v = separated_verdict(&d).unwrap();
        assert!(v.separated && v.single_crossing);
    }

    #[test]
    fn empty_lens_after_deleting_witness() {
        let d = gen_nested_lenses(3);
        // Witness vertices are 2 and 3; drop the last one.
        let d = d.without_isolated_vertex(3).unwrap();
        let v = separated_verdict(&d).unwrap();
        assert!(!v.separated);
        assert!(v
            .violations
            .iter()
            .any(|x| x.kind == SeparationViolationKind::EmptyLens));
    }

    #[test]
    fn crossing_parallel_pair() {
        let v = vec![pt(0, 0), pt(10, 0)];
        let up = Edge {
            u: 0,
            v: 1,
            arc: Arc::new(vec![pt(0, 0), pt(3, 4), pt(7, -4), pt(10, 0)]).unwrap(),
        };
        let down = Edge {
            u: 1,
            v: 0,
            arc: Arc::new(vec![pt(10, 0), pt(7, 4), pt(3, -4), pt(0, 0)]).unwrap(),
        };
        let d = Drawing::new(v, vec![up, down]).unwrap();
        assert!(matches!(lenses(&d), Err(Error::CrossingParallelPair(0, 1))));
        let verdict = separated_verdict(&d).unwrap();
        assert!(!verdict.separated);
        assert_eq!(
            verdict.violations[0].kind,
            SeparationViolationKind::CrossingParallelPair
        );
    }

    #[test]
    fn fan_on_both_sides() {
        // Arcs above and below the straight edge: lenses are the two faces touching it.
        let v = vec![pt(0, 0), pt(6, 0), pt(3, 1), pt(3, -1)];
        let mk = |h: i64| Edge {
            u: 0,
            v: 1,
            arc: Arc::new(vec![pt(0, 0), pt(3, h), pt(6, 0)]).unwrap(),
        };
        let d = Drawing::new(v, vec![mk(2), Drawing::straight_edge(&[pt(0, 0), pt(6, 0)], 0, 1), mk(-2)]).unwrap();
        let ls = lenses(&d).unwrap();
        let pairs: Vec<_> = ls.iter().map(|l| l.bounding_edges).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2)]);
        assert_eq!(ls[0].interior_vertices, vec![2]);
        assert_eq!(ls[1].interior_vertices, vec![3]);
    }
}
