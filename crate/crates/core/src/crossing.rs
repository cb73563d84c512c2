//! Crossing counts between edges: a brute-force engine over all segment pairs and a
//! Bentley-Ottmann sweep that must agree with it.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::drawing::{Arc, Drawing, EdgeId};
use crate::error::{Error, Result};
use crate::geometry::{segment_intersection, IntersectionKind, Point};

pub use crate::sweep::count_crossings_sweep;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CrossingPoint {
    pub edges: (EdgeId, EdgeId),
    pub point: Point,
}

/// Per-pair crossing counts. Pairs are stored as `(i, j)` with `i < j`; pairs that
/// do not cross are absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingReport {
    #[serde(with = "pair_keys")]
    pub pair_counts: BTreeMap<(EdgeId, EdgeId), u64>,
    pub total: u64,
    pub max_pair: u64,
    pub crossing_points: Vec<CrossingPoint>,
}

impl CrossingReport {
    /// Builds the report from raw `(edge, edge, point)` crossings in any order.
    pub fn from_crossings(raw: impl IntoIterator<Item = (EdgeId, EdgeId, Point)>) -> Self {
        let mut crossing_points: Vec<CrossingPoint> = raw
            .into_iter()
            .map(|(a, b, point)| CrossingPoint {
                edges: (a.min(b), a.max(b)),
                point,
            })
            .collect();
        crossing_points.sort();
        let mut pair_counts = BTreeMap::new();
        for c in &crossing_points {
            *pair_counts.entry(c.edges).or_insert(0u64) += 1;
        }
        CrossingReport {
            total: crossing_points.len() as u64,
            max_pair: pair_counts.values().copied().max().unwrap_or(0),
            pair_counts,
            crossing_points,
        }
    }

    pub fn pair_count(&self, a: EdgeId, b: EdgeId) -> u64 {
        self.pair_counts
            .get(&(a.min(b), a.max(b)))
            .copied()
            .unwrap_or(0)
    }

    /// Number of crossings among the given edges (a subdrawing's crossing number).
    pub fn crossings_within(&self, edges: &[EdgeId]) -> u64 {
        let mut inside = std::collections::BTreeSet::new();
        inside.extend(edges.iter().copied());
        self.pair_counts
            .iter()
            .filter(|((a, b), _)| inside.contains(a) && inside.contains(b))
            .map(|(_, c)| *c)
            .sum()
    }
}

mod pair_keys {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<(usize, usize), u64>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        serializer.collect_map(map.iter().map(|((a, b), c)| (format!("{a}-{b}"), c)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<BTreeMap<(usize, usize), u64>, D::Error> {
        let raw = BTreeMap::<String, u64>::deserialize(deserializer)?;
        raw.into_iter()
            .map(|(k, c)| {
                let (a, b) = k
                    .split_once('-')
                    .ok_or_else(|| D::Error::custom(format!("bad pair key {k:?}")))?;
                let a: usize = a.parse().map_err(D::Error::custom)?;
                let b: usize = b.parse().map_err(D::Error::custom)?;
                if a >= b {
                    return Err(D::Error::custom(format!("pair key {k:?} needs i < j")));
                }
                Ok(((a, b), c))
            })
            .collect()
    }
}

pub(crate) fn require_valid(d: &Drawing) -> Result<()> {
    let report = d.validate();
    if report.ok {
        Ok(())
    } else {
        Err(Error::InvalidDrawing(report.violations.len()))
    }
}

/// Brute force over every pair of segments on distinct arcs.
pub fn count_crossings(d: &Drawing) -> Result<CrossingReport> {
    require_valid(d)?;
    Ok(count_crossings_unchecked(d))
}

pub(crate) fn count_crossings_unchecked(d: &Drawing) -> CrossingReport {
    let table = d.segment_table();
    let raw: Vec<(EdgeId, EdgeId, Point)> = (0..table.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let si = &table[i];
            table[i + 1..]
                .iter()
                .filter(move |sj| sj.edge != si.edge && si.bbox.overlaps(&sj.bbox))
                .filter_map(move |sj| match segment_intersection(&si.segment, &sj.segment) {
                    IntersectionKind::ProperCross(p) => Some((si.edge, sj.edge, p)),
                    _ => None,
                })
        })
        .collect();
    CrossingReport::from_crossings(raw)
}

/// Proper crossings between two arcs.
pub fn arc_crossings(a: &Arc, b: &Arc) -> Vec<Point> {
    let mut out = Vec::new();
    for sa in a.segments() {
        let ba = sa.coarse_box();
        for sb in b.segments() {
            if !ba.overlaps(&sb.coarse_box()) {
                continue;
            }
            if let IntersectionKind::ProperCross(p) = segment_intersection(&sa, &sb) {
                out.push(p);
            }
        }
    }
    out
}

/// True iff no two edges cross more than once.
pub fn is_single_crossing(r: &CrossingReport) -> bool {
    r.max_pair <= 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::Drawing;
    use crate::geometry::Point;

    fn pentagram() -> Drawing {
        // Five points in convex position, edges i -> i+2.
        let v = vec![
            Point::new(0, 10),
            Point::new(9, 3),
            Point::new(6, -8),
            Point::new(-6, -8),
            Point::new(-9, 3),
        ];
        let edges = (0..5)
            .map(|i| Drawing::straight_edge(&v, i, (i + 2) % 5))
            .collect();
        Drawing::new(v, edges).unwrap()
    }

    #[test]
    fn pentagram_counts() {
        let r = count_crossings(&pentagram()).unwrap();
        assert_eq!(r.total, 5);
        assert!(is_single_crossing(&r));
        // Brute-force oracle over edge pairs using the four-point orientation test.
        let d = pentagram();
        let mut expected = 0;
        for a in 0..5 {
            for b in a + 1..5 {
                let (ea, eb) = (d.edge(a), d.edge(b));
                if ea.shares_endpoint(eb) {
                    continue;
                }
                let p = |i| d.vertex(i);
                let o = |x, y, z| crate::geometry::orient(p(x), p(y), p(z));
                if o(ea.u, ea.v, eb.u) != o(ea.u, ea.v, eb.v) && o(eb.u, eb.v, ea.u) != o(eb.u, eb.v, ea.v) {
                    expected += 1;
                }
            }
        }
        assert_eq!(r.total, expected);
    }

    #[test]
    fn report_json_keys() {
        let r = count_crossings(&pentagram()).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["pair_counts"]["0-1"], 1);
        let back: CrossingReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn edgeless_is_single_crossing() {
        let d = Drawing::new(vec![Point::new(0, 0), Point::new(1, 1)], vec![]).unwrap();
        let r = count_crossings(&d).unwrap();
        assert_eq!(r.total, 0);
        assert_eq!(r.max_pair, 0);
        assert!(is_single_crossing(&r));
    }

    #[test]
    fn invalid_drawing_rejected() {
        let v = vec![Point::new(0, 0), Point::new(2, 0), Point::new(1, 0), Point::new(1, 3)];
        let edges = vec![Drawing::straight_edge(&v, 0, 1), Drawing::straight_edge(&v, 2, 3)];
        let d = Drawing::new(v, edges).unwrap();
        assert!(matches!(count_crossings(&d), Err(Error::InvalidDrawing(_))));
    }
}
