//! Bentley-Ottmann sweep with exact rational keys.
//!
//! The sweep line is vertical and moves left to right; events are processed in
//! lexicographic `(x, y)` order, so a vertical segment starts at its lower end. At an
//! event point `p` the status holds every segment that meets the sweep line just
//! before `p`, ordered bottom to top. Segments through `p` form a contiguous block
//! which is removed and replaced by the segments continuing past `p`, ordered by
//! direction.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::crossing::{require_valid, CrossingReport};
use crate::drawing::{Drawing, EdgeId};
use crate::error::Result;
use crate::geometry::{segment_intersection, IntersectionKind, Point};
use crate::rational::Rational;

struct SweepSegment {
    edge: EdgeId,
    lo: Point,
    hi: Point,
    dx: Rational,
    dy: Rational,
}

impl SweepSegment {
    fn is_vertical(&self) -> bool {
        self.dx.is_zero()
    }

    /// Height where the segment meets the vertical line through `p`. Vertical
    /// segments report `p.y`; they are only in the status while `p.x` is their x.
    fn key_at(&self, p: &Point) -> Rational {
        if self.is_vertical() {
            return p.y.clone();
        }
        &self.lo.y + &self.dy * (&p.x - &self.lo.x) / &self.dx
    }
}

/// Order of two segments leaving a common point, bottom first.
fn by_direction(a: &SweepSegment, b: &SweepSegment) -> Ordering {
    let cross = &a.dx * &b.dy - &a.dy * &b.dx;
    // b counterclockwise of a means a is below.
    0.cmp(&cross.signum())
}

struct Sweep<'a> {
    segs: &'a [SweepSegment],
    queue: BTreeMap<Point, Vec<usize>>,
    status: Vec<usize>,
    crossings: Vec<(EdgeId, EdgeId, Point)>,
}

impl<'a> Sweep<'a> {
    fn schedule(&mut self, a: usize, b: usize, p: &Point) {
        let (sa, sb) = (&self.segs[a], &self.segs[b]);
        if sa.edge == sb.edge {
            return;
        }
        let s1 = crate::geometry::Segment {
            a: sa.lo.clone(),
            b: sa.hi.clone(),
        };
        let s2 = crate::geometry::Segment {
            a: sb.lo.clone(),
            b: sb.hi.clone(),
        };
        if let IntersectionKind::ProperCross(q) = segment_intersection(&s1, &s2) {
            if q > *p {
                self.queue.entry(q).or_default();
            }
        }
    }

    fn handle(&mut self, p: Point, starts: Vec<usize>) {
        let segs = self.segs;
        let below = self
            .status
            .partition_point(|&s| segs[s].key_at(&p) < p.y);
        let above = below
            + self.status[below..].partition_point(|&s| segs[s].key_at(&p) <= p.y);

        let block: Vec<usize> = self.status.drain(below..above).collect();
        let interior: Vec<usize> = block.iter().copied().filter(|&s| segs[s].hi != p).collect();

        for (i, &a) in interior.iter().enumerate() {
            for &b in &interior[i + 1..] {
                if segs[a].edge != segs[b].edge {
                    self.crossings.push((segs[a].edge, segs[b].edge, p.clone()));
                }
            }
        }

        let mut continuing = interior;
        continuing.extend(starts);
        continuing.sort_by(|&a, &b| by_direction(&segs[a], &segs[b]).then(a.cmp(&b)));
        let inserted = continuing.len();
        self.status.splice(below..below, continuing);

        if inserted == 0 {
            if below > 0 && below < self.status.len() {
                self.schedule(self.status[below - 1], self.status[below], &p);
            }
        } else {
            if below > 0 {
                self.schedule(self.status[below - 1], self.status[below], &p);
            }
            let top = below + inserted - 1;
            if top + 1 < self.status.len() {
                self.schedule(self.status[top], self.status[top + 1], &p);
            }
        }
    }
}

/// Same report as [`crate::crossing::count_crossings`], computed by a sweep.
pub fn count_crossings_sweep(d: &Drawing) -> Result<CrossingReport> {
    require_valid(d)?;
    Ok(count_crossings_sweep_unchecked(d))
}

pub(crate) fn count_crossings_sweep_unchecked(d: &Drawing) -> CrossingReport {
    let segs: Vec<SweepSegment> = d
        .segment_table()
        .iter()
        .map(|s| {
            let (lo, hi) = s.segment.ordered();
            SweepSegment {
                edge: s.edge,
                dx: &hi.x - &lo.x,
                dy: &hi.y - &lo.y,
                lo: lo.clone(),
                hi: hi.clone(),
            }
        })
        .collect();

    let mut queue: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
    for (i, s) in segs.iter().enumerate() {
        queue.entry(s.lo.clone()).or_default().push(i);
        queue.entry(s.hi.clone()).or_default();
    }

    let mut sweep = Sweep {
        segs: &segs,
        queue,
        status: Vec::new(),
        crossings: Vec::new(),
    };
    while let Some((p, starts)) = sweep.queue.pop_first() {
        sweep.handle(p, starts);
    }
    CrossingReport::from_crossings(sweep.crossings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossing::count_crossings;
    use crate::drawing::{Arc, Edge};

    fn pt(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn matches_naive_on_grid_with_verticals() {
        // Vertical and horizontal bars crossing in a 3x3 grid pattern.
        let mut v = Vec::new();
        for i in 0..3 {
            v.push(pt(2 * i + 1, 0));
            v.push(pt(2 * i + 1, 7));
        }
        for j in 0..3 {
            v.push(pt(0, 2 * j + 1));
            v.push(pt(7, 2 * j + 1));
        }
        let edges = (0..6).map(|k| Drawing::straight_edge(&v, 2 * k, 2 * k + 1)).collect();
        let d = Drawing::new(v, edges).unwrap();
        let naive = count_crossings(&d).unwrap();
        assert_eq!(naive.total, 9);
        assert_eq!(count_crossings_sweep(&d).unwrap(), naive);
    }

    #[test]
    fn polylines_crossing_twice() {
        let v = vec![pt(0, 0), pt(10, 0), pt(0, 3), pt(10, 3)];
        let e0 = Edge {
            u: 0,
            v: 1,
            arc: Arc::new(vec![pt(0, 0), pt(3, 5), pt(7, 5), pt(10, 0)]).unwrap(),
        };
        let e1 = Drawing::straight_edge(&v, 2, 3);
        let d = Drawing::new(v, vec![e0, e1]).unwrap();
        let r = count_crossings_sweep(&d).unwrap();
        assert_eq!(r.total, 2);
        assert_eq!(r.max_pair, 2);
        assert_eq!(r, count_crossings(&d).unwrap());
    }

    #[test]
    fn empty() {
        let d = Drawing::new(vec![pt(0, 0)], vec![]).unwrap();
        assert_eq!(count_crossings_sweep(&d).unwrap().total, 0);
    }
}
