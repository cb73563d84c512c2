//! Exact topological bisection width on small drawings.
//!
//! For a fixed bipartition every edge between the parts must go, so the search only
//! chooses, inside each part, a smallest set of edges whose removal leaves the part
//! separated and single-crossing. Only edges of parallel classes and edges crossing
//! some edge twice can matter there.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::crossing::require_valid;
use crate::drawing::{Drawing, EdgeId, VertexId};
use crate::error::{Error, Result};
use crate::lens::{analyze_unchecked, class_regions};

pub const MAX_VERTICES: usize = 10;
pub const MAX_EDGES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BisectionResult {
    pub width: usize,
    pub partition: (Vec<VertexId>, Vec<VertexId>),
    pub deleted_edges: Vec<EdgeId>,
    pub parts_valid: bool,
}

struct PairMask {
    a: EdgeId,
    b: EdgeId,
    inside_edges: u32,
    inside_vertices: u32,
}

/// Bitmask view of everything condition (iii) depends on.
struct Structure {
    ends: Vec<(VertexId, VertexId)>,
    /// Per edge: edges it crosses at least twice.
    double: Vec<u32>,
    /// Per edge: parallel edges it crosses.
    parallel_cross: Vec<u32>,
    classes: Vec<(u32, Vec<PairMask>)>,
    problem: u32,
}

fn bit(i: usize) -> u32 {
    1 << i
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| mask & bit(i) != 0)
}

impl Structure {
    fn new(d: &Drawing) -> Self {
        let a = analyze_unchecked(d);
        let e = d.e();
        let mut double = vec![0u32; e];
        for (&(x, y), &c) in &a.crossings.pair_counts {
            if c >= 2 {
                double[x] |= bit(y);
                double[y] |= bit(x);
            }
        }
        let mut parallel_cross = vec![0u32; e];
        let mut classes = Vec::new();
        let mut problem = 0u32;
        for class in &a.classes {
            let ids = &class.edge_ids;
            if ids.len() < 2 {
                continue;
            }
            let mut mask = 0;
            for &x in ids {
                mask |= bit(x);
                for &y in ids {
                    if x != y && a.crossings.pair_count(x, y) > 0 {
                        parallel_cross[x] |= bit(y);
                    }
                }
            }
            let pairs = class_regions(d, class)
                .into_iter()
                .filter(|r| a.crossings.pair_count(r.a, r.b) == 0)
                .map(|r| PairMask {
                    a: r.a,
                    b: r.b,
                    inside_edges: r.inside_edges.iter().fold(0, |m, &x| m | bit(x)),
                    inside_vertices: r.inside_vertices.iter().fold(0, |m, &x| m | bit(x)),
                })
                .collect();
            problem |= mask;
            classes.push((mask, pairs));
        }
        for (x, &m) in double.iter().enumerate() {
            if m != 0 {
                problem |= bit(x);
            }
        }
        Structure {
            ends: d.edges().iter().map(|e| (e.u, e.v)).collect(),
            double,
            parallel_cross,
            classes,
            problem,
        }
    }

    fn induced(&self, vmask: u32) -> u32 {
        self.ends
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| vmask & bit(u) != 0 && vmask & bit(v) != 0)
            .fold(0, |m, (i, _)| m | bit(i))
    }

    /// Whether the part on `vmask` with edges `emask` is separated and single-crossing.
    fn part_ok(&self, vmask: u32, emask: u32) -> bool {
        for x in bits(emask) {
            if self.double[x] & emask != 0 || self.parallel_cross[x] & emask != 0 {
                return false;
            }
        }
        for (mask, pairs) in &self.classes {
            let s = mask & emask;
            if s.count_ones() < 2 {
                continue;
            }
            for p in pairs {
                let both = bit(p.a) | bit(p.b);
                if s & both == both && p.inside_edges & s == 0 && p.inside_vertices & vmask == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest removable subset of the part's problem edges, first in
    /// lexicographic order among those of minimum size.
    fn min_repair(&self, vmask: u32) -> u32 {
        let intra = self.induced(vmask);
        if self.part_ok(vmask, intra) {
            return 0;
        }
        let candidates: Vec<usize> = bits(intra & self.problem).collect();
        for size in 1..=candidates.len() {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                let r = idx.iter().fold(0, |m, &i| m | bit(candidates[i]));
                if self.part_ok(vmask, intra & !r) {
                    return r;
                }
                // Next combination.
                let mut i = size;
                while i > 0 && idx[i - 1] == candidates.len() - size + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..size {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        intra & self.problem
    }
}

fn mask_to_vec(mask: u32) -> Vec<usize> {
    bits(mask).collect()
}

/// Side labels per vertex: 0 for the part holding vertex 0.
fn encoding(mask: u32, n: usize) -> Vec<u8> {
    (0..n).map(|v| u8::from(mask & bit(v) == 0)).collect()
}

/// Re-checks conditions (i)-(iii) on the returned partition from scratch.
pub fn verify_bisection(d: &Drawing, r: &BisectionResult) -> bool {
    let cap = 4 * d.n() / 5;
    let (v1, v2) = &r.partition;
    if v1.len() > cap || v2.len() > cap || v1.len() + v2.len() != d.n() {
        return false;
    }
    let mut side = vec![None; d.n()];
    for &v in v1 {
        side[v] = Some(0);
    }
    for &v in v2 {
        side[v] = Some(1);
    }
    if side.iter().any(Option::is_none) {
        return false;
    }
    let mut kept = [Vec::new(), Vec::new()];
    for (id, e) in d.edges().iter().enumerate() {
        if r.deleted_edges.binary_search(&id).is_ok() {
            continue;
        }
        if side[e.u] != side[e.v] {
            return false;
        }
        kept[side[e.u].unwrap()].push(id);
    }
    [v1, v2].iter().zip(kept.iter()).all(|(vs, es)| {
        d.subdrawing(vs, es)
            .map(|(sub, _)| analyze_unchecked(&sub).is_separated_single_crossing())
            .unwrap_or(false)
    })
}

/// Minimum number of edge deletions over all bipartitions with both parts at most
/// `floor(4n/5)` vertices, leaving no edge between the parts and both parts
/// separated and single-crossing.
pub fn bisection_width_exact(d: &Drawing) -> Result<BisectionResult> {
    require_valid(d)?;
    let n = d.n();
    if n > MAX_VERTICES || d.e() > MAX_EDGES {
        return Err(Error::TooLarge(format!(
            "n = {n}, e = {} (limits {MAX_VERTICES}, {MAX_EDGES})",
            d.e()
        )));
    }
    let cap = 4 * n / 5;
    if n < 2 || n > 2 * cap {
        return Err(Error::TooSmall(format!("no bipartition of {n} vertices into parts of at most {cap}")));
    }
    let s = Structure::new(d);
    let all_v = (1u32 << n) - 1;
    let all_e = if d.e() == 0 { 0 } else { (1u32 << d.e()) - 1 };

    let best = (0..1u32 << (n - 1))
        .into_par_iter()
        .map(|rest| (rest << 1) | 1)
        .filter(|&m| (m.count_ones() as usize) <= cap && ((all_v & !m).count_ones() as usize) <= cap)
        .map(|m| {
            let inside = s.induced(m) | s.induced(all_v & !m);
            let cross = all_e & !inside;
            let deleted = cross | s.min_repair(m) | s.min_repair(all_v & !m);
            (deleted.count_ones(), encoding(m, n), m, deleted)
        })
        .min_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)))
        .expect("at least one feasible bipartition");

    let (width, _, m, deleted) = best;
    let mut result = BisectionResult {
        width: width as usize,
        partition: (mask_to_vec(m), mask_to_vec(all_v & !m)),
        deleted_edges: mask_to_vec(deleted),
        parts_valid: false,
    };
    result.parts_valid = verify_bisection(d, &result);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_convex_complete, gen_nested_lenses};
    use crate::geometry::Point;

    fn star() -> Drawing {
        let v = vec![
            Point::new(0, 0),
            Point::new(1, 0),
            Point::new(0, 1),
            Point::new(-1, 0),
            Point::new(0, -1),
        ];
        let edges = (1..5).map(|i| Drawing::straight_edge(&v, 0, i)).collect();
        Drawing::new(v, edges).unwrap()
    }

    #[test]
    fn published_values() {
        let r = bisection_width_exact(&star()).unwrap();
        assert_eq!(r.width, 1);
        assert!(r.parts_valid);
        let r = bisection_width_exact(&gen_convex_complete(4).unwrap()).unwrap();
        assert_eq!(r.width, 3);
        assert!(r.parts_valid);
        assert_eq!(r.partition.0.len().min(r.partition.1.len()), 1);
    }

    #[test]
    fn edgeless() {
        let v: Vec<Point> = (0..5).map(|i| Point::new(i, i * i)).collect();
        let d = Drawing::new(v, vec![]).unwrap();
        assert_eq!(bisection_width_exact(&d).unwrap().width, 0);
    }

    #[test]
    fn limits() {
        let d = Drawing::new(vec![Point::new(0, 0)], vec![]).unwrap();
        assert!(matches!(bisection_width_exact(&d), Err(Error::TooSmall(_))));
        let d = gen_convex_complete(7).unwrap();
        assert!(matches!(bisection_width_exact(&d), Err(Error::TooLarge(_))));
    }

    #[test]
    fn nested_needs_repair() {
        // Hubs split apart cut all arcs; together, a part without witnesses must
        // drop arcs until no empty lens remains.
        let d = gen_nested_lenses(4);
        let r = bisection_width_exact(&d).unwrap();
        assert!(r.parts_valid);
        assert!(r.width >= 1);
    }
}
