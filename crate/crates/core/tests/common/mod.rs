#![allow(dead_code)]

use std::collections::HashMap;

use lenscross::generators::{
    gen_convex_complete, gen_nested_lenses, gen_random_separated, gen_star_thrackle,
};
use lenscross::{analyze, Drawing, IntersectionKind, Point, Rational, Segment};

/// Segment intersection by solving `a + t (b - a) = c + u (d - c)` directly.
pub fn solve_intersection(s1: &Segment, s2: &Segment) -> IntersectionKind {
    let (a, b, c, d) = (&s1.a, &s1.b, &s2.a, &s2.b);
    let (rx, ry) = (&b.x - &a.x, &b.y - &a.y);
    let (sx, sy) = (&d.x - &c.x, &d.y - &c.y);
    let (qx, qy) = (&c.x - &a.x, &c.y - &a.y);
    let cross = |ax: &Rational, ay: &Rational, bx: &Rational, by: &Rational| ax * by - ay * bx;
    let denom = cross(&rx, &ry, &sx, &sy);
    let zero = Rational::zero();
    let one = Rational::one();
    if !denom.is_zero() {
        let t = cross(&qx, &qy, &sx, &sy) / &denom;
        let u = cross(&qx, &qy, &rx, &ry) / &denom;
        if t < zero || t > one || u < zero || u > one {
            return IntersectionKind::Disjoint;
        }
        let p = Point {
            x: &a.x + &t * &rx,
            y: &a.y + &t * &ry,
        };
        let t_end = t == zero || t == one;
        let u_end = u == zero || u == one;
        return match (t_end, u_end) {
            (false, false) => IntersectionKind::ProperCross(p),
            (true, true) => IntersectionKind::EndpointTouch(p),
            _ => IntersectionKind::ImproperTouch(p),
        };
    }
    if !cross(&qx, &qy, &rx, &ry).is_zero() {
        return IntersectionKind::Disjoint;
    }
    // Collinear: project c and d onto the parameter of s1.
    let rr = &rx * &rx + &ry * &ry;
    let param = |p: &Point| ((&p.x - &a.x) * &rx + (&p.y - &a.y) * &ry) / &rr;
    let (t0, t1) = (param(c), param(d));
    let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
    let lo = if lo > zero { lo } else { zero };
    let hi = if hi < one { hi } else { one };
    if lo > hi {
        IntersectionKind::Disjoint
    } else if lo == hi {
        IntersectionKind::EndpointTouch(Point {
            x: &a.x + &lo * &rx,
            y: &a.y + &lo * &ry,
        })
    } else {
        IntersectionKind::Overlap
    }
}

fn separated_single_crossing(d: &Drawing, vertices: &[usize], edges: &[usize]) -> bool {
    let (sub, _) = d.subdrawing(vertices, edges).expect("subdrawing");
    analyze(&sub).expect("valid").is_separated_single_crossing()
}

/// Minimum bisection width by trying every bipartition against every deletion set,
/// smallest deletion sets first.
pub fn brute_force_bisection(d: &Drawing) -> usize {
    let n = d.n();
    let e = d.e();
    let cap = 4 * n / 5;
    let partitions: Vec<u32> = (0u32..(1 << n))
        .filter(|m| {
            let size = m.count_ones() as usize;
            size <= cap && n - size <= cap
        })
        .collect();
    let mut memo: HashMap<(u32, u32), bool> = HashMap::new();
    for size in 0..=e as u32 {
        for del in (0u32..(1 << e)).filter(|m| m.count_ones() == size) {
            for &m in &partitions {
                if feasible(d, m, del, &mut memo) {
                    return size as usize;
                }
            }
        }
    }
    unreachable!("deleting every edge always works")
}

fn feasible(d: &Drawing, m: u32, del: u32, memo: &mut HashMap<(u32, u32), bool>) -> bool {
    let n = d.n();
    let mut parts = [(Vec::new(), 0u32), (Vec::new(), 0u32)];
    for (id, edge) in d.edges().iter().enumerate() {
        if del & (1 << id) != 0 {
            continue;
        }
        let su = m & (1 << edge.u) != 0;
        let sv = m & (1 << edge.v) != 0;
        if su != sv {
            return false;
        }
        let side = usize::from(!su);
        parts[side].0.push(id);
        parts[side].1 |= 1 << id;
    }
    let vmask = [m, !m & ((1 << n) - 1)];
    (0..2).all(|s| {
        *memo.entry((vmask[s], parts[s].1)).or_insert_with(|| {
            let vs: Vec<usize> = (0..n).filter(|&v| vmask[s] & (1 << v) != 0).collect();
            separated_single_crossing(d, &vs, &parts[s].0)
        })
    })
}

pub fn star_k14() -> Drawing {
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

pub fn pentagram() -> Drawing {
    gen_star_thrackle(5).unwrap()
}

/// Separated single-crossing instances with at most 12 vertices.
pub fn corpus(random_instances: u64) -> Vec<(String, Drawing)> {
    use rayon::prelude::*;
    let mut out: Vec<(String, Drawing)> = Vec::new();
    for k in 1..=11 {
        out.push((format!("nested({k})"), gen_nested_lenses(k)));
    }
    for n in 3..=12 {
        out.push((format!("convex({n})"), gen_convex_complete(n).unwrap()));
    }
    for n in (3..=11).step_by(2) {
        out.push((format!("star({n})"), gen_star_thrackle(n).unwrap()));
    }
    let random: Vec<(String, Drawing)> = (0..random_instances)
        .into_par_iter()
        .map(|s| {
            let n = 3 + (s % 10) as usize;
            let extra = (s / 10 % 5) as usize;
            let d = gen_random_separated(n, extra, s).expect("generator succeeds");
            (format!("random(n={n}, extra={extra}, seed={s})"), d)
        })
        .collect();
    out.extend(random);
    out
}
