//! Drawing families with exact rational coordinates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::drawing::{Arc, Drawing, Edge, ViolationKind};
use crate::error::{Error, Result};
use crate::geometry::{orient, Orientation, Point};
use crate::lens::analyze_unchecked;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Semicircle,
    NestedLenses,
    ConvexComplete,
    RandomSeparated,
    /// Odd cycle drawn as a star polygon; every two independent edges cross.
    StarThrackle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    /// Vertex count (semicircle, convex, random, star) or arc count (nested).
    pub size: usize,
    pub seed: u64,
    pub extra_parallel: usize,
    pub segments_per_arc: usize,
    pub label: String,
}

impl GeneratorSpec {
    pub fn new(family: Family, size: usize) -> Self {
        GeneratorSpec {
            family,
            size,
            seed: 0,
            extra_parallel: 0,
            segments_per_arc: DEFAULT_SEGMENTS_PER_ARC,
            label: String::new(),
        }
    }

    pub fn generate(&self) -> Result<Drawing> {
        let n = self.size;
        match self.family {
            Family::Semicircle => gen_semicircle(n, self.segments_per_arc),
            Family::NestedLenses => {
                if n < 1 {
                    return Err(Error::Domain("nested lenses need k >= 1".into()));
                }
                Ok(gen_nested_lenses(n))
            }
            Family::ConvexComplete => gen_convex_complete(n),
            Family::RandomSeparated => gen_random_separated(n, self.extra_parallel, self.seed),
            Family::StarThrackle => gen_star_thrackle(n),
        }
    }
}

pub const DEFAULT_SEGMENTS_PER_ARC: usize = 32;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Half-angle tangents for one quarter of a semicircle, from the end (t = 0) to the
/// apex (t = 1). `first` overrides the first interior sample.
fn quarter_grid(half: usize, first: Option<Rational>, attempt: usize) -> Vec<Rational> {
    let h = half as i64;
    let mut t: Vec<Rational> = (0..=h).map(|m| rat(m, h)).collect();
    if attempt > 0 {
        // Deterministic nudge of interior samples, monotone for small attempts.
        for (m, tm) in t.iter_mut().enumerate().take(half).skip(1) {
            let bump = rat(attempt as i64, 97 * (m as i64 + 3) * h);
            *tm = &*tm + &bump;
        }
    }
    if let Some(f) = first {
        t[1] = f;
    }
    t
}

/// Polyline through rational points of the semicircle with the given center and
/// radius, traversed left to right, above (`sign = 1`) or below (`sign = -1`) the
/// x-axis. The end marked `refine_left` / right gets a radius dependent first sample
/// so that arcs sharing that end leave it in distinct directions.
fn semicircle_points(
    center: &Rational,
    radius: &Rational,
    sign: i64,
    half: usize,
    refine_left: bool,
    attempt: usize,
) -> Vec<Point> {
    let base = quarter_grid(half, None, attempt);
    let refined_first = &base[2] / (Rational::one() + radius);
    let refined = quarter_grid(half, Some(refined_first), attempt);
    let (left, right) = if refine_left { (&refined, &base) } else { (&base, &refined) };
    let s = Rational::from(sign);
    let at = |t: &Rational, from_left: bool| {
        let tt = t * t;
        let den = Rational::one() + &tt;
        let cos = (Rational::one() - &tt) / &den;
        let sin = (t + t) / &den;
        let dx = radius * &cos;
        let x = if from_left { center - &dx } else { center + &dx };
        Point {
            x,
            y: &s * &(radius * &sin),
        }
    };
    let mut pts: Vec<Point> = left.iter().map(|t| at(t, true)).collect();
    pts.extend(right.iter().rev().skip(1).map(|t| at(t, false)));
    pts
}

/// `(i, k, j)` triples with `1 <= i <= k < j <= n` in edge order, with the point
/// `p_ikj` in `(k, k + 1)`.
pub fn semicircle_triples(n: usize) -> Vec<(usize, usize, usize, Rational)> {
    // Per interval k, the (i, j) pairs spanning it get distinct offsets r / (D + 1).
    let mut offset = std::collections::BTreeMap::new();
    for k in 1..n {
        let spanning: Vec<(usize, usize)> = (1..=k)
            .flat_map(|i| (k + 1..=n).map(move |j| (i, j)))
            .collect();
        let d = spanning.len() as i64;
        for (r, (i, j)) in spanning.into_iter().enumerate() {
            offset.insert((i, k, j), rat(r as i64 + 1, d + 1));
        }
    }
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in i..j {
                let p = Rational::from(k as i64) + &offset[&(i, k, j)];
                out.push((i, k, j, p));
            }
        }
    }
    out
}

fn semicircle_attempt(n: usize, segments_per_arc: usize, attempt: usize) -> Result<Drawing> {
    let half = segments_per_arc.div_ceil(2);
    let vertices: Vec<Point> = (1..=n as i64).map(|x| Point::new(x, 0)).collect();
    let half_r = rat(1, 2);
    let mut edges = Vec::new();
    for (i, _k, j, p) in semicircle_triples(n) {
        let xi = Rational::from(i as i64);
        let xj = Rational::from(j as i64);
        let upper = semicircle_points(
            &((&xi + &p) * &half_r),
            &((&p - &xi) * &half_r),
            1,
            half,
            true,
            attempt,
        );
        let lower = semicircle_points(
            &((&p + &xj) * &half_r),
            &((&xj - &p) * &half_r),
            -1,
            half,
            false,
            attempt,
        );
        let mut pts = upper;
        pts.extend(lower.into_iter().skip(1));
        edges.push(Edge {
            u: i - 1,
            v: j - 1,
            arc: Arc::new(pts)?,
        });
    }
    Drawing::new(vertices, edges)
}

/// Vertices `1..=n` on the x-axis and, for every `i <= k < j`, an arc made of an
/// upper semicircle from `i` to `p_ikj` and a lower one from `p_ikj` to `j`.
///
/// The output is checked: it must be in general position, no pair may cross more
/// than twice, parallel arcs may not cross and the drawing must be separated.
pub fn gen_semicircle(n: usize, segments_per_arc: usize) -> Result<Drawing> {
    if n < 2 {
        return Err(Error::Domain("semicircle construction needs n >= 2".into()));
    }
    if segments_per_arc < 8 {
        return Err(Error::Domain("segments_per_arc must be at least 8".into()));
    }
    let mut last = String::new();
    for attempt in 0..6 {
        let d = semicircle_attempt(n, segments_per_arc, attempt)?;
        let report = d.validate();
        if !report.ok {
            last = format!("{:?}", report.violations[0]);
            continue;
        }
        let analysis = analyze_unchecked(&d);
        if analysis.crossings.max_pair > 2 {
            last = format!("pair crossing {} times", analysis.crossings.max_pair);
            continue;
        }
        if !analysis.verdict.separated {
            last = format!("{:?}", analysis.verdict.violations[0]);
            continue;
        }
        return Ok(d);
    }
    Err(Error::DegenerateDiscretization(last))
}

/// Two hubs joined by `k` nested two-segment arcs through `(0, h)`, with a witness
/// vertex at `(0, h + 1/2)` inside each of the `k - 1` lenses.
pub fn gen_nested_lenses(k: usize) -> Drawing {
    assert!(k >= 1, "nested lenses need k >= 1");
    let k = k as i64;
    let u = Point::new(-k - 1, 0);
    let v = Point::new(k + 1, 0);
    let mut vertices = vec![u.clone(), v.clone()];
    vertices.extend((1..k).map(|h| Point {
        x: Rational::zero(),
        y: Rational::from(h) + rat(1, 2),
    }));
    let edges = (1..=k)
        .map(|h| Edge {
            u: 0,
            v: 1,
            arc: Arc::new(vec![u.clone(), Point::new(0, h), v.clone()]).expect("distinct points"),
        })
        .collect();
    Drawing::new(vertices, edges).expect("nested lenses are well formed")
}

/// `n` rational points on a circle of radius 8, roughly evenly spread.
fn convex_points(n: usize, attempt: usize) -> Vec<Point> {
    let radius = Rational::from(8);
    let denom = 1009 + 10 * attempt as i64;
    (0..n)
        .map(|i| {
            let jitter = 0.011 * ((i * i + 3 * attempt) % 7) as f64;
            let theta = -std::f64::consts::PI
                + 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / n as f64
                + jitter;
            let t = Rational::approximate((theta / 2.0).tan(), denom);
            let tt = &t * &t;
            let den = Rational::one() + &tt;
            Point {
                x: &radius * &((Rational::one() - &tt) / &den),
                y: &radius * &((&t + &t) / &den),
            }
        })
        .collect()
}

fn straight_drawing(points: Vec<Point>, pairs: &[(usize, usize)]) -> Result<Drawing> {
    let edges = pairs
        .iter()
        .map(|&(u, v)| Drawing::straight_edge(&points, u, v))
        .collect();
    Drawing::new(points, edges)
}

fn first_valid(n: usize, pairs: &[(usize, usize)]) -> Result<Drawing> {
    for attempt in 0..20 {
        let d = straight_drawing(convex_points(n, attempt), pairs)?;
        if d.validate().ok {
            return Ok(d);
        }
    }
    Err(Error::GenerationExhausted(format!(
        "no general-position convex placement for n = {n}"
    )))
}

/// Straight-line complete graph on points in convex position.
pub fn gen_convex_complete(n: usize) -> Result<Drawing> {
    if n < 3 {
        return Err(Error::Domain("convex complete graph needs n >= 3".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    first_valid(n, &pairs)
}

/// Odd cycle `C_n` drawn as the star polygon `{n / ((n - 1) / 2)}`.
pub fn gen_star_thrackle(n: usize) -> Result<Drawing> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::Domain("star thrackle needs odd n >= 3".into()));
    }
    let step = (n - 1) / 2;
    let pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + step) % n)).collect();
    first_valid(n, &pairs)
}

const GRID: i64 = 64;
const ROUTE_ATTEMPTS: usize = 8;

fn random_points(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Point>> {
    let mut pts: Vec<Point> = Vec::with_capacity(n);
    let mut tries = 0;
    while pts.len() < n {
        tries += 1;
        if tries > 100_000 {
            return Err(Error::GenerationExhausted(format!("{n} points in general position")));
        }
        let p = Point::new(rng.random_range(0..=GRID), rng.random_range(0..=GRID));
        if pts.contains(&p) {
            continue;
        }
        let collinear = (0..pts.len()).any(|a| {
            (a + 1..pts.len()).any(|b| orient(&pts[a], &pts[b], &p) == Orientation::Collinear)
        });
        if !collinear {
            pts.push(p);
        }
    }
    Ok(pts)
}

/// Random separated single-crossing drawing: a random straight-line graph on points
/// in general position, plus up to `extra_parallel` bent companions of existing
/// edges, each routed around some other vertex. Routes that break general position,
/// the single-crossing property or separatedness are discarded.
pub fn gen_random_separated(n: usize, extra_parallel: usize, seed: u64) -> Result<Drawing> {
    if n < 3 {
        return Err(Error::Domain("random separated drawings need n >= 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = random_points(n, &mut rng)?;
    let density: f64 = rng.random_range(0.15..0.6);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(density) {
                pairs.push((u, v));
            }
        }
    }
    if pairs.is_empty() {
        pairs.push((0, 1));
    }
    let mut drawing = straight_drawing(points.clone(), &pairs)?;
    // Straight edges only violate general position through concurrent crossings.
    loop {
        let report = drawing.validate();
        match report
            .violations
            .iter()
            .find(|v| v.kind == ViolationKind::Concurrent)
        {
            Some(v) => {
                let drop = *v.edges.last().expect("concurrent violation lists edges");
                drawing = drawing.without_edges(&[drop]);
            }
            None if report.ok => break,
            None => {
                return Err(Error::GenerationExhausted(format!(
                    "unexpected violation {:?}",
                    report.violations[0]
                )))
            }
        }
    }

    for _ in 0..extra_parallel {
        if drawing.e() == 0 {
            break;
        }
        for _ in 0..ROUTE_ATTEMPTS {
            let base = drawing.edge(rng.random_range(0..drawing.e())).clone();
            let mut x = rng.random_range(0..n);
            while x == base.u || x == base.v {
                x = rng.random_range(0..n);
            }
            let (pu, pw, px) = (&points[base.u], &points[base.v], &points[x]);
            let mid = pu.midpoint(pw);
            let stretch = Rational::new(rng.random_range(4..=32), 16);
            let jx = Rational::new(rng.random_range(-3..=3), 17);
            let jy = Rational::new(rng.random_range(-3..=3), 17);
            let apex = Point {
                x: &px.x + &(&px.x - &mid.x) * &stretch + jx,
                y: &px.y + &(&px.y - &mid.y) * &stretch + jy,
            };
            if apex == *pu || apex == *pw || orient(pu, pw, &apex) == Orientation::Collinear {
                continue;
            }
            let arc = Arc::new(vec![pu.clone(), apex, pw.clone()])?;
            let mut edges = drawing.edges().to_vec();
            edges.push(Edge {
                u: base.u,
                v: base.v,
                arc,
            });
            let candidate = Drawing::new(drawing.vertices().to_vec(), edges)?;
            if !candidate.validate().ok {
                continue;
            }
            if analyze_unchecked(&candidate).is_separated_single_crossing() {
                drawing = candidate;
                break;
            }
        }
    }
    Ok(drawing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossing::count_crossings;
    use crate::lens::{lenses, separated_verdict};

    #[test]
    fn nested_shapes() {
        let d = gen_nested_lenses(1);
        assert_eq!((d.n(), d.e()), (2, 1));
        assert!(lenses(&d).unwrap().is_empty());
        let d = gen_nested_lenses(3);
        assert_eq!(d.degree_sequence(), vec![3, 3, 0, 0]);
        let d = gen_nested_lenses(4);
        assert_eq!(count_crossings(&d).unwrap().total, 0);
        assert!(d.validate().ok);
    }

    #[test]
    fn convex_counts() {
        assert_eq!(count_crossings(&gen_convex_complete(3).unwrap()).unwrap().total, 0);
        assert_eq!(count_crossings(&gen_convex_complete(4).unwrap()).unwrap().total, 1);
        assert_eq!(count_crossings(&gen_convex_complete(5).unwrap()).unwrap().total, 5);
    }

    #[test]
    fn semicircle_small() {
        let d = gen_semicircle(3, 32).unwrap();
        assert_eq!(d.e(), 4);
        let d = gen_semicircle(4, 32).unwrap();
        assert_eq!(d.e(), 10);
        assert!(separated_verdict(&d).unwrap().separated);
    }

    #[test]
    fn semicircle_offsets_distinct() {
        let triples = semicircle_triples(5);
        assert_eq!(triples.len(), (125 - 5) / 6);
        let mut ps: Vec<_> = triples.iter().map(|t| t.3.clone()).collect();
        ps.sort();
        ps.dedup();
        assert_eq!(ps.len(), triples.len());
        for (_, k, _, p) in &triples {
            assert!(*p > Rational::from(*k as i64) && *p < Rational::from(*k as i64 + 1));
        }
    }

    #[test]
    fn random_without_extras_is_simple() {
        let d = gen_random_separated(6, 0, 3).unwrap();
        assert_eq!(d.max_multiplicity(), 1);
        assert!(lenses(&d).unwrap().is_empty());
    }

    #[test]
    fn random_with_extras_is_separated() {
        let d = gen_random_separated(6, 2, 1).unwrap();
        let v = separated_verdict(&d).unwrap();
        assert!(v.separated && v.single_crossing);
        assert!(lenses(&d).unwrap().iter().all(|l| l.size >= 1));
    }

    #[test]
    fn star_thrackle_c5() {
        let d = gen_star_thrackle(5).unwrap();
        let r = count_crossings(&d).unwrap();
        assert_eq!(r.total, 5);
    }
}
