//! Exact predicates over rational points: orientation, segment intersection and
//! point-in-polygon classification.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::rational::Rational;

/// A point with exact rational coordinates. Ordering is lexicographic in `(x, y)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: impl Into<Rational>, y: impl Into<Rational>) -> Self {
        Point {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn sub(&self, other: &Point) -> (Rational, Rational) {
        (&self.x - &other.x, &self.y - &other.y)
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let half = Rational::new(1, 2);
        Point {
            x: (&self.x + &other.x) * &half,
            y: (&self.y + &other.y) * &half,
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (&self.x, &self.y).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (x, y) = <(Rational, Rational)>::deserialize(deserializer)?;
        Ok(Point { x, y })
    }
}

fn cross(ax: &Rational, ay: &Rational, bx: &Rational, by: &Rational) -> Rational {
    ax * by - ay * bx
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

/// Sign of the determinant of `(q - p, r - p)`.
pub fn orient(p: &Point, q: &Point, r: &Point) -> Orientation {
    let (ux, uy) = q.sub(p);
    let (vx, vy) = r.sub(p);
    match cross(&ux, &uy, &vx, &vy).signum() {
        1 => Orientation::Left,
        -1 => Orientation::Right,
        _ => Orientation::Collinear,
    }
}

/// A nondegenerate straight segment.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, Error> {
        if a == b {
            return Err(Error::DegenerateSegment(Box::new(a)));
        }
        Ok(Segment { a, b })
    }

    /// `(lexicographically smaller, larger)` endpoint.
    pub fn ordered(&self) -> (&Point, &Point) {
        if self.a <= self.b {
            (&self.a, &self.b)
        } else {
            (&self.b, &self.a)
        }
    }

    /// Whether `p` lies on the closed segment.
    pub fn contains(&self, p: &Point) -> bool {
        orient(&self.a, &self.b, p) == Orientation::Collinear && in_closed_box(&self.a, &self.b, p)
    }

    pub fn coarse_box(&self) -> CoarseBox {
        CoarseBox::around(&self.a, &self.b)
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}-{:?}", self.a, self.b)
    }
}

fn in_closed_box(a: &Point, b: &Point, p: &Point) -> bool {
    let (x0, x1) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (y0, y1) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    *x0 <= p.x && p.x <= *x1 && *y0 <= p.y && p.y <= *y1
}

/// Integer bounding box on a 2^-16 grid that encloses the exact box. Disjoint coarse
/// boxes imply disjoint segments; overlapping ones decide nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoarseBox {
    pub x0: i64,
    pub x1: i64,
    pub y0: i64,
    pub y1: i64,
}

const COARSE_SHIFT: u32 = 16;

fn coarse_floor(r: &Rational) -> i64 {
    let scaled = r.numer() * (BigInt::from(1) << COARSE_SHIFT);
    let v = num_integer::Integer::div_floor(&scaled, r.denom());
    v.to_i64().unwrap_or(if v.sign() == num_bigint::Sign::Minus {
        i64::MIN
    } else {
        i64::MAX
    })
}

fn coarse_ceil(r: &Rational) -> i64 {
    coarse_floor(r).saturating_add(1)
}

impl CoarseBox {
    pub fn around(a: &Point, b: &Point) -> Self {
        let (x0, x1) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
        let (y0, y1) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
        CoarseBox {
            x0: coarse_floor(x0),
            x1: coarse_ceil(x1),
            y0: coarse_floor(y0),
            y1: coarse_ceil(y1),
        }
    }

    pub fn of_point(p: &Point) -> Self {
        Self::around(p, p)
    }

    pub fn overlaps(&self, other: &CoarseBox) -> bool {
        self.x0 <= other.x1 && other.x0 <= self.x1 && self.y0 <= other.y1 && other.y0 <= self.y1
    }
}

/// Exact classification of how two segments meet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntersectionKind {
    Disjoint,
    /// Single point strictly inside both segments.
    ProperCross(Point),
    /// Single point that is an endpoint of both segments.
    EndpointTouch(Point),
    /// Single point that is an endpoint of one segment and interior to the other.
    ImproperTouch(Point),
    /// Collinear with a shared piece of positive length.
    Overlap,
}

impl IntersectionKind {
    pub fn point(&self) -> Option<&Point> {
        match self {
            IntersectionKind::ProperCross(p)
            | IntersectionKind::EndpointTouch(p)
            | IntersectionKind::ImproperTouch(p) => Some(p),
            _ => None,
        }
    }
}

pub fn segment_intersection(s1: &Segment, s2: &Segment) -> IntersectionKind {
    let o1 = orient(&s1.a, &s1.b, &s2.a);
    let o2 = orient(&s1.a, &s1.b, &s2.b);
    let o3 = orient(&s2.a, &s2.b, &s1.a);
    let o4 = orient(&s2.a, &s2.b, &s1.b);
    use Orientation::Collinear;

    if o1 == Collinear && o2 == Collinear {
        return collinear_intersection(s1, s2);
    }

    if o1 != Collinear && o2 != Collinear && o3 != Collinear && o4 != Collinear {
        if o1 != o2 && o3 != o4 {
            return IntersectionKind::ProperCross(crossing_point(s1, s2));
        }
        return IntersectionKind::Disjoint;
    }

    // Some endpoint lies on the other segment's supporting line; the segments are
    // not collinear so they share at most one point.
    let candidates = [
        (o1 == Collinear, &s2.a, s1),
        (o2 == Collinear, &s2.b, s1),
        (o3 == Collinear, &s1.a, s2),
        (o4 == Collinear, &s1.b, s2),
    ];
    for (on_line, p, other) in candidates {
        if on_line && in_closed_box(&other.a, &other.b, p) {
            let end_of_1 = *p == s1.a || *p == s1.b;
            let end_of_2 = *p == s2.a || *p == s2.b;
            return if end_of_1 && end_of_2 {
                IntersectionKind::EndpointTouch(p.clone())
            } else {
                IntersectionKind::ImproperTouch(p.clone())
            };
        }
    }
    IntersectionKind::Disjoint
}

fn collinear_intersection(s1: &Segment, s2: &Segment) -> IntersectionKind {
    // Lexicographic order is monotone along a line.
    let (lo1, hi1) = s1.ordered();
    let (lo2, hi2) = s2.ordered();
    let lo = lo1.max(lo2);
    let hi = hi1.min(hi2);
    match lo.cmp(hi) {
        std::cmp::Ordering::Greater => IntersectionKind::Disjoint,
        std::cmp::Ordering::Equal => IntersectionKind::EndpointTouch(lo.clone()),
        std::cmp::Ordering::Less => IntersectionKind::Overlap,
    }
}

/// Intersection point of the supporting lines; callers guarantee they are not parallel.
pub(crate) fn crossing_point(s1: &Segment, s2: &Segment) -> Point {
    let (rx, ry) = s1.b.sub(&s1.a);
    let (sx, sy) = s2.b.sub(&s2.a);
    let (qx, qy) = s2.a.sub(&s1.a);
    let denom = cross(&rx, &ry, &sx, &sy);
    let t = cross(&qx, &qy, &sx, &sy) / denom;
    Point {
        x: &s1.a.x + &t * &rx,
        y: &s1.a.y + &t * &ry,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolygonLocation {
    Inside,
    Outside,
    OnBoundary,
}

/// Classifies `p` against a simple polygon given by its vertex cycle.
///
/// Uses crossing parity along the ray `p + s(1, t)`, `s > 0`, for the first
/// `t = 1, 2, 3, ...` whose ray misses every polygon vertex. Degenerate edges and
/// edges that fold back onto their predecessor are reported as `NonSimplePolygon`.
pub fn point_in_polygon(p: &Point, poly: &[Point]) -> Result<PolygonLocation, Error> {
    let m = poly.len();
    if m < 3 {
        return Err(Error::NonSimplePolygon(format!("{m} vertices")));
    }
    for i in 0..m {
        let a = &poly[i];
        let b = &poly[(i + 1) % m];
        let c = &poly[(i + 2) % m];
        if a == b {
            return Err(Error::NonSimplePolygon(format!("repeated vertex {a:?}")));
        }
        if orient(a, b, c) == Orientation::Collinear {
            let (ux, uy) = b.sub(a);
            let (vx, vy) = c.sub(b);
            if (&ux * &vx + &uy * &vy).signum() < 0 {
                return Err(Error::NonSimplePolygon(format!("edge folds back at {b:?}")));
            }
        }
    }

    for i in 0..m {
        let a = &poly[i];
        let b = &poly[(i + 1) % m];
        if orient(a, b, p) == Orientation::Collinear && in_closed_box(a, b, p) {
            return Ok(PolygonLocation::OnBoundary);
        }
    }

    let (dx, dy) = ray_direction(p, poly);
    let mut crossings = 0usize;
    for i in 0..m {
        let a = &poly[i];
        let b = &poly[(i + 1) % m];
        let sa = side(p, &dx, &dy, a);
        let sb = side(p, &dx, &dy, b);
        if sa == 0 || sb == 0 || sa == sb {
            // Ray misses vertices, so a zero side means the vertex is behind p.
            continue;
        }
        // Line through a, b meets the ray line at p + s*d; count only s > 0.
        let (ex, ey) = b.sub(a);
        let (ax, ay) = a.sub(p);
        let num = cross(&ax, &ay, &ex, &ey);
        let den = cross(&dx, &dy, &ex, &ey);
        if num.signum() == den.signum() {
            crossings += 1;
        }
    }
    Ok(if crossings % 2 == 1 {
        PolygonLocation::Inside
    } else {
        PolygonLocation::Outside
    })
}

fn side(p: &Point, dx: &Rational, dy: &Rational, q: &Point) -> i32 {
    let (qx, qy) = q.sub(p);
    cross(dx, dy, &qx, &qy).signum()
}

fn ray_direction(p: &Point, poly: &[Point]) -> (Rational, Rational) {
    let dx = Rational::one();
    let mut t = 1i64;
    loop {
        let dy = Rational::from(t);
        let hits_vertex = poly.iter().any(|v| {
            let (vx, vy) = v.sub(p);
            cross(&dx, &dy, &vx, &vy).is_zero() && (&vx * &dx + &vy * &dy).signum() > 0
        });
        if !hits_vertex {
            return (dx, dy);
        }
        t += 1;
    }
}
