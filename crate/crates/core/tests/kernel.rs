mod common;

use lenscross::geometry::{orient, point_in_polygon, segment_intersection, Orientation, PolygonLocation};
use lenscross::{IntersectionKind, Point, Rational, Segment};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = Rational> {
    prop_oneof![
        3 => (-10i64..=10).prop_map(Rational::from),
        1 => (-40i64..=40, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d)),
    ]
}

fn point() -> impl Strategy<Value = Point> {
    (coord(), coord()).prop_map(|(x, y)| Point { x, y })
}

fn segment() -> impl Strategy<Value = Segment> {
    (point(), point())
        .prop_filter("nondegenerate", |(a, b)| a != b)
        .prop_map(|(a, b)| Segment::new(a, b).unwrap())
}

fn flip(o: Orientation) -> Orientation {
    match o {
        Orientation::Left => Orientation::Right,
        Orientation::Right => Orientation::Left,
        Orientation::Collinear => Orientation::Collinear,
    }
}

fn same_kind(a: &IntersectionKind, b: &IntersectionKind) -> bool {
    std::mem::discriminant(a) == std::mem::discriminant(b) && a.point() == b.point()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn intersection_matches_linear_solve(s1 in segment(), s2 in segment()) {
        let fast = segment_intersection(&s1, &s2);
        let slow = common::solve_intersection(&s1, &s2);
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn intersection_is_symmetric(s1 in segment(), s2 in segment()) {
        let base = segment_intersection(&s1, &s2);
        prop_assert!(same_kind(&base, &segment_intersection(&s2, &s1)));
        let r1 = Segment::new(s1.b.clone(), s1.a.clone()).unwrap();
        prop_assert!(same_kind(&base, &segment_intersection(&r1, &s2)));
    }

    #[test]
    fn orientation_antisymmetry(p in point(), q in point(), r in point()) {
        prop_assert_eq!(orient(&p, &q, &r), flip(orient(&q, &p, &r)));
        prop_assert_eq!(orient(&p, &q, &r), orient(&q, &r, &p));
    }
}

/// Star-shaped polygon around the origin from points sorted by angle.
fn star_polygon(raw: Vec<(i64, i64)>) -> Option<Vec<Point>> {
    let mut pts: Vec<(i64, i64)> = raw.into_iter().filter(|&(x, y)| (x, y) != (0, 0)).collect();
    let half = |&(x, y): &(i64, i64)| u8::from(y < 0 || (y == 0 && x < 0));
    pts.sort_by(|a, b| half(a).cmp(&half(b)).then((b.0 * a.1 - a.0 * b.1).cmp(&0)));
    pts.dedup_by(|a, b| half(a) == half(b) && a.0 * b.1 == a.1 * b.0);
    if pts.len() < 3 {
        return None;
    }
    // Consecutive angular gaps must stay below pi for the origin to be interior.
    for i in 0..pts.len() {
        let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
        if a.0 * b.1 - a.1 * b.0 <= 0 {
            return None;
        }
    }
    Some(pts.into_iter().map(|(x, y)| Point::new(x, y)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn point_in_polygon_invariant_under_rotation_and_reversal(
        raw in prop::collection::vec((-9i64..=9, -9i64..=9), 3..12),
        q in point(),
        shift in 0usize..12,
    ) {
        let Some(poly) = star_polygon(raw) else { return Ok(()) };
        let Ok(base) = point_in_polygon(&q, &poly) else { return Ok(()) };
        let mut rotated = poly.clone();
        rotated.rotate_left(shift % poly.len());
        prop_assert_eq!(point_in_polygon(&q, &rotated).unwrap(), base);
        let mut reversed = poly.clone();
        reversed.reverse();
        prop_assert_eq!(point_in_polygon(&q, &reversed).unwrap(), base);
        prop_assert_eq!(
            point_in_polygon(&Point::new(0, 0), &poly).unwrap(),
            PolygonLocation::Inside
        );
    }
}
