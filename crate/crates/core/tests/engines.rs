use lenscross::generators::{gen_convex_complete, gen_nested_lenses, gen_random_separated, gen_semicircle};
use lenscross::{count_crossings, count_crossings_sweep, Arc, Drawing, Edge, Point, Rational};
use proptest::prelude::*;

fn rational_point() -> impl Strategy<Value = Point> {
    (-60i64..=60, -60i64..=60, 1i64..=7, 1i64..=7)
        .prop_map(|(x, y, dx, dy)| Point::new(Rational::new(x, dx), Rational::new(y, dy)))
}

/// Random polyline drawings; most are in general position.
fn drawing() -> impl Strategy<Value = Drawing> {
    (3usize..8).prop_flat_map(|n| {
        (
            prop::collection::vec(rational_point(), n),
            prop::collection::vec((0..n, 0..n, prop::collection::vec(rational_point(), 0..3)), 1..10),
        )
    })
    .prop_filter_map("valid drawing", |(vertices, raw)| {
        let edges: Vec<Edge> = raw
            .into_iter()
            .filter(|(u, v, _)| u != v)
            .map(|(u, v, mid)| {
                let mut pts = vec![vertices[u].clone()];
                pts.extend(mid);
                pts.push(vertices[v].clone());
                Edge { u, v, arc: Arc::new(pts).ok()? }.into()
            })
            .collect::<Option<Vec<Edge>>>()?;
        let d = Drawing::new(vertices, edges).ok()?;
        d.validate().ok.then_some(d)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, max_global_rejects: 100_000, ..ProptestConfig::default() })]

    #[test]
    fn sweep_matches_naive(d in drawing()) {
        prop_assert_eq!(count_crossings_sweep(&d).unwrap(), count_crossings(&d).unwrap());
    }
}

#[test]
fn families_agree() {
    let mut ds: Vec<Drawing> = (4..=8).map(|n| gen_convex_complete(n).unwrap()).collect();
    ds.extend((1..=6).map(gen_nested_lenses));
    ds.extend((3..=5).map(|n| gen_semicircle(n, 32).unwrap()));
    ds.extend((0..20).map(|s| gen_random_separated(4 + (s % 6) as usize, 2, s).unwrap()));
    for d in &ds {
        assert_eq!(count_crossings_sweep(d).unwrap(), count_crossings(d).unwrap());
    }
}

#[test]
fn convex_totals_are_four_subsets() {
    for (n, expected) in [(4, 1), (5, 5), (6, 15), (7, 35)] {
        assert_eq!(count_crossings(&gen_convex_complete(n).unwrap()).unwrap().total, expected);
    }
}
