mod common;

use lenscross::bisection::{bisection_width_exact, verify_bisection};
use lenscross::bounds::{default_c_param, evaluate_bounds, theorem1_holds};
use lenscross::generators::{gen_convex_complete, gen_nested_lenses, gen_random_separated, gen_star_thrackle};
use lenscross::{check_lemma4, thrackle_check, Rational};
use proptest::prelude::*;

proptest! {
    #[test]
    fn bounds_monotone_in_e(n in 2u64..60, e in 0u64..3000, de in 1u64..500, m in 1u64..5) {
        let c = default_c_param();
        let a = evaluate_bounds(n, e, m, &c).unwrap();
        let b = evaluate_bounds(n, e + de, m, &c).unwrap();
        prop_assert!(a.euler_lower < b.euler_lower);
        if let (Some(x), Some(y)) = (&a.eq1_classic, &b.eq1_classic) {
            prop_assert!(x <= y);
        }
        if let (Some(x), Some(y)) = (&a.eq2_szekely, &b.eq2_szekely) {
            prop_assert!(x <= y);
        }
        if let (Some(x), Some(y)) = (&a.corollary2, &b.corollary2) {
            prop_assert!(x.lo <= y.hi);
            prop_assert!(x.approx <= y.approx * (1.0 + 1e-12));
        }
    }

    #[test]
    fn theorem1_cap_matches_floating_point(n in 2u64..200, e in 0u64..3_000_000) {
        let cap = 64.0 * (n * n) as f64 * (n as f64).log2();
        prop_assume!((e as f64 - cap).abs() > 1e-6 * cap);
        prop_assert_eq!(theorem1_holds(n, e).unwrap(), (e as f64) <= cap);
    }

    #[test]
    fn thrackle_premise_implies_bound(n in 3usize..9, extra in 0usize..3, seed in 0u64..1000) {
        let d = gen_random_separated(n, extra, seed).unwrap();
        let t = thrackle_check(&d).unwrap();
        prop_assert!(!t.premise_holds || t.bound_holds);
    }
}

#[test]
fn star_thrackles_satisfy_premise() {
    for n in (3..=15).step_by(2) {
        let t = thrackle_check(&gen_star_thrackle(n).unwrap()).unwrap();
        assert!(t.premise_holds && t.bound_holds, "C_{n}");
    }
}

#[test]
fn bisection_matches_brute_force() {
    let mut ds = vec![
        common::star_k14(),
        gen_convex_complete(4).unwrap(),
        gen_convex_complete(5).unwrap(),
        gen_nested_lenses(4),
        gen_star_thrackle(5).unwrap(),
    ];
    for s in 0..8 {
        let d = gen_random_separated(4 + (s % 4) as usize, (s % 3) as usize, s).unwrap();
        if d.e() <= 10 {
            ds.push(d);
        }
    }
    for d in &ds {
        let r = bisection_width_exact(d).unwrap();
        assert!(r.parts_valid);
        assert!(verify_bisection(d, &r));
        assert_eq!(r.width, common::brute_force_bisection(d));
    }
    assert_eq!(bisection_width_exact(&common::star_k14()).unwrap().width, 1);
}

#[test]
fn lemma4_examples() {
    let star = check_lemma4(&common::star_k14()).unwrap();
    assert_eq!((star.lhs, star.radicand), (1, 25));
    assert!(star.holds);
    let d = lenscross::Drawing::new((0..5).map(|i| lenscross::Point::new(i, i * i)).collect(), vec![]).unwrap();
    let l = check_lemma4(&d).unwrap();
    assert_eq!(l.lhs, 0);
    assert!(l.holds);
}

#[test]
fn c_param_is_respected() {
    let big = Rational::from(1000);
    let v = evaluate_bounds(10, 45, 1, &big).unwrap();
    assert_eq!(v.eq1_classic.unwrap(), Rational::from(1000 * 45 * 45 * 45) / Rational::from(100));
}
