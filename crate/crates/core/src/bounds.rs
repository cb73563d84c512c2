//! Closed-form crossing bounds and their verdicts on concrete drawings.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::bisection::bisection_width_exact;
use crate::crossing::require_valid;
use crate::drawing::Drawing;
use crate::error::{Error, Result};
use crate::lens::analyze_unchecked;
use crate::log2::{cmp_log2, log2_enclosure, log2_exact};
use crate::rational::Rational;

/// Default constant for the classical crossing lemma forms.
pub fn default_c_param() -> Rational {
    Rational::new(1, 64)
}

/// `10^-25`, the constant of the multigraph crossing bound.
pub fn corollary_constant() -> Rational {
    Rational::new(1, num_traits::pow(num_bigint::BigInt::from(10), 25))
}

/// A bound value: exact when rational, otherwise a certified enclosure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub exact: Option<Rational>,
    pub lo: Rational,
    pub hi: Rational,
    pub approx: f64,
}

const DISPLAY_BITS: u32 = 64;

impl BoundValue {
    pub fn exact(v: Rational) -> Self {
        BoundValue {
            approx: v.to_f64(),
            lo: v.clone(),
            hi: v.clone(),
            exact: Some(v),
        }
    }

    /// `c * log2 x` with `c >= 0`.
    fn times_log2(c: &Rational, x: &Rational) -> Result<Self> {
        if let Some(l) = log2_exact(x) {
            return Ok(Self::exact(c * &l));
        }
        let (lo, hi) = log2_enclosure(x, DISPLAY_BITS)?;
        Ok(BoundValue {
            approx: c.to_f64() * x.to_f64().log2(),
            lo: c * &lo,
            hi: c * &hi,
            exact: None,
        })
    }

    /// `c / log2 x` with `c >= 0` and `x > 1`.
    fn over_log2(c: &Rational, x: &Rational) -> Result<Self> {
        if let Some(l) = log2_exact(x) {
            return Ok(Self::exact(c / &l));
        }
        let (lo, hi) = log2_enclosure(x, DISPLAY_BITS)?;
        Ok(BoundValue {
            approx: c.to_f64() / x.to_f64().log2(),
            lo: c / &hi,
            hi: c / &lo,
            exact: None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundValues {
    pub eq1_classic: Option<Rational>,
    pub eq2_szekely: Option<Rational>,
    pub corollary2: Option<BoundValue>,
    pub euler_lower: Rational,
    pub theorem1_edge_cap: BoundValue,
}

/// Every bound formula at `(n, e, m)`; `c` is the crossing-lemma constant.
pub fn evaluate_bounds(n: u64, e: u64, m: u64, c: &Rational) -> Result<BoundValues> {
    if n < 2 {
        return Err(Error::Domain(format!("bounds need n >= 2, got {n}")));
    }
    if m < 1 {
        return Err(Error::Domain("multiplicity bound m must be >= 1".into()));
    }
    let (nr, er, mr) = (Rational::from(n), Rational::from(e), Rational::from(m));
    let n2 = &nr * &nr;
    let e3 = &(&er * &er) * &er;
    let dense = e >= 4 * n;
    let eq1 = dense.then(|| c * &e3 / &n2);
    let eq2 = dense.then(|| c * &e3 / &(&mr * &n2));
    let corollary2 = if dense {
        let coeff = &corollary_constant() * &e3 / &n2;
        Some(BoundValue::over_log2(&coeff, &(&er / &nr))?)
    } else {
        None
    };
    Ok(BoundValues {
        eq1_classic: eq1,
        eq2_szekely: eq2,
        corollary2,
        euler_lower: &er - &Rational::from(3 * n),
        theorem1_edge_cap: BoundValue::times_log2(&(Rational::from(64) * &n2), &nr)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    NotApplicable,
}

impl Verdict {
    fn of(applicable: bool, holds: impl FnOnce() -> Result<bool>) -> Result<Self> {
        if !applicable {
            return Ok(Verdict::NotApplicable);
        }
        Ok(if holds()? { Verdict::Holds } else { Verdict::Fails })
    }

    pub fn failed(self) -> bool {
        self == Verdict::Fails
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundVerdicts {
    pub eq1_classic: Verdict,
    pub eq2_szekely: Verdict,
    pub corollary2: Verdict,
    pub euler_lower: Verdict,
    pub theorem1: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u64,
    pub e: u64,
    pub m: u64,
    pub cr_actual: u64,
    pub c_param: Rational,
    pub separated: bool,
    pub single_crossing: bool,
    pub values: Option<BoundValues>,
    pub verdicts: BoundVerdicts,
}

impl BoundReport {
    /// True unless a theorem-backed verdict fails. The crossing-lemma forms depend on
    /// the caller's constant and are informational.
    pub fn theorems_hold(&self) -> bool {
        ![
            self.verdicts.theorem1,
            self.verdicts.euler_lower,
            self.verdicts.corollary2,
        ]
        .iter()
        .any(|v| v.failed())
    }
}

/// `e <= 64 n^2 log2 n`.
pub fn theorem1_holds(n: u64, e: u64) -> Result<bool> {
    if n < 2 {
        return Ok(e == 0);
    }
    let q = Rational::new(e, 64 * n * n);
    Ok(cmp_log2(&q, &Rational::from(n))? != Ordering::Greater)
}

/// `cr >= 10^-25 e^3 / (n^2 log2(e/n))`, for `e >= 4n`.
fn corollary2_holds(n: u64, e: u64, cr: u64) -> Result<bool> {
    let (nr, er) = (Rational::from(n), Rational::from(e));
    let rhs_times_log = &corollary_constant() * &(&(&er * &er) * &er) / &(&nr * &nr);
    if cr == 0 {
        return Ok(rhs_times_log.is_zero());
    }
    // cr * log2(e/n) >= C  <=>  log2(e/n) >= C / cr
    let q = &rhs_times_log / &Rational::from(cr);
    Ok(cmp_log2(&q, &(&er / &nr))? != Ordering::Greater)
}

pub fn check_drawing_bounds(d: &Drawing, c_param: &Rational) -> Result<BoundReport> {
    require_valid(d)?;
    let a = analyze_unchecked(d);
    let (n, e) = (d.n() as u64, d.e() as u64);
    let m = (d.max_multiplicity() as u64).max(1);
    let cr = a.crossings.total;
    let sep = a.verdict.separated;
    let sc = a.verdict.single_crossing;
    let values = if n >= 2 {
        Some(evaluate_bounds(n, e, m, c_param)?)
    } else {
        None
    };
    let crv = Rational::from(cr);
    let dense = n >= 2 && e >= 4 * n;
    let simple = d.max_multiplicity() <= 1;
    let v = values.as_ref();
    let verdicts = BoundVerdicts {
        eq1_classic: Verdict::of(dense && simple, || {
            Ok(crv >= *v.unwrap().eq1_classic.as_ref().unwrap())
        })?,
        eq2_szekely: Verdict::of(dense, || Ok(crv >= *v.unwrap().eq2_szekely.as_ref().unwrap()))?,
        corollary2: Verdict::of(dense && sep && sc, || corollary2_holds(n, e, cr))?,
        euler_lower: Verdict::of(sep && sc, || {
            Ok(cr as i128 >= e as i128 - 3 * n as i128)
        })?,
        theorem1: Verdict::of(sep && sc, || theorem1_holds(n, e))?,
    };
    Ok(BoundReport {
        n,
        e,
        m,
        cr_actual: cr,
        c_param: c_param.clone(),
        separated: sep,
        single_crossing: sc,
        values,
        verdicts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThrackleCheck {
    pub premise_holds: bool,
    pub bound_holds: bool,
}

/// Premise: simple, single-crossing, every independent pair crosses once.
/// Conclusion: `e <= 4n`.
pub fn thrackle_check(d: &Drawing) -> Result<ThrackleCheck> {
    require_valid(d)?;
    let a = analyze_unchecked(d);
    let mut premise = d.max_multiplicity() <= 1 && a.verdict.single_crossing;
    'outer: for i in 0..d.e() {
        if !premise {
            break;
        }
        for j in i + 1..d.e() {
            if !d.edge(i).shares_endpoint(d.edge(j)) && a.crossings.pair_count(i, j) != 1 {
                premise = false;
                break 'outer;
            }
        }
    }
    Ok(ThrackleCheck {
        premise_holds: premise,
        bound_holds: d.e() <= 4 * d.n(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma4Check {
    pub lhs: u64,
    /// `c(G) + sum of squared degrees + n`.
    pub radicand: u64,
    pub rhs: f64,
    pub holds: bool,
}

/// `b(G) <= 22 sqrt(c(G) + sum d_i^2 + n)`, decided exactly by squaring.
pub fn check_lemma4(d: &Drawing) -> Result<Lemma4Check> {
    require_valid(d)?;
    let a = analyze_unchecked(d);
    if !a.verdict.separated {
        return Err(Error::NotSeparated);
    }
    if !a.verdict.single_crossing {
        return Err(Error::NotSingleCrossing);
    }
    let b = bisection_width_exact(d)?.width as u64;
    let squares: u64 = d.degree_sequence().iter().map(|&x| (x * x) as u64).sum();
    let radicand = a.crossings.total + squares + d.n() as u64;
    Ok(Lemma4Check {
        lhs: b,
        radicand,
        rhs: 22.0 * (radicand as f64).sqrt(),
        holds: b * b <= 484 * radicand,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_convex_complete, gen_nested_lenses, gen_star_thrackle};

    #[test]
    fn formula_examples() {
        let c = default_c_param();
        let v = evaluate_bounds(2, 0, 1, &c).unwrap();
        assert_eq!(v.theorem1_edge_cap.exact, Some(Rational::from(256)));
        let v = evaluate_bounds(100, 400, 1, &c).unwrap();
        assert_eq!(v.corollary2.unwrap().exact, Some(Rational::from(3200) * corollary_constant()));
        assert_eq!(evaluate_bounds(5, 10, 1, &c).unwrap().euler_lower, Rational::from(-5));
        assert!(matches!(evaluate_bounds(1, 0, 1, &c), Err(Error::Domain(_))));
    }

    #[test]
    fn irrational_cap_is_enclosed() {
        let v = evaluate_bounds(6, 5, 1, &default_c_param()).unwrap();
        let cap = v.theorem1_edge_cap;
        assert!(cap.exact.is_none());
        let f = 64.0 * 36.0 * 6f64.log2();
        assert!(cap.lo < cap.hi);
        assert!((cap.lo.to_f64() - f).abs() < 1e-9 * f);
        assert!(theorem1_holds(6, 5).unwrap());
        assert!(theorem1_holds(3, 64 * 9).unwrap());
        assert!(!theorem1_holds(3, 64 * 9 * 2).unwrap());
    }

    #[test]
    fn drawing_verdicts() {
        let r = check_drawing_bounds(&gen_nested_lenses(5), &default_c_param()).unwrap();
        assert_eq!(r.verdicts.theorem1, Verdict::Holds);
        let r = check_drawing_bounds(&gen_convex_complete(10).unwrap(), &default_c_param()).unwrap();
        assert_eq!(r.cr_actual, 210);
        assert_eq!(r.verdicts.euler_lower, Verdict::Holds);
        // e = 45 >= 4n, so the classical form applies: 210 >= 45^3 / 6400.
        assert_eq!(r.verdicts.eq1_classic, Verdict::Holds);
        assert!(r.theorems_hold());
    }

    #[test]
    fn thrackle_examples() {
        let c5 = gen_star_thrackle(5).unwrap();
        let t = thrackle_check(&c5).unwrap();
        assert!(t.premise_holds && t.bound_holds);
        let k4 = gen_convex_complete(4).unwrap();
        assert!(!thrackle_check(&k4).unwrap().premise_holds);
        let single = gen_nested_lenses(1);
        let t = thrackle_check(&single).unwrap();
        assert!(t.premise_holds && t.bound_holds);
    }

    #[test]
    fn lemma4_on_k4() {
        let c = check_lemma4(&gen_convex_complete(4).unwrap()).unwrap();
        assert_eq!(c.lhs, 3);
        assert_eq!(c.radicand, 41);
        assert!(c.holds);
    }
}
