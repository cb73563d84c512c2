//! The splitting process `F_0, F_1, ...` that cuts a drawing into vertex-disjoint
//! pieces by repeated exact bisection until each piece is crossing-heavy or small.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::bisection::bisection_width_exact;
use crate::crossing::require_valid;
use crate::drawing::{Drawing, EdgeId, VertexId};
use crate::error::{Error, Result};
use crate::lens::analyze_unchecked;
use crate::log2::{log2_enclosure, MAX_BITS};
use crate::rational::Rational;
use crate::replay::Checkpoint;

/// The crossing threshold `k`.
#[derive(Debug, Clone, PartialEq)]
pub enum Threshold {
    Exact(Rational),
    /// `10^-10 e^2 / (n^2 log2(e/n))` with `e > n`.
    Density { e: u64, n: u64 },
}

fn ten_pow_neg(p: u32) -> Rational {
    Rational::new(1, num_traits::pow(BigInt::from(10), p as usize))
}

impl Threshold {
    /// The default threshold, or zero when `log2(e/n)` is not positive.
    pub fn from_density(e: u64, n: u64) -> Self {
        if e > n && n > 0 {
            Threshold::Density { e, n }
        } else {
            Threshold::Exact(Rational::zero())
        }
    }

    fn coefficient(e: u64, n: u64) -> Rational {
        ten_pow_neg(10) * Rational::new(e * e, n * n)
    }

    fn enclose(&self, bits: u32) -> Result<Option<(Rational, Rational)>> {
        match self {
            Threshold::Exact(k) => Ok(Some((k.clone(), k.clone()))),
            Threshold::Density { e, n } => {
                let (lo, hi) = log2_enclosure(&Rational::new(*e, *n), bits)?;
                if lo.signum() <= 0 {
                    return Ok(None);
                }
                let c = Self::coefficient(*e, *n);
                Ok(Some((&c / &hi, &c / &lo)))
            }
        }
    }

    /// Evaluates a predicate that is monotone in `k`, refining until both ends of
    /// the enclosure agree.
    pub fn decide(&self, pred: impl Fn(&Rational) -> bool) -> Result<bool> {
        let mut bits = 64;
        while bits <= MAX_BITS {
            if let Some((lo, hi)) = self.enclose(bits)? {
                let a = pred(&lo);
                if a == pred(&hi) {
                    return Ok(a);
                }
            }
            bits *= 2;
        }
        Err(Error::Undecided(MAX_BITS))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Threshold::Exact(k) if k.is_zero())
    }

    pub fn approx(&self) -> f64 {
        match self {
            Threshold::Exact(k) => k.to_f64(),
            Threshold::Density { e, n } => {
                Self::coefficient(*e, *n).to_f64() / (*e as f64 / *n as f64).log2()
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Threshold::Exact(k) => k.to_string(),
            Threshold::Density { e, n } => format!("1e-10*{e}^2/({n}^2*log2({e}/{n}))"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Action {
    Kept,
    Split {
        width: usize,
        deleted_edges: Vec<EdgeId>,
        parts: (Vec<VertexId>, Vec<VertexId>),
        conditions_ok: bool,
        bound_ok: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberSummary {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub v: usize,
    pub e: usize,
    pub c: u64,
    pub action: Action,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionStep {
    pub step: usize,
    pub members: Vec<MemberSummary>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The scheduled last step `i0` was reached.
    StopRule,
    NothingSplittable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionTrace {
    pub k_threshold: String,
    pub k_threshold_approx: f64,
    pub k_overridden: bool,
    pub delta: usize,
    pub n_prime: usize,
    pub i0: Option<usize>,
    pub families: Vec<DecompositionStep>,
    pub stop_step: usize,
    pub stop_reason: StopReason,
    pub edges_deleted_total: usize,
    pub final_heavy_edges: usize,
    pub checkpoints: Vec<Checkpoint>,
}

impl DecompositionTrace {
    pub fn passed(&self) -> bool {
        self.checkpoints.iter().all(|c| c.pass || !c.gating)
    }
}

struct Member {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

fn pow(base: u64, exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), exp)
}

/// `v <= (4/5)^i n`.
fn small_enough(v: usize, i: usize, n: usize) -> bool {
    pow(5, i) * BigInt::from(v) <= pow(4, i) * BigInt::from(n)
}

/// `x <= sqrt(a) + sqrt(b)` for nonnegative rationals.
pub fn le_sum_of_sqrts(x: &Rational, a: &Rational, b: &Rational) -> bool {
    let x2 = x * x;
    if x.signum() <= 0 || x2 <= *b {
        return true;
    }
    // x - sqrt(b) > 0, so square: x^2 + b - a <= 2 x sqrt(b).
    let l = &(&x2 + b) - a;
    if l.signum() <= 0 {
        return true;
    }
    &l * &l <= Rational::from(4) * &x2 * b
}

/// Largest `i` with `(5/4)^i <= 10^-6 e / k`, if `i = 0` qualifies.
fn last_step(k: &Threshold, e: usize) -> Result<Option<usize>> {
    if k.is_zero() {
        return Ok(None);
    }
    let budget = ten_pow_neg(6) * Rational::from(e);
    let ok = |i: usize| {
        let growth = Rational::new(pow(5, i), pow(4, i));
        k.decide(|kv| &growth * kv <= budget)
    };
    if !ok(0)? {
        return Ok(None);
    }
    let mut i = 0;
    while i < 100_000 && ok(i + 1)? {
        i += 1;
    }
    Ok(Some(i))
}

pub fn decompose(d: &Drawing, k_override: Option<Rational>) -> Result<DecompositionTrace> {
    require_valid(d)?;
    let a = analyze_unchecked(d);
    if !a.verdict.separated {
        return Err(Error::NotSeparated);
    }
    if !a.verdict.single_crossing {
        return Err(Error::NotSingleCrossing);
    }
    let (n, e) = (d.n(), d.e());
    if n == 0 {
        return Err(Error::TooSmall("empty drawing".into()));
    }
    let delta = (2 * e).div_ceil(n);
    let mut checkpoints = Vec::new();
    let max_degree = d.degree_sequence().into_iter().enumerate().max_by_key(|&(v, deg)| (deg, std::cmp::Reverse(v)));
    if let Some((vertex, degree)) = max_degree {
        let ok = degree <= delta;
        if !ok && k_override.is_none() {
            return Err(Error::DegreeTooHigh {
                vertex,
                degree,
                limit: delta,
            });
        }
        checkpoints.push(Checkpoint::new("max_degree", degree, "<=", delta, ok).informational());
    }
    if let Some(k) = &k_override {
        if k.signum() < 0 {
            return Err(Error::Domain(format!("k_override must be nonnegative, got {k}")));
        }
    }
    let k_overridden = k_override.is_some();
    let k = match k_override {
        Some(k) => Threshold::Exact(k),
        None => Threshold::from_density(e as u64, n as u64),
    };
    let i0 = last_step(&k, e)?;
    let crossings = &a.crossings;

    let heavy = |m: &Member| -> Result<bool> {
        let c = Rational::from(crossings.crossings_within(&m.edges));
        let eh = Rational::from(m.edges.len());
        k.decide(|kv| c >= kv * &eh)
    };

    let mut family = vec![Member {
        vertices: (0..n).collect(),
        edges: (0..e).collect(),
    }];
    let mut families = Vec::new();
    let mut deleted_total = 0;
    let mut step = 0;
    let stop_reason = loop {
        let mut seen = vec![false; n];
        let disjoint = family
            .iter()
            .flat_map(|m| m.vertices.iter())
            .all(|&v| !std::mem::replace(&mut seen[v], true));
        checkpoints.push(Checkpoint::new(&format!("step{step}.disjoint"), disjoint, "==", true, disjoint));
        let mut invariant = true;
        for m in &family {
            invariant &= heavy(m)? || small_enough(m.vertices.len(), step, n);
        }
        checkpoints.push(Checkpoint::new(
            &format!("step{step}.kept_invariant"),
            invariant,
            "==",
            true,
            invariant,
        ));

        let mut splittable = Vec::with_capacity(family.len());
        for m in &family {
            splittable.push(!heavy(m)? && !small_enough(m.vertices.len(), step + 1, n));
        }
        let reason = if i0 == Some(step) {
            Some(StopReason::StopRule)
        } else if !splittable.iter().any(|&s| s) {
            Some(StopReason::NothingSplittable)
        } else {
            None
        };

        let mut summaries = Vec::new();
        let mut next = Vec::new();
        for (j, (m, split)) in family.into_iter().zip(splittable).enumerate() {
            let c = crossings.crossings_within(&m.edges);
            let mut summary = MemberSummary {
                v: m.vertices.len(),
                e: m.edges.len(),
                c,
                vertices: m.vertices.clone(),
                edges: m.edges.clone(),
                action: Action::Kept,
            };
            if reason.is_some() || !split {
                summaries.push(summary);
                next.push(m);
                continue;
            }
            let (sub, _) = d.subdrawing(&m.vertices, &m.edges)?;
            let r = bisection_width_exact(&sub)?;
            let map_v = |vs: &[usize]| vs.iter().map(|&x| m.vertices[x]).collect::<Vec<_>>();
            let parts = (map_v(&r.partition.0), map_v(&r.partition.1));
            let deleted: Vec<EdgeId> = r.deleted_edges.iter().map(|&x| m.edges[x]).collect();
            let v_h = m.vertices.len();
            let sizes_ok = [&parts.0, &parts.1].iter().all(|p| 5 * p.len() <= 4 * v_h);
            let b = Rational::new(r.width, 40);
            let ke = Rational::from(m.edges.len());
            let vh = Rational::from(v_h);
            let bound_ok = k.decide(|kv| le_sum_of_sqrts(&b, &(kv * &ke), &vh))?;
            let conditions_ok = r.parts_valid && sizes_ok;
            checkpoints.push(Checkpoint::new(
                &format!("step{step}.member{j}.conditions"),
                conditions_ok,
                "==",
                true,
                conditions_ok,
            ));
            checkpoints.push(Checkpoint::new(
                &format!("step{step}.member{j}.bisection_bound"),
                r.width,
                "<=",
                format!("40*(sqrt({}*{})+sqrt({v_h}))", k.describe(), m.edges.len()),
                bound_ok,
            ));
            deleted_total += deleted.len();
            for side in [&parts.0, &parts.1] {
                let mut in_side = vec![false; n];
                for &v in side.iter() {
                    in_side[v] = true;
                }
                let edges = m
                    .edges
                    .iter()
                    .copied()
                    .filter(|x| deleted.binary_search(x).is_err())
                    .filter(|&x| in_side[d.edge(x).u])
                    .collect();
                next.push(Member {
                    vertices: side.clone(),
                    edges,
                });
            }
            summary.action = Action::Split {
                width: r.width,
                deleted_edges: deleted,
                parts,
                conditions_ok,
                bound_ok,
            };
            summaries.push(summary);
        }
        families.push(DecompositionStep {
            step,
            members: summaries,
        });
        if let Some(reason) = reason {
            break reason;
        }
        family = next;
        step += 1;
    };

    let mut final_heavy_edges = 0;
    for m in &families.last().expect("at least one step").members {
        let mm = Member {
            vertices: m.vertices.clone(),
            edges: m.edges.clone(),
        };
        if heavy(&mm)? {
            final_heavy_edges += m.e;
        }
    }
    let accounted = deleted_total + families.last().unwrap().members.iter().map(|m| m.e).sum::<usize>();
    checkpoints.push(Checkpoint::new("edges_accounted", accounted, "==", e, accounted == e));

    Ok(DecompositionTrace {
        k_threshold: k.describe(),
        k_threshold_approx: k.approx(),
        k_overridden,
        delta,
        n_prime: n,
        i0,
        families,
        stop_step: step,
        stop_reason,
        edges_deleted_total: deleted_total,
        final_heavy_edges,
        checkpoints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_convex_complete, gen_nested_lenses};

    #[test]
    fn sqrt_sums() {
        let r = |a: i64, b: i64| Rational::new(a, b);
        assert!(le_sum_of_sqrts(&r(3, 1), &r(4, 1), &r(1, 1)));
        assert!(!le_sum_of_sqrts(&r(31, 10), &r(4, 1), &r(1, 1)));
        assert!(le_sum_of_sqrts(&r(12, 5), &r(2, 1), &r(1, 1)));
        assert!(!le_sum_of_sqrts(&r(243, 100), &r(2, 1), &r(1, 1)));
    }

    #[test]
    fn k4_forced_split() {
        let d = gen_convex_complete(4).unwrap();
        let t = decompose(&d, Some(Rational::from(10))).unwrap();
        let first = &t.families[0].members[0];
        match &first.action {
            Action::Split { width, parts, .. } => {
                assert_eq!(*width, 3);
                let mut sizes = [parts.0.len(), parts.1.len()];
                sizes.sort();
                assert_eq!(sizes, [1, 3]);
            }
            a => panic!("expected a split, got {a:?}"),
        }
        assert!(t.passed(), "{:?}", t.checkpoints);
    }

    #[test]
    fn zero_threshold_keeps_everything() {
        let d = gen_convex_complete(5).unwrap();
        let t = decompose(&d, Some(Rational::zero())).unwrap();
        assert_eq!(t.stop_step, 0);
        assert_eq!(t.families[0].members[0].action, Action::Kept);
    }

    #[test]
    fn nested_with_override() {
        let d = gen_nested_lenses(4);
        assert!(matches!(decompose(&d, None), Err(Error::DegreeTooHigh { .. })));
        let t = decompose(&d, Some(Rational::from(1))).unwrap();
        assert!(matches!(t.families[0].members[0].action, Action::Split { .. }));
        assert!(t.passed());
    }

    #[test]
    fn density_threshold_is_tiny() {
        let k = Threshold::from_density(12, 4);
        assert!(k.approx() > 0.0 && k.approx() < 1e-8);
        assert!(last_step(&k, 12).unwrap().is_some());
    }
}
