//! Instrumented run of the lens-counting argument behind the edge bound
//! `e <= 64 n^2 log2 n` for separated single-crossing drawings.
//!
//! Every inequality of the argument becomes a [`Checkpoint`]; the random sampling
//! step is replayed trial by trial from `(seed, trial index)`.

use std::cmp::Ordering;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::theorem1_holds;
use crate::crossing::{require_valid, CrossingReport};
use crate::drawing::{Drawing, EdgeId, VertexId};
use crate::error::{Error, Result};
use crate::lens::{analyze_unchecked, LensRecord};
use crate::log2::cmp_log2;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    FewLenses,
    ManyLenses,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub name: String,
    pub lhs: String,
    pub relation: String,
    pub rhs: String,
    pub pass: bool,
    /// Non-gating checkpoints are reported but do not fail a replay.
    pub gating: bool,
}

impl Checkpoint {
    pub(crate) fn new(name: &str, lhs: impl ToString, relation: &str, rhs: impl ToString, pass: bool) -> Self {
        Checkpoint {
            name: name.to_string(),
            lhs: lhs.to_string(),
            relation: relation.to_string(),
            rhs: rhs.to_string(),
            pass,
            gating: true,
        }
    }

    pub(crate) fn informational(mut self) -> Self {
        self.gating = false;
        self
    }

    pub(crate) fn compare(name: &str, lhs: Rational, relation: &str, rhs: Rational) -> Self {
        let pass = match relation {
            "<=" => lhs <= rhs,
            "<" => lhs < rhs,
            ">=" => lhs >= rhs,
            ">" => lhs > rhs,
            _ => unreachable!("unknown relation {relation}"),
        };
        Checkpoint::new(name, lhs, relation, rhs, pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: u64,
    pub w: Vec<VertexId>,
    pub w_size: usize,
    pub empty_lenses: usize,
    pub gprime_edges: Vec<EdgeId>,
    pub lemma3_ok: bool,
    pub lemma2_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayTrace {
    pub seed: u64,
    pub n: usize,
    pub e: usize,
    pub branch: Branch,
    pub lens_total: usize,
    /// `ceil(log2 n)`.
    pub t: u32,
    /// `|L_i|` for `i = 1..=t`.
    pub classes: Vec<usize>,
    pub chosen_k: Option<u32>,
    pub heavy_vertex: Option<VertexId>,
    pub heavy_count: usize,
    pub origin_lens_count: usize,
    pub origin_lenses: Vec<(EdgeId, EdgeId)>,
    pub p: Rational,
    pub trials: Vec<TrialRecord>,
    pub checkpoints: Vec<Checkpoint>,
}

impl ReplayTrace {
    /// All gating checkpoints pass.
    pub fn passed(&self) -> bool {
        self.checkpoints.iter().all(|c| c.pass || !c.gating)
    }

    pub fn failed_checkpoints(&self) -> Vec<&Checkpoint> {
        self.checkpoints.iter().filter(|c| c.gating && !c.pass).collect()
    }
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: usize) -> u32 {
    usize::BITS - (n.max(1) - 1).leading_zeros()
}

/// Class index `i` with `2^(i-1) <= size < 2^i`; zero for empty lenses.
pub fn size_class(size: usize) -> u32 {
    usize::BITS - size.leading_zeros()
}

fn pow2(k: u32) -> Rational {
    Rational::from(num_bigint::BigInt::from(1) << k)
}

/// Lens structure selected by the argument: the class `k`, the heavy vertex and the
/// lenses of class `k` containing it.
struct Selection {
    t: u32,
    classes: Vec<usize>,
    k: u32,
    heavy: VertexId,
    heavy_count: usize,
    origin: Vec<LensRecord>,
}

fn select(n: usize, lenses: &[LensRecord]) -> Option<Selection> {
    if lenses.is_empty() {
        return None;
    }
    let t = ceil_log2(n);
    let mut classes = vec![0usize; t as usize];
    for l in lenses {
        let i = size_class(l.size);
        if (1..=t).contains(&i) {
            classes[i as usize - 1] += 1;
        }
    }
    // First maximum: ties go to the smaller class index.
    let k = (1..=t)
        .fold((1u32, 0usize), |best, i| {
            let c = classes[i as usize - 1];
            if c > best.1 {
                (i, c)
            } else {
                best
            }
        })
        .0;
    let in_k: Vec<&LensRecord> = lenses.iter().filter(|l| size_class(l.size) == k).collect();
    let mut counts = vec![0usize; n];
    for l in &in_k {
        for &v in &l.interior_vertices {
            counts[v] += 1;
        }
    }
    let (heavy, heavy_count) = counts
        .iter()
        .enumerate()
        .fold((0, 0), |best, (v, &c)| if c > best.1 { (v, c) } else { best });
    let origin = in_k
        .into_iter()
        .filter(|l| l.contains_vertex(heavy))
        .cloned()
        .collect();
    Some(Selection {
        t,
        classes,
        k,
        heavy,
        heavy_count,
        origin,
    })
}

fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Each vertex independently with probability `2^-k`, in id order.
pub fn sample_w(seed: u64, index: u64, n: usize, k: u32) -> Vec<VertexId> {
    let mut rng = trial_rng(seed, index);
    (0..n)
        .filter(|_| {
            let x = rng.next_u64();
            k == 0 || (k < 64 && x >> (64 - k) == 0)
        })
        .collect()
}

fn run_trial(
    d: &Drawing,
    crossings: &CrossingReport,
    origin: &[LensRecord],
    seed: u64,
    index: u64,
    k: u32,
) -> TrialRecord {
    let w = sample_w(seed, index, d.n(), k);
    let mut in_w = vec![false; d.n()];
    for &v in &w {
        in_w[v] = true;
    }
    let mut gprime: Vec<EdgeId> = origin
        .iter()
        .filter(|l| {
            in_w[l.endpoints.0] && in_w[l.endpoints.1] && !l.interior_vertices.iter().any(|&v| in_w[v])
        })
        .map(|l| l.bounding_edges.0.min(l.bounding_edges.1))
        .collect();
    let empty = gprime.len();
    gprime.sort_unstable();
    let mut lemma3 = true;
    'outer: for (i, &a) in gprime.iter().enumerate() {
        for &b in &gprime[i + 1..] {
            if !d.edge(a).shares_endpoint(d.edge(b)) && crossings.pair_count(a, b) == 0 {
                lemma3 = false;
                break 'outer;
            }
        }
    }
    TrialRecord {
        index,
        w_size: w.len(),
        lemma2_ok: gprime.len() <= 4 * w.len(),
        w,
        empty_lenses: empty,
        gprime_edges: gprime,
        lemma3_ok: lemma3,
    }
}

fn require_preconditions(d: &Drawing) -> Result<crate::lens::Analysis> {
    require_valid(d)?;
    if d.n() < 2 {
        return Err(Error::TooSmall("replay needs at least two vertices".into()));
    }
    let a = analyze_unchecked(d);
    if !a.verdict.separated {
        return Err(Error::NotSeparated);
    }
    if !a.verdict.single_crossing {
        return Err(Error::NotSingleCrossing);
    }
    Ok(a)
}

/// `|L^o| >= |E| 2^(k-2) / (n log2 n)`, decided exactly.
fn eq3_edge_form(lo: usize, e: usize, n: usize, k: u32) -> Result<bool> {
    let num = Rational::from(e) * pow2(k) / Rational::from(4);
    if lo == 0 {
        return Ok(num.is_zero());
    }
    let q = num / Rational::from(n * lo);
    Ok(cmp_log2(&q, &Rational::from(n))? != Ordering::Greater)
}

pub fn replay_theorem1(d: &Drawing, seed: u64, trials: u64) -> Result<ReplayTrace> {
    let a = require_preconditions(d)?;
    let (n, e) = (d.n(), d.e());
    let lens_total = a.lenses.len();
    let mut checkpoints = Vec::new();

    let branch = if lens_total == 0 || 2 * lens_total < e {
        Branch::FewLenses
    } else {
        Branch::ManyLenses
    };
    if branch == Branch::FewLenses {
        // One edge per adjacent pair leaves a simple graph with at least half the edges.
        let simple = a.classes.len();
        checkpoints.push(Checkpoint::compare(
            "few_lenses.simple_edges_lower",
            Rational::from(2 * simple),
            ">=",
            Rational::from(e),
        ));
        checkpoints.push(Checkpoint::compare(
            "few_lenses.simple_edges_upper",
            Rational::from(simple),
            "<=",
            Rational::from(n * (n - 1) / 2),
        ));
        checkpoints.push(Checkpoint::compare(
            "few_lenses.edge_bound",
            Rational::from(e),
            "<",
            Rational::from(n * n),
        ));
    } else {
        checkpoints.push(Checkpoint::compare(
            "many_lenses",
            Rational::from(2 * lens_total),
            ">=",
            Rational::from(e),
        ));
    }

    let sel = select(n, &a.lenses);
    let k = sel.as_ref().map_or(1, |s| s.k);
    let origin: &[LensRecord] = sel.as_ref().map_or(&[], |s| &s.origin);
    if let Some(s) = &sel {
        let lk = s.classes[s.k as usize - 1];
        let lo = s.origin.len();
        checkpoints.push(Checkpoint::compare(
            "pigeonhole",
            Rational::from(lk),
            ">=",
            Rational::new(lens_total, s.t),
        ));
        checkpoints.push(Checkpoint::compare(
            "heavy_vertex",
            Rational::from(s.heavy_count),
            ">=",
            Rational::from(lk) * pow2(s.k - 1) / Rational::from(n),
        ));
        checkpoints.push(Checkpoint::compare(
            "eq3_instance",
            Rational::from(lo),
            ">=",
            Rational::new(lens_total, n * s.t as usize) * pow2(s.k - 1),
        ));
        let rhs = e as f64 * 2f64.powi(s.k as i32 - 2) / (n as f64 * (n as f64).log2());
        checkpoints.push(
            Checkpoint::new(
                "eq3_edge_form",
                lo,
                ">=",
                format!("~{rhs:.6}"),
                eq3_edge_form(lo, e, n, s.k)?,
            )
            .informational(),
        );
        let p = Rational::new(1, 1u64 << s.k);
        let q = Rational::one() - &p;
        let bound = &(&p * &p) * &q.pow(1 << s.k) * Rational::from(lo);
        let exact = per_lens_expectation(&s.origin, &p);
        checkpoints.push(Checkpoint::compare("expectation_lower_bound", exact, ">=", bound));
        checkpoints.push(Checkpoint::compare(
            "final_bound",
            Rational::from(lo),
            "<=",
            Rational::from(16 * n) * pow2(s.k),
        ));
    }

    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(d, &a.crossings, origin, seed, i, k))
        .collect();
    let lemma3_ok = records.iter().filter(|r| r.lemma3_ok).count();
    let lemma2_ok = records.iter().filter(|r| r.lemma2_ok).count();
    checkpoints.push(Checkpoint::new("lemma3_all_trials", lemma3_ok, "==", trials, lemma3_ok as u64 == trials));
    checkpoints.push(Checkpoint::new("lemma2_all_trials", lemma2_ok, "==", trials, lemma2_ok as u64 == trials));

    let cap = 64.0 * (n * n) as f64 * (n as f64).log2();
    checkpoints.push(Checkpoint::new(
        "theorem1",
        e,
        "<=",
        format!("~{cap:.6}"),
        theorem1_holds(n as u64, e as u64)?,
    ));

    Ok(ReplayTrace {
        seed,
        n,
        e,
        branch,
        lens_total,
        t: ceil_log2(n),
        classes: sel
            .as_ref()
            .map_or_else(|| vec![0; ceil_log2(n) as usize], |s| s.classes.clone()),
        chosen_k: sel.as_ref().map(|s| s.k),
        heavy_vertex: sel.as_ref().map(|s| s.heavy),
        heavy_count: sel.as_ref().map_or(0, |s| s.heavy_count),
        origin_lens_count: origin.len(),
        origin_lenses: origin.iter().map(|l| l.bounding_edges).collect(),
        p: Rational::new(1, 1u64 << k),
        trials: records,
        checkpoints,
    })
}

/// `sum over lenses of p^2 (1-p)^|l|`, the exact expected number of empty lenses.
fn per_lens_expectation(origin: &[LensRecord], p: &Rational) -> Rational {
    let q = Rational::one() - p;
    origin.iter().fold(Rational::zero(), |acc, l| {
        acc + &(p * p) * &q.pow(l.size as i32)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingSummary {
    pub k: u32,
    pub p: Rational,
    pub n: usize,
    pub trials: u64,
    pub mean_w: Rational,
    pub expected_w: Rational,
    pub standard_error: f64,
    /// `|mean |W| - pn| <= 4 SE`, decided exactly on squares.
    pub within_4se: bool,
    pub origin_lens_count: usize,
    pub mean_empty_lenses: Rational,
    /// `p^2 (1-p)^(2^k) |L^o|`.
    pub expected_empty_lower_bound: Rational,
    /// Expectation using each lens's own size.
    pub expected_empty_exact: Rational,
}

/// Empirical means of `|W|` and `|L^o(W)|` against their expectations.
/// `k_override` changes the sampling probability to `2^-k` but keeps `L^o`.
pub fn sampling_statistics(
    d: &Drawing,
    seed: u64,
    trials: u64,
    k_override: Option<u32>,
) -> Result<SamplingSummary> {
    let a = require_preconditions(d)?;
    if trials == 0 {
        return Err(Error::Domain("sampling needs at least one trial".into()));
    }
    let n = d.n();
    let sel = select(n, &a.lenses);
    let origin: &[LensRecord] = sel.as_ref().map_or(&[], |s| &s.origin);
    let k = k_override.unwrap_or_else(|| sel.as_ref().map_or(1, |s| s.k));
    if k >= 63 {
        return Err(Error::Domain(format!("sampling exponent {k} too large")));
    }
    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(d, &a.crossings, origin, seed, i, k))
        .collect();
    let t = Rational::from(trials);
    let sum_w: usize = records.iter().map(|r| r.w_size).sum();
    let sum_l: usize = records.iter().map(|r| r.empty_lenses).sum();
    let p = Rational::new(1, 1u64 << k);
    let q = Rational::one() - &p;
    let mean_w = Rational::from(sum_w) / &t;
    let expected_w = &p * &Rational::from(n);
    let variance_of_mean = &(&expected_w * &q) / &t;
    let dev = &mean_w - &expected_w;
    let within = &dev * &dev <= Rational::from(16) * &variance_of_mean;
    let lo = Rational::from(origin.len());
    let exponent = 1i32.checked_shl(k).filter(|&x| x > 0).unwrap_or(i32::MAX);
    Ok(SamplingSummary {
        k,
        standard_error: variance_of_mean.to_f64().sqrt(),
        within_4se: within,
        origin_lens_count: origin.len(),
        mean_empty_lenses: Rational::from(sum_l) / &t,
        expected_empty_lower_bound: if q.is_zero() {
            Rational::zero()
        } else {
            &(&(&p * &p) * &q.pow(exponent)) * &lo
        },
        expected_empty_exact: per_lens_expectation(origin, &p),
        p,
        n,
        trials,
        mean_w,
        expected_w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_convex_complete, gen_nested_lenses, gen_semicircle};

    #[test]
    fn log_helpers() {
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(7), 3);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(size_class(1), 1);
        assert_eq!(size_class(3), 2);
        assert_eq!(size_class(4), 3);
    }

    #[test]
    fn nested_six() {
        let d = gen_nested_lenses(6);
        let r = replay_theorem1(&d, 7, 100).unwrap();
        assert_eq!(r.lens_total, 5);
        assert_eq!(r.chosen_k, Some(1));
        assert_eq!(r.origin_lens_count, 1);
        assert_eq!(r.heavy_count, 1);
        assert!(r.passed(), "{:?}", r.failed_checkpoints());
        let fin = r.checkpoints.iter().find(|c| c.name == "final_bound").unwrap();
        assert_eq!(fin.rhs, "224");
        assert!(r.trials.iter().all(|t| t.lemma3_ok && t.lemma2_ok));
    }

    #[test]
    fn lens_free() {
        let d = gen_convex_complete(5).unwrap();
        let r = replay_theorem1(&d, 0, 10).unwrap();
        assert_eq!(r.branch, Branch::FewLenses);
        assert!(r.passed());
    }

    #[test]
    fn rejects_double_crossings() {
        let d = gen_semicircle(5, 32).unwrap();
        assert!(matches!(replay_theorem1(&d, 0, 1), Err(Error::NotSingleCrossing)));
    }

    #[test]
    fn deterministic_samples() {
        assert_eq!(sample_w(3, 5, 20, 1), sample_w(3, 5, 20, 1));
        assert_ne!(sample_w(3, 5, 20, 1), sample_w(3, 6, 20, 1));
        assert_eq!(sample_w(3, 5, 20, 0).len(), 20);
    }

    #[test]
    fn sampling_means() {
        let d = gen_nested_lenses(9);
        let s = sampling_statistics(&d, 1, 10_000, None).unwrap();
        assert_eq!(s.k, 1);
        assert!(s.within_4se);
        assert!((s.mean_w.to_f64() - 5.0).abs() < 0.1);
        let s = sampling_statistics(&d, 1, 50, Some(0)).unwrap();
        assert_eq!(s.mean_w, Rational::from(10));
        assert!(s.within_4se);
    }
}
