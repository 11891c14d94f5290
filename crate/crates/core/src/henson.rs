//! Extension-property machinery for `K_n`-free graphs: the pairs `C_n`,
//! witness sets, saturation reports, the two sandwich checks on a run, and
//! the family of co-finite-per-unit-interval subsets of ℚ.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forcing::{combinations, DenseSetId, GenericRun, WitnessRecord};
use crate::graph::RatGraph;
use crate::qline::{by_denominator, jclass, Rat, Window};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HensonError {
    #[error("clique bound must be at least 3, got {0}")]
    CliqueBound(usize),
    #[error("{0} is not in J_0")]
    NotJ0(Rat),
    #[error("vertex {0} is not in the graph")]
    MissingVertex(Rat),
    #[error("K is not a subset of H")]
    KNotInH,
    #[error("malformed exclusion for [{interval}, {interval}+1): {reason}")]
    Malformed { interval: i64, reason: String },
}

/// An extension-property test input `⟨H, K⟩`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CnPair {
    #[serde(rename = "H")]
    pub h: BTreeSet<Rat>,
    #[serde(rename = "K")]
    pub k: BTreeSet<Rat>,
}

/// Every `⟨H, K⟩` with `H ⊆ V(g)`, `|H| <= size_bound`, `K ⊆ H` and `K`
/// free of `K_{n-1}` in `g`. Ordered by `|H|`, then `H`, then the bitmask of
/// `K` inside `H`.
pub fn cn_pairs(g: &RatGraph, n: usize, size_bound: usize) -> Result<Vec<CnPair>, HensonError> {
    if n < 3 {
        return Err(HensonError::CliqueBound(n));
    }
    let verts: Vec<Rat> = g.vertices().collect();
    let mut out = Vec::new();
    for hsize in 0..=size_bound.min(verts.len()) {
        for h in combinations(&verts, hsize) {
            for mask in 0u32..(1 << hsize) {
                let k: BTreeSet<Rat> = h.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
                if k.len() >= n - 1 && g.find_clique_among(&k, n - 1).is_some() {
                    continue;
                }
                out.push(CnPair { h: h.iter().copied().collect(), k });
            }
        }
    }
    Ok(out)
}

fn is_witness(g: &RatGraph, v: Rat, h: &BTreeSet<Rat>, k: &BTreeSet<Rat>) -> bool {
    !h.contains(&v) && k.iter().all(|&x| g.has_edge(v, x)) && h.iter().filter(|x| !k.contains(x)).all(|&x| !g.has_edge(v, x))
}

/// `G^H_K`: vertices outside `H` joined to all of `K` and to nothing in `H \ K`.
pub fn witness_set(g: &RatGraph, h: &BTreeSet<Rat>, k: &BTreeSet<Rat>) -> BTreeSet<Rat> {
    candidates(g, k).filter(|&v| is_witness(g, v, h, k)).collect()
}

/// Smallest element of `G^H_K`.
pub fn first_witness(g: &RatGraph, h: &BTreeSet<Rat>, k: &BTreeSet<Rat>) -> Option<Rat> {
    candidates(g, k).find(|&v| is_witness(g, v, h, k))
}

fn candidates<'a>(g: &'a RatGraph, k: &BTreeSet<Rat>) -> Box<dyn Iterator<Item = Rat> + 'a> {
    // a witness is a neighbour of every k, so scan the smallest neighbourhood
    let smallest = k.iter().filter_map(|&x| g.neighbor_set(x)).min_by_key(|ns| ns.len());
    match smallest {
        Some(ns) => Box::new(ns.iter().copied()),
        None if k.is_empty() => Box::new(g.vertices()),
        None => Box::new(std::iter::empty()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairStatus {
    #[serde(rename = "H")]
    pub h: BTreeSet<Rat>,
    #[serde(rename = "K")]
    pub k: BTreeSet<Rat>,
    pub witness: Option<Rat>,
}

/// How well a run met its own `D^H_{K,m}` schedule.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduledCoverage {
    pub scheduled: usize,
    pub applicable: usize,
    /// Applicable entries whose logged witness checks out in the final graph.
    pub verified: usize,
    /// Inapplicable entries whose `K` really contains a `K_{n-1}`.
    pub not_applicable_verified: usize,
    /// Distinct `⟨H, K⟩` among applicable entries.
    pub pairs: usize,
    pub pairs_satisfied: usize,
    /// Steps whose record failed a check.
    pub failures: Vec<usize>,
}

impl ScheduledCoverage {
    pub fn all_verified(&self) -> bool {
        self.failures.is_empty()
            && self.verified == self.applicable
            && self.not_applicable_verified == self.scheduled - self.applicable
            && self.pairs_satisfied == self.pairs
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationReport {
    pub n: usize,
    pub size_bound: usize,
    #[serde(rename = "is_Kn_free")]
    pub is_kn_free: bool,
    pub total_pairs: usize,
    pub satisfied_pairs: usize,
    pub pairs: Vec<PairStatus>,
    pub failing_pairs: Vec<CnPair>,
    pub scheduled_coverage: Option<ScheduledCoverage>,
}

/// Finite graphs are never saturated; this says how close `g` comes. Stops
/// early when `g` contains a `K_n`.
pub fn saturation_report(g: &RatGraph, n: usize, size_bound: usize) -> Result<SaturationReport, HensonError> {
    if n < 3 {
        return Err(HensonError::CliqueBound(n));
    }
    let mut report = SaturationReport {
        n,
        size_bound,
        is_kn_free: g.find_clique(n).is_none(),
        total_pairs: 0,
        satisfied_pairs: 0,
        pairs: Vec::new(),
        failing_pairs: Vec::new(),
        scheduled_coverage: None,
    };
    if !report.is_kn_free {
        return Ok(report);
    }
    for pair in cn_pairs(g, n, size_bound)? {
        let witness = first_witness(g, &pair.h, &pair.k);
        report.total_pairs += 1;
        if witness.is_some() {
            report.satisfied_pairs += 1;
        } else {
            report.failing_pairs.push(pair.clone());
        }
        report.pairs.push(PairStatus { h: pair.h, k: pair.k, witness });
    }
    Ok(report)
}

/// Checks every `D^H_{K,m}` record of `run` against its final graph,
/// recomputing witness sets independently of the log.
pub fn scheduled_coverage(run: &GenericRun) -> ScheduledCoverage {
    let g = run.union_graph();
    let n = run.n;
    let mut cov = ScheduledCoverage::default();
    let mut pairs: BTreeMap<CnPair, bool> = BTreeMap::new();
    for entry in &run.log {
        let DenseSetId::Dhkm { h, k, m } = &entry.dense_set else { continue };
        cov.scheduled += 1;
        match entry.witness {
            WitnessRecord::Added { q } => {
                cov.applicable += 1;
                let top = h.iter().next_back().copied().unwrap_or(Rat::ZERO);
                let in_range = jclass(q) == 0 && top < q && q < top + Rat::frac(1, *m as i64);
                let recomputed = witness_set(&g, h, k).contains(&q);
                let adjacency = is_witness(&g, q, h, k);
                if in_range && recomputed && adjacency {
                    cov.verified += 1;
                } else {
                    cov.failures.push(entry.step);
                }
                let satisfied = first_witness(&g, h, k).is_some();
                pairs.insert(CnPair { h: h.clone(), k: k.clone() }, satisfied);
            }
            WitnessRecord::NotApplicable => {
                if g.find_clique_among(k, n - 1).is_some() {
                    cov.not_applicable_verified += 1;
                } else {
                    cov.failures.push(entry.step);
                }
            }
            WitnessRecord::Present { .. } => cov.failures.push(entry.step),
        }
    }
    cov.pairs = pairs.len();
    cov.pairs_satisfied = pairs.values().filter(|&&s| s).count();
    cov
}

/// Whether `{q-1, q}` has no witness at or below `q` (inside `window`).
/// Under (P1) this is always true; `false` means the graph is not a
/// condition.
pub fn ceiling_obstruction(g: &RatGraph, q: Rat, window: &Window) -> Result<bool, HensonError> {
    if jclass(q) != 0 {
        return Err(HensonError::NotJ0(q));
    }
    let below = q - Rat::ONE;
    for v in [below, q] {
        if !g.has_vertex(v) {
            return Err(HensonError::MissingVertex(v));
        }
    }
    let hk: BTreeSet<Rat> = [below, q].into_iter().collect();
    let keep: BTreeSet<Rat> = g.vertices().filter(|&v| hk.contains(&v) || (v <= q && window.spans(v))).collect();
    let restricted = g.restrict(&keep);
    Ok(witness_set(&restricted, &hk, &hk).is_empty())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichReport {
    /// Always a finite-scale stand-in for the isomorphism statement.
    pub label: String,
    pub x: Rat,
    pub hypothesis_holds: bool,
    pub checked: usize,
    pub failures: Vec<usize>,
}

/// For `J_0 ∩ V ∩ (-∞, x) ⊆ a ⊆ V ∩ (-∞, x)`, with `V` the run's vertices:
/// every scheduled applicable `⟨H, K, m⟩` with `H ⊆ a` and
/// `max H + 1/m <= x` must have its witness inside `a`.
pub fn sandwich_proxy(run: &GenericRun, x: Rat, a: &BTreeSet<Rat>) -> SandwichReport {
    let g = run.union_graph();
    let lower_ok = g.vertices().filter(|&v| v < x && jclass(v) == 0).all(|v| a.contains(&v));
    let upper_ok = a.iter().all(|&v| v < x && g.has_vertex(v));
    let mut report = SandwichReport {
        label: "proxy".into(),
        x,
        hypothesis_holds: lower_ok && upper_ok,
        checked: 0,
        failures: Vec::new(),
    };
    if !report.hypothesis_holds {
        return report;
    }
    for entry in &run.log {
        let (DenseSetId::Dhkm { h, m, .. }, WitnessRecord::Added { q }) = (&entry.dense_set, &entry.witness) else {
            continue;
        };
        let top = h.iter().next_back().copied().unwrap_or(Rat::ZERO);
        if !h.is_subset(a) || top + Rat::frac(1, *m as i64) > x {
            continue;
        }
        report.checked += 1;
        if !a.contains(q) {
            report.failures.push(entry.step);
        }
    }
    report
}

/// Input form of one excluded block `F_n ⊆ [n, n+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exclusion {
    Finite(BTreeSet<Rat>),
    /// All of `[n, n+1) ∩ ℚ`; never well-formed.
    All,
}

/// `ℚ` minus finitely many points per unit interval. `periodic` offsets in
/// `[0, 1)` are removed from every unit interval at once, except at the
/// points listed in `restored`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PqrSpec {
    excluded: BTreeMap<i64, BTreeSet<Rat>>,
    periodic: BTreeSet<Rat>,
    restored: BTreeSet<Rat>,
}

impl PqrSpec {
    /// All of ℚ.
    pub fn full() -> PqrSpec {
        PqrSpec::default()
    }

    pub fn new(blocks: BTreeMap<i64, Exclusion>, periodic: BTreeSet<Rat>) -> Result<PqrSpec, HensonError> {
        let mut excluded = BTreeMap::new();
        for (n, block) in blocks {
            let points = match block {
                Exclusion::All => {
                    return Err(HensonError::Malformed { interval: n, reason: "infinitely many points".into() })
                }
                Exclusion::Finite(points) => points,
            };
            if let Some(bad) = points.iter().find(|q| q.floor() != n) {
                return Err(HensonError::Malformed { interval: n, reason: format!("{bad} lies outside the interval") });
            }
            excluded.insert(n, points);
        }
        if let Some(bad) = periodic.iter().find(|p| p.is_negative() || **p >= Rat::ONE) {
            return Err(HensonError::Malformed { interval: 0, reason: format!("periodic offset {bad} outside [0, 1)") });
        }
        let mut spec = PqrSpec { excluded, periodic, restored: BTreeSet::new() };
        spec.normalize();
        Ok(spec)
    }

    /// Removes `offset + n` for every integer `n`.
    pub fn with_periodic(mut self, offset: Rat) -> PqrSpec {
        self.periodic.insert(offset.fract_part());
        self.restored.retain(|r| r.fract_part() != offset.fract_part());
        self.normalize();
        self
    }

    fn normalize(&mut self) {
        let excluded = &self.excluded;
        self.restored.retain(|r| !excluded.get(&r.floor()).is_some_and(|f| f.contains(r)));
        let (periodic, restored) = (&self.periodic, &self.restored);
        for f in self.excluded.values_mut() {
            f.retain(|q| !periodic.contains(&q.fract_part()) || restored.contains(q));
        }
        self.excluded.retain(|_, f| !f.is_empty());
        let periodic = &self.periodic;
        self.restored.retain(|r| periodic.contains(&r.fract_part()));
    }

    pub fn excludes(&self, q: Rat) -> bool {
        self.excluded.get(&q.floor()).is_some_and(|f| f.contains(&q))
            || (self.periodic.contains(&q.fract_part()) && !self.restored.contains(&q))
    }

    pub fn contains(&self, q: Rat) -> bool {
        !self.excludes(q)
    }

    pub fn periodic(&self) -> &BTreeSet<Rat> {
        &self.periodic
    }

    /// Points excluded one at a time (not through a periodic offset).
    pub fn finite_exclusions(&self) -> impl Iterator<Item = Rat> + '_ {
        self.excluded.values().flatten().copied()
    }

    pub fn remove(&self, q: Rat) -> PqrSpec {
        let mut out = self.clone();
        if out.restored.remove(&q) {
            return out;
        }
        if !out.excludes(q) {
            out.excluded.entry(q.floor()).or_default().insert(q);
        }
        out
    }

    pub fn restore(&self, q: Rat) -> PqrSpec {
        let mut out = self.clone();
        if let Some(f) = out.excluded.get_mut(&q.floor()) {
            f.remove(&q);
        }
        if out.periodic.contains(&q.fract_part()) {
            out.restored.insert(q);
        }
        out.normalize();
        out
    }

    /// Exact inclusion of the denoted subsets of ℚ.
    pub fn is_subset(&self, other: &PqrSpec) -> bool {
        if !other.periodic.is_subset(&self.periodic) {
            return false;
        }
        let finite = other.finite_exclusions().chain(self.finite_exclusions()).chain(self.restored.iter().copied()).chain(other.restored.iter().copied());
        let mut ok = true;
        for r in finite {
            if other.excludes(r) && !self.excludes(r) {
                ok = false;
                break;
            }
        }
        ok
    }

    /// Whether the complement meets infinitely many unit intervals.
    pub fn coinfinite(&self) -> bool {
        !self.periodic.is_empty()
    }

    /// Smallest point of `(0, 1)` (by denominator, then value) in the set.
    pub fn sample_point(&self) -> Rat {
        by_denominator(Rat::ZERO, Rat::ONE, u64::MAX).find(|&q| self.contains(q)).expect("finitely many exclusions per interval")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PqrReport {
    pub member: bool,
    /// (P1): a point of the set.
    pub nonempty_witness: Rat,
    /// (P2): putting back each excluded point gives a superset in the family.
    pub upward_closed: bool,
    /// (P3): deleting a finite set stays in the family.
    pub finite_deletion: bool,
    /// (P4): a member whose complement meets every unit interval.
    pub coinfinite_witness: PqrSpec,
    pub coinfinite_ok: bool,
}

/// Membership of a well-formed spec in the family, with witnesses for the
/// four positive-family axioms around it.
pub fn pqr_membership(spec: &PqrSpec) -> PqrReport {
    let nonempty_witness = spec.sample_point();
    let mut probes: Vec<Rat> = spec.finite_exclusions().collect();
    probes.extend(spec.periodic.iter().flat_map(|&p| [p, p + Rat::ONE, p - Rat::int(3)]));
    let upward_closed = probes.iter().all(|&q| {
        let up = spec.restore(q);
        up.contains(q) && spec.is_subset(&up)
    });
    let deleted = spec.remove(nonempty_witness).remove(nonempty_witness + Rat::int(7));
    let finite_deletion = deleted.is_subset(spec) && !deleted.contains(nonempty_witness) && !spec.is_subset(&deleted);
    let coinfinite_witness = PqrSpec::full().with_periodic(Rat::ZERO);
    let coinfinite_ok = coinfinite_witness.coinfinite() && coinfinite_witness.contains(Rat::frac(1, 2));
    PqrReport { member: true, nonempty_witness, upward_closed, finite_deletion, coinfinite_witness, coinfinite_ok }
}
