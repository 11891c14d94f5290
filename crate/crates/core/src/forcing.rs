//! The poset of finite `K_n`-free graphs on rational vertices obeying the
//! shift conditions (P1) and (P2), its dense sets, and a deterministic run
//! that meets a fair schedule of them.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{edge, Edge, RatGraph};
use crate::qline::{by_denominator, QlineError, Rat, Window};

pub const DEFAULT_DENOM_CEILING: u64 = 1 << 20;
pub const DEFAULT_SIZE_BOUND: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForcingError {
    #[error("clique bound must be at least 3, got {0}")]
    CliqueBound(usize),
    #[error("conditions have different clique bounds ({0} vs {1})")]
    CliqueBoundMismatch(usize, usize),
    #[error("K is not a subset of H")]
    KNotInH,
    #[error("m must be at least 1")]
    ZeroM,
    #[error("no J_0 witness in ({lo}, {hi}) with denominator <= {ceiling}")]
    CeilingExhausted { lo: Rat, hi: Rat, ceiling: u64 },
    #[error("graph is not a condition: {0:?}")]
    NotACondition(Vec<Violation>),
    #[error("window: {0}")]
    Window(#[from] QlineError),
    #[error("replay diverged at step {0}")]
    ReplayMismatch(usize),
}

/// Why a graph fails to be a condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "clause")]
pub enum Violation {
    /// `n` pairwise adjacent vertices.
    Clique { vertices: Vec<Rat> },
    /// `{a,b}` and `{a+1,b}` are edges but `b <= a+1`.
    P1 { a: Rat, b: Rat },
    /// `{a, a-1}` is an edge.
    P2 { a: Rat },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionCheck {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// Full scan of the three defining clauses.
pub fn is_condition(g: &RatGraph, n: usize) -> ConditionCheck {
    let mut violations = Vec::new();
    if let Some(vertices) = g.find_clique(n) {
        violations.push(Violation::Clique { vertices });
    }
    for a in g.vertices() {
        let up = a + Rat::ONE;
        for b in g.neighbors(a) {
            if b <= up && g.has_edge(up, b) {
                violations.push(Violation::P1 { a, b });
            }
        }
    }
    for (x, y) in g.edges() {
        if y - x == Rat::ONE {
            violations.push(Violation::P2 { a: y });
        }
    }
    ConditionCheck { valid: violations.is_empty(), violations }
}

/// Violations that involve the vertex `q`; enough after adding `q` to a
/// condition.
pub fn violations_through(g: &RatGraph, q: Rat, n: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    if let Some(vertices) = g.find_clique_through(q, n) {
        out.push(Violation::Clique { vertices });
    }
    let one = Rat::ONE;
    for b in g.neighbors(q) {
        // q as the lower end a
        if b <= q + one && g.has_edge(q + one, b) {
            out.push(Violation::P1 { a: q, b });
        }
        // q as a + 1
        if b <= q && g.has_edge(q - one, b) {
            out.push(Violation::P1 { a: q - one, b });
        }
        // q as b
        if q <= b + one && g.has_edge(b + one, q) {
            out.push(Violation::P1 { a: b, b: q });
        }
    }
    if g.has_edge(q, q - one) {
        out.push(Violation::P2 { a: q });
    }
    if g.has_edge(q, q + one) {
        out.push(Violation::P2 { a: q + one });
    }
    out
}

/// An element of the poset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    n: usize,
    graph: RatGraph,
}

impl Condition {
    pub fn empty(n: usize) -> Result<Condition, ForcingError> {
        if n < 3 {
            return Err(ForcingError::CliqueBound(n));
        }
        Ok(Condition { n, graph: RatGraph::new() })
    }

    pub fn new(graph: RatGraph, n: usize) -> Result<Condition, ForcingError> {
        if n < 3 {
            return Err(ForcingError::CliqueBound(n));
        }
        let check = is_condition(&graph, n);
        if !check.valid {
            return Err(ForcingError::NotACondition(check.violations));
        }
        Ok(Condition { n, graph })
    }

    pub fn clique_bound(&self) -> usize {
        self.n
    }

    pub fn graph(&self) -> &RatGraph {
        &self.graph
    }

    pub fn into_graph(self) -> RatGraph {
        self.graph
    }

    pub fn has_vertex(&self, q: Rat) -> bool {
        self.graph.has_vertex(q)
    }
}

/// `p <= q`: `p` extends `q` without adding edges among the vertices of `q`.
pub fn leq(p: &Condition, q: &Condition) -> Result<bool, ForcingError> {
    if p.n != q.n {
        return Err(ForcingError::CliqueBoundMismatch(p.n, q.n));
    }
    let qv = q.graph.vertex_set();
    if !qv.iter().all(|&v| p.graph.has_vertex(v)) {
        return Ok(false);
    }
    Ok(p.graph.edges_within(&qv) == q.graph.edge_set())
}

/// Meets `D_q` by adding `q` as an isolated vertex if it is missing.
pub fn extend_dq(p: &Condition, q: Rat) -> Condition {
    let mut out = p.clone();
    out.graph.add_vertex(q);
    out
}

/// Outcome of meeting a `D^H_{K,m}` set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DhkmOutcome {
    /// `K` contains a `K_{n-1}`, so the pair is not in `C_n(p)`.
    NotApplicable,
    /// A fresh vertex `q` joined exactly to `K`.
    Witness { q: Rat, edges: Vec<Edge> },
}

/// Canonical `q ∈ J_0 ∩ (lo, hi)` avoiding `excluded`: smallest denominator,
/// then smallest value.
pub fn j0_witness(lo: Rat, hi: Rat, excluded: impl Fn(Rat) -> bool, ceiling: u64) -> Option<Rat> {
    (1..=ceiling)
        .filter(|&d| d == 1 || d % 2 == 0)
        .flat_map(|d| by_denominator_exact(d, lo, hi))
        .find(|&q| !excluded(q))
}

fn by_denominator_exact(d: u64, lo: Rat, hi: Rat) -> impl Iterator<Item = Rat> {
    let di = d as i64;
    let first = (lo * Rat::int(di)).floor() + 1;
    let last = (hi * Rat::int(di)).ceil() - 1;
    (first..=last)
        .map(move |a| Rat::frac(a, di))
        .filter(move |q| q.denom() == di)
}

/// Meets `D^H_{K,m}` below `p`. Vertices of `H` are added first, ascending;
/// then, if `K` is `K_{n-1}`-free, a canonical `q ∈ J_0` just above `max H`
/// is joined to every vertex of `K`. An empty `H` is treated as having
/// maximum 0.
pub fn extend_dhkm(
    p: &Condition,
    h: &BTreeSet<Rat>,
    k: &BTreeSet<Rat>,
    m: u32,
    ceiling: u64,
) -> Result<(Condition, DhkmOutcome), ForcingError> {
    if !k.is_subset(h) {
        return Err(ForcingError::KNotInH);
    }
    if m == 0 {
        return Err(ForcingError::ZeroM);
    }
    let mut out = p.clone();
    for &v in h {
        out.graph.add_vertex(v);
    }
    if out.graph.find_clique_among(k, p.n - 1).is_some() {
        return Ok((out, DhkmOutcome::NotApplicable));
    }
    let top = h.iter().next_back().copied().unwrap_or(Rat::ZERO);
    let hi = top + Rat::frac(1, m as i64);
    let g = &out.graph;
    let excluded = |q: Rat| g.has_vertex(q) || g.has_vertex(q - Rat::ONE) || g.has_vertex(q + Rat::ONE);
    let q = j0_witness(top, hi, excluded, ceiling).ok_or(ForcingError::CeilingExhausted { lo: top, hi, ceiling })?;
    out.graph.add_vertex(q);
    let edges: Vec<Edge> = k.iter().map(|&v| edge(q, v)).collect();
    for &(a, b) in &edges {
        out.graph.add_edge(a, b);
    }
    Ok((out, DhkmOutcome::Witness { q, edges }))
}

/// Name of a dense set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DenseSetId {
    Dq { q: Rat },
    #[serde(rename = "DHKm")]
    Dhkm {
        #[serde(rename = "H")]
        h: BTreeSet<Rat>,
        #[serde(rename = "K")]
        k: BTreeSet<Rat>,
        m: u32,
    },
}

impl DenseSetId {
    fn h_len(&self) -> usize {
        match self {
            DenseSetId::Dq { .. } => 0,
            DenseSetId::Dhkm { h, .. } => h.len(),
        }
    }

    /// `|H| + |K| + m`; zero for `D_q`.
    pub fn encoding_size(&self) -> usize {
        match self {
            DenseSetId::Dq { .. } => 0,
            DenseSetId::Dhkm { h, k, m } => h.len() + k.len() + *m as usize,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WitnessRecord {
    /// `q` was already a vertex.
    Present { q: Rat },
    Added { q: Rat },
    NotApplicable,
}

/// One line of the run log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    pub step: usize,
    pub dense_set: DenseSetId,
    pub witness: WitnessRecord,
    pub vertices_added: Vec<Rat>,
    pub edges_added: Vec<Edge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub denom_ceiling: u64,
    /// Largest `|H|` scheduled.
    pub size_bound: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { denom_ceiling: DEFAULT_DENOM_CEILING, size_bound: DEFAULT_SIZE_BOUND }
    }
}

/// How far the schedule got.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    /// Every `D_q` for window rationals with denominator at most this was met.
    pub dq_denominator: u64,
    /// Every `D^H_{K,m}` of encoding size at most this, over the vertices
    /// present when its round was generated, was met.
    pub dhkm_size: usize,
    pub dq_steps: usize,
    pub dhkm_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericRun {
    pub n: usize,
    pub window: Window,
    pub config: RunConfig,
    pub schedule: Vec<DenseSetId>,
    /// `conditions[i]` is the condition after step `i`.
    pub conditions: Vec<Condition>,
    pub log: Vec<LogEntry>,
    pub coverage: Coverage,
}

struct DhkmScheduler {
    size_bound: usize,
    round: usize,
    completed: usize,
    queue: VecDeque<DenseSetId>,
    scheduled: BTreeSet<DenseSetId>,
}

impl DhkmScheduler {
    fn new(size_bound: usize) -> Self {
        DhkmScheduler { size_bound, round: 0, completed: 0, queue: VecDeque::new(), scheduled: BTreeSet::new() }
    }

    fn next(&mut self, vertices: &BTreeSet<Rat>) -> DenseSetId {
        while self.queue.is_empty() {
            self.completed = self.round;
            self.round += 1;
            let mut fresh = enumerate_dhkm(vertices, self.size_bound, self.round);
            fresh.retain(|d| !self.scheduled.contains(d));
            fresh.sort_by_cached_key(|d| (d.encoding_size(), d.h_len(), d.clone()));
            self.queue.extend(fresh);
        }
        let next = self.queue.pop_front().expect("nonempty queue");
        self.scheduled.insert(next.clone());
        next
    }
}

/// All `⟨H, K, m⟩` over `vertices` with `|H| <= size_bound` and encoding
/// size at most `max_size`.
fn enumerate_dhkm(vertices: &BTreeSet<Rat>, size_bound: usize, max_size: usize) -> Vec<DenseSetId> {
    let verts: Vec<Rat> = vertices.iter().copied().collect();
    let mut out = Vec::new();
    let max_h = size_bound.min(max_size.saturating_sub(1));
    for hsize in 0..=max_h {
        for h in combinations(&verts, hsize) {
            for kmask in 0u32..(1 << hsize) {
                let k: BTreeSet<Rat> = h.iter().enumerate().filter(|(i, _)| kmask >> i & 1 == 1).map(|(_, &v)| v).collect();
                let base = hsize + k.len();
                if base >= max_size {
                    continue;
                }
                let hset: BTreeSet<Rat> = h.iter().copied().collect();
                for m in 1..=(max_size - base) as u32 {
                    out.push(DenseSetId::Dhkm { h: hset.clone(), k: k.clone(), m });
                }
            }
        }
    }
    out
}

pub(crate) fn combinations(items: &[Rat], k: usize) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + items.len() - k {
                break;
            }
            if i == 0 && idx[0] == items.len() - k {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Builds `steps` decreasing conditions from the empty one. Even steps meet
/// the next `D_q` (window rationals by denominator, then value) while any
/// remain; the other steps meet `D^H_{K,m}` sets in rounds of growing
/// encoding size over the current vertices (ties by `|H|`, then by value).
pub fn generic_run(n: usize, steps: usize, window: Window, config: RunConfig) -> Result<GenericRun, ForcingError> {
    let mut current = Condition::empty(n)?;
    let (lo, hi) = match (window.lo().finite(), window.hi().finite()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(ForcingError::Window(QlineError::Unbounded)),
    };
    let mut dq_stream = by_denominator(lo, hi, window.denom_bound()).peekable();
    let mut dhkm = DhkmScheduler::new(config.size_bound);
    let mut run = GenericRun {
        n,
        window,
        config,
        schedule: Vec::with_capacity(steps),
        conditions: Vec::with_capacity(steps),
        log: Vec::with_capacity(steps),
        coverage: Coverage { dq_denominator: 0, dhkm_size: 0, dq_steps: 0, dhkm_steps: 0 },
    };
    for step in 0..steps {
        let use_dq = step % 2 == 0 && dq_stream.peek().is_some();
        let dense = if use_dq {
            let q = dq_stream.next().expect("peeked");
            DenseSetId::Dq { q }
        } else {
            dhkm.next(&current.graph.vertex_set())
        };
        let (next, entry) = apply_dense(&current, &dense, step, config.denom_ceiling)?;
        if let WitnessRecord::Added { q } = entry.witness {
            let broken = violations_through(&next.graph, q, n);
            if !broken.is_empty() {
                return Err(ForcingError::NotACondition(broken));
            }
        }
        match dense {
            DenseSetId::Dq { .. } => run.coverage.dq_steps += 1,
            DenseSetId::Dhkm { .. } => run.coverage.dhkm_steps += 1,
        }
        run.schedule.push(dense);
        run.log.push(entry);
        run.conditions.push(next.clone());
        current = next;
    }
    run.coverage.dq_denominator = match dq_stream.peek() {
        None => window.denom_bound(),
        Some(q) => q.denom() as u64 - 1,
    };
    run.coverage.dhkm_size = dhkm.completed;
    Ok(run)
}

fn apply_dense(
    p: &Condition,
    dense: &DenseSetId,
    step: usize,
    ceiling: u64,
) -> Result<(Condition, LogEntry), ForcingError> {
    let before = p.graph.vertex_set();
    let (next, witness, edges_added) = match dense {
        DenseSetId::Dq { q } => {
            let present = p.has_vertex(*q);
            let next = extend_dq(p, *q);
            let w = if present { WitnessRecord::Present { q: *q } } else { WitnessRecord::Added { q: *q } };
            (next, w, Vec::new())
        }
        DenseSetId::Dhkm { h, k, m } => {
            let (next, outcome) = extend_dhkm(p, h, k, *m, ceiling)?;
            match outcome {
                DhkmOutcome::NotApplicable => (next, WitnessRecord::NotApplicable, Vec::new()),
                DhkmOutcome::Witness { q, edges } => (next, WitnessRecord::Added { q }, edges),
            }
        }
    };
    let vertices_added = next.graph.vertices().filter(|v| !before.contains(v)).collect();
    let entry = LogEntry { step, dense_set: dense.clone(), witness, vertices_added, edges_added };
    Ok((next, entry))
}

impl GenericRun {
    /// The graph of the last condition; every earlier condition is an
    /// induced subgraph of it.
    pub fn union_graph(&self) -> RatGraph {
        self.conditions.last().map(|c| c.graph.clone()).unwrap_or_default()
    }

    pub fn final_condition(&self) -> Option<&Condition> {
        self.conditions.last()
    }

    /// Index of the step that meets `d`, if scheduled.
    pub fn step_of(&self, d: &DenseSetId) -> Option<usize> {
        self.schedule.iter().position(|s| s == d)
    }

    /// The run log as JSON lines.
    pub fn log_jsonl(&self) -> String {
        let mut out = String::new();
        for entry in &self.log {
            out.push_str(&serde_json::to_string(entry).expect("log entries serialise"));
            out.push('\n');
        }
        out
    }
}

/// Rebuilds the final condition from a log alone.
pub fn replay(n: usize, log: &[LogEntry]) -> Result<Condition, ForcingError> {
    let mut graph = RatGraph::new();
    for (i, entry) in log.iter().enumerate() {
        if entry.step != i {
            return Err(ForcingError::ReplayMismatch(i));
        }
        for &v in &entry.vertices_added {
            graph.add_vertex(v);
        }
        for &(a, b) in &entry.edges_added {
            graph.add_edge(a, b);
        }
    }
    Condition::new(graph, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn set(xs: &[&str]) -> BTreeSet<Rat> {
        xs.iter().map(|s| r(s)).collect()
    }

    fn graph(vs: &[&str], es: &[(&str, &str)]) -> RatGraph {
        RatGraph::from_parts(vs.iter().map(|s| r(s)), es.iter().map(|(a, b)| (r(a), r(b))))
    }

    #[test]
    fn p2_violation() {
        let c = is_condition(&graph(&["0", "1"], &[("0", "1")]), 3);
        assert!(!c.valid);
        assert!(c.violations.contains(&Violation::P2 { a: r("1") }));
    }

    #[test]
    fn triangle_violation() {
        let g = graph(&[], &[("0", "1/2"), ("1/2", "3/4"), ("0", "3/4")]);
        let c = is_condition(&g, 3);
        assert!(matches!(c.violations[0], Violation::Clique { .. }));
        assert!(is_condition(&g, 4).valid);
    }

    #[test]
    fn p1_violation() {
        let g = graph(&["0", "1", "1/2"], &[("0", "1/2"), ("1", "1/2")]);
        let c = is_condition(&g, 3);
        assert_eq!(c.violations, vec![Violation::P1 { a: r("0"), b: r("1/2") }]);
        let local = violations_through(&g, r("1/2"), 3);
        assert!(local.contains(&Violation::P1 { a: r("0"), b: r("1/2") }));
    }

    #[test]
    fn leq_examples() {
        let p = Condition::new(graph(&["0", "1/2"], &[("0", "1/2")]), 3).unwrap();
        let q = Condition::new(graph(&["0"], &[]), 3).unwrap();
        assert!(leq(&p, &q).unwrap());
        let bare = Condition::new(graph(&["0", "1/2"], &[]), 3).unwrap();
        assert!(!leq(&bare, &p).unwrap());
        assert!(leq(&p, &p).unwrap());
        let four = Condition::empty(4).unwrap();
        assert_eq!(leq(&p, &four), Err(ForcingError::CliqueBoundMismatch(3, 4)));
    }

    #[test]
    fn dq_examples() {
        let e = Condition::empty(3).unwrap();
        let p = extend_dq(&e, r("1/3"));
        assert_eq!(p.graph().vertex_set(), set(&["1/3"]));
        assert_eq!(extend_dq(&p, r("1/3")), p);
        let p0 = Condition::new(graph(&["0"], &[]), 3).unwrap();
        let p1 = extend_dq(&p0, r("5"));
        assert_eq!(p1.graph().vertex_set(), set(&["0", "5"]));
        assert!(is_condition(p1.graph(), 3).valid);
        assert!(leq(&p1, &p0).unwrap());
    }

    #[test]
    fn dhkm_first_example() {
        let p = Condition::new(graph(&["0"], &[]), 3).unwrap();
        let (next, outcome) = extend_dhkm(&p, &set(&["0"]), &set(&["0"]), 2, 1 << 10).unwrap();
        assert_eq!(outcome, DhkmOutcome::Witness { q: r("1/4"), edges: vec![(r("0"), r("1/4"))] });
        assert!(is_condition(next.graph(), 3).valid);
        assert!(leq(&next, &p).unwrap());
    }

    #[test]
    fn dhkm_not_applicable_when_k_has_edge() {
        let p = Condition::new(graph(&["0", "1/2"], &[("0", "1/2")]), 3).unwrap();
        let (next, outcome) = extend_dhkm(&p, &set(&["0", "1/2"]), &set(&["0", "1/2"]), 1, 1 << 10).unwrap();
        assert_eq!(outcome, DhkmOutcome::NotApplicable);
        assert_eq!(next, p);
    }

    #[test]
    fn dhkm_adds_missing_h() {
        let p = Condition::empty(3).unwrap();
        let (next, outcome) = extend_dhkm(&p, &set(&["2", "3"]), &set(&["3"]), 1, 1 << 10).unwrap();
        assert!(next.has_vertex(r("2")) && next.has_vertex(r("3")));
        let DhkmOutcome::Witness { q, .. } = outcome else { panic!() };
        assert!(q > r("3") && q < r("4"));
        assert!(next.graph().has_edge(q, r("3")));
        assert!(!next.graph().has_edge(q, r("2")));
    }

    #[test]
    fn dhkm_empty_h_uses_zero() {
        let p = Condition::empty(3).unwrap();
        let (_, outcome) = extend_dhkm(&p, &BTreeSet::new(), &BTreeSet::new(), 1, 1 << 10).unwrap();
        assert_eq!(outcome, DhkmOutcome::Witness { q: r("1/2"), edges: vec![] });
    }

    #[test]
    fn dhkm_errors() {
        let p = Condition::empty(3).unwrap();
        assert_eq!(extend_dhkm(&p, &set(&["0"]), &set(&["1"]), 1, 10).unwrap_err(), ForcingError::KNotInH);
        assert_eq!(extend_dhkm(&p, &set(&["0"]), &set(&[]), 0, 10).unwrap_err(), ForcingError::ZeroM);
        let e = extend_dhkm(&p, &set(&["0"]), &set(&[]), 100, 4).unwrap_err();
        assert!(matches!(e, ForcingError::CeilingExhausted { .. }));
    }

    #[test]
    fn clique_bound_checked() {
        assert_eq!(Condition::empty(2), Err(ForcingError::CliqueBound(2)));
    }

    #[test]
    fn one_step_run() {
        let w = Window::bounded(r("-10"), r("10"), 4).unwrap();
        let run = generic_run(3, 1, w, RunConfig::default()).unwrap();
        assert_eq!(run.conditions.len(), 1);
        assert_eq!(run.union_graph().vertex_count(), 1);
        assert_eq!(run.union_graph().edge_count(), 0);
        let empty = generic_run(3, 0, w, RunConfig::default()).unwrap();
        assert_eq!(empty.union_graph(), RatGraph::new());
    }

    #[test]
    fn combinations_count() {
        let items: Vec<Rat> = (0..5).map(Rat::int).collect();
        assert_eq!(combinations(&items, 0).len(), 1);
        assert_eq!(combinations(&items, 2).len(), 10);
        assert_eq!(combinations(&items, 5).len(), 1);
        assert_eq!(combinations(&items, 6).len(), 0);
    }
}
