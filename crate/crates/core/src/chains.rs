//! Chains of copy domains: interval chains between finite sets, the
//! class-by-class assembly of a chain of subsets of ℚ realising a target
//! order, chains cut out of positive families one point at a time, and a
//! probe harness looking for sets that would extend a chain.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compactsets::CompactDescriptor;
use crate::gmunu::{in_omega_omega_family, Family, SymbolicSet, Vertex};
use crate::henson::{pqr_membership, PqrSpec};
use crate::ordercore::{CondensationClass, FiniteLinearOrder, OrderTypeExpr, Truncation};
use crate::qline::{canonical_members, jclass, rationals_by_height, window_members, Endpoint, Rat, Window};

/// Denominator ceiling for the canonical `I_y` search.
pub const I_Y_CEILING: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("A is not a subset of B")]
    NotSubset,
    #[error("order has {got} elements, expected |B \\ A| + 1 = {expected}")]
    CardinalityMismatch { expected: usize, got: usize },
    #[error("cannot parse target {0:?}")]
    Target(String),
    #[error("unsupported target atom {0}")]
    UnsupportedTarget(String),
    #[error("unsupported family {0}")]
    UnsupportedFamily(String),
    #[error("target minimum is isolated")]
    MinIsolated,
    #[error("no {count} members of J_{class} below {below}")]
    NoIndexPoints { class: usize, count: usize, below: Endpoint },
    #[error("x = {0} is not a class of the plan")]
    NotInM(Endpoint),
    #[error("chain is not strictly increasing at position {0}")]
    NotIncreasing(usize),
    #[error("{0}")]
    Descriptor(String),
}

/// The chain `A ⊂ A ∪ {b_1} ⊂ ... ⊂ B`, adding `B \ A` in ascending order,
/// indexed by `l`.
pub fn interval_chain<T: Ord + Clone, L: Clone + Eq + Hash>(
    a: &BTreeSet<T>,
    b: &BTreeSet<T>,
    l: &FiniteLinearOrder<L>,
) -> Result<Vec<BTreeSet<T>>, ChainError> {
    if !a.is_subset(b) {
        return Err(ChainError::NotSubset);
    }
    let extra: Vec<T> = b.difference(a).cloned().collect();
    if l.len() != extra.len() + 1 {
        return Err(ChainError::CardinalityMismatch { expected: extra.len() + 1, got: l.len() });
    }
    let mut out = Vec::with_capacity(l.len());
    let mut cur = a.clone();
    out.push(cur.clone());
    for x in extra {
        cur.insert(x);
        out.push(cur.clone());
    }
    Ok(out)
}

/// A target order: an order-type expression or a compact set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainTarget {
    Order(OrderTypeExpr),
    Descriptor(CompactDescriptor),
}

impl ChainTarget {
    pub fn truncation(&self, depth: usize) -> Result<Truncation, ChainError> {
        match self {
            ChainTarget::Order(t) => Ok(t.truncate(depth)),
            ChainTarget::Descriptor(d) => d.sample(depth).map_err(|e| ChainError::Descriptor(e.to_string())),
        }
    }

    pub fn min_nonisolated(&self) -> Result<bool, ChainError> {
        match self {
            ChainTarget::Order(t) => Ok(t.min_nonisolated()),
            ChainTarget::Descriptor(d) => d.min_nonisolated().map_err(|e| ChainError::Descriptor(e.to_string())),
        }
    }

    pub fn order_type(&self) -> Result<OrderTypeExpr, ChainError> {
        match self {
            ChainTarget::Order(t) => Ok(t.clone()),
            ChainTarget::Descriptor(d) => d.order_type().map_err(|e| ChainError::Descriptor(e.to_string())),
        }
    }
}

impl fmt::Display for ChainTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainTarget::Order(t) => write!(f, "{t}"),
            ChainTarget::Descriptor(d) => write!(f, "{d}"),
        }
    }
}

impl FromStr for ChainTarget {
    type Err = ChainError;

    /// Order-type syntax first, then descriptor syntax, then the names
    /// `geoseq-order`, `omega_star_plus_limit`, `cantor_type`, `finite(k)`.
    fn from_str(s: &str) -> Result<Self, ChainError> {
        let alias = match s.trim() {
            "geoseq-order" | "omega_star_plus_limit" => Some(OrderTypeExpr::OmegaStar),
            "cantor_type" => Some(OrderTypeExpr::Cantor),
            t => t
                .strip_prefix("finite(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|k| k.trim().parse().ok())
                .filter(|&k: &usize| k > 0)
                .map(OrderTypeExpr::Finite),
        };
        if let Some(t) = alias {
            return Ok(ChainTarget::Order(t));
        }
        if let Ok(t) = s.parse::<OrderTypeExpr>() {
            return Ok(ChainTarget::Order(t));
        }
        s.parse::<CompactDescriptor>().map(ChainTarget::Descriptor).map_err(|_| {
            match crate::syntax::parse_call(s).ok().and_then(|c| unknown_atom(&c)) {
                Some(name) => ChainError::UnsupportedTarget(name),
                None => ChainError::Target(s.to_string()),
            }
        })
    }
}

const KNOWN_ATOMS: &[&str] = &[
    "fin", "finite", "omega_star", "omega_plus_one", "cantor", "interval", "sum", "union", "point", "points", "geoseq",
];

/// First head name in `call` that no target syntax knows.
fn unknown_atom(call: &crate::syntax::Call) -> Option<String> {
    if !call.parens {
        return None;
    }
    if !KNOWN_ATOMS.contains(&call.name.as_str()) {
        return Some(call.name.clone());
    }
    call.args.iter().find_map(unknown_atom)
}

/// Condensation classes of a truncation, and which of them have more than
/// one point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub classes: Vec<CondensationClass>,
    /// Indices into `classes` of the classes with `|L_x| > 1`.
    pub m: Vec<usize>,
    pub index_dense: bool,
}

pub fn decompose(t: &Truncation) -> Decomposition {
    let cond = t.condensation();
    let m = cond.classes.iter().enumerate().filter(|(_, c)| c.len > 1).map(|(i, _)| i).collect();
    Decomposition { classes: cond.classes, m, index_dense: cond.index_dense }
}

pub fn decompose_expr(t: &OrderTypeExpr, depth: usize) -> Decomposition {
    decompose(&t.truncate(depth))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanClass {
    pub x: Endpoint,
    pub size: usize,
    pub order_type: OrderTypeExpr,
}

/// A point `y` of `M` with its class index `φ(y)` and its set `I_y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MEntry {
    pub y: Endpoint,
    pub phi: usize,
    pub i_y: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainBuildPlan {
    pub target: String,
    pub depth: usize,
    pub classes: Vec<PlanClass>,
    pub m: Vec<MEntry>,
    /// `(0, c)` viewed at denominator 1: the integers carry the `J_0` part.
    pub window: Window,
    /// A one-point top was added so the top class has two points; its
    /// element is dropped from the assembled chain.
    pub appended_top: bool,
    /// Link pattern of the target truncation.
    pub target_linked: Vec<bool>,
}

/// Places the condensation classes of the target's truncation on the line.
/// The top class sits at `+∞`, a one-point bottom class at `-∞`, and the
/// rest at `j + 1/3` so that exactly one integer separates neighbours.
pub fn plan(target: &ChainTarget, depth: usize) -> Result<ChainBuildPlan, ChainError> {
    let trunc = target.truncation(depth)?;
    let dec = decompose(&trunc);
    let mut classes: Vec<(usize, OrderTypeExpr)> = dec.classes.iter().map(|c| (c.len, c.order_type.clone())).collect();
    let appended_top = classes.last().is_some_and(|c| c.0 == 1);
    if appended_top {
        let last = classes.last_mut().expect("nonempty");
        last.0 = 2;
        last.1 = OrderTypeExpr::sum(vec![last.1.clone(), OrderTypeExpr::Finite(1)]);
    }
    let n = classes.len();
    let bottom_at_neg_inf = n > 1 && classes[0].0 == 1;
    let offset = usize::from(bottom_at_neg_inf);
    let middle = n - 1 - offset;
    let c = (middle + offset + 1) as i64;
    let window = Window::bounded(Rat::ZERO, Rat::int(c), 1).expect("c >= 1");
    let mut placed = Vec::with_capacity(n);
    for (i, (size, order_type)) in classes.into_iter().enumerate() {
        let x = if i == n - 1 {
            Endpoint::PosInf
        } else if i == 0 && bottom_at_neg_inf {
            Endpoint::NegInf
        } else {
            Endpoint::Finite(Rat::int(i as i64) + Rat::frac(1, 3))
        };
        placed.push(PlanClass { x, size, order_type });
    }
    let mut m = Vec::new();
    for class in placed.iter().filter(|c| c.size > 1) {
        let phi = m.len() + 1;
        let hi = class.x.finite().unwrap_or(Rat::int(c));
        let count = class.size - 1;
        let i_y = canonical_members(phi, Rat::ZERO, hi, count, I_Y_CEILING)
            .ok_or(ChainError::NoIndexPoints { class: phi, count, below: class.x })?;
        m.push(MEntry { y: class.x, phi, i_y });
    }
    Ok(ChainBuildPlan {
        target: target.to_string(),
        depth,
        classes: placed,
        m,
        window,
        appended_top,
        target_linked: trunc.linked,
    })
}

impl ChainBuildPlan {
    fn c(&self) -> Rat {
        self.window.hi().finite().expect("bounded window")
    }

    /// `J_0 ∩ (0, x)` inside the window.
    pub fn j0_below(&self, x: Endpoint) -> BTreeSet<Rat> {
        let hi = match x {
            Endpoint::NegInf => return BTreeSet::new(),
            Endpoint::Finite(v) => v.min(self.c()),
            Endpoint::PosInf => self.c(),
        };
        if hi <= Rat::ZERO {
            return BTreeSet::new();
        }
        let w = Window::bounded(Rat::ZERO, hi, 1).expect("nonempty");
        window_members(0, &w).expect("bounded").into_iter().collect()
    }

    pub fn m_entry(&self, x: Endpoint) -> Option<&MEntry> {
        self.m.iter().find(|e| e.y == x)
    }
}

/// `A_x`, and `A_x⁺` when `x ∈ M`.
pub fn build_ax(plan: &ChainBuildPlan, x: Endpoint) -> (BTreeSet<Rat>, Option<BTreeSet<Rat>>) {
    let mut a = plan.j0_below(x);
    for entry in plan.m.iter().filter(|e| e.y < x) {
        a.extend(entry.i_y.iter().copied());
    }
    let plus = plan.m_entry(x).map(|e| {
        let mut p = a.clone();
        p.extend(e.i_y.iter().copied());
        p
    });
    (a, plus)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Carrier {
    Window(BTreeSet<Rat>),
    Symbolic(SymbolicSet),
    Pqr(PqrSpec),
}

impl Carrier {
    /// `None` when the carriers are of different kinds.
    pub fn is_subset(&self, other: &Carrier) -> Option<bool> {
        match (self, other) {
            (Carrier::Window(a), Carrier::Window(b)) => Some(a.is_subset(b)),
            (Carrier::Symbolic(a), Carrier::Symbolic(b)) => Some(a.is_subset(b)),
            (Carrier::Pqr(a), Carrier::Pqr(b)) => Some(a.is_subset(b)),
            _ => None,
        }
    }

    pub fn is_proper_subset(&self, other: &Carrier) -> bool {
        self != other && self.is_subset(other) == Some(true)
    }

    /// Number of points, for finite carriers.
    pub fn size(&self) -> Option<usize> {
        match self {
            Carrier::Window(a) => Some(a.len()),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Carrier::Window(_) => "window",
            Carrier::Symbolic(_) => "symbolic",
            Carrier::Pqr(_) => "pqr",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum Provenance {
    #[serde(rename = "A_x")]
    Ax { x: Endpoint },
    #[serde(rename = "A_x_plus")]
    AxPlus { x: Endpoint },
    IntervalStep { x: Endpoint, step: usize },
    FamilyMember { step: usize },
    Empty,
}

impl Provenance {
    pub fn x(&self) -> Option<Endpoint> {
        match *self {
            Provenance::Ax { x } | Provenance::AxPlus { x } | Provenance::IntervalStep { x, .. } => Some(x),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainElement {
    pub provenance: Provenance,
    pub carrier: Carrier,
    pub size: Option<usize>,
}

impl ChainElement {
    pub fn new(provenance: Provenance, carrier: Carrier) -> Self {
        let size = carrier.size();
        ChainElement { provenance, carrier, size }
    }
}

/// `ℒ = ⋃_x ℒ_x` in increasing order of `x`.
pub fn assemble_chain(plan: &ChainBuildPlan) -> Result<Vec<ChainElement>, ChainError> {
    let mut out = Vec::new();
    for class in &plan.classes {
        let x = class.x;
        let (a, plus) = build_ax(plan, x);
        match plus {
            None => out.push(ChainElement::new(Provenance::Ax { x }, Carrier::Window(a))),
            Some(b) => {
                let steps = interval_chain(&a, &b, &FiniteLinearOrder::chain(class.size))?;
                let last = steps.len() - 1;
                for (k, e) in steps.into_iter().enumerate() {
                    let provenance = match k {
                        0 => Provenance::Ax { x },
                        k if k == last => Provenance::AxPlus { x },
                        step => Provenance::IntervalStep { x, step },
                    };
                    out.push(ChainElement::new(provenance, Carrier::Window(e)));
                }
            }
        }
    }
    if plan.appended_top {
        out.pop();
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssemblyReport {
    pub length: usize,
    pub target_length: usize,
    pub strictly_increasing: bool,
    /// Same length and same link pattern as the target truncation, links
    /// read off the chain: a step is linked iff it adds one point outside
    /// `J_0`.
    pub isomorphic: bool,
    /// `J_0 ∩ (0, x) ⊆ E ⊆ (-∞, x)` for each element `E` of `ℒ_x`.
    pub sandwich: bool,
    /// `x` never decreases along the chain.
    pub classes_ordered: bool,
}

impl AssemblyReport {
    pub fn ok(&self) -> bool {
        self.strictly_increasing && self.isomorphic && self.sandwich && self.classes_ordered
    }
}

pub fn check_assembly(plan: &ChainBuildPlan, chain: &[ChainElement]) -> AssemblyReport {
    let sets: Vec<&BTreeSet<Rat>> = chain
        .iter()
        .filter_map(|e| match &e.carrier {
            Carrier::Window(s) => Some(s),
            _ => None,
        })
        .collect();
    let all_window = sets.len() == chain.len();
    let strictly_increasing = all_window && sets.windows(2).all(|w| w[0].len() < w[1].len() && w[0].is_subset(w[1]));
    let linked: Vec<bool> = sets
        .windows(2)
        .map(|w| {
            let diff: Vec<&Rat> = w[1].difference(w[0]).collect();
            diff.len() == 1 && jclass(*diff[0]) != 0
        })
        .collect();
    let target_length = plan.target_linked.len() + 1;
    let isomorphic = chain.len() == target_length && linked == plan.target_linked;
    let sandwich = chain.iter().zip(&sets).all(|(e, s)| {
        let Some(x) = e.provenance.x() else { return false };
        plan.j0_below(x).is_subset(s) && s.iter().all(|&v| x.above(v))
    });
    let xs: Vec<Option<Endpoint>> = chain.iter().map(|e| e.provenance.x()).collect();
    let classes_ordered = xs.windows(2).all(|w| w[0] <= w[1]);
    AssemblyReport { length: chain.len(), target_length, strictly_increasing, isomorphic, sandwich, classes_ordered }
}

/// Enumeration behind a chain cut from a positive family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSchema {
    pub carrier_kind: String,
    pub enumeration_rule: String,
    pub steps_emitted: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyChain {
    pub family: String,
    pub target: String,
    pub schema: GeneratorSchema,
    /// Emitted top-down: the full carrier first.
    pub elements: Vec<ChainElement>,
    pub members: bool,
    pub single_point_steps: bool,
    /// The reversed prefix matches the target truncation without its limit.
    pub prefix_matches: bool,
}

/// `(i, e)` pairs by `i + e`, then by `i`.
pub fn vertex_enumeration() -> impl Iterator<Item = Vertex> {
    (0u64..).flat_map(|s| (0..=s).map(move |i| (i, s - i)))
}

/// Step at which the family generator removes `v`; every vertex is removed
/// eventually, so the emitted elements have empty intersection.
pub fn vertex_removal_step(v: Vertex) -> u64 {
    let s = v.0 + v.1;
    s * (s + 1) / 2 + v.0 + 1
}

/// Top-down chain `X ⊋ X \ {p_0} ⊋ X \ {p_0, p_1} ⊋ ...` in a positive
/// family, for targets `1 + ω*` followed by finitely many points. The
/// emitted prefix has one element per non-limit point of the depth-`depth`
/// truncation.
pub fn chain_from_positive_family(t: &OrderTypeExpr, family: Family, depth: usize) -> Result<FamilyChain, ChainError> {
    if !t.min_nonisolated() {
        return Err(ChainError::MinIsolated);
    }
    let parts = t.parts();
    if parts[0] != OrderTypeExpr::OmegaStar {
        return Err(ChainError::UnsupportedTarget(parts[0].to_string()));
    }
    if let Some(bad) = parts[1..].iter().find(|p| !matches!(p, OrderTypeExpr::Finite(_))) {
        return Err(ChainError::UnsupportedTarget(bad.to_string()));
    }
    let trunc = t.truncate(depth);
    let steps = trunc.len() - 1;
    let (kind, rule, carriers): (&str, &str, Vec<Carrier>) = match family {
        Family::Pqr => {
            let mut cur = PqrSpec::full();
            let mut out = vec![Carrier::Pqr(cur.clone())];
            for q in rationals_by_height().take(steps - 1) {
                cur = cur.remove(q);
                out.push(Carrier::Pqr(cur.clone()));
            }
            ("pqr", "rationals by height |p|+q, then denominator, then value", out)
        }
        Family::OmegaOmega => {
            let mut cur = SymbolicSet::full();
            let mut out = vec![Carrier::Symbolic(cur.clone())];
            for v in vertex_enumeration().take(steps - 1) {
                cur = cur.remove(v);
                out.push(Carrier::Symbolic(cur.clone()));
            }
            ("symbolic", "vertices (i, e) by i + e, then i", out)
        }
        other => return Err(ChainError::UnsupportedFamily(other.to_string())),
    };
    let members = carriers.iter().all(|c| match c {
        Carrier::Pqr(p) => pqr_membership(p).member && p.contains(p.sample_point()),
        Carrier::Symbolic(s) => in_omega_omega_family(s),
        Carrier::Window(_) => false,
    });
    let single_point_steps = carriers.windows(2).all(|w| match (&w[0], &w[1]) {
        (Carrier::Symbolic(a), Carrier::Symbolic(b)) => b.is_proper_subset(a) && a.delta_size(b) == Some(1),
        (Carrier::Pqr(a), Carrier::Pqr(b)) => {
            b.is_subset(a) && !a.is_subset(b) && a.finite_exclusions().count() + 1 == b.finite_exclusions().count()
        }
        _ => false,
    });
    let prefix_matches = carriers.len() == trunc.len() - 1 && trunc.linked[1..].iter().all(|&l| l);
    let elements: Vec<ChainElement> = carriers
        .into_iter()
        .enumerate()
        .map(|(step, c)| ChainElement::new(Provenance::FamilyMember { step }, c))
        .collect();
    Ok(FamilyChain {
        family: family.to_string(),
        target: t.to_string(),
        schema: GeneratorSchema { carrier_kind: kind.into(), enumeration_rule: rule.into(), steps_emitted: elements.len() },
        elements,
        members,
        single_point_steps,
        prefix_matches,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeViolation {
    pub probe: usize,
    pub candidate: Carrier,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub probes: usize,
    pub seed: u64,
    pub adversarial: usize,
    pub violations: Vec<ProbeViolation>,
    /// No candidate extends the chain. Necessary for maximality, not
    /// sufficient.
    pub clean: bool,
}

fn allowed(c: &Carrier) -> bool {
    match c {
        Carrier::Window(_) => true,
        Carrier::Symbolic(s) => s.is_empty() || in_omega_omega_family(s),
        Carrier::Pqr(_) => true,
    }
}

fn toggle(c: &Carrier, rng: &mut ChaCha8Rng, span: &BTreeSet<Rat>) -> Carrier {
    match c {
        Carrier::Window(s) => {
            let pool: Vec<&Rat> = span.iter().collect();
            let mut out = s.clone();
            if !pool.is_empty() {
                let p = *pool[rng.random_range(0..pool.len())];
                if !out.remove(&p) {
                    out.insert(p);
                }
            }
            Carrier::Window(out)
        }
        Carrier::Symbolic(s) => {
            let v = (rng.random_range(0..6), rng.random_range(0..6));
            Carrier::Symbolic(if s.contains(v) { s.remove(v) } else { s.insert(v) })
        }
        Carrier::Pqr(p) => {
            let q = rationals_by_height().nth(rng.random_range(0..40)).expect("infinite");
            Carrier::Pqr(if p.contains(q) { p.remove(q) } else { p.restore(q) })
        }
    }
}

/// Adversarial single-point moves across each step of the chain.
fn adversarial(chain: &[Carrier]) -> Vec<Carrier> {
    let mut out = Vec::new();
    for w in chain.windows(2) {
        match (&w[0], &w[1]) {
            (Carrier::Window(a), Carrier::Window(b)) => {
                for &p in b.difference(a) {
                    let mut up = a.clone();
                    up.insert(p);
                    out.push(Carrier::Window(up));
                    let mut down = b.clone();
                    down.remove(&p);
                    out.push(Carrier::Window(down));
                }
            }
            (Carrier::Symbolic(a), Carrier::Symbolic(b)) => {
                for v in vertex_enumeration().take(64).filter(|&v| b.contains(v) && !a.contains(v)) {
                    out.push(Carrier::Symbolic(a.insert(v)));
                    out.push(Carrier::Symbolic(b.remove(v)));
                }
            }
            (Carrier::Pqr(a), Carrier::Pqr(b)) => {
                for q in rationals_by_height().take(64).filter(|&q| b.contains(q) && !a.contains(q)) {
                    out.push(Carrier::Pqr(a.restore(q)));
                    out.push(Carrier::Pqr(b.remove(q)));
                }
            }
            _ => {}
        }
    }
    out
}

/// Looks for a set comparable with every element of an increasing chain,
/// inside its span, allowed by the carrier's family, yet not in the chain.
pub fn probe_maximality(chain: &[Carrier], probes: usize, seed: u64) -> Result<ProbeReport, ChainError> {
    for (i, w) in chain.windows(2).enumerate() {
        if !w[0].is_proper_subset(&w[1]) {
            return Err(ChainError::NotIncreasing(i));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span: BTreeSet<Rat> = match chain.last() {
        Some(Carrier::Window(s)) => s.clone(),
        _ => BTreeSet::new(),
    };
    let adv = adversarial(chain);
    let adversarial_count = adv.len().min(probes);
    let mut violations = Vec::new();
    let mut queue = adv.into_iter();
    for probe in 0..probes {
        let candidate = match queue.next() {
            Some(c) => c,
            None if chain.is_empty() => break,
            None => {
                let base = &chain[rng.random_range(0..chain.len())];
                let moves = rng.random_range(1..=2);
                (0..moves).fold(base.clone(), |c, _| toggle(&c, &mut rng, &span))
            }
        };
        if extends(chain, &candidate) {
            violations.push(ProbeViolation { probe, candidate });
        }
    }
    let clean = violations.is_empty();
    Ok(ProbeReport { probes, seed, adversarial: adversarial_count, violations, clean })
}

fn extends(chain: &[Carrier], c: &Carrier) -> bool {
    let (Some(first), Some(last)) = (chain.first(), chain.last()) else { return false };
    allowed(c)
        && first.is_subset(c) == Some(true)
        && c.is_subset(last) == Some(true)
        && !chain.contains(c)
        && chain.iter().all(|e| e.is_subset(c) == Some(true) || c.is_subset(e) == Some(true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[i64]) -> BTreeSet<i64> {
        xs.iter().copied().collect()
    }

    fn target(s: &str) -> ChainTarget {
        s.parse().unwrap()
    }

    #[test]
    fn interval_chain_examples() {
        let c = interval_chain(&set(&[]), &set(&[1, 2]), &FiniteLinearOrder::chain(3)).unwrap();
        assert_eq!(c, vec![set(&[]), set(&[1]), set(&[1, 2])]);
        let same = interval_chain(&set(&[4]), &set(&[4]), &FiniteLinearOrder::chain(1)).unwrap();
        assert_eq!(same, vec![set(&[4])]);
        assert_eq!(
            interval_chain(&set(&[]), &set(&[1]), &FiniteLinearOrder::chain(3)),
            Err(ChainError::CardinalityMismatch { expected: 2, got: 3 })
        );
        assert_eq!(interval_chain(&set(&[5]), &set(&[1]), &FiniteLinearOrder::chain(1)), Err(ChainError::NotSubset));
    }

    #[test]
    fn unknown_atoms_named() {
        assert_eq!("union(point(0), spiral(1))".parse::<ChainTarget>(), Err(ChainError::UnsupportedTarget("spiral".into())));
        assert_eq!("fin(0".parse::<ChainTarget>(), Err(ChainError::Target("fin(0".into())));
        assert_eq!(target("geoseq-order"), ChainTarget::Order(OrderTypeExpr::OmegaStar));
        assert_eq!(target("finite(4)"), ChainTarget::Order(OrderTypeExpr::Finite(4)));
    }

    #[test]
    fn decompose_examples() {
        let cantor = decompose_expr(&OrderTypeExpr::Cantor, 3);
        assert_eq!(cantor.m.len(), 7);
        assert!(cantor.m.iter().all(|&i| cantor.classes[i].len == 2));
        let five = decompose_expr(&OrderTypeExpr::Finite(5), 3);
        assert_eq!((five.classes.len(), five.m.len(), five.classes[0].len), (1, 1, 5));
        let star = decompose_expr(&OrderTypeExpr::OmegaStar, 6);
        assert_eq!(star.classes.len(), 1);
        assert_eq!(star.classes[0].order_type, OrderTypeExpr::OmegaStar);
    }

    #[test]
    fn finite_three_chain() {
        let p = plan(&target("fin(3)"), 4).unwrap();
        assert_eq!(p.m.len(), 1);
        assert_eq!(p.m[0].i_y.len(), 2);
        let chain = assemble_chain(&p).unwrap();
        assert_eq!(chain.len(), 3);
        assert!(check_assembly(&p, &chain).ok());
        let (a, plus) = build_ax(&p, Endpoint::PosInf);
        assert_eq!(chain[0].carrier, Carrier::Window(a));
        assert_eq!(chain[2].carrier, Carrier::Window(plus.unwrap()));
    }

    #[test]
    fn cantor_chain_matches_truncation() {
        for depth in 1..=3 {
            let p = plan(&target("cantor"), depth).unwrap();
            assert!(p.appended_top);
            let chain = assemble_chain(&p).unwrap();
            let rep = check_assembly(&p, &chain);
            assert!(rep.ok(), "depth {depth}: {rep:?}");
            assert_eq!(rep.length, OrderTypeExpr::Cantor.truncate(depth).len());
        }
        assert_eq!(build_ax(&plan(&target("cantor"), 2).unwrap(), Endpoint::NegInf).0, BTreeSet::new());
    }

    #[test]
    fn descriptor_targets() {
        let p = plan(&target("cantor(0,1)"), 3).unwrap();
        let chain = assemble_chain(&p).unwrap();
        assert!(check_assembly(&p, &chain).ok());
        let carriers: Vec<Carrier> = chain.iter().map(|e| e.carrier.clone()).collect();
        assert!(probe_maximality(&carriers, 500, 1).unwrap().clean);
    }

    #[test]
    fn planted_gap_found() {
        let p = plan(&target("fin(5)"), 1).unwrap();
        let mut carriers: Vec<Carrier> = assemble_chain(&p).unwrap().into_iter().map(|e| e.carrier).collect();
        carriers.remove(2);
        let rep = probe_maximality(&carriers, 100, 3).unwrap();
        assert!(!rep.clean);
    }

    #[test]
    fn family_chains() {
        for fam in [Family::Pqr, Family::OmegaOmega] {
            let fc = chain_from_positive_family(&OrderTypeExpr::OmegaStar, fam, 6).unwrap();
            assert_eq!(fc.schema.steps_emitted, 6);
            assert!(fc.members && fc.single_point_steps && fc.prefix_matches);
            let mut asc: Vec<Carrier> = fc.elements.iter().map(|e| e.carrier.clone()).collect();
            asc.reverse();
            assert!(probe_maximality(&asc, 300, 9).unwrap().clean);
        }
        assert_eq!(
            chain_from_positive_family(&OrderTypeExpr::Finite(3), Family::Pqr, 4).unwrap_err(),
            ChainError::MinIsolated
        );
    }

    #[test]
    fn two_element_family_chain_has_room() {
        let chain = [Carrier::Symbolic(SymbolicSet::empty()), Carrier::Symbolic(SymbolicSet::full())];
        assert!(!probe_maximality(&chain, 10, 0).unwrap().clean);
    }

    #[test]
    fn vertex_enumeration_matches_step() {
        for (k, v) in vertex_enumeration().take(50).enumerate() {
            assert_eq!(vertex_removal_step(v), k as u64 + 1);
        }
    }
}
