//! Symbolic subsets of the disjoint union of complete graphs `G_{μν}`
//! (`μν = ω`), their copy predicates, supports, jump pairs and the positive
//! families built from them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::henson::{pqr_membership, PqrSpec};
use crate::qline::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GmunuError {
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("shape must have mu * nu = omega, got {0}")]
    BadShape(String),
    #[error("mask on component {component} lists element {element}, outside a component of size {size}")]
    MaskTooLarge { component: u64, element: u64, size: u64 },
    #[error("set is not a copy")]
    NotACopy,
    #[error("vertex ({0}, {1}) is already in the set")]
    AlreadyMember(u64, u64),
    #[error("component {0} is not in the support")]
    NotInSupport(u64),
    #[error("chain element {0} is not a copy")]
    ChainNotCopy(usize),
    #[error("chain elements {0} and {1} are not strictly increasing")]
    NotIncreasing(usize, usize),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
}

/// An eventually periodic subset of ℕ: a periodic pattern plus finitely many
/// exceptions. Kept canonical (minimal period, only real exceptions), so
/// structural equality is set equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodicSet {
    period: u64,
    residues: BTreeSet<u64>,
    added: BTreeSet<u64>,
    removed: BTreeSet<u64>,
}

impl PeriodicSet {
    pub fn empty() -> Self {
        PeriodicSet { period: 1, residues: BTreeSet::new(), added: BTreeSet::new(), removed: BTreeSet::new() }
    }

    pub fn full() -> Self {
        PeriodicSet::periodic(1, [0])
    }

    pub fn finite(items: impl IntoIterator<Item = u64>) -> Self {
        PeriodicSet { added: items.into_iter().collect(), ..PeriodicSet::empty() }
    }

    pub fn cofinite(missing: impl IntoIterator<Item = u64>) -> Self {
        PeriodicSet { removed: missing.into_iter().collect(), ..PeriodicSet::full() }
    }

    /// `{k : k mod period ∈ residues}`.
    pub fn periodic(period: u64, residues: impl IntoIterator<Item = u64>) -> Self {
        PeriodicSet::build(period, residues.into_iter().collect(), BTreeSet::new(), BTreeSet::new())
    }

    pub fn build(period: u64, residues: BTreeSet<u64>, added: BTreeSet<u64>, removed: BTreeSet<u64>) -> Self {
        assert!(period >= 1);
        let residues: BTreeSet<u64> = residues.into_iter().map(|r| r % period).collect();
        let raw = PeriodicSet { period, residues, added, removed };
        let mut out = PeriodicSet {
            period: raw.period,
            residues: raw.residues.clone(),
            added: BTreeSet::new(),
            removed: BTreeSet::new(),
        };
        out.shrink_period();
        for &k in raw.added.iter().chain(&raw.removed) {
            let actual = raw.contains(k);
            if actual != out.pattern(k) {
                if actual { out.added.insert(k) } else { out.removed.insert(k) };
            }
        }
        out
    }

    fn shrink_period(&mut self) {
        let l = self.period;
        for d in (1..=l).filter(|d| l.is_multiple_of(*d)) {
            if (0..l).all(|r| self.residues.contains(&r) == self.residues.contains(&(r % d))) {
                self.residues = self.residues.iter().copied().filter(|&r| r < d).collect();
                self.period = d;
                return;
            }
        }
    }

    fn pattern(&self, k: u64) -> bool {
        self.residues.contains(&(k % self.period))
    }

    pub fn contains(&self, k: u64) -> bool {
        if self.added.contains(&k) {
            true
        } else if self.removed.contains(&k) {
            false
        } else {
            self.pattern(k)
        }
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty() && self.added.is_empty()
    }

    pub fn is_infinite(&self) -> bool {
        !self.residues.is_empty()
    }

    pub fn is_full(&self) -> bool {
        *self == PeriodicSet::full()
    }

    /// Cardinality when finite.
    pub fn finite_len(&self) -> Option<u64> {
        (!self.is_infinite()).then_some(self.added.len() as u64)
    }

    /// Largest exception, past which the set follows its pattern.
    fn horizon(&self) -> u64 {
        self.added.iter().chain(&self.removed).next_back().map_or(0, |k| k + 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let stop = if self.is_infinite() { u64::MAX } else { self.horizon() };
        (0..stop).filter(move |&k| self.contains(k))
    }

    pub fn first(&self) -> Option<u64> {
        if self.is_empty() {
            return None;
        }
        self.iter().next()
    }

    fn combine(&self, other: &PeriodicSet, f: impl Fn(bool, bool) -> bool) -> PeriodicSet {
        let l = self.period.lcm(&other.period);
        let residues = (0..l).filter(|&r| f(self.pattern(r), other.pattern(r))).collect();
        let mut added = BTreeSet::new();
        let mut removed = BTreeSet::new();
        for &k in self.added.iter().chain(&self.removed).chain(&other.added).chain(&other.removed) {
            if f(self.contains(k), other.contains(k)) {
                added.insert(k);
            } else {
                removed.insert(k);
            }
        }
        PeriodicSet::build(l, residues, added, removed)
    }

    pub fn union(&self, other: &PeriodicSet) -> PeriodicSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &PeriodicSet) -> PeriodicSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &PeriodicSet) -> PeriodicSet {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> PeriodicSet {
        self.combine(&PeriodicSet::empty(), |a, _| !a)
    }

    pub fn is_subset(&self, other: &PeriodicSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn with(&self, k: u64) -> PeriodicSet {
        self.union(&PeriodicSet::finite([k]))
    }

    pub fn without(&self, k: u64) -> PeriodicSet {
        self.difference(&PeriodicSet::finite([k]))
    }

    /// `self ∩ {0, ..., n-1}`.
    pub fn below(&self, n: u64) -> PeriodicSet {
        PeriodicSet::finite((0..n).filter(|&k| self.contains(k)))
    }

    /// Largest explicitly listed element, used to validate masks against a
    /// finite component size.
    fn listed_max(&self) -> Option<u64> {
        self.added.iter().chain(&self.removed).next_back().copied()
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &BTreeSet<u64>) -> fmt::Result {
    f.write_str("{")?;
    for (i, k) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{k}")?;
    }
    f.write_str("}")
}

impl fmt::Display for PeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residues.is_empty() {
            if self.added.is_empty() {
                return f.write_str("empty");
            }
            f.write_str("fin")?;
            return write_list(f, &self.added);
        }
        if self.period == 1 && self.added.is_empty() {
            if self.removed.is_empty() {
                return f.write_str("full");
            }
            f.write_str("cofin")?;
            return write_list(f, &self.removed);
        }
        write!(f, "mod{}", self.period)?;
        write_list(f, &self.residues)?;
        if !self.added.is_empty() {
            f.write_str("+")?;
            write_list(f, &self.added)?;
        }
        if !self.removed.is_empty() {
            f.write_str("-")?;
            write_list(f, &self.removed)?;
        }
        Ok(())
    }
}

fn parse_list(s: &str) -> Option<(BTreeSet<u64>, &str)> {
    let s = s.trim_start().strip_prefix('{')?;
    let (body, rest) = s.split_once('}')?;
    let mut out = BTreeSet::new();
    for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        out.insert(tok.parse().ok()?);
    }
    Some((out, rest))
}

impl FromStr for PeriodicSet {
    type Err = GmunuError;

    fn from_str(src: &str) -> Result<Self, Self::Err> {
        let err = || GmunuError::Parse(src.to_string());
        let s = src.trim();
        match s {
            "full" => return Ok(PeriodicSet::full()),
            "empty" => return Ok(PeriodicSet::empty()),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("cofin") {
            let (items, tail) = parse_list(rest).ok_or_else(err)?;
            return if tail.trim().is_empty() { Ok(PeriodicSet::cofinite(items)) } else { Err(err()) };
        }
        if let Some(rest) = s.strip_prefix("fin") {
            let (items, tail) = parse_list(rest).ok_or_else(err)?;
            return if tail.trim().is_empty() { Ok(PeriodicSet::finite(items)) } else { Err(err()) };
        }
        let rest = s.strip_prefix("mod").ok_or_else(err)?;
        let digits = rest.find('{').ok_or_else(err)?;
        let period: u64 = rest[..digits].trim().parse().map_err(|_| err())?;
        if period == 0 {
            return Err(err());
        }
        let (residues, mut tail) = parse_list(&rest[digits..]).ok_or_else(err)?;
        let (mut added, mut removed) = (BTreeSet::new(), BTreeSet::new());
        loop {
            let t = tail.trim_start();
            if t.is_empty() {
                break;
            }
            let (sign, after) = t.split_at(1);
            let (items, next) = parse_list(after).ok_or_else(err)?;
            match sign {
                "+" => added.extend(items),
                "-" => removed.extend(items),
                _ => return Err(err()),
            }
            tail = next;
        }
        if residues.iter().any(|&r| r >= period) {
            return Err(err());
        }
        Ok(PeriodicSet::build(period, residues, added, removed))
    }
}

/// Component index and element index.
pub type Vertex = (u64, u64);

/// A subset of `⋃ G_i`: a mask per component, given explicitly for finitely
/// many components and by a repeating cycle for the rest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicSet {
    explicit: BTreeMap<u64, PeriodicSet>,
    default: Vec<PeriodicSet>,
}

impl SymbolicSet {
    pub fn new(explicit: BTreeMap<u64, PeriodicSet>, default: Vec<PeriodicSet>) -> Self {
        assert!(!default.is_empty(), "default cycle must be nonempty");
        let mut s = SymbolicSet { explicit, default };
        s.canonicalize();
        s
    }

    pub fn empty() -> Self {
        SymbolicSet::uniform(PeriodicSet::empty())
    }

    pub fn full() -> Self {
        SymbolicSet::uniform(PeriodicSet::full())
    }

    /// The same mask on every component.
    pub fn uniform(mask: PeriodicSet) -> Self {
        SymbolicSet::new(BTreeMap::new(), vec![mask])
    }

    pub fn with_component(&self, i: u64, mask: PeriodicSet) -> Self {
        let mut explicit = self.explicit.clone();
        explicit.insert(i, mask);
        SymbolicSet::new(explicit, self.default.clone())
    }

    fn canonicalize(&mut self) {
        let l = self.default.len();
        for d in (1..=l).filter(|d| l.is_multiple_of(*d)) {
            if (0..l).all(|r| self.default[r] == self.default[r % d]) {
                self.default.truncate(d);
                break;
            }
        }
        let default = &self.default;
        self.explicit.retain(|&i, m| *m != default[(i % default.len() as u64) as usize]);
    }

    pub fn mask(&self, i: u64) -> &PeriodicSet {
        self.explicit.get(&i).unwrap_or_else(|| &self.default[(i % self.default.len() as u64) as usize])
    }

    pub fn explicit(&self) -> &BTreeMap<u64, PeriodicSet> {
        &self.explicit
    }

    pub fn default_cycle(&self) -> &[PeriodicSet] {
        &self.default
    }

    pub fn contains(&self, (i, e): Vertex) -> bool {
        self.mask(i).contains(e)
    }

    pub fn is_empty(&self) -> bool {
        self.default.iter().all(PeriodicSet::is_empty) && self.explicit.values().all(PeriodicSet::is_empty)
    }

    fn zip(&self, other: &SymbolicSet, f: impl Fn(&PeriodicSet, &PeriodicSet) -> PeriodicSet) -> SymbolicSet {
        let l = self.default.len().lcm(&other.default.len());
        let default = (0..l).map(|r| f(&self.default[r % self.default.len()], &other.default[r % other.default.len()])).collect();
        let keys: BTreeSet<u64> = self.explicit.keys().chain(other.explicit.keys()).copied().collect();
        let explicit = keys.into_iter().map(|i| (i, f(self.mask(i), other.mask(i)))).collect();
        SymbolicSet::new(explicit, default)
    }

    pub fn union(&self, other: &SymbolicSet) -> SymbolicSet {
        self.zip(other, PeriodicSet::union)
    }

    pub fn intersection(&self, other: &SymbolicSet) -> SymbolicSet {
        self.zip(other, PeriodicSet::intersection)
    }

    pub fn difference(&self, other: &SymbolicSet) -> SymbolicSet {
        self.zip(other, PeriodicSet::difference)
    }

    pub fn is_subset(&self, other: &SymbolicSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_proper_subset(&self, other: &SymbolicSet) -> bool {
        self != other && self.is_subset(other)
    }

    pub fn insert(&self, (i, e): Vertex) -> SymbolicSet {
        self.with_component(i, self.mask(i).with(e))
    }

    pub fn remove(&self, (i, e): Vertex) -> SymbolicSet {
        self.with_component(i, self.mask(i).without(e))
    }

    /// Size of the symmetric difference, when finite.
    pub fn delta_size(&self, other: &SymbolicSet) -> Option<u64> {
        let delta = self.difference(other).union(&other.difference(self));
        if !delta.default.iter().all(PeriodicSet::is_empty) {
            return None;
        }
        delta.explicit.values().map(PeriodicSet::finite_len).sum()
    }

    /// The components `i` whose mask satisfies `pred`, as a subset of ℕ.
    pub fn components_where(&self, pred: impl Fn(&PeriodicSet) -> bool) -> PeriodicSet {
        let l = self.default.len() as u64;
        let residues = (0..l).filter(|&r| pred(&self.default[r as usize])).collect();
        let (mut added, mut removed) = (BTreeSet::new(), BTreeSet::new());
        for (&i, m) in &self.explicit {
            if pred(m) {
                added.insert(i);
            } else {
                removed.insert(i);
            }
        }
        PeriodicSet::build(l, residues, added, removed)
    }

    fn components_where2(&self, other: &SymbolicSet, pred: impl Fn(&PeriodicSet, &PeriodicSet) -> bool) -> PeriodicSet {
        let l = self.default.len().lcm(&other.default.len());
        let residues = (0..l as u64)
            .filter(|&r| pred(&self.default[r as usize % self.default.len()], &other.default[r as usize % other.default.len()]))
            .collect();
        let (mut added, mut removed) = (BTreeSet::new(), BTreeSet::new());
        for &i in self.explicit.keys().chain(other.explicit.keys()) {
            if pred(self.mask(i), other.mask(i)) {
                added.insert(i);
            } else {
                removed.insert(i);
            }
        }
        PeriodicSet::build(l as u64, residues, added, removed)
    }

    /// The trace `A ∩ G_i` as a set of element indices, for components of
    /// size `nu`.
    pub fn trace(&self, i: u64, nu: Card) -> PeriodicSet {
        match nu {
            Card::Omega => self.mask(i).clone(),
            Card::Finite(n) => self.mask(i).below(n),
        }
    }
}

/// `supp A`: components met by `A`, with infinite components.
pub fn supp(s: &SymbolicSet) -> PeriodicSet {
    s.components_where(|m| !m.is_empty())
}

impl fmt::Display for SymbolicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.default.len() == 1 {
            write!(f, "default={}", self.default[0])?;
        } else {
            f.write_str("default=[")?;
            for (i, m) in self.default.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{m}")?;
            }
            f.write_str("]")?;
        }
        for (i, m) in &self.explicit {
            write!(f, "; {i}:{m}")?;
        }
        Ok(())
    }
}

/// Splits on `sep` outside braces and brackets.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '{' | '[' => depth += 1,
            '}' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl FromStr for SymbolicSet {
    type Err = GmunuError;

    fn from_str(src: &str) -> Result<Self, Self::Err> {
        let err = || GmunuError::Parse(src.to_string());
        let mut default = vec![PeriodicSet::empty()];
        let mut explicit = BTreeMap::new();
        for part in split_top(src, ';').into_iter().map(str::trim).filter(|p| !p.is_empty()) {
            if let Some(rest) = part.strip_prefix("default") {
                let rest = rest.trim_start().strip_prefix('=').ok_or_else(err)?.trim();
                default = match rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                    Some(body) => split_top(body, ',').into_iter().map(str::parse).collect::<Result<Vec<_>, _>>()?,
                    None => vec![rest.parse()?],
                };
                if default.is_empty() {
                    return Err(err());
                }
            } else {
                let (idx, mask) = part.split_once(':').ok_or_else(err)?;
                let idx: u64 = idx.trim().parse().map_err(|_| err())?;
                explicit.insert(idx, mask.parse()?);
            }
        }
        Ok(SymbolicSet::new(explicit, default))
    }
}

impl Serialize for SymbolicSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SymbolicSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Card {
    Omega,
    Finite(u64),
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Omega => f.write_str("omega"),
            Card::Finite(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for Card {
    type Err = GmunuError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "omega" | "ω" | "w" => Ok(Card::Omega),
            t => t.parse().map(Card::Finite).map_err(|_| GmunuError::Parse(s.to_string())),
        }
    }
}

/// `μ` copies of `K_ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GraphShape {
    pub mu: Card,
    pub nu: Card,
}

impl GraphShape {
    pub fn new(mu: Card, nu: Card) -> Result<Self, GmunuError> {
        let ok = match (mu, nu) {
            (Card::Omega, Card::Omega) => true,
            (Card::Omega, Card::Finite(n)) | (Card::Finite(n), Card::Omega) => n >= 1,
            _ => false,
        };
        if ok {
            Ok(GraphShape { mu, nu })
        } else {
            Err(GmunuError::BadShape(format!("{mu},{nu}")))
        }
    }

    pub fn omega_omega() -> Self {
        GraphShape { mu: Card::Omega, nu: Card::Omega }
    }
}

impl fmt::Display for GraphShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.mu, self.nu)
    }
}

impl FromStr for GraphShape {
    type Err = GmunuError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once(',').ok_or_else(|| GmunuError::Parse(s.to_string()))?;
        GraphShape::new(a.parse()?, b.parse()?)
    }
}

fn check_masks(s: &SymbolicSet, nu: Card) -> Result<(), GmunuError> {
    let Card::Finite(n) = nu else { return Ok(()) };
    let listed = s.explicit.iter().map(|(&i, m)| (i, m)).chain(s.default.iter().enumerate().map(|(r, m)| (r as u64, m)));
    for (i, m) in listed {
        if let Some(e) = m.listed_max().filter(|&e| e >= n) {
            return Err(GmunuError::MaskTooLarge { component: i, element: e, size: n });
        }
    }
    Ok(())
}

/// Whether `s` induces a copy of `G_{μν}`. Only the cardinalities of the
/// traces and of the support matter.
pub fn is_copy(s: &SymbolicSet, shape: GraphShape) -> Result<bool, GmunuError> {
    check_masks(s, shape.nu)?;
    Ok(match (shape.mu, shape.nu) {
        (Card::Omega, Card::Finite(n)) => {
            let selected = s.components_where(|m| !m.below(n).is_empty());
            let partial = s.components_where(|m| {
                let t = m.below(n);
                !t.is_empty() && t.finite_len() != Some(n)
            });
            selected.is_infinite() && partial.is_empty()
        }
        (Card::Finite(m), Card::Omega) => (0..m).all(|i| s.mask(i).is_infinite()),
        (Card::Omega, Card::Omega) => {
            let infinite = s.components_where(PeriodicSet::is_infinite);
            let finite_nonempty = s.components_where(|m| !m.is_empty() && !m.is_infinite());
            infinite.is_infinite() && finite_nonempty.is_empty()
        }
        (Card::Finite(_), Card::Finite(_)) => return Err(GmunuError::BadShape(shape.to_string())),
    })
}

/// `(C⁻, C⁺)` with `C⁺ = C⁻ ∪ {a}` for a copy `C⁻` of `G_{ωω}`.
pub fn jump_pair(c_minus: &SymbolicSet, a: Vertex) -> Result<(SymbolicSet, SymbolicSet), GmunuError> {
    if !is_copy(c_minus, GraphShape::omega_omega())? {
        return Err(GmunuError::NotACopy);
    }
    if c_minus.contains(a) {
        return Err(GmunuError::AlreadyMember(a.0, a.1));
    }
    if !supp(c_minus).contains(a.0) {
        return Err(GmunuError::NotInSupport(a.0));
    }
    Ok((c_minus.clone(), c_minus.insert(a)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JumpCase {
    /// `B` grows `A` inside a component `A` already meets.
    InsideSupport,
    /// `B` meets a component `A` misses.
    NewComponent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpWitness {
    /// Position of `A` in the chain; `B` is the next element.
    pub index: usize,
    pub case: JumpCase,
    pub component: u64,
    pub element: u64,
    pub c_minus: SymbolicSet,
    pub c_plus: SymbolicSet,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseJumpsReport {
    pub witnesses: Vec<JumpWitness>,
    pub all_verified: bool,
}

/// A jump `A ⊆ C⁻ ⊊ C⁺ ⊆ B` between two copies `A ⊊ B` of `G_{ωω}`.
pub fn jump_between(a: &SymbolicSet, b: &SymbolicSet) -> Result<(JumpCase, Vertex, SymbolicSet, SymbolicSet), GmunuError> {
    let differ = a.components_where2(b, |x, y| x != y);
    let inside = differ.intersection(&supp(a));
    if let Some(i0) = inside.first() {
        let e = b.mask(i0).difference(a.mask(i0)).first().ok_or(GmunuError::NotIncreasing(0, 1))?;
        return Ok((JumpCase::InsideSupport, (i0, e), a.clone(), a.insert((i0, e))));
    }
    let i = differ.first().ok_or(GmunuError::NotIncreasing(0, 1))?;
    let trace = b.mask(i);
    let e = trace.first().ok_or(GmunuError::NotIncreasing(0, 1))?;
    let c_plus = a.with_component(i, a.mask(i).union(trace));
    let c_minus = c_plus.remove((i, e));
    Ok((JumpCase::NewComponent, (i, e), c_minus, c_plus))
}

/// For each adjacent pair of a strictly increasing chain of copies of
/// `G_{ωω}`, a verified jump pair inside it.
pub fn dense_jumps_check(chain: &[SymbolicSet]) -> Result<DenseJumpsReport, GmunuError> {
    let shape = GraphShape::omega_omega();
    for (i, s) in chain.iter().enumerate() {
        if !is_copy(s, shape)? {
            return Err(GmunuError::ChainNotCopy(i));
        }
    }
    let mut witnesses = Vec::new();
    for (index, pair) in chain.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        if !a.is_proper_subset(b) {
            return Err(GmunuError::NotIncreasing(index, index + 1));
        }
        let (case, (component, element), c_minus, c_plus) =
            jump_between(a, b).map_err(|_| GmunuError::NotIncreasing(index, index + 1))?;
        let verified = is_copy(&c_minus, shape)?
            && is_copy(&c_plus, shape)?
            && c_minus.delta_size(&c_plus) == Some(1)
            && c_plus == c_minus.insert((component, element))
            && a.is_subset(&c_minus)
            && c_plus.is_subset(b);
        witnesses.push(JumpWitness { index, case, component, element, c_minus, c_plus, verified });
    }
    let all_verified = witnesses.iter().all(|w| w.verified);
    Ok(DenseJumpsReport { witnesses, all_verified })
}

/// A seeded strictly increasing chain of `len` copies of `G_{ωω}`. Each
/// step either adds finitely many points to a component already met or
/// fills an untouched component with an infinite periodic trace.
pub fn random_copy_chain(len: usize, seed: u64) -> Vec<SymbolicSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let period = rng.random_range(1..=3);
    let default: Vec<PeriodicSet> = (0..rng.random_range(1..=2))
        .map(|_| {
            let p = rng.random_range(2..=4);
            PeriodicSet::periodic(p, [rng.random_range(0..p)])
        })
        .collect();
    let mut cur = SymbolicSet::new(BTreeMap::new(), default);
    for i in 0..8 {
        if rng.random_bool(0.5) {
            cur = cur.with_component(i * period, PeriodicSet::empty());
        }
    }
    let mut out = vec![cur.clone()];
    while out.len() < len {
        let untouched: Vec<u64> = (0..8).map(|i| i * period).filter(|&i| cur.mask(i).is_empty()).collect();
        let next = if !untouched.is_empty() && rng.random_bool(0.3) {
            let i = untouched[rng.random_range(0..untouched.len())];
            let p = rng.random_range(1..=4);
            cur.with_component(i, PeriodicSet::periodic(p, [rng.random_range(0..p)]))
        } else {
            let met: Vec<u64> = (0..8).filter(|&i| !cur.mask(i).is_empty()).collect();
            let i = met[rng.random_range(0..met.len())];
            let mut s = cur.clone();
            for _ in 0..rng.random_range(1..=3) {
                let missing: Vec<u64> = s.mask(i).complement().below(64).iter().collect();
                if !missing.is_empty() {
                    s = s.insert((i, missing[rng.random_range(0..missing.len())]));
                }
            }
            s
        };
        if next != cur {
            out.push(next.clone());
            cur = next;
        }
    }
    out
}

/// The families checked against the positive-family axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Copies of `G_{ωn}`, seen as infinite sets of component indices.
    CopiesOmegaN(u64),
    /// Copies of `G_{mω}`.
    CopiesMOmega(u64),
    /// Sets meeting every component of `G_{ωω}` in an infinite set.
    OmegaOmega,
    /// `ℚ` minus finitely many points per unit interval.
    Pqr,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::CopiesOmegaN(n) => write!(f, "copies-omega-{n}"),
            Family::CopiesMOmega(m) => write!(f, "copies-{m}-omega"),
            Family::OmegaOmega => f.write_str("gmunu-omega-omega"),
            Family::Pqr => f.write_str("pqr"),
        }
    }
}

impl FromStr for Family {
    type Err = GmunuError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || GmunuError::UnknownFamily(s.to_string());
        match s {
            "gmunu-omega-omega" => return Ok(Family::OmegaOmega),
            "pqr" => return Ok(Family::Pqr),
            _ => {}
        }
        if let Some(n) = s.strip_prefix("copies-omega-") {
            return n.parse().ok().filter(|&n| n >= 1).map(Family::CopiesOmegaN).ok_or_else(unknown);
        }
        if let Some(m) = s.strip_prefix("copies-").and_then(|r| r.strip_suffix("-omega")) {
            return m.parse().ok().filter(|&m| m >= 1).map(Family::CopiesMOmega).ok_or_else(unknown);
        }
        Err(unknown())
    }
}

/// Whether `s` (elements of `G_{ωω}`) has an infinite trace on every
/// component.
pub fn in_omega_omega_family(s: &SymbolicSet) -> bool {
    s.components_where(|m| !m.is_infinite()).is_empty()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomResult {
    pub trials: usize,
    pub passed: usize,
    pub failures: Vec<String>,
}

impl AxiomResult {
    fn new() -> Self {
        AxiomResult { trials: 0, passed: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.trials += 1;
        if ok {
            self.passed += 1;
        } else if self.failures.len() < 10 {
            self.failures.push(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.trials > 0 && self.passed == self.trials
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub family: String,
    pub seed: u64,
    pub empty_excluded: AxiomResult,
    pub upward_closed: AxiomResult,
    pub finite_deletion: AxiomResult,
    pub coinfinite_member: AxiomResult,
    pub coinfinite_witness: String,
}

impl FamilyReport {
    pub fn all_passed(&self) -> bool {
        self.empty_excluded.ok() && self.upward_closed.ok() && self.finite_deletion.ok() && self.coinfinite_member.ok()
    }
}

fn random_finite(rng: &mut ChaCha8Rng, bound: u64) -> PeriodicSet {
    let k = rng.random_range(0..4);
    PeriodicSet::finite((0..k).map(|_| rng.random_range(0..bound)))
}

fn random_infinite(rng: &mut ChaCha8Rng) -> PeriodicSet {
    let base = match rng.random_range(0..4) {
        0 => PeriodicSet::full(),
        1 => PeriodicSet::periodic(2, [rng.random_range(0..2)]),
        2 => PeriodicSet::periodic(3, [0, rng.random_range(1..3)]),
        _ => PeriodicSet::periodic(5, [rng.random_range(0..5)]),
    };
    base.difference(&random_finite(rng, 12)).union(&random_finite(rng, 12))
}

fn random_mask(rng: &mut ChaCha8Rng) -> PeriodicSet {
    if rng.random_bool(0.5) {
        random_infinite(rng)
    } else {
        random_finite(rng, 12)
    }
}

fn random_symbolic(rng: &mut ChaCha8Rng, mask: impl Fn(&mut ChaCha8Rng) -> PeriodicSet) -> SymbolicSet {
    let cycle = rng.random_range(1..=3);
    let default = (0..cycle).map(|_| mask(rng)).collect();
    let entries = rng.random_range(0..4);
    let explicit = (0..entries).map(|_| (rng.random_range(0..10), mask(rng))).collect();
    SymbolicSet::new(explicit, default)
}

fn random_vertices(rng: &mut ChaCha8Rng, components: u64) -> Vec<Vertex> {
    let k = rng.random_range(1..6);
    (0..k).map(|_| (rng.random_range(0..components), rng.random_range(0..20))).collect()
}

fn random_pqr(rng: &mut ChaCha8Rng) -> PqrSpec {
    let mut spec = PqrSpec::full();
    if rng.random_bool(0.3) {
        spec = spec.with_periodic(Rat::frac(rng.random_range(0..4), 4));
    }
    for _ in 0..rng.random_range(0..6) {
        spec = spec.remove(Rat::frac(rng.random_range(-40..40), rng.random_range(1..7)));
    }
    spec
}

/// Checks the positive-family axioms on `samples` seeded random members:
/// `∅` is not a member, supersets and finite deletions of members are
/// members, and some member has an infinite complement.
pub fn positive_family_check(family: Family, samples: usize, seed: u64) -> Result<FamilyReport, GmunuError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FamilyReport {
        family: family.to_string(),
        seed,
        empty_excluded: AxiomResult::new(),
        upward_closed: AxiomResult::new(),
        finite_deletion: AxiomResult::new(),
        coinfinite_member: AxiomResult::new(),
        coinfinite_witness: String::new(),
    };
    match family {
        Family::CopiesOmegaN(n) => {
            // members are infinite sets of whole components
            let shape = GraphShape { mu: Card::Omega, nu: Card::Finite(n) };
            let whole = |comps: &PeriodicSet| {
                let full = PeriodicSet::finite(0..n);
                lift_components(comps, &full)
            };
            let member = |s: &SymbolicSet| is_copy(s, shape);
            report.empty_excluded.record(!member(&SymbolicSet::empty())?, || "empty set accepted".into());
            for _ in 0..samples {
                let comps = random_infinite(&mut rng);
                let x = whole(&comps);
                report.empty_excluded.record(member(&x)? && !x.is_empty(), || format!("generated {x} rejected"));
                let y = whole(&comps.union(&random_mask(&mut rng)));
                report.upward_closed.record(member(&y)?, || format!("{y} rejected"));
                let z = whole(&comps.difference(&random_finite(&mut rng, 30)));
                report.finite_deletion.record(member(&z)?, || format!("{z} rejected"));
            }
            let witness = whole(&PeriodicSet::periodic(2, [0]));
            let missing = supp(&witness).complement();
            report.coinfinite_member.record(member(&witness)? && missing.is_infinite(), || format!("{witness} failed"));
            report.coinfinite_witness = witness.to_string();
        }
        Family::CopiesMOmega(m) => {
            let shape = GraphShape { mu: Card::Finite(m), nu: Card::Omega };
            let member = |s: &SymbolicSet| is_copy(s, shape);
            report.empty_excluded.record(!member(&SymbolicSet::empty())?, || "empty set accepted".into());
            for _ in 0..samples {
                let x = random_symbolic(&mut rng, random_infinite);
                report.empty_excluded.record(member(&x)?, || format!("generated {x} rejected"));
                let y = x.union(&random_symbolic(&mut rng, random_mask));
                report.upward_closed.record(member(&y)?, || format!("{y} rejected"));
                let z = random_vertices(&mut rng, m).into_iter().fold(x.clone(), |s, v| s.remove(v));
                report.finite_deletion.record(member(&z)?, || format!("{z} rejected"));
            }
            let witness = SymbolicSet::uniform(PeriodicSet::periodic(2, [0]));
            let complement_infinite = (0..m).all(|i| witness.mask(i).complement().is_infinite());
            report.coinfinite_member.record(member(&witness)? && complement_infinite, || format!("{witness} failed"));
            report.coinfinite_witness = witness.to_string();
        }
        Family::OmegaOmega => {
            let member = in_omega_omega_family;
            report.empty_excluded.record(!member(&SymbolicSet::empty()), || "empty set accepted".into());
            for _ in 0..samples {
                let x = random_symbolic(&mut rng, random_infinite);
                let copy = is_copy(&x, GraphShape::omega_omega())?;
                report.empty_excluded.record(member(&x) && copy, || format!("generated {x} rejected"));
                let y = x.union(&random_symbolic(&mut rng, random_mask));
                report.upward_closed.record(member(&y), || format!("{y} rejected"));
                let z = random_vertices(&mut rng, 12).into_iter().fold(x.clone(), |s, v| s.remove(v));
                report.finite_deletion.record(member(&z), || format!("{z} rejected"));
            }
            let witness = SymbolicSet::uniform(PeriodicSet::cofinite([0]));
            let complement = SymbolicSet::full().difference(&witness);
            let complement_infinite = supp(&complement).is_infinite();
            report.coinfinite_member.record(member(&witness) && complement_infinite, || format!("{witness} failed"));
            report.coinfinite_witness = witness.to_string();
        }
        Family::Pqr => {
            for _ in 0..samples {
                let x = random_pqr(&mut rng);
                let rep = pqr_membership(&x);
                report.empty_excluded.record(rep.member && x.contains(rep.nonempty_witness), || format!("{x:?}"));
                let mut y = x.clone();
                for q in x.finite_exclusions().collect::<Vec<_>>() {
                    if rng.random_bool(0.5) {
                        y = y.restore(q);
                    }
                }
                if let Some(&p) = x.periodic().iter().next() {
                    y = y.restore(p + Rat::int(rng.random_range(-5..5)));
                }
                report.upward_closed.record(x.is_subset(&y) && rep.upward_closed, || format!("{y:?}"));
                let z = (0..rng.random_range(1..5))
                    .fold(x.clone(), |s, _| s.remove(Rat::frac(rng.random_range(-30..30), rng.random_range(1..9))));
                report.finite_deletion.record(z.is_subset(&x) && rep.finite_deletion, || format!("{z:?}"));
            }
            let witness = PqrSpec::full().with_periodic(Rat::ZERO);
            report.coinfinite_member.record(witness.coinfinite() && pqr_membership(&witness).member, || "no witness".into());
            report.coinfinite_witness = "Q minus Z".into();
        }
    }
    Ok(report)
}

/// The set with mask `mask` on every component in `comps` and nothing
/// elsewhere.
pub fn lift_components(comps: &PeriodicSet, mask: &PeriodicSet) -> SymbolicSet {
    let l = comps.period;
    let default = (0..l).map(|r| if comps.pattern(r) { mask.clone() } else { PeriodicSet::empty() }).collect();
    let explicit = comps
        .added
        .iter()
        .map(|&i| (i, mask.clone()))
        .chain(comps.removed.iter().map(|&i| (i, PeriodicSet::empty())))
        .collect();
    SymbolicSet::new(explicit, default)
}
