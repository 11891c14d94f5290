//! Finite linear orders, cuts, and a small grammar of compact-realizable
//! order types together with their canonical finite truncations.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qline::Rat;

/// Depth used when two order-type expressions are compared by truncation.
pub const DEFAULT_COMPARE_DEPTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("a linear order needs at least two elements to have a cut")]
    NoCuts,
    #[error("duplicate label at position {0}")]
    DuplicateLabel(usize),
    #[error("index has {index} elements but {parts} parts were given")]
    LengthMismatch { index: usize, parts: usize },
    #[error("finite order type must have at least one element")]
    EmptyFinite,
    #[error("cannot parse order type: {0}")]
    Parse(String),
}

/// A finite linear order given by its elements listed bottom to top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLinearOrder<T> {
    elements: Vec<T>,
}

impl<T: Clone + Eq + Hash> FiniteLinearOrder<T> {
    pub fn new(elements: Vec<T>) -> Result<Self, OrderError> {
        let mut seen = HashSet::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if !seen.insert(e) {
                return Err(OrderError::DuplicateLabel(i));
            }
        }
        Ok(FiniteLinearOrder { elements })
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Every cut `⟨lower, upper⟩` of the order. Finite orders have no gaps and
    /// every cut is a jump.
    pub fn cuts(&self) -> Result<Vec<Cut<T>>, OrderError> {
        if self.elements.len() < 2 {
            return Err(OrderError::NoCuts);
        }
        Ok((1..self.elements.len())
            .map(|k| {
                let lower = self.elements[..k].to_vec();
                let upper = self.elements[k..].to_vec();
                // max of lower and min of upper both exist
                let is_gap = lower.last().is_none() && upper.is_empty();
                let is_jump = lower.last().is_some() && !upper.is_empty();
                Cut { lower, upper, is_gap, is_jump }
            })
            .collect())
    }
}

impl FiniteLinearOrder<usize> {
    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        FiniteLinearOrder { elements: (0..n).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut<T> {
    pub lower: Vec<T>,
    pub upper: Vec<T>,
    pub is_gap: bool,
    pub is_jump: bool,
}

/// Order types built from compact-realizable atoms by finite lexicographic
/// sums.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum OrderTypeExpr {
    /// `k` points, `k >= 1`.
    Finite(usize),
    /// `1 + ω*`: a minimum that is the limit of a descending sequence.
    OmegaStar,
    /// `ω + 1`: an ascending sequence with its limit on top.
    OmegaPlusOne,
    /// The Cantor set.
    Cantor,
    /// The closed unit interval.
    Interval,
    Sum(Vec<OrderTypeExpr>),
}

impl OrderTypeExpr {
    /// Normalised lexicographic sum: nested sums are flattened, adjacent
    /// finite parts merged, and a single part is returned as is.
    pub fn sum(parts: Vec<OrderTypeExpr>) -> OrderTypeExpr {
        let mut flat: Vec<OrderTypeExpr> = Vec::new();
        for p in parts {
            let pieces = match p {
                OrderTypeExpr::Sum(inner) => inner,
                other => vec![other],
            };
            for piece in pieces {
                match (flat.last_mut(), piece) {
                    (Some(OrderTypeExpr::Finite(a)), OrderTypeExpr::Finite(b)) => *a += b,
                    (_, piece) => flat.push(piece),
                }
            }
        }
        if flat.len() == 1 {
            flat.pop().expect("one part")
        } else {
            OrderTypeExpr::Sum(flat)
        }
    }

    pub fn parts(&self) -> &[OrderTypeExpr] {
        match self {
            OrderTypeExpr::Sum(ps) => ps,
            other => std::slice::from_ref(other),
        }
    }

    pub fn is_countable(&self) -> bool {
        match self {
            OrderTypeExpr::Finite(_) | OrderTypeExpr::OmegaStar | OrderTypeExpr::OmegaPlusOne => true,
            OrderTypeExpr::Cantor | OrderTypeExpr::Interval => false,
            OrderTypeExpr::Sum(ps) => ps.iter().all(OrderTypeExpr::is_countable),
        }
    }

    /// Whether the minimum is a limit of larger elements.
    pub fn min_nonisolated(&self) -> bool {
        match self {
            OrderTypeExpr::Finite(_) | OrderTypeExpr::OmegaPlusOne => false,
            OrderTypeExpr::OmegaStar | OrderTypeExpr::Cantor | OrderTypeExpr::Interval => true,
            OrderTypeExpr::Sum(ps) => ps.first().is_some_and(OrderTypeExpr::min_nonisolated),
        }
    }

    /// Complete with dense jumps. Every expression of the grammar denotes a
    /// complete order with endpoints; a dense piece (an interval) is the only
    /// way to lose dense jumps, and a finite sum has dense jumps iff every
    /// summand does.
    pub fn is_boolean(&self) -> bool {
        match self {
            OrderTypeExpr::Finite(_)
            | OrderTypeExpr::OmegaStar
            | OrderTypeExpr::OmegaPlusOne
            | OrderTypeExpr::Cantor => true,
            OrderTypeExpr::Interval => false,
            OrderTypeExpr::Sum(ps) => ps.iter().all(OrderTypeExpr::is_boolean),
        }
    }

    /// Canonical depth-`depth` sample as a finite set of rationals, with each
    /// adjacent pair marked as linked when the closed interval between the
    /// two points is countable in the denoted order. Part `i` of a sum is
    /// placed in `[2i, 2i + 1]`.
    pub fn truncate(&self, depth: usize) -> Truncation {
        let depth = depth.max(1);
        let mut out = Truncation::default();
        for (i, part) in self.parts().iter().enumerate() {
            let t = atom_truncation(part, depth);
            let shift = Rat::int(2 * i as i64);
            if !out.points.is_empty() {
                // [max of one summand, min of the next] holds exactly two points
                out.linked.push(true);
            }
            out.points.extend(t.points.iter().map(|&p| p + shift));
            out.linked.extend(t.linked);
            out.atoms.push(AtomSpan {
                start: out.points.len() - t.points.len(),
                len: t.points.len(),
                atom: part.clone(),
            });
        }
        out
    }

    /// Condensation classes of the depth-`depth` truncation.
    pub fn condensation(&self, depth: usize) -> Condensation {
        self.truncate(depth).condensation()
    }

    /// Order-isomorphic truncations at every depth `1..=depth`.
    pub fn truncation_equivalent(&self, other: &OrderTypeExpr, depth: usize) -> bool {
        (1..=depth).all(|d| self.truncate(d).same_shape(&other.truncate(d)))
    }
}

fn atom_truncation(atom: &OrderTypeExpr, depth: usize) -> Truncation {
    let (points, linked): (Vec<Rat>, Vec<bool>) = match atom {
        OrderTypeExpr::Finite(k) => {
            let k = *k as i64;
            let pts = if k == 1 {
                vec![Rat::ZERO]
            } else {
                (0..k).map(|j| Rat::frac(j, k - 1)).collect()
            };
            let n = pts.len();
            (pts, vec![true; n.saturating_sub(1)])
        }
        OrderTypeExpr::OmegaStar => {
            let mut pts = vec![Rat::ZERO];
            pts.extend((1..=depth as i64).rev().map(|j| Rat::frac(1, j)));
            let n = pts.len();
            (pts, vec![true; n - 1])
        }
        OrderTypeExpr::OmegaPlusOne => {
            let mut pts: Vec<Rat> = (1..=depth as i64).map(|j| Rat::ONE - Rat::frac(1, j)).collect();
            pts.push(Rat::ONE);
            let n = pts.len();
            (pts, vec![true; n - 1])
        }
        OrderTypeExpr::Cantor => {
            let pts = cantor_endpoints(Rat::ZERO, Rat::ONE, depth);
            // endpoints come in (left, right) pairs per surviving interval;
            // a right end followed by the next left end bounds a removed gap
            let linked = (0..pts.len() - 1).map(|i| i % 2 == 1).collect();
            (pts, linked)
        }
        OrderTypeExpr::Interval => {
            let d = depth as i64;
            let pts: Vec<Rat> = (0..=d).map(|j| Rat::frac(j, d)).collect();
            let n = pts.len();
            (pts, vec![false; n - 1])
        }
        OrderTypeExpr::Sum(_) => {
            let t = atom.truncate(depth);
            (t.points, t.linked)
        }
    };
    Truncation { atoms: Vec::new(), points, linked }
}

/// Endpoints of the `2^depth` intervals left after `depth` middle-third
/// removals from `[a, b]`, ascending.
pub fn cantor_endpoints(a: Rat, b: Rat, depth: usize) -> Vec<Rat> {
    let mut intervals = vec![(a, b)];
    for _ in 0..depth {
        intervals = intervals
            .into_iter()
            .flat_map(|(l, r)| {
                let third = (r - l) / Rat::int(3);
                [(l, l + third), (r - third, r)]
            })
            .collect();
    }
    intervals.into_iter().flat_map(|(l, r)| [l, r]).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomSpan {
    pub start: usize,
    pub len: usize,
    pub atom: OrderTypeExpr,
}

/// A finite sample of an order type, ascending, with condensation links
/// between adjacent points.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Truncation {
    pub points: Vec<Rat>,
    /// `linked[i]` iff `points[i]` and `points[i + 1]` are condensation-equivalent.
    pub linked: Vec<bool>,
    /// Which summand produced which points; empty for bare atoms.
    pub atoms: Vec<AtomSpan>,
}

impl Truncation {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same size and same link pattern.
    pub fn same_shape(&self, other: &Truncation) -> bool {
        self.points.len() == other.points.len() && self.linked == other.linked
    }

    pub fn condensation(&self) -> Condensation {
        let mut classes = Vec::new();
        let mut start = 0;
        for i in 0..self.points.len() {
            let closes = i + 1 == self.points.len() || !self.linked[i];
            if closes {
                let len = i + 1 - start;
                classes.push(CondensationClass {
                    start,
                    len,
                    order_type: self.class_type(start, len),
                });
                start = i + 1;
            }
        }
        let index_dense = self
            .atoms
            .iter()
            .any(|a| matches!(a.atom, OrderTypeExpr::Cantor | OrderTypeExpr::Interval));
        Condensation { classes, index_dense }
    }

    fn class_type(&self, start: usize, len: usize) -> OrderTypeExpr {
        if self.atoms.is_empty() {
            return OrderTypeExpr::Finite(len);
        }
        let end = start + len;
        let parts = self
            .atoms
            .iter()
            .filter_map(|span| {
                let lo = span.start.max(start);
                let hi = (span.start + span.len).min(end);
                if lo >= hi {
                    return None;
                }
                let whole = lo == span.start && hi == span.start + span.len;
                Some(if whole && span.atom.is_countable() {
                    span.atom.clone()
                } else {
                    OrderTypeExpr::Finite(hi - lo)
                })
            })
            .collect();
        OrderTypeExpr::sum(parts)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CondensationClass {
    /// Index of the first truncation point in the class.
    pub start: usize,
    /// Number of truncation points in the class.
    pub len: usize,
    pub order_type: OrderTypeExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condensation {
    pub classes: Vec<CondensationClass>,
    /// True when the index order is dense (some uncountable summand).
    pub index_dense: bool,
}

/// Lexicographic sum of `parts` indexed by `index`.
pub fn lex_sum<T: Clone + Eq + Hash>(
    index: &FiniteLinearOrder<T>,
    parts: Vec<OrderTypeExpr>,
) -> Result<OrderTypeExpr, OrderError> {
    if index.len() != parts.len() {
        return Err(OrderError::LengthMismatch { index: index.len(), parts: parts.len() });
    }
    Ok(OrderTypeExpr::sum(parts))
}

impl From<OrderTypeExpr> for String {
    fn from(t: OrderTypeExpr) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for OrderTypeExpr {
    type Error = OrderError;
    fn try_from(s: String) -> Result<Self, OrderError> {
        s.parse()
    }
}

impl fmt::Display for OrderTypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderTypeExpr::Finite(k) => write!(f, "fin({k})"),
            OrderTypeExpr::OmegaStar => f.write_str("omega_star"),
            OrderTypeExpr::OmegaPlusOne => f.write_str("omega_plus_one"),
            OrderTypeExpr::Cantor => f.write_str("cantor"),
            OrderTypeExpr::Interval => f.write_str("interval"),
            OrderTypeExpr::Sum(ps) => {
                f.write_str("sum(")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for OrderTypeExpr {
    type Err = OrderError;

    fn from_str(s: &str) -> Result<Self, OrderError> {
        let call = crate::syntax::parse_call(s).map_err(OrderError::Parse)?;
        call_to_order(&call)
    }
}

fn call_to_order(call: &crate::syntax::Call) -> Result<OrderTypeExpr, OrderError> {
    let err = || OrderError::Parse(call.to_string());
    match (call.name.as_str(), call.args.len()) {
        ("fin", 1) => {
            let k: usize = call.args[0].as_atom().and_then(|a| a.parse().ok()).ok_or_else(err)?;
            if k == 0 {
                return Err(OrderError::EmptyFinite);
            }
            Ok(OrderTypeExpr::Finite(k))
        }
        ("omega_star", 0) => Ok(OrderTypeExpr::OmegaStar),
        ("omega_plus_one", 0) => Ok(OrderTypeExpr::OmegaPlusOne),
        ("cantor", 0) => Ok(OrderTypeExpr::Cantor),
        ("interval", 0) => Ok(OrderTypeExpr::Interval),
        ("sum", n) if n > 0 => {
            let parts = call.args.iter().map(call_to_order).collect::<Result<Vec<_>, _>>()?;
            Ok(OrderTypeExpr::sum(parts))
        }
        _ => Err(err()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cuts_of_small_chains() {
        let three = FiniteLinearOrder::chain(3).cuts().unwrap();
        assert_eq!(three.len(), 2);
        assert!(three.iter().all(|c| c.is_jump && !c.is_gap));
        assert_eq!(FiniteLinearOrder::chain(2).cuts().unwrap().len(), 1);
        assert_eq!(FiniteLinearOrder::chain(10).cuts().unwrap().len(), 9);
        assert_eq!(FiniteLinearOrder::chain(1).cuts(), Err(OrderError::NoCuts));
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert_eq!(FiniteLinearOrder::new(vec!['a', 'b', 'a']), Err(OrderError::DuplicateLabel(2)));
    }

    #[test]
    fn finite_sums_collapse() {
        let two = FiniteLinearOrder::chain(2);
        let three = FiniteLinearOrder::chain(3);
        use OrderTypeExpr::*;
        assert_eq!(lex_sum(&two, vec![Finite(1), Finite(1)]).unwrap(), Finite(2));
        assert_eq!(lex_sum(&three, vec![Finite(2), Finite(1), Finite(3)]).unwrap(), Finite(6));
        assert_eq!(
            lex_sum(&two, vec![Finite(1)]),
            Err(OrderError::LengthMismatch { index: 2, parts: 1 })
        );
    }

    #[test]
    fn omega_star_plus_point_truncation() {
        let t = lex_sum(&FiniteLinearOrder::chain(2), vec![OrderTypeExpr::OmegaStar, OrderTypeExpr::Finite(1)])
            .unwrap()
            .truncate(4);
        let expect: Vec<Rat> = ["0", "1/4", "1/3", "1/2", "1", "2"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(t.points, expect);
    }

    #[test]
    fn boolean_atoms() {
        assert!(OrderTypeExpr::Finite(5).is_boolean());
        assert!(OrderTypeExpr::OmegaStar.is_boolean());
        assert!(OrderTypeExpr::Cantor.is_boolean());
        assert!(!OrderTypeExpr::Interval.is_boolean());
        assert!(!OrderTypeExpr::sum(vec![OrderTypeExpr::Cantor, OrderTypeExpr::Interval]).is_boolean());
    }

    #[test]
    fn condensation_examples() {
        let c = OrderTypeExpr::Finite(7).condensation(8);
        assert_eq!(c.classes.len(), 1);
        assert_eq!(c.classes[0].len, 7);
        let c = OrderTypeExpr::OmegaStar.condensation(8);
        assert_eq!(c.classes.len(), 1);
        assert_eq!(c.classes[0].order_type, OrderTypeExpr::OmegaStar);
        assert!(!c.index_dense);
        let c = OrderTypeExpr::Cantor.condensation(3);
        assert!(c.index_dense);
        assert!(c.classes.iter().all(|k| k.len <= 2));
        assert_eq!(c.classes.iter().filter(|k| k.len == 2).count(), 7);
    }

    #[test]
    fn interval_followed_by_point_merges_top() {
        let t = OrderTypeExpr::sum(vec![OrderTypeExpr::Interval, OrderTypeExpr::Finite(1)]);
        let c = t.condensation(3);
        let last = c.classes.last().unwrap();
        assert_eq!(last.len, 2);
        assert_eq!(last.order_type, OrderTypeExpr::Finite(2));
    }

    #[test]
    fn text_syntax() {
        let t: OrderTypeExpr = "sum(fin(2), omega_star, cantor)".parse().unwrap();
        assert_eq!(t.to_string(), "sum(fin(2), omega_star, cantor)");
        assert_eq!("sum(fin(2), fin(3))".parse::<OrderTypeExpr>().unwrap(), OrderTypeExpr::Finite(5));
        assert!("fin(0)".parse::<OrderTypeExpr>().is_err());
        assert!("sum()".parse::<OrderTypeExpr>().is_err());
        assert!("bogus".parse::<OrderTypeExpr>().is_err());
    }
}
