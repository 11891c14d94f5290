//! Symbolic compact subsets of the real line built from points, closed
//! intervals, convergent geometric sequences and Cantor pieces.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordercore::{cantor_endpoints, OrderTypeExpr, Truncation};
use crate::qline::Rat;
use crate::syntax::{parse_call, Call};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompactError {
    #[error("descriptor has no atoms")]
    Empty,
    #[error("atom {0} needs a < b")]
    Degenerate(String),
    #[error("geometric ratio must lie strictly between 0 and 1, got {0}")]
    BadRatio(Rat),
    #[error("atoms {0} and {1} overlap")]
    Overlap(String, String),
    #[error("cannot parse descriptor: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    Point(Rat),
    Interval(Rat, Rat),
    /// `{limit} ∪ {limit + (first - limit) * ratio^k : k >= 0}`
    GeomSeq { limit: Rat, first: Rat, ratio: Rat },
    /// The middle-thirds Cantor set scaled onto `[a, b]`.
    CantorPiece(Rat, Rat),
}

impl Atom {
    fn validate(&self) -> Result<(), CompactError> {
        match *self {
            Atom::Point(_) => Ok(()),
            Atom::Interval(a, b) | Atom::CantorPiece(a, b) if a >= b => Err(CompactError::Degenerate(self.to_string())),
            Atom::Interval(..) | Atom::CantorPiece(..) => Ok(()),
            Atom::GeomSeq { limit, first, ratio } => {
                if ratio <= Rat::ZERO || ratio >= Rat::ONE {
                    Err(CompactError::BadRatio(ratio))
                } else if first == limit {
                    Err(CompactError::Degenerate(self.to_string()))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Smallest and largest element.
    pub fn hull(&self) -> (Rat, Rat) {
        match *self {
            Atom::Point(p) => (p, p),
            Atom::Interval(a, b) | Atom::CantorPiece(a, b) => (a, b),
            Atom::GeomSeq { limit, first, .. } => (limit.min(first), limit.max(first)),
        }
    }

    pub fn contains(&self, x: Rat) -> bool {
        let (lo, hi) = self.hull();
        if x < lo || x > hi {
            return false;
        }
        match *self {
            Atom::Point(p) => x == p,
            Atom::Interval(..) => true,
            Atom::CantorPiece(a, b) => cantor_contains((x - a) / (b - a)),
            Atom::GeomSeq { limit, first, ratio } => {
                if x == limit {
                    return true;
                }
                let target = (x - limit).abs();
                let mut term = first - limit;
                while term.abs() > target {
                    term = term * ratio;
                }
                term == x - limit
            }
        }
    }

    /// Whether the atom accumulates at `x`.
    fn accumulates_at(&self, x: Rat) -> bool {
        match *self {
            Atom::Point(_) => false,
            Atom::Interval(a, b) => a <= x && x <= b,
            Atom::CantorPiece(..) => self.contains(x),
            Atom::GeomSeq { limit, .. } => x == limit,
        }
    }

    fn order_type(&self) -> OrderTypeExpr {
        match *self {
            Atom::Point(_) => OrderTypeExpr::Finite(1),
            Atom::Interval(..) => OrderTypeExpr::Interval,
            Atom::CantorPiece(..) => OrderTypeExpr::Cantor,
            Atom::GeomSeq { limit, first, .. } if first > limit => OrderTypeExpr::OmegaStar,
            Atom::GeomSeq { .. } => OrderTypeExpr::OmegaPlusOne,
        }
    }

    /// Canonical depth-`k` sample, ascending.
    fn sample(&self, depth: usize) -> Vec<Rat> {
        let mut pts = match *self {
            Atom::Point(p) => vec![p],
            Atom::Interval(a, b) => {
                let k = depth.max(1) as i64;
                (0..=k).map(|j| a + (b - a) * Rat::frac(j, k)).collect()
            }
            Atom::CantorPiece(a, b) => cantor_endpoints(a, b, depth),
            Atom::GeomSeq { limit, first, ratio } => {
                let mut v = vec![limit];
                let mut term = first - limit;
                for _ in 0..depth.max(1) {
                    v.push(limit + term);
                    term = term * ratio;
                }
                v
            }
        };
        pts.sort();
        pts
    }
}

/// Membership of a rational `x` in the standard Cantor set on `[0, 1]`:
/// follow the ternary digits, accepting once a digit sequence repeats.
pub fn cantor_contains(x: Rat) -> bool {
    if x < Rat::ZERO || x > Rat::ONE {
        return false;
    }
    let third = Rat::frac(1, 3);
    let two_thirds = Rat::frac(2, 3);
    let mut seen = BTreeSet::new();
    let mut x = x;
    loop {
        if x == third || x == two_thirds || x.is_zero() || x == Rat::ONE {
            return true;
        }
        if x > third && x < two_thirds {
            return false;
        }
        if !seen.insert(x) {
            return true;
        }
        x = if x < third { x * Rat::int(3) } else { x * Rat::int(3) - Rat::int(2) };
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Point(p) => write!(f, "point({p})"),
            Atom::Interval(a, b) => write!(f, "interval({a}, {b})"),
            Atom::GeomSeq { limit, first, ratio } => write!(f, "geoseq({limit}, {first}, {ratio})"),
            Atom::CantorPiece(a, b) => write!(f, "cantor({a}, {b})"),
        }
    }
}

/// A finite union of atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CompactDescriptor {
    atoms: Vec<Atom>,
}

/// Classification against the two compact-set clauses: `I_c` asks for the
/// minimum to be non-isolated, `II_c` additionally asks for nowhere density.
/// A set in `II_c` is also in `I_c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassLabel {
    #[serde(rename = "I_c")]
    Ic,
    #[serde(rename = "II_c")]
    IIc,
    #[serde(rename = "neither")]
    Neither,
}

impl ClassLabel {
    pub fn in_class_i(self) -> bool {
        matches!(self, ClassLabel::Ic | ClassLabel::IIc)
    }

    pub fn in_class_ii(self) -> bool {
        self == ClassLabel::IIc
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassLabel::Ic => "I_c",
            ClassLabel::IIc => "II_c",
            ClassLabel::Neither => "neither",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifyReport {
    pub min_nonisolated: bool,
    pub nowhere_dense: bool,
    pub class: ClassLabel,
    pub order_type: OrderTypeExpr,
}

impl CompactDescriptor {
    pub fn new(atoms: Vec<Atom>) -> Result<Self, CompactError> {
        for a in &atoms {
            a.validate()?;
        }
        Ok(CompactDescriptor { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn with_atom(&self, atom: Atom) -> Result<Self, CompactError> {
        let mut atoms = self.atoms.clone();
        atoms.push(atom);
        CompactDescriptor::new(atoms)
    }

    /// A descriptor realising `t`: summand `i` is placed in `[2i, 2i + 1]`.
    pub fn canonical_for(t: &OrderTypeExpr) -> CompactDescriptor {
        let mut atoms = Vec::new();
        for (i, part) in t.parts().iter().enumerate() {
            let lo = Rat::int(2 * i as i64);
            let hi = lo + Rat::ONE;
            match part {
                OrderTypeExpr::Finite(1) => atoms.push(Atom::Point(lo)),
                OrderTypeExpr::Finite(k) => {
                    let k = *k as i64;
                    atoms.extend((0..k).map(|j| Atom::Point(lo + Rat::frac(j, k - 1))));
                }
                OrderTypeExpr::OmegaStar => atoms.push(Atom::GeomSeq { limit: lo, first: hi, ratio: Rat::frac(1, 2) }),
                OrderTypeExpr::OmegaPlusOne => {
                    atoms.push(Atom::GeomSeq { limit: hi, first: lo, ratio: Rat::frac(1, 2) })
                }
                OrderTypeExpr::Cantor => atoms.push(Atom::CantorPiece(lo, hi)),
                OrderTypeExpr::Interval => atoms.push(Atom::Interval(lo, hi)),
                OrderTypeExpr::Sum(_) => unreachable!("parts of a normalised sum are atoms"),
            }
        }
        CompactDescriptor { atoms }
    }

    fn min(&self) -> Result<Rat, CompactError> {
        self.atoms.iter().map(|a| a.hull().0).min().ok_or(CompactError::Empty)
    }

    /// Whether the minimum of the set is a limit point of the set.
    pub fn min_nonisolated(&self) -> Result<bool, CompactError> {
        let m = self.min()?;
        Ok(self.atoms.iter().any(|a| a.accumulates_at(m)))
    }

    /// No nondegenerate interval is contained in the set. Points, sequences
    /// and Cantor pieces are nowhere dense and so are finite unions of them.
    pub fn nowhere_dense(&self) -> bool {
        !self.atoms.iter().any(|a| matches!(a, Atom::Interval(..)))
    }

    pub fn contains(&self, x: Rat) -> bool {
        self.atoms.iter().any(|a| a.contains(x))
    }

    /// The atoms rewritten with pairwise disjoint hulls, ascending. Points
    /// already covered by another atom are dropped and overlapping intervals
    /// merged; any other overlap is rejected.
    pub fn normalize(&self) -> Result<Vec<Atom>, CompactError> {
        if self.atoms.is_empty() {
            return Err(CompactError::Empty);
        }
        let mut intervals: Vec<(Rat, Rat)> = self
            .atoms
            .iter()
            .filter_map(|a| match *a {
                Atom::Interval(l, r) => Some((l, r)),
                _ => None,
            })
            .collect();
        intervals.sort();
        let mut merged: Vec<(Rat, Rat)> = Vec::new();
        for (l, r) in intervals {
            match merged.last_mut() {
                Some(last) if l <= last.1 => last.1 = last.1.max(r),
                _ => merged.push((l, r)),
            }
        }
        let mut bodies: Vec<Atom> = merged.into_iter().map(|(l, r)| Atom::Interval(l, r)).collect();
        bodies.extend(
            self.atoms
                .iter()
                .filter(|a| matches!(a, Atom::GeomSeq { .. } | Atom::CantorPiece(..)))
                .copied(),
        );
        bodies.sort_by_key(|a| a.hull());
        for pair in bodies.windows(2) {
            if pair[0].hull().1 >= pair[1].hull().0 {
                return Err(CompactError::Overlap(pair[0].to_string(), pair[1].to_string()));
            }
        }
        let mut points: BTreeSet<Rat> = BTreeSet::new();
        for a in &self.atoms {
            let Atom::Point(p) = *a else { continue };
            match bodies.iter().find(|b| {
                let (lo, hi) = b.hull();
                lo <= p && p <= hi
            }) {
                None => {
                    points.insert(p);
                }
                Some(b) if b.contains(p) => {}
                Some(b) => return Err(CompactError::Overlap(a.to_string(), b.to_string())),
            }
        }
        let mut out = bodies;
        out.extend(points.into_iter().map(Atom::Point));
        out.sort_by_key(|a| a.hull());
        Ok(out)
    }

    /// The order type of the denoted set.
    pub fn order_type(&self) -> Result<OrderTypeExpr, CompactError> {
        let parts = self.normalize()?.iter().map(Atom::order_type).collect();
        Ok(OrderTypeExpr::sum(parts))
    }

    /// Canonical depth-`k` sample. Adjacent points are linked when the set
    /// has only countably many points between them, decided from the
    /// geometry of the atoms.
    pub fn sample(&self, depth: usize) -> Result<Truncation, CompactError> {
        let pieces = self.normalize()?;
        let mut points = Vec::new();
        let mut linked = Vec::new();
        for piece in &pieces {
            let pts = piece.sample(depth);
            if !points.is_empty() {
                // nothing of the set lies strictly between disjoint hulls
                linked.push(true);
            }
            for pair in pts.windows(2) {
                linked.push(match *piece {
                    Atom::Point(_) | Atom::GeomSeq { .. } => true,
                    Atom::Interval(..) => false,
                    Atom::CantorPiece(..) => {
                        let probe = pair[0] + (pair[1] - pair[0]) / Rat::int(3);
                        !piece.contains(probe)
                    }
                });
            }
            points.extend(pts);
        }
        Ok(Truncation { points, linked, atoms: Vec::new() })
    }

    pub fn classify(&self) -> Result<ClassifyReport, CompactError> {
        let min_nonisolated = self.min_nonisolated()?;
        let nowhere_dense = self.nowhere_dense();
        let class = match (min_nonisolated, nowhere_dense) {
            (false, _) => ClassLabel::Neither,
            (true, false) => ClassLabel::Ic,
            (true, true) => ClassLabel::IIc,
        };
        Ok(ClassifyReport { min_nonisolated, nowhere_dense, class, order_type: self.order_type()? })
    }
}

impl fmt::Display for CompactDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.len() == 1 {
            return write!(f, "{}", self.atoms[0]);
        }
        f.write_str("union(")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl From<CompactDescriptor> for String {
    fn from(d: CompactDescriptor) -> String {
        d.to_string()
    }
}

impl TryFrom<String> for CompactDescriptor {
    type Error = CompactError;
    fn try_from(s: String) -> Result<Self, CompactError> {
        s.parse()
    }
}

impl FromStr for CompactDescriptor {
    type Err = CompactError;

    fn from_str(s: &str) -> Result<Self, CompactError> {
        let call = parse_call(s).map_err(CompactError::Parse)?;
        let mut atoms = Vec::new();
        collect_atoms(&call, &mut atoms)?;
        CompactDescriptor::new(atoms)
    }
}

fn collect_atoms(call: &Call, out: &mut Vec<Atom>) -> Result<(), CompactError> {
    let err = || CompactError::Parse(call.to_string());
    let nums = || -> Result<Vec<Rat>, CompactError> {
        call.args
            .iter()
            .map(|a| a.as_atom().and_then(|t| t.parse::<Rat>().ok()).ok_or_else(err))
            .collect()
    };
    match (call.name.as_str(), call.args.len()) {
        ("union", n) if n > 0 => {
            for a in &call.args {
                collect_atoms(a, out)?;
            }
        }
        ("point", 1) => out.push(Atom::Point(nums()?[0])),
        ("points", n) if n > 0 => out.extend(nums()?.into_iter().map(Atom::Point)),
        ("interval", 2) => {
            let v = nums()?;
            out.push(Atom::Interval(v[0], v[1]));
        }
        ("cantor", 2) => {
            let v = nums()?;
            out.push(Atom::CantorPiece(v[0], v[1]));
        }
        ("geoseq", 3) => {
            let v = nums()?;
            out.push(Atom::GeomSeq { limit: v[0], first: v[1], ratio: v[2] });
        }
        _ => return Err(err()),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> CompactDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn min_nonisolated_examples() {
        assert!(d("union(point(0), geoseq(0, 1, 1/2))").min_nonisolated().unwrap());
        assert!(!d("points(0, 1)").min_nonisolated().unwrap());
        assert!(d("cantor(0, 1)").min_nonisolated().unwrap());
        assert!(!d("geoseq(1, 0, 1/2)").min_nonisolated().unwrap());
        assert_eq!(CompactDescriptor::new(vec![]).unwrap().min_nonisolated(), Err(CompactError::Empty));
    }

    #[test]
    fn nowhere_dense_examples() {
        assert!(!d("interval(0, 1)").nowhere_dense());
        assert!(d("cantor(0, 1)").nowhere_dense());
        assert!(d("union(point(2), geoseq(0, 1, 1/2))").nowhere_dense());
    }

    #[test]
    fn order_type_examples() {
        assert_eq!(d("points(0, 1, 2)").order_type().unwrap(), OrderTypeExpr::Finite(3));
        assert_eq!(d("union(point(0), geoseq(0, 1, 1/2))").order_type().unwrap(), OrderTypeExpr::OmegaStar);
        assert_eq!(d("cantor(0, 1)").order_type().unwrap(), OrderTypeExpr::Cantor);
        assert!(d("union(cantor(0,1), point(1/2))").order_type().unwrap_err().to_string().contains("overlap"));
        assert!(d("union(point(1/4), cantor(0,1))").order_type().is_ok());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(d("interval(0, 1)").classify().unwrap().class, ClassLabel::Ic);
        assert_eq!(d("union(point(0), geoseq(0, 1, 1/2))").classify().unwrap().class, ClassLabel::IIc);
        assert_eq!(d("points(0, 1)").classify().unwrap().class, ClassLabel::Neither);
    }

    #[test]
    fn atom_validation() {
        assert!("interval(1, 1)".parse::<CompactDescriptor>().is_err());
        assert!("geoseq(0, 1, 1)".parse::<CompactDescriptor>().is_err());
        assert!("geoseq(0, 0, 1/2)".parse::<CompactDescriptor>().is_err());
        assert!("union()".parse::<CompactDescriptor>().is_err());
    }

    #[test]
    fn cantor_membership() {
        assert!(cantor_contains(Rat::frac(1, 4)));
        assert!(cantor_contains(Rat::frac(3, 4)));
        assert!(cantor_contains(Rat::frac(2, 9)));
        assert!(!cantor_contains(Rat::frac(1, 2)));
        assert!(!cantor_contains(Rat::frac(4, 9)));
    }

    #[test]
    fn geoseq_membership() {
        let a = Atom::GeomSeq { limit: Rat::ZERO, first: Rat::ONE, ratio: Rat::frac(1, 2) };
        assert!(a.contains(Rat::frac(1, 8)));
        assert!(!a.contains(Rat::frac(3, 8)));
        assert!(a.contains(Rat::ZERO));
    }

    #[test]
    fn display_round_trip() {
        let s = "union(point(0), geoseq(0, 1, 1/2), cantor(2, 3))";
        assert_eq!(d(s).to_string(), s);
    }
}
