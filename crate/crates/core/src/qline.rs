//! Exact rationals and the partition of the rational line into dense,
//! shift-invariant classes `J_0, J_1, ...`.
//!
//! Class membership depends only on the denominator of a reduced fraction:
//! integers go to class 0, every other rational goes to the class indexed by
//! the smallest prime dividing its denominator (2 → 0, 3 → 1, 5 → 2, ...).
//! Each class contains `{a / p^k}` for its prime `p`, so each is dense, and
//! adding an integer never changes the denominator.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QlineError {
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("window bounds out of order: {lo} >= {hi}")]
    EmptyWindow { lo: Endpoint, hi: Endpoint },
    #[error("window denominator bound must be at least 1")]
    ZeroDenomBound,
    #[error("cannot enumerate an unbounded window")]
    Unbounded,
}

/// A rational number in lowest terms with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(Ratio<i64>);

impl Rat {
    pub const ZERO: Rat = Rat(Ratio::new_raw(0, 1));
    pub const ONE: Rat = Rat(Ratio::new_raw(1, 1));

    pub fn new(numer: i64, denom: i64) -> Result<Rat, QlineError> {
        if denom == 0 {
            return Err(QlineError::ZeroDenominator);
        }
        Ok(Rat(Ratio::new(numer, denom)))
    }

    /// Panics on a zero denominator; meant for literals.
    pub fn frac(numer: i64, denom: i64) -> Rat {
        Rat::new(numer, denom).expect("nonzero denominator")
    }

    pub fn int(n: i64) -> Rat {
        Rat(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn floor(&self) -> i64 {
        *self.0.floor().numer()
    }

    pub fn ceil(&self) -> i64 {
        *self.0.ceil().numer()
    }

    /// The fractional part `q - floor(q)`, always in `[0, 1)`.
    pub fn fract_part(&self) -> Rat {
        *self - Rat::int(self.floor())
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn min(self, other: Rat) -> Rat {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: Rat) -> Rat {
        std::cmp::max(self, other)
    }

    pub fn pow(&self, exp: u32) -> Rat {
        Rat(self.0.pow(exp as i32))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat($tr::$method(self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = QlineError;

    fn from_str(s: &str) -> Result<Rat, QlineError> {
        let t = s.trim();
        let parse = |x: &str| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| QlineError::Parse(s.to_string()))
        };
        match t.split_once('/') {
            Some((n, d)) => Rat::new(parse(n)?, parse(d)?),
            None if t.contains('.') => parse_decimal(t).ok_or_else(|| QlineError::Parse(s.to_string())),
            None => Ok(Rat::int(parse(t)?)),
        }
    }
}

fn parse_decimal(t: &str) -> Option<Rat> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int_part, frac_part) = body.split_once('.')?;
    if frac_part.len() > 15 || frac_part.chars().any(|c| !c.is_ascii_digit()) {
        return None;
    }
    let scale = 10i64.checked_pow(frac_part.len() as u32)?;
    let ip: i64 = if int_part.is_empty() { 0 } else { int_part.parse().ok()? };
    let fp: i64 = if frac_part.is_empty() { 0 } else { frac_part.parse().ok()? };
    let r = Rat::new(ip.checked_mul(scale)?.checked_add(fp)?, scale).ok()?;
    Some(if neg { -r } else { r })
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Smallest prime factor of `n >= 2`.
pub fn smallest_prime_factor(n: u64) -> u64 {
    debug_assert!(n >= 2);
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return p;
        }
        p += 2;
    }
    n
}

fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_prime_factor(n) == n
}

/// Zero-based index of the prime `p` in `2, 3, 5, 7, ...`.
pub fn prime_index(p: u64) -> usize {
    debug_assert!(is_prime(p));
    (2..p).filter(|&k| is_prime(k)).count()
}

/// The `n`-th prime, zero-based.
pub fn nth_prime(n: usize) -> u64 {
    (2u64..).filter(|&k| is_prime(k)).nth(n).expect("infinitely many primes")
}

/// Class index of a positive denominator.
pub fn denom_class(d: u64) -> usize {
    if d <= 1 {
        0
    } else {
        prime_index(smallest_prime_factor(d))
    }
}

/// The unique `n` with `q ∈ J_n`.
pub fn jclass(q: Rat) -> usize {
    denom_class(q.fract_part().denom() as u64)
}

/// Whether denominators of class `n` exist below `d` inclusive.
fn class_denominators(n: usize, max_denom: u64) -> impl Iterator<Item = u64> {
    let p = if n == 0 { 2 } else { nth_prime(n) };
    (1..=max_denom).filter(move |&d| if n == 0 { d == 1 || d % 2 == 0 } else { d > 1 && smallest_prime_factor(d) == p })
}

/// Every rational exactly once: by height `|p| + q`, then denominator, then
/// value.
pub fn rationals_by_height() -> impl Iterator<Item = Rat> {
    (1i64..).flat_map(|h| {
        (1..=h).flat_map(move |d| {
            let a = h - d;
            let mut v = Vec::with_capacity(2);
            if a.gcd(&d) == 1 {
                if a == 0 {
                    v.push(Rat::ZERO);
                } else {
                    v.push(Rat::frac(-a, d));
                    v.push(Rat::frac(a, d));
                }
            }
            v
        })
    })
}

/// One end of a window: a rational or an infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Endpoint {
    NegInf,
    Finite(Rat),
    PosInf,
}

impl Endpoint {
    fn rank(&self) -> u8 {
        match self {
            Endpoint::NegInf => 0,
            Endpoint::Finite(_) => 1,
            Endpoint::PosInf => 2,
        }
    }

    pub fn finite(&self) -> Option<Rat> {
        match self {
            Endpoint::Finite(r) => Some(*r),
            _ => None,
        }
    }

    /// `q < self`
    pub fn above(&self, q: Rat) -> bool {
        *self > Endpoint::Finite(q)
    }

    /// `self < q`
    pub fn below(&self, q: Rat) -> bool {
        *self < Endpoint::Finite(q)
    }
}

impl PartialOrd for Endpoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Endpoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Endpoint::Finite(a), Endpoint::Finite(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInf => f.write_str("-inf"),
            Endpoint::Finite(r) => write!(f, "{r}"),
            Endpoint::PosInf => f.write_str("+inf"),
        }
    }
}

impl FromStr for Endpoint {
    type Err = QlineError;

    fn from_str(s: &str) -> Result<Endpoint, QlineError> {
        match s.trim() {
            "-inf" | "-oo" => Ok(Endpoint::NegInf),
            "inf" | "+inf" | "oo" | "+oo" => Ok(Endpoint::PosInf),
            t => Ok(Endpoint::Finite(t.parse()?)),
        }
    }
}

/// An open interval `(lo, hi)` viewed through rationals with denominator at
/// most `denom_bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    lo: Endpoint,
    hi: Endpoint,
    denom_bound: u64,
}

impl Window {
    pub fn new(lo: Endpoint, hi: Endpoint, denom_bound: u64) -> Result<Window, QlineError> {
        if lo >= hi || lo == Endpoint::PosInf || hi == Endpoint::NegInf {
            return Err(QlineError::EmptyWindow { lo, hi });
        }
        if denom_bound == 0 {
            return Err(QlineError::ZeroDenomBound);
        }
        Ok(Window { lo, hi, denom_bound })
    }

    pub fn bounded(lo: Rat, hi: Rat, denom_bound: u64) -> Result<Window, QlineError> {
        Window::new(Endpoint::Finite(lo), Endpoint::Finite(hi), denom_bound)
    }

    pub fn lo(&self) -> Endpoint {
        self.lo
    }

    pub fn hi(&self) -> Endpoint {
        self.hi
    }

    pub fn denom_bound(&self) -> u64 {
        self.denom_bound
    }

    /// Interval membership only; the denominator bound is ignored.
    pub fn spans(&self, q: Rat) -> bool {
        self.lo.below(q) && self.hi.above(q)
    }

    /// Interval membership plus the denominator bound.
    pub fn contains(&self, q: Rat) -> bool {
        self.spans(q) && q.denom() as u64 <= self.denom_bound
    }

    pub fn with_hi(&self, hi: Endpoint) -> Result<Window, QlineError> {
        Window::new(self.lo, hi.min(self.hi), self.denom_bound)
    }

    pub fn with_denom_bound(&self, denom_bound: u64) -> Result<Window, QlineError> {
        Window::new(self.lo, self.hi, denom_bound)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}) @ d<={}", self.lo, self.hi, self.denom_bound)
    }
}

/// All reduced fractions `a/d` strictly inside `(lo, hi)`, ascending.
fn fractions_with_denom(d: u64, lo: Rat, hi: Rat) -> impl Iterator<Item = Rat> {
    let d = d as i64;
    let first = (lo * Rat::int(d)).floor() + 1;
    let last = (hi * Rat::int(d)).ceil() - 1;
    (first..=last)
        .filter(move |a| a.gcd(&d) == 1)
        .map(move |a| Rat::frac(a, d))
}

/// `J_n ∩ w`, ascending.
pub fn window_members(n: usize, w: &Window) -> Result<Vec<Rat>, QlineError> {
    let (lo, hi) = match (w.lo.finite(), w.hi.finite()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(QlineError::Unbounded),
    };
    let mut out: Vec<Rat> = class_denominators(n, w.denom_bound)
        .flat_map(|d| fractions_with_denom(d, lo, hi))
        .collect();
    out.sort();
    Ok(out)
}

/// Every rational in `w` with denominator at most its bound, ascending.
pub fn window_rationals(w: &Window) -> Result<Vec<Rat>, QlineError> {
    let (lo, hi) = match (w.lo.finite(), w.hi.finite()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(QlineError::Unbounded),
    };
    let mut out: Vec<Rat> = (1..=w.denom_bound)
        .flat_map(|d| fractions_with_denom(d, lo, hi))
        .collect();
    out.sort();
    Ok(out)
}

/// Rationals of `(lo, hi)` listed by denominator, then by value. Stops after
/// denominator `max_denom`.
pub fn by_denominator(lo: Rat, hi: Rat, max_denom: u64) -> impl Iterator<Item = Rat> {
    (1..=max_denom).flat_map(move |d| fractions_with_denom(d, lo, hi))
}

/// Some `q ∈ J_n` with `q < bound`: smallest denominator first, then the
/// largest such value.
pub fn coinitial_witness(n: usize, bound: Rat) -> Rat {
    let d = if n == 0 { 1 } else { nth_prime(n) as i64 };
    let mut a = (bound * Rat::int(d)).ceil() - 1;
    while a.gcd(&d) != 1 {
        a -= 1;
    }
    Rat::frac(a, d)
}

/// The `count` canonical members of `J_n ∩ (lo, hi)`: smallest denominators
/// first, ties broken by value. Gives up past `ceiling`.
pub fn canonical_members(n: usize, lo: Rat, hi: Rat, count: usize, ceiling: u64) -> Option<Vec<Rat>> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Some(out);
    }
    for d in class_denominators(n, ceiling) {
        for q in fractions_with_denom(d, lo, hi) {
            out.push(q);
            if out.len() == count {
                return Some(out);
            }
        }
    }
    None
}
