//! Exact rationals, open intervals and finite unions of open intervals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: i64, denom: i64) -> Rat {
        assert!(denom != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Rat {
        assert!(!denom.is_zero(), "zero denominator");
        Rat(BigRational::new(numer, denom))
    }

    pub fn int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn floor(&self) -> Rat {
        Rat(self.0.floor())
    }

    /// Representative of `self` modulo 1 in `[0, 1)`.
    pub fn frac(&self) -> Rat {
        Rat(&self.0 - self.0.floor())
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_positive() {
            1
        } else if self.0.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Midpoint of `self` and `other`.
    pub fn mid(&self, other: &Rat) -> Rat {
        (self + other) / Rat::int(2)
    }

    /// True when `self` lies in `(1/q) Z`.
    pub fn on_grid(&self, q: u64) -> bool {
        (self * &Rat::int(q as i64)).is_integer()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn from_big(r: BigRational) -> Rat {
        Rat(r)
    }
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Rat>>(values: I) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Rat(BigRational::new(n, d)))
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rat(BigRational::from_integer(n)))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat($tr::$m(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &'a Rat) -> Rat {
                Rat($tr::$m(self.0, &rhs.0))
            }
        }
        impl<'a> $tr<Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat($tr::$m(&self.0, rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: &'b Rat) -> Rat {
                Rat($tr::$m(&self.0, &rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl std::iter::Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

/// Shorthand used throughout tests and the catalog: `r(1, 2)` is 1/2.
pub fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

/// A non-empty open interval `(lo, hi)` with `lo < hi`. The empty set is
/// represented by `Option::None` wherever an operation can produce it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpenInterval {
    lo: Rat,
    hi: Rat,
}

impl OpenInterval {
    /// Returns `None` unless `lo < hi`.
    pub fn new(lo: Rat, hi: Rat) -> Option<OpenInterval> {
        if lo < hi {
            Some(OpenInterval { lo, hi })
        } else {
            None
        }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn length(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        self.lo.mid(&self.hi)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo < x && x < &self.hi
    }

    pub fn contains_closed(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_subset_of(&self, other: &OpenInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn translate(&self, t: &Rat) -> OpenInterval {
        OpenInterval { lo: &self.lo + t, hi: &self.hi + t }
    }

    /// Image under `x -> r - x`.
    pub fn reflect(&self, r: &Rat) -> OpenInterval {
        OpenInterval { lo: r - &self.hi, hi: r - &self.lo }
    }

    /// Open intersection; `None` when disjoint or touching.
    pub fn intersect(&self, other: &OpenInterval) -> Option<OpenInterval> {
        let lo = std::cmp::max(&self.lo, &other.lo).clone();
        let hi = std::cmp::min(&self.hi, &other.hi).clone();
        OpenInterval::new(lo, hi)
    }

    /// `count` evenly spaced interior points.
    pub fn samples(&self, count: usize) -> Vec<Rat> {
        let step = self.length() / Rat::int(count as i64 + 1);
        (1..=count as i64).map(|k| &self.lo + &(&step * &Rat::int(k))).collect()
    }
}

/// Intersection of possibly-empty intervals.
pub fn interval_intersect(a: Option<&OpenInterval>, b: Option<&OpenInterval>) -> Option<OpenInterval> {
    match (a, b) {
        (Some(a), Some(b)) => a.intersect(b),
        _ => None,
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

impl fmt::Debug for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for OpenInterval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [&self.lo, &self.hi].serialize(s)
    }
}

impl<'de> Deserialize<'de> for OpenInterval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<OpenInterval, D::Error> {
        let [lo, hi] = <[Rat; 2]>::deserialize(d)?;
        OpenInterval::new(lo.clone(), hi.clone())
            .ok_or_else(|| serde::de::Error::custom(format!("empty interval ({lo}, {hi})")))
    }
}

/// Finite union of open intervals, canonical: sorted, no empty parts,
/// overlapping parts merged. Parts sharing only an endpoint stay separate
/// since the shared point is not a member.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IntervalUnion {
    parts: Vec<OpenInterval>,
}

impl IntervalUnion {
    pub fn empty() -> IntervalUnion {
        IntervalUnion { parts: Vec::new() }
    }

    pub fn from_interval(i: OpenInterval) -> IntervalUnion {
        IntervalUnion { parts: vec![i] }
    }

    pub fn from_intervals<I: IntoIterator<Item = OpenInterval>>(items: I) -> IntervalUnion {
        let mut v: Vec<OpenInterval> = items.into_iter().collect();
        v.sort();
        let mut parts: Vec<OpenInterval> = Vec::with_capacity(v.len());
        for i in v {
            match parts.last_mut() {
                Some(last) if i.lo < last.hi => {
                    if i.hi > last.hi {
                        last.hi = i.hi;
                    }
                }
                _ => parts.push(i),
            }
        }
        IntervalUnion { parts }
    }

    /// Builds from `(lo, hi)` pairs, dropping empty ones.
    pub fn from_pairs<I: IntoIterator<Item = (Rat, Rat)>>(pairs: I) -> IntervalUnion {
        IntervalUnion::from_intervals(pairs.into_iter().filter_map(|(a, b)| OpenInterval::new(a, b)))
    }

    pub fn parts(&self) -> &[OpenInterval] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<OpenInterval> {
        self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn total_length(&self) -> Rat {
        self.parts.iter().map(|p| p.length()).sum()
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.part_containing(x).is_some()
    }

    pub fn part_containing(&self, x: &Rat) -> Option<&OpenInterval> {
        let idx = self.parts.partition_point(|p| &p.hi <= x);
        self.parts.get(idx).filter(|p| p.contains(x))
    }

    /// True when the interval lies inside a single part.
    pub fn contains_interval(&self, i: &OpenInterval) -> bool {
        self.part_containing(&i.midpoint()).is_some_and(|p| i.is_subset_of(p))
    }

    pub fn is_subset_of(&self, other: &IntervalUnion) -> bool {
        self.parts.iter().all(|p| other.contains_interval(p))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::from_intervals(self.parts.iter().chain(other.parts.iter()).cloned())
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a, b) = (&self.parts[i], &other.parts[j]);
            if let Some(x) = a.intersect(b) {
                out.push(x);
            }
            if a.hi <= b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalUnion::from_intervals(out)
    }

    pub fn intersect_interval(&self, i: &OpenInterval) -> IntervalUnion {
        self.intersect(&IntervalUnion::from_interval(i.clone()))
    }

    /// `self \ cl(other)`: removing a closed set keeps the result open.
    pub fn minus_closure(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        for p in &self.parts {
            let mut cur = p.lo.clone();
            for q in &other.parts {
                if q.hi <= cur || q.lo >= p.hi {
                    continue;
                }
                if let Some(piece) = OpenInterval::new(cur.clone(), q.lo.clone()) {
                    out.push(piece);
                }
                cur = std::cmp::max(cur, q.hi.clone());
            }
            if let Some(piece) = OpenInterval::new(cur, p.hi.clone()) {
                out.push(piece);
            }
        }
        IntervalUnion::from_intervals(out)
    }

    /// Removes finitely many points.
    pub fn minus_points<'a, I: IntoIterator<Item = &'a Rat>>(&self, points: I) -> IntervalUnion {
        let mut pts: Vec<&Rat> = points.into_iter().collect();
        pts.sort();
        pts.dedup();
        let mut out = Vec::new();
        for p in &self.parts {
            let mut cur = p.lo.clone();
            for x in pts.iter().filter(|x| p.contains(x)) {
                out.extend(OpenInterval::new(cur.clone(), (*x).clone()));
                cur = (*x).clone();
            }
            out.extend(OpenInterval::new(cur, p.hi.clone()));
        }
        IntervalUnion::from_intervals(out)
    }

    /// Sorted endpoints of all parts (the boundary of the union).
    pub fn boundary(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = self
            .parts
            .iter()
            .flat_map(|p| [p.lo.clone(), p.hi.clone()])
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Joins parts that touch at a point accepted by `joinable`.
    pub fn join_touching<F: Fn(&Rat) -> bool>(&self, joinable: F) -> IntervalUnion {
        let mut parts: Vec<OpenInterval> = Vec::with_capacity(self.parts.len());
        for p in &self.parts {
            match parts.last_mut() {
                Some(last) if last.hi == p.lo && joinable(&p.lo) => last.hi = p.hi.clone(),
                _ => parts.push(p.clone()),
            }
        }
        IntervalUnion { parts }
    }

    pub fn translate(&self, t: &Rat) -> IntervalUnion {
        IntervalUnion { parts: self.parts.iter().map(|p| p.translate(t)).collect() }
    }

    pub fn reflect(&self, r: &Rat) -> IntervalUnion {
        IntervalUnion::from_intervals(self.parts.iter().map(|p| p.reflect(r)))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, OpenInterval> {
        self.parts.iter()
    }
}

impl<'a> IntoIterator for &'a IntervalUnion {
    type Item = &'a OpenInterval;
    type IntoIter = std::slice::Iter<'a, OpenInterval>;
    fn into_iter(self) -> Self::IntoIter {
        self.parts.iter()
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "{{}}");
        }
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, " U ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for IntervalUnion {
    type Err = Error;

    /// Parses the `Display` form, e.g. `(0, 1/24) U (7/8, 11/12)` or `{}`.
    fn from_str(s: &str) -> Result<IntervalUnion, Error> {
        let s = s.trim();
        if s == "{}" {
            return Ok(IntervalUnion::empty());
        }
        let mut parts = Vec::new();
        for piece in s.split('U') {
            let piece = piece.trim();
            let inner = piece
                .strip_prefix('(')
                .and_then(|p| p.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("bad interval {piece:?}")))?;
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad interval {piece:?}")))?;
            let i = OpenInterval::new(a.parse()?, b.parse()?)
                .ok_or_else(|| Error::Parse(format!("empty interval {piece:?}")))?;
            parts.push(i);
        }
        Ok(IntervalUnion::from_intervals(parts))
    }
}

impl Serialize for IntervalUnion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalUnion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<IntervalUnion, D::Error> {
        let parts = Vec::<OpenInterval>::deserialize(d)?;
        Ok(IntervalUnion::from_intervals(parts))
    }
}
