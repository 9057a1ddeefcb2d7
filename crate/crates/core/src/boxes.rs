//! One-dimensional domains and their Cartesian products.
//!
//! The exactness test for boxes only needs a handful of operations from the
//! underlying 1-D domain, collected in [`OneDimDomain`]. Rational intervals
//! with open or closed bounds and integer intervals are provided.

use std::fmt;

use crate::decision::Decision;
use crate::error::{check_dim, Result};
use crate::linear::PointVec;
use crate::rational::Rational;

/// The operations the box exactness test relies on.
pub trait OneDimDomain: Clone + PartialEq + fmt::Debug {
    fn bottom() -> Self;
    fn top() -> Self;
    fn is_empty(&self) -> bool;
    fn join(&self, other: &Self) -> Self;
    fn is_subset(&self, other: &Self) -> bool;
    /// Whether `self ⊕ other` equals `self ∪ other` as a set.
    fn union_is_exact(&self, other: &Self) -> bool;
}

/// 1-D domains whose elements are sets of rationals, so witnesses can be
/// materialized as points.
pub trait SampleDomain: OneDimDomain {
    fn contains(&self, v: &Rational) -> bool;
    /// Finite values at which membership may change.
    fn breakpoints(&self) -> Vec<Rational>;
    /// Whether sample points must be integral.
    fn integral() -> bool;

    /// Some value satisfying `pred`, found among breakpoints of the given
    /// elements, their midpoints and their integer neighbours.
    fn find_value(elems: &[&Self], pred: impl Fn(&Rational) -> bool) -> Option<Rational> {
        let mut pts: Vec<Rational> = elems.iter().flat_map(|e| e.breakpoints()).collect();
        pts.sort();
        pts.dedup();
        let mut cands = vec![Rational::zero()];
        for (k, p) in pts.iter().enumerate() {
            cands.push(p.clone());
            cands.push(p - &Rational::one());
            cands.push(p + &Rational::one());
            if !Self::integral() {
                if let Some(next) = pts.get(k + 1) {
                    cands.push((p + next).half());
                }
            }
        }
        cands.into_iter().find(|c| pred(c))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Bound {
    Closed(Rational),
    Open(Rational),
    Infinite,
}

impl Bound {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            Bound::Closed(v) | Bound::Open(v) => Some(v),
            Bound::Infinite => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Bound::Closed(_))
    }
}

/// A possibly open, possibly unbounded rational interval.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum NncInterval {
    Empty,
    Range { lo: Bound, hi: Bound },
}

impl NncInterval {
    /// Builds the interval, collapsing to `Empty` when it has no points.
    pub fn new(lo: Bound, hi: Bound) -> Self {
        let nonempty = match (lo.value(), hi.value()) {
            (Some(a), Some(b)) => a < b || (a == b && lo.is_closed() && hi.is_closed()),
            _ => true,
        };
        if nonempty {
            NncInterval::Range { lo, hi }
        } else {
            NncInterval::Empty
        }
    }

    pub fn closed(a: i64, b: i64) -> Self {
        Self::new(Bound::Closed(a.into()), Bound::Closed(b.into()))
    }

    pub fn lower(&self) -> Option<&Bound> {
        match self {
            NncInterval::Range { lo, .. } => Some(lo),
            NncInterval::Empty => None,
        }
    }

    pub fn upper(&self) -> Option<&Bound> {
        match self {
            NncInterval::Range { hi, .. } => Some(hi),
            NncInterval::Empty => None,
        }
    }
}

// Orders lower bounds by the set of points they admit: smaller admits more.
fn lower_le(a: &Bound, b: &Bound) -> bool {
    match (a, b) {
        (Bound::Infinite, _) => true,
        (_, Bound::Infinite) => false,
        (Bound::Closed(x), Bound::Open(y)) => x <= y,
        (Bound::Open(x), Bound::Closed(y)) => x < y,
        (Bound::Closed(x), Bound::Closed(y)) | (Bound::Open(x), Bound::Open(y)) => x <= y,
    }
}

// True when upper bound `a` admits at least the points `b` admits.
fn upper_ge(a: &Bound, b: &Bound) -> bool {
    match (a, b) {
        (Bound::Infinite, _) => true,
        (_, Bound::Infinite) => false,
        (Bound::Closed(x), Bound::Open(y)) => x >= y,
        (Bound::Open(x), Bound::Closed(y)) => x > y,
        (Bound::Closed(x), Bound::Closed(y)) | (Bound::Open(x), Bound::Open(y)) => x >= y,
    }
}

impl OneDimDomain for NncInterval {
    fn bottom() -> Self {
        NncInterval::Empty
    }

    fn top() -> Self {
        NncInterval::Range { lo: Bound::Infinite, hi: Bound::Infinite }
    }

    fn is_empty(&self) -> bool {
        matches!(self, NncInterval::Empty)
    }

    fn join(&self, other: &Self) -> Self {
        match (self, other) {
            (NncInterval::Empty, x) | (x, NncInterval::Empty) => x.clone(),
            (NncInterval::Range { lo: l1, hi: h1 }, NncInterval::Range { lo: l2, hi: h2 }) => {
                let lo = if lower_le(l1, l2) { l1 } else { l2 };
                let hi = if upper_ge(h1, h2) { h1 } else { h2 };
                NncInterval::Range { lo: lo.clone(), hi: hi.clone() }
            }
        }
    }

    fn is_subset(&self, other: &Self) -> bool {
        match (self, other) {
            (NncInterval::Empty, _) => true,
            (_, NncInterval::Empty) => false,
            (NncInterval::Range { lo: l1, hi: h1 }, NncInterval::Range { lo: l2, hi: h2 }) => {
                lower_le(l2, l1) && upper_ge(h2, h1)
            }
        }
    }

    fn union_is_exact(&self, other: &Self) -> bool {
        let (NncInterval::Range { lo: l1, hi: h1 }, NncInterval::Range { lo: l2, hi: h2 }) =
            (self, other)
        else {
            return true;
        };
        // Let `a` be the interval that starts first; the union is connected
        // iff `b` starts no later than `a` ends.
        let ((_, ha), (lb, _)) = if lower_le(l1, l2) { ((l1, h1), (l2, h2)) } else { ((l2, h2), (l1, h1)) };
        match (ha.value(), lb.value()) {
            (None, _) | (_, None) => true,
            (Some(end), Some(start)) => start < end || (start == end && (ha.is_closed() || lb.is_closed())),
        }
    }
}

impl SampleDomain for NncInterval {
    fn contains(&self, v: &Rational) -> bool {
        match self {
            NncInterval::Empty => false,
            NncInterval::Range { lo, hi } => {
                let above = match lo {
                    Bound::Infinite => true,
                    Bound::Closed(a) => a <= v,
                    Bound::Open(a) => a < v,
                };
                let below = match hi {
                    Bound::Infinite => true,
                    Bound::Closed(b) => v <= b,
                    Bound::Open(b) => v < b,
                };
                above && below
            }
        }
    }

    fn breakpoints(&self) -> Vec<Rational> {
        match self {
            NncInterval::Empty => vec![],
            NncInterval::Range { lo, hi } => lo.value().into_iter().chain(hi.value()).cloned().collect(),
        }
    }

    fn integral() -> bool {
        false
    }
}

impl fmt::Display for NncInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NncInterval::Empty => f.write_str("empty"),
            NncInterval::Range { lo, hi } => {
                match lo {
                    Bound::Infinite => f.write_str("(-inf")?,
                    Bound::Closed(v) => write!(f, "[{v}")?,
                    Bound::Open(v) => write!(f, "({v}")?,
                }
                match hi {
                    Bound::Infinite => f.write_str(", inf)"),
                    Bound::Closed(v) => write!(f, ", {v}]"),
                    Bound::Open(v) => write!(f, ", {v})"),
                }
            }
        }
    }
}

/// An interval of integers; `None` bounds are infinite.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum IntInterval {
    Empty,
    Range { lo: Option<i64>, hi: Option<i64> },
}

impl IntInterval {
    pub fn new(lo: Option<i64>, hi: Option<i64>) -> Self {
        match (lo, hi) {
            (Some(a), Some(b)) if a > b => IntInterval::Empty,
            _ => IntInterval::Range { lo, hi },
        }
    }

    pub fn closed(a: i64, b: i64) -> Self {
        Self::new(Some(a), Some(b))
    }

    pub fn bounds(&self) -> Option<(Option<i64>, Option<i64>)> {
        match self {
            IntInterval::Empty => None,
            IntInterval::Range { lo, hi } => Some((*lo, *hi)),
        }
    }
}

impl OneDimDomain for IntInterval {
    fn bottom() -> Self {
        IntInterval::Empty
    }

    fn top() -> Self {
        IntInterval::Range { lo: None, hi: None }
    }

    fn is_empty(&self) -> bool {
        matches!(self, IntInterval::Empty)
    }

    fn join(&self, other: &Self) -> Self {
        match (self, other) {
            (IntInterval::Empty, x) | (x, IntInterval::Empty) => x.clone(),
            (IntInterval::Range { lo: l1, hi: h1 }, IntInterval::Range { lo: l2, hi: h2 }) => {
                let lo = l1.zip(*l2).map(|(a, b)| a.min(b));
                let hi = h1.zip(*h2).map(|(a, b)| a.max(b));
                IntInterval::Range { lo, hi }
            }
        }
    }

    fn is_subset(&self, other: &Self) -> bool {
        match (self, other) {
            (IntInterval::Empty, _) => true,
            (_, IntInterval::Empty) => false,
            (IntInterval::Range { lo: l1, hi: h1 }, IntInterval::Range { lo: l2, hi: h2 }) => {
                let lo_ok = match (l1, l2) {
                    (_, None) => true,
                    (None, Some(_)) => false,
                    (Some(a), Some(b)) => b <= a,
                };
                let hi_ok = match (h1, h2) {
                    (_, None) => true,
                    (None, Some(_)) => false,
                    (Some(a), Some(b)) => a <= b,
                };
                lo_ok && hi_ok
            }
        }
    }

    fn union_is_exact(&self, other: &Self) -> bool {
        let (IntInterval::Range { lo: l1, hi: h1 }, IntInterval::Range { lo: l2, hi: h2 }) = (self, other)
        else {
            return true;
        };
        // Over ℤ the union is exact iff neither interval ends before the
        // other starts with an integer missing in between.
        let gap = |hi: &Option<i64>, lo: &Option<i64>| match (hi, lo) {
            (Some(h), Some(l)) => (*l as i128) > (*h as i128) + 1,
            _ => false,
        };
        !gap(h1, l2) && !gap(h2, l1)
    }
}

impl SampleDomain for IntInterval {
    fn contains(&self, v: &Rational) -> bool {
        let IntInterval::Range { lo, hi } = self else {
            return false;
        };
        v.is_integer()
            && lo.is_none_or(|a| Rational::from_int(a) <= *v)
            && hi.is_none_or(|b| *v <= Rational::from_int(b))
    }

    fn breakpoints(&self) -> Vec<Rational> {
        match self {
            IntInterval::Empty => vec![],
            IntInterval::Range { lo, hi } => lo.iter().chain(hi.iter()).map(|&v| Rational::from_int(v)).collect(),
        }
    }

    fn integral() -> bool {
        true
    }
}

impl fmt::Display for IntInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntInterval::Empty => f.write_str("empty"),
            IntInterval::Range { lo, hi } => {
                match lo {
                    None => f.write_str("(-inf")?,
                    Some(v) => write!(f, "[{v}")?,
                }
                match hi {
                    None => f.write_str(", inf)"),
                    Some(v) => write!(f, ", {v}]"),
                }
            }
        }
    }
}

/// An n-dimensional box: the Cartesian product of n 1-D elements.
///
/// A box with an empty component is stored with every component empty.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BoxShape<D> {
    comps: Vec<D>,
}

impl<D: OneDimDomain> BoxShape<D> {
    pub fn new(comps: Vec<D>) -> Self {
        if comps.iter().any(D::is_empty) {
            BoxShape { comps: vec![D::bottom(); comps.len()] }
        } else {
            BoxShape { comps }
        }
    }

    pub fn universe(dim: usize) -> Self {
        BoxShape { comps: vec![D::top(); dim] }
    }

    pub fn empty(dim: usize) -> Self {
        BoxShape { comps: vec![D::bottom(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.iter().any(D::is_empty)
    }

    /// The projection πᵢ, 0-based.
    pub fn component(&self, i: usize) -> &D {
        &self.comps[i]
    }

    pub fn components(&self) -> &[D] {
        &self.comps
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(BoxShape::new(self.comps.iter().zip(&other.comps).map(|(a, b)| a.join(b)).collect()))
    }

    pub fn meet_is_empty_unchecked(&self) -> bool {
        self.is_empty()
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        check_dim(self.dim(), other.dim())?;
        if self.is_empty() {
            return Ok(true);
        }
        Ok(self.comps.iter().zip(&other.comps).all(|(a, b)| a.is_subset(b)))
    }
}

impl<D: SampleDomain> BoxShape<D> {
    pub fn contains(&self, p: &[Rational]) -> bool {
        p.len() == self.dim() && self.comps.iter().zip(p).all(|(c, v)| c.contains(v))
    }

    /// Some point of the box, if it is non-empty.
    pub fn some_point(&self) -> Option<PointVec> {
        self.comps.iter().map(|c| D::find_value(&[c], |v| c.contains(v))).collect()
    }
}

impl<D: fmt::Display> fmt::Display for BoxShape<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, " x{} in {c}", i + 1)?;
        }
        f.write_str(" }")
    }
}

/// Which condition of the box criterion fired; indices are 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BoxWitness {
    /// The join of the i-th projections is not their union.
    Condition1 { i: usize },
    /// πᵢ(B₁) ⊈ πᵢ(B₂) and πⱼ(B₂) ⊈ πⱼ(B₁) with i ≠ j.
    Condition2 { i: usize, j: usize },
}

impl fmt::Display for BoxWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoxWitness::Condition1 { i } => write!(f, "condition 1, i={i}"),
            BoxWitness::Condition2 { i, j } => write!(f, "condition 2, i={i}, j={j}"),
        }
    }
}

pub fn interval_join<D: OneDimDomain>(a: &D, b: &D) -> D {
    a.join(b)
}

pub fn interval_join_exact<D: OneDimDomain>(a: &D, b: &D) -> bool {
    a.union_is_exact(b)
}

/// Decides whether `b1 ⊎ b2 = b1 ∪ b2` using n union tests and 2n inclusion
/// tests.
pub fn detect_exact_join_box<D: OneDimDomain>(b1: &BoxShape<D>, b2: &BoxShape<D>) -> Result<Decision<BoxWitness>> {
    check_dim(b1.dim(), b2.dim())?;
    if b1.is_empty() || b2.is_empty() {
        return Ok(Decision::Exact);
    }
    // Two candidates per side suffice to find a pair with i ≠ j.
    let mut out1 = Vec::new(); // i with πᵢ(B₁) ⊈ πᵢ(B₂)
    let mut out2 = Vec::new(); // j with πⱼ(B₂) ⊈ πⱼ(B₁)
    for (i, (a, b)) in b1.comps.iter().zip(&b2.comps).enumerate() {
        if !a.union_is_exact(b) {
            return Ok(Decision::Inexact(BoxWitness::Condition1 { i: i + 1 }));
        }
        if out1.len() < 2 && !a.is_subset(b) {
            out1.push(i);
        }
        if out2.len() < 2 && !b.is_subset(a) {
            out2.push(i);
        }
    }
    for &i in &out1 {
        if let Some(&j) = out2.iter().find(|&&j| j != i) {
            return Ok(Decision::Inexact(BoxWitness::Condition2 { i: i + 1, j: j + 1 }));
        }
    }
    Ok(Decision::Exact)
}

/// A point of `b1 ⊎ b2` outside both boxes, built from the witness.
pub fn box_witness_point<D: SampleDomain>(b1: &BoxShape<D>, b2: &BoxShape<D>, w: &BoxWitness) -> Option<PointVec> {
    let mut p = b1.some_point()?;
    match *w {
        BoxWitness::Condition1 { i } => {
            let (a, b) = (&b1.comps[i - 1], &b2.comps[i - 1]);
            let j = a.join(b);
            p[i - 1] = D::find_value(&[a, b], |v| j.contains(v) && !a.contains(v) && !b.contains(v))?;
        }
        BoxWitness::Condition2 { i, j } => {
            let (a, b) = (&b1.comps[i - 1], &b2.comps[i - 1]);
            p[i - 1] = D::find_value(&[a, b], |v| a.contains(v) && !b.contains(v))?;
            let (a, b) = (&b1.comps[j - 1], &b2.comps[j - 1]);
            p[j - 1] = D::find_value(&[a, b], |v| b.contains(v) && !a.contains(v))?;
        }
    }
    Some(p)
}

/// Checks that `p` lies in the join but in neither box.
pub fn verify_box_witness<D: SampleDomain>(b1: &BoxShape<D>, b2: &BoxShape<D>, p: &[Rational]) -> bool {
    match b1.join(b2) {
        Ok(j) => j.contains(p) && !b1.contains(p) && !b2.contains(p),
        Err(_) => false,
    }
}
