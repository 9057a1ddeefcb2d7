//! Independent decision procedures for join exactness.
//!
//! The grid oracle enumerates points of the join on a lattice and looks for
//! one outside both inputs. It is exact for integer shapes with step 1 and
//! for boxes with integral bounds at step ½; elsewhere it can only falsify.
//! The complement-inclusion oracle works for every polyhedral shape: the
//! join of `A` and `B` equals `A ∪ B` iff, for every constraint `β` of `A`,
//! the join restricted to the complement of `β` lies in `B`.

use crate::bd::{BdShape, IntBdShape};
use crate::boxes::{BoxShape, IntInterval, NncInterval, SampleDomain};
use crate::decision::Decision;
use crate::error::{check_dim, Error, Result};
use crate::linear::{Constraint, ConstraintSystem, LinearExpr, PointVec};
use crate::nnc::{escape_point, NncPolyhedron};
use crate::octagon::{IntOctShape, OctGraph, OctShape};
use crate::polyhedra::CPolyhedron;
use crate::rational::{ExtendedRational, Rational};

/// Inclusive bounds per dimension.
pub type BBox = Vec<(Rational, Rational)>;

/// Lattice points `lo + k·step` inside `bbox`, in lexicographic order.
pub struct GridPoints {
    bbox: BBox,
    step: Rational,
    current: Option<PointVec>,
}

impl GridPoints {
    pub fn new(bbox: BBox, step: Rational) -> Self {
        assert!(step.is_positive(), "grid step must be positive");
        let current = if bbox.iter().all(|(lo, hi)| lo <= hi) {
            Some(bbox.iter().map(|(lo, _)| lo.clone()).collect())
        } else {
            None
        };
        GridPoints { bbox, step, current }
    }
}

impl Iterator for GridPoints {
    type Item = PointVec;

    fn next(&mut self) -> Option<PointVec> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut k = next.len();
        loop {
            if k == 0 {
                self.current = None;
                break;
            }
            k -= 1;
            let v = &next[k] + &self.step;
            if v <= self.bbox[k].1 {
                next[k] = v;
                self.current = Some(next);
                break;
            }
            next[k] = self.bbox[k].0.clone();
        }
        Some(out)
    }
}

/// The first lattice point of `bbox` in the join but in neither input.
pub fn grid_oracle(
    bbox: BBox,
    step: Rational,
    in_join: impl Fn(&[Rational]) -> bool,
    in_a: impl Fn(&[Rational]) -> bool,
    in_b: impl Fn(&[Rational]) -> bool,
) -> Decision<PointVec> {
    GridPoints::new(bbox, step)
        .find(|p| in_join(p) && !in_a(p) && !in_b(p))
        .map_or(Decision::Exact, Decision::Inexact)
}

fn finite_bounds(iv: &NncInterval) -> impl Iterator<Item = Rational> + '_ {
    [iv.lower(), iv.upper()].into_iter().flatten().filter_map(|b| b.value().cloned())
}

/// A box covering the finite extent of both inputs, widened by 1 on sides
/// where some bound is infinite.
pub fn box_bbox(b1: &BoxShape<NncInterval>, b2: &BoxShape<NncInterval>) -> BBox {
    (0..b1.dim())
        .map(|k| {
            let (c1, c2) = (b1.component(k), b2.component(k));
            let vals: Vec<Rational> = finite_bounds(c1).chain(finite_bounds(c2)).collect();
            let unbounded = [c1, c2].iter().any(|c| {
                [c.lower(), c.upper()].into_iter().flatten().any(|b| b.value().is_none())
            });
            let (lo, hi) = match (vals.iter().min(), vals.iter().max()) {
                (Some(lo), Some(hi)) => (lo.clone(), hi.clone()),
                _ => (Rational::zero(), Rational::zero()),
            };
            if unbounded || vals.is_empty() {
                (lo - Rational::one(), hi + Rational::one())
            } else {
                (lo, hi)
            }
        })
        .collect()
}

/// Grid oracle for boxes. Membership in a box is a conjunction over
/// coordinates, so the lattice is searched through the distinct
/// per-coordinate membership patterns; the answer is the one full
/// enumeration of the same lattice would give.
pub fn box_grid_oracle<D: SampleDomain>(
    b1: &BoxShape<D>,
    b2: &BoxShape<D>,
    bbox: BBox,
    step: &Rational,
) -> Result<Decision<PointVec>> {
    check_dim(b1.dim(), b2.dim())?;
    check_dim(b1.dim(), bbox.len())?;
    if b1.is_empty() || b2.is_empty() {
        return Ok(Decision::Exact);
    }
    let join = b1.join(b2)?;
    let mut axes: Vec<Vec<(Rational, [bool; 2])>> = Vec::with_capacity(b1.dim());
    for (k, (lo, hi)) in bbox.into_iter().enumerate() {
        let mut patterns: Vec<(Rational, [bool; 2])> = Vec::new();
        for v in GridPoints::new(vec![(lo, hi)], step.clone()).map(|p| p[0].clone()) {
            if !join.component(k).contains(&v) {
                continue;
            }
            let pat = [b1.component(k).contains(&v), b2.component(k).contains(&v)];
            if !patterns.iter().any(|(_, q)| *q == pat) {
                patterns.push((v, pat));
            }
        }
        if patterns.is_empty() {
            return Ok(Decision::Exact);
        }
        axes.push(patterns);
    }
    let mut idx = vec![0usize; axes.len()];
    loop {
        let in1 = idx.iter().zip(&axes).all(|(&t, a)| a[t].1[0]);
        let in2 = idx.iter().zip(&axes).all(|(&t, a)| a[t].1[1]);
        if !in1 && !in2 {
            return Ok(Decision::Inexact(idx.iter().zip(&axes).map(|(&t, a)| a[t].0.clone()).collect()));
        }
        let Some(k) = (0..axes.len()).rev().find(|&k| idx[k] + 1 < axes[k].len()) else {
            return Ok(Decision::Exact);
        };
        idx[k] += 1;
        idx[k + 1..].iter_mut().for_each(|t| *t = 0);
    }
}

/// Grid oracle for rational boxes over [`box_bbox`] with the given step.
pub fn nnc_box_grid_oracle(
    b1: &BoxShape<NncInterval>,
    b2: &BoxShape<NncInterval>,
    step: &Rational,
) -> Result<Decision<PointVec>> {
    check_dim(b1.dim(), b2.dim())?;
    let bbox = box_bbox(b1, b2);
    box_grid_oracle(b1, b2, bbox, step)
}

/// Grid oracle for integer boxes at step 1; infinite bounds are cut one past
/// the extreme finite bounds, which is exact.
pub fn int_box_grid_oracle(b1: &BoxShape<IntInterval>, b2: &BoxShape<IntInterval>) -> Result<Decision<PointVec>> {
    check_dim(b1.dim(), b2.dim())?;
    let as_rational = |b: &BoxShape<IntInterval>| -> BoxShape<NncInterval> {
        BoxShape::new(b.components().iter().map(int_to_nnc_interval).collect())
    };
    let bbox = box_bbox(&as_rational(b1), &as_rational(b2));
    let bbox = bbox.into_iter().map(|(lo, hi)| (lo.ceil(), hi.floor())).collect();
    box_grid_oracle(b1, b2, bbox, &Rational::one())
}

fn int_to_nnc_interval(iv: &IntInterval) -> NncInterval {
    use crate::boxes::Bound;
    match iv.bounds() {
        None => NncInterval::Empty,
        Some((lo, hi)) => NncInterval::new(
            lo.map_or(Bound::Infinite, |v| Bound::Closed(v.into())),
            hi.map_or(Bound::Infinite, |v| Bound::Closed(v.into())),
        ),
    }
}

/// The integer interval `[a, b]` as the rational interval `[a, b + 1)`. The
/// integer join of two integer boxes is exact iff the rational join of their
/// images is.
pub fn int_box_as_half_open(b: &BoxShape<IntInterval>) -> BoxShape<NncInterval> {
    use crate::boxes::Bound;
    BoxShape::new(
        b.components()
            .iter()
            .map(|iv| match iv.bounds() {
                None => NncInterval::Empty,
                Some((lo, hi)) => NncInterval::new(
                    lo.map_or(Bound::Infinite, |v| Bound::Closed(v.into())),
                    hi.map_or(Bound::Infinite, |v| Bound::Open((v + 1).into())),
                ),
            })
            .collect(),
    )
}

fn extent(neg_lo: &ExtendedRational, hi: &ExtendedRational) -> Result<(Rational, Rational)> {
    match (neg_lo.as_finite(), hi.as_finite()) {
        (Some(l), Some(h)) => Ok((-l, h.clone())),
        _ => Err(Error::Unbounded),
    }
}

fn empty_bbox(dim: usize) -> BBox {
    vec![(Rational::one(), Rational::zero()); dim]
}

/// The tight rational bounding box of a BD shape; unbounded shapes are an
/// error and empty shapes give an empty box.
pub fn bd_extent(b: &BdShape) -> Result<BBox> {
    let Some(g) = b.closed() else { return Ok(empty_bbox(b.dim())) };
    (1..=b.dim()).map(|i| extent(g.get(0, i), g.get(i, 0))).collect()
}

/// The tight rational bounding box of an octagonal shape given by its
/// strongly closed graph.
pub fn oct_extent(closed: Option<&OctGraph>, dim: usize) -> Result<BBox> {
    let Some(g) = closed else { return Ok(empty_bbox(dim)) };
    let half = |v: &ExtendedRational| v.as_finite().map_or(ExtendedRational::PlusInfinity, |x| ExtendedRational::Finite(x.half()));
    (0..dim).map(|k| extent(&half(g.get(2 * k + 1, 2 * k)), &half(g.get(2 * k, 2 * k + 1)))).collect()
}

/// The integer points of a bounding box: bounds rounded inwards.
pub fn integral_bbox(bbox: BBox) -> BBox {
    bbox.into_iter().map(|(lo, hi)| (lo.ceil(), hi.floor())).collect()
}

/// A bounding box whose corners lie on the lattice of the given step.
pub fn snap_outwards(bbox: BBox, step: &Rational) -> BBox {
    let snap_down = |v: &Rational| &(v / step).floor() * step;
    let snap_up = |v: &Rational| &(v / step).ceil() * step;
    bbox.into_iter().map(|(lo, hi)| (snap_down(&lo), snap_up(&hi))).collect()
}

/// Integer bounding box of a BD shape.
pub fn bd_bbox(b: &BdShape) -> Result<BBox> {
    bd_extent(b).map(integral_bbox)
}

/// Integer bounding box of an octagonal shape.
pub fn oct_bbox(closed: Option<&OctGraph>, dim: usize) -> Result<BBox> {
    oct_extent(closed, dim).map(integral_bbox)
}

/// Exact integer oracle for integer BD shapes with a bounded join.
pub fn int_bd_grid_oracle(b1: &IntBdShape, b2: &IntBdShape) -> Result<Decision<PointVec>> {
    check_dim(b1.dim(), b2.dim())?;
    if b1.is_empty() || b2.is_empty() {
        return Ok(Decision::Exact);
    }
    let join = b1.join(b2)?;
    let bbox = bd_bbox(join.as_rational())?;
    Ok(grid_oracle(bbox, Rational::one(), |p| join.contains(p), |p| b1.contains(p), |p| b2.contains(p)))
}

/// Exact integer oracle for integer octagonal shapes with a bounded join.
pub fn int_oct_grid_oracle(o1: &IntOctShape, o2: &IntOctShape) -> Result<Decision<PointVec>> {
    check_dim(o1.dim(), o2.dim())?;
    if o1.is_empty() || o2.is_empty() {
        return Ok(Decision::Exact);
    }
    let join = o1.join(o2)?;
    let bbox = oct_bbox(join.closed(), join.dim())?;
    Ok(grid_oracle(bbox, Rational::one(), |p| join.contains(p), |p| o1.contains(p), |p| o2.contains(p)))
}

/// Shapes that denote NNC polyhedra.
pub trait Polyhedral {
    fn to_nnc(&self) -> NncPolyhedron;
}

impl Polyhedral for NncPolyhedron {
    fn to_nnc(&self) -> NncPolyhedron {
        self.clone()
    }
}

impl Polyhedral for CPolyhedron {
    fn to_nnc(&self) -> NncPolyhedron {
        NncPolyhedron::from_closed(self)
    }
}

fn from_system(dim: usize, empty: bool, cs: ConstraintSystem) -> NncPolyhedron {
    if empty {
        NncPolyhedron::empty(dim)
    } else {
        NncPolyhedron::from_constraints(&cs)
    }
}

impl Polyhedral for BdShape {
    fn to_nnc(&self) -> NncPolyhedron {
        from_system(self.dim(), self.is_empty(), self.to_constraints())
    }
}

impl Polyhedral for OctShape {
    fn to_nnc(&self) -> NncPolyhedron {
        from_system(self.dim(), self.is_empty(), self.to_constraints())
    }
}

impl Polyhedral for BoxShape<NncInterval> {
    fn to_nnc(&self) -> NncPolyhedron {
        use crate::boxes::Bound;
        let n = self.dim();
        if self.is_empty() {
            return NncPolyhedron::empty(n);
        }
        let mut cs = ConstraintSystem::new(n);
        for (k, iv) in self.components().iter().enumerate() {
            let x = LinearExpr::var(n, k);
            let lower = match iv.lower() {
                Some(Bound::Closed(v)) => Some(Constraint::ge(x.clone(), v.clone())),
                Some(Bound::Open(v)) => Some(Constraint::gt(x.clone(), v.clone())),
                _ => None,
            };
            let upper = match iv.upper() {
                Some(Bound::Closed(v)) => Some(Constraint::le(x.clone(), v.clone())),
                Some(Bound::Open(v)) => Some(Constraint::lt(x.clone(), v.clone())),
                _ => None,
            };
            for c in lower.into_iter().chain(upper) {
                cs.insert(c.expect("unit expression")).expect("dimension");
            }
        }
        NncPolyhedron::from_constraints(&cs)
    }
}

/// Complement-inclusion oracle. An inexact answer carries a point of the
/// join outside both inputs.
pub fn complement_inclusion(a: &NncPolyhedron, b: &NncPolyhedron) -> Result<Decision<PointVec>> {
    check_dim(a.dim(), b.dim())?;
    if a.is_empty() || b.is_empty() {
        return Ok(Decision::Exact);
    }
    let join = a.join(b)?;
    for beta in a.constraints().expanded() {
        let part = join.add_constraint(&beta.negate())?;
        if let Some(g) = part.generators().iter().find(|g| !b.subsumes(g)) {
            let p = escape_point(&part, b, g).expect("part has a point and b misses g");
            return Ok(Decision::Inexact(p));
        }
    }
    Ok(Decision::Exact)
}

/// Complement inclusion on any pair of polyhedral shapes.
pub fn complement_inclusion_of<S: Polyhedral>(a: &S, b: &S) -> Result<Decision<PointVec>> {
    complement_inclusion(&a.to_nnc(), &b.to_nnc())
}

/// Whether `target ⊆ ⋃ parts`, by recursive complement splitting on the
/// constraints of the first part.
pub fn covered_by(target: &NncPolyhedron, parts: &[NncPolyhedron]) -> Result<bool> {
    if target.is_empty() {
        return Ok(true);
    }
    for p in parts {
        if p.contains(target)? {
            return Ok(true);
        }
    }
    let Some((first, rest)) = parts.split_first() else { return Ok(false) };
    if first.is_empty() {
        return covered_by(target, rest);
    }
    for beta in first.constraints().expanded() {
        let piece = target.add_constraint(&beta.negate())?;
        if !covered_by(&piece, rest)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the join of all `parts` equals their union.
pub fn k_way_exact(parts: &[NncPolyhedron]) -> Result<bool> {
    let Some((first, rest)) = parts.split_first() else { return Ok(true) };
    let mut join = first.clone();
    for p in rest {
        join = join.join(p)?;
    }
    covered_by(&join, parts)
}
