//! Not necessarily closed polyhedra.
//!
//! Conversion goes through the closed polyhedron in one extra dimension `ε`:
//! a strict `a·x < b` becomes `a·x + ε ≤ b`, with `0 ≤ ε ≤ 1`, and the NNC
//! polyhedron is the set of `x` with some `ε > 0` above it. Vertices with
//! `ε > 0` are points and vertices with `ε = 0` are closure points.

use std::fmt;

use crate::dd::{generators, scale_to_int, IntVec, Row};
use crate::decision::Decision;
use crate::error::{check_dim, Error, Result};
use crate::linear::{
    lerp, saturates, segment_entry, translate, Constraint, ConstraintSystem, GenKind, Generator, GeneratorSystem,
    LinearExpr, PointVec, Relation,
};
use crate::polyhedra::{
    convert_constraints, convert_generators, dehomogenize, unsatisfiable, CPolyhedron, Side,
};
use crate::rational::Rational;

fn row(v: Vec<Rational>, equality: bool) -> Row {
    let v = scale_to_int(&v);
    if equality {
        Row::eq(v)
    } else {
        Row::ge(v)
    }
}

/// Generators of `con(cs)` before redundancy removal.
fn raw_generators(cs: &ConstraintSystem) -> GeneratorSystem {
    let n = cs.dim();
    if !cs.has_strict() {
        return convert_constraints(cs).expect("no strict constraints");
    }
    let q = Rational::zero;
    let mut rows = Vec::with_capacity(cs.len() + 3);
    let mut unit = vec![q(); n + 2];
    unit[0] = Rational::one();
    rows.push(row(unit, false));
    for c in cs {
        // b·y₀ − a·x − [strict]·ε ≥ 0
        let mut v = vec![c.bound().clone()];
        v.extend(c.coeffs().iter().map(|x| -x));
        v.push(if c.is_strict() { -Rational::one() } else { q() });
        rows.push(row(v, c.is_equality()));
    }
    let mut lo = vec![q(); n + 2];
    lo[n + 1] = Rational::one();
    rows.push(row(lo, false));
    let mut hi = vec![q(); n + 2];
    hi[0] = Rational::one();
    hi[n + 1] = -Rational::one();
    rows.push(row(hi, false));
    let lifted = dehomogenize(n + 1, &generators(n + 2, &rows));
    let mut gs = GeneratorSystem::new(n);
    for g in &lifted {
        let (x, eps) = g.coords().split_at(n);
        let x = x.to_vec();
        let g = match g.kind() {
            GenKind::Ray => Generator::ray(x).expect("bounded ε means a nonzero x part"),
            _ if eps[0].is_positive() => Generator::point(x),
            _ => Generator::closure_point(x),
        };
        gs.insert(g).expect("dimension");
    }
    if !gs.has_point() {
        return GeneratorSystem::new(n);
    }
    gs
}

/// Constraints of `gen(gs)`; `gs` must contain a point.
fn raw_constraints(gs: &GeneratorSystem) -> ConstraintSystem {
    let n = gs.dim();
    if gs.closure_points().next().is_none() {
        return convert_generators(gs).expect("points only");
    }
    let mut rows = Vec::with_capacity(gs.len() * 2);
    let lift = |lead: i64, x: &[Rational], eps: i64| {
        let mut v = vec![Rational::from_int(lead)];
        v.extend(x.iter().cloned());
        v.push(Rational::from_int(eps));
        row(v, false)
    };
    for g in gs {
        match g.kind() {
            GenKind::Point => {
                rows.push(lift(1, g.coords(), 1));
                rows.push(lift(1, g.coords(), 0));
            }
            GenKind::ClosurePoint => rows.push(lift(1, g.coords(), 0)),
            GenKind::Ray => rows.push(lift(0, g.coords(), 0)),
        }
    }
    let polar = generators(n + 2, &rows);
    // z·(1, x, ε) ≥ 0 reads −c·x + (−d)·ε ≤ z₀.
    let read = |z: &IntVec, rel_if_eps: Relation, equality: bool| -> Option<Constraint> {
        let z: Vec<Rational> = z.iter().map(|v| Rational::from(v.clone())).collect();
        let expr = LinearExpr::new(z[1..=n].iter().map(|c| -c).collect());
        if expr.is_zero() {
            return None;
        }
        let rel = if equality {
            Relation::Eq
        } else if z[n + 1].is_negative() {
            rel_if_eps
        } else {
            Relation::Le
        };
        Some(Constraint::new(expr, rel, z[0].clone()).expect("nonzero expression"))
    };
    let mut cs = ConstraintSystem::new(n);
    for l in &polar.lines {
        debug_assert!(l[n + 1] == 0.into(), "ε never enters an equality");
        if let Some(c) = read(l, Relation::Eq, true) {
            cs.insert(c).expect("dimension");
        }
    }
    for r in &polar.rays {
        if let Some(c) = read(r, Relation::Lt, false) {
            cs.insert(c).expect("dimension");
        }
    }
    cs.sorted()
}

fn weakened(cs: &ConstraintSystem) -> ConstraintSystem {
    ConstraintSystem::from_vec(cs.dim(), cs.iter().map(Constraint::weaken).collect()).expect("same dimension")
}

/// Drops closure points that repeat a point, then, one at a time, closure
/// points inside the closure of the rest and points inside the rest.
fn simplify(gs: &GeneratorSystem) -> GeneratorSystem {
    let mut gens: Vec<Generator> = gs
        .iter()
        .filter(|g| {
            g.kind() != GenKind::ClosurePoint
                || !gs.points().any(|p| p.coords() == g.coords())
        })
        .cloned()
        .collect();
    let mut k = 0;
    while k < gens.len() {
        let g = gens[k].clone();
        if g.is_ray() {
            k += 1;
            continue;
        }
        let rest: Vec<Generator> = gens.iter().enumerate().filter(|&(t, _)| t != k).map(|(_, h)| h.clone()).collect();
        let rest = GeneratorSystem::from_vec(gs.dim(), rest).expect("same dimension");
        let redundant = rest.has_point()
            && match g.kind() {
                GenKind::ClosurePoint => convert_generators(&rest.closed()).expect("closed").satisfied_by(g.coords()),
                _ => raw_constraints(&rest).satisfied_by(g.coords()),
            };
        if redundant {
            gens.remove(k);
        } else {
            k += 1;
        }
    }
    GeneratorSystem::from_vec(gs.dim(), gens).expect("same dimension")
}

/// The generators of `con(cs)`: points, closure points and rays, with lines
/// as ray pairs. The empty set has no generators.
pub fn nnc_convert_constraints(cs: &ConstraintSystem) -> GeneratorSystem {
    simplify(&raw_generators(cs))
}

/// The constraints of `gen(gs)`. Closure points or rays without a point are
/// an error; the empty system gives an unsatisfiable one.
pub fn nnc_convert_generators(gs: &GeneratorSystem) -> Result<ConstraintSystem> {
    if !gs.has_point() {
        return if gs.is_empty() { Ok(unsatisfiable(gs.dim())) } else { Err(Error::NoSupportingPoint) };
    }
    Ok(raw_constraints(gs))
}

/// A not necessarily closed polyhedron. Equality is set equality.
#[derive(Clone)]
pub struct NncPolyhedron {
    cs: ConstraintSystem,
    gs: GeneratorSystem,
}

impl NncPolyhedron {
    pub fn universe(dim: usize) -> Self {
        Self::from_constraints(&ConstraintSystem::new(dim))
    }

    pub fn empty(dim: usize) -> Self {
        NncPolyhedron { cs: unsatisfiable(dim), gs: GeneratorSystem::new(dim) }
    }

    pub fn from_constraints(cs: &ConstraintSystem) -> Self {
        let gs = nnc_convert_constraints(cs);
        if !gs.has_point() {
            return Self::empty(cs.dim());
        }
        let cs = raw_constraints(&gs);
        NncPolyhedron { cs, gs }
    }

    pub fn from_generators(gs: &GeneratorSystem) -> Result<Self> {
        let cs = nnc_convert_generators(gs)?;
        if !gs.has_point() {
            return Ok(Self::empty(gs.dim()));
        }
        Ok(NncPolyhedron { cs, gs: simplify(gs) })
    }

    pub fn from_closed(p: &CPolyhedron) -> Self {
        NncPolyhedron { cs: p.constraints().clone(), gs: p.generators().clone() }
    }

    pub fn dim(&self) -> usize {
        self.gs.dim()
    }

    pub fn is_empty(&self) -> bool {
        !self.gs.has_point()
    }

    pub fn constraints(&self) -> &ConstraintSystem {
        &self.cs
    }

    pub fn generators(&self) -> &GeneratorSystem {
        &self.gs
    }

    pub fn is_topologically_closed(&self) -> bool {
        !self.cs.has_strict()
    }

    /// All strict constraints weakened; closure points become points.
    pub fn topological_closure(&self) -> Self {
        if self.is_empty() {
            return self.clone();
        }
        Self::from_closed(&CPolyhedron::from_generators(&self.gs.closed()).expect("points only"))
    }

    pub fn contains_point(&self, p: &[Rational]) -> bool {
        !self.is_empty() && p.len() == self.dim() && self.cs.satisfied_by(p)
    }

    /// Membership in the topological closure.
    pub fn closure_contains(&self, p: &[Rational]) -> bool {
        !self.is_empty() && p.len() == self.dim() && self.cs.iter().all(|c| c.weaken().holds_at(p))
    }

    /// Points must be members, closure points members of the closure, and
    /// rays directions of recession.
    pub fn subsumes(&self, g: &Generator) -> bool {
        match g.kind() {
            GenKind::Point => self.contains_point(g.coords()),
            GenKind::ClosurePoint => self.closure_contains(g.coords()),
            GenKind::Ray => !self.is_empty() && self.cs.iter().all(|c| c.admits_ray(g.coords())),
        }
    }

    /// `other ⊆ self`, decided on the generators of `other`.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        check_dim(self.dim(), other.dim())?;
        Ok(other.is_empty() || other.gs.iter().all(|g| self.subsumes(g)))
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        other.contains(self)
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        Self::from_generators(&self.gs.union(&other.gs)?)
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        let mut cs = self.cs.clone();
        for c in &other.cs {
            cs.insert(c.clone())?;
        }
        Ok(Self::from_constraints(&cs))
    }

    /// Intersection with one more constraint.
    pub fn add_constraint(&self, c: &Constraint) -> Result<Self> {
        let mut cs = self.cs.clone();
        cs.insert(c.clone())?;
        Ok(Self::from_constraints(&cs))
    }

    pub fn some_point(&self) -> Option<PointVec> {
        self.gs.points().next().map(|g| g.coords().to_vec())
    }
}

impl PartialEq for NncPolyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.contains(other).unwrap_or(false) && other.contains(self).unwrap_or(false)
    }
}

impl Eq for NncPolyhedron {}

impl fmt::Display for NncPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cs)
    }
}

impl fmt::Debug for NncPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NncPolyhedron {} {}", self.cs, self.gs)
    }
}

/// Which of the three alternative conditions holds.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum NncCondition {
    /// A ray or closure point not subsumed by the other input.
    One,
    /// A point outside the closure of the other input, on a non-strict
    /// constraint.
    Two,
    /// The join meets the boundary of a strict constraint outside the other
    /// input.
    Three,
}

impl NncCondition {
    pub fn number(self) -> u8 {
        match self {
            NncCondition::One => 1,
            NncCondition::Two => 2,
            NncCondition::Three => 3,
        }
    }
}

/// `beta` belongs to input `side`. For conditions (1) and (2) `generator`
/// is the saturating generator of that input; for condition (3) it is a
/// generator of the join restricted to the boundary of `beta` that the other
/// input does not subsume.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NncWitness {
    pub side: Side,
    pub condition: NncCondition,
    pub beta: Constraint,
    pub generator: Generator,
}

impl fmt::Display for NncWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "condition ({}) on P{}: beta = {}, g = {}",
            self.condition.number(),
            self.side.index(),
            self.beta,
            self.generator
        )
    }
}

/// Whether the set generated by `gs` has a point outside `con({beta})`.
pub(crate) fn nnc_violates(gs: &GeneratorSystem, beta: &Constraint) -> bool {
    gs.iter().any(|g| {
        let v = beta.expr().eval(g.coords());
        match g.kind() {
            GenKind::Ray => v.is_positive(),
            GenKind::Point if beta.is_strict() => &v >= beta.bound(),
            _ => &v > beta.bound(),
        }
    })
}

/// Rays first (descending, so the positive member of a line pair comes
/// first), then closure points, then points.
fn scan_order(gs: &GeneratorSystem) -> Vec<&Generator> {
    let mut out: Vec<&Generator> = gs.rays().collect();
    out.reverse();
    out.extend(gs.closure_points());
    out.extend(gs.points());
    out
}

fn conditions_one_two(pi: &NncPolyhedron, pj: &NncPolyhedron, side: Side) -> Option<NncWitness> {
    let order = scan_order(&pi.gs);
    for beta in pi.cs.expanded() {
        if !nnc_violates(&pj.gs, &beta) {
            continue;
        }
        for g in &order {
            if !saturates(g, &beta).expect("same dimension") {
                continue;
            }
            let condition = match g.kind() {
                GenKind::Ray | GenKind::ClosurePoint if !pj.subsumes(g) => NncCondition::One,
                GenKind::Point if !beta.is_strict() && !pj.closure_contains(g.coords()) => NncCondition::Two,
                _ => continue,
            };
            return Some(NncWitness { side, condition, beta: beta.clone(), generator: (*g).clone() });
        }
    }
    None
}

fn condition_three(
    pi: &NncPolyhedron,
    pj: &NncPolyhedron,
    join: &NncPolyhedron,
    side: Side,
    seen: &mut Vec<Constraint>,
) -> Option<NncWitness> {
    for beta in pi.cs.iter().filter(|c| c.is_strict()) {
        if seen.contains(beta) {
            continue;
        }
        if !nnc_violates(&pj.gs, beta) || !pi.gs.iter().any(|g| saturates(g, beta).expect("same dimension")) {
            continue;
        }
        seen.push(beta.clone());
        let on_boundary = join.add_constraint(&beta.hyperplane()).expect("same dimension");
        if let Some(g) = scan_order(&on_boundary.gs).into_iter().find(|g| !pj.subsumes(g)) {
            return Some(NncWitness { side, condition: NncCondition::Three, beta: beta.clone(), generator: g.clone() });
        }
    }
    None
}

/// Decides whether the join of two NNC polyhedra is their union. Conditions
/// (1) and (2) are tried on both inputs before the costlier condition (3).
pub fn detect_exact_join_nnc(p1: &NncPolyhedron, p2: &NncPolyhedron) -> Result<Decision<NncWitness>> {
    check_dim(p1.dim(), p2.dim())?;
    if p1.is_empty() || p2.is_empty() {
        return Ok(Decision::Exact);
    }
    if let Some(w) = conditions_one_two(p1, p2, Side::First).or_else(|| conditions_one_two(p2, p1, Side::Second)) {
        return Ok(Decision::Inexact(w));
    }
    let join = p1.join(p2)?;
    let mut seen = Vec::new();
    let found = condition_three(p1, p2, &join, Side::First, &mut seen)
        .or_else(|| condition_three(p2, p1, &join, Side::Second, &mut seen));
    Ok(found.map_or(Decision::Exact, Decision::Inexact))
}

/// Evaluates every condition for every candidate, in no particular order,
/// and reports whether any holds. Used to check that the evaluation order of
/// [`detect_exact_join_nnc`] does not matter.
pub fn any_condition_holds(p1: &NncPolyhedron, p2: &NncPolyhedron) -> Result<bool> {
    check_dim(p1.dim(), p2.dim())?;
    if p1.is_empty() || p2.is_empty() {
        return Ok(false);
    }
    let join = p1.join(p2)?;
    for (pi, pj) in [(p1, p2), (p2, p1)] {
        for beta in pi.cs.expanded() {
            if !nnc_violates(&pj.gs, &beta) {
                continue;
            }
            for g in pi.gs.iter().filter(|g| saturates(g, &beta).expect("same dimension")) {
                let one = g.kind() != GenKind::Point && !pj.subsumes(g);
                let two = g.kind() == GenKind::Point && !beta.is_strict() && !pj.closure_contains(g.coords());
                let three = beta.is_strict() && {
                    let h = join.add_constraint(&beta.hyperplane())?;
                    !pj.contains(&h)?
                };
                if one || two || three {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// A point of `q` violating `beta` (`≥ b` when strict, `> b` otherwise).
fn violating_point(q: &GeneratorSystem, beta: &Constraint) -> Option<PointVec> {
    let a = beta.expr();
    let b = beta.bound();
    let bad = |v: &Rational| if beta.is_strict() { v >= b } else { v > b };
    if let Some(p) = q.points().find(|g| bad(&a.eval(g.coords()))) {
        return Some(p.coords().to_vec());
    }
    let x = q.points().next()?.coords();
    let ax = a.eval(x);
    if let Some(c) = q.closure_points().find(|g| &a.eval(g.coords()) > b) {
        let ac = a.eval(c.coords());
        let lambda0 = ((b - &ax) / (&ac - &ax)).max(Rational::zero());
        return Some(lerp(x, c.coords(), &(&lambda0 + &Rational::one()).half()));
    }
    let r = q.rays().find(|g| a.eval(g.coords()).is_positive())?.coords();
    let rho = ((b - &ax) / a.eval(r)).max(Rational::zero()) + Rational::one();
    Some(translate(x, r, &rho))
}

/// Construction: `p` saturates `beta`, lies in the closure of its own
/// input and outside the closure of `pj`; the result is the midpoint of the
/// part of `(p, p₂]` outside the closure of `pj`.
fn segment_point(p: &[Rational], beta: &Constraint, pj: &NncPolyhedron) -> Option<PointVec> {
    let target = violating_point(&pj.gs, beta)?;
    let closure = weakened(&pj.cs);
    let t = segment_entry(closure.iter(), p, &target);
    t.is_positive().then(|| lerp(p, &target, &t.half()))
}

/// A point of `inside` that `pj` does not contain, derived from a generator
/// of `inside` that `pj` does not subsume.
pub(crate) fn escape_point(inside: &NncPolyhedron, pj: &NncPolyhedron, g: &Generator) -> Option<PointVec> {
    if g.kind() == GenKind::Point {
        return Some(g.coords().to_vec());
    }
    let x = inside.gs.points().next()?.coords();
    let closure = weakened(&pj.cs).expanded();
    match g.kind() {
        GenKind::ClosurePoint => {
            let c = g.coords();
            let k = closure.iter().find(|k| !k.holds_at(c))?;
            let (kx, kc) = (k.expr().eval(x), k.expr().eval(c));
            let lambda0 = ((k.bound() - &kx) / (&kc - &kx)).max(Rational::zero());
            Some(lerp(x, c, &(&lambda0 + &Rational::one()).half()))
        }
        _ => {
            let r = g.coords();
            let k = closure.iter().find(|k| k.expr().eval(r).is_positive())?;
            let rho = ((k.bound() - &k.expr().eval(x)) / k.expr().eval(r)).max(Rational::zero()) + Rational::one();
            Some(translate(x, r, &rho))
        }
    }
}

/// A point in the join and outside both inputs, built from the witness.
pub fn nnc_witness_point(p1: &NncPolyhedron, p2: &NncPolyhedron, w: &NncWitness) -> Result<PointVec> {
    check_dim(p1.dim(), p2.dim())?;
    let (pi, pj) = match w.side {
        Side::First => (p1, p2),
        Side::Second => (p2, p1),
    };
    let invalid = || Error::InvalidWitness(w.to_string());
    let point = match (w.condition, w.generator.kind()) {
        (NncCondition::Three, _) => {
            let on_boundary = p1.join(p2)?.add_constraint(&w.beta.hyperplane())?;
            escape_point(&on_boundary, pj, &w.generator)
        }
        (_, GenKind::Ray) => {
            let a = w.beta.expr();
            let base = pi.gs.iter().filter(|g| !g.is_ray()).max_by_key(|g| a.eval(g.coords())).ok_or_else(invalid)?;
            let top = a.eval(base.coords());
            let beta = if &top == w.beta.bound() {
                w.beta.clone()
            } else {
                Constraint::le(a.clone(), top).expect("nonzero expression")
            };
            let closure = weakened(&pj.cs).expanded();
            let r = w.generator.coords();
            let k = closure.iter().find(|k| k.expr().eval(r).is_positive()).ok_or_else(invalid)?;
            let x = base.coords();
            let rho = ((k.bound() - &k.expr().eval(x)) / k.expr().eval(r)).max(Rational::zero()) + Rational::one();
            segment_point(&translate(x, r, &rho), &beta, pj)
        }
        _ => segment_point(w.generator.coords(), &w.beta, pj),
    };
    point.ok_or_else(invalid)
}

/// Inside the join and outside both inputs.
pub fn verify_nnc_witness_point(p1: &NncPolyhedron, p2: &NncPolyhedron, p: &[Rational]) -> bool {
    let Ok(join) = p1.join(p2) else { return false };
    join.contains_point(p) && !p1.contains_point(p) && !p2.contains_point(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::point_from_ints;
    use crate::parse::parse_system;

    fn nnc(text: &str, dim: usize) -> NncPolyhedron {
        NncPolyhedron::from_constraints(&parse_system(text, dim).unwrap())
    }

    fn gens(text: &[(GenKind, &[i64])], dim: usize) -> GeneratorSystem {
        let v = text
            .iter()
            .map(|(k, c)| match k {
                GenKind::Point => Generator::point(point_from_ints(c)),
                GenKind::ClosurePoint => Generator::closure_point(point_from_ints(c)),
                GenKind::Ray => Generator::ray(point_from_ints(c)).unwrap(),
            })
            .collect();
        GeneratorSystem::from_vec(dim, v).unwrap()
    }

    #[test]
    fn open_square_generators() {
        let p = nnc("x1 > 0; x1 < 1; x2 > 0; x2 < 1", 2);
        assert_eq!(p.generators().points().count(), 1);
        assert_eq!(p.generators().closure_points().count(), 4);
        assert!(p.contains_point(&p.some_point().unwrap()));
        assert_eq!(p.constraints().len(), 4);
        assert!(p.constraints().iter().all(Constraint::is_strict));
    }

    #[test]
    fn half_open_strip_generators() {
        let q1 = nnc("x1 >= 2; x1 < 4", 2);
        use GenKind::*;
        let expect = gens(&[(Point, &[2, 0]), (ClosurePoint, &[4, 0]), (Ray, &[0, 1]), (Ray, &[0, -1])], 2);
        assert_eq!(q1.generators(), &expect);
        assert_eq!(q1.topological_closure(), nnc("x1 >= 2; x1 <= 4", 2));
    }

    #[test]
    fn generator_round_trip() {
        use GenKind::*;
        let gs = gens(&[(Point, &[0, 0]), (ClosurePoint, &[1, 0]), (ClosurePoint, &[0, 1])], 2);
        let p = NncPolyhedron::from_generators(&gs).unwrap();
        assert_eq!(p, nnc("x1 >= 0; x2 >= 0; x1 + x2 < 1", 2));
        assert_eq!(p.constraints().to_string(), nnc("x1 >= 0; x2 >= 0; x1 + x2 < 1", 2).constraints().to_string());
        let gs = gens(&[(ClosurePoint, &[0, 0])], 2);
        assert_eq!(NncPolyhedron::from_generators(&gs).err(), Some(Error::NoSupportingPoint));
    }

    #[test]
    fn emptiness() {
        assert!(nnc("x1 < 0; x1 > 0", 1).is_empty());
        assert!(nnc("x1 < 0; x1 >= 0", 2).is_empty());
        assert!(!nnc("x1 <= 0; x1 >= 0", 1).is_empty());
    }

    #[test]
    fn strip_and_point_is_inexact_by_ray() {
        let q1 = nnc("x1 >= 2; x1 < 4", 2);
        let q2 = nnc("x1 = 4; x2 = 2", 2);
        let d = detect_exact_join_nnc(&q1, &q2).unwrap();
        let w = d.witness().unwrap().clone();
        assert_eq!(w.condition, NncCondition::One);
        assert_eq!(w.side, Side::First);
        assert_eq!(w.beta.to_string(), "x1 < 4");
        assert_eq!(w.generator, Generator::ray(point_from_ints(&[0, 1])).unwrap());
        let p = nnc_witness_point(&q1, &q2, &w).unwrap();
        assert!(verify_nnc_witness_point(&q1, &q2, &p), "{p:?}");
    }

    #[test]
    fn open_squares_need_condition_three() {
        let a = nnc("x1 > 0; x1 < 1; x2 > 0; x2 < 1", 2);
        let b = nnc("x1 > 1; x1 < 2; x2 > 0; x2 < 1", 2);
        let d = detect_exact_join_nnc(&a, &b).unwrap();
        let w = d.witness().unwrap().clone();
        assert_eq!(w.condition, NncCondition::Three);
        let p = nnc_witness_point(&a, &b, &w).unwrap();
        assert!(verify_nnc_witness_point(&a, &b, &p), "{p:?}");
        assert!(any_condition_holds(&a, &b).unwrap());
    }

    #[test]
    fn matching_strict_boundaries_are_exact() {
        let a = nnc("x1 > 0; x1 <= 1; x2 = 0", 2);
        let b = nnc("x1 >= 1; x1 < 2; x2 = 0", 2);
        assert!(detect_exact_join_nnc(&a, &b).unwrap().is_exact());
        assert!(!any_condition_holds(&a, &b).unwrap());
        assert!(detect_exact_join_nnc(&a, &a).unwrap().is_exact());
    }

    #[test]
    fn closed_inputs_agree() {
        let p1 = "x1 >= 0; x2 >= 0; x1 + x2 <= 2";
        let p2 = "x1 <= 2; x2 >= 0; x1 - x2 >= 0";
        let d = detect_exact_join_nnc(&nnc(p1, 2), &nnc(p2, 2)).unwrap();
        assert_eq!(d.witness().unwrap().condition, NncCondition::Two);
        let c1 = CPolyhedron::from_constraints(&parse_system(p1, 2).unwrap()).unwrap();
        assert_eq!(NncPolyhedron::from_closed(&c1), nnc(p1, 2));
    }

    #[test]
    fn closure_point_witness_is_certified() {
        let a = nnc("x1 >= 0; x1 < 1; x2 >= 0; x2 <= 1", 2);
        let b = nnc("x1 >= 2; x1 <= 3; x2 >= 1; x2 <= 2", 2);
        let d = detect_exact_join_nnc(&a, &b).unwrap();
        let w = d.witness().unwrap().clone();
        let p = nnc_witness_point(&a, &b, &w).unwrap();
        assert!(verify_nnc_witness_point(&a, &b, &p), "{w} {p:?}");
    }
}
