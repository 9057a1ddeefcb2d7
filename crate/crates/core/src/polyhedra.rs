//! Topologically closed convex polyhedra in double description.
//!
//! Both the constraint system and the generator system are kept, minimized.
//! Lines are exposed as pairs of opposite rays.

use std::fmt;

use crate::dd::{generators, scale_to_int, ConeGens, IntVec, Row};
use crate::decision::Decision;
use crate::error::{check_dim, Error, Result};
use crate::linear::{
    lerp, saturates, segment_entry, translate, Constraint, ConstraintSystem, GenKind, Generator, GeneratorSystem,
    LinearExpr, PointVec, Relation,
};
use crate::rational::Rational;

fn to_rationals(v: &[num_bigint::BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from(x.clone())).collect()
}

/// Homogenized rows `b·y₀ − a·x ≥ 0` (or `= 0`); strictness is ignored.
pub(crate) fn constraint_rows(cs: &[Constraint]) -> Vec<Row> {
    cs.iter()
        .map(|c| {
            let mut v = vec![c.bound().clone()];
            v.extend(c.coeffs().iter().map(|x| -x));
            let v = scale_to_int(&v);
            if c.is_equality() {
                Row::eq(v)
            } else {
                Row::ge(v)
            }
        })
        .collect()
}

/// Rows `(1, p)` for points and `(0, r)` for rays of the polar cone.
pub(crate) fn generator_rows<'a>(gens: impl IntoIterator<Item = &'a Generator>) -> Vec<Row> {
    gens.into_iter()
        .map(|g| {
            let lead = if g.is_ray() { Rational::zero() } else { Rational::one() };
            let mut v = vec![lead];
            v.extend(g.coords().iter().cloned());
            Row::ge(scale_to_int(&v))
        })
        .collect()
}

/// Reads homogenized cone generators back as points and rays. A cone with
/// no ray in `y₀ > 0` yields the empty system.
pub(crate) fn dehomogenize(dim: usize, cone: &ConeGens) -> GeneratorSystem {
    let mut gs = GeneratorSystem::new(dim);
    if !cone.rays.iter().any(|r| r[0] > 0.into()) {
        return gs;
    }
    for l in &cone.lines {
        let x = to_rationals(&l[1..]);
        let neg: Vec<Rational> = x.iter().map(|c| -c).collect();
        gs.insert(Generator::ray(x).expect("line is nonzero")).expect("dimension");
        gs.insert(Generator::ray(neg).expect("line is nonzero")).expect("dimension");
    }
    for r in &cone.rays {
        let y0 = Rational::from(r[0].clone());
        let x = to_rationals(&r[1..]);
        let g = if y0.is_zero() {
            Generator::ray(x).expect("ray is nonzero")
        } else {
            Generator::point(x.iter().map(|c| c / &y0).collect())
        };
        gs.insert(g).expect("dimension");
    }
    gs
}

/// Reads the polar cone as constraints `−c·x ≤ z₀`; lines become equalities
/// and the trivial row `(1, 0, …, 0)` is dropped.
pub(crate) fn polar_constraints(dim: usize, cone: &ConeGens) -> ConstraintSystem {
    let to_constraint = |z: &IntVec, rel: Relation| {
        let z = to_rationals(z);
        let expr = LinearExpr::new(z[1..].iter().map(|c| -c).collect());
        if expr.is_zero() {
            None
        } else {
            Some(Constraint::new(expr, rel, z[0].clone()).expect("nonzero expression"))
        }
    };
    let mut cs = ConstraintSystem::new(dim);
    for l in &cone.lines {
        if let Some(c) = to_constraint(l, Relation::Eq) {
            cs.insert(c).expect("dimension");
        }
    }
    for r in &cone.rays {
        if let Some(c) = to_constraint(r, Relation::Le) {
            cs.insert(c).expect("dimension");
        }
    }
    cs.sorted()
}

fn positivity_row(dim: usize) -> Row {
    let mut v: IntVec = vec![0.into(); dim + 1];
    v[0] = 1.into();
    Row::ge(v)
}

pub(crate) fn unsatisfiable(dim: usize) -> ConstraintSystem {
    if dim == 0 {
        ConstraintSystem::new(0)
    } else {
        ConstraintSystem::unsatisfiable(dim)
    }
}

/// The generators of `con(cs)`, minimized. Strict constraints are rejected.
pub fn convert_constraints(cs: &ConstraintSystem) -> Result<GeneratorSystem> {
    if let Some(c) = cs.iter().find(|c| c.is_strict()) {
        return Err(Error::StrictInClosed(c.to_string()));
    }
    let mut rows = vec![positivity_row(cs.dim())];
    rows.extend(constraint_rows(cs.as_slice()));
    Ok(dehomogenize(cs.dim(), &generators(cs.dim() + 1, &rows)))
}

/// The constraints of `gen(gs)`, minimized. An empty system yields an
/// unsatisfiable one; rays without a point are an error.
pub fn convert_generators(gs: &GeneratorSystem) -> Result<ConstraintSystem> {
    if gs.closure_points().next().is_some() {
        return Err(Error::ClosurePointInClosed);
    }
    if !gs.has_point() {
        return if gs.is_empty() { Ok(unsatisfiable(gs.dim())) } else { Err(Error::NoSupportingPoint) };
    }
    Ok(polar_constraints(gs.dim(), &generators(gs.dim() + 1, &generator_rows(gs))))
}

/// A topologically closed polyhedron. Equality is set equality.
#[derive(Clone)]
pub struct CPolyhedron {
    cs: ConstraintSystem,
    gs: GeneratorSystem,
}

impl CPolyhedron {
    pub fn universe(dim: usize) -> Self {
        Self::from_constraints(&ConstraintSystem::new(dim)).expect("no strict constraints")
    }

    pub fn empty(dim: usize) -> Self {
        CPolyhedron { cs: unsatisfiable(dim), gs: GeneratorSystem::new(dim) }
    }

    pub fn from_constraints(cs: &ConstraintSystem) -> Result<Self> {
        let gs = convert_constraints(cs)?;
        Self::from_generators(&gs)
    }

    pub fn from_generators(gs: &GeneratorSystem) -> Result<Self> {
        let cs = convert_generators(gs)?;
        if !gs.has_point() {
            return Ok(Self::empty(gs.dim()));
        }
        // A second pass drops redundant generators.
        let gs = convert_constraints(&cs)?;
        Ok(CPolyhedron { cs, gs })
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

    pub fn contains_point(&self, p: &[Rational]) -> bool {
        !self.is_empty() && p.len() == self.dim() && self.cs.satisfied_by(p)
    }

    /// Whether `g` is a point (or ray) of the polyhedron.
    pub fn subsumes(&self, g: &Generator) -> bool {
        match g.kind() {
            GenKind::Ray => !self.is_empty() && self.cs.iter().all(|c| c.admits_ray(g.coords())),
            _ => self.contains_point(g.coords()),
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
        Self::from_constraints(&cs)
    }

    pub fn some_point(&self) -> Option<PointVec> {
        self.gs.points().next().map(|g| g.coords().to_vec())
    }
}

impl PartialEq for CPolyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.contains(other).unwrap_or(false) && other.contains(self).unwrap_or(false)
    }
}

impl Eq for CPolyhedron {}

impl fmt::Display for CPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cs)
    }
}

impl fmt::Debug for CPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CPolyhedron {} {}", self.cs, self.gs)
    }
}

/// Which input plays the role of the first polyhedron in the witness.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn index(self) -> usize {
        match self {
            Side::First => 1,
            Side::Second => 2,
        }
    }
}

/// A constraint of one input, saturated by its generator, that the other
/// input violates while not subsuming the generator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ClosedWitness {
    pub side: Side,
    pub beta: Constraint,
    pub generator: Generator,
}

impl fmt::Display for ClosedWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}: beta = {}, g = {}", self.side.index(), self.beta, self.generator)
    }
}

/// Whether some generator of `p` lies strictly outside the closed half-space
/// of the inequality `beta`.
pub(crate) fn violates(gs: &GeneratorSystem, beta: &Constraint) -> bool {
    gs.iter().any(|g| {
        let v = beta.expr().eval(g.coords());
        if g.is_ray() {
            v.is_positive()
        } else {
            &v > beta.bound()
        }
    })
}

fn first_witness(p1: &CPolyhedron, p2: &CPolyhedron, side: Side) -> Option<ClosedWitness> {
    let subsumed: Vec<bool> = p1.gs.iter().map(|g| p2.subsumes(g)).collect();
    for beta in p1.cs.expanded() {
        if !violates(&p2.gs, &beta) {
            continue;
        }
        for (g, &sub) in p1.gs.iter().zip(&subsumed) {
            if !sub && saturates(g, &beta).expect("same dimension") {
                return Some(ClosedWitness { side, beta: beta.clone(), generator: g.clone() });
            }
        }
    }
    None
}

fn cost(p: &CPolyhedron) -> usize {
    p.cs.len() * p.gs.len()
}

/// Decides whether the join of two closed polyhedra is their union. The
/// conditions are checked on one input only, chosen to be the cheaper one.
pub fn detect_exact_join_closed(p1: &CPolyhedron, p2: &CPolyhedron) -> Result<Decision<ClosedWitness>> {
    check_dim(p1.dim(), p2.dim())?;
    if p1.is_empty() || p2.is_empty() {
        return Ok(Decision::Exact);
    }
    let found = if cost(p1) > cost(p2) {
        first_witness(p2, p1, Side::Second)
    } else {
        first_witness(p1, p2, Side::First)
    };
    Ok(found.map_or(Decision::Exact, Decision::Inexact))
}

/// A point of `q` violating the inequality `beta`.
pub(crate) fn violating_point(q: &GeneratorSystem, beta: &Constraint) -> Option<PointVec> {
    let exceeds = |p: &[Rational]| &beta.expr().eval(p) > beta.bound();
    if let Some(p) = q.points().map(|g| g.coords()).find(|p| exceeds(p)) {
        return Some(p.to_vec());
    }
    let base = q.points().next()?.coords();
    let r = q.rays().find(|r| beta.expr().eval(r.coords()).is_positive())?.coords();
    let rho = (beta.bound() - &beta.expr().eval(base)) / beta.expr().eval(r) + Rational::one();
    Some(translate(base, r, &rho.max(Rational::one())))
}

/// A point of `from_gs` that lies outside the polyhedron with constraints
/// `outside`, reached along ray `r` from the point of `from_gs` that
/// maximizes `beta`. The returned constraint is `beta` tightened to that
/// maximum, which the point saturates.
pub(crate) fn translated_point(
    from_gs: &GeneratorSystem,
    outside: &ConstraintSystem,
    beta: &Constraint,
    r: &[Rational],
) -> Option<(PointVec, Constraint)> {
    let base = from_gs.points().max_by_key(|g| beta.expr().eval(g.coords()))?.coords();
    let top = beta.expr().eval(base);
    let tight = Constraint::le(beta.expr().clone(), top).ok()?;
    let (c, cr) = outside
        .expanded()
        .into_iter()
        .map(|c| {
            let cr = c.expr().eval(r);
            (c, cr)
        })
        .find(|(_, cr)| cr.is_positive())?;
    let gap = c.bound() - &c.expr().eval(base);
    let rho = (gap / &cr).max(Rational::zero()) + Rational::one();
    Some((translate(base, r, &rho), tight))
}

/// A point in the join and outside both inputs, built from the witness.
pub fn closed_witness_point(p1: &CPolyhedron, p2: &CPolyhedron, w: &ClosedWitness) -> Result<PointVec> {
    check_dim(p1.dim(), p2.dim())?;
    let (pi, pj) = match w.side {
        Side::First => (p1, p2),
        Side::Second => (p2, p1),
    };
    let invalid = || Error::InvalidWitness(w.to_string());
    let (start, beta) = if w.generator.is_ray() {
        translated_point(&pi.gs, &pj.cs, &w.beta, w.generator.coords()).ok_or_else(invalid)?
    } else {
        (w.generator.coords().to_vec(), w.beta.clone())
    };
    let target = violating_point(&pj.gs, &beta).ok_or_else(invalid)?;
    let t = segment_entry(pj.cs.iter(), &start, &target);
    if !t.is_positive() {
        return Err(invalid());
    }
    Ok(lerp(&start, &target, &t.half()))
}

/// Inside the join and outside both inputs.
pub fn verify_closed_witness_point(p1: &CPolyhedron, p2: &CPolyhedron, p: &[Rational]) -> bool {
    let Ok(join) = p1.join(p2) else { return false };
    join.contains_point(p) && !p1.contains_point(p) && !p2.contains_point(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::point_from_ints;
    use crate::parse::parse_system;

    fn poly(text: &str, dim: usize) -> CPolyhedron {
        CPolyhedron::from_constraints(&parse_system(text, dim).unwrap()).unwrap()
    }

    fn pt(v: &[i64]) -> Generator {
        Generator::point(point_from_ints(v))
    }

    fn ray(v: &[i64]) -> Generator {
        Generator::ray(point_from_ints(v)).unwrap()
    }

    #[test]
    fn triangle_vertices() {
        let p = poly("x1 >= 0; x2 >= 0; x1 + x2 <= 2", 2);
        let expect = GeneratorSystem::from_vec(2, vec![pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 2])]).unwrap();
        assert_eq!(p.generators(), &expect);
        assert_eq!(p.constraints().len(), 3);
    }

    #[test]
    fn half_plane_generators() {
        let p = poly("x1 >= 0", 2);
        let expect = GeneratorSystem::from_vec(2, vec![pt(&[0, 0]), ray(&[1, 0]), ray(&[0, 1]), ray(&[0, -1])]).unwrap();
        assert_eq!(p.generators(), &expect);
        assert_eq!(p.constraints().to_string(), "{ -x1 <= 0 }");
    }

    #[test]
    fn square_and_redundancy() {
        let p = poly("x1 >= 0; x1 <= 1; x2 >= 0; x2 <= 1; x1 + x2 <= 5", 2);
        assert_eq!(p.generators().len(), 4);
        assert_eq!(p.constraints().len(), 4);
    }

    #[test]
    fn equalities_survive() {
        let p = poly("x1 - x2 = 0; x1 >= 0; x1 <= 1", 2);
        assert_eq!(p.generators().len(), 2);
        assert!(p.constraints().iter().any(Constraint::is_equality));
        let q = poly("x1 + x2 <= 1; x1 + x2 >= 1", 2);
        assert_eq!(q.constraints().iter().filter(|c| c.is_equality()).count(), 1);
    }

    #[test]
    fn empty_and_universe() {
        let e = poly("x1 <= 0; x1 >= 1", 2);
        assert!(e.is_empty());
        let u = CPolyhedron::universe(2);
        assert!(u.constraints().is_empty());
        assert_eq!(u.generators().len(), 5);
        let p = poly("x1 + x2 <= 1", 2);
        assert_eq!(p.meet(&u).unwrap(), p);
        assert_eq!(p.join(&e).unwrap(), p);
    }

    #[test]
    fn example_join_and_detection() {
        let p1 = poly("x1 >= 0; x2 >= 0; x1 + x2 <= 2", 2);
        let p2 = poly("x1 <= 2; x2 >= 0; x1 - x2 >= 0", 2);
        let join = p1.join(&p2).unwrap();
        assert_eq!(join, poly("x1 >= 0; x2 >= 0; x1 <= 2; x2 <= 2", 2));
        assert!(join.contains(&p1).unwrap());
        let d = detect_exact_join_closed(&p1, &p2).unwrap();
        let w = d.witness().unwrap().clone();
        assert_eq!(w.side, Side::First);
        assert_eq!(w.beta.to_string(), "x1 + x2 <= 2");
        assert_eq!(w.generator, pt(&[0, 2]));
        let p = closed_witness_point(&p1, &p2, &w).unwrap();
        assert!(verify_closed_witness_point(&p1, &p2, &p));
    }

    #[test]
    fn shared_facet_is_exact() {
        let a = poly("x1 >= 0; x1 <= 1; x2 >= 0; x2 <= 1", 2);
        let b = poly("x1 >= 1; x1 <= 2; x2 >= 0; x2 <= 1", 2);
        assert!(detect_exact_join_closed(&a, &b).unwrap().is_exact());
        assert!(detect_exact_join_closed(&a, &a).unwrap().is_exact());
    }

    #[test]
    fn ray_witness_is_certified() {
        let a = poly("x1 >= 0; x1 <= 1; x2 >= 0", 2);
        let b = poly("x1 >= 2; x1 <= 3; x2 >= 0; x2 <= 1", 2);
        let d = detect_exact_join_closed(&a, &b).unwrap();
        let w = d.witness().unwrap().clone();
        let p = closed_witness_point(&a, &b, &w).unwrap();
        assert!(verify_closed_witness_point(&a, &b, &p), "{w} {p:?}");
        let d = detect_exact_join_closed(&b, &a).unwrap();
        let w = d.witness().unwrap().clone();
        let p = closed_witness_point(&b, &a, &w).unwrap();
        assert!(verify_closed_witness_point(&b, &a, &p), "{w} {p:?}");
    }

    #[test]
    fn rejects_strict_and_closure_points() {
        let cs = parse_system("x1 < 1", 1).unwrap();
        assert!(matches!(CPolyhedron::from_constraints(&cs), Err(Error::StrictInClosed(_))));
        let gs = GeneratorSystem::from_vec(1, vec![Generator::closure_point(point_from_ints(&[0]))]).unwrap();
        assert_eq!(CPolyhedron::from_generators(&gs), Err(Error::ClosurePointInClosed));
        let gs = GeneratorSystem::from_vec(1, vec![ray(&[1])]).unwrap();
        assert_eq!(CPolyhedron::from_generators(&gs), Err(Error::NoSupportingPoint));
    }
}
