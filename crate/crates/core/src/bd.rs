//! Bounded-difference shapes.
//!
//! A shape over `x1..xn` is a graph over nodes `0..=n` where node 0 stands for
//! the constant zero. An arc `(i, j)` of weight `w` encodes `xi - xj ≤ w`,
//! with `x0 = 0`, so `(i, 0)` is an upper bound on `xi` and `(0, j)` a lower
//! bound on `xj`.

use std::fmt;

use crate::decision::Decision;
use crate::error::{check_dim, Error, Result};
use crate::graph::WeightedGraph;
use crate::linear::{Constraint, ConstraintSystem, LinearExpr, PointVec, Relation};
use crate::rational::{ExtendedRational, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Graphs {
    closed: WeightedGraph,
    reduced: WeightedGraph,
}

/// A rational BD shape. Empty shapes carry no graph.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BdShape {
    dim: usize,
    graphs: Option<Graphs>,
}

/// An integer BD shape: every finite weight is integral and the shape denotes
/// the integer points satisfying the constraints.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntBdShape(BdShape);

/// The arc `(i, j)` (or the pair of arcs for an equality) for a constraint in
/// BD form.
fn bd_arcs(c: &Constraint) -> Result<Vec<(usize, usize, Rational)>> {
    let bad = || Error::NotBdForm(c.to_string());
    if c.is_strict() {
        return Err(bad());
    }
    let support = c.expr().support();
    let one = Rational::one();
    let arc = |coeffs: &[Rational], b: &Rational| -> Result<(usize, usize, Rational)> {
        match support.as_slice() {
            [v] if coeffs[*v].abs() == one => {
                if coeffs[*v].is_positive() {
                    Ok((v + 1, 0, b.clone()))
                } else {
                    Ok((0, v + 1, b.clone()))
                }
            }
            [u, v] if &coeffs[*u] + &coeffs[*v] == Rational::zero() && coeffs[*u].abs() == one => {
                if coeffs[*u].is_positive() {
                    Ok((u + 1, v + 1, b.clone()))
                } else {
                    Ok((v + 1, u + 1, b.clone()))
                }
            }
            _ => Err(bad()),
        }
    };
    let mut out = vec![arc(c.coeffs(), c.bound())?];
    if c.relation() == Relation::Eq {
        let neg: Vec<Rational> = c.coeffs().iter().map(|x| -x).collect();
        out.push(arc(&neg, &-c.bound())?);
    }
    Ok(out)
}

/// The constraint encoded by arc `(i, j)` with weight `w`.
pub fn arc_constraint(dim: usize, i: usize, j: usize, w: &Rational) -> Constraint {
    let mut e = vec![Rational::zero(); dim];
    if i > 0 {
        e[i - 1] = Rational::one();
    }
    if j > 0 {
        e[j - 1] = -Rational::one();
    }
    Constraint::le(LinearExpr::new(e), w.clone()).expect("arc between distinct nodes")
}

fn graph_from_constraints(cs: &ConstraintSystem) -> Result<WeightedGraph> {
    let mut g = WeightedGraph::new(cs.dim() + 1);
    for c in cs {
        for (i, j, w) in bd_arcs(c)? {
            g.tighten(i, j, ExtendedRational::Finite(w));
        }
    }
    Ok(g)
}

fn floor_graph(g: &WeightedGraph) -> WeightedGraph {
    let n = g.node_count();
    let mut out = g.clone();
    for i in 0..n {
        for j in 0..n {
            if let ExtendedRational::Finite(v) = g.get(i, j) {
                out.set(i, j, ExtendedRational::Finite(v.floor()));
            }
        }
    }
    out
}

/// Adds arc `(u, v)` of weight `c` to a closed graph, keeping it closed.
fn add_arc_closed(g: &mut WeightedGraph, u: usize, v: usize, c: &Rational) {
    let n = g.node_count();
    if g.get(u, v) <= &ExtendedRational::Finite(c.clone()) {
        return;
    }
    let to_u: Vec<ExtendedRational> = (0..n).map(|a| g.get(a, u).clone()).collect();
    let from_v: Vec<ExtendedRational> = (0..n).map(|b| g.get(v, b).clone()).collect();
    for a in 0..n {
        let Some(au) = to_u[a].as_finite() else { continue };
        let head = au + c;
        for b in 0..n {
            if let Some(vb) = from_v[b].as_finite() {
                g.tighten(a, b, ExtendedRational::Finite(&head + vb));
            }
        }
    }
}

impl BdShape {
    pub fn universe(dim: usize) -> Self {
        Self::from_graph(dim, WeightedGraph::new(dim + 1))
    }

    pub fn empty(dim: usize) -> Self {
        BdShape { dim, graphs: None }
    }

    pub fn from_constraints(cs: &ConstraintSystem) -> Result<Self> {
        Ok(Self::from_graph(cs.dim(), graph_from_constraints(cs)?))
    }

    /// Closes and reduces `g`, a graph over `dim + 1` nodes.
    pub fn from_graph(dim: usize, g: WeightedGraph) -> Self {
        assert_eq!(g.node_count(), dim + 1, "graph must have dim + 1 nodes");
        match g.closure() {
            Ok(closed) => {
                let reduced = closed.reduction();
                BdShape { dim, graphs: Some(Graphs { closed, reduced }) }
            }
            Err(_) => Self::empty(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_none()
    }

    pub fn closed(&self) -> Option<&WeightedGraph> {
        self.graphs.as_ref().map(|g| &g.closed)
    }

    pub fn reduced(&self) -> Option<&WeightedGraph> {
        self.graphs.as_ref().map(|g| &g.reduced)
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        let Some(g) = self.closed() else { return false };
        if p.len() != self.dim {
            return false;
        }
        let val = |i: usize| if i == 0 { Rational::zero() } else { p[i - 1].clone() };
        g.arcs().into_iter().all(|(i, j)| {
            ExtendedRational::Finite(&val(i) - &val(j)) <= *g.get(i, j)
        })
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        check_dim(self.dim, other.dim)?;
        Ok(match (self.closed(), other.closed()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a.leq(b),
        })
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        Ok(match (self.closed(), other.closed()) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            (Some(a), Some(b)) => Self::from_graph(self.dim, a.lub(b)?),
        })
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        Ok(match (self.closed(), other.closed()) {
            (Some(a), Some(b)) => Self::from_graph(self.dim, a.glb(b)?),
            _ => Self::empty(self.dim),
        })
    }

    /// The constraints of the reduced graph.
    pub fn to_constraints(&self) -> ConstraintSystem {
        let Some(r) = self.reduced() else {
            return ConstraintSystem::unsatisfiable(self.dim);
        };
        let mut cs = ConstraintSystem::new(self.dim);
        for (i, j) in r.arcs() {
            let w = r.get(i, j).as_finite().expect("arc is finite");
            cs.insert(arc_constraint(self.dim, i, j, w)).expect("same dimension");
        }
        cs
    }

    /// A point of the shape, integral when all weights are.
    pub fn some_point(&self) -> Option<PointVec> {
        let mut g = self.closed()?.clone();
        let mut p = Vec::with_capacity(self.dim);
        for v in 1..=self.dim {
            let val = match (g.get(0, v).as_finite(), g.get(v, 0).as_finite()) {
                (Some(lo), _) => -lo,
                (None, Some(hi)) => hi.clone(),
                (None, None) => Rational::zero(),
            };
            add_arc_closed(&mut g, v, 0, &val);
            add_arc_closed(&mut g, 0, v, &-&val);
            p.push(val);
        }
        Some(p)
    }
}

impl IntBdShape {
    pub fn universe(dim: usize) -> Self {
        IntBdShape(BdShape::universe(dim))
    }

    pub fn empty(dim: usize) -> Self {
        IntBdShape(BdShape::empty(dim))
    }

    /// Non-integral bounds are rounded down, which preserves the integer points.
    pub fn from_constraints(cs: &ConstraintSystem) -> Result<Self> {
        Ok(Self::from_graph(cs.dim(), graph_from_constraints(cs)?))
    }

    pub fn from_graph(dim: usize, g: WeightedGraph) -> Self {
        IntBdShape(BdShape::from_graph(dim, floor_graph(&g)))
    }

    pub fn as_rational(&self) -> &BdShape {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn closed(&self) -> Option<&WeightedGraph> {
        self.0.closed()
    }

    pub fn reduced(&self) -> Option<&WeightedGraph> {
        self.0.reduced()
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        p.iter().all(Rational::is_integer) && self.0.contains(p)
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.0.is_subset(&other.0)
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.0.join(&other.0).map(IntBdShape)
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.0.meet(&other.0).map(IntBdShape)
    }

    pub fn to_constraints(&self) -> ConstraintSystem {
        self.0.to_constraints()
    }

    pub fn some_point(&self) -> Option<PointVec> {
        self.0.some_point()
    }
}

impl fmt::Display for BdShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_constraints())
    }
}

impl fmt::Display for IntBdShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arc `(i, j)` of `R₁` and arc `(k, l)` of `R₂` satisfying both conditions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BdWitness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl BdWitness {
    /// `i = l` and `j = k`: the inputs are disjoint.
    pub fn is_degenerate(&self) -> bool {
        self.i == self.l && self.j == self.k
    }
}

impl fmt::Display for BdWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(i,j,k,l)=({},{},{},{})", self.i, self.j, self.k, self.l)?;
        if self.is_degenerate() {
            f.write_str(" disjoint")?;
        }
        Ok(())
    }
}

fn fin(v: &ExtendedRational) -> &Rational {
    v.as_finite().expect("finite weight")
}

/// Evaluates the two conditions of the criterion for an arbitrary index tuple
/// over the closed graphs `g1`, `g2`. Condition 1 is
/// `w₁(i,j) < w₂(i,j) ∧ w₂(k,l) < w₁(k,l)`; condition 2 is
/// `w₁(i,j) + w₂(k,l) + s < w(i,l) + w(k,j)` with `w` the lub and slack `s`
/// equal to 0 (rational) or `≤` with slack 2 (integer).
pub fn bd_conditions(g1: &WeightedGraph, g2: &WeightedGraph, t: BdWitness, integer: bool) -> (bool, bool) {
    let BdWitness { i, j, k, l } = t;
    let (a, b) = (g1.get(i, j), g2.get(k, l));
    let cond1 = a < g2.get(i, j) && b < g1.get(k, l);
    let cond2 = if a.is_finite() && b.is_finite() {
        let lhs = fin(a) + fin(b);
        let rhs = g1.get(i, l).clone().max(g2.get(i, l).clone()).add(&g1.get(k, j).clone().max(g2.get(k, j).clone()));
        if integer {
            ExtendedRational::Finite(lhs + Rational::from_int(2)) <= rhs
        } else {
            ExtendedRational::Finite(lhs) < rhs
        }
    } else {
        false
    };
    (cond1, cond2)
}

fn detect(b1: &BdShape, b2: &BdShape, integer: bool) -> Result<Decision<BdWitness>> {
    check_dim(b1.dim, b2.dim)?;
    let (Some(x), Some(y)) = (&b1.graphs, &b2.graphs) else {
        return Ok(Decision::Exact);
    };
    let (g1, g2) = (&x.closed, &y.closed);
    if g1.leq(g2) || g2.leq(g1) {
        return Ok(Decision::Exact);
    }
    let w = g1.lub(g2)?;
    let first: Vec<(usize, usize)> = x.reduced.arcs().into_iter().filter(|&(i, j)| g1.get(i, j) < g2.get(i, j)).collect();
    let second: Vec<(usize, usize)> = y.reduced.arcs().into_iter().filter(|&(k, l)| g2.get(k, l) < g1.get(k, l)).collect();
    let two = Rational::from_int(2);
    for &(i, j) in &first {
        let a = fin(g1.get(i, j));
        for &(k, l) in &second {
            let rhs = w.get(i, l).add(w.get(k, j));
            let mut lhs = a + fin(g2.get(k, l));
            if integer {
                lhs += &two;
            }
            let lhs = ExtendedRational::Finite(lhs);
            let holds = if integer { lhs <= rhs } else { lhs < rhs };
            if holds {
                return Ok(Decision::Inexact(BdWitness { i, j, k, l }));
            }
        }
    }
    Ok(Decision::Exact)
}

/// Decides whether the join of two rational BD shapes is their union.
pub fn detect_exact_join_bd(b1: &BdShape, b2: &BdShape) -> Result<Decision<BdWitness>> {
    detect(b1, b2, false)
}

/// Decides whether the join of two integer BD shapes is their union over ℤⁿ.
pub fn detect_exact_join_int_bd(b1: &IntBdShape, b2: &IntBdShape) -> Result<Decision<BdWitness>> {
    detect(&b1.0, &b2.0, true)
}

/// The slack ε of the witness construction.
fn epsilon(g1: &WeightedGraph, g2: &WeightedGraph, w: &WeightedGraph, t: BdWitness, integer: bool) -> Rational {
    if integer {
        return Rational::one();
    }
    let BdWitness { i, j, k, l } = t;
    let (a, b) = (fin(g1.get(i, j)), fin(g2.get(k, l)));
    let mut terms = Vec::new();
    if let Some(v) = w.get(i, j).as_finite() {
        terms.push(v - a);
    }
    if let Some(v) = w.get(k, l).as_finite() {
        terms.push(v - b);
    }
    if let Some(v) = w.get(i, l).add(w.get(k, j)).as_finite() {
        terms.push((v - a - b).half());
    }
    terms.into_iter().min().unwrap_or_else(Rational::one)
}

fn separating_graph(b1: &BdShape, b2: &BdShape, t: BdWitness, integer: bool) -> Result<WeightedGraph> {
    check_dim(b1.dim, b2.dim)?;
    let (Some(g1), Some(g2)) = (b1.closed(), b2.closed()) else {
        return Err(Error::InvalidWitness("an input is empty".into()));
    };
    let n = b1.dim + 1;
    let BdWitness { i, j, k, l } = t;
    if [i, j, k, l].iter().any(|&v| v >= n) || i == j || k == l {
        return Err(Error::InvalidWitness(format!("{t} is not a pair of arcs")));
    }
    if bd_conditions(g1, g2, t, integer) != (true, true) {
        return Err(Error::InvalidWitness(format!("{t} does not satisfy both conditions")));
    }
    let w = g1.lub(g2)?;
    let eps = epsilon(g1, g2, &w, t, integer);
    let mut g = w;
    g.set(j, i, ExtendedRational::Finite(-fin(g1.get(i, j)) - &eps));
    g.set(l, k, ExtendedRational::Finite(-fin(g2.get(k, l)) - &eps));
    Ok(g)
}

/// The witness shape `bd′ ⊆ bd₁ ⊎ bd₂` disjoint from both inputs, built from
/// the lub by adding `xj − xi ≤ −w₁(i,j) − ε` and `xl − xk ≤ −w₂(k,l) − ε`.
pub fn build_separating_witness(b1: &BdShape, b2: &BdShape, t: BdWitness) -> Result<BdShape> {
    let g = separating_graph(b1, b2, t, false)?;
    Ok(BdShape::from_graph(b1.dim, g))
}

/// Integer counterpart of [`build_separating_witness`], with `ε = 1`.
pub fn build_separating_witness_int(b1: &IntBdShape, b2: &IntBdShape, t: BdWitness) -> Result<IntBdShape> {
    let g = separating_graph(&b1.0, &b2.0, t, true)?;
    Ok(IntBdShape::from_graph(b1.dim(), g))
}

/// Non-empty, inside the join, and disjoint from both inputs.
pub fn verify_bd_witness(b1: &BdShape, b2: &BdShape, witness: &BdShape) -> bool {
    let Ok(join) = b1.join(b2) else { return false };
    !witness.is_empty()
        && witness.is_subset(&join).unwrap_or(false)
        && witness.meet(b1).is_ok_and(|m| m.is_empty())
        && witness.meet(b2).is_ok_and(|m| m.is_empty())
}

/// Integer BD consistency coincides with rational consistency for integral
/// weights, so the rational check applies.
pub fn verify_int_bd_witness(b1: &IntBdShape, b2: &IntBdShape, witness: &IntBdShape) -> bool {
    verify_bd_witness(&b1.0, &b2.0, &witness.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_system;

    fn bds(text: &str, dim: usize) -> BdShape {
        BdShape::from_constraints(&parse_system(text, dim).unwrap()).unwrap()
    }

    fn ibds(text: &str, dim: usize) -> IntBdShape {
        IntBdShape::from_constraints(&parse_system(text, dim).unwrap()).unwrap()
    }

    const BD1: &str = "x1 >= 0; x1 <= 3; x2 >= 0; x2 <= 2";
    const BD2: &str = "x2 >= 0; x2 <= 2; x1 - x2 >= 0; x1 - x2 <= 3";
    const BD3: &str = "x1 >= 0; x1 <= 3; x2 >= 0; x2 <= 2; x1 - x2 <= 2";
    const BD4: &str = "x1 >= 3; x1 <= 6; x2 >= 0; x2 <= 2";

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn construction_examples() {
        let b = bds(BD1, 2);
        assert_eq!(b.closed().unwrap().get(1, 2), &ExtendedRational::finite(3));
        assert!(bds("x1 <= 0; -x1 <= -1", 1).is_empty());
        let strict = parse_system("x1 - x2 < 1", 2).unwrap();
        assert!(matches!(BdShape::from_constraints(&strict), Err(Error::NotBdForm(_))));
        let oct = parse_system("x1 + x2 <= 1", 2).unwrap();
        assert!(matches!(BdShape::from_constraints(&oct), Err(Error::NotBdForm(_))));
    }

    #[test]
    fn fig4a_is_exact_and_tuples_fail_as_stated() {
        let (b1, b2) = (bds(BD1, 2), bds(BD2, 2));
        assert!(detect_exact_join_bd(&b1, &b2).unwrap().is_exact());
        let (g1, g2) = (b1.closed().unwrap(), b2.closed().unwrap());
        let t = BdWitness { i: 1, j: 0, k: 2, l: 1 };
        assert_eq!(bd_conditions(g1, g2, t, false), (true, false));
        let t = BdWitness { i: 1, j: 1, k: 0, l: 2 };
        assert_eq!(bd_conditions(g1, g2, t, false), (false, true));
    }

    #[test]
    fn fig4b_rational_and_integer() {
        let (b3, b4) = (bds(BD3, 2), bds(BD4, 2));
        let d = detect_exact_join_bd(&b3, &b4).unwrap();
        let t = BdWitness { i: 1, j: 2, k: 0, l: 1 };
        assert_eq!(d, Decision::Inexact(t));
        let w = build_separating_witness(&b3, &b4, t).unwrap();
        assert!(w.contains(&[Rational::new(5, 2), q(0)]));
        assert!(verify_bd_witness(&b3, &b4, &w));
        assert!(build_separating_witness(&b3, &b4, BdWitness { i: 1, j: 0, k: 0, l: 1 }).is_err());

        let (i3, i4) = (ibds(BD3, 2), ibds(BD4, 2));
        assert!(detect_exact_join_int_bd(&i3, &i4).unwrap().is_exact());
        let (g1, g2) = (i3.closed().unwrap(), i4.closed().unwrap());
        assert_eq!(bd_conditions(g1, g2, t, true), (true, false));
    }

    #[test]
    fn self_join_and_containment_are_exact() {
        let b = bds(BD3, 2);
        assert!(detect_exact_join_bd(&b, &b).unwrap().is_exact());
        let big = bds("x1 >= -1; x1 <= 7; x2 >= -1; x2 <= 3", 2);
        assert!(detect_exact_join_bd(&b, &big).unwrap().is_exact());
        assert!(detect_exact_join_bd(&BdShape::empty(2), &b).unwrap().is_exact());
    }

    #[test]
    fn some_point_lies_inside() {
        for text in [BD1, BD2, BD3, BD4, "x1 - x2 <= -1; x2 - x3 <= 0", "x1 <= 2"] {
            let b = bds(text, 3);
            let p = b.some_point().unwrap();
            assert!(b.contains(&p), "{text}: {p:?}");
            assert!(p.iter().all(Rational::is_integer));
        }
    }

    #[test]
    fn constraints_round_trip() {
        let b = bds(BD3, 2);
        let again = BdShape::from_constraints(&b.to_constraints()).unwrap();
        assert_eq!(again, b);
    }

    #[test]
    fn integer_floors_bounds() {
        let b = ibds("2*x1 <= 3", 1);
        assert_eq!(b.closed().unwrap().get(1, 0), &ExtendedRational::finite(1));
    }
}
