//! Octagonal shapes over signed nodes.
//!
//! Variable `x_{k+1}` has a positive node `2k` and a negative node `2k+1`;
//! `ī` is the node with the opposite sign of `i`. Arc `(i, j)` of weight `w`
//! encodes `π̃ᵢ(x) − π̃ⱼ(x) ≤ w`, so `x1 + x2 ≤ b` is arc `(0, 3)` and the unary
//! bound `x1 ≤ b` is arc `(0, 1)` with weight `2b`. Graphs are coherent by
//! construction: `(i, j)` and `(j̄, ī)` share a single storage slot.

use std::fmt;

use crate::decision::Decision;
use crate::error::{check_dim, Error, Result};
use crate::graph::{floyd_warshall, Inconsistent};
use crate::linear::{Constraint, ConstraintSystem, LinearExpr, PointVec, Relation};
use crate::rational::{ExtendedRational, PlusInfinity, Rational};

#[inline]
pub fn bar(i: usize) -> usize {
    i ^ 1
}

#[inline]
fn slot(i: usize, j: usize) -> usize {
    if j <= (i | 1) {
        j + ((i + 1) * (i + 1)) / 2
    } else {
        slot(bar(j), bar(i))
    }
}

/// A coherent octagonal graph over `2n` nodes in half-matrix storage.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OctGraph {
    dim: usize,
    w: Vec<ExtendedRational>,
}

impl OctGraph {
    /// No arcs, zero diagonal.
    pub fn new(dim: usize) -> Self {
        let mut g = OctGraph { dim, w: vec![PlusInfinity; 2 * dim * (dim + 1)] };
        for i in 0..2 * dim {
            g.set(i, i, ExtendedRational::zero());
        }
        g
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node_count(&self) -> usize {
        2 * self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtendedRational {
        &self.w[slot(i, j)]
    }

    /// Sets `w(i,j)` and, through shared storage, `w(j̄,ī)`.
    pub fn set(&mut self, i: usize, j: usize, v: ExtendedRational) {
        self.w[slot(i, j)] = v;
    }

    pub fn tighten(&mut self, i: usize, j: usize, v: ExtendedRational) {
        let s = &mut self.w[slot(i, j)];
        if v < *s {
            *s = v;
        }
    }

    /// Ordered pairs `i ≠ j` with finite weight; both members of a coherent
    /// pair are listed.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let m = self.node_count();
        let mut out = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if i != j && self.get(i, j).is_finite() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// One representative per coherent pair of finite arcs.
    pub fn arc_pairs(&self) -> Vec<(usize, usize)> {
        self.arcs().into_iter().filter(|&(i, j)| slot(i, j) == slot_canonical(i, j)).collect()
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.w.iter().zip(&other.w).all(|(a, b)| a <= b)
    }

    pub fn lub(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let w = self.w.iter().zip(&other.w).map(|(a, b)| a.clone().max(b.clone())).collect();
        Ok(OctGraph { dim: self.dim, w })
    }

    pub fn glb(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let w = self.w.iter().zip(&other.w).map(|(a, b)| a.clone().min(b.clone())).collect();
        Ok(OctGraph { dim: self.dim, w })
    }

    /// The full `2n × 2n` matrix, row-major.
    pub fn to_dense(&self) -> Vec<ExtendedRational> {
        let m = self.node_count();
        let mut out = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }

    /// Reads back a coherent dense matrix.
    fn from_dense(dim: usize, d: &[ExtendedRational]) -> Self {
        let m = 2 * dim;
        let mut g = OctGraph { dim, w: vec![PlusInfinity; 2 * dim * (dim + 1)] };
        for i in 0..m {
            for j in 0..=(i | 1).min(m - 1) {
                g.set(i, j, d[i * m + j].clone());
            }
        }
        g
    }

    pub fn is_integral(&self) -> bool {
        self.w.iter().all(ExtendedRational::is_integral)
    }

    fn floored(&self) -> Self {
        let w = self
            .w
            .iter()
            .map(|v| match v {
                ExtendedRational::Finite(x) => ExtendedRational::Finite(x.floor()),
                PlusInfinity => PlusInfinity,
            })
            .collect();
        OctGraph { dim: self.dim, w }
    }

    /// The strongly closed graph: shortest-path closure followed by one
    /// strengthening pass `w(i,j) := min(w(i,j), (w(i,ī) + w(j̄,j)) / 2)`.
    pub fn strong_closure(&self) -> std::result::Result<OctGraph, Inconsistent> {
        let m = self.node_count();
        let mut d = self.to_dense();
        floyd_warshall(&mut d, m)?;
        strengthen(&mut d, m);
        Ok(Self::from_dense(self.dim, &d))
    }

    /// The tightly closed graph for integral weights: shortest-path closure,
    /// rounding of every `w(i,ī)` down to an even number, a check for
    /// `w(i,ī) + w(ī,i) < 0`, then strengthening.
    pub fn tight_closure(&self) -> std::result::Result<OctGraph, Inconsistent> {
        assert!(self.is_integral(), "tight closure needs integral weights");
        let m = self.node_count();
        let mut d = self.to_dense();
        floyd_warshall(&mut d, m)?;
        let two = Rational::from_int(2);
        for i in 0..m {
            if let ExtendedRational::Finite(v) = &d[i * m + bar(i)] {
                let even = &(v / &two).floor() * &two;
                d[i * m + bar(i)] = ExtendedRational::Finite(even);
            }
        }
        for i in 0..m {
            if d[i * m + bar(i)].add(&d[bar(i) * m + i]) < ExtendedRational::zero() {
                return Err(Inconsistent);
            }
        }
        strengthen(&mut d, m);
        Ok(Self::from_dense(self.dim, &d))
    }

    pub fn is_strongly_closed(&self) -> bool {
        self.strong_closure().as_ref() == Ok(self)
    }

    /// Checks `w(i,j) = w(j̄,ī)` on the dense view.
    pub fn is_coherent(&self) -> bool {
        let m = self.node_count();
        let d = self.to_dense();
        (0..m).all(|i| (0..m).all(|j| d[i * m + j] == d[bar(j) * m + bar(i)]))
    }
}

fn slot_canonical(i: usize, j: usize) -> usize {
    if j <= (i | 1) {
        slot(i, j)
    } else {
        usize::MAX
    }
}

fn strengthen(d: &mut [ExtendedRational], m: usize) {
    let unary: Vec<ExtendedRational> = (0..m).map(|i| d[i * m + bar(i)].clone()).collect();
    for i in 0..m {
        let Some(a) = unary[i].as_finite() else { continue };
        for j in 0..m {
            if let Some(b) = unary[bar(j)].as_finite() {
                let cand = ExtendedRational::Finite((a + b).half());
                if cand < d[i * m + j] {
                    d[i * m + j] = cand;
                }
            }
        }
    }
    for i in 0..m {
        d[i * m + i] = ExtendedRational::zero();
    }
}

impl fmt::Debug for OctGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OctGraph({}) {{", self.dim)?;
        for (i, j) in self.arc_pairs() {
            write!(f, " ({i},{j}):{}", self.get(i, j))?;
        }
        f.write_str(" }")
    }
}

fn node(positive: bool, var: usize) -> usize {
    if positive {
        2 * var
    } else {
        2 * var + 1
    }
}

/// Arcs for one constraint; an equality yields the arcs of both inequalities.
fn oct_arcs(c: &Constraint) -> Result<Vec<(usize, usize, Rational)>> {
    let bad = || Error::NotOctagonalForm(c.to_string());
    if c.is_strict() {
        return Err(bad());
    }
    let support = c.expr().support();
    let one = Rational::one();
    let arc = |coeffs: &[Rational], b: &Rational| -> Result<(usize, usize, Rational)> {
        match support.as_slice() {
            [p] if coeffs[*p].abs() == one => {
                let s = coeffs[*p].is_positive();
                Ok((node(s, *p), node(!s, *p), b + b))
            }
            [p, q] if coeffs[*p].abs() == one && coeffs[*q].abs() == one => {
                let (sp, sq) = (coeffs[*p].is_positive(), coeffs[*q].is_positive());
                Ok((node(sp, *p), node(!sq, *q), b.clone()))
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

fn graph_from_constraints(cs: &ConstraintSystem) -> Result<OctGraph> {
    let mut g = OctGraph::new(cs.dim());
    for c in cs {
        for (i, j, w) in oct_arcs(c)? {
            g.tighten(i, j, ExtendedRational::Finite(w));
        }
    }
    Ok(g)
}

/// The constraint encoded by arc `(i, j)` of weight `w`.
pub fn arc_constraint(dim: usize, i: usize, j: usize, w: &Rational) -> Constraint {
    let mut e = vec![Rational::zero(); dim];
    let sign = |n: usize| if n.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    e[i / 2] += &sign(i);
    e[j / 2] -= &sign(j);
    Constraint::le(LinearExpr::new(e), w.clone()).expect("arc between distinct nodes of distinct sign pairs")
}

fn value(p: &[Rational], r: usize) -> Rational {
    if r.is_multiple_of(2) {
        p[r / 2].clone()
    } else {
        -&p[r / 2]
    }
}

/// Greedy removal of coherent arc pairs whose weight is re-derived by the
/// given closure. The result has no removable pair.
fn greedy_reduction(
    closed: &OctGraph,
    close: impl Fn(&OctGraph) -> std::result::Result<OctGraph, Inconsistent>,
) -> OctGraph {
    let mut r = closed.clone();
    for (i, j) in closed.arc_pairs() {
        let saved = r.get(i, j).clone();
        r.set(i, j, PlusInfinity);
        let keep = match close(&r) {
            Ok(c) => c.get(i, j) != &saved,
            Err(_) => true,
        };
        if keep {
            r.set(i, j, saved);
        }
    }
    r
}

/// A reduction for a strongly closed graph.
pub fn strong_reduction(g: &OctGraph) -> OctGraph {
    greedy_reduction(g, OctGraph::strong_closure)
}

/// A reduction for a tightly closed graph.
pub fn tight_reduction(g: &OctGraph) -> OctGraph {
    greedy_reduction(g, OctGraph::tight_closure)
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Graphs {
    closed: OctGraph,
    reduced: OctGraph,
}

macro_rules! oct_shape {
    ($name:ident, $close:expr, $reduce:expr, $prep:expr, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, PartialEq, Eq, Hash, Debug)]
        pub struct $name {
            dim: usize,
            graphs: Option<Graphs>,
        }

        impl $name {
            pub fn universe(dim: usize) -> Self {
                Self::from_graph(OctGraph::new(dim))
            }

            pub fn empty(dim: usize) -> Self {
                $name { dim, graphs: None }
            }

            pub fn from_constraints(cs: &ConstraintSystem) -> Result<Self> {
                Ok(Self::from_graph(graph_from_constraints(cs)?))
            }

            pub fn from_graph(g: OctGraph) -> Self {
                let prep: fn(&OctGraph) -> OctGraph = $prep;
                let g = prep(&g);
                let close: fn(&OctGraph) -> std::result::Result<OctGraph, Inconsistent> = $close;
                let reduce: fn(&OctGraph) -> OctGraph = $reduce;
                match close(&g) {
                    Ok(closed) => {
                        let reduced = reduce(&closed);
                        $name { dim: g.dim(), graphs: Some(Graphs { closed, reduced }) }
                    }
                    Err(_) => Self::empty(g.dim()),
                }
            }

            pub fn dim(&self) -> usize {
                self.dim
            }

            pub fn is_empty(&self) -> bool {
                self.graphs.is_none()
            }

            pub fn closed(&self) -> Option<&OctGraph> {
                self.graphs.as_ref().map(|g| &g.closed)
            }

            pub fn reduced(&self) -> Option<&OctGraph> {
                self.graphs.as_ref().map(|g| &g.reduced)
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
                    (Some(a), Some(b)) => Self::from_graph(a.lub(b)?),
                })
            }

            pub fn meet(&self, other: &Self) -> Result<Self> {
                check_dim(self.dim, other.dim)?;
                Ok(match (self.closed(), other.closed()) {
                    (Some(a), Some(b)) => Self::from_graph(a.glb(b)?),
                    _ => Self::empty(self.dim),
                })
            }

            /// The constraints of the reduced graph.
            pub fn to_constraints(&self) -> ConstraintSystem {
                let Some(r) = self.reduced() else {
                    return ConstraintSystem::unsatisfiable(self.dim);
                };
                let mut cs = ConstraintSystem::new(self.dim);
                for (i, j) in r.arc_pairs() {
                    let w = r.get(i, j).as_finite().expect("arc is finite");
                    let w = if j == bar(i) { w.half() } else { w.clone() };
                    let c = if j == bar(i) {
                        let mut e = vec![Rational::zero(); self.dim];
                        e[i / 2] = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
                        Constraint::le(LinearExpr::new(e), w).expect("unary constraint")
                    } else {
                        arc_constraint(self.dim, i, j, &w)
                    };
                    cs.insert(c).expect("same dimension");
                }
                cs
            }

            /// Membership of a rational point in the rational reading of the
            /// constraints.
            fn satisfies_graph(&self, p: &[Rational]) -> bool {
                let Some(g) = self.closed() else { return false };
                p.len() == self.dim
                    && g.arcs().into_iter().all(|(i, j)| {
                        ExtendedRational::Finite(&value(p, i) - &value(p, j)) <= *g.get(i, j)
                    })
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.to_constraints())
            }
        }
    };
}

oct_shape!(
    OctShape,
    OctGraph::strong_closure,
    strong_reduction,
    |g| g.clone(),
    "A rational octagonal shape, stored strongly closed and strongly reduced."
);

oct_shape!(
    IntOctShape,
    OctGraph::tight_closure,
    tight_reduction,
    |g| g.floored(),
    "An integer octagonal shape, stored tightly closed and tightly reduced. Non-integral bounds are rounded down."
);

impl OctShape {
    pub fn contains(&self, p: &[Rational]) -> bool {
        self.satisfies_graph(p)
    }

    /// A rational point of the shape.
    pub fn some_point(&self) -> Option<PointVec> {
        some_point(self.closed()?, OctGraph::strong_closure)
    }
}

impl IntOctShape {
    pub fn contains(&self, p: &[Rational]) -> bool {
        p.iter().all(Rational::is_integer) && self.satisfies_graph(p)
    }

    /// An integer point of the shape.
    pub fn some_point(&self) -> Option<PointVec> {
        some_point(self.closed()?, OctGraph::tight_closure)
    }
}

/// Fixes one variable at a time to a bound (or zero) and re-closes.
fn some_point(
    closed: &OctGraph,
    close: fn(&OctGraph) -> std::result::Result<OctGraph, Inconsistent>,
) -> Option<PointVec> {
    let mut g = closed.clone();
    let mut p = Vec::with_capacity(g.dim());
    for v in 0..g.dim() {
        let (pos, neg) = (2 * v, 2 * v + 1);
        // w(neg,pos) = 2·(−lower) and w(pos,neg) = 2·upper.
        let val = match (g.get(neg, pos).as_finite(), g.get(pos, neg).as_finite()) {
            (Some(lo2), _) => -lo2.half(),
            (None, Some(hi2)) => hi2.half(),
            (None, None) => Rational::zero(),
        };
        let twice = &val + &val;
        g.set(pos, neg, ExtendedRational::Finite(twice.clone()));
        g.set(neg, pos, ExtendedRational::Finite(-twice));
        g = close(&g).ok()?;
        p.push(val);
    }
    Some(p)
}

/// Arc `(i, j)` of `R₁` and `(k, l)` of `R₂` satisfying every condition.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct OctWitness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl OctWitness {
    /// `(i, j)` is `(l, k)` or `(k̄, l̄)`: the inputs are disjoint.
    pub fn is_degenerate(&self) -> bool {
        (self.i, self.j) == (self.l, self.k) || (self.i, self.j) == (bar(self.k), bar(self.l))
    }
}

impl fmt::Display for OctWitness {
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

/// Truth values of conditions (1a), (1b), (2a), (2b), (3a), (3b), (4a), (4b)
/// for an arbitrary index tuple. The integer variant adds the slacks
/// `ε_ij`, `ε_kl` and compares with `≤`.
pub fn oct_conditions(g1: &OctGraph, g2: &OctGraph, t: OctWitness, integer: bool) -> [bool; 8] {
    let OctWitness { i, j, k, l } = t;
    let w = |r: usize, s: usize| g1.get(r, s).clone().max(g2.get(r, s).clone());
    let (a, b) = (g1.get(i, j), g2.get(k, l));
    let (ei, ek) = if integer {
        let e = |x: usize, y: usize| Rational::from_int(if y == bar(x) { 2 } else { 1 });
        (e(i, j), e(k, l))
    } else {
        (Rational::zero(), Rational::zero())
    };
    let cmp = |lhs: Rational, rhs: ExtendedRational| {
        let lhs = ExtendedRational::Finite(lhs);
        if integer {
            lhs <= rhs
        } else {
            lhs < rhs
        }
    };
    let c1a = a.is_finite() && cmp(fin(a) + &ei, g2.get(i, j).clone());
    let c1b = b.is_finite() && cmp(fin(b) + &ek, g1.get(k, l).clone());
    if !(a.is_finite() && b.is_finite()) {
        return [c1a, c1b, false, false, false, false, false, false];
    }
    let (a, b) = (fin(a), fin(b));
    let l2 = a + b + &ei + &ek;
    let l3 = a + a + b + &ei + &ei + &ek;
    let l4 = a + b + b + &ei + &ek + &ek;
    let sum = |xs: [ExtendedRational; 3]| xs[0].add(&xs[1]).add(&xs[2]);
    [
        c1a,
        c1b,
        cmp(l2.clone(), w(i, l).add(&w(k, j))),
        cmp(l2, w(i, bar(k)).add(&w(bar(j), l))),
        cmp(l3.clone(), sum([w(i, l), w(i, bar(k)), w(bar(j), j)])),
        cmp(l3, sum([w(k, j), w(bar(j), l), w(i, bar(i))])),
        cmp(l4.clone(), sum([w(i, l), w(bar(j), l), w(k, bar(k))])),
        cmp(l4, sum([w(k, j), w(i, bar(k)), w(bar(l), l)])),
    ]
}

fn detect(
    x: &Option<Graphs>,
    y: &Option<Graphs>,
    integer: bool,
) -> Decision<OctWitness> {
    let (Some(x), Some(y)) = (x, y) else {
        return Decision::Exact;
    };
    let (g1, g2) = (&x.closed, &y.closed);
    if g1.leq(g2) || g2.leq(g1) {
        return Decision::Exact;
    }
    let first: Vec<(usize, usize)> = x.reduced.arcs().into_iter().filter(|&(i, j)| g1.get(i, j) < g2.get(i, j)).collect();
    let second: Vec<(usize, usize)> = y.reduced.arcs().into_iter().filter(|&(k, l)| g2.get(k, l) < g1.get(k, l)).collect();
    for &(i, j) in &first {
        for &(k, l) in &second {
            let t = OctWitness { i, j, k, l };
            if oct_conditions(g1, g2, t, integer).iter().all(|&c| c) {
                return Decision::Inexact(t);
            }
        }
    }
    Decision::Exact
}

/// Decides whether the join of two rational octagonal shapes is their union.
pub fn detect_exact_join_oct(o1: &OctShape, o2: &OctShape) -> Result<Decision<OctWitness>> {
    check_dim(o1.dim, o2.dim)?;
    Ok(detect(&o1.graphs, &o2.graphs, false))
}

/// Decides whether the join of two integer octagonal shapes is their union
/// over ℤⁿ.
pub fn detect_exact_join_int_oct(o1: &IntOctShape, o2: &IntOctShape) -> Result<Decision<OctWitness>> {
    check_dim(o1.dim, o2.dim)?;
    Ok(detect(&o1.graphs, &o2.graphs, true))
}

fn epsilon(g1: &OctGraph, g2: &OctGraph, w: &OctGraph, t: OctWitness) -> Rational {
    let OctWitness { i, j, k, l } = t;
    let (a, b) = (fin(g1.get(i, j)), fin(g2.get(k, l)));
    let sum = |xs: &[(usize, usize)]| xs.iter().fold(ExtendedRational::zero(), |acc, &(r, s)| acc.add(w.get(r, s)));
    let l2 = a + b;
    let l3 = &(a + a) + b;
    let l4 = &(b + b) + a;
    let terms = [
        (sum(&[(i, j)]), a.clone(), 1),
        (sum(&[(k, l)]), b.clone(), 1),
        (sum(&[(i, l), (k, j)]), l2.clone(), 2),
        (sum(&[(i, bar(k)), (bar(j), l)]), l2, 2),
        (sum(&[(i, l), (i, bar(k)), (bar(j), j)]), l3.clone(), 3),
        (sum(&[(k, j), (bar(j), l), (i, bar(i))]), l3, 3),
        (sum(&[(i, l), (bar(j), l), (k, bar(k))]), l4.clone(), 3),
        (sum(&[(k, j), (i, bar(k)), (bar(l), l)]), l4, 3),
    ];
    terms
        .into_iter()
        .filter_map(|(rhs, lhs, div)| rhs.as_finite().map(|r| (r - &lhs) / Rational::from_int(div)))
        .min()
        .unwrap_or_else(Rational::one)
}

fn separating_graph(
    x: &Option<Graphs>,
    y: &Option<Graphs>,
    dim: usize,
    t: OctWitness,
    integer: bool,
) -> Result<OctGraph> {
    let (Some(x), Some(y)) = (x, y) else {
        return Err(Error::InvalidWitness("an input is empty".into()));
    };
    let (g1, g2) = (&x.closed, &y.closed);
    let OctWitness { i, j, k, l } = t;
    if [i, j, k, l].iter().any(|&v| v >= 2 * dim) || i == j || k == l {
        return Err(Error::InvalidWitness(format!("{t} is not a pair of arcs")));
    }
    if !oct_conditions(g1, g2, t, integer).iter().all(|&c| c) {
        return Err(Error::InvalidWitness(format!("{t} does not satisfy every condition")));
    }
    let w = g1.lub(g2)?;
    let (e1, e2) = if integer {
        let e = |a: usize, b: usize| Rational::from_int(if b == bar(a) { 2 } else { 1 });
        (e(i, j), e(k, l))
    } else {
        let e = epsilon(g1, g2, &w, t);
        (e.clone(), e)
    };
    let mut g = w;
    g.set(j, i, ExtendedRational::Finite(-fin(g1.get(i, j)) - &e1));
    g.set(l, k, ExtendedRational::Finite(-fin(g2.get(k, l)) - &e2));
    Ok(g)
}

/// The witness shape: the lub with `w′(j,i) = −w₁(i,j) − ε` and
/// `w′(l,k) = −w₂(k,l) − ε` (and their coherent twins).
pub fn build_separating_witness_oct(o1: &OctShape, o2: &OctShape, t: OctWitness) -> Result<OctShape> {
    check_dim(o1.dim, o2.dim)?;
    Ok(OctShape::from_graph(separating_graph(&o1.graphs, &o2.graphs, o1.dim, t, false)?))
}

/// Integer counterpart of [`build_separating_witness_oct`] using `ε_ij`, `ε_kl`.
pub fn build_separating_witness_int_oct(o1: &IntOctShape, o2: &IntOctShape, t: OctWitness) -> Result<IntOctShape> {
    check_dim(o1.dim, o2.dim)?;
    Ok(IntOctShape::from_graph(separating_graph(&o1.graphs, &o2.graphs, o1.dim, t, true)?))
}

/// Non-empty, inside the join, and disjoint from both inputs.
pub fn verify_oct_witness(o1: &OctShape, o2: &OctShape, w: &OctShape) -> bool {
    let Ok(join) = o1.join(o2) else { return false };
    !w.is_empty()
        && w.is_subset(&join).unwrap_or(false)
        && w.meet(o1).is_ok_and(|m| m.is_empty())
        && w.meet(o2).is_ok_and(|m| m.is_empty())
}

/// As [`verify_oct_witness`], with Z-consistency decided by tight closure.
pub fn verify_int_oct_witness(o1: &IntOctShape, o2: &IntOctShape, w: &IntOctShape) -> bool {
    let Ok(join) = o1.join(o2) else { return false };
    !w.is_empty()
        && w.is_subset(&join).unwrap_or(false)
        && w.meet(o1).is_ok_and(|m| m.is_empty())
        && w.meet(o2).is_ok_and(|m| m.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_system;

    fn oct(text: &str, dim: usize) -> OctShape {
        OctShape::from_constraints(&parse_system(text, dim).unwrap()).unwrap()
    }

    fn ioct(text: &str, dim: usize) -> IntOctShape {
        IntOctShape::from_constraints(&parse_system(text, dim).unwrap()).unwrap()
    }

    fn fw(v: i64) -> ExtendedRational {
        ExtendedRational::finite(v)
    }

    #[test]
    fn storage_is_coherent() {
        let mut g = OctGraph::new(3);
        g.set(0, 3, fw(5));
        assert_eq!(g.get(2, 1), &fw(5));
        g.set(4, 1, fw(7));
        assert_eq!(g.get(0, 5), &fw(7));
        assert!(g.is_coherent());
    }

    #[test]
    fn encoding_examples() {
        let o1 = oct("x1 + x2 <= 0", 2);
        assert_eq!(o1.closed().unwrap().get(0, 3), &fw(0));
        assert_eq!(o1.closed().unwrap().get(2, 1), &fw(0));
        let o2 = oct("x1 <= 2", 2);
        assert_eq!(o2.closed().unwrap().get(0, 1), &fw(4));
        assert!(oct("x1 <= 0; -x1 <= -1", 1).is_empty());
        let strict = parse_system("x1 + x2 < 1", 2).unwrap();
        assert!(matches!(OctShape::from_constraints(&strict), Err(Error::NotOctagonalForm(_))));
        let wide = parse_system("x1 + 2*x2 <= 1", 2).unwrap();
        assert!(matches!(OctShape::from_constraints(&wide), Err(Error::NotOctagonalForm(_))));
    }

    #[test]
    fn strengthening_derives_difference() {
        let mut g = OctGraph::new(2);
        g.set(0, 1, fw(2));
        g.set(3, 2, fw(-4));
        let s = g.strong_closure().unwrap();
        assert_eq!(s.get(0, 3).clone().min(s.get(0, 2).clone()), fw(-1));
        assert_eq!(s.get(0, 2), &fw(-1));
        assert_eq!(s.strong_closure().unwrap(), s);
    }

    #[test]
    fn tight_closure_examples() {
        let mut g = OctGraph::new(1);
        g.set(0, 1, fw(3));
        assert_eq!(g.tight_closure().unwrap().get(0, 1), &fw(2));
        let mut h = OctGraph::new(1);
        h.set(0, 1, fw(1));
        h.set(1, 0, fw(-1));
        assert!(h.strong_closure().is_ok());
        assert!(h.tight_closure().is_err());
        let mut e = OctGraph::new(2);
        e.set(0, 1, fw(4));
        e.set(0, 3, fw(1));
        assert_eq!(e.tight_closure(), e.strong_closure());
    }

    #[test]
    fn half_planes_join_inexactly() {
        let (o1, o2) = (oct("x1 + x2 <= 0", 2), oct("x1 <= 2", 2));
        let d = detect_exact_join_oct(&o1, &o2).unwrap();
        let t = OctWitness { i: 0, j: 3, k: 0, l: 1 };
        assert_eq!(d, Decision::Inexact(t));
        let w = build_separating_witness_oct(&o1, &o2, t).unwrap();
        assert!(verify_oct_witness(&o1, &o2, &w));
        let (i1, i2) = (ioct("x1 + x2 <= 0", 2), ioct("x1 <= 2", 2));
        let d = detect_exact_join_int_oct(&i1, &i2).unwrap();
        let t = *d.witness().unwrap();
        let w = build_separating_witness_int_oct(&i1, &i2, t).unwrap();
        assert!(verify_int_oct_witness(&i1, &i2, &w));
    }

    #[test]
    fn integer_exact_rational_inexact() {
        let o3 = "x1 >= 0; x1 <= 3; x2 >= 0; x2 <= 2; x1 - x2 <= 2";
        let o4 = "x1 >= 3; x1 <= 6; x2 >= 0; x2 <= 2";
        let d = detect_exact_join_oct(&oct(o3, 2), &oct(o4, 2)).unwrap();
        assert!(!d.is_exact());
        let w = build_separating_witness_oct(&oct(o3, 2), &oct(o4, 2), *d.witness().unwrap()).unwrap();
        assert!(verify_oct_witness(&oct(o3, 2), &oct(o4, 2), &w), "{w}");
        let p = w.some_point().unwrap();
        assert!(!oct(o3, 2).contains(&p) && !oct(o4, 2).contains(&p));
        assert!(detect_exact_join_int_oct(&ioct(o3, 2), &ioct(o4, 2)).unwrap().is_exact());
    }

    #[test]
    fn self_join_is_exact() {
        let o = oct("x1 + x2 <= 3; x1 - x2 >= -1; x2 >= 0", 2);
        assert!(detect_exact_join_oct(&o, &o).unwrap().is_exact());
        let i = ioct("x1 + x2 <= 3; x1 - x2 >= -1; x2 >= 0", 2);
        assert!(detect_exact_join_int_oct(&i, &i).unwrap().is_exact());
    }

    #[test]
    fn reductions_round_trip() {
        let o = oct("x1 + x2 <= 3; x1 - x2 <= 1; x1 <= 5; x2 >= -2; x1 + x2 >= -7", 2);
        let r = o.reduced().unwrap();
        assert_eq!(r.strong_closure().unwrap(), *o.closed().unwrap());
        let single = oct("x1 - x2 <= 1", 2);
        assert_eq!(single.reduced().unwrap().arc_pairs().len(), 1);
        assert_eq!(single.to_constraints().to_string(), parse_system("x1 - x2 <= 1", 2).unwrap().to_string());
        let again = OctShape::from_constraints(&o.to_constraints()).unwrap();
        assert_eq!(again, o);
    }

    #[test]
    fn some_point_is_inside() {
        let o = oct("x1 + x2 <= 3; x1 - x2 >= 1/2; x2 >= 0", 2);
        let p = o.some_point().unwrap();
        assert!(o.contains(&p));
        let i = ioct("x1 + x2 <= 3; x1 - x2 >= 1; x2 >= 0; x1 <= 7/2", 2);
        let p = i.some_point().unwrap();
        assert!(i.contains(&p), "{p:?}");
    }
}
