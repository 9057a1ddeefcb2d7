//! Random instances with small integer data.
//!
//! Every generator draws integer (or half-integer) bounds from a symmetric
//! range so that oracles terminate quickly and instances are easy to read.
//! Given the same RNG state the output is the same.

use exactjoin::bd::{BdShape, IntBdShape};
use exactjoin::boxes::{Bound, BoxShape, IntInterval, NncInterval};
use exactjoin::graph::WeightedGraph;
use exactjoin::linear::{Constraint, ConstraintSystem, LinearExpr, Relation};
use exactjoin::octagon::{IntOctShape, OctGraph, OctShape};
use exactjoin::{ExtendedRational, Rational};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The RNG of trial `index` in a run seeded with `seed`; independent of the
/// order in which trials are run.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn int_in(rng: &mut impl Rng, bound: i64) -> i64 {
    rng.gen_range(-bound..=bound)
}

/// An integer, or with probability ½ a half-integer, in `[-bound, bound]`.
fn value_in(rng: &mut impl Rng, bound: i64, halves: bool) -> Rational {
    if halves && rng.gen_bool(0.5) {
        Rational::new(rng.gen_range(-2 * bound..=2 * bound), 2)
    } else {
        Rational::from_int(int_in(rng, bound))
    }
}

/// A rational box: each bound is infinite with probability 0.15, otherwise
/// an integer in `[-bound, bound]`, open or closed with equal odds.
pub fn nnc_box(rng: &mut impl Rng, dim: usize, bound: i64) -> BoxShape<NncInterval> {
    let comps = (0..dim)
        .map(|_| {
            let (a, b) = ordered(rng, bound);
            let mut end = |v: i64| {
                if rng.gen_bool(0.15) {
                    Bound::Infinite
                } else if rng.gen_bool(0.5) {
                    Bound::Open(v.into())
                } else {
                    Bound::Closed(v.into())
                }
            };
            let lo = end(a);
            let hi = end(b);
            NncInterval::new(lo, hi)
        })
        .collect();
    BoxShape::new(comps)
}

/// An integer box with bounds in `[-bound, bound]`, each infinite with
/// probability 0.15.
pub fn int_box(rng: &mut impl Rng, dim: usize, bound: i64) -> BoxShape<IntInterval> {
    let comps = (0..dim)
        .map(|_| {
            let (a, b) = ordered(rng, bound);
            let lo = (!rng.gen_bool(0.15)).then_some(a);
            let hi = (!rng.gen_bool(0.15)).then_some(b);
            IntInterval::new(lo, hi)
        })
        .collect();
    BoxShape::new(comps)
}

/// A bounded integer box with bounds in `[lo, hi]`.
pub fn bounded_int_box(rng: &mut impl Rng, dim: usize, lo: i64, hi: i64) -> BoxShape<IntInterval> {
    let comps = (0..dim)
        .map(|_| {
            let a = rng.gen_range(lo..=hi);
            let b = rng.gen_range(a..=hi);
            IntInterval::closed(a, b)
        })
        .collect();
    BoxShape::new(comps)
}

fn ordered(rng: &mut impl Rng, bound: i64) -> (i64, i64) {
    let a = int_in(rng, bound);
    let b = int_in(rng, bound);
    (a.min(b), a.max(b))
}

fn unit(dim: usize, terms: &[(usize, i64)]) -> LinearExpr {
    let mut c = vec![Rational::zero(); dim];
    for &(k, s) in terms {
        c[k] += &Rational::from_int(s);
    }
    LinearExpr::new(c)
}

fn push(cs: &mut ConstraintSystem, e: LinearExpr, bound: Rational) {
    if !e.is_zero() {
        cs.insert(Constraint::new(e, Relation::Le, bound).expect("nonzero expression")).expect("same dimension");
    }
}

/// Bounded-difference constraints: each variable gets a lower and an upper
/// bound with probability 0.8 each (lower in `[-bound, bound]`, upper above
/// it by at most `bound`), plus up to `dim` random difference constraints.
pub fn bd_constraints(rng: &mut impl Rng, dim: usize, bound: i64, halves: bool) -> ConstraintSystem {
    bd_constraints_with(rng, dim, bound, halves, 0.8)
}

/// As [`bd_constraints`], but every variable has both bounds.
pub fn bounded_bd_constraints(rng: &mut impl Rng, dim: usize, bound: i64, halves: bool) -> ConstraintSystem {
    bd_constraints_with(rng, dim, bound, halves, 1.0)
}

fn bd_constraints_with(rng: &mut impl Rng, dim: usize, bound: i64, halves: bool, p_bound: f64) -> ConstraintSystem {
    let mut cs = ConstraintSystem::new(dim);
    for k in 0..dim {
        let lo = value_in(rng, bound, halves);
        if rng.gen_bool(p_bound) {
            push(&mut cs, unit(dim, &[(k, -1)]), -lo.clone());
        }
        if rng.gen_bool(p_bound) {
            push(&mut cs, unit(dim, &[(k, 1)]), lo + value_in(rng, bound, halves).abs());
        }
    }
    if dim >= 2 {
        for _ in 0..rng.gen_range(0..=dim) {
            let i = rng.gen_range(0..dim);
            let j = (i + rng.gen_range(1..dim)) % dim;
            push(&mut cs, unit(dim, &[(i, 1), (j, -1)]), value_in(rng, bound, halves));
        }
    }
    cs
}

pub fn bd_shape(rng: &mut impl Rng, dim: usize, bound: i64) -> BdShape {
    BdShape::from_constraints(&bd_constraints(rng, dim, bound, true)).expect("BD form")
}

pub fn int_bd_shape(rng: &mut impl Rng, dim: usize, bound: i64) -> IntBdShape {
    IntBdShape::from_constraints(&bd_constraints(rng, dim, bound, false)).expect("BD form")
}

/// Octagonal constraints: the BD part above plus up to `dim` constraints of
/// the form `±xi ± xj ≤ c`.
pub fn oct_constraints(rng: &mut impl Rng, dim: usize, bound: i64, halves: bool) -> ConstraintSystem {
    let cs = bd_constraints(rng, dim, bound, halves);
    add_oct_constraints(rng, cs, bound, halves)
}

/// As [`oct_constraints`], but every variable has both bounds.
pub fn bounded_oct_constraints(rng: &mut impl Rng, dim: usize, bound: i64, halves: bool) -> ConstraintSystem {
    let cs = bounded_bd_constraints(rng, dim, bound, halves);
    add_oct_constraints(rng, cs, bound, halves)
}

fn add_oct_constraints(rng: &mut impl Rng, mut cs: ConstraintSystem, bound: i64, halves: bool) -> ConstraintSystem {
    let dim = cs.dim();
    for _ in 0..rng.gen_range(0..=dim) {
        let i = rng.gen_range(0..dim);
        let j = rng.gen_range(0..dim);
        let si = if rng.gen_bool(0.5) { 1 } else { -1 };
        let sj = if rng.gen_bool(0.5) { 1 } else { -1 };
        let e = if i == j { unit(dim, &[(i, si)]) } else { unit(dim, &[(i, si), (j, sj)]) };
        push(&mut cs, e, value_in(rng, bound, halves));
    }
    cs
}

pub fn oct_shape(rng: &mut impl Rng, dim: usize, bound: i64) -> OctShape {
    OctShape::from_constraints(&oct_constraints(rng, dim, bound, true)).expect("octagonal form")
}

pub fn int_oct_shape(rng: &mut impl Rng, dim: usize, bound: i64) -> IntOctShape {
    IntOctShape::from_constraints(&oct_constraints(rng, dim, bound, false)).expect("octagonal form")
}

/// At most `max_constraints` constraints `a·x ≤ b` with coefficients in
/// `[-2, 2]`, all satisfied by a random integer centre in `[-2, 2]ⁿ`, so the
/// polyhedron is non-empty unless strictness cuts the centre off. Each
/// constraint is strict with probability `strict` and an equality with
/// probability 0.05.
pub fn poly_constraints(rng: &mut impl Rng, dim: usize, max_constraints: usize, strict: f64) -> ConstraintSystem {
    let centre: Vec<i64> = (0..dim).map(|_| int_in(rng, 2)).collect();
    let mut cs = ConstraintSystem::new(dim);
    for _ in 0..rng.gen_range(1..=max_constraints) {
        let a: Vec<i64> = (0..dim).map(|_| int_in(rng, 2)).collect();
        if a.iter().all(|&v| v == 0) {
            continue;
        }
        let at_centre: i64 = a.iter().zip(&centre).map(|(x, y)| x * y).sum();
        let e = LinearExpr::from_ints(&a);
        let rel = if rng.gen_bool(0.05) {
            Relation::Eq
        } else if rng.gen_bool(strict) {
            Relation::Lt
        } else {
            Relation::Le
        };
        let slack = if rel == Relation::Eq { 0 } else { rng.gen_range(0..=3) };
        let c = Constraint::new(e, rel, Rational::from_int(at_centre + slack)).expect("nonzero expression");
        cs.insert(c).expect("same dimension");
    }
    cs
}

/// A graph on `nodes` nodes; each off-diagonal arc is present with
/// probability `density` with a weight in `[-bound, bound]`.
pub fn weighted_graph(rng: &mut impl Rng, nodes: usize, density: f64, bound: i64) -> WeightedGraph {
    let mut g = WeightedGraph::new(nodes);
    for i in 0..nodes {
        for j in 0..nodes {
            if i != j && rng.gen_bool(density) {
                g.set(i, j, ExtendedRational::finite(int_in(rng, bound)));
            }
        }
    }
    g
}

/// An octagonal graph in dimension `dim` with integer weights in
/// `[-bound, bound]`; coherent since mirrored arcs share storage.
pub fn oct_graph(rng: &mut impl Rng, dim: usize, density: f64, bound: i64) -> OctGraph {
    let mut g = OctGraph::new(dim);
    for i in 0..2 * dim {
        for j in 0..2 * dim {
            if i != j && rng.gen_bool(density) {
                g.set(i, j, ExtendedRational::finite(int_in(rng, bound)));
            }
        }
    }
    g
}
