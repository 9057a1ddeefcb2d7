use exactjoin::bd::{build_separating_witness, detect_exact_join_bd, verify_bd_witness, BdShape};
use exactjoin::boxes::{box_witness_point, detect_exact_join_box, verify_box_witness, Bound, BoxShape, NncInterval};
use exactjoin::graph::WeightedGraph;
use exactjoin::linear::{Constraint, ConstraintSystem, LinearExpr, Relation};
use exactjoin::nnc::{detect_exact_join_nnc, nnc_witness_point, verify_nnc_witness_point, NncPolyhedron};
use exactjoin::octagon::{build_separating_witness_oct, detect_exact_join_oct, verify_oct_witness, OctShape};
use exactjoin::oracle::{complement_inclusion, complement_inclusion_of, nnc_box_grid_oracle};
use exactjoin::polyhedra::{closed_witness_point, detect_exact_join_closed, verify_closed_witness_point, CPolyhedron};
use exactjoin::powerset::Powerset;
use exactjoin::{ExtendedRational, Rational};
use proptest::prelude::*;

fn arb_bound() -> impl Strategy<Value = Option<(i64, bool)>> {
    prop_oneof![1 => Just(None), 6 => (-4i64..=4, any::<bool>()).prop_map(Some)]
}

fn arb_interval() -> impl Strategy<Value = NncInterval> {
    (arb_bound(), arb_bound()).prop_map(|(lo, hi)| {
        let b = |v: Option<(i64, bool)>| match v {
            None => Bound::Infinite,
            Some((x, true)) => Bound::Closed(x.into()),
            Some((x, false)) => Bound::Open(x.into()),
        };
        NncInterval::new(b(lo), b(hi))
    })
}

fn arb_box(dim: usize) -> impl Strategy<Value = BoxShape<NncInterval>> {
    prop::collection::vec(arb_interval(), dim).prop_map(BoxShape::new)
}

fn expr(dim: usize, terms: &[(usize, i64)]) -> LinearExpr {
    let mut c = vec![Rational::zero(); dim];
    for &(k, v) in terms {
        c[k] += &Rational::from_int(v);
    }
    LinearExpr::new(c)
}

/// Difference constraints `x_i - x_j <= c` over nodes `0..=dim`, node 0
/// standing for the constant zero.
fn arb_bd(dim: usize) -> impl Strategy<Value = BdShape> {
    prop::collection::vec((0..=dim, 0..=dim, -3i64..=4), 1..=2 * dim + 2).prop_map(move |arcs| {
        let mut cs = ConstraintSystem::new(dim);
        for (i, j, c) in arcs {
            let mut terms = Vec::new();
            if i > 0 {
                terms.push((i - 1, 1));
            }
            if j > 0 {
                terms.push((j - 1, -1));
            }
            let e = expr(dim, &terms);
            if !e.is_zero() {
                cs.insert(Constraint::le(e, Rational::from_int(c)).unwrap()).unwrap();
            }
        }
        BdShape::from_constraints(&cs).unwrap()
    })
}

fn arb_oct(dim: usize) -> impl Strategy<Value = OctShape> {
    let term = (0..dim, prop_oneof![Just(1i64), Just(-1)]);
    prop::collection::vec((term.clone(), prop::option::of(term), -3i64..=4), 1..=2 * dim + 2).prop_map(move |cs| {
        let mut sys = ConstraintSystem::new(dim);
        for ((i, si), other, c) in cs {
            let terms = match other {
                Some((j, sj)) if j != i => vec![(i, si), (j, sj)],
                _ => vec![(i, si)],
            };
            sys.insert(Constraint::le(expr(dim, &terms), Rational::from_int(c)).unwrap()).unwrap();
        }
        OctShape::from_constraints(&sys).unwrap()
    })
}

fn arb_system(dim: usize, strict: bool) -> impl Strategy<Value = ConstraintSystem> {
    let row = (prop::collection::vec(-2i64..=2, dim), 0i64..=4, any::<bool>());
    prop::collection::vec(row, 1..=5).prop_map(move |rows| {
        let mut cs = ConstraintSystem::new(dim);
        for (a, b, s) in rows {
            let e = LinearExpr::from_ints(&a);
            if e.is_zero() {
                continue;
            }
            let rel = if strict && s { Relation::Lt } else { Relation::Le };
            cs.insert(Constraint::new(e, rel, Rational::from_int(b)).unwrap()).unwrap();
        }
        cs
    })
}

fn arb_graph(n: usize) -> impl Strategy<Value = WeightedGraph> {
    prop::collection::vec(prop::option::weighted(0.4, -2i64..=5), n * n).prop_map(move |ws| {
        let mut g = WeightedGraph::new(n);
        for (k, w) in ws.into_iter().enumerate() {
            let (i, j) = (k / n, k % n);
            if let (true, Some(w)) = (i != j, w) {
                g.set(i, j, ExtendedRational::finite(w));
            }
        }
        g
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn box_detection_matches_the_grid((b1, b2) in (1usize..=3).prop_flat_map(|d| (arb_box(d), arb_box(d)))) {
        let theorem = detect_exact_join_box(&b1, &b2).unwrap();
        let grid = nnc_box_grid_oracle(&b1, &b2, &Rational::new(1, 2)).unwrap();
        prop_assert_eq!(theorem.is_exact(), grid.is_exact(), "{} {}", b1, b2);
        if let Some(w) = theorem.witness() {
            let p = box_witness_point(&b1, &b2, w).unwrap();
            prop_assert!(verify_box_witness(&b1, &b2, &p));
        }
    }

    #[test]
    fn bd_detection_matches_complement_inclusion(a in arb_bd(2), b in arb_bd(2)) {
        let theorem = detect_exact_join_bd(&a, &b).unwrap();
        prop_assert_eq!(theorem.is_exact(), complement_inclusion_of(&a, &b).unwrap().is_exact(), "{} {}", a, b);
        if let Some(&t) = theorem.witness() {
            let w = build_separating_witness(&a, &b, t).unwrap();
            prop_assert!(verify_bd_witness(&a, &b, &w));
        }
    }

    #[test]
    fn octagon_detection_matches_complement_inclusion(a in arb_oct(2), b in arb_oct(2)) {
        let theorem = detect_exact_join_oct(&a, &b).unwrap();
        prop_assert_eq!(theorem.is_exact(), complement_inclusion_of(&a, &b).unwrap().is_exact(), "{} {}", a, b);
        if let Some(&t) = theorem.witness() {
            let w = build_separating_witness_oct(&a, &b, t).unwrap();
            prop_assert!(verify_oct_witness(&a, &b, &w));
        }
    }

    #[test]
    fn closed_detection_matches_complement_inclusion(a in arb_system(2, false), b in arb_system(2, false)) {
        let (p, q) = (CPolyhedron::from_constraints(&a).unwrap(), CPolyhedron::from_constraints(&b).unwrap());
        let theorem = detect_exact_join_closed(&p, &q).unwrap();
        let (np, nq) = (NncPolyhedron::from_closed(&p), NncPolyhedron::from_closed(&q));
        prop_assert_eq!(theorem.is_exact(), complement_inclusion(&np, &nq).unwrap().is_exact());
        prop_assert_eq!(theorem.is_exact(), detect_exact_join_nnc(&np, &nq).unwrap().is_exact());
        if let Some(w) = theorem.witness() {
            let x = closed_witness_point(&p, &q, w).unwrap();
            prop_assert!(verify_closed_witness_point(&p, &q, &x));
        }
    }

    #[test]
    fn nnc_detection_matches_complement_inclusion(a in arb_system(2, true), b in arb_system(2, true)) {
        let (p, q) = (NncPolyhedron::from_constraints(&a), NncPolyhedron::from_constraints(&b));
        let theorem = detect_exact_join_nnc(&p, &q).unwrap();
        prop_assert_eq!(theorem.is_exact(), complement_inclusion(&p, &q).unwrap().is_exact());
        if let Some(w) = theorem.witness() {
            let x = nnc_witness_point(&p, &q, w).unwrap();
            prop_assert!(verify_nnc_witness_point(&p, &q, &x));
        }
    }

    #[test]
    fn closure_is_idempotent_and_reductive(g in arb_graph(4)) {
        if let Ok(c) = g.closure() {
            prop_assert!(c.leq(&g));
            prop_assert_eq!(c.closure().unwrap(), c.clone());
            prop_assert!(c.is_closed());
        }
    }

    #[test]
    fn polyhedra_round_trip(cs in arb_system(3, false)) {
        let p = CPolyhedron::from_constraints(&cs).unwrap();
        prop_assert_eq!(CPolyhedron::from_generators(p.generators()).unwrap(), p.clone());
        prop_assert_eq!(CPolyhedron::from_constraints(p.constraints()).unwrap(), p);
    }

    #[test]
    fn merging_keeps_the_union(boxes in prop::collection::vec(arb_box(2), 1..=4)) {
        let q = Powerset::omega_reduce(2, boxes).unwrap();
        let (m, _) = q.pairwise_merge().unwrap();
        for x in -5..=5 {
            for y in -5..=5 {
                let p = [Rational::new(x, 2), Rational::new(y, 2)];
                prop_assert_eq!(q.contains(&p), m.contains(&p));
            }
        }
    }
}
