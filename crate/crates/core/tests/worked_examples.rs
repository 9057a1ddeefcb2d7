use exactjoin::bd::{bd_conditions, build_separating_witness, detect_exact_join_bd, detect_exact_join_int_bd, verify_bd_witness, BdShape, BdWitness, IntBdShape};
use exactjoin::boxes::{box_witness_point, detect_exact_join_box, verify_box_witness, BoxShape, BoxWitness, NncInterval};
use exactjoin::linear::{point_from_ints, Generator};
use exactjoin::nnc::{detect_exact_join_nnc, nnc_witness_point, verify_nnc_witness_point, NncCondition, NncPolyhedron};
use exactjoin::octagon::{build_separating_witness_oct, detect_exact_join_oct, verify_oct_witness, OctShape, OctWitness};
use exactjoin::oracle::{complement_inclusion_of, int_bd_grid_oracle};
use exactjoin::polyhedra::{closed_witness_point, detect_exact_join_closed, verify_closed_witness_point, CPolyhedron, Side};
use exactjoin::shape::parse_shape;
use exactjoin::{Decision, ExtendedRational, Rational};

fn shape<S: exactjoin::shape::TextShape>(text: &str) -> S {
    parse_shape(text).unwrap()
}

#[test]
fn triangle_and_wedge_join_to_a_square() {
    let p1: CPolyhedron = shape("cpoly { x1 >= 0; x2 >= 0; x1 + x2 <= 2 }");
    let p2: CPolyhedron = shape("cpoly { x1 <= 2; x2 >= 0; x1 - x2 >= 0 }");
    let square: CPolyhedron = shape("cpoly { x1 >= 0; x2 >= 0; x1 <= 2; x2 <= 2 }");
    assert_eq!(p1.join(&p2).unwrap(), square);

    let d = detect_exact_join_closed(&p1, &p2).unwrap();
    let w = d.witness().expect("inexact").clone();
    assert_eq!(w.side, Side::First);
    assert_eq!(w.beta.to_string(), "x1 + x2 <= 2");
    assert_eq!(w.generator, Generator::point(point_from_ints(&[0, 2])));
    let p = closed_witness_point(&p1, &p2, &w).unwrap();
    assert!(verify_closed_witness_point(&p1, &p2, &p));
}

#[test]
fn boxes_fail_by_either_condition() {
    let b1: BoxShape<NncInterval> = shape("box { x1 in [0, 1]; x2 in [0, 2] }");
    let b2: BoxShape<NncInterval> = shape("box { x1 in [3, 4]; x2 in [0, 2] }");
    let b3: BoxShape<NncInterval> = shape("box { x1 in [0, 4]; x2 in [1, 2] }");
    assert_eq!(detect_exact_join_box(&b1, &b2).unwrap(), Decision::Inexact(BoxWitness::Condition1 { i: 1 }));
    let d = detect_exact_join_box(&b1, &b3).unwrap();
    let Decision::Inexact(w @ BoxWitness::Condition2 { i, j }) = d else { panic!("expected condition 2, got {d:?}") };
    assert_eq!((i.min(j), i.max(j)), (1, 2));
    let p = box_witness_point(&b1, &b3, &w).unwrap();
    assert!(verify_box_witness(&b1, &b3, &p));
}

const BD1: &str = "x1 >= 0; x1 <= 3; x2 >= 0; x2 <= 2";
const BD2: &str = "x2 >= 0; x2 <= 2; x1 - x2 >= 0; x1 - x2 <= 3";
const BD3: &str = "x1 >= 0; x1 <= 3; x2 >= 0; x2 <= 2; x1 - x2 <= 2";
const BD4: &str = "x1 >= 3; x1 <= 6; x2 >= 0; x2 <= 2";

fn bds(body: &str) -> BdShape {
    shape(&format!("bds {{ {body} }}"))
}

fn int_bds(body: &str) -> IntBdShape {
    shape(&format!("int_bds {{ {body} }}"))
}

#[test]
fn rectangle_and_parallelogram_join_exactly() {
    let (b1, b2) = (bds(BD1), bds(BD2));
    assert!(detect_exact_join_bd(&b1, &b2).unwrap().is_exact());
    let (g1, g2) = (b1.closed().unwrap(), b2.closed().unwrap());
    // Each tuple satisfies one condition only.
    assert_eq!(bd_conditions(g1, g2, BdWitness { i: 1, j: 0, k: 2, l: 1 }, false), (true, false));
    assert_eq!(bd_conditions(g1, g2, BdWitness { i: 1, j: 1, k: 0, l: 2 }, false), (false, true));
    assert!(complement_inclusion_of(&b1, &b2).unwrap().is_exact());
}

#[test]
fn adjacent_shapes_are_inexact_over_rationals_only() {
    let (b3, b4) = (bds(BD3), bds(BD4));
    let t = BdWitness { i: 1, j: 2, k: 0, l: 1 };
    assert_eq!(detect_exact_join_bd(&b3, &b4).unwrap(), Decision::Inexact(t));
    let w = build_separating_witness(&b3, &b4, t).unwrap();
    assert!(verify_bd_witness(&b3, &b4, &w));
    assert!(w.contains(&[Rational::new(5, 2), Rational::zero()]));
    assert!(!complement_inclusion_of(&b3, &b4).unwrap().is_exact());

    let (i3, i4) = (int_bds(BD3), int_bds(BD4));
    assert!(detect_exact_join_int_bd(&i3, &i4).unwrap().is_exact());
    // The slack blocks the rational witness: 2 - 3 + 2 > 0.
    let (g3, g4) = (i3.closed().unwrap(), i4.closed().unwrap());
    assert_eq!(bd_conditions(g3, g4, t, true), (true, false));
    assert!(int_bd_grid_oracle(&i3, &i4).unwrap().is_exact());
}

#[test]
fn half_plane_and_half_plane_octagons() {
    let (o1, o2): (OctShape, OctShape) = (shape("oct { x1 + x2 <= 0 }"), shape("oct(2) { x1 <= 2 }"));
    let t = OctWitness { i: 0, j: 3, k: 0, l: 1 };
    assert_eq!(detect_exact_join_oct(&o1, &o2).unwrap(), Decision::Inexact(t));
    assert_eq!(o1.closed().unwrap().get(0, 3), &ExtendedRational::finite(0));
    assert_eq!(o2.closed().unwrap().get(0, 1), &ExtendedRational::finite(4));
    let w = build_separating_witness_oct(&o1, &o2, t).unwrap();
    assert!(verify_oct_witness(&o1, &o2, &w));
    assert!(!complement_inclusion_of(&o1, &o2).unwrap().is_exact());
}

#[test]
fn half_open_strip_and_point() {
    let q1: NncPolyhedron = shape("nncpoly(2) { x1 >= 2; x1 < 4 }");
    let q2: NncPolyhedron = shape("nncpoly { x1 = 4; x2 = 2 }");
    let d = detect_exact_join_nnc(&q1, &q2).unwrap();
    let w = d.witness().expect("inexact").clone();
    assert_eq!(w.condition, NncCondition::One);
    assert_eq!(w.generator, Generator::ray(point_from_ints(&[0, 1])).unwrap());
    let p = nnc_witness_point(&q1, &q2, &w).unwrap();
    assert!(verify_nnc_witness_point(&q1, &q2, &p));
}

#[test]
fn identical_inputs_join_exactly_everywhere() {
    let b: BoxShape<NncInterval> = shape("box { x1 in (0, 1]; x2 in [0, inf) }");
    assert!(detect_exact_join_box(&b, &b).unwrap().is_exact());
    let s = bds(BD3);
    assert!(detect_exact_join_bd(&s, &s).unwrap().is_exact());
    let p: CPolyhedron = shape("cpoly { x1 >= 0; x2 >= 0; x1 + x2 <= 2 }");
    assert!(detect_exact_join_closed(&p, &p).unwrap().is_exact());
    let q: NncPolyhedron = shape("nncpoly { x1 > 0; x2 > 0; x1 + x2 < 2 }");
    assert!(detect_exact_join_nnc(&q, &q).unwrap().is_exact());
}
