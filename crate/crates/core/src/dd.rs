//! Double description conversion for polyhedral cones.
//!
//! A cone `{y : a·y ≥ 0 for inequality rows, a·y = 0 for equality rows}` is
//! converted into lines and extreme rays by incremental intersection. Vectors
//! are primitive integer vectors. Adjacency of two rays is decided
//! combinatorially from the sets of processed rows they saturate.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub(crate) type IntVec = Vec<BigInt>;

/// A row of the cone description.
#[derive(Clone, Debug)]
pub(crate) struct Row {
    pub coeffs: IntVec,
    pub equality: bool,
}

impl Row {
    pub fn ge(coeffs: IntVec) -> Self {
        Row { coeffs, equality: false }
    }

    pub fn eq(coeffs: IntVec) -> Self {
        Row { coeffs, equality: true }
    }
}

/// Lines and extreme rays of a cone.
#[derive(Clone, Debug, Default)]
pub(crate) struct ConeGens {
    pub lines: Vec<IntVec>,
    pub rays: Vec<IntVec>,
}

pub(crate) fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Divides by the gcd of the entries; the zero vector is returned unchanged.
pub(crate) fn primitive(mut v: IntVec) -> IntVec {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    v
}

/// A positive multiple of a rational vector with integer entries, primitive.
pub(crate) fn scale_to_int(v: &[Rational]) -> IntVec {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(&x.denom()));
    primitive(v.iter().map(|x| x.numer() * (&l / x.denom())).collect())
}

fn combine(a: &BigInt, p: &[BigInt], b: &BigInt, q: &[BigInt]) -> IntVec {
    // a·p − b·q
    primitive(p.iter().zip(q).map(|(x, y)| a * x - b * y).collect())
}

struct Ray {
    v: IntVec,
    sat: FixedBitSet,
}

/// Lines and extreme rays of the cone in dimension `m` cut out by `rows`.
pub(crate) fn generators(m: usize, rows: &[Row]) -> ConeGens {
    let nrows = rows.len();
    let mut lines: Vec<IntVec> = (0..m)
        .map(|k| (0..m).map(|t| if t == k { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let c = &row.coeffs;
        if let Some(pos) = lines.iter().position(|l| !idot(c, l).is_zero()) {
            let mut p = lines.swap_remove(pos);
            let mut cp = idot(c, &p);
            if cp.is_negative() {
                p.iter_mut().for_each(|x| *x = -&*x);
                cp = -cp;
            }
            for l in lines.iter_mut() {
                let cl = idot(c, l);
                if !cl.is_zero() {
                    *l = combine(&cp, l, &cl, &p);
                }
            }
            for r in rays.iter_mut() {
                let cr = idot(c, &r.v);
                if !cr.is_zero() {
                    r.v = combine(&cp, &r.v, &cr, &p);
                }
                r.sat.insert(idx);
            }
            if !row.equality {
                let mut sat = FixedBitSet::with_capacity(nrows);
                sat.insert_range(0..idx);
                rays.push(Ray { v: p, sat });
            }
            continue;
        }
        let signs: Vec<BigInt> = rays.iter().map(|r| idot(c, &r.v)).collect();
        if signs.iter().all(|s| !s.is_negative()) && (!row.equality || signs.iter().all(Zero::is_zero)) {
            for (r, s) in rays.iter_mut().zip(&signs) {
                if s.is_zero() {
                    r.sat.insert(idx);
                }
            }
            continue;
        }
        let plus: Vec<usize> = (0..rays.len()).filter(|&t| signs[t].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&t| signs[t].is_negative()).collect();
        let threshold = (m - lines.len()).saturating_sub(2);
        let mut fresh = Vec::new();
        for &a in &plus {
            for &b in &minus {
                let mut common = rays[a].sat.clone();
                common.intersect_with(&rays[b].sat);
                if common.count_ones(..) < threshold {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|t| t == a || t == b || !common.is_subset(&rays[t].sat));
                if adjacent {
                    let v = combine(&signs[a], &rays[b].v, &signs[b], &rays[a].v);
                    let mut sat = common;
                    sat.insert(idx);
                    fresh.push(Ray { v, sat });
                }
            }
        }
        let mut kept = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, s) in rays.into_iter().zip(signs) {
            if s.is_zero() {
                r.sat.insert(idx);
                kept.push(r);
            } else if s.is_positive() && !row.equality {
                kept.push(r);
            }
        }
        kept.extend(fresh);
        rays = kept;
    }
    ConeGens { lines, rays: rays.into_iter().map(|r| r.v).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: &[i64]) -> IntVec {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn positive_orthant() {
        let rows: Vec<Row> = (0..3).map(|k| Row::ge(iv(&[(k == 0) as i64, (k == 1) as i64, (k == 2) as i64]))).collect();
        let g = generators(3, &rows);
        assert!(g.lines.is_empty());
        assert_eq!(g.rays.len(), 3);
    }

    #[test]
    fn square_cone_has_four_vertices() {
        // y0 ≥ 0, 0 ≤ x ≤ y0, 0 ≤ z ≤ y0
        let rows = vec![
            Row::ge(iv(&[1, 0, 0])),
            Row::ge(iv(&[0, 1, 0])),
            Row::ge(iv(&[1, -1, 0])),
            Row::ge(iv(&[0, 0, 1])),
            Row::ge(iv(&[1, 0, -1])),
        ];
        let g = generators(3, &rows);
        assert!(g.lines.is_empty());
        let mut rays = g.rays.clone();
        rays.sort();
        assert_eq!(rays, vec![iv(&[1, 0, 0]), iv(&[1, 0, 1]), iv(&[1, 1, 0]), iv(&[1, 1, 1])]);
    }

    #[test]
    fn cube_and_octahedron_counts() {
        let mut rows = vec![Row::ge(iv(&[1, 0, 0, 0]))];
        for k in 1..4 {
            let mut lo = vec![0; 4];
            lo[k] = 1;
            let mut hi = vec![1, 0, 0, 0];
            hi[k] = -1;
            rows.push(Row::ge(iv(&lo)));
            rows.push(Row::ge(iv(&hi)));
        }
        assert_eq!(generators(4, &rows).rays.len(), 8);
        let mut rows = vec![Row::ge(iv(&[1, 0, 0, 0]))];
        for s in 0..8 {
            let sg = |b: i64| if s & b == 0 { 1 } else { -1 };
            rows.push(Row::ge(iv(&[1, -sg(1), -sg(2), -sg(4)])));
        }
        assert_eq!(generators(4, &rows).rays.len(), 6);
    }

    #[test]
    fn equalities_and_lines() {
        // x = z in 3-space with y0 free: lineality of dimension 2
        let g = generators(3, &[Row::eq(iv(&[0, 1, -1]))]);
        assert_eq!(g.lines.len(), 2);
        assert!(g.rays.is_empty());
        let g = generators(3, &[Row::ge(iv(&[0, 1, -1]))]);
        assert_eq!((g.lines.len(), g.rays.len()), (2, 1));
    }

    #[test]
    fn infeasible_cone_is_origin() {
        let g = generators(2, &[Row::ge(iv(&[1, 0])), Row::ge(iv(&[-1, 0])), Row::ge(iv(&[0, 1])), Row::ge(iv(&[-1, -1]))]);
        assert!(g.lines.is_empty() && g.rays.is_empty());
    }
}
