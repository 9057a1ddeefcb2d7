//! Finite non-redundant powersets and merge simplification.
//!
//! A powerset is an antichain of non-empty elements of a base domain. Its
//! denotation is the union of its disjuncts. Merging replaces groups of
//! disjuncts whose join is exact with that join, which keeps the denotation
//! and shrinks the collection.
//!
//! Pairs are scanned in lexicographic order of the disjuncts' text form and
//! the scan restarts after each merge, so results are reproducible. Different
//! orders can reach different pairwise-merged fixpoints.

use std::fmt;

use crate::bd::{detect_exact_join_bd, detect_exact_join_int_bd, BdShape, IntBdShape};
use crate::boxes::{detect_exact_join_box, BoxShape, IntInterval, NncInterval};
use crate::error::{check_dim, Error, Result};
use crate::nnc::{detect_exact_join_nnc, NncPolyhedron};
use crate::octagon::{detect_exact_join_int_oct, detect_exact_join_oct, IntOctShape, OctShape};
use crate::oracle::{self, bd_bbox, int_box_as_half_open, oct_bbox, GridPoints, Polyhedral};
use crate::polyhedra::{detect_exact_join_closed, CPolyhedron};
use crate::linear::PointVec;
use crate::rational::Rational;

/// Default bound on the size of the subsets tried by [`Powerset::full_merge`].
pub const DEFAULT_SIZE_CAP: usize = 4;

/// A base domain usable inside a [`Powerset`].
pub trait Disjunct: Clone + fmt::Display {
    fn dim(&self) -> usize;
    fn is_empty(&self) -> bool;
    fn is_subset(&self, other: &Self) -> Result<bool>;
    fn join(&self, other: &Self) -> Result<Self>;
    /// The two-element exactness predicate of the domain.
    fn join_is_exact(&self, other: &Self) -> Result<bool>;
    /// Whether `self ⊆ ⋃ parts`. May answer `false` when it cannot decide.
    fn covered_by(&self, parts: &[Self]) -> Result<bool>;
    /// Membership of a rational point.
    fn contains(&self, p: &[Rational]) -> bool;

    fn sort_key(&self) -> String {
        self.to_string()
    }
}

fn covered_polyhedral<S: Polyhedral>(target: &S, parts: &[S]) -> Result<bool> {
    let parts: Vec<NncPolyhedron> = parts.iter().map(Polyhedral::to_nnc).collect();
    oracle::covered_by(&target.to_nnc(), &parts)
}

// Integer domains: enumerate the integer points of the target's bounding box.
fn covered_on_grid<S: Disjunct>(target: &S, bbox: Result<Vec<(Rational, Rational)>>, parts: &[S]) -> Result<bool> {
    match bbox {
        Ok(bbox) => Ok(GridPoints::new(bbox, Rational::one())
            .filter(|p| target.contains(p))
            .all(|p| parts.iter().any(|s| s.contains(&p)))),
        Err(Error::Unbounded) => Ok(false),
        Err(e) => Err(e),
    }
}

macro_rules! disjunct_common {
    () => {
        fn dim(&self) -> usize {
            Self::dim(self)
        }
        fn is_empty(&self) -> bool {
            Self::is_empty(self)
        }
        fn is_subset(&self, other: &Self) -> Result<bool> {
            Self::is_subset(self, other)
        }
        fn join(&self, other: &Self) -> Result<Self> {
            Self::join(self, other)
        }
    };
}

impl Disjunct for BoxShape<NncInterval> {
    disjunct_common!();
    fn join_is_exact(&self, other: &Self) -> Result<bool> {
        Ok(detect_exact_join_box(self, other)?.is_exact())
    }
    fn covered_by(&self, parts: &[Self]) -> Result<bool> {
        covered_polyhedral(self, parts)
    }
    fn contains(&self, p: &[Rational]) -> bool {
        BoxShape::contains(self, p)
    }
}

impl Disjunct for BoxShape<IntInterval> {
    disjunct_common!();
    fn join_is_exact(&self, other: &Self) -> Result<bool> {
        Ok(detect_exact_join_box(self, other)?.is_exact())
    }
    fn covered_by(&self, parts: &[Self]) -> Result<bool> {
        let parts: Vec<_> = parts.iter().map(int_box_as_half_open).collect();
        covered_polyhedral(&int_box_as_half_open(self), &parts)
    }
    fn contains(&self, p: &[Rational]) -> bool {
        BoxShape::contains(self, p)
    }
}

impl Disjunct for BdShape {
    disjunct_common!();
    fn join_is_exact(&self, other: &Self) -> Result<bool> {
        Ok(detect_exact_join_bd(self, other)?.is_exact())
    }
    fn covered_by(&self, parts: &[Self]) -> Result<bool> {
        covered_polyhedral(self, parts)
    }
    fn contains(&self, p: &[Rational]) -> bool {
        BdShape::contains(self, p)
    }
}

impl Disjunct for IntBdShape {
    disjunct_common!();
    fn join_is_exact(&self, other: &Self) -> Result<bool> {
        Ok(detect_exact_join_int_bd(self, other)?.is_exact())
    }
    fn covered_by(&self, parts: &[Self]) -> Result<bool> {
        covered_on_grid(self, bd_bbox(self.as_rational()), parts)
    }
    fn contains(&self, p: &[Rational]) -> bool {
        IntBdShape::contains(self, p)
    }
}

impl Disjunct for OctShape {
    disjunct_common!();
    fn join_is_exact(&self, other: &Self) -> Result<bool> {
        Ok(detect_exact_join_oct(self, other)?.is_exact())
    }
    fn covered_by(&self, parts: &[Self]) -> Result<bool> {
        covered_polyhedral(self, parts)
    }
    fn contains(&self, p: &[Rational]) -> bool {
        OctShape::contains(self, p)
    }
}

impl Disjunct for IntOctShape {
    disjunct_common!();
    fn join_is_exact(&self, other: &Self) -> Result<bool> {
        Ok(detect_exact_join_int_oct(self, other)?.is_exact())
    }
    fn covered_by(&self, parts: &[Self]) -> Result<bool> {
        covered_on_grid(self, oct_bbox(self.closed(), self.dim()), parts)
    }
    fn contains(&self, p: &[Rational]) -> bool {
        IntOctShape::contains(self, p)
    }
}

impl Disjunct for CPolyhedron {
    disjunct_common!();
    fn join_is_exact(&self, other: &Self) -> Result<bool> {
        Ok(detect_exact_join_closed(self, other)?.is_exact())
    }
    fn covered_by(&self, parts: &[Self]) -> Result<bool> {
        covered_polyhedral(self, parts)
    }
    fn contains(&self, p: &[Rational]) -> bool {
        self.contains_point(p)
    }
}

impl Disjunct for NncPolyhedron {
    disjunct_common!();
    fn join_is_exact(&self, other: &Self) -> Result<bool> {
        Ok(detect_exact_join_nnc(self, other)?.is_exact())
    }
    fn covered_by(&self, parts: &[Self]) -> Result<bool> {
        oracle::covered_by(self, parts)
    }
    fn contains(&self, p: &[Rational]) -> bool {
        self.contains_point(p)
    }
}

/// Counters reported by the merge operations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MergeStats {
    pub before: usize,
    pub after: usize,
    /// Calls to the two-element exactness predicate.
    pub detection_calls: usize,
    /// Coverage checks on subsets of three or more disjuncts.
    pub subset_checks: usize,
}

/// Failure of a merge operation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MergeError<D: fmt::Debug> {
    /// Some subsets were larger than the cap and were not tried. The partial
    /// result is valid but may not be fully merged.
    #[error("subset size cap {cap} reached; result may not be fully merged")]
    SizeCapExceeded { cap: usize, partial: Powerset<D>, stats: MergeStats },
    #[error(transparent)]
    Domain(#[from] Error),
}

/// A finite antichain of non-empty elements of `D`.
#[derive(Clone, Debug, PartialEq)]
pub struct Powerset<D> {
    dim: usize,
    disjuncts: Vec<D>,
}

impl<D: Disjunct> Powerset<D> {
    /// The empty powerset, denoting the empty set.
    pub fn empty(dim: usize) -> Self {
        Powerset { dim, disjuncts: Vec::new() }
    }

    /// Drops empty elements and elements contained in another. Of several
    /// equal elements the first is kept.
    pub fn omega_reduce(dim: usize, elements: Vec<D>) -> Result<Self> {
        for e in &elements {
            check_dim(dim, e.dim())?;
        }
        let elements: Vec<D> = elements.into_iter().filter(|e| !e.is_empty()).collect();
        let mut keep = vec![true; elements.len()];
        for i in 0..elements.len() {
            for j in 0..elements.len() {
                if i == j || !keep[j] || !keep[i] {
                    continue;
                }
                if elements[i].is_subset(&elements[j])? {
                    // Equal elements: drop the later one.
                    if i < j && elements[j].is_subset(&elements[i])? {
                        keep[j] = false;
                    } else {
                        keep[i] = false;
                    }
                }
            }
        }
        let mut disjuncts: Vec<D> = elements.into_iter().zip(keep).filter_map(|(e, k)| k.then_some(e)).collect();
        disjuncts.sort_by_cached_key(Disjunct::sort_key);
        Ok(Powerset { dim, disjuncts })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.disjuncts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disjuncts.is_empty()
    }

    /// Disjuncts in lexicographic order of their text form.
    pub fn disjuncts(&self) -> &[D] {
        &self.disjuncts
    }

    /// Membership in the union of the disjuncts.
    pub fn contains(&self, p: &[Rational]) -> bool {
        self.disjuncts.iter().any(|d| d.contains(p))
    }

    /// `self ⊑ other`: every disjunct of `self` lies in some disjunct of `other`.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        check_dim(self.dim, other.dim)?;
        for d in &self.disjuncts {
            let mut found = false;
            for e in &other.disjuncts {
                if d.is_subset(e)? {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The least upper bound: the reduced union of both collections.
    pub fn join(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let all = self.disjuncts.iter().chain(&other.disjuncts).cloned().collect();
        Self::omega_reduce(self.dim, all)
    }

    /// Replaces pairs with exact joins until none is left.
    pub fn pairwise_merge(&self) -> Result<(Self, MergeStats)> {
        let mut stats = MergeStats { before: self.len(), ..MergeStats::default() };
        let current = self.pairwise_fixpoint(&mut stats)?;
        stats.after = current.len();
        Ok((current, stats))
    }

    fn pairwise_fixpoint(&self, stats: &mut MergeStats) -> Result<Self> {
        let mut current = self.clone();
        'scan: loop {
            let ds = &current.disjuncts;
            for i in 0..ds.len() {
                for j in i + 1..ds.len() {
                    stats.detection_calls += 1;
                    if ds[i].join_is_exact(&ds[j])? {
                        let joined = ds[i].join(&ds[j])?;
                        let mut rest: Vec<D> =
                            ds.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, d)| d.clone()).collect();
                        rest.push(joined);
                        current = Self::omega_reduce(current.dim, rest)?;
                        continue 'scan;
                    }
                }
            }
            return Ok(current);
        }
    }

    /// Replaces subsets of at least two disjuncts with exact joins until none
    /// is left. Subsets larger than `size_cap` are not tried; if the powerset
    /// is large enough to have such subsets, the result is returned inside
    /// [`MergeError::SizeCapExceeded`].
    pub fn full_merge(&self, size_cap: usize) -> std::result::Result<(Self, MergeStats), MergeError<D>>
    where
        D: fmt::Debug,
    {
        let mut stats = MergeStats { before: self.len(), ..MergeStats::default() };
        let mut current = self.pairwise_fixpoint(&mut stats)?;
        'scan: loop {
            for k in 3..=size_cap.min(current.len()) {
                let mut found = None;
                for_each_subset(current.len(), k, &mut |idx| {
                    if found.is_some() {
                        return Ok(());
                    }
                    let parts: Vec<D> = idx.iter().map(|&t| current.disjuncts[t].clone()).collect();
                    let mut joined = parts[0].clone();
                    for p in &parts[1..] {
                        joined = joined.join(p)?;
                    }
                    stats.subset_checks += 1;
                    if joined.covered_by(&parts)? {
                        found = Some((idx.to_vec(), joined));
                    }
                    Ok(())
                })?;
                if let Some((idx, joined)) = found {
                    let mut rest: Vec<D> = current
                        .disjuncts
                        .iter()
                        .enumerate()
                        .filter(|(t, _)| !idx.contains(t))
                        .map(|(_, d)| d.clone())
                        .collect();
                    rest.push(joined);
                    current = Self::omega_reduce(current.dim, rest)?.pairwise_fixpoint(&mut stats)?;
                    continue 'scan;
                }
            }
            break;
        }
        stats.after = current.len();
        if current.len() > size_cap.max(2) {
            return Err(MergeError::SizeCapExceeded { cap: size_cap, partial: current, stats });
        }
        Ok((current, stats))
    }
}

// Calls `f` on each k-subset of 0..n in lexicographic order.
fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if k > n {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < n - k + p) else { return Ok(()) };
        idx[pos] += 1;
        for t in pos + 1..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

impl<D: fmt::Display> fmt::Display for Powerset<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("powerset {")?;
        for (k, d) in self.disjuncts.iter().enumerate() {
            if k > 0 {
                f.write_str(";")?;
            }
            write!(f, " {d}")?;
        }
        f.write_str(" }")
    }
}

/// A point of the symmetric difference of two powersets' denotations found
/// on a grid, if any.
pub fn grid_difference<D: Disjunct>(
    a: &Powerset<D>,
    b: &Powerset<D>,
    bbox: Vec<(Rational, Rational)>,
    step: Rational,
) -> Option<PointVec> {
    GridPoints::new(bbox, step).find(|p| a.contains(p) != b.contains(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_system;

    fn bx(v: &[(i64, i64)]) -> BoxShape<NncInterval> {
        BoxShape::new(v.iter().map(|&(a, b)| NncInterval::closed(a, b)).collect())
    }

    fn bbox(lo: i64, hi: i64, n: usize) -> Vec<(Rational, Rational)> {
        vec![(Rational::from_int(lo), Rational::from_int(hi)); n]
    }

    #[test]
    fn omega_reduction() {
        let q = Powerset::omega_reduce(2, vec![bx(&[(0, 1), (0, 1)]), bx(&[(0, 1), (0, 1)])]).unwrap();
        assert_eq!(q.len(), 1);
        let q = Powerset::omega_reduce(2, vec![bx(&[(0, 1), (0, 1)]), bx(&[(0, 3), (0, 1)]), BoxShape::empty(2)]).unwrap();
        assert_eq!(q.disjuncts(), &[bx(&[(0, 3), (0, 1)])]);
        let b = [bx(&[(0, 1), (0, 2)]), bx(&[(1, 2), (0, 1)]), bx(&[(1, 3), (1, 2)])];
        assert_eq!(Powerset::omega_reduce(2, b.to_vec()).unwrap().len(), 3);
        assert!(Powerset::omega_reduce(1, vec![bx(&[(0, 1), (0, 1)])]).is_err());
    }

    #[test]
    fn order() {
        let b = [bx(&[(0, 1), (0, 2)]), bx(&[(1, 2), (0, 1)]), bx(&[(1, 3), (1, 2)])];
        let single = |d: &BoxShape<NncInterval>| Powerset::omega_reduce(2, vec![d.clone()]).unwrap();
        assert!(Powerset::empty(2).leq(&single(&b[0])).unwrap());
        assert!(single(&b[0]).leq(&single(&b[0].join(&b[1]).unwrap())).unwrap());
        let q = Powerset::omega_reduce(2, vec![b[0].clone(), b[1].clone()]).unwrap();
        assert!(!q.leq(&single(&b[2])).unwrap());
        assert!(q.leq(&q).unwrap());
    }

    #[test]
    fn bd_pair_merges_only_over_integers() {
        let bd3 = "x1 >= 0; x1 <= 3; x2 >= 0; x2 <= 2; x1 - x2 <= 2";
        let bd4 = "x1 >= 3; x1 <= 6; x2 >= 0; x2 <= 2";
        let sys = |s| parse_system(s, 2).unwrap();
        let ints = vec![IntBdShape::from_constraints(&sys(bd3)).unwrap(), IntBdShape::from_constraints(&sys(bd4)).unwrap()];
        let (m, stats) = Powerset::omega_reduce(2, ints.clone()).unwrap().pairwise_merge().unwrap();
        assert_eq!((m.len(), stats.before, stats.after, stats.detection_calls), (1, 2, 1, 1));
        let rats = vec![BdShape::from_constraints(&sys(bd3)).unwrap(), BdShape::from_constraints(&sys(bd4)).unwrap()];
        let (m, _) = Powerset::omega_reduce(2, rats).unwrap().pairwise_merge().unwrap();
        assert_eq!(m.len(), 2);
        let q = Powerset::omega_reduce(2, ints).unwrap();
        assert!(q.disjuncts()[0].covered_by(&[]).is_ok());
    }

    #[test]
    fn chain_of_intervals() {
        let q = Powerset::omega_reduce(1, vec![bx(&[(2, 3)]), bx(&[(0, 1)]), bx(&[(1, 2)])]).unwrap();
        let (m, _) = q.pairwise_merge().unwrap();
        assert_eq!(m.disjuncts(), &[bx(&[(0, 3)])]);
        assert_eq!(m.pairwise_merge().unwrap().0, m);
    }

    #[test]
    fn three_way_merge() {
        // Chained pairwise merges already collapse this one.
        let q = Powerset::omega_reduce(2, vec![bx(&[(0, 1), (0, 2)]), bx(&[(1, 2), (0, 1)]), bx(&[(1, 2), (1, 2)])]).unwrap();
        assert_eq!(q.pairwise_merge().unwrap().0.disjuncts(), &[bx(&[(0, 2), (0, 2)])]);
        // Every pair here is L-shaped.
        let q = Powerset::omega_reduce(2, vec![bx(&[(0, 2), (0, 1)]), bx(&[(0, 1), (0, 2)]), bx(&[(1, 2), (1, 2)])]).unwrap();
        let (p, _) = q.pairwise_merge().unwrap();
        assert_eq!(p.len(), 3);
        let (f, stats) = q.full_merge(DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(f.disjuncts(), &[bx(&[(0, 2), (0, 2)])]);
        assert!(stats.subset_checks >= 1);
        let half = Rational::new(1, 2);
        assert_eq!(grid_difference(&q, &f, bbox(-1, 3, 2), half), None);
        let (g, _) = q.full_merge(2).unwrap_or_else(|e| match e {
            MergeError::SizeCapExceeded { partial, .. } => (partial, MergeStats::default()),
            MergeError::Domain(e) => panic!("{e}"),
        });
        assert_eq!(g.len(), 3);
    }

    #[test]
    fn fixpoint_without_exact_subsets() {
        let q = Powerset::omega_reduce(2, vec![bx(&[(0, 1), (0, 1)]), bx(&[(2, 3), (2, 3)])]).unwrap();
        let (f, stats) = q.full_merge(DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(f, q);
        assert_eq!(stats.detection_calls, 1);
    }

    #[test]
    fn integer_boxes_merge_across_gaps() {
        let ib = |v: &[(i64, i64)]| BoxShape::new(v.iter().map(|&(a, b)| IntInterval::closed(a, b)).collect::<Vec<_>>());
        let q = Powerset::omega_reduce(2, vec![ib(&[(0, 0), (0, 1)]), ib(&[(1, 1), (0, 0)]), ib(&[(1, 1), (1, 1)])]).unwrap();
        let (f, _) = q.full_merge(DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(grid_difference(&q, &f, bbox(-1, 2, 2), Rational::one()), None);
    }

    #[test]
    fn text_form() {
        let q = Powerset::omega_reduce(1, vec![bx(&[(0, 1)]), bx(&[(3, 4)])]).unwrap();
        assert_eq!(q.to_string(), format!("powerset {{ {}; {} }}", bx(&[(0, 1)]), bx(&[(3, 4)])));
    }
}
