//! Dense weighted directed graphs with weights in ℚ ∪ {+∞}.

use std::fmt;

use crate::error::{check_dim, Result};
use crate::rational::{ExtendedRational, PlusInfinity, Rational};

/// Returned by closure when the graph has a negative-weight cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inconsistent;

impl fmt::Display for Inconsistent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("inconsistent graph")
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    n: usize,
    w: Vec<ExtendedRational>,
}

impl WeightedGraph {
    /// The graph with no arcs and a zero diagonal.
    pub fn new(n: usize) -> Self {
        let mut w = vec![PlusInfinity; n * n];
        for i in 0..n {
            w[i * n + i] = ExtendedRational::zero();
        }
        WeightedGraph { n, w }
    }

    /// Every weight, including the diagonal, set to `+∞`.
    pub fn top(n: usize) -> Self {
        WeightedGraph { n, w: vec![PlusInfinity; n * n] }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtendedRational {
        &self.w[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExtendedRational) {
        self.w[i * self.n + j] = v;
    }

    /// Lowers `w(i,j)` to `v` if `v` is smaller.
    pub fn tighten(&mut self, i: usize, j: usize, v: ExtendedRational) {
        let slot = &mut self.w[i * self.n + j];
        if v < *slot {
            *slot = v;
        }
    }

    /// Off-diagonal pairs with finite weight, in row-major order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.get(i, j).is_finite() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn arc_count(&self) -> usize {
        self.arcs().len()
    }

    /// `self ⊴ other`: pointwise `≤`.
    pub fn leq(&self, other: &Self) -> bool {
        self.n == other.n && self.w.iter().zip(&other.w).all(|(a, b)| a <= b)
    }

    pub fn lub(&self, other: &Self) -> Result<Self> {
        check_dim(self.n, other.n)?;
        let w = self.w.iter().zip(&other.w).map(|(a, b)| a.clone().max(b.clone())).collect();
        Ok(WeightedGraph { n: self.n, w })
    }

    pub fn glb(&self, other: &Self) -> Result<Self> {
        check_dim(self.n, other.n)?;
        let w = self.w.iter().zip(&other.w).map(|(a, b)| a.clone().min(b.clone())).collect();
        Ok(WeightedGraph { n: self.n, w })
    }

    /// Shortest-path closure by Floyd-Warshall.
    pub fn closure(&self) -> std::result::Result<WeightedGraph, Inconsistent> {
        let mut m = self.to_dense();
        floyd_warshall(&mut m, self.n)?;
        Ok(Self::from_dense(self.n, m))
    }

    pub fn is_consistent(&self) -> bool {
        self.closure().is_ok()
    }

    /// Whether the graph satisfies the closure conditions: zero diagonal and
    /// the triangle inequality.
    pub fn is_closed(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            if self.get(i, i) != &ExtendedRational::zero() {
                return false;
            }
        }
        for k in 0..n {
            for i in 0..n {
                if self.get(i, k).is_infinite() {
                    continue;
                }
                for j in 0..n {
                    if self.get(i, k).add(self.get(k, j)) < *self.get(i, j) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// A reduction of a closed, consistent graph: a subgraph with the same
    /// closure and no redundant arc.
    ///
    /// Nodes on zero-weight cycles are grouped in equivalence classes. Each
    /// class keeps a single zero cycle through its members, and between class
    /// leaders only arcs not implied by a two-step path are kept.
    pub fn reduction(&self) -> WeightedGraph {
        debug_assert!(self.is_closed());
        let n = self.n;
        let zero = ExtendedRational::zero();
        let mut leader: Vec<usize> = (0..n).collect();
        for i in 0..n {
            if leader[i] != i {
                continue;
            }
            for j in i + 1..n {
                if leader[j] == j && self.get(i, j).add(self.get(j, i)) == zero {
                    leader[j] = i;
                }
            }
        }
        let leaders: Vec<usize> = (0..n).filter(|&i| leader[i] == i).collect();
        let mut r = WeightedGraph::new(n);
        for &i in &leaders {
            for &j in &leaders {
                if i == j || self.get(i, j).is_infinite() {
                    continue;
                }
                let w = self.get(i, j);
                let implied = leaders
                    .iter()
                    .any(|&k| k != i && k != j && self.get(i, k).add(self.get(k, j)) <= *w);
                if !implied {
                    r.set(i, j, w.clone());
                }
            }
        }
        for &l in &leaders {
            let class: Vec<usize> = (0..n).filter(|&k| leader[k] == l).collect();
            if class.len() < 2 {
                continue;
            }
            for (k, &a) in class.iter().enumerate() {
                let b = class[(k + 1) % class.len()];
                r.set(a, b, self.get(a, b).clone());
            }
        }
        r
    }

    pub(crate) fn to_dense(&self) -> Vec<ExtendedRational> {
        self.w.clone()
    }

    pub(crate) fn from_dense(n: usize, w: Vec<ExtendedRational>) -> Self {
        WeightedGraph { n, w }
    }
}

/// In-place Floyd-Warshall on a row-major `n × n` matrix. The diagonal is
/// set to zero on success.
pub(crate) fn floyd_warshall(m: &mut [ExtendedRational], n: usize) -> std::result::Result<(), Inconsistent> {
    for i in 0..n {
        m[i * n + i] = m[i * n + i].clone().min(ExtendedRational::zero());
    }
    for k in 0..n {
        let row_k: Vec<ExtendedRational> = m[k * n..(k + 1) * n].to_vec();
        for i in 0..n {
            let Some(ik) = m[i * n + k].as_finite().cloned() else {
                continue;
            };
            let row_i = &mut m[i * n..(i + 1) * n];
            for (j, kj) in row_k.iter().enumerate() {
                if let ExtendedRational::Finite(kj) = kj {
                    let cand = &ik + kj;
                    match &row_i[j] {
                        ExtendedRational::Finite(cur) if *cur <= cand => {}
                        _ => row_i[j] = ExtendedRational::Finite(cand),
                    }
                }
            }
        }
        if (0..n).any(|i| m[i * n + i] < ExtendedRational::zero()) {
            return Err(Inconsistent);
        }
    }
    Ok(())
}

impl fmt::Debug for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightedGraph({}) {{", self.n)?;
        for (i, j) in self.arcs() {
            write!(f, " ({i},{j}):{}", self.get(i, j))?;
        }
        f.write_str(" }")
    }
}

pub fn weight(v: i64) -> ExtendedRational {
    ExtendedRational::Finite(Rational::from_int(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph(n: usize, arcs: &[(usize, usize, i64)]) -> WeightedGraph {
        let mut g = WeightedGraph::new(n);
        for &(i, j, w) in arcs {
            g.tighten(i, j, weight(w));
        }
        g
    }

    #[test]
    fn consistency_examples() {
        assert!(WeightedGraph::new(3).is_consistent());
        assert!(!graph(3, &[(1, 2, 1), (2, 1, -2)]).is_consistent());
    }

    #[test]
    fn closure_triangle() {
        let g = graph(3, &[(0, 1, 3), (1, 2, 4)]).closure().unwrap();
        assert_eq!(g.get(0, 2), &weight(7));
        assert_eq!(g.closure().unwrap(), g);
    }

    #[test]
    fn closure_of_fig4a_bd1() {
        // 0 ≤ x1 ≤ 3, 0 ≤ x2 ≤ 2 with node 0 as the zero node.
        let g = graph(3, &[(1, 0, 3), (0, 1, 0), (2, 0, 2), (0, 2, 0)]).closure().unwrap();
        assert_eq!(g.get(1, 2), &weight(3));
    }

    #[test]
    fn reduction_of_chain() {
        // x1 ≤ x2 ≤ x3, all within [0, 5].
        let mut arcs = vec![(1, 2, 0), (2, 3, 0)];
        for v in 1..=3 {
            arcs.push((v, 0, 5));
            arcs.push((0, v, 0));
        }
        let g = graph(4, &arcs).closure().unwrap();
        let r = g.reduction();
        assert_eq!(r.closure().unwrap(), g);
        assert_eq!(r.get(1, 2), &weight(0));
        assert_eq!(r.get(2, 3), &weight(0));
        assert!(r.get(1, 3).is_infinite());
        // x3 ≤ 5 and -x1 ≤ 0 are the only bounds needed.
        assert_eq!(r.arc_count(), 4);
        for (i, j) in r.arcs() {
            let mut probe = r.clone();
            probe.set(i, j, PlusInfinity);
            assert_ne!(probe.closure().unwrap(), g, "arc ({i},{j}) is redundant");
        }
    }

    #[test]
    fn reduction_handles_zero_cycles() {
        // x1 = x2 = x3 with x1 ≤ 1.
        let g = graph(4, &[(1, 2, 0), (2, 1, 0), (2, 3, 0), (3, 2, 0), (1, 0, 1)]).closure().unwrap();
        let r = g.reduction();
        assert_eq!(r.closure().unwrap(), g);
        assert_eq!(r.arc_count(), 4);
        assert_eq!(r.closure().unwrap().reduction(), r);
    }

    #[test]
    fn single_arc_reduction() {
        let g = graph(2, &[(0, 1, 3)]).closure().unwrap();
        assert_eq!(g.reduction(), g);
    }

    #[test]
    fn lub_glb_neutral_elements() {
        let g = graph(3, &[(0, 1, 3), (1, 2, -1)]);
        assert_eq!(g.lub(&g).unwrap(), g);
        assert_eq!(g.glb(&WeightedGraph::top(3)).unwrap(), g);
        assert!(g.lub(&WeightedGraph::new(2)).is_err());
    }

    fn arb_graph(n: usize) -> impl Strategy<Value = WeightedGraph> {
        proptest::collection::vec(proptest::option::weighted(0.4, -3i64..8), n * n).prop_map(move |ws| {
            let mut g = WeightedGraph::new(n);
            for (k, w) in ws.into_iter().enumerate() {
                let (i, j) = (k / n, k % n);
                if i != j {
                    if let Some(w) = w {
                        g.set(i, j, weight(w));
                    }
                }
            }
            g
        })
    }

    fn bellman_ford(g: &WeightedGraph, src: usize) -> Option<Vec<ExtendedRational>> {
        let n = g.node_count();
        let mut d = vec![PlusInfinity; n];
        d[src] = ExtendedRational::zero();
        for _ in 0..n {
            for (i, j) in g.arcs() {
                let c = d[i].add(g.get(i, j));
                if c < d[j] {
                    d[j] = c;
                }
            }
        }
        for (i, j) in g.arcs() {
            if d[i].add(g.get(i, j)) < d[j] {
                return None;
            }
        }
        Some(d)
    }

    proptest! {
        #[test]
        fn closure_matches_bellman_ford(g in (2usize..7).prop_flat_map(arb_graph)) {
            let n = g.node_count();
            let rows: Option<Vec<_>> = (0..n).map(|s| bellman_ford(&g, s)).collect();
            match (g.closure(), rows) {
                (Ok(c), Some(rows)) => {
                    for i in 0..n {
                        for j in 0..n {
                            prop_assert_eq!(c.get(i, j), &rows[i][j]);
                        }
                    }
                }
                (Err(_), None) => {}
                (a, b) => prop_assert!(false, "closure {:?} vs bellman-ford {:?}", a.is_ok(), b.is_some()),
            }
        }

        #[test]
        fn reduction_round_trips(g in (2usize..7).prop_flat_map(arb_graph)) {
            if let Ok(c) = g.closure() {
                let r = c.reduction();
                prop_assert!(r.leq(&WeightedGraph::top(c.node_count())));
                prop_assert_eq!(r.closure().unwrap(), c.clone());
                for (i, j) in r.arcs() {
                    prop_assert_eq!(r.get(i, j), c.get(i, j));
                }
                prop_assert_eq!(r.closure().unwrap().reduction(), r);
            }
        }

        #[test]
        fn lub_of_closed_is_closed(
            a in (3usize..6).prop_flat_map(arb_graph),
        ) {
            let n = a.node_count();
            let b = WeightedGraph::new(n);
            if let (Ok(ca), Ok(cb)) = (a.closure(), b.closure()) {
                prop_assert!(ca.lub(&cb).unwrap().is_closed());
            }
        }
    }
}
