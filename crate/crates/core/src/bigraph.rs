//! Sided bipartite graphs and the pair-weight primitives built on them.
//!
//! A [`Bigraph`] has a left part `U = 0..left_count` and a right part
//! `V = 0..right_count`. Graphs are immutable once built; every derived
//! quantity is a pure function of the graph.

use num_bigint::BigInt;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::has_sdr;
use crate::Rational;

/// Which side of the bipartition a vertex lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BigraphJson", into = "BigraphJson")]
pub struct Bigraph {
    left_count: usize,
    right_count: usize,
    adjacency: Vec<Vec<usize>>,
    right_adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

/// On-disk form: `{"left": m, "right": n, "edges": [[u, v], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BigraphJson {
    pub left: usize,
    pub right: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<BigraphJson> for Bigraph {
    type Error = Error;

    fn try_from(raw: BigraphJson) -> Result<Self> {
        Bigraph::from_edges(raw.left, raw.right, raw.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Bigraph> for BigraphJson {
    fn from(g: Bigraph) -> Self {
        BigraphJson {
            left: g.left_count,
            right: g.right_count,
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl Bigraph {
    /// Builds a graph from an edge list. Duplicate or out-of-range edges are
    /// rejected.
    pub fn from_edges(
        left_count: usize,
        right_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); left_count];
        for (u, v) in edges {
            if u >= left_count || v >= right_count {
                return Err(Error::input(format!(
                    "edge ({u},{v}) out of range for {left_count}x{right_count} graph"
                )));
            }
            adjacency[u].push(v);
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!("duplicate edge at left vertex {u}")));
            }
        }
        Ok(Self::from_sorted_adjacency(left_count, right_count, adjacency))
    }

    /// Internal constructor; `adjacency` must already be sorted, deduplicated and in range.
    pub(crate) fn from_sorted_adjacency(left_count: usize, right_count: usize, adjacency: Vec<Vec<usize>>) -> Self {
        let mut right_adjacency = vec![Vec::new(); right_count];
        let mut edge_count = 0;
        for (u, list) in adjacency.iter().enumerate() {
            edge_count += list.len();
            for &v in list {
                right_adjacency[v].push(u);
            }
        }
        Bigraph {
            left_count,
            right_count,
            adjacency,
            right_adjacency,
            edge_count,
        }
    }

    pub fn empty(left_count: usize, right_count: usize) -> Self {
        Self::from_sorted_adjacency(left_count, right_count, vec![Vec::new(); left_count])
    }

    pub fn complete(left_count: usize, right_count: usize) -> Self {
        let row: Vec<usize> = (0..right_count).collect();
        Self::from_sorted_adjacency(left_count, right_count, vec![row; left_count])
    }

    pub fn left_count(&self) -> usize {
        self.left_count
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    pub fn side_count(&self, side: Side) -> usize {
        match side {
            Side::Left => self.left_count,
            Side::Right => self.right_count,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted right neighbours of left vertex `u`.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    /// Sorted left neighbours of right vertex `v`.
    pub fn right_neighbors(&self, v: usize) -> &[usize] {
        &self.right_adjacency[v]
    }

    pub fn side_neighbors(&self, side: Side, x: usize) -> &[usize] {
        match side {
            Side::Left => &self.adjacency[x],
            Side::Right => &self.right_adjacency[x],
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.left_count && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn degree(&self, side: Side, x: usize) -> usize {
        self.side_neighbors(side, x).len()
    }

    pub fn max_degree(&self, side: Side) -> usize {
        (0..self.side_count(side))
            .map(|x| self.degree(side, x))
            .max()
            .unwrap_or(0)
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u, v)))
    }

    /// Swaps the roles of the two parts.
    pub fn transpose(&self) -> Bigraph {
        Self::from_sorted_adjacency(self.right_count, self.left_count, self.right_adjacency.clone())
    }

    /// Subgraph induced on the given vertex lists. Vertex `left_subset[i]`
    /// becomes left vertex `i` of the result, likewise on the right.
    pub fn induced_subgraph(&self, left_subset: &[usize], right_subset: &[usize]) -> Result<Bigraph> {
        let mut right_pos = vec![usize::MAX; self.right_count];
        for (i, &v) in right_subset.iter().enumerate() {
            if v >= self.right_count {
                return Err(Error::input(format!("right vertex {v} out of range")));
            }
            if right_pos[v] != usize::MAX {
                return Err(Error::input(format!("right vertex {v} listed twice")));
            }
            right_pos[v] = i;
        }
        let mut seen_left = vec![false; self.left_count];
        let mut adjacency = Vec::with_capacity(left_subset.len());
        for &u in left_subset {
            if u >= self.left_count {
                return Err(Error::input(format!("left vertex {u} out of range")));
            }
            if std::mem::replace(&mut seen_left[u], true) {
                return Err(Error::input(format!("left vertex {u} listed twice")));
            }
            let mut row: Vec<usize> = self.adjacency[u]
                .iter()
                .filter(|&&v| right_pos[v] != usize::MAX)
                .map(|&v| right_pos[v])
                .collect();
            row.sort_unstable();
            adjacency.push(row);
        }
        Ok(Self::from_sorted_adjacency(
            left_subset.len(),
            right_subset.len(),
            adjacency,
        ))
    }

    /// Copy of the graph with every edge at the listed left vertices removed.
    /// Vertex indices are preserved.
    pub fn without_left_edges(&self, left: &[usize]) -> Bigraph {
        let mut adjacency = self.adjacency.clone();
        for &u in left {
            if u < self.left_count {
                adjacency[u].clear();
            }
        }
        Self::from_sorted_adjacency(self.left_count, self.right_count, adjacency)
    }

    fn check_left(&self, u: usize) -> Result<()> {
        if u >= self.left_count {
            return Err(Error::input(format!(
                "left vertex {u} out of range (left_count={})",
                self.left_count
            )));
        }
        Ok(())
    }

    /// Right vertices adjacent to every member of `set`.
    pub fn common_neighborhood(&self, set: &[usize]) -> Result<Vec<usize>> {
        let (first, rest) = set
            .split_first()
            .ok_or_else(|| Error::input("common neighbourhood of an empty set"))?;
        self.check_left(*first)?;
        let mut acc = self.adjacency[*first].clone();
        for &u in rest {
            self.check_left(u)?;
            acc = intersect_sorted(&acc, &self.adjacency[u]);
        }
        Ok(acc)
    }

    /// `W(u,v) = |N({u,v})|` with its light/heavy classification for `K_{s,t}'`.
    pub fn pair_weight(&self, u: usize, v: usize, s: usize, t: usize) -> Result<PairWeightReport> {
        if u == v {
            return Err(Error::input("pair weight needs two distinct vertices"));
        }
        if s == 0 || t == 0 {
            return Err(Error::input("s and t must be positive"));
        }
        self.check_left(u)?;
        self.check_left(v)?;
        let weight = intersect_count(&self.adjacency[u], &self.adjacency[v]) as u64;
        let threshold = binomial((s + t) as u64, 2).expect("small");
        Ok(PairWeightReport {
            pair: (u.min(v), u.max(v)),
            weight,
            class: WeightClass::classify(weight, threshold as u64),
            threshold: threshold as u64,
        })
    }

    /// Sum of pair weights over all unordered left pairs, with the convexity
    /// lower bound `e^2 / (4n)`.
    pub fn total_weight(&self) -> Result<TotalWeight> {
        if self.right_count == 0 {
            return Err(Error::input("total weight needs a nonempty right part"));
        }
        let mut w_u: u128 = 0;
        for u in 0..self.left_count {
            for v in u + 1..self.left_count {
                w_u += intersect_count(&self.adjacency[u], &self.adjacency[v]) as u128;
            }
        }
        let e = BigInt::from(self.edge_count);
        let n = BigInt::from(self.right_count);
        let jensen_lower = Ratio::new(&e * &e, BigInt::from(4) * &n);
        // The convex bound n*C(e/n,2) >= e^2/(4n) needs average right degree >= 2.
        let applicable = self.edge_count >= 2 * self.right_count;
        let holds = Rational::from_integer(BigInt::from(w_u)) >= jensen_lower;
        Ok(TotalWeight {
            w_u,
            jensen_lower,
            jensen_applicable: applicable,
            jensen_holds: holds,
        })
    }

    /// Counts light edges of the weight graph and compares them with the
    /// required `W(U) / (4(s+t+1)^3)`, reporting whether the hypothesis
    /// `W(U) >= 8(s+t+1)^2 n` is met.
    pub fn light_edge_claim_check(&self, s: usize, t: usize) -> Result<LightEdgeReport> {
        if s == 0 || t == 0 {
            return Err(Error::input("s and t must be positive"));
        }
        let threshold = binomial((s + t) as u64, 2).expect("small") as usize;
        let mut w_u: u128 = 0;
        let mut light_count: u64 = 0;
        for u in 0..self.left_count {
            for v in u + 1..self.left_count {
                let w = intersect_count(&self.adjacency[u], &self.adjacency[v]);
                w_u += w as u128;
                if w >= 1 && w < threshold {
                    light_count += 1;
                }
            }
        }
        let k = (s + t + 1) as u128;
        let hypothesis_met = w_u >= 8 * k * k * self.right_count as u128;
        let required = Ratio::new(BigInt::from(w_u), BigInt::from(4 * k * k * k));
        let claim_holds = Rational::from_integer(BigInt::from(light_count)) >= required;
        Ok(LightEdgeReport {
            w_u,
            hypothesis_met,
            light_count,
            required,
            claim_holds,
        })
    }

    /// `N'(u_1..u_s)`: left vertices `x` outside the list for which distinct
    /// `v_i ∈ N(u_i) ∩ N(x)` exist. Decided by bipartite matching.
    pub fn nprime_neighborhood(&self, u_list: &[usize]) -> Result<Vec<usize>> {
        if u_list.is_empty() {
            return Err(Error::input("vertex list must be nonempty"));
        }
        for (i, &u) in u_list.iter().enumerate() {
            self.check_left(u)?;
            if u_list[..i].contains(&u) {
                return Err(Error::input(format!("vertex {u} repeated in list")));
            }
        }
        let result = (0..self.left_count)
            .filter(|x| !u_list.contains(x))
            .filter(|&x| {
                let cands: Vec<Vec<usize>> = u_list
                    .iter()
                    .map(|&u| intersect_sorted(&self.adjacency[u], &self.adjacency[x]))
                    .collect();
                has_sdr(&cands)
            })
            .collect();
        Ok(result)
    }

    /// The `k` vertices of largest degree on `side`, optionally restricted to
    /// a subset; ties broken by ascending index.
    pub fn top_k_by_degree(&self, side: Side, k: usize, restricted_to: Option<&[usize]>) -> Result<Vec<usize>> {
        let pool: Vec<usize> = match restricted_to {
            Some(subset) => {
                if let Some(&bad) = subset.iter().find(|&&x| x >= self.side_count(side)) {
                    return Err(Error::input(format!("vertex {bad} out of range")));
                }
                subset.to_vec()
            }
            None => (0..self.side_count(side)).collect(),
        };
        if k > pool.len() {
            return Err(Error::input(format!(
                "k={k} exceeds the {} available vertices",
                pool.len()
            )));
        }
        let mut ranked = pool;
        ranked.sort_by(|&a, &b| self.degree(side, b).cmp(&self.degree(side, a)).then(a.cmp(&b)));
        ranked.dedup();
        ranked.truncate(k);
        Ok(ranked)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightClass {
    Zero,
    Light,
    Heavy,
}

impl WeightClass {
    pub fn classify(weight: u64, threshold: u64) -> Self {
        if weight == 0 {
            WeightClass::Zero
        } else if weight < threshold {
            WeightClass::Light
        } else {
            WeightClass::Heavy
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWeightReport {
    pub pair: (usize, usize),
    pub weight: u64,
    pub class: WeightClass,
    /// `C(s+t, 2)`.
    pub threshold: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalWeight {
    pub w_u: u128,
    pub jensen_lower: Rational,
    /// Whether `e >= 2n`, the regime where the convexity bound is a theorem.
    pub jensen_applicable: bool,
    pub jensen_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LightEdgeReport {
    pub w_u: u128,
    pub hypothesis_met: bool,
    pub light_count: u64,
    pub required: Rational,
    pub claim_holds: bool,
}

/// Intersection of two ascending slices.
pub(crate) fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub(crate) fn intersect_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Ratio::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn common_neighborhood_examples() {
        let k23 = Bigraph::complete(2, 3);
        assert_eq!(k23.common_neighborhood(&[0, 1]).unwrap(), vec![0, 1, 2]);
        let g = Bigraph::from_edges(2, 3, [(0, 0), (0, 1), (1, 1), (1, 2)]).unwrap();
        assert_eq!(g.common_neighborhood(&[0, 1]).unwrap(), vec![1]);
        assert!(Bigraph::empty(3, 3).common_neighborhood(&[0]).unwrap().is_empty());
        assert!(g.common_neighborhood(&[5]).is_err());
        assert!(g.common_neighborhood(&[]).is_err());
    }

    #[test]
    fn pair_weight_examples() {
        let r = Bigraph::complete(2, 2).pair_weight(0, 1, 2, 2).unwrap();
        assert_eq!((r.weight, r.threshold, r.class), (2, 6, WeightClass::Light));
        let r = Bigraph::complete(2, 7).pair_weight(0, 1, 2, 2).unwrap();
        assert_eq!((r.weight, r.class), (7, WeightClass::Heavy));
        let r = Bigraph::empty(2, 2).pair_weight(0, 1, 2, 2).unwrap();
        assert_eq!((r.weight, r.class), (0, WeightClass::Zero));
        assert!(Bigraph::complete(2, 2).pair_weight(1, 1, 2, 2).is_err());
    }

    #[test]
    fn total_weight_examples() {
        let w = Bigraph::complete(2, 2).total_weight().unwrap();
        assert_eq!(w.w_u, 2);
        assert_eq!(w.jensen_lower, rat(2, 1));
        assert!(w.jensen_applicable && w.jensen_holds);

        let w = Bigraph::empty(2, 2).total_weight().unwrap();
        assert_eq!((w.w_u, w.jensen_lower.clone()), (0, rat(0, 1)));

        let w = Bigraph::complete(3, 3).total_weight().unwrap();
        assert_eq!(w.w_u, 9);
        assert_eq!(w.jensen_lower, rat(81, 12));
        assert!(Bigraph::empty(2, 0).total_weight().is_err());
    }

    #[test]
    fn convexity_bound_fails_below_average_degree_two() {
        // A perfect matching has e = n but W(U) = 0 < n/4.
        let g = Bigraph::from_edges(4, 4, (0..4).map(|i| (i, i))).unwrap();
        let w = g.total_weight().unwrap();
        assert!(!w.jensen_applicable);
        assert!(!w.jensen_holds);
    }

    #[test]
    fn light_edge_claim_examples() {
        let r = Bigraph::complete(2, 2).light_edge_claim_check(2, 2).unwrap();
        assert!(!r.hypothesis_met);
        let r = Bigraph::empty(3, 3).light_edge_claim_check(2, 2).unwrap();
        assert_eq!((r.w_u, r.light_count, r.hypothesis_met), (0, 0, false));
        let r = Bigraph::complete(8, 4).light_edge_claim_check(1, 1).unwrap();
        assert_eq!(r.w_u, 112);
        assert!(!r.hypothesis_met);
        assert_eq!(r.required, rat(112, 4 * 27));
    }

    #[test]
    fn nprime_examples() {
        assert_eq!(Bigraph::complete(3, 3).nprime_neighborhood(&[0, 1]).unwrap(), vec![2]);
        let path = Bigraph::from_edges(2, 1, [(0, 0), (1, 0)]).unwrap();
        assert_eq!(path.nprime_neighborhood(&[0]).unwrap(), vec![1]);
        assert!(Bigraph::empty(3, 3).nprime_neighborhood(&[0, 1]).unwrap().is_empty());
        assert!(path.nprime_neighborhood(&[0, 0]).is_err());
        // Both u_i share only right vertex 0 with x: no distinct representatives.
        let g = Bigraph::from_edges(3, 1, [(0, 0), (1, 0), (2, 0)]).unwrap();
        assert!(g.nprime_neighborhood(&[0, 1]).unwrap().is_empty());
    }

    #[test]
    fn top_k_examples() {
        // left degrees [3, 1, 2]
        let g = Bigraph::from_edges(3, 3, [(0, 0), (0, 1), (0, 2), (1, 0), (2, 0), (2, 1)]).unwrap();
        assert_eq!(g.top_k_by_degree(Side::Left, 2, None).unwrap(), vec![0, 2]);
        let flat = Bigraph::complete(3, 2);
        assert_eq!(flat.top_k_by_degree(Side::Left, 1, None).unwrap(), vec![0]);
        assert!(flat.top_k_by_degree(Side::Left, 0, None).unwrap().is_empty());
        assert!(flat.top_k_by_degree(Side::Left, 4, None).is_err());
        assert_eq!(g.top_k_by_degree(Side::Left, 1, Some(&[1, 2])).unwrap(), vec![2]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Bigraph::from_edges(1, 1, [(0, 0), (0, 0)]).is_err());
        assert!(Bigraph::from_edges(1, 1, [(0, 1)]).is_err());
    }

    #[test]
    fn json_round_trip_is_sorted() {
        let g = Bigraph::from_edges(2, 3, [(1, 2), (0, 1), (1, 0)]).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"left":2,"right":3,"edges":[[0,1],[1,0],[1,2]]}"#);
        let back: Bigraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Bigraph>(r#"{"left":1,"right":1,"edges":[[0,3]]}"#).is_err());
    }

    #[test]
    fn induced_subgraph_reindexes() {
        let g = Bigraph::complete(3, 3);
        let h = g.induced_subgraph(&[2, 0], &[1]).unwrap();
        assert_eq!((h.left_count(), h.right_count(), h.edge_count()), (2, 1, 2));
        assert!(g.induced_subgraph(&[0, 0], &[]).is_err());
    }
}
