//! Generalized subdivision patterns `(K_{s_1..s_r})'` and sided copy detection.
//!
//! A pattern with parts `[s_1, .., s_r]` has left vertices `(i, j)` for
//! `j < s_i`, enumerated part by part, and right vertices `(j_1, .., j_r)` in
//! lexicographic order; `(i, j)` is adjacent to `(j_1, .., j_r)` iff
//! `j_i = j`. `[s, t]` is `K_{s,t}'` and `[s; r]` is `(K_s^r)'`.
//!
//! A copy in a host is an embedding injective on both sides that sends
//! pattern-left vertices into the host's left part and pattern-right
//! (subdivision) vertices into the host's right part.

use serde::{Deserialize, Serialize};

use crate::bigraph::{intersect_sorted, Bigraph};
use crate::error::{Error, Result};
use crate::matching::max_matching;

/// Default number of search nodes before a search gives up.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Default cap on the number of right (subdivision) vertices of a pattern.
pub const DEFAULT_MAX_PATTERN_RIGHT: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PatternJson", into = "PatternJson")]
pub struct SubdividedPattern {
    parts: Vec<usize>,
    right_count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternJson {
    pub parts: Vec<usize>,
}

impl TryFrom<PatternJson> for SubdividedPattern {
    type Error = Error;
    fn try_from(raw: PatternJson) -> Result<Self> {
        SubdividedPattern::new(raw.parts)
    }
}

impl From<SubdividedPattern> for PatternJson {
    fn from(p: SubdividedPattern) -> Self {
        PatternJson { parts: p.parts }
    }
}

impl SubdividedPattern {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        Self::with_limit(parts, DEFAULT_MAX_PATTERN_RIGHT)
    }

    /// Like [`SubdividedPattern::new`] with an explicit cap on `Π s_i`.
    pub fn with_limit(parts: Vec<usize>, max_right: usize) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::input("a pattern needs at least one part"));
        }
        if parts.contains(&0) {
            return Err(Error::input("pattern parts must be positive"));
        }
        let mut right_count: usize = 1;
        for &p in &parts {
            right_count = right_count.checked_mul(p).filter(|&r| r <= max_right).ok_or_else(|| {
                Error::Capacity(format!(
                    "pattern {parts:?} has more than {max_right} subdivision vertices"
                ))
            })?;
        }
        Ok(SubdividedPattern { parts, right_count })
    }

    /// `K_{s,t}'`.
    pub fn biclique(s: usize, t: usize) -> Result<Self> {
        Self::new(vec![s, t])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn left_count(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    /// Index of the first left vertex of part `i`.
    pub fn part_offset(&self, part: usize) -> usize {
        self.parts[..part].iter().sum()
    }

    /// `(part, index within part)` of a left vertex.
    pub fn left_label(&self, a: usize) -> (usize, usize) {
        let mut rest = a;
        for (i, &p) in self.parts.iter().enumerate() {
            if rest < p {
                return (i, rest);
            }
            rest -= p;
        }
        panic!("left vertex {a} out of range");
    }

    /// Coordinates `(j_1, .., j_r)` of a right vertex.
    pub fn right_tuple(&self, w: usize) -> Vec<usize> {
        let mut tuple = vec![0; self.parts.len()];
        let mut rest = w;
        for (i, &p) in self.parts.iter().enumerate().rev() {
            tuple[i] = rest % p;
            rest /= p;
        }
        tuple
    }

    /// Right vertex with the given coordinates.
    pub fn right_index(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.parts).fold(0, |acc, (&j, &p)| acc * p + j)
    }

    /// Left neighbours of a right vertex, one per part.
    pub fn right_neighbors(&self, w: usize) -> Vec<usize> {
        self.right_tuple(w)
            .iter()
            .enumerate()
            .map(|(i, &j)| self.part_offset(i) + j)
            .collect()
    }

    /// Degree of every left vertex of part `i`: `Π_{k != i} s_k`.
    pub fn part_degree(&self, part: usize) -> usize {
        self.right_count / self.parts[part]
    }

    pub fn instantiate(&self) -> Bigraph {
        let mut adjacency = vec![Vec::new(); self.left_count()];
        for w in 0..self.right_count {
            for a in self.right_neighbors(w) {
                adjacency[a].push(w);
            }
        }
        Bigraph::from_sorted_adjacency(self.left_count(), self.right_count, adjacency)
    }
}

/// A sided copy of a pattern inside a host.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Embedding {
    pub left_map: Vec<usize>,
    pub right_map: Vec<usize>,
}

impl Embedding {
    /// Checks injectivity and edge preservation independently of any search.
    pub fn check(&self, host: &Bigraph, pattern: &SubdividedPattern) -> Result<()> {
        if self.left_map.len() != pattern.left_count() || self.right_map.len() != pattern.right_count() {
            return Err(Error::input("embedding size does not match pattern"));
        }
        let injective = |map: &[usize], bound: usize| {
            let mut seen = vec![false; bound];
            map.iter().all(|&x| x < bound && !std::mem::replace(&mut seen[x], true))
        };
        if !injective(&self.left_map, host.left_count()) {
            return Err(Error::input("left map is not an injection into the host's left part"));
        }
        if !injective(&self.right_map, host.right_count()) {
            return Err(Error::input("right map is not an injection into the host's right part"));
        }
        for w in 0..pattern.right_count() {
            for a in pattern.right_neighbors(w) {
                if !host.has_edge(self.left_map[a], self.right_map[w]) {
                    return Err(Error::input(format!(
                        "pattern edge ({a},{w}) is not mapped to a host edge"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self, host: &Bigraph, pattern: &SubdividedPattern) -> bool {
        self.check(host, pattern).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub node_budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Finds a sided copy of `pattern` in `host`, or proves there is none.
pub fn find_embedding(host: &Bigraph, pattern: &SubdividedPattern) -> Result<Option<Embedding>> {
    find_embedding_with(host, pattern, &SearchOptions::default())
}

pub fn find_embedding_with(
    host: &Bigraph,
    pattern: &SubdividedPattern,
    options: &SearchOptions,
) -> Result<Option<Embedding>> {
    if pattern.left_count() > host.left_count() || pattern.right_count() > host.right_count() {
        return Ok(None);
    }
    let mut search = Search::new(host, pattern, options.node_budget);
    if search.descend(0)? {
        let embedding = search.result.take().expect("set on success");
        debug_assert!(embedding.is_valid(host, pattern));
        Ok(Some(embedding))
    } else {
        Ok(None)
    }
}

/// Backtracking over pattern-left placements. Pattern-right vertices are
/// never branched on: at every node the candidate sets of the touched
/// subdivision vertices must admit a system of distinct representatives,
/// and once all left vertices are placed that condition is exact.
struct Search<'a> {
    host: &'a Bigraph,
    order: Vec<usize>,
    /// Same-part predecessor in `order`, for symmetry breaking.
    part_prev: Vec<Option<usize>>,
    /// Same-part vertices still to be placed after position `d`.
    part_remaining: Vec<usize>,
    left_nbrs: Vec<Vec<usize>>,
    left_degree: Vec<usize>,
    right_eligible: Vec<bool>,
    placed: Vec<usize>,
    used_left: Vec<bool>,
    candidates: Vec<Option<Vec<usize>>>,
    nodes: u64,
    budget: u64,
    result: Option<Embedding>,
}

const UNPLACED: usize = usize::MAX;

impl<'a> Search<'a> {
    fn new(host: &'a Bigraph, pattern: &SubdividedPattern, budget: u64) -> Self {
        let left_count = pattern.left_count();
        let mut left_nbrs = vec![Vec::new(); left_count];
        for w in 0..pattern.right_count() {
            for a in pattern.right_neighbors(w) {
                left_nbrs[a].push(w);
            }
        }
        // Parts with the highest per-vertex degree first.
        let mut part_order: Vec<usize> = (0..pattern.parts().len()).collect();
        part_order.sort_by_key(|&i| (std::cmp::Reverse(pattern.part_degree(i)), i));
        let mut order = Vec::with_capacity(left_count);
        let mut part_prev = Vec::with_capacity(left_count);
        let mut part_remaining = Vec::with_capacity(left_count);
        let mut left_degree = vec![0; left_count];
        for &i in &part_order {
            let offset = pattern.part_offset(i);
            let size = pattern.parts()[i];
            for j in 0..size {
                order.push(offset + j);
                part_prev.push((j > 0).then(|| offset + j - 1));
                part_remaining.push(size - j - 1);
                left_degree[offset + j] = pattern.part_degree(i);
            }
        }
        let arity = pattern.parts().len();
        let right_eligible = (0..host.right_count())
            .map(|v| host.right_neighbors(v).len() >= arity)
            .collect();
        Search {
            host,
            order,
            part_prev,
            part_remaining,
            left_nbrs,
            left_degree,
            right_eligible,
            placed: vec![UNPLACED; left_count],
            used_left: vec![false; host.left_count()],
            candidates: vec![None; pattern.right_count()],
            nodes: 0,
            budget,
            result: None,
        }
    }

    fn candidate_pool(&self, a: usize, lower: usize) -> Vec<usize> {
        let seed = self.left_nbrs[a]
            .iter()
            .filter_map(|&w| self.candidates[w].as_ref())
            .min_by_key(|c| c.len());
        let raw: Vec<usize> = match seed {
            Some(cands) => {
                let mut pool: Vec<usize> = cands
                    .iter()
                    .flat_map(|&y| self.host.right_neighbors(y).iter().copied())
                    .filter(|&x| x >= lower)
                    .collect();
                pool.sort_unstable();
                pool.dedup();
                pool
            }
            None => (lower..self.host.left_count()).collect(),
        };
        raw.into_iter()
            .filter(|&x| !self.used_left[x] && self.admits(a, x))
            .collect()
    }

    /// Local feasibility of placing pattern vertex `a` at host vertex `x`.
    fn admits(&self, a: usize, x: usize) -> bool {
        let nbrs = self.host.neighbors(x);
        if nbrs.len() < self.left_degree[a] {
            return false;
        }
        self.left_nbrs[a].iter().all(|&w| match &self.candidates[w] {
            Some(c) => has_common(c, nbrs),
            None => nbrs.iter().any(|&v| self.right_eligible[v]),
        })
    }

    fn right_relaxation_holds(&self) -> bool {
        let active: Vec<Vec<usize>> = self.candidates.iter().flatten().cloned().collect();
        if active.iter().any(Vec::is_empty) {
            return false;
        }
        max_matching(&active).is_perfect()
    }

    fn descend(&mut self, depth: usize) -> Result<bool> {
        if depth == self.order.len() {
            let sets: Vec<Vec<usize>> = self
                .candidates
                .iter()
                .map(|c| c.clone().expect("every subdivision vertex is touched"))
                .collect();
            let matching = max_matching(&sets);
            if !matching.is_perfect() {
                return Ok(false);
            }
            self.result = Some(Embedding {
                left_map: self.placed.clone(),
                right_map: matching.assignment.into_iter().map(|v| v.expect("perfect")).collect(),
            });
            return Ok(true);
        }
        let a = self.order[depth];
        let lower = self.part_prev[depth].map_or(0, |b| self.placed[b] + 1);
        let need = self.part_remaining[depth];
        let pool = self.candidate_pool(a, lower);
        for (idx, &x) in pool.iter().enumerate() {
            if pool.len() - idx - 1 < need {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Budget { budget: self.budget });
            }
            let saved: Vec<(usize, Option<Vec<usize>>)> = self.left_nbrs[a]
                .iter()
                .map(|&w| (w, self.candidates[w].clone()))
                .collect();
            let nbrs = self.host.neighbors(x);
            for &w in &self.left_nbrs[a] {
                let next = match &self.candidates[w] {
                    Some(c) => intersect_sorted(c, nbrs),
                    None => nbrs.iter().copied().filter(|&v| self.right_eligible[v]).collect(),
                };
                self.candidates[w] = Some(next);
            }
            self.placed[a] = x;
            self.used_left[x] = true;
            if self.right_relaxation_holds() && self.descend(depth + 1)? {
                return Ok(true);
            }
            self.placed[a] = UNPLACED;
            self.used_left[x] = false;
            for (w, old) in saved {
                self.candidates[w] = old;
            }
        }
        Ok(false)
    }
}

fn has_common(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Exact number of embeddings (distinct map pairs), by plain enumeration of
/// all injective assignments. Independent of [`find_embedding`].
pub fn count_embeddings(host: &Bigraph, pattern: &SubdividedPattern) -> Result<u64> {
    count_embeddings_with(host, pattern, &SearchOptions::default())
}

pub fn count_embeddings_with(host: &Bigraph, pattern: &SubdividedPattern, options: &SearchOptions) -> Result<u64> {
    let mut e = Enumerator::new(host, pattern, options.node_budget, false);
    e.left(0)?;
    Ok(e.count)
}

/// Whether any embedding exists, by the same plain enumeration used in
/// [`count_embeddings`], stopping at the first hit.
pub fn exists_embedding_exhaustive(
    host: &Bigraph,
    pattern: &SubdividedPattern,
    options: &SearchOptions,
) -> Result<bool> {
    let mut e = Enumerator::new(host, pattern, options.node_budget, true);
    e.left(0)?;
    Ok(e.count > 0)
}

struct Enumerator<'a> {
    host: &'a Bigraph,
    right_nbrs: Vec<Vec<usize>>,
    left_map: Vec<usize>,
    right_map: Vec<usize>,
    used_left: Vec<bool>,
    used_right: Vec<bool>,
    count: u64,
    nodes: u64,
    budget: u64,
    stop_at_first: bool,
}

impl<'a> Enumerator<'a> {
    fn new(host: &'a Bigraph, pattern: &SubdividedPattern, budget: u64, stop_at_first: bool) -> Self {
        Enumerator {
            host,
            right_nbrs: (0..pattern.right_count()).map(|w| pattern.right_neighbors(w)).collect(),
            left_map: vec![0; pattern.left_count()],
            right_map: vec![0; pattern.right_count()],
            used_left: vec![false; host.left_count()],
            used_right: vec![false; host.right_count()],
            count: 0,
            nodes: 0,
            budget,
            stop_at_first,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget { budget: self.budget });
        }
        Ok(())
    }

    fn done(&self) -> bool {
        self.stop_at_first && self.count > 0
    }

    fn left(&mut self, a: usize) -> Result<()> {
        if a == self.left_map.len() {
            return self.right(0);
        }
        for x in 0..self.host.left_count() {
            if self.used_left[x] {
                continue;
            }
            self.tick()?;
            self.used_left[x] = true;
            self.left_map[a] = x;
            self.left(a + 1)?;
            self.used_left[x] = false;
            if self.done() {
                return Ok(());
            }
        }
        Ok(())
    }

    fn right(&mut self, w: usize) -> Result<()> {
        if w == self.right_map.len() {
            self.count += 1;
            return Ok(());
        }
        for y in 0..self.host.right_count() {
            if self.used_right[y] {
                continue;
            }
            let ok = self.right_nbrs[w]
                .iter()
                .all(|&a| self.host.has_edge(self.left_map[a], y));
            if !ok {
                continue;
            }
            self.tick()?;
            self.used_right[y] = true;
            self.right_map[w] = y;
            self.right(w + 1)?;
            self.used_right[y] = false;
            if self.done() {
                return Ok(());
            }
        }
        Ok(())
    }
}

/// Whether some `s` left vertices share at least `t` right neighbours.
pub fn contains_biclique(host: &Bigraph, s: usize, t: usize) -> bool {
    fn grow(host: &Bigraph, start: usize, remaining: usize, common: &[usize], t: usize) -> bool {
        if remaining == 0 {
            return common.len() >= t;
        }
        (start..host.left_count()).any(|u| {
            let next = intersect_sorted(common, host.neighbors(u));
            next.len() >= t && grow(host, u + 1, remaining - 1, &next, t)
        })
    }
    if s == 0 || t == 0 {
        return false;
    }
    let all: Vec<usize> = (0..host.right_count()).collect();
    grow(host, 0, s, &all, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(parts: &[usize]) -> SubdividedPattern {
        SubdividedPattern::new(parts.to_vec()).unwrap()
    }

    fn six_cycle() -> Bigraph {
        Bigraph::from_edges(3, 3, [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn instantiate_examples() {
        let g = pat(&[1, 1]).instantiate();
        assert_eq!((g.left_count(), g.right_count()), (2, 1));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 0), (1, 0)]);

        let g = pat(&[2, 2]).instantiate();
        assert_eq!((g.left_count(), g.right_count(), g.edge_count()), (4, 4, 8));
        assert!((0..4).all(|w| g.right_neighbors(w).len() == 2));
        assert!((0..4).all(|u| g.neighbors(u).len() == 2));

        let g = pat(&[2, 2, 2]).instantiate();
        assert_eq!((g.left_count(), g.right_count()), (6, 8));
        assert!((0..8).all(|w| g.right_neighbors(w).len() == 3));
    }

    #[test]
    fn right_tuples_are_lexicographic() {
        let p = pat(&[2, 3]);
        assert_eq!(p.right_tuple(0), vec![0, 0]);
        assert_eq!(p.right_tuple(1), vec![0, 1]);
        assert_eq!(p.right_tuple(3), vec![1, 0]);
        assert_eq!(p.right_index(&[1, 2]), 5);
        assert_eq!(p.right_neighbors(5), vec![1, 4]);
    }

    #[test]
    fn pattern_validation() {
        assert!(SubdividedPattern::new(vec![]).is_err());
        assert!(SubdividedPattern::new(vec![2, 0]).is_err());
        assert!(matches!(
            SubdividedPattern::with_limit(vec![10, 10], 50),
            Err(Error::Capacity(_))
        ));
        assert!(matches!(
            SubdividedPattern::new(vec![usize::MAX, 2]),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn find_examples() {
        let p = pat(&[2, 2]);
        let host = p.instantiate();
        let emb = find_embedding(&host, &p).unwrap().unwrap();
        assert!(emb.is_valid(&host, &p));
        assert_eq!(emb.left_map, vec![0, 1, 2, 3]);

        let host = Bigraph::complete(4, 4);
        assert!(find_embedding(&host, &p).unwrap().unwrap().is_valid(&host, &p));

        assert!(find_embedding(&six_cycle(), &p).unwrap().is_none());
        assert_eq!(count_embeddings(&six_cycle(), &p).unwrap(), 0);
    }

    #[test]
    fn count_examples() {
        let p = pat(&[1, 1]);
        assert_eq!(count_embeddings(&p.instantiate(), &p).unwrap(), 2);
        assert_eq!(count_embeddings(&Bigraph::empty(3, 3), &p).unwrap(), 0);
        assert_eq!(count_embeddings(&Bigraph::complete(2, 1), &p).unwrap(), 2);
        // K_{2,2}' in itself: permute within each part and swap the parts.
        let q = pat(&[2, 2]);
        assert_eq!(count_embeddings(&q.instantiate(), &q).unwrap(), 8);
        let r = pat(&[1, 2]);
        assert_eq!(count_embeddings(&r.instantiate(), &r).unwrap(), 2);
    }

    #[test]
    fn budget_is_distinct_from_absence() {
        let host = Bigraph::complete(6, 6);
        let p = pat(&[2, 3]);
        let tiny = SearchOptions { node_budget: 3 };
        assert!(matches!(
            count_embeddings_with(&host, &p, &tiny),
            Err(Error::Budget { .. })
        ));
        let none = find_embedding_with(&six_cycle(), &pat(&[2, 2]), &SearchOptions { node_budget: 1_000 });
        assert_eq!(none, Ok(None));
    }

    #[test]
    fn biclique_examples() {
        assert!(contains_biclique(&Bigraph::complete(2, 3), 2, 3));
        assert!(!contains_biclique(&six_cycle(), 2, 2));
        assert!(!contains_biclique(&Bigraph::empty(3, 3), 1, 1));
    }

    #[test]
    fn embedding_check_catches_defects() {
        let p = pat(&[1, 1]);
        let host = p.instantiate();
        let bad = Embedding {
            left_map: vec![0, 0],
            right_map: vec![0],
        };
        assert!(!bad.is_valid(&host, &p));
        let short = Embedding {
            left_map: vec![0],
            right_map: vec![0],
        };
        assert!(!short.is_valid(&host, &p));
    }

    #[test]
    fn hypergraph_subdivision_embeds_in_itself() {
        let p = pat(&[2, 2, 2]);
        let host = p.instantiate();
        let emb = find_embedding(&host, &p).unwrap().unwrap();
        assert!(emb.is_valid(&host, &p));
        // Removing one edge destroys the only copy up to symmetry.
        let edges: Vec<_> = host.edges().skip(1).collect();
        let damaged = Bigraph::from_edges(6, 8, edges).unwrap();
        assert!(find_embedding(&damaged, &p).unwrap().is_none());
    }
}
