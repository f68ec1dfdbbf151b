//! Maximum bipartite matching (Hopcroft–Karp).
//!
//! Used to decide systems of distinct representatives: a family of candidate
//! sets has an SDR iff the maximum matching saturates every set.

use std::collections::{HashMap, VecDeque};

const UNMATCHED: usize = usize::MAX;

/// Result of a maximum matching computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// `assignment[i]` is the right element matched to left index `i`.
    pub assignment: Vec<Option<usize>>,
    pub size: usize,
}

impl Matching {
    pub fn is_perfect(&self) -> bool {
        self.size == self.assignment.len()
    }
}

/// Computes a maximum matching where left index `i` may be matched to any
/// element of `candidates[i]`. Right elements are arbitrary `usize` labels.
pub fn max_matching(candidates: &[Vec<usize>]) -> Matching {
    // Compress right labels to 0..k.
    let mut labels: HashMap<usize, usize> = HashMap::new();
    let mut names: Vec<usize> = Vec::new();
    let adj: Vec<Vec<usize>> = candidates
        .iter()
        .map(|cands| {
            cands
                .iter()
                .map(|&r| {
                    *labels.entry(r).or_insert_with(|| {
                        names.push(r);
                        names.len() - 1
                    })
                })
                .collect()
        })
        .collect();
    let (pair_left, size) = hopcroft_karp(&adj, names.len());
    let assignment = pair_left
        .into_iter()
        .map(|r| (r != UNMATCHED).then(|| names[r]))
        .collect();
    Matching { assignment, size }
}

/// True iff the candidate sets admit a system of distinct representatives.
pub fn has_sdr(candidates: &[Vec<usize>]) -> bool {
    if candidates.iter().any(Vec::is_empty) {
        return false;
    }
    max_matching(candidates).is_perfect()
}

fn hopcroft_karp(adj: &[Vec<usize>], right_count: usize) -> (Vec<usize>, usize) {
    let left_count = adj.len();
    let mut pair_left = vec![UNMATCHED; left_count];
    let mut pair_right = vec![UNMATCHED; right_count];
    let mut dist = vec![0usize; left_count];
    let mut size = 0;

    // Greedy warm start.
    for (u, nbrs) in adj.iter().enumerate() {
        if let Some(&v) = nbrs.iter().find(|&&v| pair_right[v] == UNMATCHED) {
            pair_left[u] = v;
            pair_right[v] = u;
            size += 1;
        }
    }

    loop {
        // BFS layering from free left vertices.
        let mut queue = VecDeque::new();
        let mut found_free = false;
        for u in 0..left_count {
            if pair_left[u] == UNMATCHED {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = pair_right[v];
                if w == UNMATCHED {
                    found_free = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found_free {
            break;
        }
        let mut iter_pos = vec![0usize; left_count];
        for u in 0..left_count {
            if pair_left[u] == UNMATCHED && augment(u, adj, &mut pair_left, &mut pair_right, &mut dist, &mut iter_pos) {
                size += 1;
            }
        }
    }
    (pair_left, size)
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    pair_left: &mut [usize],
    pair_right: &mut [usize],
    dist: &mut [usize],
    iter_pos: &mut [usize],
) -> bool {
    while iter_pos[u] < adj[u].len() {
        let v = adj[u][iter_pos[u]];
        iter_pos[u] += 1;
        let w = pair_right[v];
        let ok = if w == UNMATCHED {
            true
        } else if dist[w] == dist[u].wrapping_add(1) {
            augment(w, adj, pair_left, pair_right, dist, iter_pos)
        } else {
            false
        };
        if ok {
            pair_left[u] = v;
            pair_right[v] = u;
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}
