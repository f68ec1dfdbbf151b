//! Turning a `K_{s,t}'` copy in a lifted system into `p` points with few
//! distinct distances.
//!
//! Each processed edge joins a lifted pair `(a, b)` and a quadric pair
//! `(c, d)` with `|ac| = |bd|`. The procedure collects the involved points
//! and labels pairs by other pairs of equal length; every labeled pair then
//! repeats a distance already counted.

use std::collections::{HashMap, HashSet};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lift::{lift, LiftedSystem, Orientation};
use super::{distinct_distance_count, q_formula, PlanarPointSet};
use crate::bigraph::binomial;
use crate::error::{Error, Result};
use crate::patterns::{find_embedding_with, Embedding, SearchOptions, SubdividedPattern};
use crate::scalar::ExactField;

type UPair = (usize, usize);

fn upair(a: usize, b: usize) -> UPair {
    (a.min(b), a.max(b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TPrimeEntry {
    /// Position among the `t` vertices of the copy.
    pub t_index: usize,
    pub vertex: usize,
    pub pair: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub pair: UPair,
    pub label: UPair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub i: usize,
    /// Points newly added during the round.
    pub p_i: usize,
    /// Labeled pairs produced during the round.
    pub ell_i: usize,
    /// False for a round cut short because `A` would exceed `p` points.
    pub complete: bool,
    pub labels_added: Vec<LabelRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessTrace {
    pub orientation: Orientation,
    pub s: usize,
    pub p: usize,
    pub t: usize,
    /// Points in the `s` vertices of the copy.
    pub s_points: Vec<usize>,
    pub tprime: Vec<TPrimeEntry>,
    pub rounds: Vec<RoundRecord>,
    /// The final `p` points.
    pub a: Vec<usize>,
    pub padded: Option<usize>,
    pub distinct_count: usize,
    pub sum_ell: usize,
    pub x: usize,
    pub y: usize,
    pub z: usize,
    /// Complete rounds with `ell_i <= 2s-2` and `p_i > ell_i`.
    pub claim_violations: Vec<usize>,
    /// `p_i <= 2s+2` for every round and `x+y+z <= ⌊p/(2s)⌋`.
    pub tally_bound_holds: bool,
    /// Every labeled pair has the squared length of its label.
    pub labels_consistent: bool,
    /// `distinct_count <= C(p,2) - sum_ell`.
    pub distinct_bound_holds: bool,
}

impl WitnessTrace {
    pub fn claim_holds(&self) -> bool {
        self.claim_violations.is_empty()
    }
}

struct Collector {
    order: Vec<usize>,
    members: HashSet<usize>,
}

impl Collector {
    fn new_points(&self, pts: &[usize]) -> Vec<usize> {
        let mut fresh: Vec<usize> = Vec::new();
        for &x in pts {
            if !self.members.contains(&x) && !fresh.contains(&x) {
                fresh.push(x);
            }
        }
        fresh
    }

    fn add(&mut self, x: usize) {
        if self.members.insert(x) {
            self.order.push(x);
        }
    }
}

/// Runs the round procedure on a copy of `[s, (2s+p)^2+1]` in `sys.host(orientation)`.
pub fn extract_witness<F: ExactField>(
    sys: &LiftedSystem<F>,
    orientation: Orientation,
    emb: &Embedding,
    p: usize,
    s: usize,
) -> Result<WitnessTrace> {
    if p == 0 || s == 0 {
        return Err(Error::input("p and s must be positive"));
    }
    let t = (2 * s + p) * (2 * s + p) + 1;
    let pattern = SubdividedPattern::biclique(s, t)?;
    let host = sys.host(orientation);
    emb.check(&host, &pattern)?;
    let left_pair = |x: usize| sys.vertex_pair(orientation, true, x);
    let right_pair = |y: usize| sys.vertex_pair(orientation, false, y);

    let mut s_points = Vec::new();
    for j in 0..s {
        let ((a, b), _) = left_pair(emb.left_map[j]);
        for x in [a, b] {
            if !s_points.contains(&x) {
                s_points.push(x);
            }
        }
    }
    if s_points.len() > p {
        return Err(Error::input(format!(
            "the s-side already holds {} > p points",
            s_points.len()
        )));
    }

    // T': each kept vertex brings a point not seen before.
    let mut seen: HashSet<usize> = s_points.iter().copied().collect();
    let mut tprime = Vec::new();
    for i in 0..t {
        if tprime.len() > p {
            break;
        }
        let vertex = emb.left_map[s + i];
        let ((a, b), _) = left_pair(vertex);
        if !(seen.contains(&a) && seen.contains(&b)) {
            seen.insert(a);
            seen.insert(b);
            tprime.push(TPrimeEntry {
                t_index: i,
                vertex,
                pair: (a, b),
            });
        }
    }
    if tprime.len() <= p {
        return Err(Error::Structural(format!(
            "only {} vertices qualify for T', need more than {p}",
            tprime.len()
        )));
    }

    let mut set = Collector {
        order: Vec::new(),
        members: HashSet::new(),
    };
    for &x in &s_points {
        set.add(x);
    }
    let mut labels: HashMap<UPair, UPair> = HashMap::new();
    let mut rounds = Vec::new();
    let mut stopped = false;
    'rounds: for (i, entry) in tprime.iter().enumerate() {
        let mut round = RoundRecord {
            i,
            p_i: 0,
            ell_i: 0,
            complete: true,
            labels_added: Vec::new(),
        };
        for j in 0..s {
            let w = emb.right_map[pattern.right_index(&[j, entry.t_index])];
            for left in [emb.left_map[j], entry.vertex] {
                let (lp, left_is_lifted) = left_pair(left);
                let (rp, _) = right_pair(w);
                let ((a, b), (c, d)) = if left_is_lifted { (lp, rp) } else { (rp, lp) };
                let fresh = set.new_points(&[a, b, c, d]);
                if set.order.len() + fresh.len() > p {
                    round.complete = false;
                    rounds.push(round);
                    stopped = true;
                    break 'rounds;
                }
                round.p_i += fresh.len();
                for x in fresh {
                    set.add(x);
                }
                if a == c || b == d {
                    return Err(Error::Structural(format!(
                        "edge between ({a},{b}) and ({c},{d}) has a degenerate pair"
                    )));
                }
                let (ac, bd) = (upair(a, c), upair(b, d));
                let new_label = match (labels.get(&ac).copied(), labels.get(&bd).copied()) {
                    (None, None) if ac != bd => Some((ac, bd)),
                    (None, Some(xy)) if xy != ac => Some((ac, xy)),
                    (Some(xy), None) if xy != bd => Some((bd, xy)),
                    _ => None,
                };
                if let Some((pair, label)) = new_label {
                    labels.insert(pair, label);
                    round.ell_i += 1;
                    round.labels_added.push(LabelRecord { pair, label });
                }
            }
        }
        rounds.push(round);
    }
    debug_assert!(stopped, "more than p rounds each add a point");

    let mut padded = None;
    if set.order.len() + 1 == p {
        let extra = (0..sys.points.len())
            .find(|x| !set.members.contains(x))
            .ok_or_else(|| Error::Structural("no point left to pad with".into()))?;
        set.add(extra);
        padded = Some(extra);
    }
    if set.order.len() != p {
        return Err(Error::Structural(format!(
            "procedure ended with {} points, expected {p} or {}",
            set.order.len(),
            p - 1
        )));
    }

    let sum_ell: usize = rounds.iter().map(|r| r.ell_i).sum();
    let count = |k: usize| rounds.iter().filter(|r| r.p_i == k).count();
    let (x, y, z) = (count(2 * s), count(2 * s + 1), count(2 * s + 2));
    let tally_bound_holds = rounds.iter().all(|r| r.p_i <= 2 * s + 2) && x + y + z <= p / (2 * s);
    let claim_violations = rounds
        .iter()
        .filter(|r| r.complete && r.ell_i + 2 <= 2 * s && r.p_i > r.ell_i)
        .map(|r| r.i)
        .collect();
    let labels_consistent = labels.iter().all(|(&(u, v), &(x, y))| {
        set.members.contains(&u)
            && set.members.contains(&v)
            && set.members.contains(&x)
            && set.members.contains(&y)
            && sys.points.squared_distance(u, v) == sys.points.squared_distance(x, y)
    });
    let subset = sys.points.subset(&set.order)?;
    let distinct_count = distinct_distance_count(&subset);
    let pairs = binomial(p as u64, 2).expect("small") as usize;
    let distinct_bound_holds = distinct_count + sum_ell <= pairs;
    Ok(WitnessTrace {
        orientation,
        s,
        p,
        t,
        s_points,
        tprime,
        rounds,
        a: set.order,
        padded,
        distinct_count,
        sum_ell,
        x,
        y,
        z,
        claim_violations,
        tally_bound_holds,
        labels_consistent,
        distinct_bound_holds,
    })
}

pub const DEFAULT_ATTEMPTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ViolationOptions {
    /// Random partitions tried before giving up.
    pub attempts: usize,
    pub search: SearchOptions,
}

impl Default for ViolationOptions {
    fn default() -> Self {
        ViolationOptions {
            attempts: DEFAULT_ATTEMPTS,
            search: SearchOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    pub distinct: usize,
    pub q: i64,
    /// Seed of the partition the copy was found in.
    pub lift_seed: u64,
    pub attempt: usize,
    pub trace: WitnessTrace,
}

/// Seed of partition attempt `k`: `seed` itself first, then ChaCha8 stream `k`.
pub fn attempt_seed(seed: u64, k: usize) -> u64 {
    if k == 0 {
        return seed;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    rng.next_u64()
}

/// Looks for `p` points with fewer than `q(p, s)` distinct distances by
/// finding a `[s, (2s+p)^2+1]` copy in the lift. Several random partitions are
/// tried, each in both orientations. The search skips trivial incidences,
/// which repeat a distance with itself and cannot produce a label.
pub fn find_violation<F: ExactField>(
    points: &PlanarPointSet<F>,
    p: usize,
    s: usize,
    seed: u64,
    options: &ViolationOptions,
) -> Result<Option<Violation>> {
    if p > points.len() {
        return Err(Error::input(format!("p = {p} exceeds the {} points", points.len())));
    }
    let q = q_formula(p, s)?;
    let t = (2 * s + p) * (2 * s + p) + 1;
    let pattern = SubdividedPattern::biclique(s, t)?;
    let mut exhausted = None;
    for attempt in 0..options.attempts {
        let lift_seed = attempt_seed(seed, attempt);
        let sys = lift(points, lift_seed)?;
        for orientation in [Orientation::LiftedLeft, Orientation::QuadricLeft] {
            let host = sys.nondegenerate_host(orientation);
            let emb = match find_embedding_with(&host, &pattern, &options.search) {
                Ok(Some(emb)) => emb,
                Ok(None) => continue,
                Err(e @ Error::Budget { .. }) => {
                    exhausted = Some(e);
                    continue;
                }
                Err(e) => return Err(e),
            };
            let trace = extract_witness(&sys, orientation, &emb, p, s)?;
            if (trace.distinct_count as i64) < q {
                return Ok(Some(Violation {
                    a: trace.a.clone(),
                    distinct: trace.distinct_count,
                    q,
                    lift_seed,
                    attempt,
                    trace,
                }));
            }
        }
    }
    match exhausted {
        Some(e) => Err(e),
        None => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PointSet;

    #[test]
    fn p_too_large() {
        let pts = PointSet::grid(2);
        assert!(matches!(
            find_violation(&pts, 5, 1, 0, &ViolationOptions::default()),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn attempt_seeds_differ() {
        assert_eq!(attempt_seed(7, 0), 7);
        assert_ne!(attempt_seed(7, 1), attempt_seed(7, 2));
    }

    #[test]
    fn small_p_on_grid() {
        // p = 3 needs t = 26.
        let pts = PointSet::grid(4);
        let v = find_violation(&pts, 3, 1, 1, &ViolationOptions::default())
            .unwrap()
            .unwrap();
        assert_eq!(v.a.len(), 3);
        assert!(v.trace.claim_holds());
        assert!(v.trace.labels_consistent && v.trace.distinct_bound_holds && v.trace.tally_bound_holds);
        let sub = pts.subset(&v.a).unwrap();
        assert_eq!(distinct_distance_count(&sub), v.distinct);
    }
}
