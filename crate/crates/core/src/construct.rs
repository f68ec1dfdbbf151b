//! Random lower-bound constructions and extremal certificates.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigraph::{binomial, Bigraph, Side};
use crate::error::{Error, Result};
use crate::intmath::{floor_rational_power, pow};
use crate::patterns::{find_embedding_with, SearchOptions, SubdividedPattern};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub t: usize,
    #[serde(with = "crate::serde_rational")]
    pub epsilon: Rational,
    pub p: f64,
    pub edges_before: usize,
    /// Copies found and destroyed by the deletion loop.
    pub copies_found: usize,
    pub deleted_left: usize,
    pub edges_after: usize,
    pub seed: u64,
    /// Expected number of labeled copies before deletion, `(m)_{s+t} (n)_{st} p^{2st}`.
    pub expected_copies: f64,
    /// False when a search ran out of budget, so pattern-freeness is unproven.
    pub certified: bool,
    /// Whether `n <= m^(2-1/s-1/t)`, the range where few copies are expected.
    pub within_range: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub graph: Bigraph,
    pub report: ConstructionReport,
}

/// Edge probability `(ε m^(1-s-t) n^(-st))^(1/(2st-1))`, clamped to `1`.
pub fn edge_probability(m: usize, n: usize, s: usize, t: usize, epsilon: f64) -> f64 {
    let (m, n, s, t) = (m as f64, n as f64, s as f64, t as f64);
    let log_p = (epsilon.ln() + (1.0 - s - t) * m.ln() - s * t * n.ln()) / (2.0 * s * t - 1.0);
    log_p.exp().min(1.0)
}

/// `n <= m^(2-1/s-1/t)`, i.e. `n^(st) <= m^(2st-s-t)`.
pub fn within_range(m: usize, n: usize, s: usize, t: usize) -> bool {
    let (s, t) = (s as u64, t as u64);
    2 * s * t > s + t && pow(n as u64, s * t) <= pow(m as u64, 2 * s * t - s - t)
}

fn falling(x: usize, k: usize) -> f64 {
    (0..k).map(|i| x.saturating_sub(i) as f64).product()
}

/// Samples `G(m, n, p)` and deletes the lowest-index left vertex of every
/// `K_{s,t}'` copy until none is left.
pub fn random_lower_bound_graph(
    m: usize,
    n: usize,
    s: usize,
    t: usize,
    epsilon: &Rational,
    seed: u64,
    options: &SearchOptions,
) -> Result<Construction> {
    if m == 0 || n == 0 {
        return Err(Error::input("m and n must be positive"));
    }
    if s == 0 || s > t {
        return Err(Error::input("need 1 <= s <= t"));
    }
    if !epsilon.is_positive() {
        return Err(Error::input("epsilon must be positive"));
    }
    let within_range = within_range(m, n, s, t);
    let pattern = SubdividedPattern::biclique(s, t)?;
    let eps = epsilon.to_f64().unwrap_or(f64::MAX);
    let p = edge_probability(m, n, s, t, eps);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..m {
        for v in 0..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let mut graph = Bigraph::from_edges(m, n, edges)?;
    let edges_before = graph.edge_count();
    let mut copies_found = 0;
    let mut certified = true;
    loop {
        match find_embedding_with(&graph, &pattern, options) {
            Ok(Some(emb)) => {
                let victim = *emb.left_map.iter().min().expect("pattern has left vertices");
                graph = graph.without_left_edges(&[victim]);
                copies_found += 1;
            }
            Ok(None) => break,
            Err(Error::Budget { .. }) => {
                certified = false;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let expected_copies = falling(m, s + t) * falling(n, s * t) * p.powi(2 * (s * t) as i32);
    let report = ConstructionReport {
        m,
        n,
        s,
        t,
        epsilon: epsilon.clone(),
        p,
        edges_before,
        copies_found,
        deleted_left: copies_found,
        edges_after: graph.edge_count(),
        seed,
        expected_copies,
        certified,
        within_range,
    };
    Ok(Construction { graph, report })
}

/// Double-counting certificate for `K_{s,t}`-freeness with the `s`-side in `U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KstCertificate {
    /// `Σ_v C(deg v, s)`.
    pub lhs: u128,
    /// `(t-1) C(|U|, s)`.
    pub rhs: u128,
    pub holds: bool,
}

pub fn kst_certificate(graph: &Bigraph, s: usize, t: usize) -> Result<KstCertificate> {
    if s == 0 || t == 0 {
        return Err(Error::input("s and t must be positive"));
    }
    let choose = |n: usize| binomial(n as u64, s as u64).unwrap_or(u128::MAX);
    let lhs = (0..graph.right_count())
        .map(|v| choose(graph.degree(Side::Right, v)))
        .fold(0u128, u128::saturating_add);
    let rhs = choose(graph.left_count()).saturating_mul((t - 1) as u128);
    Ok(KstCertificate {
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extremal {
    Exact(usize),
    /// The search ran out of budget; the true value lies in `lower..=upper`.
    Bracket {
        lower: usize,
        upper: usize,
    },
}

pub const DEFAULT_EXTREMAL_BUDGET: u64 = 2_000_000;

/// Maximum edge count of an `m × n` graph with no copy of `pattern`, by
/// branch and bound over edges. Containment is monotone, so an edge whose
/// addition creates a copy is never included.
pub fn brute_extremal(m: usize, n: usize, pattern: &SubdividedPattern, budget: u64) -> Result<Extremal> {
    struct Dfs<'a> {
        m: usize,
        n: usize,
        pattern: &'a SubdividedPattern,
        adjacency: Vec<Vec<usize>>,
        best: usize,
        nodes: u64,
        budget: u64,
        upper: usize,
    }
    impl Dfs<'_> {
        fn graph(&self) -> Bigraph {
            Bigraph::from_sorted_adjacency(self.m, self.n, self.adjacency.clone())
        }
        /// Returns false when the budget ran out.
        fn go(&mut self, idx: usize, count: usize) -> Result<bool> {
            let total = self.m * self.n;
            self.best = self.best.max(count);
            if idx == total || count + (total - idx) <= self.best {
                return Ok(true);
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                self.upper = self.upper.max(count + total - idx);
                return Ok(false);
            }
            let (u, v) = (idx / self.n, idx % self.n);
            self.adjacency[u].push(v);
            let free = find_embedding_with(&self.graph(), self.pattern, &SearchOptions::default())?.is_none();
            let finished = if free { self.go(idx + 1, count + 1)? } else { true };
            self.adjacency[u].pop();
            if !finished {
                self.upper = self.upper.max(count + total - idx - 1);
                return Ok(false);
            }
            self.go(idx + 1, count)
        }
    }
    let mut dfs = Dfs {
        m,
        n,
        pattern,
        adjacency: vec![Vec::new(); m],
        best: 0,
        nodes: 0,
        budget,
        upper: 0,
    };
    if dfs.go(0, 0)? {
        Ok(Extremal::Exact(dfs.best))
    } else {
        Ok(Extremal::Bracket {
            lower: dfs.best,
            upper: dfs.upper.max(dfs.best),
        })
    }
}

/// One row of a threshold scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub t: usize,
    #[serde(with = "crate::serde_rational")]
    pub exponent: Rational,
    pub trial: usize,
    pub seed: u64,
    pub p: f64,
    pub edges_before: usize,
    pub copies: usize,
    pub edges_after: usize,
    pub ratio: f64,
    #[serde(skip)]
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub m: usize,
    pub n: usize,
    pub trials: usize,
    pub mean_ratio: f64,
    pub uncertified: usize,
}

/// Seed of trial `trial` for the `index`-th value of `m`: the first output of
/// the ChaCha8 stream `(index << 32) | trial` keyed by `seed`.
pub fn trial_seed(seed: u64, index: usize, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((index as u64) << 32) | trial as u64);
    rng.next_u64()
}

/// `n = ⌊m^exponent⌋` for a nonnegative rational exponent.
pub fn scan_size(m: usize, exponent: &Rational) -> Result<usize> {
    if exponent.is_negative() {
        return Err(Error::input("exponent must be nonnegative"));
    }
    let a = exponent
        .numer()
        .to_u64()
        .ok_or_else(|| Error::input("exponent too large"))?;
    let b = exponent
        .denom()
        .to_u64()
        .ok_or_else(|| Error::input("exponent too large"))?;
    Ok(floor_rational_power(m as u64, a, b) as usize)
}

#[allow(clippy::too_many_arguments)]
pub fn threshold_scan(
    s: usize,
    t: usize,
    exponent: &Rational,
    m_list: &[usize],
    trials: usize,
    seed: u64,
    epsilon: &Rational,
    options: &SearchOptions,
) -> Result<Vec<ScanRow>> {
    if s == 0 || t == 0 {
        return Err(Error::input("s and t must be positive"));
    }
    // exponent < 2 - 1/s - 1/t
    let limit = Rational::from_integer(BigInt::from(2))
        - Rational::new(BigInt::from(1), BigInt::from(s))
        - Rational::new(BigInt::from(1), BigInt::from(t));
    if *exponent >= limit {
        return Err(Error::input(format!("exponent must be below 2-1/s-1/t = {limit}")));
    }
    let jobs: Vec<(usize, usize, usize, usize)> = m_list
        .iter()
        .enumerate()
        .map(|(index, &m)| Ok((index, m, scan_size(m, exponent)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flat_map(|(index, m, n)| (0..trials).map(move |trial| (index, m, n, trial)))
        .collect();
    let mut rows = jobs
        .into_par_iter()
        .map(|(index, m, n, trial)| {
            let seed = trial_seed(seed, index, trial);
            let c = random_lower_bound_graph(m, n, s, t, epsilon, seed, options)?;
            let r = c.report;
            Ok(ScanRow {
                m,
                n,
                s,
                t,
                exponent: exponent.clone(),
                trial,
                seed,
                p: r.p,
                edges_before: r.edges_before,
                copies: r.copies_found,
                edges_after: r.edges_after,
                ratio: r.edges_after as f64 / n as f64,
                certified: r.certified,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.m, r.trial));
    Ok(rows)
}

/// Mean ratio per `m`, in order of first appearance.
pub fn scan_summary(rows: &[ScanRow]) -> Vec<ScanSummary> {
    let mut out: Vec<ScanSummary> = Vec::new();
    for r in rows {
        let entry = match out.iter_mut().find(|x| x.m == r.m) {
            Some(e) => e,
            None => {
                out.push(ScanSummary {
                    m: r.m,
                    n: r.n,
                    trials: 0,
                    mean_ratio: 0.0,
                    uncertified: 0,
                });
                out.last_mut().expect("just pushed")
            }
        };
        entry.trials += 1;
        entry.mean_ratio += r.ratio;
        entry.uncertified += usize::from(!r.certified);
    }
    for e in &mut out {
        e.mean_ratio /= e.trials as f64;
    }
    out
}

/// Count of consecutive `m`-pairs whose mean ratio does not decrease, out of the total.
pub fn nondecreasing_pairs(summary: &[ScanSummary]) -> (usize, usize) {
    let pairs = summary.len().saturating_sub(1);
    let ok = summary
        .windows(2)
        .filter(|w| w[1].mean_ratio >= w[0].mean_ratio)
        .count();
    (ok, pairs)
}
