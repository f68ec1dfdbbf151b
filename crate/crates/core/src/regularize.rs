//! Two-phase regularization of an unbalanced bipartite graph.
//!
//! Given `G = (U ⊔ V, E)` with `|V| >= |U|^(2-1/s)` and `|E| >= δ|V|`, the
//! first phase repeatedly keeps the top sixteenth of `V` by degree (and the
//! matching fraction `16^(-s/(2s-1))` of `U`) while those vertices carry at
//! least half the edges. The second phase shrinks the left side to
//! `|U'_i|^(1-1/s)` top-degree vertices until the half-rule fires or
//! `⌈s ln s⌉` rounds have passed. The output subgraph comes with a
//! certificate whose constants can be recomputed from the subgraph alone.
//!
//! Fractional sizes are floored exactly; a prescribed set that floors to
//! nothing is a [`Error::Degenerate`] error.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bigraph::{Bigraph, Side};
use crate::error::{Error, Result};
use crate::intmath::{floor_root_scaled, pow};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase1Round {
    pub i: usize,
    pub left: usize,
    pub right: usize,
    pub edges: usize,
    /// `|V_{i+1}| = ⌊|V_i|/16⌋`.
    pub next_right: usize,
    /// Edges of `G_i` incident to `V_{i+1}`.
    pub edges_into_next: usize,
    pub continued: bool,
    /// `|E(U_{i+1}, V_{i+1})| / (|E_i| / (2·16^(s/(2s-1))))` when the round continued.
    pub averaging_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Carve {
    /// `|Ṽ| = |V_ℓ| - |V_{ℓ+1}|`.
    pub tilde_right: usize,
    pub left: usize,
    pub edges: usize,
    /// `Δ_{G'}(Ṽ)`.
    pub max_right_degree: usize,
    /// `30·(16/15)^(s/(2s-1))·|E'|/|Ṽ|`.
    pub degree_bound: f64,
    pub degree_bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase2Round {
    pub i: usize,
    pub left: usize,
    pub edges: usize,
    /// `|U'_{i+1}| = ⌊|U'_i|^(1-1/s)⌋`.
    pub next_left: usize,
    pub edges_into_next: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    HalfRule,
    IterationCap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub phase1_rounds: Vec<Phase1Round>,
    pub ell: usize,
    /// `log2(|U|)/3`.
    pub ell_bound: f64,
    pub ell_within_bound: bool,
    pub carve: Carve,
    pub phase2_rounds: Vec<Phase2Round>,
    pub iteration_cap: usize,
    pub termination: Termination,
    /// Half-rule: `Δ(Ũ) <= 2|Ẽ|/|Ũ|^(1-1/s)`. Iteration cap: `|Ũ| <= |Ṽ|^(1/s)`.
    pub final_bound_holds: bool,
}

/// Constants achieved by a subgraph, each the largest `c` for which the
/// corresponding condition holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Achieved {
    /// `|Ṽ| >= |Ũ|^(2-1/s)`.
    pub c_i: bool,
    /// `|Ẽ| / (δ|Ṽ|)`.
    #[serde(with = "crate::serde_rational")]
    pub c_ii: Rational,
    /// `(|Ẽ|/|Ṽ|) / Δ(Ṽ)`; `None` when the subgraph has no edges.
    #[serde(with = "crate::serde_rational::option")]
    pub c_iii: Option<Rational>,
    /// Largest `c` with `c·δ^c·|Ũ|·Δ(Ũ)^(1-1/s) <= |Ẽ|`; `None` when unbounded.
    pub c_iv: Option<f64>,
    /// `ln|Ũ| / ln|U|`; `None` when `|U| <= 1`.
    pub c_size: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionCertificate {
    pub subgraph: Bigraph,
    /// Host indices of `Ũ` and `Ṽ`, in subgraph order.
    pub left_labels: Vec<usize>,
    pub right_labels: Vec<usize>,
    pub s: usize,
    #[serde(with = "crate::serde_rational")]
    pub delta: Rational,
    pub host_left_count: usize,
    pub achieved: Achieved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    pub trace: ReductionTrace,
    pub certificate: ReductionCertificate,
}

/// Outcome of [`verify_conditions`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub recomputed: Achieved,
    /// The constant `c` each condition is tested against.
    pub constant: f64,
    pub pass_i: bool,
    pub pass_ii: bool,
    pub pass_iii: bool,
    pub pass_iv: bool,
    /// Fields where the stored certificate disagrees with the recomputation.
    pub mismatches: Vec<String>,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        self.pass_i && self.pass_ii && self.pass_iii && self.pass_iv && self.mismatches.is_empty()
    }
}

/// `⌈s ln s⌉`, the phase-two iteration cap.
pub fn iteration_cap(s: usize) -> usize {
    let s = s as f64;
    (s * s.ln()).ceil() as usize
}

/// Explicit constant the conditions are checked against by default:
/// `2^-(cap+6)`. It absorbs the factor `30·(16/15)^(s/(2s-1)) < 32` lost in
/// the carve and a halving per phase-two round.
pub fn default_constant(s: usize) -> f64 {
    (2f64).powi(-(iteration_cap(s) as i32 + 6))
}

fn density_exponent(s: usize) -> f64 {
    s as f64 / (2 * s - 1) as f64
}

/// Runs both procedures on `graph`.
pub fn reduce(graph: &Bigraph, s: usize, delta: &Rational) -> Result<Reduction> {
    if s < 2 {
        return Err(Error::input("s must be at least 2"));
    }
    if *delta < Rational::from_integer(BigInt::from(1)) {
        return Err(Error::input("delta must be at least 1"));
    }
    let (m, n, e) = (graph.left_count(), graph.right_count(), graph.edge_count());
    if m == 0 {
        return Err(Error::input("left part is empty"));
    }
    let s64 = s as u64;
    if pow(n as u64, s64) < pow(m as u64, 2 * s64 - 1) {
        return Err(Error::input(format!("|V| = {n} is below |U|^(2-1/s) for |U| = {m}")));
    }
    if Rational::from_integer(BigInt::from(e)) < delta * BigInt::from(n) {
        return Err(Error::input(format!("|E| = {e} is below delta*|V|")));
    }

    // Phase one.
    let mut current = graph.clone();
    let mut left_labels: Vec<usize> = (0..m).collect();
    let mut right_labels: Vec<usize> = (0..n).collect();
    let mut phase1_rounds = Vec::new();
    let shrink = 16f64.powf(density_exponent(s));
    let next_right = loop {
        let i = phase1_rounds.len();
        let (mi, ni, ei) = (current.left_count(), current.right_count(), current.edge_count());
        let k_right = ni / 16;
        if k_right == 0 {
            return Err(Error::Degenerate(format!(
                "phase one round {i}: floor(|V_i|/16) is zero for |V_i| = {ni}"
            )));
        }
        let mut top_right = current.top_k_by_degree(Side::Right, k_right, None)?;
        top_right.sort_unstable();
        let into: usize = top_right.iter().map(|&v| current.degree(Side::Right, v)).sum();
        let mut round = Phase1Round {
            i,
            left: mi,
            right: ni,
            edges: ei,
            next_right: k_right,
            edges_into_next: into,
            continued: false,
            averaging_ratio: None,
        };
        if 2 * into < ei {
            phase1_rounds.push(round);
            break top_right;
        }
        // |U_{i+1}| = floor(|U_i| / 16^(s/(2s-1))): k^(2s-1) * 16^s <= |U_i|^(2s-1).
        let k_left = floor_root_scaled(&pow(mi as u64, 2 * s64 - 1), &pow(16, s64), 2 * s64 - 1) as usize;
        if k_left == 0 {
            return Err(Error::Degenerate(format!(
                "phase one round {i}: |U_{{i+1}}| floors to zero for |U_i| = {mi}"
            )));
        }
        let all_left: Vec<usize> = (0..mi).collect();
        let into_top = current.induced_subgraph(&all_left, &top_right)?;
        let mut top_left = into_top.top_k_by_degree(Side::Left, k_left, None)?;
        top_left.sort_unstable();
        let next = current.induced_subgraph(&top_left, &top_right)?;
        round.continued = true;
        round.averaging_ratio = Some(next.edge_count() as f64 / (0.5 * ei as f64 / shrink));
        phase1_rounds.push(round);
        left_labels = top_left.iter().map(|&u| left_labels[u]).collect();
        right_labels = top_right.iter().map(|&v| right_labels[v]).collect();
        current = next;
    };
    let ell = phase1_rounds.len() - 1;
    let ell_bound = (m as f64).log2() / 3.0;

    // Carve Ṽ = V_ℓ \ V_{ℓ+1} and U'.
    let m_ell = current.left_count();
    let mut in_next = vec![false; current.right_count()];
    for &v in &next_right {
        in_next[v] = true;
    }
    let tilde_v: Vec<usize> = (0..current.right_count()).filter(|&v| !in_next[v]).collect();
    let all_left: Vec<usize> = (0..m_ell).collect();
    let into_tilde = current.induced_subgraph(&all_left, &tilde_v)?;
    // |U'| = floor((15/16)^(s/(2s-1)) |U_ℓ|): k^(2s-1) * 16^s <= 15^s * |U_ℓ|^(2s-1).
    let k_prime = floor_root_scaled(
        &(pow(15, s64) * pow(m_ell as u64, 2 * s64 - 1)),
        &pow(16, s64),
        2 * s64 - 1,
    ) as usize;
    if k_prime == 0 {
        return Err(Error::Degenerate(format!("|U'| floors to zero for |U_ℓ| = {m_ell}")));
    }
    let mut u_prime = into_tilde.top_k_by_degree(Side::Left, k_prime, None)?;
    u_prime.sort_unstable();
    let g_prime = current.induced_subgraph(&u_prime, &tilde_v)?;
    let left_labels: Vec<usize> = u_prime.iter().map(|&u| left_labels[u]).collect();
    let right_labels: Vec<usize> = tilde_v.iter().map(|&v| right_labels[v]).collect();
    let max_right_degree = g_prime.max_degree(Side::Right);
    let degree_bound =
        30.0 * (16.0f64 / 15.0).powf(density_exponent(s)) * g_prime.edge_count() as f64 / tilde_v.len() as f64;
    let carve = Carve {
        tilde_right: tilde_v.len(),
        left: g_prime.left_count(),
        edges: g_prime.edge_count(),
        max_right_degree,
        degree_bound,
        degree_bound_holds: max_right_degree as f64 <= degree_bound,
    };

    // Phase two.
    let cap = iteration_cap(s);
    let all_right: Vec<usize> = (0..g_prime.right_count()).collect();
    let mut current = g_prime;
    let mut left_labels = left_labels;
    let mut phase2_rounds = Vec::new();
    let (termination, tilde, tilde_left_labels) = loop {
        let i = phase2_rounds.len();
        if i == cap {
            let labels = left_labels.clone();
            break (Termination::IterationCap, current, labels);
        }
        let (mi, ei) = (current.left_count(), current.edge_count());
        // floor(|U'_i|^(1-1/s)): k^s <= |U'_i|^(s-1).
        let k = floor_root_scaled(&pow(mi as u64, s64 - 1), &pow(1, 1), s64) as usize;
        let mut top = current.top_k_by_degree(Side::Left, k, None)?;
        top.sort_unstable();
        let into: usize = top.iter().map(|&u| current.degree(Side::Left, u)).sum();
        phase2_rounds.push(Phase2Round {
            i,
            left: mi,
            edges: ei,
            next_left: k,
            edges_into_next: into,
        });
        if 2 * into < ei {
            let mut in_top = vec![false; mi];
            for &u in &top {
                in_top[u] = true;
            }
            let rest: Vec<usize> = (0..mi).filter(|&u| !in_top[u]).collect();
            let sub = current.induced_subgraph(&rest, &all_right)?;
            let labels = rest.iter().map(|&u| left_labels[u]).collect();
            break (Termination::HalfRule, sub, labels);
        }
        current = current.induced_subgraph(&top, &all_right)?;
        left_labels = top.iter().map(|&u| left_labels[u]).collect();
    };

    let final_bound_holds = match termination {
        Termination::HalfRule => {
            let u_size = tilde.left_count() as f64;
            let bound = 2.0 * tilde.edge_count() as f64 / u_size.powf(1.0 - 1.0 / s as f64);
            tilde.max_degree(Side::Left) as f64 <= bound
        }
        Termination::IterationCap => pow(tilde.left_count() as u64, s64) <= pow(tilde.right_count() as u64, 1),
    };

    let trace = ReductionTrace {
        phase1_rounds,
        ell,
        ell_bound,
        ell_within_bound: ell as f64 <= ell_bound,
        carve,
        phase2_rounds,
        iteration_cap: cap,
        termination,
        final_bound_holds,
    };
    let achieved = achieved_constants(&tilde, s, delta, m);
    let certificate = ReductionCertificate {
        subgraph: tilde,
        left_labels: tilde_left_labels,
        right_labels,
        s,
        delta: delta.clone(),
        host_left_count: m,
        achieved,
    };
    Ok(Reduction { trace, certificate })
}

/// Computes the achieved constants of a subgraph from scratch.
pub fn achieved_constants(sub: &Bigraph, s: usize, delta: &Rational, host_left_count: usize) -> Achieved {
    let (u, v, e) = (sub.left_count(), sub.right_count(), sub.edge_count());
    let s64 = s as u64;
    let c_i = pow(v as u64, s64) >= pow(u as u64, 2 * s64 - 1);
    let c_ii = if v == 0 {
        Rational::zero()
    } else {
        Rational::from_integer(BigInt::from(e)) / (delta * BigInt::from(v))
    };
    let max_right = sub.max_degree(Side::Right);
    let c_iii = (max_right > 0).then(|| Ratio::new(BigInt::from(e), BigInt::from(v * max_right)));
    let max_left = sub.max_degree(Side::Left) as f64;
    let load = u as f64 * max_left.powf(1.0 - 1.0 / s as f64);
    let c_iv = largest_c_iv(load, e as f64, delta.to_f64().unwrap_or(f64::INFINITY));
    let c_size = (host_left_count > 1 && u > 0).then(|| (u as f64).ln() / (host_left_count as f64).ln());
    Achieved {
        c_i,
        c_ii,
        c_iii,
        c_iv,
        c_size,
    }
}

/// Largest `c >= 0` with `c·δ^c·load <= edges`, by bisection; `c·δ^c` is
/// increasing for `δ >= 1`.
fn largest_c_iv(load: f64, edges: f64, delta: f64) -> Option<f64> {
    if load <= 0.0 {
        return None;
    }
    let holds = |c: f64| c * delta.powf(c) * load <= edges;
    let mut hi = 1.0;
    while holds(hi) {
        hi *= 2.0;
        if hi > 1e12 {
            return None;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Recomputes every condition from the stored subgraph and compares with the
/// stored constants. `constant` defaults to [`default_constant`].
pub fn verify_conditions(cert: &ReductionCertificate, constant: Option<f64>) -> ConditionReport {
    let c = constant.unwrap_or_else(|| default_constant(cert.s));
    let recomputed = achieved_constants(&cert.subgraph, cert.s, &cert.delta, cert.host_left_count);
    let stored = &cert.achieved;
    let mut mismatches = Vec::new();
    if recomputed.c_i != stored.c_i {
        mismatches.push("c_i".to_string());
    }
    if recomputed.c_ii != stored.c_ii {
        mismatches.push("c_ii".to_string());
    }
    if recomputed.c_iii != stored.c_iii {
        mismatches.push("c_iii".to_string());
    }
    if recomputed.c_iv != stored.c_iv {
        mismatches.push("c_iv".to_string());
    }
    if recomputed.c_size != stored.c_size {
        mismatches.push("c_size".to_string());
    }
    if cert.left_labels.len() != cert.subgraph.left_count() || cert.right_labels.len() != cert.subgraph.right_count() {
        mismatches.push("labels".to_string());
    }
    let at_least = |x: Option<f64>| x.is_none_or(|x| x >= c);
    ConditionReport {
        pass_i: recomputed.c_i,
        pass_ii: recomputed.c_ii.to_f64().unwrap_or(0.0) >= c,
        pass_iii: at_least(recomputed.c_iii.as_ref().and_then(ToPrimitive::to_f64)),
        pass_iv: at_least(recomputed.c_iv),
        recomputed,
        constant: c,
        mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Rational {
        Rational::from_integer(BigInt::from(1))
    }

    #[test]
    fn complete_16_by_64_hand_trace() {
        let g = Bigraph::complete(16, 64);
        let r = reduce(&g, 2, &one()).unwrap();
        let t = &r.trace;
        assert_eq!(t.ell, 0);
        assert_eq!(t.phase1_rounds.len(), 1);
        assert_eq!(t.phase1_rounds[0].next_right, 4);
        assert_eq!(t.phase1_rounds[0].edges_into_next, 64);
        assert_eq!(t.carve.tilde_right, 60);
        // (15/16)^(2/3) * 16 = 15.05.., floored.
        assert_eq!(t.carve.left, 15);
        assert!(t.carve.degree_bound_holds);
        assert_eq!(t.iteration_cap, 2);
        // floor(15^(1/2)) = 3 top vertices carry 180 of 900 edges.
        assert_eq!(t.phase2_rounds[0].next_left, 3);
        assert_eq!(t.termination, Termination::HalfRule);
        let cert = &r.certificate;
        assert_eq!((cert.subgraph.left_count(), cert.subgraph.right_count()), (12, 60));
        assert!(cert.achieved.c_i);
        assert_eq!(cert.achieved.c_ii, Rational::from_integer(BigInt::from(12)));
        let report = verify_conditions(cert, None);
        assert!(report.all_pass(), "{report:?}");
        assert!(report.recomputed.c_ii >= Ratio::new(BigInt::from(1), BigInt::from(2)));
    }

    #[test]
    fn complete_hosts_keep_density_exponent() {
        for m in [16u64, 25, 32] {
            let n = crate::intmath::floor_rational_power(m, 3, 2) as usize;
            let n = if (n as u64).pow(2) < m.pow(3) { n + 1 } else { n };
            let r = reduce(&Bigraph::complete(m as usize, n), 2, &one()).unwrap();
            assert!(r.certificate.achieved.c_i, "m={m}");
            assert!(r.trace.ell_within_bound);
        }
    }

    #[test]
    fn tampering_is_flagged() {
        let r = reduce(&Bigraph::complete(16, 64), 2, &one()).unwrap();
        let mut cert = r.certificate.clone();
        let edges: Vec<_> = cert.subgraph.edges().skip(1).collect();
        cert.subgraph = Bigraph::from_edges(cert.subgraph.left_count(), cert.subgraph.right_count(), edges).unwrap();
        let report = verify_conditions(&cert, None);
        assert!(report.mismatches.contains(&"c_ii".to_string()));
        assert!(!report.all_pass());
    }

    #[test]
    fn single_vertex_subgraph_is_well_defined() {
        let cert = ReductionCertificate {
            subgraph: Bigraph::complete(1, 3),
            left_labels: vec![0],
            right_labels: vec![0, 1, 2],
            s: 2,
            delta: one(),
            host_left_count: 4,
            achieved: achieved_constants(&Bigraph::complete(1, 3), 2, &one(), 4),
        };
        let report = verify_conditions(&cert, None);
        assert!(report.pass_i);
        assert_eq!(report.recomputed.c_size, Some(0.0));
        assert!(report.mismatches.is_empty());
    }

    #[test]
    fn precondition_errors() {
        assert!(matches!(
            reduce(&Bigraph::complete(4, 8), 1, &one()),
            Err(Error::Input(_))
        ));
        // |V| = 7 < 4^(3/2) = 8
        assert!(matches!(
            reduce(&Bigraph::complete(4, 7), 2, &one()),
            Err(Error::Input(_))
        ));
        let sparse = Bigraph::from_edges(4, 8, [(0, 0)]).unwrap();
        assert!(matches!(reduce(&sparse, 2, &one()), Err(Error::Input(_))));
        let half = Ratio::new(BigInt::from(1), BigInt::from(2));
        assert!(matches!(
            reduce(&Bigraph::complete(4, 8), 2, &half),
            Err(Error::Input(_))
        ));
        // |V| = 8 < 16: V_1 floors to nothing.
        assert!(matches!(
            reduce(&Bigraph::complete(4, 8), 2, &one()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn planted_core_runs_phase_one() {
        // 32 right vertices adjacent to all 20 left vertices, 480 pendant right vertices.
        let (m, core, n) = (20usize, 32usize, 512usize);
        let mut edges = Vec::new();
        for v in 0..core {
            for u in 0..m {
                edges.push((u, v));
            }
        }
        for v in core..n {
            edges.push((v % m, v));
        }
        let g = Bigraph::from_edges(m, n, edges).unwrap();
        let r = reduce(&g, 2, &one()).unwrap();
        assert!(r.trace.phase1_rounds[0].continued);
        assert_eq!(r.trace.phase1_rounds[1].right, 32);
        assert_eq!(r.trace.phase1_rounds[1].left, 3);
        assert!(r.trace.carve.degree_bound_holds);
    }

    #[test]
    fn deterministic() {
        let g = Bigraph::complete(16, 70);
        let a = reduce(&g, 2, &one()).unwrap();
        let b = reduce(&g, 2, &one()).unwrap();
        assert_eq!(a, b);
    }
}
