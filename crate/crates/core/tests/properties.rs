use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use subdivlab::bigraph::binomial;
use subdivlab::construct::{brute_extremal, kst_certificate, Extremal};
use subdivlab::distances::{energy, energy_bruteforce, lift};
use subdivlab::incidence::{incidence_graph, PlaneLine};
use subdivlab::patterns::{count_embeddings, find_embedding, SearchOptions};
use subdivlab::{Bigraph, Line, Point, PointSet, Rational, Side, SubdividedPattern};

fn graph(max_left: usize, max_right: usize) -> impl Strategy<Value = Bigraph> {
    (1..=max_left, 1..=max_right).prop_flat_map(|(m, n)| {
        proptest::collection::vec(any::<bool>(), m * n).prop_map(move |bits| {
            let edges = bits.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| (k / n, k % n));
            Bigraph::from_edges(m, n, edges).unwrap()
        })
    })
}

fn naive_biclique(g: &Bigraph, s: usize, t: usize) -> bool {
    let m = g.left_count();
    (0u32..(1 << m))
        .filter(|mask| mask.count_ones() as usize == s)
        .any(|mask| {
            let common = (0..g.right_count())
                .filter(|&v| (0..m).filter(|u| mask >> u & 1 == 1).all(|u| g.has_edge(u, v)))
                .count();
            common >= t
        })
}

proptest! {
    #[test]
    fn common_neighbourhood_is_intersection(g in graph(6, 8), mask in 1u32..64) {
        let set: Vec<usize> = (0..g.left_count()).filter(|u| mask >> u & 1 == 1).collect();
        prop_assume!(!set.is_empty());
        let got = g.common_neighborhood(&set).unwrap();
        let naive: Vec<usize> = (0..g.right_count())
            .filter(|&v| set.iter().all(|&u| g.has_edge(u, v)))
            .collect();
        prop_assert_eq!(got, naive);
    }

    #[test]
    fn total_weight_double_counts(g in graph(6, 8)) {
        let w = g.total_weight().unwrap();
        let by_right: u128 = (0..g.right_count())
            .map(|v| binomial(g.degree(Side::Right, v) as u64, 2).unwrap())
            .sum();
        prop_assert_eq!(w.w_u, by_right);
        if w.jensen_applicable {
            prop_assert!(w.jensen_holds);
        }
    }

    #[test]
    fn nprime_matches_tuple_enumeration(g in graph(5, 6), a in 0usize..5, b in 0usize..5) {
        prop_assume!(a != b && a < g.left_count() && b < g.left_count());
        let got: BTreeSet<usize> = g.nprime_neighborhood(&[a, b]).unwrap().into_iter().collect();
        let naive: BTreeSet<usize> = (0..g.left_count())
            .filter(|&x| x != a && x != b)
            .filter(|&x| {
                let na = g.common_neighborhood(&[a, x]).unwrap();
                let nb = g.common_neighborhood(&[b, x]).unwrap();
                na.iter().any(|v1| nb.iter().any(|v2| v1 != v2))
            })
            .collect();
        prop_assert_eq!(got, naive);
    }

    #[test]
    fn search_agrees_with_enumeration(g in graph(6, 8), which in 0usize..4) {
        let parts = [vec![1, 1], vec![1, 2], vec![2, 2], vec![2, 3]][which].clone();
        let p = SubdividedPattern::new(parts).unwrap();
        let found = find_embedding(&g, &p).unwrap();
        let count = count_embeddings(&g, &p).unwrap();
        prop_assert_eq!(found.is_some(), count > 0);
        if let Some(e) = found {
            prop_assert!(e.is_valid(&g, &p));
        }
    }

    #[test]
    fn adding_an_edge_keeps_copies(g in graph(5, 7), u in 0usize..5, v in 0usize..7) {
        let (u, v) = (u % g.left_count(), v % g.right_count());
        prop_assume!(!g.has_edge(u, v));
        let p = SubdividedPattern::new(vec![1, 2]).unwrap();
        let before = find_embedding(&g, &p).unwrap().is_some();
        let bigger = Bigraph::from_edges(g.left_count(), g.right_count(), g.edges().chain([(u, v)])).unwrap();
        prop_assert!(!before || find_embedding(&bigger, &p).unwrap().is_some());
    }

    #[test]
    fn kst_sound_on_biclique_free(g in graph(6, 8), which in 0usize..3) {
        let (s, t) = [(1, 2), (2, 2), (2, 3)][which];
        let cert = kst_certificate(&g, s, t).unwrap();
        if !naive_biclique(&g, s, t) {
            prop_assert!(cert.holds);
        }
        if !cert.holds {
            prop_assert!(naive_biclique(&g, s, t));
        }
    }

    #[test]
    fn energy_matches_quadruples(coords in proptest::collection::btree_set((-4i64..5, -4i64..5), 1..9)) {
        let pts = PointSet::from_ints(&coords.into_iter().collect::<Vec<_>>()).unwrap();
        let e = energy(&pts);
        prop_assert_eq!(e.energy, energy_bruteforce(&pts));
        let n = pts.len() as u64;
        prop_assert_eq!(e.classes.iter().map(|c| c.ordered_pair_count).sum::<u64>(), n * (n - 1));
    }

    #[test]
    fn lift_edges_are_equal_distances(coords in proptest::collection::btree_set((0i64..4, 0i64..4), 2..7), seed in any::<u64>()) {
        let pts = PointSet::from_ints(&coords.into_iter().collect::<Vec<_>>()).unwrap();
        let sys = lift(&pts, seed).unwrap();
        prop_assert!(sys.p1.len().abs_diff(sys.p2.len()) <= 1);
        for (i, &(c, d)) in sys.p2.iter().enumerate() {
            for (j, &(a, b)) in sys.p1.iter().enumerate() {
                prop_assert_eq!(sys.graph.has_edge(i, j), pts.squared_distance(a, c) == pts.squared_distance(b, d));
            }
        }
    }

    #[test]
    fn distinct_lines_share_at_most_one_point(
        raw in proptest::collection::vec((-3i64..4, -3i64..4, -3i64..4), 1..8),
        coords in proptest::collection::btree_set((-3i64..4, -3i64..4), 1..12),
    ) {
        let mut lines: Vec<Line> = raw.into_iter().filter_map(|(a, b, c)| Line::from_ints(a, b, c).ok()).collect();
        lines.sort_by_key(|l| format!("{l:?}"));
        lines.dedup();
        let points: Vec<Point> = coords.into_iter().map(|(x, y)| Point::from_ints(x, y)).collect();
        let g = incidence_graph(&points, &lines).unwrap();
        for (i, l) in lines.iter().enumerate() {
            for (j, p) in points.iter().enumerate() {
                prop_assert_eq!(g.has_edge(i, j), l.contains(p));
            }
        }
    }
}

#[test]
fn extremal_single_edge_pattern_equals_n() {
    let p = SubdividedPattern::new(vec![1, 1]).unwrap();
    for m in 1..=5usize {
        for n in 1..=(20 / m) {
            assert_eq!(
                brute_extremal(m, n, &p, 5_000_000).unwrap(),
                Extremal::Exact(n),
                "m={m} n={n}"
            );
        }
    }
}

#[test]
fn instantiated_patterns_contain_smaller_ones() {
    for s in 1..=3 {
        for t in s..=3 {
            let host = SubdividedPattern::biclique(s, t).unwrap().instantiate();
            for s2 in 1..=s {
                for t2 in 1..=t {
                    let p = SubdividedPattern::new(vec![s2, t2]).unwrap();
                    assert!(find_embedding(&host, &p).unwrap().is_some(), "[{s},{t}] ⊇ [{s2},{t2}]");
                }
            }
        }
    }
}

#[test]
fn budget_stops_search() {
    let host = Bigraph::complete(8, 12);
    let p = SubdividedPattern::new(vec![3, 3]).unwrap();
    let r = subdivlab::patterns::find_embedding_with(&host, &p, &SearchOptions { node_budget: 1 });
    assert!(matches!(r, Err(subdivlab::Error::Budget { .. })));
    let _ = Rational::from_integer(BigInt::from(0));
}
