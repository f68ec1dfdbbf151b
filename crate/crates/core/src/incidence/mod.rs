//! Exact point-line incidence geometry over the real and complex plane.
//!
//! Incidence graphs put lines on the left and points on the right, so an
//! `s`-by-`s` grid is literally a sided `[s, s]` copy whose subdivision
//! vertices are the grid points.

mod complex;
mod config;

use std::collections::{HashMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::bigraph::{intersect_count, Bigraph};
use crate::error::{Error, Result};
use crate::patterns::{find_embedding_with, SearchOptions, SubdividedPattern};
use crate::scalar::ExactField;

pub use complex::{complex_line_to_flat, flat_intersection, pairwise_flat_check, CLine, CPoint, Flat2InR4, FlatMeet};
pub use config::{ComplexConfig, PlanarConfig, RealConfig};

/// A line type with exact incidence and intersection.
pub trait PlaneLine: Clone + Eq + Hash + Debug {
    type Point: Clone + Eq + Hash + Debug;

    fn contains(&self, point: &Self::Point) -> bool;

    /// The unique common point, or `None` for parallel or equal lines.
    fn meet(&self, other: &Self) -> Option<Self::Point>;
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RPoint<F> {
    pub x: F,
    pub y: F,
}

impl<F: ExactField> RPoint<F> {
    pub fn new(x: F, y: F) -> Self {
        RPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        RPoint::new(F::from_i64(x), F::from_i64(y))
    }

    pub fn squared_distance(&self, other: &Self) -> F {
        let dx = self.x.clone() - other.x.clone();
        let dy = self.y.clone() - other.y.clone();
        dx.clone() * dx + dy.clone() * dy
    }
}

/// `a x + b y = c`, scaled so the first nonzero of `(a, b)` is `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RLine<F> {
    a: F,
    b: F,
    c: F,
}

impl<F: ExactField> RLine<F> {
    pub fn new(a: F, b: F, c: F) -> Result<Self> {
        let lead = if !a.is_zero() {
            a.clone()
        } else if !b.is_zero() {
            b.clone()
        } else {
            return Err(Error::input("line needs (a, b) != (0, 0)"));
        };
        Ok(RLine {
            a: a / lead.clone(),
            b: b / lead.clone(),
            c: c / lead,
        })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self> {
        RLine::new(F::from_i64(a), F::from_i64(b), F::from_i64(c))
    }

    /// The line through two distinct points.
    pub fn through(p: &RPoint<F>, q: &RPoint<F>) -> Result<Self> {
        if p == q {
            return Err(Error::input("two distinct points are needed"));
        }
        let a = q.y.clone() - p.y.clone();
        let b = p.x.clone() - q.x.clone();
        let c = a.clone() * p.x.clone() + b.clone() * p.y.clone();
        RLine::new(a, b, c)
    }

    pub fn coefficients(&self) -> (&F, &F, &F) {
        (&self.a, &self.b, &self.c)
    }
}

impl<F: ExactField> PlaneLine for RLine<F> {
    type Point = RPoint<F>;

    fn contains(&self, p: &RPoint<F>) -> bool {
        self.a.clone() * p.x.clone() + self.b.clone() * p.y.clone() == self.c
    }

    fn meet(&self, o: &Self) -> Option<RPoint<F>> {
        let det = self.a.clone() * o.b.clone() - self.b.clone() * o.a.clone();
        if det.is_zero() {
            return None;
        }
        let x = (self.c.clone() * o.b.clone() - self.b.clone() * o.c.clone()) / det.clone();
        let y = (self.a.clone() * o.c.clone() - self.c.clone() * o.a.clone()) / det;
        Some(RPoint { x, y })
    }
}

fn check_distinct<T: Eq + Hash + Debug>(items: &[T], what: &str) -> Result<()> {
    let mut seen = HashSet::with_capacity(items.len());
    for item in items {
        if !seen.insert(item) {
            return Err(Error::input(format!("duplicate {what} {item:?}")));
        }
    }
    Ok(())
}

/// Lines on the left, points on the right, an edge per exact incidence.
pub fn incidence_graph<L: PlaneLine>(points: &[L::Point], lines: &[L]) -> Result<Bigraph> {
    check_distinct(points, "point")?;
    check_distinct(lines, "line")?;
    let mut edges = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        for (j, p) in points.iter().enumerate() {
            if line.contains(p) {
                edges.push((i, j));
            }
        }
    }
    let graph = Bigraph::from_edges(lines.len(), points.len(), edges)?;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if intersect_count(graph.neighbors(i), graph.neighbors(j)) > 1 {
                return Err(Error::Structural(format!("lines {i} and {j} share two points")));
            }
        }
    }
    Ok(graph)
}

/// Lines `l1[i]`, `l2[j]` meeting at point index `points[i][j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridWitness {
    pub l1: Vec<usize>,
    pub l2: Vec<usize>,
    pub points: Vec<Vec<usize>>,
}

impl GridWitness {
    /// Geometric check, independent of the incidence graph.
    pub fn verify<L: PlaneLine>(&self, points: &[L::Point], lines: &[L]) -> bool {
        let s = self.l1.len();
        if self.l2.len() != s || self.points.len() != s || self.points.iter().any(|row| row.len() != s) {
            return false;
        }
        let all_lines: Vec<usize> = self.l1.iter().chain(&self.l2).copied().collect();
        if all_lines.iter().any(|&l| l >= lines.len()) || !distinct(&all_lines) {
            return false;
        }
        let flat: Vec<usize> = self.points.iter().flatten().copied().collect();
        if flat.iter().any(|&p| p >= points.len()) || !distinct(&flat) {
            return false;
        }
        (0..s).all(|i| {
            (0..s).all(|j| {
                let (a, b) = (&lines[self.l1[i]], &lines[self.l2[j]]);
                let p = &points[self.points[i][j]];
                a.contains(p) && b.contains(p) && a.meet(b).as_ref() == Some(p)
            })
        })
    }
}

fn distinct(xs: &[usize]) -> bool {
    let mut v = xs.to_vec();
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}

/// An `s`-by-`s` grid, found as a sided `[s, s]` copy in the incidence graph.
pub fn detect_grid<L: PlaneLine>(
    points: &[L::Point],
    lines: &[L],
    s: usize,
    options: &SearchOptions,
) -> Result<Option<GridWitness>> {
    if s == 0 {
        return Err(Error::input("s must be positive"));
    }
    let graph = incidence_graph(points, lines)?;
    let pattern = SubdividedPattern::biclique(s, s)?;
    let Some(emb) = find_embedding_with(&graph, &pattern, options)? else {
        return Ok(None);
    };
    let witness = GridWitness {
        l1: emb.left_map[..s].to_vec(),
        l2: emb.left_map[s..].to_vec(),
        points: (0..s)
            .map(|i| (0..s).map(|j| emb.right_map[pattern.right_index(&[i, j])]).collect())
            .collect(),
    };
    if !witness.verify(points, lines) {
        return Err(Error::Structural("grid witness failed geometric verification".into()));
    }
    Ok(Some(witness))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleWitness {
    pub lines: [usize; 3],
    /// `points[k]` is the meet of the two lines other than `lines[k]`.
    pub points: [usize; 3],
}

/// Three pairwise non-parallel lines whose three distinct pairwise meets are all in `points`.
pub fn detect_triangle<L: PlaneLine>(points: &[L::Point], lines: &[L]) -> Option<TriangleWitness> {
    let index: HashMap<&L::Point, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let k = lines.len();
    let meet_index = |i: usize, j: usize| lines[i].meet(&lines[j]).and_then(|p| index.get(&p).copied());
    for i in 0..k {
        for j in i + 1..k {
            let Some(pij) = meet_index(i, j) else { continue };
            for l in j + 1..k {
                let (Some(pil), Some(pjl)) = (meet_index(i, l), meet_index(j, l)) else {
                    continue;
                };
                if pij != pil && pij != pjl && pil != pjl {
                    return Some(TriangleWitness {
                        lines: [i, j, l],
                        points: [pjl, pil, pij],
                    });
                }
            }
        }
    }
    None
}
