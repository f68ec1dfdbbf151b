//! The lift of ordered point pairs to points and quadrics in `R^4`.
//!
//! `(a, b)` becomes the point `(a_x, a_y, b_x, b_y)` and `(c, d)` the quadric
//! `(x - c_x)^2 + (y - c_y)^2 = (z - d_x)^2 + (w - d_y)^2`, so the point of
//! `(a, b)` lies on the quadric of `(c, d)` iff `|ac| = |bd|`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PlanarPointSet;
use crate::bigraph::Bigraph;
use crate::error::{Error, Result};
use crate::scalar::ExactField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairPart {
    /// Lifted to a point.
    P1,
    /// Lifted to a quadric.
    P2,
}

/// Which family is searched as the left side of the pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    QuadricLeft,
    LiftedLeft,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftedSystem<F> {
    pub points: PlanarPointSet<F>,
    pub seed: u64,
    /// Pairs lifted to points, ascending.
    pub p1: Vec<(usize, usize)>,
    /// Pairs lifted to quadrics, ascending.
    pub p2: Vec<(usize, usize)>,
    /// Quadrics on the left, lifted points on the right.
    pub graph: Bigraph,
    /// `locate[a * n + b]`: part and index of the pair `(a, b)`.
    locate: Vec<(PairPart, usize)>,
}

impl<F: ExactField> LiftedSystem<F> {
    pub fn lifted_point(&self, j: usize) -> [F; 4] {
        let (a, b) = self.p1[j];
        let (pa, pb) = (&self.points.points()[a], &self.points.points()[b]);
        [pa.x.clone(), pa.y.clone(), pb.x.clone(), pb.y.clone()]
    }

    /// Evaluates the equation of quadric `i` at lifted point `j`.
    pub fn quadric_contains(&self, i: usize, j: usize) -> bool {
        let (c, d) = self.p2[i];
        let (pc, pd) = (&self.points.points()[c], &self.points.points()[d]);
        let [x, y, z, w] = self.lifted_point(j);
        let sq = |u: F| u.clone() * u;
        sq(x - pc.x.clone()) + sq(y - pc.y.clone()) == sq(z - pd.x.clone()) + sq(w - pd.y.clone())
    }

    pub fn locate(&self, a: usize, b: usize) -> (PairPart, usize) {
        self.locate[a * self.points.len() + b]
    }

    /// The graph with the chosen family on the left.
    pub fn host(&self, orientation: Orientation) -> Bigraph {
        match orientation {
            Orientation::QuadricLeft => self.graph.clone(),
            Orientation::LiftedLeft => self.graph.transpose(),
        }
    }

    /// Whether quadric `i` meets lifted point `j` only because `ac` and `bd`
    /// are the same unordered pair (`a = b, c = d` or `a = d, b = c`).
    pub fn is_trivial(&self, i: usize, j: usize) -> bool {
        let ((a, b), (c, d)) = (self.p1[j], self.p2[i]);
        (a == b && c == d) || (a == d && b == c)
    }

    /// [`LiftedSystem::host`] without trivial incidences.
    pub fn nondegenerate_host(&self, orientation: Orientation) -> Bigraph {
        let edges = self.graph.edges().filter(|&(i, j)| !self.is_trivial(i, j));
        let graph = Bigraph::from_edges(self.graph.left_count(), self.graph.right_count(), edges)
            .expect("subset of a valid edge set");
        match orientation {
            Orientation::QuadricLeft => graph,
            Orientation::LiftedLeft => graph.transpose(),
        }
    }

    /// The point pair of a host vertex, and whether it is a lifted point.
    pub fn vertex_pair(&self, orientation: Orientation, left_side: bool, x: usize) -> ((usize, usize), bool) {
        let quadric = left_side == (orientation == Orientation::QuadricLeft);
        if quadric {
            (self.p2[x], false)
        } else {
            (self.p1[x], true)
        }
    }
}

/// Splits all `n^2` ordered pairs uniformly at random into halves of sizes
/// `⌈n^2/2⌉` and `⌊n^2/2⌋` (ChaCha8 shuffle keyed by `seed`) and builds the
/// incidence graph. Edges come from squared-distance classes and each one is
/// re-checked against the quadric equation.
pub fn lift<F: ExactField>(points: &PlanarPointSet<F>, seed: u64) -> Result<LiftedSystem<F>> {
    let n = points.len();
    if n < 2 {
        return Err(Error::input("lifting needs at least two points"));
    }
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pairs.shuffle(&mut rng);
    let cut = pairs.len().div_ceil(2);
    let mut p1 = pairs[..cut].to_vec();
    let mut p2 = pairs[cut..].to_vec();
    p1.sort_unstable();
    p2.sort_unstable();
    let mut locate = vec![(PairPart::P1, 0); n * n];
    for (j, &(a, b)) in p1.iter().enumerate() {
        locate[a * n + b] = (PairPart::P1, j);
    }
    for (i, &(c, d)) in p2.iter().enumerate() {
        locate[c * n + d] = (PairPart::P2, i);
    }
    let ids = points.distance_ids();
    let mut edges = Vec::new();
    for (i, &(c, d)) in p2.iter().enumerate() {
        for (j, &(a, b)) in p1.iter().enumerate() {
            if ids[a][c] == ids[b][d] {
                if a == c || b == d {
                    return Err(Error::Structural(format!(
                        "incidence between ({a},{b}) and ({c},{d}) with a coincident pair"
                    )));
                }
                edges.push((i, j));
            }
        }
    }
    let graph = Bigraph::from_edges(p2.len(), p1.len(), edges)?;
    let system = LiftedSystem {
        points: points.clone(),
        seed,
        p1,
        p2,
        graph,
        locate,
    };
    for (i, j) in system.graph.edges() {
        if !system.quadric_contains(i, j) {
            return Err(Error::Structural(format!("edge ({i},{j}) is off its quadric")));
        }
    }
    Ok(system)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PointSet;

    #[test]
    fn partition_sizes() {
        let pts = PointSet::from_ints(&[(0, 0), (1, 0), (0, 1)]).unwrap();
        let sys = lift(&pts, 3).unwrap();
        assert_eq!((sys.p1.len(), sys.p2.len()), (5, 4));
        for a in 0..3 {
            for b in 0..3 {
                let (part, idx) = sys.locate(a, b);
                let list = if part == PairPart::P1 { &sys.p1 } else { &sys.p2 };
                assert_eq!(list[idx], (a, b));
            }
        }
        assert_eq!(lift(&pts, 3).unwrap(), sys);
    }

    #[test]
    fn incidence_example() {
        // a=(0,0), b=(1,1), c=(3,4), d=(4,5): |ac|^2 = 25 = |bd|^2.
        let pts = PointSet::from_ints(&[(0, 0), (1, 1), (3, 4), (4, 5)]).unwrap();
        let sys = (0..200u64)
            .map(|seed| lift(&pts, seed).unwrap())
            .find(|s| s.locate(0, 1).0 == PairPart::P1 && s.locate(2, 3).0 == PairPart::P2)
            .unwrap();
        let (_, j) = sys.locate(0, 1);
        let (_, i) = sys.locate(2, 3);
        assert!(sys.graph.has_edge(i, j));
        assert!(sys.quadric_contains(i, j));
    }

    #[test]
    fn trivial_incidences() {
        let pts = PointSet::grid(3);
        let sys = lift(&pts, 4).unwrap();
        let trivial = sys.graph.edges().filter(|&(i, j)| sys.is_trivial(i, j)).count();
        assert!(trivial > 0);
        let host = sys.nondegenerate_host(Orientation::QuadricLeft);
        assert_eq!(host.edge_count() + trivial, sys.graph.edge_count());
        assert_eq!(sys.nondegenerate_host(Orientation::LiftedLeft), host.transpose());
    }

    #[test]
    fn edges_match_distance_equality() {
        let pts = PointSet::grid(3);
        let sys = lift(&pts, 9).unwrap();
        for (i, &(c, d)) in sys.p2.iter().enumerate() {
            for (j, &(a, b)) in sys.p1.iter().enumerate() {
                let equal = pts.squared_distance(a, c) == pts.squared_distance(b, d);
                assert_eq!(sys.graph.has_edge(i, j), equal);
                if equal {
                    assert!(a != c && b != d);
                }
            }
        }
    }
}
