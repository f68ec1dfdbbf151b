//! Distinct distances under local conditions.
//!
//! Squared distances are compared exactly, so `|ac| = |bd|` is decided as
//! `|ac|^2 = |bd|^2` without radicals.

mod lift;
mod witness;

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::bigraph::binomial;
use crate::error::{Error, Result};
use crate::incidence::{PlanarConfig, RPoint};
use crate::scalar::ExactField;

pub use lift::{lift, LiftedSystem, Orientation, PairPart};
pub use witness::{
    attempt_seed, extract_witness, find_violation, LabelRecord, RoundRecord, TPrimeEntry, Violation, ViolationOptions,
    WitnessTrace, DEFAULT_ATTEMPTS,
};

/// A set of distinct planar points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarPointSet<F> {
    points: Vec<RPoint<F>>,
}

impl<F: ExactField> PlanarPointSet<F> {
    pub fn new(points: Vec<RPoint<F>>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            if !seen.insert(p) {
                return Err(Error::input(format!("duplicate point {p:?}")));
            }
        }
        Ok(PlanarPointSet { points })
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&(x, y)| RPoint::from_ints(x, y)).collect())
    }

    /// The `k × k` integer grid, row by row.
    pub fn grid(k: usize) -> Self {
        let points = (0..k as i64)
            .flat_map(|x| (0..k as i64).map(move |y| RPoint::from_ints(x, y)))
            .collect();
        PlanarPointSet { points }
    }

    /// Reads the `points` of a real configuration; lines are ignored.
    pub fn from_json(text: &str) -> Result<Self> {
        match PlanarConfig::<F>::from_json(text)? {
            PlanarConfig::Real(c) => Self::new(c.points),
            PlanarConfig::Complex(_) => Err(Error::input("distance point sets must be real")),
        }
    }

    pub fn points(&self) -> &[RPoint<F>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn squared_distance(&self, a: usize, b: usize) -> F {
        self.points[a].squared_distance(&self.points[b])
    }

    /// `ids[a][b]` numbers the distinct squared distances, with `0` for `a == b`.
    pub fn distance_ids(&self) -> Vec<Vec<u32>> {
        let n = self.len();
        let mut table: HashMap<F, u32> = HashMap::new();
        table.insert(F::zero(), 0);
        let mut ids = vec![vec![0u32; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let next = table.len() as u32;
                let id = *table.entry(self.squared_distance(a, b)).or_insert(next);
                ids[a][b] = id;
                ids[b][a] = id;
            }
        }
        ids
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let points = indices
            .iter()
            .map(|&i| {
                self.points
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::input(format!("point index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }
}

/// Number of distinct squared distances over unordered pairs.
pub fn distinct_distance_count<F: ExactField>(set: &PlanarPointSet<F>) -> usize {
    let n = set.len();
    let mut seen = HashSet::new();
    for a in 0..n {
        for b in a + 1..n {
            seen.insert(set.squared_distance(a, b));
        }
    }
    seen.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalCheck {
    pub holds: bool,
    pub violating_subset: Option<Vec<usize>>,
    pub subsets_checked: u128,
}

pub const DEFAULT_SUBSET_BUDGET: u128 = 50_000_000;

/// Whether every `p` of the points determine at least `q` distinct distances.
pub fn check_local_condition<F: ExactField>(
    set: &PlanarPointSet<F>,
    p: usize,
    q: usize,
    budget: u128,
) -> Result<LocalCheck> {
    let n = set.len();
    if p > n {
        return Err(Error::input(format!("p = {p} exceeds the {n} points")));
    }
    if q == 0 {
        return Ok(LocalCheck {
            holds: true,
            violating_subset: None,
            subsets_checked: 0,
        });
    }
    let total = binomial(n as u64, p as u64).unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::Budget {
            budget: budget.min(u64::MAX as u128) as u64,
        });
    }
    let ids = set.distance_ids();
    let mut combo: Vec<usize> = (0..p).collect();
    let mut checked = 0u128;
    let mut seen = HashSet::new();
    loop {
        checked += 1;
        seen.clear();
        for (k, &a) in combo.iter().enumerate() {
            for &b in &combo[k + 1..] {
                seen.insert(ids[a][b]);
            }
        }
        if seen.len() < q {
            return Ok(LocalCheck {
                holds: false,
                violating_subset: Some(combo),
                subsets_checked: checked,
            });
        }
        // Next combination in lexicographic order.
        let Some(k) = (0..p).rev().find(|&k| combo[k] < n - p + k) else {
            break;
        };
        combo[k] += 1;
        for j in k + 1..p {
            combo[j] = combo[j - 1] + 1;
        }
    }
    Ok(LocalCheck {
        holds: true,
        violating_subset: None,
        subsets_checked: checked,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: std::fmt::Display", deserialize = "F: ExactField"))]
pub struct DistanceClass<F> {
    #[serde(with = "crate::serde_rational::exact")]
    pub squared_distance: F,
    pub ordered_pair_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: std::fmt::Display", deserialize = "F: ExactField"))]
pub struct EnergyReport<F> {
    /// Classes of positive distance, ascending.
    pub classes: Vec<DistanceClass<F>>,
    /// `Σ |E_i|^2`.
    pub energy: u128,
}

pub fn energy<F: ExactField>(set: &PlanarPointSet<F>) -> EnergyReport<F> {
    let n = set.len();
    let mut counts: BTreeMap<F, u64> = BTreeMap::new();
    for a in 0..n {
        for b in a + 1..n {
            *counts.entry(set.squared_distance(a, b)).or_insert(0) += 2;
        }
    }
    let energy = counts.values().map(|&c| (c as u128) * (c as u128)).sum();
    let classes = counts
        .into_iter()
        .map(|(squared_distance, ordered_pair_count)| DistanceClass {
            squared_distance,
            ordered_pair_count,
        })
        .collect();
    EnergyReport { classes, energy }
}

/// Counts quadruples `(a, b, c, d)` with `|ac| = |bd| > 0` directly.
pub fn energy_bruteforce<F: ExactField>(set: &PlanarPointSet<F>) -> u128 {
    let n = set.len();
    let d: Vec<Vec<F>> = (0..n)
        .map(|a| (0..n).map(|c| set.squared_distance(a, c)).collect())
        .collect();
    let mut total = 0u128;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if d[a][c].is_zero() {
                    continue;
                }
                for dd in 0..n {
                    if d[a][c] == d[b][dd] {
                        total += 1;
                    }
                }
            }
        }
    }
    total
}

/// `C(p,2) - p + 3⌊p/(2s)⌋ + 2s + 2`.
pub fn q_formula(p: usize, s: usize) -> Result<i64> {
    if p == 0 || s == 0 {
        return Err(Error::input("p and s must be positive"));
    }
    let (p, s) = (p as i64, s as i64);
    Ok(p * (p - 1) / 2 - p + 3 * (p / (2 * s)) + 2 * s + 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PointSet;

    #[test]
    fn distinct_counts() {
        assert_eq!(
            distinct_distance_count(&PointSet::from_ints(&[(0, 0), (1, 0), (2, 0)]).unwrap()),
            2
        );
        let rect = PointSet::from_ints(&[(0, 0), (3, 0), (0, 4), (3, 4)]).unwrap();
        assert_eq!(distinct_distance_count(&rect), 3);
        assert_eq!(distinct_distance_count(&PointSet::from_ints(&[(5, 5)]).unwrap()), 0);
        assert!(PointSet::from_ints(&[(1, 1), (1, 1)]).is_err());
    }

    #[test]
    fn local_condition() {
        // Squared distances 1, 4, 25, 5, 18, 17.
        let general = PointSet::from_ints(&[(0, 0), (1, 0), (0, 2), (4, 3)]).unwrap();
        assert_eq!(distinct_distance_count(&general), 6);
        assert!(
            check_local_condition(&general, 4, 6, DEFAULT_SUBSET_BUDGET)
                .unwrap()
                .holds
        );
        let grid = PointSet::grid(3);
        let r = check_local_condition(&grid, 4, 6, DEFAULT_SUBSET_BUDGET).unwrap();
        assert!(!r.holds);
        let sub = grid.subset(r.violating_subset.as_ref().unwrap()).unwrap();
        assert!(distinct_distance_count(&sub) < 6);
        assert!(check_local_condition(&grid, 4, 0, 0).unwrap().holds);
        assert!(matches!(
            check_local_condition(&grid, 4, 6, 10),
            Err(Error::Budget { .. })
        ));
        assert!(matches!(check_local_condition(&grid, 10, 6, 10), Err(Error::Input(_))));
    }

    #[test]
    fn energy_examples() {
        let line = PointSet::from_ints(&[(0, 0), (1, 0), (2, 0)]).unwrap();
        let e = energy(&line);
        assert_eq!(e.energy, 20);
        assert_eq!(energy_bruteforce(&line), 20);
        assert_eq!(e.classes.iter().map(|c| c.ordered_pair_count).sum::<u64>(), 6);
        let general = PointSet::from_ints(&[(0, 0), (1, 0), (0, 2), (4, 3)]).unwrap();
        assert_eq!(energy(&general).energy, 2 * 4 * 3);
        assert_eq!(energy(&PointSet::from_ints(&[(0, 0)]).unwrap()).energy, 0);
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(serde_json::from_str::<EnergyReport<crate::Rational>>(&json).unwrap(), e);
    }

    #[test]
    fn q_values() {
        assert_eq!(q_formula(10, 1).unwrap(), 54);
        assert_eq!(q_formula(1, 1).unwrap(), 3);
        assert_eq!(q_formula(8, 1).unwrap(), 28 - 8 + 12 + 4);
        for s in 1..10usize {
            let c = (2 * s * (2 * s - 1) / 2) as i64;
            assert_eq!(q_formula(2 * s, s).unwrap(), c + 5);
        }
    }
}
