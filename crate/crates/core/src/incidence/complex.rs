//! Complex lines in `C^2` and the real 2-flats in `R^4` they span.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::PlaneLine;
use crate::error::{Error, Result};
use crate::scalar::ExactField;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CPoint<F> {
    pub z: Complex<F>,
    pub w: Complex<F>,
}

impl<F: ExactField> CPoint<F> {
    pub fn new(z: Complex<F>, w: Complex<F>) -> Self {
        CPoint { z, w }
    }

    /// `(x1, x2, x3, x4)` with `z = x1 + i x2`, `w = x3 + i x4`.
    pub fn to_real(&self) -> [F; 4] {
        [
            self.z.re.clone(),
            self.z.im.clone(),
            self.w.re.clone(),
            self.w.im.clone(),
        ]
    }
}

/// `a z + b w + c = 0`, scaled so the first nonzero of `(a, b)` is `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CLine<F> {
    a: Complex<F>,
    b: Complex<F>,
    c: Complex<F>,
}

impl<F: ExactField> CLine<F> {
    pub fn new(a: Complex<F>, b: Complex<F>, c: Complex<F>) -> Result<Self> {
        let lead = if !a.is_zero() {
            a.clone()
        } else if !b.is_zero() {
            b.clone()
        } else {
            return Err(Error::input("complex line needs (a, b) != (0, 0)"));
        };
        Ok(CLine {
            a: a / lead.clone(),
            b: b / lead.clone(),
            c: c / lead,
        })
    }

    pub fn coefficients(&self) -> (&Complex<F>, &Complex<F>, &Complex<F>) {
        (&self.a, &self.b, &self.c)
    }
}

impl<F: ExactField> PlaneLine for CLine<F> {
    type Point = CPoint<F>;

    fn contains(&self, p: &CPoint<F>) -> bool {
        (self.a.clone() * p.z.clone() + self.b.clone() * p.w.clone() + self.c.clone()).is_zero()
    }

    fn meet(&self, o: &Self) -> Option<CPoint<F>> {
        let det = self.a.clone() * o.b.clone() - self.b.clone() * o.a.clone();
        if det.is_zero() {
            return None;
        }
        // a z + b w = -c
        let z = (self.b.clone() * o.c.clone() - self.c.clone() * o.b.clone()) / det.clone();
        let w = (self.c.clone() * o.a.clone() - self.a.clone() * o.c.clone()) / det;
        Some(CPoint { z, w })
    }
}

/// Two real equations `row[0..4] · x = row[4]` cutting out a 2-flat in `R^4`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Flat2InR4<F> {
    pub equations: [[F; 5]; 2],
}

impl<F: ExactField> Flat2InR4<F> {
    pub fn contains(&self, x: &[F; 4]) -> bool {
        self.equations.iter().all(|row| {
            let lhs = (0..4).fold(F::zero(), |acc, k| acc + row[k].clone() * x[k].clone());
            lhs == row[4]
        })
    }
}

/// Splits `a z + b w + c = 0` into real and imaginary parts.
pub fn complex_line_to_flat<F: ExactField>(line: &CLine<F>) -> Flat2InR4<F> {
    let (a, b, c) = line.coefficients();
    let re = [a.re.clone(), -a.im.clone(), b.re.clone(), -b.im.clone(), -c.re.clone()];
    let im = [a.im.clone(), a.re.clone(), b.im.clone(), b.re.clone(), -c.im.clone()];
    Flat2InR4 { equations: [re, im] }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlatMeet<F> {
    Empty,
    Point([F; 4]),
    /// An affine subspace of the given positive dimension.
    Subspace(usize),
}

/// Intersection of two flats by exact Gaussian elimination on the 4×4 system.
pub fn flat_intersection<F: ExactField>(f: &Flat2InR4<F>, g: &Flat2InR4<F>) -> FlatMeet<F> {
    let mut rows: Vec<Vec<F>> = f.equations.iter().chain(&g.equations).map(|r| r.to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..4 {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = F::one() / rows[r][col].clone();
        for k in 0..5 {
            rows[r][k] = rows[r][k].clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for k in 0..5 {
                    let sub = factor.clone() * rows[r][k].clone();
                    rows[i][k] = rows[i][k].clone() - sub;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[4].is_zero()) {
        return FlatMeet::Empty;
    }
    if pivots.len() < 4 {
        return FlatMeet::Subspace(4 - pivots.len());
    }
    let x = [
        rows[0][4].clone(),
        rows[1][4].clone(),
        rows[2][4].clone(),
        rows[3][4].clone(),
    ];
    FlatMeet::Point(x)
}

/// True when every pair of flats meets in at most one point.
pub fn pairwise_flat_check<F: ExactField>(flats: &[Flat2InR4<F>]) -> bool {
    (0..flats.len()).all(|i| {
        (i + 1..flats.len()).all(|j| !matches!(flat_intersection(&flats[i], &flats[j]), FlatMeet::Subspace(_)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ComplexLine, ComplexPoint, GaussianRational, Rational};
    use num_bigint::BigInt;
    use num_traits::One;

    fn g(re: i64, im: i64) -> GaussianRational {
        Complex::new(
            Rational::from_integer(BigInt::from(re)),
            Rational::from_integer(BigInt::from(im)),
        )
    }

    #[test]
    fn incidence_and_meet() {
        let l = ComplexLine::new(g(1, 0), g(1, 0), g(0, 0)).unwrap();
        assert!(l.contains(&ComplexPoint::new(g(1, 0), g(-1, 0))));
        let m = ComplexLine::new(g(0, 2), g(0, 2), g(0, 0)).unwrap();
        assert_eq!(l, m);
        let k = ComplexLine::new(g(1, 0), g(-1, 0), g(0, 0)).unwrap();
        assert_eq!(l.meet(&k), Some(ComplexPoint::new(g(0, 0), g(0, 0))));
        let i_line = ComplexLine::new(g(0, 1), g(1, 1), g(2, -1)).unwrap();
        let p = l.meet(&i_line).unwrap();
        assert!(l.contains(&p) && i_line.contains(&p));
    }

    #[test]
    fn flats() {
        let z0 = ComplexLine::new(g(1, 0), g(0, 0), g(0, 0)).unwrap();
        let f = complex_line_to_flat(&z0);
        let zero = Rational::zero();
        let one = Rational::one();
        assert_eq!(
            f.equations[0],
            [one.clone(), zero.clone(), zero.clone(), zero.clone(), zero.clone()]
        );
        assert_eq!(
            f.equations[1],
            [zero.clone(), one.clone(), zero.clone(), zero.clone(), zero.clone()]
        );
        let a = complex_line_to_flat(&ComplexLine::new(g(1, 0), g(1, 0), g(0, 0)).unwrap());
        let b = complex_line_to_flat(&ComplexLine::new(g(1, 0), g(-1, 0), g(0, 0)).unwrap());
        assert_eq!(
            flat_intersection(&a, &b),
            FlatMeet::Point([zero.clone(), zero.clone(), zero.clone(), zero.clone()])
        );
        assert!(pairwise_flat_check(&[a.clone(), b]));
        assert_eq!(flat_intersection(&a, &a), FlatMeet::Subspace(2));
        let parallel = complex_line_to_flat(&ComplexLine::new(g(1, 0), g(1, 0), g(1, 0)).unwrap());
        assert_eq!(flat_intersection(&a, &parallel), FlatMeet::Empty);
    }

    #[test]
    fn flat_contains_lifted_points() {
        let l = ComplexLine::new(g(2, 1), g(0, 3), g(1, -1)).unwrap();
        let other = ComplexLine::new(g(1, 0), g(1, 1), g(0, 0)).unwrap();
        let p = l.meet(&other).unwrap();
        assert!(complex_line_to_flat(&l).contains(&p.to_real()));
    }
}
