//! Exact exponent calculators for the incidence and distance bounds.
//!
//! Every function is generic over the integer type of the rational, so the
//! identities can be checked with `i64` for speed or `BigInt` for headroom.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn r<T: Clone + Integer + From<i64>>(n: i64, d: i64) -> Ratio<T> {
    Ratio::new(T::from(n), T::from(d))
}

fn int<T: Clone + Integer + From<i64>>(n: i64) -> Ratio<T> {
    Ratio::from_integer(T::from(n))
}

fn positive_s(s: i64) -> Result<()> {
    if s < 1 {
        return Err(Error::Domain(format!("s must be at least 1, got {s}")));
    }
    Ok(())
}

/// `((d-1)σ/(dσ-1), d(σ-1)/(dσ-1))`, the exponents of `m` and `n` in the
/// incidence bound obtained from a linear threshold `σ` in dimension `d`.
pub fn threshold2incidence_exponents<T>(d: i64, sigma: &Ratio<T>) -> Result<(Ratio<T>, Ratio<T>)>
where
    T: Clone + Integer + Signed + From<i64>,
{
    if d < 1 {
        return Err(Error::Domain(format!("d must be at least 1, got {d}")));
    }
    let d = int::<T>(d);
    let den = &d * sigma - Ratio::one();
    if den.is_zero() {
        return Err(Error::Domain("d*sigma = 1".into()));
    }
    let a = (&d - Ratio::one()) * sigma / &den;
    let b = &d * (sigma - Ratio::one()) / &den;
    Ok((a, b))
}

/// `((2s-1)/(3s-2), (2s-2)/(3s-2))` for `s`-by-`s` grid-free arrangements of 2-flats.
pub fn grid2flat_exponents<T: Clone + Integer + From<i64>>(s: i64) -> Result<(Ratio<T>, Ratio<T>)> {
    positive_s(s)?;
    Ok((r(2 * s - 1, 3 * s - 2), r(2 * s - 2, 3 * s - 2)))
}

/// `4/3 - 1/(9s-6)`, the balanced-case exponent for grid-free complex arrangements.
pub fn grid_total_exponent<T: Clone + Integer + From<i64>>(s: i64) -> Result<Ratio<T>> {
    positive_s(s)?;
    Ok(r::<T>(4, 3) - r(1, 9 * s - 6))
}

/// `[m^(1/2), m^(2-1/s)]`, the range of `n` in which the flat bound is applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidRange {
    pub low: f64,
    pub high: f64,
}

impl ValidRange {
    pub fn contains(&self, n: f64) -> bool {
        self.low <= n && n <= self.high
    }
}

pub fn valid_range(m: f64, s: i64) -> Result<ValidRange> {
    positive_s(s)?;
    if m < 0.0 {
        return Err(Error::Domain("m must be nonnegative".into()));
    }
    Ok(ValidRange {
        low: m.sqrt(),
        high: m.powf(2.0 - 1.0 / s as f64),
    })
}

/// `20/7 - 18/(7(7s-4))`, the distance-energy exponent.
pub fn energy_exponent<T: Clone + Integer + From<i64>>(s: i64) -> Result<Ratio<T>> {
    positive_s(s)?;
    Ok(r::<T>(20, 7) - r(18, 7 * (7 * s - 4)))
}

/// `8/7 + 18/(7(7s-4))`, the resulting distinct-distance exponent `4 - energy_exponent`.
pub fn distinct_distance_exponent<T: Clone + Integer + From<i64>>(s: i64) -> Result<Ratio<T>> {
    positive_s(s)?;
    Ok(r::<T>(8, 7) + r(18, 7 * (7 * s - 4)))
}

/// Incidence exponents in dimension 4 at `σ = 2 - 1/s`, whose sum with
/// `m = n = N^2` gives the energy exponent.
pub fn lifted_incidence_exponents<T>(s: i64) -> Result<(Ratio<T>, Ratio<T>)>
where
    T: Clone + Integer + Signed + From<i64>,
{
    positive_s(s)?;
    threshold2incidence_exponents(4, &(int::<T>(2) - r(1, s)))
}
