//! Exact integer helpers for floors of fractional powers.

use num_bigint::BigUint;
use num_traits::{One, Pow};

/// Largest `k` for which `holds(k)` is true, assuming `holds` is monotone
/// decreasing in `k` and `holds(0)` is true.
pub(crate) fn largest_satisfying(mut holds: impl FnMut(u64) -> bool) -> u64 {
    let mut hi: u64 = 1;
    while holds(hi) {
        hi = hi.checked_mul(2).expect("search range overflow");
    }
    let mut lo = hi / 2;
    // holds(lo) is true (or lo == 0), holds(hi) is false.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub(crate) fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

pub(crate) fn pow(x: u64, e: u64) -> BigUint {
    if e == 0 {
        return BigUint::one();
    }
    Pow::pow(big(x), e as u32)
}

/// `⌊(num/den)^(1/root) * ... ⌋` style helper: largest `k` with
/// `k^root * den <= num`.
pub(crate) fn floor_root_scaled(num: &BigUint, den: &BigUint, root: u64) -> u64 {
    largest_satisfying(|k| pow(k, root) * den <= *num)
}

/// `⌊m^(a/b)⌋` computed exactly.
pub(crate) fn floor_rational_power(m: u64, a: u64, b: u64) -> u64 {
    floor_root_scaled(&pow(m, a), &BigUint::one(), b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_powers() {
        assert_eq!(floor_rational_power(64, 3, 2), 512);
        assert_eq!(floor_rational_power(8, 2, 3), 4);
        assert_eq!(floor_rational_power(15, 1, 2), 3);
        assert_eq!(floor_rational_power(64, 6, 5), 147);
        assert_eq!(floor_rational_power(0, 1, 2), 0);
        assert_eq!(floor_rational_power(1, 5, 3), 1);
    }
}
