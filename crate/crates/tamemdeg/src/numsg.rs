//! Two-generator numerical semigroups `d1·ℕ + d2·ℕ`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SemigroupPair {
    d1: u64,
    d2: u64,
}

impl SemigroupPair {
    /// Generators are stored sorted.
    pub fn new(a: u64, b: u64) -> Result<SemigroupPair> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidArgument(format!(
                "generators must be positive, got ({a}, {b})"
            )));
        }
        Ok(SemigroupPair {
            d1: a.min(b),
            d2: a.max(b),
        })
    }

    pub fn d1(&self) -> u64 {
        self.d1
    }

    pub fn d2(&self) -> u64 {
        self.d2
    }

    pub fn gcd(&self) -> u64 {
        self.d1.gcd(&self.d2)
    }

    /// `k = k1·d1 + k2·d2` with the largest possible `k2`, if any.
    pub fn member(&self, k: u64) -> Option<(u64, u64)> {
        let g = self.gcd();
        if !k.is_multiple_of(g) {
            return None;
        }
        let (a, b, kk) = (self.d1 / g, self.d2 / g, k / g);
        // k2 only matters modulo a, so at most a candidates need checking.
        let top = kk / b;
        let lowest = top.saturating_sub(a - 1);
        (lowest..=top)
            .rev()
            .find(|k2| (kk - k2 * b) % a == 0)
            .map(|k2| ((kk - k2 * b) / a, k2))
    }

    pub fn contains(&self, k: u64) -> bool {
        self.member(k).is_some()
    }

    /// Largest non-member `(d1−1)(d2−1)−1`; −1 when `d1 = 1`.
    pub fn frobenius(&self) -> Result<i64> {
        let g = self.gcd();
        if g != 1 {
            return Err(Error::NotCoprime {
                d1: self.d1,
                d2: self.d2,
                gcd: g,
            });
        }
        if self.d1 == 1 {
            return Ok(-1);
        }
        Ok(((self.d1 - 1) * (self.d2 - 1)) as i64 - 1)
    }

    /// Non-members in `[min, frobenius]`, ascending.
    pub fn gaps(&self, min: u64) -> Result<Vec<u64>> {
        let f = self.frobenius()?;
        if f < 0 {
            return Ok(Vec::new());
        }
        Ok((min..=f as u64).filter(|&k| !self.contains(k)).collect())
    }
}

/// Gaps of `3ℕ + p2ℕ` that are at least `p2`, from the closed form
/// `{2·p2 − 3k : k = 1..⌊p2/3⌋}`.
pub fn three_gap_formula(p2: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=p2 / 3).map(|k| 2 * p2 - 3 * k).collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: u64, b: u64) -> SemigroupPair {
        SemigroupPair::new(a, b).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert_eq!(pair(5, 6).member(9), None);
        assert!(pair(5, 7).member(24).is_some());
        assert_eq!(pair(5, 7).member(0), Some((0, 0)));
        assert_eq!(pair(5, 7).member(24), Some((2, 2)));
        assert_eq!(pair(3, 5).member(30), Some((0, 6)));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(pair(5, 7).frobenius().unwrap(), 23);
        assert_eq!(pair(3, 5).frobenius().unwrap(), 7);
        assert_eq!(pair(2, 3).frobenius().unwrap(), 1);
        assert_eq!(pair(1, 9).frobenius().unwrap(), -1);
        assert!(matches!(
            pair(4, 6).frobenius(),
            Err(Error::NotCoprime { gcd: 2, .. })
        ));
    }

    #[test]
    fn gap_lists() {
        assert_eq!(pair(5, 7).gaps(7).unwrap(), vec![8, 9, 11, 13, 16, 18, 23]);
        assert_eq!(pair(3, 5).gaps(0).unwrap(), vec![1, 2, 4, 7]);
        assert!(pair(4, 6).gaps(0).is_err());
    }

    #[test]
    fn normalizes_order() {
        assert_eq!(pair(7, 5), pair(5, 7));
        assert!(SemigroupPair::new(0, 3).is_err());
    }

    #[test]
    fn non_coprime_membership() {
        let s = pair(4, 6);
        assert_eq!(s.member(10), Some((1, 1)));
        assert_eq!(s.member(7), None);
        assert_eq!(s.member(2), None);
    }
}
