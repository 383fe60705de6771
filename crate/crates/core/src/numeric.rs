//! Small numerical building blocks shared by the closed forms and the floors.

use crate::{Error, Result};

/// Largest number of eavesdroppers (or users) whose subsets are enumerated.
pub const SUBSET_CAP: usize = 20;

/// Neumaier-compensated running sum.
///
/// The closed forms are alternating inclusion-exclusion sums with up to 2^20
/// terms of similar magnitude; plain accumulation loses several digits there.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Bitmask over a set of at most [`SUBSET_CAP`] elements.
///
/// Bit `j` set means element `j` belongs to the subset. The empty subset is
/// index 0; the non-empty subsets are `1..=2^len - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetIndex(u32);

impl SubsetIndex {
    pub fn new(mask: u32, len: usize) -> Result<Self> {
        if len > SUBSET_CAP {
            return Err(Error::CapacityExceeded {
                what: "subset element",
                count: len,
                cap: SUBSET_CAP,
            });
        }
        if mask == 0 || mask >= (1u32 << len) {
            return Err(Error::config(
                "subset",
                format!("index {mask} outside 1..={}", (1u32 << len) - 1),
            ));
        }
        Ok(Self(mask))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn cardinality(self) -> u32 {
        self.0.count_ones()
    }

    /// `(-1)^(|E_n| + 1)`: +1 for odd-sized subsets, -1 for even-sized ones.
    pub fn inclusion_sign(self) -> f64 {
        if self.cardinality() % 2 == 1 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn contains(self, element: usize) -> bool {
        self.0 >> element & 1 == 1
    }

    pub fn members(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |j| mask >> j & 1 == 1)
    }
}

/// Sum of `weights` over every subset, indexed by bitmask (entry 0 is the
/// empty subset and holds 0).
pub fn subset_sums(weights: &[f64]) -> Result<Vec<f64>> {
    if weights.len() > SUBSET_CAP {
        return Err(Error::CapacityExceeded {
            what: "subset element",
            count: weights.len(),
            cap: SUBSET_CAP,
        });
    }
    let size = 1usize << weights.len();
    let mut sums = vec![0.0; size];
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + weights[low];
    }
    Ok(sums)
}

/// `(-1)^popcount(mask)`.
#[inline]
pub fn parity_sign(mask: usize) -> f64 {
    if mask.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `2^x` computed as `exp(x ln 2)`.
#[inline]
pub fn pow2(x: f64) -> f64 {
    (x * std::f64::consts::LN_2).exp()
}

/// Relative closeness with an absolute floor for values near zero.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// `ln(sum(exp(x_i)))` without overflow.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let s: CompensatedSum = values.iter().map(|v| (v - max).exp()).collect();
    max + s.value().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..10 {
            acc.add(1e-16);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-15).abs() < 1e-30);
    }

    #[test]
    fn subset_sums_match_direct_enumeration() {
        let w = [0.5, 2.0, 3.25, 7.0];
        let sums = subset_sums(&w).unwrap();
        for mask in 0..16usize {
            let direct: f64 = (0..4).filter(|j| mask >> j & 1 == 1).map(|j| w[j]).sum();
            assert_eq!(sums[mask], direct);
        }
    }

    #[test]
    fn subset_index_bounds() {
        assert!(SubsetIndex::new(0, 3).is_err());
        assert!(SubsetIndex::new(8, 3).is_err());
        let s = SubsetIndex::new(0b101, 3).unwrap();
        assert_eq!(s.cardinality(), 2);
        assert_eq!(s.inclusion_sign(), -1.0);
        assert_eq!(s.members().collect::<Vec<_>>(), vec![0, 2]);
        assert!(matches!(
            SubsetIndex::new(1, 21),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn log_sum_exp_is_stable() {
        let v = [-1000.0, -1000.0];
        assert!((log_sum_exp(&v) - (-1000.0 + 2f64.ln())).abs() < 1e-12);
    }
}
