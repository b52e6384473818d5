//! Blade bookkeeping: bitmask blades, merge signs and the lexicographic
//! enumeration of each grade slice.
//!
//! Generator `2j` is `e_{j+1}*` and generator `2j + 1` is `f_{j+1}*`, so the
//! standard form `Σ e_j*∧f_j*` pairs bits `(0,1), (2,3), ...`.

use std::sync::OnceLock;

use itertools::Itertools;

/// Largest supported half-dimension.
pub const MAX_N: usize = 7;

/// A basis blade of the exterior algebra, stored as a bitmask over the
/// `2n` generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blade(pub u32);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub fn from_indices(indices: &[usize]) -> Option<Blade> {
        let mut mask = 0u32;
        for &i in indices {
            let bit = 1u32.checked_shl(i as u32)?;
            if mask & bit != 0 {
                return None;
            }
            mask |= bit;
        }
        Some(Blade(mask))
    }

    pub fn generator(i: usize) -> Blade {
        Blade(1 << i)
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|&i| self.0 & (1 << i) != 0).collect()
    }

    pub fn mask(self) -> u32 {
        self.0
    }
}

/// Sign of `a ∧ b` relative to the sorted blade `a | b`; zero when the
/// blades share a generator.
pub fn wedge_sign(a: u32, b: u32) -> f64 {
    if a & b != 0 {
        return 0.0;
    }
    let mut swaps = 0u32;
    let mut a = a >> 1;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Sign of the permutation that sorts `indices` (all distinct).
pub fn permutation_sign(indices: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for i in 0..indices.len() {
        for j in (i + 1)..indices.len() {
            if indices[i] > indices[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(-1)^{k(k+1)/2}`, the sign attached to a primitive `k`-form by the
/// Lefschetz star.
pub fn lefschetz_sign(k: usize) -> f64 {
    if (k * (k + 1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

pub fn binomial(n: usize, k: i64) -> usize {
    if k < 0 || k as usize > n {
        return 0;
    }
    let k = k as usize;
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn factorial(r: usize) -> f64 {
    (1..=r).map(|i| i as f64).product()
}

/// Grade-slice tables for one half-dimension.
#[derive(Debug)]
pub struct SliceTable {
    n: usize,
    masks: Vec<Vec<u32>>,
    index: Vec<u32>,
}

impl SliceTable {
    fn build(n: usize) -> Self {
        let dim = 2 * n;
        let mut index = vec![0u32; 1 << dim];
        let masks: Vec<Vec<u32>> = (0..=dim)
            .map(|k| {
                (0..dim)
                    .combinations(k)
                    .map(|c| c.iter().fold(0u32, |m, &i| m | (1 << i)))
                    .collect()
            })
            .collect();
        for slice in &masks {
            for (pos, &m) in slice.iter().enumerate() {
                index[m as usize] = pos as u32;
            }
        }
        SliceTable { n, masks, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Blades of grade `k` in lexicographic order of their sorted index lists.
    pub fn masks(&self, k: usize) -> &[u32] {
        &self.masks[k]
    }

    /// Position of `mask` inside its grade slice.
    pub fn position(&self, mask: u32) -> usize {
        self.index[mask as usize] as usize
    }

    pub fn len(&self, k: usize) -> usize {
        self.masks[k].len()
    }
}

static TABLES: [OnceLock<SliceTable>; MAX_N + 1] = [const { OnceLock::new() }; MAX_N + 1];

/// Shared slice table for half-dimension `n` (`1 <= n <= MAX_N`).
pub fn slices(n: usize) -> &'static SliceTable {
    assert!((1..=MAX_N).contains(&n), "n = {n} outside 1..={MAX_N}");
    TABLES[n].get_or_init(|| SliceTable::build(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_sign_counts_transpositions() {
        assert_eq!(wedge_sign(0b01, 0b10), 1.0);
        assert_eq!(wedge_sign(0b10, 0b01), -1.0);
        assert_eq!(wedge_sign(0b11, 0b01), 0.0);
        // f1 ∧ e1 f2 : moving f1 past e1 once
        assert_eq!(wedge_sign(0b0010, 0b1001), -1.0);
        assert_eq!(wedge_sign(0b0110, 0b1001), 1.0);
    }

    #[test]
    fn slices_are_lexicographic_and_complete() {
        let t = slices(2);
        assert_eq!(t.masks(2), &[0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]);
        for k in 0..=4 {
            assert_eq!(t.len(k), binomial(4, k as i64));
            for (i, &m) in t.masks(k).iter().enumerate() {
                assert_eq!(t.position(m), i);
            }
        }
    }

    #[test]
    fn lefschetz_signs() {
        let s: Vec<f64> = (0..6).map(lefschetz_sign).collect();
        assert_eq!(s, vec![1.0, -1.0, -1.0, 1.0, 1.0, -1.0]);
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1.0);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1.0);
        assert_eq!(permutation_sign(&[2, 0, 1]), 1.0);
    }
}
