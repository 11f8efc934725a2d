//! Binomial coefficients and subset enumeration.

use alloc::vec::Vec;

/// `C(n, r)`, or `None` on overflow of `u128`.
pub fn binomial(n: u64, r: u64) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// `C(n, r)` for sizes that are known to fit.
pub fn choose(n: usize, r: usize) -> usize {
    binomial(n as u64, r as u64)
        .and_then(|v| usize::try_from(v).ok())
        .expect("binomial coefficient overflows usize")
}

/// Lexicographic `r`-subsets of `items`.
pub struct Combinations<'a, T> {
    items: &'a [T],
    idx: Vec<usize>,
    done: bool,
}

impl<'a, T: Copy> Combinations<'a, T> {
    pub fn new(items: &'a [T], r: usize) -> Self {
        Combinations {
            items,
            idx: (0..r).collect(),
            done: r > items.len(),
        }
    }
}

impl<T: Copy> Iterator for Combinations<'_, T> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        if self.done {
            return None;
        }
        let out = self.idx.iter().map(|&i| self.items[i]).collect();
        let (n, r) = (self.items.len(), self.idx.len());
        let mut i = r;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < n - r + i {
                self.idx[i] += 1;
                for j in i + 1..r {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

pub fn combinations<T: Copy>(items: &[T], r: usize) -> Combinations<'_, T> {
    Combinations::new(items, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(10, 2), Some(45));
        assert_eq!(binomial(11, 3), Some(165));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(0, 0), Some(1));
    }

    #[test]
    fn combination_counts() {
        let items: Vec<u8> = (0..7).collect();
        for r in 0..=8 {
            assert_eq!(combinations(&items, r).count(), choose(7, r));
        }
        let first: Vec<_> = combinations(&items, 3).take(2).collect();
        assert_eq!(first, [[0, 1, 2], [0, 1, 3]]);
    }
}
