//! Seeded inputs. ChaCha8 seeded with `seed_from_u64`, then a Fisher-Yates shuffle.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use scales_core::HiddenOrder;

/// Ranks `1..=n` shuffled by a ChaCha8 stream seeded with `seed`.
pub fn seeded_ranks(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ranks: Vec<usize> = (1..=n).collect();
    ranks.shuffle(&mut rng);
    ranks
}

pub fn seeded_order(n: usize, seed: u64) -> HiddenOrder {
    HiddenOrder::from_ranks(seeded_ranks(n, seed)).expect("a shuffle of 1..=n is a permutation")
}
