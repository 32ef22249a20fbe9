#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toric_mle::model::DataVector;

/// A strictly positive composition of `total` into `n` parts.
pub fn random_data(rng: &mut ChaCha8Rng, n: usize, total: u64) -> DataVector {
    let mut cuts: Vec<u64> = Vec::with_capacity(n - 1);
    while cuts.len() < n - 1 {
        let c = rng.random_range(1..total);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort_unstable();
    let mut counts = Vec::with_capacity(n);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(total)) {
        counts.push(c - prev);
        prev = c;
    }
    DataVector::new(counts).unwrap()
}
