//! Seeded input generators shared by the benchmarks.

use impact_core::{Dataset, Line};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_lines(m: usize, seed: u64) -> Vec<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m)
        .map(|_| Line::new(rng.gen_range(-1e3..1e3), rng.gen_range(-1e3..1e3), ""))
        .collect()
}

/// Uniform predictions in `[0, 1)`, targets in `[0, 10)`.
pub fn random_dataset(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let preds: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let targets: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
    Dataset::from_columns(&preds, &targets).expect("generated values are finite")
}
