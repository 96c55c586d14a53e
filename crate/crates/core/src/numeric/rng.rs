//! Seeded generator for reproducible test instances: SplitMix64, whose state
//! is the seed itself, so any instance can be rebuilt from its seed alone.

use rand::Rng;
pub use rand::SeedableRng;
pub use rand_xoshiro::SplitMix64;

pub fn seeded(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// Uniform point of the closed unit disc, by rejection.
pub fn unit_disc<R: Rng>(rng: &mut R) -> (f64, f64) {
    loop {
        let x = 2.0 * rng.gen::<f64>() - 1.0;
        let y = 2.0 * rng.gen::<f64>() - 1.0;
        if x * x + y * y <= 1.0 {
            return (x, y);
        }
    }
}
