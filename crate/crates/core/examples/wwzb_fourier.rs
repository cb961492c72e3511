//! The best WWZB inequality for fixed settings via a Walsh-Hadamard
//! transform, checked against trying every sign function.

use std::time::Instant;

use bellkey::multiparty::{wwzb_exhaustive, wwzb_max_fixed_settings, CorrelationTensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> bellkey::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for n in 2..=4 {
        let t = CorrelationTensor::new(n, (0..1 << n).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
        let start = Instant::now();
        let brute = wwzb_exhaustive(&t)?;
        let took = start.elapsed();
        println!(
            "N={n}: fourier {:.12}  exhaustive {brute:.12}  ({took:.1?} for {} sign functions)",
            wwzb_max_fixed_settings(&t),
            1u64 << (1 << n)
        );
    }
    Ok(())
}
