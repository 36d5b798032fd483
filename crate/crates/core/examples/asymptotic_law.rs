//! Channel hardening: G^H G / M approaches D as M grows.
//!
//! cargo run --release --example asymptotic_law

use frameshift_mimo::linalg::{compose_channel, sample_fast_fading, LargeScale, SeededRng};
use frameshift_mimo::metrics::sinr_asymptotic;

fn main() -> frameshift_mimo::Result<()> {
    let betas = vec![1.0, 0.7, 0.4, 0.2, 0.1];
    let k = betas.len();
    println!("{:>7} {:>14}", "M", "rel Gram err");
    for m in [10, 100, 1_000, 10_000, 100_000] {
        let mut rng = SeededRng::new(m as u64);
        let g = compose_channel(sample_fast_fading(m, k, &mut rng), LargeScale::new(betas.clone())?)?;
        let gram = g.entries().gram(g.entries())?;
        let (mut num, mut den) = (0.0, 0.0);
        for r in 0..k {
            for c in 0..k {
                let d = if r == c { betas[r] } else { 0.0 };
                num += (gram[(r, c)] / m as f64 - d).norm_sqr();
                den += d * d;
            }
        }
        println!("{m:>7} {:>14.5}", (num / den).sqrt());
    }
    println!("\nlimiting SINR with 6 interferers at gamma=0.3: {:.3}", sinr_asymptotic(1.0, &[0.3; 6]));
    Ok(())
}
