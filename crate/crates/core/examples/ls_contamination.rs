//! LS estimation with and without a contaminating cell on the same pilot.
//!
//! cargo run --example ls_contamination

use frameshift_mimo::estimation::{ls_estimate, receive_pilots, PilotBook};
use frameshift_mimo::linalg::{compose_channel, norm, sample_fast_fading, LargeScale, SeededRng};
use frameshift_mimo::scheduler::SparsityMask;

fn main() -> frameshift_mimo::Result<()> {
    let (m, tau, pu) = (256, 4, 1.0);
    let book = PilotBook::fourier(tau, tau)?;
    let mut rng = SeededRng::new(42);
    let own = compose_channel(sample_fast_fading(m, 1, &mut rng), LargeScale::uniform(1, 1.0)?)?;
    let gain = (tau as f64 * pu).sqrt();
    let mask = SparsityMask::all(1, true);

    for gamma in [0.0f64, 0.1, 0.3, 1.0] {
        let other = compose_channel(sample_fast_fading(m, 1, &mut rng), LargeScale::uniform(1, gamma.max(1e-12))?)?;
        let masks = vec![mask.clone(), mask.clone()];
        let block = receive_pilots(&[&own, &other], &masks, &book, &[vec![0], vec![0]], pu, Some(&mut rng))?;
        let est = &ls_estimate(&block, &book, &[0])?[0];
        let err: Vec<_> = est.iter().zip(own.user(0)).map(|(e, g)| e / gain - g).collect();
        println!("gamma {gamma:.1}: relative estimation error {:.3}", norm(&err) / norm(own.user(0)));
    }
    Ok(())
}
