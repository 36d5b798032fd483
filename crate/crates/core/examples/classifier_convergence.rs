//! Class trajectories for static, pedestrian and train users.
//!
//! cargo run --release --example classifier_convergence

use frameshift_mimo::harness::{classify_demo, MobilityProfile, CARRIER_FREQ};
use frameshift_mimo::SystemConfig;

fn main() -> frameshift_mimo::Result<()> {
    let cfg = SystemConfig { num_users: 8, ..Default::default() };
    let slots = 200;
    for profile in [MobilityProfile::Static, MobilityProfile::Pedestrian, MobilityProfile::Train] {
        let rho = profile.correlation(cfg.frame_len, CARRIER_FREQ);
        let trace = classify_demo(&cfg, profile, slots, 7)?;
        let mean_at = |t: u64| {
            let rows: Vec<_> = trace.iter().filter(|r| r.slot == t).collect();
            rows.iter().map(|r| r.class_n as f64).sum::<f64>() / rows.len() as f64
        };
        let checkpoints: Vec<String> =
            [0, 10, 50, 100, 199].iter().map(|&t| format!("t={t}: {:.1}", mean_at(t))).collect();
        println!("{profile:?} (slot correlation {rho:.5}) mean class {}", checkpoints.join(", "));
    }
    Ok(())
}
