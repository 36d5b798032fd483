//! Monte Carlo SINR of a 7-cell network for three coherence classes,
//! next to the closed-form value.
//!
//! cargo run --release --example slot_simulation

use frameshift_mimo::harness::{run_slot_simulation, SimOptions};
use frameshift_mimo::metrics::sinr_closed_form;
use frameshift_mimo::scheduler::{assign_network, contamination_stats, PilotReuse};
use frameshift_mimo::SystemConfig;

fn main() -> frameshift_mimo::Result<()> {
    let cfg = SystemConfig { num_users: 12, num_antennas: 128, pilot_len: 12, num_pilots: 12, ..Default::default() };
    for class in [1u32, 2, 4] {
        let classes = vec![vec![class; cfg.num_users]; cfg.num_cells];
        let plan = assign_network(&classes, cfg.num_pilots, cfg.max_class, PilotReuse::Shuffled { seed: 5 })?;
        let opts = SimOptions {
            num_slots: 3 * class as u64,
            trials: 8,
            noise: true,
            coherence: None,
            warmup_slots: class as u64,
        };
        let out = run_slot_simulation(&cfg, &plan, &opts, cfg.rng_seed)?;
        let k_prime = cfg.num_users.div_ceil(class as usize);
        let stats = contamination_stats(k_prime, cfg.num_pilots, cfg.num_cells, cfg.intercell_factor)?;
        let closed = sinr_closed_form(
            cfg.num_antennas,
            cfg.num_users,
            cfg.pilot_len,
            cfg.intercell_factor,
            stats.l_prime,
            cfg.uplink_power,
        );
        println!(
            "class {class}: pilots/slot {k_prime:>2}, L' {}, empirical SINR {:>7.3}, closed form {:>7.3}",
            stats.l_prime,
            out.mean_sinr(),
            closed
        );
    }
    Ok(())
}
