//! Energy efficiency against class index at M = 300.
//!
//! cargo run --example class_sweep

use std::path::Path;

use frameshift_mimo::harness::{emit_csv, emit_plot, sweep_class, PlotMetric, SweepSpec, SweepVariable};
use frameshift_mimo::SystemConfig;

fn main() -> frameshift_mimo::Result<()> {
    let cfg = SystemConfig { num_antennas: 300, ..Default::default() };
    let spec = SweepSpec::new(SweepVariable::ClassIndex, (1..=30).collect(), 1, cfg)?;
    let table = sweep_class(&spec)?;
    emit_csv(&table, Path::new("class_sweep.csv"))?;
    emit_plot(&table, PlotMetric::EnergyEfficiency, Path::new("class_sweep_ee.svg"))?;
    println!("  n  K'  L'   SINR(dB)      EE");
    for r in &table.rows {
        println!("{:>3} {:>3} {:>3} {:>10.3} {:>8.3}", r.class_n, r.k_prime, r.l_prime, r.sinr_db(), r.ee);
    }
    Ok(())
}
