//! SE and EE of class 1 and class 3 over the antenna count, written as CSV
//! and SVG into the working directory.
//!
//! cargo run --example antenna_sweep

use std::path::Path;

use frameshift_mimo::harness::{emit_csv, emit_plot, sweep_antennas, PlotMetric, SweepSpec, SweepVariable};
use frameshift_mimo::SystemConfig;

fn main() -> frameshift_mimo::Result<()> {
    let spec = SweepSpec::range(SweepVariable::Antennas, 10, 300, 10, SystemConfig::default())?;
    let table = sweep_antennas(&spec, &[1, 3])?;
    emit_csv(&table, Path::new("antenna_sweep.csv"))?;
    emit_plot(&table, PlotMetric::SpectralEfficiency, Path::new("antenna_sweep_se.svg"))?;
    emit_plot(&table, PlotMetric::EnergyEfficiency, Path::new("antenna_sweep_ee.svg"))?;
    for (a, b) in table.class_rows(1).iter().zip(table.class_rows(3)).step_by(5) {
        println!("M={:>3}  EE class 1 {:>8.3}  class 3 {:>8.3}  ratio {:.2}", a.num_antennas, a.ee, b.ee, b.ee / a.ee);
    }
    println!("config {}", table.provenance.config_hash);
    Ok(())
}
