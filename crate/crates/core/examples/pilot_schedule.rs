//! Packs a mixed-class cell onto pilots and prints who uploads when.
//!
//! cargo run --example pilot_schedule

use frameshift_mimo::scheduler::{assign_pilots, contamination_stats, pilots_required, sparsity_mask};

fn main() -> frameshift_mimo::Result<()> {
    let classes = [1, 1, 2, 2, 2, 3, 3, 3, 3, 6];
    let plan = assign_pilots(0, &classes, 8, 30)?;
    println!("{} users need {} pilots (period {})", classes.len(), pilots_required(&classes), plan.period());
    plan.write_csv(std::io::stdout())?;

    println!("\nslot  active users         K'  L'");
    for t in 0..plan.period() {
        let mask = sparsity_mask(&plan, 0, t);
        let active: Vec<usize> = (0..classes.len()).filter(|&k| mask.get(k)).collect();
        let stats = contamination_stats(mask.k_prime(), 8, 7, 0.3)?;
        println!("{t:>4}  {:<20} {:>2}  {:>2}", format!("{active:?}"), mask.k_prime(), stats.l_prime);
    }
    Ok(())
}
