//! Maps user speed to coherence interval in samples and to a class.
//!
//! cargo run --example coherence_numerology

use frameshift_mimo::harness::CARRIER_FREQ;
use frameshift_mimo::metrics::{class_for_coherence, coherence_samples, coherence_time, OfdmNumerology};

fn main() {
    let num = OfdmNumerology::default();
    let base = coherence_samples(83.33, CARRIER_FREQ, &num);
    println!("Nyquist tones per symbol: {:.3}", num.nyquist_tones());
    println!("{:>10} {:>14} {:>10} {:>6}", "v (m/s)", "T_slot (us)", "samples", "class");
    for v in [83.33, 50.0, 27.8, 13.9, 5.0, 1.38, 0.5] {
        let samples = coherence_samples(v, CARRIER_FREQ, &num);
        let choice = class_for_coherence(samples, base, 30);
        println!(
            "{v:>10.2} {:>14.1} {samples:>10} {:>6}{}",
            coherence_time(v, CARRIER_FREQ) * 1e6,
            choice.class_n,
            if choice.faster_than_base { " (faster than base frame)" } else { "" }
        );
    }
}
