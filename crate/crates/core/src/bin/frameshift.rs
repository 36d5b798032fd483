//! Command-line front end. Exit codes: 0 success, 1 validation error,
//! 2 scheduling infeasibility, 3 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use frameshift_mimo::config::load_config;
use frameshift_mimo::harness::{
    classify_demo, emit_csv, emit_plot, emit_trace_csv, run_slot_simulation, sweep_antennas, sweep_class,
    MobilityProfile, PlotMetric, SimOptions, SweepSpec, SweepVariable,
};
use frameshift_mimo::metrics::{
    class_for_coherence, coherence_samples, coherence_time, sinr_closed_form, OfdmNumerology,
};
use frameshift_mimo::scheduler::{assign_network, contamination_stats, PilotReuse};
use frameshift_mimo::{Error, Result, SystemConfig};

#[derive(Parser)]
#[command(name = "frameshift", version, about = "Massive MIMO pilot-skipping simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Se,
    Ee,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Static,
    Pedestrian,
    Train,
}

#[derive(Subcommand)]
enum Command {
    /// Slot-level Monte Carlo with every user in one class.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 30)]
        slots: u64,
        /// Coherence class given to every user.
        #[arg(long, default_value_t = 1)]
        class: u32,
        #[arg(long, default_value = "trace.csv")]
        trace: PathBuf,
    },
    /// Closed-form SE/EE over an antenna grid.
    SweepAntennas {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        m_min: usize,
        #[arg(long)]
        m_max: usize,
        #[arg(long)]
        m_step: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,3")]
        classes: Vec<u32>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "ee")]
        plot_metric: MetricArg,
    },
    /// Closed-form SE/EE over class index 1..=n-max at fixed M.
    SweepClass {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "ee")]
        plot_metric: MetricArg,
    },
    /// Classifier trace for a single cell under a mobility profile.
    ClassifyDemo {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        profile: ProfileArg,
        #[arg(long)]
        slots: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Coherence interval in samples and the suggested class.
    Coherence {
        /// m/s.
        #[arg(long)]
        velocity: f64,
        /// Hz.
        #[arg(long)]
        freq: f64,
        /// Supplies the base frame length and class cap.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn read_config(path: &Path) -> Result<SystemConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    load_config(&text)
}

fn metric(m: MetricArg) -> PlotMetric {
    match m {
        MetricArg::Se => PlotMetric::SpectralEfficiency,
        MetricArg::Ee => PlotMetric::EnergyEfficiency,
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run { config, seed, trials, slots, class, trace } => {
            let cfg = read_config(&config)?;
            let seed = seed.unwrap_or(cfg.rng_seed);
            let classes = vec![vec![class; cfg.num_users]; cfg.num_cells];
            let plan = assign_network(&classes, cfg.num_pilots, cfg.max_class, PilotReuse::Shuffled { seed })?;
            let opts = SimOptions { num_slots: slots, trials, noise: true, coherence: None, warmup_slots: 0 };
            let out = run_slot_simulation(&cfg, &plan, &opts, seed)?;
            emit_trace_csv(&out.trace, &trace)?;

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
            let sinr = out.mean_sinr();
            println!("cells {}  users/cell {}  M {}  class {class}", cfg.num_cells, cfg.num_users, cfg.num_antennas);
            println!("slots {slots}  trials {trials}  seed {seed}");
            println!("empirical SINR   {:.6} ({:.3} dB)", sinr, 10.0 * sinr.log10());
            println!("closed-form SINR {:.6} ({:.3} dB)  L' = {}", closed, 10.0 * closed.log10(), stats.l_prime);
            println!("trace: {} rows -> {}", out.trace.len(), trace.display());
        }
        Command::SweepAntennas { config, m_min, m_max, m_step, classes, out, plot, plot_metric } => {
            let cfg = read_config(&config)?;
            let spec = SweepSpec::range(SweepVariable::Antennas, m_min, m_max, m_step, cfg)?;
            let table = sweep_antennas(&spec, &classes)?;
            emit_csv(&table, &out)?;
            if let Some(p) = plot {
                emit_plot(&table, metric(plot_metric), &p)?;
            }
            println!("{} rows -> {} (config {})", table.rows.len(), out.display(), table.provenance.config_hash);
        }
        Command::SweepClass { config, m, n_max, out, plot, plot_metric } => {
            let cfg = SystemConfig { num_antennas: m, ..read_config(&config)? };
            let spec = SweepSpec::new(SweepVariable::ClassIndex, (1..=n_max).collect(), 1, cfg)?;
            let table = sweep_class(&spec)?;
            emit_csv(&table, &out)?;
            if let Some(p) = plot {
                emit_plot(&table, metric(plot_metric), &p)?;
            }
            println!("{} rows -> {} (config {})", table.rows.len(), out.display(), table.provenance.config_hash);
        }
        Command::ClassifyDemo { config, profile, slots, out } => {
            let cfg = read_config(&config)?;
            let profile = match profile {
                ProfileArg::Static => MobilityProfile::Static,
                ProfileArg::Pedestrian => MobilityProfile::Pedestrian,
                ProfileArg::Train => MobilityProfile::Train,
            };
            let rows = classify_demo(&cfg, profile, slots, cfg.rng_seed)?;
            emit_trace_csv(&rows, &out)?;
            let last: Vec<u32> = rows.iter().rev().take(cfg.num_users).map(|r| r.class_n).collect();
            println!("{} rows -> {}", rows.len(), out.display());
            if let (Some(lo), Some(hi)) = (last.iter().min(), last.iter().max()) {
                println!("final classes: {lo}..={hi}");
            }
        }
        Command::Coherence { velocity, freq, config } => {
            if !(velocity.is_finite() && velocity > 0.0) {
                return Err(Error::Validation { field: "velocity", message: format!("must be > 0, got {velocity}") });
            }
            if !(freq.is_finite() && freq > 0.0) {
                return Err(Error::Validation { field: "freq", message: format!("must be > 0, got {freq}") });
            }
            let cfg = match config {
                Some(p) => read_config(&p)?,
                None => SystemConfig::default(),
            };
            let samples = coherence_samples(velocity, freq, &OfdmNumerology::default());
            let choice = class_for_coherence(samples, cfg.frame_len as u64, cfg.max_class);
            println!("coherence time {:.3} us", coherence_time(velocity, freq) * 1e6);
            println!("T = {samples} samples");
            println!("suggested class {}", choice.class_n);
            if choice.faster_than_base {
                eprintln!("warning: coherence interval shorter than the {}-sample base frame", cfg.frame_len);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
