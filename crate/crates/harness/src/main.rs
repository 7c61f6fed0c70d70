use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use djsparse::ledger::{analytic_range, Algorithm};
use djsparse_harness::config::ExperimentConfig;
use djsparse_harness::plot::{emit_plot, PlotAxis, PlotMetric, PlotSpec};
use djsparse_harness::summarize::{render_table, summarize};
use djsparse_harness::sweep::{execute_run, read_rows, run_sweep_to_csv};
use std::path::PathBuf;
use std::str::FromStr;

/// Distributed jointly-sparse recovery benchmarks: DJ-IST, DJ-ADMM and the
/// DC-OMP baselines with exact per-link bit accounting.
#[derive(Parser)]
#[command(name = "djsparse", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the master seed from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output directory from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run the full-size ensemble (50 signal sets x 5 matrices).
    #[arg(long)]
    full: bool,
}

impl ConfigArgs {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut config = ExperimentConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(out) = &self.out {
            config.out_dir = out.clone();
        }
        if self.full {
            config.signal_sets = 50;
            config.matrices_per_set = 5;
        }
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Execute a single run of one sweep point and print its row.
    Run {
        #[command(flatten)]
        config: ConfigArgs,
        /// Sweep-point index (position in m_list / v_list).
        #[arg(long, default_value_t = 0)]
        point: usize,
        /// Run index within the point.
        #[arg(long, default_value_t = 0)]
        run: usize,
    },
    /// Execute the full sweep and write results.csv.
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Aggregate a results CSV into per-group mean/min/max statistics.
    Summarize {
        /// Input CSV produced by `sweep`.
        #[arg(long)]
        csv: PathBuf,
        /// Comma-separated group keys (subset of
        /// algorithm,topology,n,m,k,V).
        #[arg(long, default_value = "algorithm,topology,n,m,k,V")]
        by: String,
        /// Write the aggregate table to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a metric-vs-sweep-variable line plot from a results CSV.
    Plot {
        /// Input CSV produced by `sweep`.
        #[arg(long)]
        csv: PathBuf,
        /// X axis: m or v.
        #[arg(long, default_value = "m")]
        x: String,
        /// Metric: ase, pesr, rse, iterations or bits.
        #[arg(long, default_value = "ase")]
        y: String,
        /// Logarithmic y axis.
        #[arg(long)]
        log_y: bool,
        /// Comma-separated algorithms to draw.
        #[arg(long, default_value = "djist,djadmm,dcomp1,dcomp2")]
        series: String,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
        /// Plot title.
        #[arg(long)]
        title: Option<String>,
    },
    /// Print the analytic total-bit ranges for the given parameters.
    Ranges {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        v: usize,
        /// Self-inclusive degree of the regular topology.
        #[arg(long)]
        d: usize,
        /// Bits per quantized real.
        #[arg(long, default_value_t = 16)]
        q: u32,
        /// Switch cap.
        #[arg(long, default_value_t = 20)]
        p: u32,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run { config, point, run } => {
            let config = config.load()?;
            let points = config.points();
            let Some(point) = points.get(point).copied() else {
                bail!("point index {point} out of range ({} points)", points.len());
            };
            if run >= config.runs_per_point() {
                bail!("run index {run} out of range ({} runs)", config.runs_per_point());
            }
            let set = run / config.matrices_per_set;
            let matrix = run % config.matrices_per_set;
            let row = execute_run(&config, &point, set, matrix)?;
            println!(
                "algorithm={} topology={} n={} m={} k={} V={} run={}",
                row.algorithm, row.topology, row.n, row.m, row.k, row.v, row.run_id
            );
            println!(
                "ase={} pesr={} rse={} iterations={} total_bits={} t1={} converged={}",
                row.ase, row.pesr, row.rse, row.iterations, row.total_bits, row.t1, row.converged
            );
        }
        Command::Sweep { config } => {
            let config = config.load()?;
            let (rows, path) = run_sweep_to_csv(&config)?;
            println!("wrote {} rows to {}", rows.len(), path.display());
        }
        Command::Summarize { csv, by, out } => {
            let rows = read_rows(&csv)?;
            let keys: Vec<&str> = by.split(',').map(str::trim).collect();
            let aggregates = summarize(&rows, &keys)?;
            let table = render_table(&keys, &aggregates);
            match out {
                Some(path) => std::fs::write(&path, table)
                    .with_context(|| format!("cannot write {}", path.display()))?,
                None => print!("{table}"),
            }
        }
        Command::Plot {
            csv,
            x,
            y,
            log_y,
            series,
            out,
            title,
        } => {
            let rows = read_rows(&csv)?;
            let y: PlotMetric = y.parse()?;
            let spec = PlotSpec {
                x: PlotAxis::from_str(&x)?,
                y,
                log_y,
                series: series.split(',').map(|s| s.trim().to_string()).collect(),
                title: title.unwrap_or_else(|| format!("{} vs {}", y.label(), x)),
                out: out.clone(),
            };
            emit_plot(&rows, &spec)?;
            println!("wrote {}", out.display());
        }
        Command::Ranges { n, k, v, d, q, p } => {
            if d < 2 || d > v.max(1) {
                bail!("need 2 <= d <= V");
            }
            println!("algorithm,min_bits,max_bits");
            for algorithm in Algorithm::ALL {
                let (min, max) = analytic_range(algorithm, n, k, v, d, q, p);
                println!("{algorithm},{min},{max}");
            }
        }
    }
    Ok(())
}
