use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use uav_search::campaign::{self, CampaignConfig, FigureId, ResultStore, WORKERS_ENV};
use uav_search::metrics::{analytic_pcm, analytic_pcs, sensing_area};
use uav_search::CampaignError;

#[derive(Parser)]
#[command(name = "uav-search", version, about = "Multi-UAV stochastic target search campaigns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a campaign and write its result store.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (0 = all cores).
        #[arg(long, env = WORKERS_ENV)]
        workers: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-run one stored run with its event log and print the events as JSON lines.
    Replay {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        cell: usize,
        #[arg(long)]
        run: usize,
    },
    /// Check summary.csv against runs.csv and print it.
    Summarize {
        #[arg(long)]
        out: PathBuf,
    },
    /// Write figure or table data into <out>/figures/.
    Figures {
        #[arg(long)]
        out: PathBuf,
        /// Figure id such as fig4 or table5, or "all".
        #[arg(long, default_value = "all")]
        figure: String,
    },
    /// Parse and validate a campaign config without running it.
    ValidateConfig {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the analytic confirmation-probability curves as CSV.
    Analytic {
        /// Detection time for the localized curve, seconds.
        #[arg(long, default_value_t = 1000.0)]
        t_d: f64,
        #[arg(long, default_value_t = 5000.0)]
        t_max: f64,
        #[arg(long, default_value_t = 100.0)]
        step: f64,
        /// Confirmation sensor radius, meters.
        #[arg(long, default_value_t = 400.0)]
        r_n: f64,
        /// Detection sensor radius, meters.
        #[arg(long, default_value_t = 2000.0)]
        r_d: f64,
        #[arg(long, default_value_t = 20.0)]
        speed: f64,
        /// Search area, square meters.
        #[arg(long, default_value_t = 4e8)]
        area: f64,
    },
}

/// `println!` that reports a failed write instead of panicking.
macro_rules! say {
    ($($arg:tt)*) => {
        writeln!(io::stdout().lock(), $($arg)*)
            .map_err(|e| CampaignError::Io { path: PathBuf::from("<stdout>"), source: e })?
    };
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        // Output piped into something like `head`.
        Err(CampaignError::Io { source, .. }) if source.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<(), CampaignError> {
    match command {
        Command::Run { config, runs, seed, workers, out } => {
            let mut cfg = CampaignConfig::load(&config)?;
            if let Some(n) = runs {
                cfg.runs = n;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(w) = workers {
                cfg.workers = w;
            }
            let result = campaign::run_campaign_to(&cfg, &out)?;
            eprintln!("{} cells x {} runs written to {}", result.cells.len(), cfg.runs, out.display());
        }
        Command::Replay { out, cell, run } => {
            let store = ResultStore::open(&out)?;
            let record = campaign::replay(&store, cell, run)?;
            for e in &record.events {
                say!("{}", serde_json::to_string(e).map_err(|e| CampaignError::Store(e.to_string()))?);
            }
        }
        Command::Summarize { out } => {
            let store = ResultStore::open(&out)?;
            let rows = store.verify_summaries()?;
            say!("{:<32} {:>5} {:>9} {:>8} {:>9} {:>9}", "cell", "runs", "mean_tnc", "sd_tnc", "mean_ts", "censored");
            for s in rows {
                let ts = s.mean_ts.map(|v| format!("{v:.1}")).unwrap_or_else(|| "-".into());
                say!(
                    "{:<32} {:>5} {:>9.3} {:>8.3} {:>9} {:>9}",
                    s.cell, s.runs, s.mean_tnc, s.sd_tnc, ts, s.censored
                );
            }
        }
        Command::Figures { out, figure } => {
            let store = ResultStore::open(&out)?;
            let dir = out.join("figures");
            std::fs::create_dir_all(&dir).map_err(|e| CampaignError::Io { path: dir.clone(), source: e })?;
            let ids: Vec<FigureId> =
                if figure == "all" { FigureId::ALL.to_vec() } else { vec![figure.parse()?] };
            let mut written = 0;
            for id in &ids {
                match campaign::emit_figure_data(&store, *id) {
                    Ok(text) => {
                        let path = dir.join(format!("{id}.csv"));
                        std::fs::write(&path, text).map_err(|e| CampaignError::Io { path: path.clone(), source: e })?;
                        eprintln!("wrote {}", path.display());
                        written += 1;
                    }
                    // With "all", skip what this store cannot produce.
                    Err(e) if ids.len() > 1 => eprintln!("skipped {id}: {e}"),
                    Err(e) => return Err(e),
                }
            }
            if written == 0 {
                return Err(CampaignError::Store("no figure could be produced from this store".into()));
            }
        }
        Command::ValidateConfig { config } => {
            let cfg = CampaignConfig::load(&config)?;
            cfg.validate()?;
            let cells = cfg.cells()?;
            say!("ok: {} cells, {} runs each, config sha256 {}", cells.len(), cfg.runs, cfg.sha256());
            for c in cells {
                say!("  {:>3} {}", c.id, c.key);
            }
        }
        Command::Analytic { t_d, t_max, step, r_n, r_d, speed, area } => {
            if !(step > 0.0 && t_max > 0.0) {
                return Err(CampaignError::Store("--step and --t-max must be positive".into()));
            }
            say!("t,p_cs,p_cm");
            let n = (t_max / step).floor() as usize;
            for i in 1..=n {
                let t = i as f64 * step;
                let pcs = analytic_pcs(t, r_n, speed, area)?;
                let pcm = analytic_pcm(t, t_d, r_n, speed, area, sensing_area(r_d))?;
                say!("{t},{pcs},{pcm}");
            }
        }
    }
    Ok(())
}
