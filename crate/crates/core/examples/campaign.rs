//! Run a campaign config, write its result store, then summarize it and emit
//! every figure the store supports.
//!
//! ```text
//! cargo run --release --example campaign -- [config] [out-dir]
//! cargo run --release --example campaign -- campaigns/table5_fixed.toml results/table5-fixed
//! ```

use std::path::PathBuf;

use uav_search::campaign::{self, emit_figure_data, CampaignConfig, FigureId, ResultStore};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let config = args.next().map(PathBuf::from).unwrap_or_else(|| "campaigns/smoke.toml".into());
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("uav-search-campaign"));

    let cfg = CampaignConfig::load(&config)?;
    let cells = cfg.cells()?;
    eprintln!("{}: {} cells x {} runs", cfg.name, cells.len(), cfg.runs);
    campaign::run_campaign_to(&cfg, &out)?;

    let store = ResultStore::open(&out)?;
    for s in store.verify_summaries()? {
        println!("{:<28} mu(Tnc) {:.3} sd {:.3} completed {}/{}", s.cell, s.mean_tnc, s.sd_tnc, s.completed, s.runs);
    }
    let figures = out.join("figures");
    std::fs::create_dir_all(&figures)?;
    for id in FigureId::ALL {
        if let Ok(text) = emit_figure_data(&store, id) {
            std::fs::write(figures.join(format!("{id}.csv")), text)?;
            eprintln!("wrote {id}.csv");
        }
    }
    eprintln!("store in {}", out.display());
    Ok(())
}
