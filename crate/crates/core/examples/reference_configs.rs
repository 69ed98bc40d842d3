//! Writes JSON configs of the reference instances for use with the `fls` binary.
//!
//! `cargo run --release --example reference_configs -- [dir] [L]`

use fls::model::reference::ReferenceInstance;
use fls::model::ExperimentConfig;
use std::path::PathBuf;

fn main() -> fls::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "configs".into()));
    let modes: usize = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(2);
    std::fs::create_dir_all(&dir)?;
    for inst in ReferenceInstance::ALL {
        let (model, init) = inst.build(modes);
        let mut cfg = ExperimentConfig::from_model(&model, &init, inst.duration());
        cfg.seed = Some(1);
        cfg.target_epsilon = Some(0.05);
        let path = dir.join(format!("{}.json", inst.name()));
        std::fs::write(&path, cfg.to_json_string())?;
        println!("{}", path.display());
    }
    Ok(())
}
