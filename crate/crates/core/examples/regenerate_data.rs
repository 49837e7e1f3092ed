//! Rewrites the generated files under the data directory from `config.json`.

use curvekit_core::fixtures::{data_dir, write_all, Config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = data_dir();
    let config = Config::load(&dir)?;
    write_all(&dir, &config)?;
    println!("wrote {}", dir.display());
    Ok(())
}
