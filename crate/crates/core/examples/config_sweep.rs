//! Run a TOML-described sweep, print its CSV, then repeat the STEER rows over
//! a sample grid with the concentration bound alongside.
//!
//!     cargo run --release --example config_sweep -- fixtures/ising_1x6_sweep.toml

use steer::config::ExperimentConfig;
use steer::experiments::{concentration_sweep, run_sweep, write_concentration_csv, write_csv};

const DEFAULT: &str = r#"
seed = 1
output = "sweep.csv"
record_wall_time = false

[model]
kind = "ising"
cols = 5

[formula]
order = 2

[sweep]
modes = ["trotter", "standard", "qds"]
times = [0.1, 0.2]
layers = [1, 2]
samples = [200]
"#;

fn main() -> steer::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::from_toml(DEFAULT)?,
    };
    let stdout = std::io::stdout();
    write_csv(&run_sweep(&cfg)?, stdout.lock())?;
    println!();
    write_concentration_csv(&concentration_sweep(&cfg, &[100, 1000])?, stdout.lock())?;
    Ok(())
}
