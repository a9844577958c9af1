// A small power table driven by a JSON study configuration, rendered as
// Markdown. The `iawd power` command runs the same code on config files.
//
// ```bash
// cargo run --release --example power_study
// ```

use iawd::{emit_table, run_study, StudyConfig, TableFormat};

const CONFIG: &str = r#"{
    "title": "Dickman null, desk scale",
    "null_family": "dickman",
    "weights": [{"shape": "gauss", "gammas": [0.5, 1]}],
    "n": 30, "alpha": 0.1, "B": 0, "repetitions": 200,
    "bootstrap_mode": "warp_speed",
    "rows": [
        {"null": {"family": "dickman", "params": [1]}},
        {"alt": {"family": "weibull", "params": [0.5]}},
        {"alt": {"family": "log_normal", "params": [0.5]}}
    ],
    "seed": 2
}"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = StudyConfig::from_json(CONFIG)?;
    let table = run_study(&cfg)?;
    print!("{}", emit_table(&table, TableFormat::Markdown));
    println!("config hash {}", table.metadata.config_hash);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("power_study example");
}
