//! Drives the experiment runner from code instead of the `kvnlab` binary:
//! builds a config, runs it, and diffs two runs.

use kvnlab::cli::{compare_tables, execute, ExperimentConfig};

fn main() -> Result<(), kvnlab::cli::CliError> {
    let pairs = |delta: &str| {
        vec![
            ("experiment".to_string(), "two_slit_classical".to_string()),
            ("delta".to_string(), delta.to_string()),
            ("n_x".to_string(), "161".to_string()),
        ]
    };
    let narrow = execute(&ExperimentConfig::from_pairs(&pairs("0.1"), None)?)?;
    let wide = execute(&ExperimentConfig::from_pairs(&pairs("0.2"), None)?)?;
    println!("results: {}", serde_json::Value::Object(narrow.results.clone()));
    let report = compare_tables(&narrow.table, &wide.table, None, &["P".to_string()], 1e-3)?;
    println!("{report}");
    Ok(())
}
