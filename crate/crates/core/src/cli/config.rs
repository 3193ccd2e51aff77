use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::CliError;
use crate::twoslit::SlitsOpen;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    ClassicalGaussian,
    QuantumGaussian,
    LambdaRep,
    Decoupling,
    TwoSlitClassical,
    TwoSlitQuantum,
    KvnPostulateCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::ClassicalGaussian,
        Experiment::QuantumGaussian,
        Experiment::LambdaRep,
        Experiment::Decoupling,
        Experiment::TwoSlitClassical,
        Experiment::TwoSlitQuantum,
        Experiment::KvnPostulateCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::ClassicalGaussian => "classical_gaussian",
            Experiment::QuantumGaussian => "quantum_gaussian",
            Experiment::LambdaRep => "lambda_rep",
            Experiment::Decoupling => "decoupling",
            Experiment::TwoSlitClassical => "two_slit_classical",
            Experiment::TwoSlitQuantum => "two_slit_quantum",
            Experiment::KvnPostulateCheck => "kvn_postulate_check",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let key: String = s.chars().filter(|c| *c != '_' && *c != '-').collect::<String>().to_lowercase();
        Self::ALL
            .into_iter()
            .find(|e| e.name().replace('_', "") == key)
    }

    /// Numeric keys with their defaults.
    pub fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            Experiment::ClassicalGaussian => &[
                ("a", 1.0),
                ("b", 1.0),
                ("p_i", 0.5),
                ("m", 1.0),
                ("t", 2.0),
                ("frames", 5.0),
                ("q_min", -12.0),
                ("q_max", 12.0),
                ("p_min", -8.0),
                ("p_max", 8.0),
                ("n_q", 512.0),
                ("n_p", 512.0),
            ],
            Experiment::QuantumGaussian => &[
                ("a", 1.0),
                ("p_i", 0.0),
                ("hbar", 1.0),
                ("m", 1.0),
                ("t", 2.0),
                ("x_min", -12.0),
                ("x_max", 12.0),
                ("n_x", 512.0),
            ],
            Experiment::LambdaRep => &[
                ("a", 1.0),
                ("b", 1.0),
                ("p_i", 0.5),
                ("m", 1.0),
                ("t", 1.0),
                ("q_min", -12.0),
                ("q_max", 12.0),
                ("p_min", -8.0),
                ("p_max", 8.0),
                ("n_q", 512.0),
                ("n_p", 512.0),
            ],
            Experiment::Decoupling => &[
                ("a", 1.0),
                ("b", 1.0),
                ("p_i", 1.0),
                ("m", 1.0),
                ("hbar", 1.0),
                ("g", 0.3),
                ("k", 0.0),
                ("t", 1.0),
                ("dt", 1e-4),
                ("q_min", -12.0),
                ("q_max", 12.0),
                ("p_min", -8.0),
                ("p_max", 8.0),
                ("n_q", 512.0),
                ("n_p", 512.0),
            ],
            Experiment::TwoSlitClassical => &[
                ("a", 1.0),
                ("b", 1.0),
                ("p_i", 0.0),
                ("m", 1.0),
                ("x_A", 1.0),
                ("delta", 0.1),
                ("y_F", 1.0),
                ("y_S", 2.0),
                ("p_y0", 1.0),
                ("x_min", -8.0),
                ("x_max", 8.0),
                ("n_x", 801.0),
                ("window_lo", -4.0),
                ("window_hi", 4.0),
            ],
            Experiment::TwoSlitQuantum => &[
                ("a", 1.0),
                ("hbar", 1.0),
                ("m", 1.0),
                ("x_A", 0.5),
                ("delta", 0.1),
                ("y_F", 1.0),
                ("y_S", 2.0),
                ("p_y0", 1.0),
                ("x_min", -24.0),
                ("x_max", 24.0),
                ("n_x", 4801.0),
                ("window_lo", crate::twoslit::FRINGE_WINDOW.0),
                ("window_hi", crate::twoslit::FRINGE_WINDOW.1),
            ],
            Experiment::KvnPostulateCheck => &[
                ("a", 1.0),
                ("b", 1.0),
                ("p_i", 0.5),
                ("m", 1.0),
                ("dq", 0.025),
                ("dp", 0.05),
                ("q_half", 12.0),
                ("p_half", 8.0),
            ],
        }
    }

    /// Non-numeric keys this experiment accepts, besides `experiment` and
    /// `output`.
    fn text_keys(self) -> &'static [&'static str] {
        match self {
            Experiment::TwoSlitClassical | Experiment::TwoSlitQuantum => &["open"],
            Experiment::KvnPostulateCheck => &["times"],
            _ => &[],
        }
    }
}

/// A validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Every numeric key of the experiment, defaults filled in.
    pub params: BTreeMap<String, f64>,
    pub open: SlitsOpen,
    pub times: Vec<f64>,
    pub output: PathBuf,
}

impl ExperimentConfig {
    pub fn get(&self, key: &str) -> f64 {
        self.params[key]
    }

    /// A key that must hold a whole number ≥ `min`.
    pub fn count(&self, key: &str, min: usize) -> Result<usize, CliError> {
        let v = self.get(key);
        if v.fract() != 0.0 || v < min as f64 {
            return Err(CliError::Validation(format!("{key} must be an integer >= {min}, got {v}")));
        }
        Ok(v as usize)
    }

    /// Builds a config from ordered `(key, value)` text pairs; later pairs
    /// override earlier ones.
    pub fn from_pairs(pairs: &[(String, String)], default_output: Option<&Path>) -> Result<Self, CliError> {
        let mut raw: BTreeMap<String, String> = BTreeMap::new();
        for (k, v) in pairs {
            raw.insert(k.clone(), v.clone());
        }
        let name = raw
            .remove("experiment")
            .ok_or_else(|| CliError::Validation("missing key: experiment".into()))?;
        let experiment = Experiment::parse(&name).ok_or_else(|| {
            let known: Vec<&str> = Experiment::ALL.iter().map(|e| e.name()).collect();
            CliError::Validation(format!("unknown experiment '{name}'; expected one of {}", known.join(", ")))
        })?;
        let output = match raw.remove("output") {
            Some(p) => PathBuf::from(p),
            None => default_output
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from(format!("{}.csv", experiment.name()))),
        };

        let numeric = experiment.defaults();
        let text = experiment.text_keys();
        let unknown: Vec<&str> = raw
            .keys()
            .map(String::as_str)
            .filter(|k| !numeric.iter().any(|(n, _)| n == k) && !text.contains(k))
            .collect();
        if !unknown.is_empty() {
            return Err(CliError::Validation(format!(
                "unknown keys for {}: {}",
                experiment.name(),
                unknown.join(", ")
            )));
        }

        let mut params = BTreeMap::new();
        for &(key, default) in numeric {
            let value = match raw.get(key) {
                Some(s) => s
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Validation(format!("{key}: '{s}' is not a number")))?,
                None => default,
            };
            if !value.is_finite() {
                return Err(CliError::Validation(format!("{key} must be finite, got {value}")));
            }
            params.insert(key.to_string(), value);
        }

        let open = match raw.get("open").map(|s| s.trim().to_lowercase()) {
            None => SlitsOpen::Both,
            Some(s) => match s.as_str() {
                "both" => SlitsOpen::Both,
                "first" | "only_first" | "1" => SlitsOpen::OnlyFirst,
                "second" | "only_second" | "2" => SlitsOpen::OnlySecond,
                other => {
                    return Err(CliError::Validation(format!(
                        "open must be both, first or second, got '{other}'"
                    )))
                }
            },
        };

        let times = match raw.get("times") {
            None => vec![0.5, 1.0, 2.0],
            Some(s) => s
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| CliError::Validation(format!("times: '{t}' is not a number")))
                })
                .collect::<Result<Vec<_>, _>>()?,
        };

        Ok(Self {
            experiment,
            params,
            open,
            times,
            output,
        })
    }
}

/// Parses `key = value` lines. Blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("line {}: expected key = value", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Parses `--key value` and `--key=value` overrides.
pub fn parse_overrides(args: &[String]) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let key = arg
            .strip_prefix("--")
            .ok_or_else(|| CliError::Validation(format!("expected --key value, got '{arg}'")))?;
        if let Some((k, v)) = key.split_once('=') {
            out.push((k.to_string(), v.to_string()));
        } else {
            let v = it
                .next()
                .ok_or_else(|| CliError::Validation(format!("--{key} needs a value")))?;
            out.push((key.to_string(), v.clone()));
        }
    }
    Ok(out)
}
