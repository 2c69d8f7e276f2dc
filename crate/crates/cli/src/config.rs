//! Run settings: command-line flags over a flat `key = value` file over
//! built-in defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};

use semitoric::inverse::MAX_LEVEL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Invalid flags, config file or environment.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub const KEYS: [&str; 11] = [
    "n",
    "k-min",
    "k-max",
    "lambda-min",
    "lambda-max",
    "tol",
    "output",
    "format",
    "blind",
    "use-true-b22",
    "epsilon",
];

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Flat `key = value` settings file; flags take precedence over it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Quantization level (ħ = 2/(n+1)).
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// First level k of the study, n = 2^k + 1.
    #[arg(long = "k-min", global = true)]
    pub k_min: Option<u32>,
    /// Last level k of the study.
    #[arg(long = "k-max", global = true)]
    pub k_max: Option<u32>,
    #[arg(long = "lambda-min", global = true, allow_hyphen_values = true)]
    pub lambda_min: Option<f64>,
    #[arg(long = "lambda-max", global = true, allow_hyphen_values = true)]
    pub lambda_max: Option<f64>,
    /// Numerical tolerance (eigenvalues: relative to the matrix norm).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Omit ground-truth comparisons.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub blind: Option<bool>,
    /// Use B22 = 2 when estimating a2.
    #[arg(long = "use-true-b22", global = true, num_args = 0..=1, default_missing_value = "true")]
    pub use_true_b22: Option<bool>,
    /// Cut direction of the polygon, -1 or 1.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub epsilon: Option<i32>,
}

/// Parses a flat settings file: one `key = value` per line, `#` starts a
/// comment, blank lines are skipped, `_` and `-` are interchangeable in keys.
pub fn parse_config(text: &str) -> anyhow::Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected `key = value`", i + 1)))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(usage(format!("config line {}: unknown key `{key}`", i + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

/// Fully resolved settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub n: u32,
    pub k_min: u32,
    pub k_max: u32,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub tol: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub blind: bool,
    pub use_true_b22: bool,
    pub epsilon: i32,
}

struct Layer<'a> {
    file: &'a BTreeMap<String, String>,
}

impl Layer<'_> {
    fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> anyhow::Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| usage(format!("config: invalid value `{v}` for `{key}`"))),
        }
    }
}

impl Settings {
    pub fn resolve(flags: &Flags) -> anyhow::Result<Self> {
        let file = match &flags.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        let layer = Layer { file: &file };
        let format = match flags.format {
            Some(f) => Some(f),
            None => match file.get("format") {
                Some(v) => Some(
                    Format::from_str(v, true).map_err(|_| usage(format!("config: invalid format `{v}`")))?,
                ),
                None => None,
            },
        };
        let s = Settings {
            n: layer.pick(flags.n, "n")?.unwrap_or(13),
            k_min: layer.pick(flags.k_min, "k-min")?.unwrap_or(1),
            k_max: layer.pick(flags.k_max, "k-max")?.unwrap_or(9),
            lambda_min: layer.pick(flags.lambda_min, "lambda-min")?.unwrap_or(-1.0),
            lambda_max: layer.pick(flags.lambda_max, "lambda-max")?.unwrap_or(3.0),
            tol: layer.pick(flags.tol, "tol")?,
            output: layer.pick(flags.output.clone(), "output")?,
            format,
            blind: layer.pick(flags.blind, "blind")?.unwrap_or(false),
            use_true_b22: layer.pick(flags.use_true_b22, "use-true-b22")?.unwrap_or(false),
            epsilon: layer.pick(flags.epsilon, "epsilon")?.unwrap_or(-1),
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> anyhow::Result<()> {
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(usage(format!("tolerance must be positive, got {t}")));
            }
        }
        if self.k_min < 1 || self.k_min > self.k_max || self.k_max > MAX_LEVEL {
            return Err(usage(format!(
                "level range must satisfy 1 ≤ k-min ≤ k-max ≤ {MAX_LEVEL}, got {}..{}",
                self.k_min, self.k_max
            )));
        }
        if !(self.lambda_min <= self.lambda_max) {
            return Err(usage(format!(
                "lambda-min ({}) must not exceed lambda-max ({})",
                self.lambda_min, self.lambda_max
            )));
        }
        if self.epsilon != 1 && self.epsilon != -1 {
            return Err(usage(format!("epsilon must be -1 or 1, got {}", self.epsilon)));
        }
        if self.blind && self.use_true_b22 {
            return Err(usage("--blind and --use-true-b22 are incompatible"));
        }
        Ok(())
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn read_config(path: &Path) -> anyhow::Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Worker cap from `SEMITORIC_THREADS`.
pub fn thread_cap(value: Option<&str>) -> anyhow::Result<Option<usize>> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(usage(format!("SEMITORIC_THREADS must be a positive integer, got `{v}`"))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let m = parse_config("# comment\nn = 27\n\nk_max=5  # trailing\nformat = json\n").unwrap();
        assert_eq!(m["n"], "27");
        assert_eq!(m["k-max"], "5");
        assert_eq!(m["format"], "json");
        assert!(parse_config("nonsense\n").is_err());
        assert!(parse_config("colour = red\n").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = parse_config("n = 27\ntol = 1e-9\n").unwrap();
        let layer = Layer { file: &file };
        assert_eq!(layer.pick(Some(5u32), "n").unwrap(), Some(5));
        assert_eq!(layer.pick(None::<u32>, "n").unwrap(), Some(27));
        assert_eq!(layer.pick(None::<f64>, "tol").unwrap(), Some(1e-9));
        assert_eq!(layer.pick(None::<u32>, "k-min").unwrap(), None);
    }

    #[test]
    fn thread_env() {
        assert_eq!(thread_cap(None).unwrap(), None);
        assert_eq!(thread_cap(Some("4")).unwrap(), Some(4));
        assert!(thread_cap(Some("0")).is_err());
        assert!(thread_cap(Some("many")).is_err());
    }
}
