//! Experiment configuration: command-line flags layered over an optional
//! flat `key = value` file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;
use cw2_core::{Coupling, FiniteModel, GroupWeights};

use crate::output::Format;

pub const DEFAULT_SEED: u64 = 20240901;

/// Failure classes, mapped to process exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Exit code 2.
    Params(String),
    /// Exit code 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Params(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Params(m) => write!(f, "invalid parameters: {m}"),
            CliError::Failed(m) => write!(f, "validation failed: {m}"),
        }
    }
}

impl From<cw2_core::Error> for CliError {
    fn from(e: cw2_core::Error) -> Self {
        CliError::Params(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to the defaults shown.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flat key = value file with the same keys as these flags
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Within-group coupling of group 1 [default: 1]
    #[arg(long)]
    pub j1: Option<f64>,
    /// Within-group coupling of group 2 [default: 1]
    #[arg(long)]
    pub j2: Option<f64>,
    /// Cross-group coupling [default: 0.5]
    #[arg(long)]
    pub jbar: Option<f64>,
    /// Fraction of spins in group 1 [default: 0.5]
    #[arg(long)]
    pub alpha1: Option<f64>,
    /// Fraction of spins in group 2 [default: 0.5]
    #[arg(long)]
    pub alpha2: Option<f64>,
    /// Comma-separated system sizes N, strictly increasing [default: 250,1000,4000]
    #[arg(long)]
    pub sizes: Option<String>,
    /// Comma-separated K:L orders [default: 2:0,0:2,1:1]
    #[arg(long)]
    pub moments: Option<String>,
    /// PRNG seed [default: 20240901]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output format: csv or json [default: csv]
    #[arg(long)]
    pub format: Option<String>,
}

const KEYS: [&str; 10] = [
    "j1", "j2", "jbar", "alpha1", "alpha2", "sizes", "moments", "seed", "out", "format",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Params(format!("config line {}: expected key = value", lineno + 1)))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(CliError::Params(format!("config line {}: unknown key `{key}`", lineno + 1)));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn load_config(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Params(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

/// Validated experiment settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub coupling: Coupling,
    pub weights: GroupWeights,
    pub sizes: Vec<usize>,
    pub moments: Vec<(usize, usize)>,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

fn parse_num<T: std::str::FromStr>(key: &str, raw: &str) -> CliResult<T> {
    raw.trim()
        .parse()
        .map_err(|_| CliError::Params(format!("{key}: cannot parse `{raw}`")))
}

pub fn parse_sizes(raw: &str) -> CliResult<Vec<usize>> {
    let sizes: Vec<usize> = raw
        .split(',')
        .map(|s| parse_num("sizes", s))
        .collect::<CliResult<_>>()?;
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(CliError::Params("sizes must be a nonempty list of positive integers".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Params(format!("sizes must be strictly increasing (got {raw})")));
    }
    Ok(sizes)
}

pub fn parse_moments(raw: &str) -> CliResult<Vec<(usize, usize)>> {
    raw.split(',')
        .map(|pair| {
            let (k, l) = pair
                .split_once(':')
                .ok_or_else(|| CliError::Params(format!("moments: expected K:L, got `{pair}`")))?;
            Ok((parse_num("moments", k)?, parse_num("moments", l)?))
        })
        .collect()
}

impl ExperimentConfig {
    pub fn resolve(args: &CommonArgs) -> CliResult<Self> {
        let file = match &args.config {
            Some(path) => load_config(path)?,
            None => BTreeMap::new(),
        };
        let pick_f64 = |flag: Option<f64>, key: &str, default: f64| -> CliResult<f64> {
            match (flag, file.get(key)) {
                (Some(v), _) => Ok(v),
                (None, Some(raw)) => parse_num(key, raw),
                (None, None) => Ok(default),
            }
        };
        let pick_str = |flag: &Option<String>, key: &str, default: &str| -> String {
            flag.clone()
                .or_else(|| file.get(key).cloned())
                .unwrap_or_else(|| default.to_string())
        };

        let coupling = Coupling::new(
            pick_f64(args.j1, "j1", 1.0)?,
            pick_f64(args.j2, "j2", 1.0)?,
            pick_f64(args.jbar, "jbar", 0.5)?,
        )?;
        let weights = GroupWeights::new(
            pick_f64(args.alpha1, "alpha1", 0.5)?,
            pick_f64(args.alpha2, "alpha2", 0.5)?,
        )?;
        let sizes = parse_sizes(&pick_str(&args.sizes, "sizes", "250,1000,4000"))?;
        let moments = parse_moments(&pick_str(&args.moments, "moments", "2:0,0:2,1:1"))?;
        let seed = match (args.seed, file.get("seed")) {
            (Some(s), _) => s,
            (None, Some(raw)) => parse_num("seed", raw)?,
            (None, None) => DEFAULT_SEED,
        };
        let output_path = args.out.clone().or_else(|| file.get("out").map(PathBuf::from));
        let format = match pick_str(&args.format, "format", "csv").as_str() {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => return Err(CliError::Params(format!("format must be csv or json (got `{other}`)"))),
        };
        Ok(Self {
            coupling,
            weights,
            sizes,
            moments,
            seed,
            output_path,
            format,
        })
    }

    /// Group sizes `N_nu = round(a_nu N)`; both must be at least 1 and sum
    /// to `N`.
    pub fn model_for(&self, n: usize) -> CliResult<FiniteModel> {
        let n1 = (self.weights.alpha1() * n as f64).round() as usize;
        let n2 = (self.weights.alpha2() * n as f64).round() as usize;
        if n1 == 0 || n2 == 0 {
            return Err(CliError::Params(format!(
                "N = {n}: group sizes round(a N) = ({n1}, {n2}) must both be >= 1"
            )));
        }
        if n1 + n2 != n {
            return Err(CliError::Params(format!(
                "N = {n}: group sizes ({n1}, {n2}) leave a residual of {} spins; choose alpha1 + alpha2 = 1 and sizes with integer a N",
                n as i64 - (n1 + n2) as i64
            )));
        }
        Ok(FiniteModel::new(n1, n2)?)
    }
}

/// `lo:hi:count` grid axis, endpoints included.
pub fn parse_range(key: &str, raw: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Params(format!("{key}: expected lo:hi:count, got `{raw}`")));
    }
    let lo: f64 = parse_num(key, parts[0])?;
    let hi: f64 = parse_num(key, parts[1])?;
    let count: usize = parse_num(key, parts[2])?;
    if count == 0 || !(lo.is_finite() && hi.is_finite()) || (count > 1 && hi <= lo) {
        return Err(CliError::Params(format!("{key}: need finite lo < hi and count >= 1 (got `{raw}`)")));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_parsing() {
        let map = parse_config_text("# comment\nj1 = 2\n\nalpha_1=0.3 # trailing\n").unwrap_err();
        assert!(matches!(map, CliError::Params(_)));
        let map = parse_config_text("# comment\nj1 = 2\n\nsizes=10,20 # trailing\n").unwrap();
        assert_eq!(map.get("j1").unwrap(), "2");
        assert_eq!(map.get("sizes").unwrap(), "10,20");
        assert!(parse_config_text("j1 2").is_err());
    }

    #[test]
    fn size_and_moment_lists() {
        assert_eq!(parse_sizes("10,20,40").unwrap(), vec![10, 20, 40]);
        assert!(parse_sizes("20,10").is_err());
        assert!(parse_sizes("10,10").is_err());
        assert!(parse_sizes("").is_err());
        assert_eq!(parse_moments("2:0,1:1").unwrap(), vec![(2, 0), (1, 1)]);
        assert!(parse_moments("2-0").is_err());
    }

    #[test]
    fn flags_override_defaults() {
        let args = CommonArgs {
            j1: Some(0.7),
            format: Some("json".into()),
            ..CommonArgs::default()
        };
        let cfg = ExperimentConfig::resolve(&args).unwrap();
        assert_eq!(cfg.coupling.j1(), 0.7);
        assert_eq!(cfg.coupling.jbar(), 0.5);
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.seed, DEFAULT_SEED);
    }

    #[test]
    fn group_sizes_from_weights() {
        let cfg = ExperimentConfig::resolve(&CommonArgs::default()).unwrap();
        let m = cfg.model_for(250).unwrap();
        assert_eq!((m.n1(), m.n2()), (125, 125));
        let skew = ExperimentConfig::resolve(&CommonArgs {
            alpha1: Some(0.3),
            alpha2: Some(0.6),
            ..CommonArgs::default()
        })
        .unwrap();
        assert!(skew.model_for(100).is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("p", "0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_range("p", "0.5:0.5:1").unwrap(), vec![0.5]);
        assert!(parse_range("p", "1:0:3").is_err());
        assert!(parse_range("p", "0:1").is_err());
    }
}
