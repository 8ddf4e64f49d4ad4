use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Invalid user input; reported with exit code 2.
#[derive(Debug)]
pub struct InputError {
    pub field: String,
    pub message: String,
}

impl InputError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid {}: {}", self.field, self.message)
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Parser)]
#[command(
    name = "parity-metrology",
    version,
    about = "Parity-detection sweeps for tunable squeezed Bell states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parity signal (and sensitivity) against φ.
    Signal(SweepArgs),
    /// Optimal sensitivity and Heisenberg-limit gap over an (r, δ) grid.
    SensitivitySurface(SweepArgs),
    /// Visibility, FWHM and sensitivity of the squeezed number state against r.
    Tmsn(TmsnArgs),
    /// Compare the closed forms against the Fock-space oracle.
    OracleCheck(OracleCheckArgs),
    /// Regenerate the data behind a figure: 2, 3, 4, 5, 7, 8 or 9.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Output format [default: csv].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a gnuplot script that plots the output file.
    #[arg(long)]
    pub gnuplot: Option<PathBuf>,
    /// key=value file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// Squeezing factor: a value or min:max:steps.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    /// Superposition angle in radians: a value or min:max:steps. Accepts `pi`, e.g. `pi/10`.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// OAM quantum number.
    #[arg(long)]
    pub ell: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi_max: Option<String>,
    #[arg(long)]
    pub phi_steps: Option<usize>,
    /// Mean photon number of a polarized coherent input (LP and CP columns instead of TSB).
    #[arg(long, allow_hyphen_values = true)]
    pub nc: Option<f64>,
    /// Truncation tolerance for the twin-Fock expansion.
    #[arg(long, allow_hyphen_values = true)]
    pub eps_trunc: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct TmsnArgs {
    /// Squeezing factor range min:max:steps.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long)]
    pub ell: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub eps_trunc: Option<f64>,
    /// Largest tolerated |Δφ_opt/Δφ_HL − 1|.
    #[arg(long, allow_hyphen_values = true)]
    pub closeness: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleCheckArgs {
    /// Largest tolerated absolute deviation.
    #[arg(long, default_value_t = 1e-8, allow_hyphen_values = true)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// Figure number.
    pub id: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Inclusive evenly spaced axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn single(value: f64) -> Self {
        Self {
            min: value,
            max: value,
            steps: 1,
        }
    }

    pub fn new(field: &str, min: f64, max: f64, steps: usize) -> Result<Self, InputError> {
        if steps < 2 {
            return Err(InputError::new(
                field,
                format!("need at least 2 steps, got {steps}"),
            ));
        }
        if !(max > min) {
            return Err(InputError::new(
                field,
                format!("empty range [{min}, {max}]"),
            ));
        }
        Ok(Self { min, max, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + h * i as f64
                }
            })
            .collect()
    }

    fn check_domain(self, field: &str, lo: f64, hi: f64, domain: &str) -> Result<Self, InputError> {
        if self.min < lo || self.max > hi {
            return Err(InputError::new(
                field,
                format!("values must lie in {domain}"),
            ));
        }
        Ok(self)
    }
}

/// Parses a real number, allowing `pi` as a factor: `0.3`, `pi`, `pi/10`, `3pi/20`, `3*pi/20`.
pub fn parse_real(field: &str, text: &str) -> Result<f64, InputError> {
    let t = text.trim();
    let bad = || InputError::new(field, format!("cannot parse {t:?} as a number"));
    let value = if let Some(idx) = t.find("pi") {
        let (head, tail) = (t[..idx].trim_end_matches('*').trim(), &t[idx + 2..]);
        let factor = match head {
            "" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().map_err(|_| bad())?,
        };
        let divisor = match tail.trim() {
            "" => 1.0,
            d => d
                .strip_prefix('/')
                .ok_or_else(bad)?
                .trim()
                .parse::<f64>()
                .map_err(|_| bad())?,
        };
        factor * PI / divisor
    } else {
        t.parse::<f64>().map_err(|_| bad())?
    };
    if !value.is_finite() {
        return Err(InputError::new(field, format!("{t:?} is not finite")));
    }
    Ok(value)
}

/// A single value or `min:max:steps`.
pub fn parse_axis(field: &str, text: &str) -> Result<Axis, InputError> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(Axis::single(parse_real(field, v)?)),
        [lo, hi, n] => {
            let steps = n
                .trim()
                .parse::<usize>()
                .map_err(|_| InputError::new(field, format!("cannot parse step count {n:?}")))?;
            Axis::new(field, parse_real(field, lo)?, parse_real(field, hi)?, steps)
        }
        _ => Err(InputError::new(field, "expected a value or min:max:steps")),
    }
}

/// `key = value` lines; `#` starts a comment.
#[derive(Debug, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub const KEYS: &'static [&'static str] = &[
        "r",
        "delta",
        "ell",
        "phi-min",
        "phi-max",
        "phi-steps",
        "nc",
        "eps-trunc",
        "format",
        "out",
        "closeness",
    ];

    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| InputError::new("config", format!("{}: {e}", path.display())))?;
        Ok(Self::parse(&text)?)
    }

    pub fn parse(text: &str) -> Result<Self, InputError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                InputError::new("config", format!("line {}: expected key=value", lineno + 1))
            })?;
            let key = k.trim().replace('_', "-");
            if !Self::KEYS.contains(&key.as_str()) {
                return Err(InputError::new(key, "unknown config key"));
            }
            entries.insert(key, v.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn number<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, InputError> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| InputError::new(key, format!("cannot parse {v:?}")))
            })
            .transpose()
    }
}

#[derive(Debug, Clone)]
pub struct Output {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub gnuplot: Option<PathBuf>,
}

impl Output {
    pub fn resolve(args: &OutputArgs, config: &ConfigFile) -> Result<Self, InputError> {
        let format = match (args.format, config.get("format")) {
            (Some(f), _) => f,
            (None, Some(v)) => Format::from_str(v, true).map_err(|_| {
                InputError::new("format", format!("expected csv or json, got {v:?}"))
            })?,
            (None, None) => Format::Csv,
        };
        let out = args
            .out
            .clone()
            .or_else(|| config.get("out").map(PathBuf::from));
        if args.gnuplot.is_some() && (out.is_none() || format != Format::Csv) {
            return Err(InputError::new("gnuplot", "needs --out and csv format"));
        }
        Ok(Self {
            format,
            out,
            gnuplot: args.gnuplot.clone(),
        })
    }
}

/// Fully resolved sweep parameters.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub r: Axis,
    pub delta: Axis,
    pub ell: u32,
    pub phi: Axis,
    pub nc: Option<f64>,
    pub eps_trunc: f64,
    pub output: Output,
}

pub struct SweepDefaults {
    pub r: Axis,
    pub delta: Axis,
    pub phi: Option<Axis>,
}

pub const DEFAULT_EPS_TRUNC: f64 = 1e-12;
pub const DEFAULT_PHI_STEPS: usize = 1025;

fn pick<'a>(flag: &'a Option<String>, config: &'a ConfigFile, key: &str) -> Option<&'a str> {
    flag.as_deref().or_else(|| config.get(key))
}

pub fn resolve_eps(flag: Option<f64>, config: &ConfigFile) -> Result<f64, InputError> {
    let eps = match flag {
        Some(v) => v,
        None => config.number("eps-trunc")?.unwrap_or(DEFAULT_EPS_TRUNC),
    };
    if !(eps > 0.0 && eps < 1.0) {
        return Err(InputError::new(
            "eps-trunc",
            format!("must lie in (0, 1), got {eps}"),
        ));
    }
    Ok(eps)
}

pub fn resolve_ell(flag: Option<u32>, config: &ConfigFile) -> Result<u32, InputError> {
    Ok(flag.or(config.number("ell")?).unwrap_or(1))
}

impl SweepSpec {
    pub fn resolve(args: &SweepArgs, defaults: SweepDefaults) -> anyhow::Result<Self> {
        let config = ConfigFile::load(args.output.config.as_deref())?;
        let output = Output::resolve(&args.output, &config)?;
        let r = match pick(&args.r, &config, "r") {
            Some(v) => parse_axis("r", v)?,
            None => defaults.r,
        }
        .check_domain("r", 0.0, f64::INFINITY, "[0, inf)")?;
        let delta = match pick(&args.delta, &config, "delta") {
            Some(v) => parse_axis("delta", v)?,
            None => defaults.delta,
        }
        .check_domain("delta", 0.0, FRAC_PI_2 + 1e-15, "[0, pi/2]")?;
        let delta = Axis {
            min: delta.min.min(FRAC_PI_2),
            max: delta.max.min(FRAC_PI_2),
            ..delta
        };
        let ell = resolve_ell(args.ell, &config)?;

        let phi_steps = match args.phi_steps {
            Some(n) => Some(n),
            None => config.number("phi-steps")?,
        };
        let phi_min = pick(&args.phi_min, &config, "phi-min")
            .map(|v| parse_real("phi-min", v))
            .transpose()?;
        let phi_max = pick(&args.phi_max, &config, "phi-max")
            .map(|v| parse_real("phi-max", v))
            .transpose()?;
        let phi = match defaults.phi {
            Some(d) => Axis::new(
                "phi range",
                phi_min.unwrap_or(d.min),
                phi_max.unwrap_or(d.max),
                phi_steps.unwrap_or(d.steps),
            )?,
            None => Axis::single(0.0),
        };

        let nc = match args.nc {
            Some(v) => Some(v),
            None => config.number("nc")?,
        };
        if let Some(nc) = nc {
            if !(nc >= 0.0 && nc.is_finite()) {
                return Err(InputError::new(
                    "nc",
                    format!("must be finite and non-negative, got {nc}"),
                )
                .into());
            }
        }
        Ok(Self {
            r,
            delta,
            ell,
            phi,
            nc,
            eps_trunc: resolve_eps(args.eps_trunc, &config)?,
            output,
        })
    }
}

pub struct TmsnSpec {
    pub r: Axis,
    pub ell: u32,
    pub eps_trunc: f64,
    pub closeness: f64,
    pub output: Output,
}

pub const DEFAULT_CLOSENESS: f64 = 0.10;

impl TmsnSpec {
    pub fn resolve(args: &TmsnArgs) -> anyhow::Result<Self> {
        let config = ConfigFile::load(args.output.config.as_deref())?;
        let r = match pick(&args.r, &config, "r") {
            Some(v) => parse_axis("r", v)?,
            None => Axis::new("r", 0.5, 1.5, 11)?,
        };
        if r.steps < 2 {
            return Err(InputError::new("r", "tmsn needs a range min:max:steps").into());
        }
        let r = r.check_domain("r", 0.0, f64::INFINITY, "[0, inf)")?;
        let closeness = match args.closeness {
            Some(v) => v,
            None => config.number("closeness")?.unwrap_or(DEFAULT_CLOSENESS),
        };
        if !(closeness > 0.0) {
            return Err(
                InputError::new("closeness", format!("must be positive, got {closeness}")).into(),
            );
        }
        Ok(Self {
            r,
            ell: resolve_ell(args.ell, &config)?,
            eps_trunc: resolve_eps(args.eps_trunc, &config)?,
            closeness,
            output: Output::resolve(&args.output, &config)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pi_multiples() {
        assert_eq!(parse_real("x", "pi").unwrap(), PI);
        assert_eq!(parse_real("x", "pi/10").unwrap(), PI / 10.0);
        assert_eq!(parse_real("x", "3pi/20").unwrap(), 3.0 * PI / 20.0);
        assert_eq!(parse_real("x", "3*pi/20").unwrap(), 3.0 * PI / 20.0);
        assert_eq!(parse_real("x", "-pi/4").unwrap(), -PI / 4.0);
        assert_eq!(parse_real("x", "0.25").unwrap(), 0.25);
        assert!(parse_real("x", "pi/").is_err());
        assert!(parse_real("x", "inf").is_err());
    }

    #[test]
    fn axes() {
        assert_eq!(parse_axis("r", "0.5").unwrap(), Axis::single(0.5));
        let a = parse_axis("r", "0:1:5").unwrap();
        assert_eq!(a.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_axis("r", "0:1:1").unwrap_err().field, "r");
        assert_eq!(parse_axis("r", "1:1:4").unwrap_err().field, "r");
        assert!(parse_axis("r", "0:1").is_err());
    }

    #[test]
    fn config_file() {
        let c = ConfigFile::parse("# sweep\nr = 0.5:1:3\nphi_steps=9 # trailing\n").unwrap();
        assert_eq!(c.get("r"), Some("0.5:1:3"));
        assert_eq!(c.get("phi-steps"), Some("9"));
        assert_eq!(
            ConfigFile::parse("colour = red").unwrap_err().field,
            "colour"
        );
        assert!(ConfigFile::parse("r").is_err());
    }
}
