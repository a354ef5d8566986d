//! Flat `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored. Numbers may be plain decimals or
//! multiples of π such as `pi/6`, `-2pi/3` or `3*pi/4`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{key}: {message}")]
    Invalid { key: String, message: String },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("{key}: given more than once")]
    Duplicate { key: String },
    #[error("cannot read config {path}: {message}")]
    Read { path: PathBuf, message: String },
}

impl ConfigError {
    pub fn invalid(key: &str, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key: key.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Probabilities,
    NeutrinoScan,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Probabilities => "probabilities",
            Command::NeutrinoScan => "neutrino-scan",
            Command::Verify => "verify",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Command::Spectrum,
            Command::Probabilities,
            Command::NeutrinoScan,
            Command::Verify,
        ]
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("expected `csv` or `json`, got `{s}`")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self, String> {
        if count < 2 {
            return Err(format!("need at least 2 points, got {count}"));
        }
        if !(stop > start) {
            return Err(format!("must be increasing, got {start} to {stop}"));
        }
        Ok(Self { start, stop, count })
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == self.count - 1 {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [start, stop, count] = parts[..] else {
            return Err(format!("expected `start:stop:count`, got `{s}`"));
        };
        let count = count
            .parse()
            .map_err(|_| format!("point count `{count}` is not a non-negative integer"))?;
        Grid::new(parse_number(start)?, parse_number(stop)?, count)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

/// A finite decimal, or `[±][k][*]pi[/n]`.
pub fn parse_number(raw: &str) -> Result<f64, String> {
    let s = raw.trim().to_ascii_lowercase().replace('π', "pi");
    if let Some(idx) = s.find("pi") {
        let (head, tail) = (&s[..idx], &s[idx + 2..]);
        let (sign, coef) = match head.strip_prefix('-') {
            Some(rest) => (-1.0, rest),
            None => (1.0, head.strip_prefix('+').unwrap_or(head)),
        };
        let coef = coef.trim().trim_end_matches('*').trim();
        let coef: f64 = if coef.is_empty() {
            1.0
        } else {
            coef.parse()
                .map_err(|_| format!("bad multiple of pi in `{raw}`"))?
        };
        let tail = tail.trim();
        let den: f64 = if tail.is_empty() {
            1.0
        } else {
            let d = tail
                .strip_prefix('/')
                .ok_or_else(|| format!("expected `pi/n` in `{raw}`"))?;
            d.trim()
                .parse()
                .map_err(|_| format!("bad denominator in `{raw}`"))?
        };
        let v = sign * coef * std::f64::consts::PI / den;
        return if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("`{raw}` is not finite"))
        };
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{raw}` is not a finite number")),
    }
}

fn parse_list(raw: &str) -> Result<Vec<f64>, String> {
    raw.split(',').map(parse_number).collect()
}

/// Everything a single invocation needs. Unset keys fall back to
/// per-command defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub rho: Option<f64>,
    pub sigma: Option<f64>,
    pub varphi: Option<f64>,
    pub phi_offdiag: Option<f64>,
    pub dm2: Option<f64>,
    pub m2_bar: Option<f64>,
    pub energy: Option<f64>,
    pub alpha_prime: Option<Vec<f64>>,
    pub grid: Option<Grid>,
    pub scheme: Option<String>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tolerance: Option<f64>,
    pub draws: Option<usize>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            rho: None,
            sigma: None,
            varphi: None,
            phi_offdiag: None,
            dm2: None,
            m2_bar: None,
            energy: None,
            alpha_prime: None,
            grid: None,
            scheme: None,
            format: Format::default(),
            out: None,
            tolerance: None,
            draws: None,
            seed: None,
        }
    }

    /// Sets one key from its textual value. Keys may use `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let num = || parse_number(value).map_err(|m| ConfigError::invalid(&key, m));
        let int = |what: &str| ConfigError::invalid(&key, format!("`{value}` is not {what}"));
        match key.as_str() {
            "command" => {
                self.command = value
                    .parse()
                    .map_err(|m: String| ConfigError::invalid(&key, m))?
            }
            "rho" => self.rho = Some(num()?),
            "sigma" => self.sigma = Some(num()?),
            "varphi" => self.varphi = Some(num()?),
            "phi_offdiag" => self.phi_offdiag = Some(num()?),
            "dm2" => self.dm2 = Some(num()?),
            "m2_bar" => self.m2_bar = Some(num()?),
            "energy" => self.energy = Some(num()?),
            "alpha_prime" => {
                self.alpha_prime =
                    Some(parse_list(value).map_err(|m| ConfigError::invalid(&key, m))?)
            }
            "grid" => {
                self.grid = Some(
                    value
                        .parse()
                        .map_err(|m: String| ConfigError::invalid(&key, m))?,
                )
            }
            "scheme" => {
                if value.is_empty() {
                    return Err(ConfigError::invalid(&key, "empty scheme name"));
                }
                self.scheme = Some(value.to_string())
            }
            "format" => {
                self.format = value
                    .parse()
                    .map_err(|m: String| ConfigError::invalid(&key, m))?
            }
            "out" => {
                if value.is_empty() {
                    return Err(ConfigError::invalid(&key, "empty path"));
                }
                self.out = Some(PathBuf::from(value))
            }
            "tolerance" => {
                let t = num()?;
                if t < 0.0 {
                    return Err(ConfigError::invalid(&key, "must be non-negative"));
                }
                self.tolerance = Some(t)
            }
            "draws" => {
                let n: usize = value.parse().map_err(|_| int("a positive integer"))?;
                if n == 0 {
                    return Err(int("a positive integer"));
                }
                self.draws = Some(n)
            }
            "seed" => self.seed = Some(value.parse().map_err(|_| int("an unsigned integer"))?),
            _ => return Err(ConfigError::UnknownKey(key)),
        }
        Ok(())
    }

    /// Parses config text on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut seen: Vec<String> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: i + 1 })?;
            let key = key.trim().replace('-', "_");
            if key.is_empty() {
                return Err(ConfigError::Syntax { line: i + 1 });
            }
            if seen.contains(&key) {
                return Err(ConfigError::Duplicate { key });
            }
            self.set(&key, value)?;
            seen.push(key);
        }
        Ok(())
    }

    pub fn parse(text: &str, command: Command) -> Result<Self, ConfigError> {
        let mut cfg = Self::new(command);
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    /// Serialises every set key; [`RunConfig::parse`] reads it back unchanged.
    pub fn to_config_string(&self) -> String {
        let mut out = format!("command = {}\n", self.command.name());
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push_str(&format!("{k} = {v}\n"));
            }
        };
        put("rho", self.rho.map(|v| v.to_string()));
        put("sigma", self.sigma.map(|v| v.to_string()));
        put("varphi", self.varphi.map(|v| v.to_string()));
        put("phi_offdiag", self.phi_offdiag.map(|v| v.to_string()));
        put("dm2", self.dm2.map(|v| v.to_string()));
        put("m2_bar", self.m2_bar.map(|v| v.to_string()));
        put("energy", self.energy.map(|v| v.to_string()));
        put(
            "alpha_prime",
            self.alpha_prime
                .as_ref()
                .map(|v| v.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")),
        );
        put("grid", self.grid.map(|g| g.to_string()));
        put("scheme", self.scheme.clone());
        put("format", Some(self.format.to_string()));
        put("out", self.out.as_ref().map(|p| p.display().to_string()));
        put("tolerance", self.tolerance.map(|v| v.to_string()));
        put("draws", self.draws.map(|v| v.to_string()));
        put("seed", self.seed.map(|v| v.to_string()));
        out
    }
}
