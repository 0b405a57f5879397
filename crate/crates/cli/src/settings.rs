//! Option registry shared by config files and command-line flags.
//!
//! Every option is a `key=value` pair. A config file may set any key the
//! command knows; a flag `--key value` overrides it.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use clap::{Arg, ArgMatches, Command};

/// Invalid configuration; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<freeprice_core::Error> for ConfigError {
    fn from(e: freeprice_core::Error) -> Self {
        ConfigError(e.to_string())
    }
}

pub type ConfigResult<T> = Result<T, ConfigError>;

#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    /// Empty means unset.
    pub default: &'static str,
    pub help: &'static str,
}

const fn key(name: &'static str, default: &'static str, help: &'static str) -> Key {
    Key { name, default, help }
}

pub const OUTPUT_KEYS: &[Key] = &[
    key("out", "out", "output directory"),
    key("format", "both", "which files to write: csv, svg or both"),
];

pub const SPECTRUM_KEYS: &[Key] = &[
    key("a_max", "25", "upper end of the crossing scan in a"),
    key("curve_points", "2000", "samples per curve in the CSV and plot"),
    key("R", "", "optional coupling at which to report the real unstable eigenvalue"),
];

pub const WAVES_KEYS: &[Key] = &[
    key("c", "2", "wave speed (nonzero)"),
    key("rho", "1", "amplitude parameter rho > 0"),
    key("phi", "sign", "nonlinearity: sign, linear or tanh"),
    key("x_min", "-5", "left end of the sampled window"),
    key("x_max", "5", "right end of the sampled window"),
    key("points", "1001", "number of samples"),
    key("R", "", "optional coupling for the existence map"),
];

const SIM_KEYS: &[Key] = &[
    key("grid.x_min", "-5", "left boundary"),
    key("grid.x_max", "5", "right boundary"),
    key("grid.h", "0.05", "grid spacing (1/h must be an integer)"),
    key("dt", "1e-4", "time step"),
    key("t_end", "2", "final time"),
    key("phi", "tanh", "nonlinearity: sign, linear or tanh"),
    key("diffusion", "1", "diffusion coefficient D"),
    key("transaction_cost", "1", "half-width a of the transaction band"),
    key("left_bc", "1", "Dirichlet value at the left boundary"),
    key("right_bc", "-1", "Dirichlet value at the right boundary"),
    key("perturbation", "even", "initial perturbation: none, even or odd"),
    key("epsilon", "0.01", "perturbation amplitude"),
    key("picard_iters", "2", "Picard sweeps per step"),
    key("wx_guard", "1e-6", "minimum |w_x(0)| before the run is stopped"),
    key("snapshot_stride", "10", "steps between stored field snapshots"),
    key("advection", "central", "advection stencil: central or upwind"),
];

pub const SIMULATE_EXTRA_KEYS: &[Key] = &[
    key("R", "12", "trend coupling"),
    key("discard", "0.5", "leading fraction of the run ignored by the period estimate"),
    key("snapshot_interval", "0.1", "time between snapshot CSV files (0 disables)"),
    key("snapshot_times", "", "comma-separated times for the field plot"),
];

pub const SWEEP_EXTRA_KEYS: &[Key] = &[key("R_values", "0,5,9,12,15", "comma-separated couplings")];

pub const VERIFY_KEYS: &[Key] = &[key("delta_mass", "1", "discrete delta mass (anything but 1 corrupts the solver)")];

pub fn keys_for(command: &str) -> Vec<Key> {
    let mut keys: Vec<Key> = Vec::new();
    match command {
        "spectrum" => keys.extend(SPECTRUM_KEYS),
        "waves" => keys.extend(WAVES_KEYS),
        "simulate" => {
            keys.extend(SIM_KEYS);
            keys.extend(SIMULATE_EXTRA_KEYS);
        }
        "sweep" => {
            keys.extend(SIM_KEYS);
            keys.extend(SWEEP_EXTRA_KEYS);
        }
        "verify" => keys.extend(VERIFY_KEYS),
        _ => {}
    }
    if command != "verify" {
        keys.extend(OUTPUT_KEYS);
    }
    keys
}

/// Adds `--config` and one `--<key>` flag per key.
pub fn with_key_flags(mut cmd: Command, keys: &[Key]) -> Command {
    cmd = cmd.arg(Arg::new("config").long("config").value_name("PATH").help("key=value config file"));
    for k in keys {
        let help = if k.default.is_empty() {
            k.help.to_string()
        } else {
            format!("{} [default: {}]", k.help, k.default)
        };
        cmd = cmd.arg(
            Arg::new(k.name)
                .long(k.name)
                .value_name("VALUE")
                .allow_hyphen_values(true)
                .help(help),
        );
    }
    cmd
}

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> ConfigResult<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError(format!("line {}: expected key=value, got `{line}`", n + 1)));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(ConfigError(format!("line {}: empty key", n + 1)));
        }
        if out.iter().any(|(seen, _)| seen == k) {
            return Err(ConfigError(format!("line {}: duplicate key `{k}`", n + 1)));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Settings {
    values: BTreeMap<&'static str, String>,
}

impl Settings {
    /// Defaults, then the config file, then flags.
    pub fn resolve(keys: &[Key], config_text: Option<&str>, matches: &ArgMatches) -> ConfigResult<Self> {
        let mut values: BTreeMap<&'static str, String> = keys.iter().map(|k| (k.name, k.default.to_string())).collect();
        if let Some(text) = config_text {
            for (k, v) in parse_config_text(text)? {
                let Some(known) = keys.iter().find(|key| key.name == k) else {
                    return Err(ConfigError(format!("unknown key `{k}`")));
                };
                values.insert(known.name, v);
            }
        }
        for k in keys {
            if let Some(v) = matches.get_one::<String>(k.name) {
                values.insert(k.name, v.clone());
            }
        }
        Ok(Self { values })
    }

    pub fn load(keys: &[Key], matches: &ArgMatches) -> anyhow::Result<Self> {
        let text = match matches.get_one::<String>("config") {
            Some(path) => Some(read_config(Path::new(path))?),
            None => None,
        };
        Ok(Self::resolve(keys, text.as_deref(), matches)?)
    }

    pub fn str(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    pub fn parse<T>(&self, key: &str) -> ConfigResult<T>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        let raw = self.str(key);
        raw.parse::<T>()
            .map_err(|e| ConfigError(format!("`{key}`: cannot parse `{raw}`: {e}")))
    }

    pub fn f64(&self, key: &str) -> ConfigResult<f64> {
        let v: f64 = self.parse(key)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ConfigError(format!("`{key}` must be finite")))
        }
    }

    pub fn optional_f64(&self, key: &str) -> ConfigResult<Option<f64>> {
        if self.str(key).is_empty() {
            Ok(None)
        } else {
            self.f64(key).map(Some)
        }
    }

    pub fn f64_list(&self, key: &str) -> ConfigResult<Vec<f64>> {
        let raw = self.str(key);
        if raw.trim().is_empty() {
            return Ok(Vec::new());
        }
        raw.split(',')
            .map(|s| {
                let s = s.trim();
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| ConfigError(format!("`{key}`: bad number `{s}`")))
            })
            .collect()
    }
}

fn read_config(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())).into())
}
