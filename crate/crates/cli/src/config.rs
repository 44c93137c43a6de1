use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use ptmoment::records::Format;
use ptmoment::states::Parity;
use ptmoment::ToleranceProfile;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Noon,
    LossyNoon,
    Cat,
    Hhg,
    Tmsv,
    Qutrit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

impl FormatArg {
    pub fn extension(self) -> &'static str {
        match self {
            FormatArg::Csv => "csv",
            FormatArg::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Fig2a,
    Fig2b,
    Fig2c,
    Fig2d,
    Fig2e,
    Fig3a,
    Fig3b,
    Fig3c,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Table1,
    Table2,
}

impl Target {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

/// State family and its parameters; unset parameters take per-family defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(default, deny_unknown_fields)]
pub struct StateSpec {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    /// Photon number (NOON) or number of harmonics (HHG).
    #[arg(long = "N")]
    #[serde(rename = "N")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Cat-state dephasing in [0, 1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity: Option<ParityArg>,
    /// Transmissivity of the loss channel.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// Thermal occupation of the squeezed thermal state.
    #[arg(long = "n-bar")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_bar: Option<f64>,
    /// Squeezing parameter.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    /// Depletion of the driving field.
    #[arg(long = "delta-alpha")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CommandSpec {
    Criteria {
        #[serde(default)]
        moments: Option<Vec<f64>>,
    },
    Reproduce {
        target: Target,
        #[serde(default)]
        k: Option<usize>,
        #[serde(default)]
        repetitions: Option<usize>,
    },
    Sample {
        #[serde(default)]
        copies: Option<usize>,
        #[serde(default)]
        k: Option<usize>,
        #[serde(default)]
        repetitions: Option<usize>,
    },
}

fn default_seed() -> u64 {
    42
}

fn default_format() -> FormatArg {
    FormatArg::Csv
}

/// Fully specified run, either assembled from flags or read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandSpec,
    #[serde(default)]
    pub state: StateSpec,
    /// Per-mode Fock cutoff overriding the tolerance-derived default.
    #[serde(default)]
    pub cutoff: Option<usize>,
    #[serde(default)]
    pub tolerances: ToleranceProfile,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default = "default_format")]
    pub format: FormatArg,
}

impl RunConfig {
    pub fn new(command: CommandSpec) -> Self {
        Self {
            command,
            state: StateSpec::default(),
            cutoff: None,
            tolerances: ToleranceProfile::default(),
            seed: default_seed(),
            out: None,
            format: default_format(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).context("invalid run configuration")?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks everything that does not depend on the state family.
    pub fn validate(&self) -> Result<()> {
        if let Some(c) = self.cutoff {
            if c == 0 {
                bail!("cutoff must be at least 1");
            }
        }
        let t = &self.tolerances;
        for (name, v) in [("herm", t.herm), ("trace", t.trace), ("imag", t.imag), ("psd", t.psd), ("trunc", t.trunc)] {
            if !(v > 0.0 && v.is_finite()) {
                bail!("tolerance {name} must be positive and finite, got {v}");
            }
        }
        let s = &self.state;
        for (name, v) in [
            ("alpha", s.alpha),
            ("beta", s.beta),
            ("z", s.z),
            ("tau", s.tau),
            ("n-bar", s.n_bar),
            ("r", s.r),
            ("delta-alpha", s.delta_alpha),
        ] {
            if let Some(v) = v {
                if !v.is_finite() {
                    bail!("{name} must be finite, got {v}");
                }
            }
        }
        if let Some(tau) = s.tau {
            if !(0.0..=1.0).contains(&tau) {
                bail!("tau must lie in [0, 1], got {tau}");
            }
        }
        if let Some(z) = s.z {
            if !(0.0..=1.0).contains(&z) {
                bail!("z must lie in [0, 1], got {z}");
            }
        }
        match &self.command {
            CommandSpec::Criteria { moments: Some(m) } if m.is_empty() => bail!("moment list is empty"),
            CommandSpec::Sample { copies, k, repetitions } => {
                if let Some(n) = copies {
                    if !(2..=4).contains(n) {
                        bail!("copies must be 2, 3 or 4, got {n}");
                    }
                }
                if *k == Some(0) {
                    bail!("k must be at least 1");
                }
                if *repetitions == Some(0) {
                    bail!("repetitions must be at least 1");
                }
                if s.family.is_none() {
                    bail!("sample needs --family");
                }
            }
            CommandSpec::Reproduce { k, repetitions, .. } => {
                if matches!(*k, Some(k) if k < 2) {
                    bail!("k must be at least 2");
                }
                if *repetitions == Some(0) {
                    bail!("repetitions must be at least 1");
                }
            }
            _ => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut cfg = RunConfig::new(CommandSpec::Reproduce { target: Target::Fig2e, k: None, repetitions: None });
        cfg.state.n = Some(3);
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"N\":3"));
        assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_json(r#"{"command":{"name":"criteria"},"colour":1}"#).is_err());
        assert!(RunConfig::from_json(r#"{"command":{"name":"criteria","extra":1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"command":{"name":"criteria"},"state":{"gamma":1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"command":{"name":"criteria"}}"#).is_ok());
    }

    #[test]
    fn invalid_values_are_rejected() {
        for text in [
            r#"{"command":{"name":"criteria"},"cutoff":0}"#,
            r#"{"command":{"name":"criteria"},"state":{"tau":1.5}}"#,
            r#"{"command":{"name":"sample","copies":7},"state":{"family":"noon"}}"#,
            r#"{"command":{"name":"sample"}}"#,
            r#"{"command":{"name":"reproduce","target":"fig9"}}"#,
        ] {
            assert!(RunConfig::from_json(text).is_err(), "{text}");
        }
    }
}
