use std::fs;
use std::path::{Path, PathBuf};

use conclab::suites::{Suite, SuiteConfig};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// What a run covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    One(Suite),
    All,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::One(s) => s.name(),
            Target::All => "all",
        }
    }

    pub fn suites(self) -> Vec<Suite> {
        match self {
            Target::One(s) => vec![s],
            Target::All => Suite::ALL.to_vec(),
        }
    }
}

/// Optional settings, as given on the command line or in a JSON config file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub p: Option<f64>,
    pub instances: Option<usize>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Overrides {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set here win over `base`.
    pub fn over(self, base: Overrides) -> Overrides {
        Overrides {
            seed: self.seed.or(base.seed),
            n: self.n.or(base.n),
            p: self.p.or(base.p),
            instances: self.instances.or(base.instances),
            samples: self.samples.or(base.samples),
            tol: self.tol.or(base.tol),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub target: Target,
    pub params: SuiteConfig,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn resolve(target: Target, settings: Overrides) -> Result<Self, CliError> {
        let seed = settings
            .seed
            .ok_or_else(|| CliError::Config("a seed is required (--seed or \"seed\" in the config)".into()))?;
        let params = SuiteConfig {
            seed,
            n: settings.n,
            p: settings.p,
            instances: settings.instances,
            samples: settings.samples,
            tol: settings.tol,
        };
        params.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Self {
            target,
            params,
            out: settings.out,
            format: settings.format.unwrap_or_default(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let file: Overrides = serde_json::from_str(r#"{"seed": 3, "n": 5, "format": "csv"}"#).unwrap();
        let flags = Overrides { n: Some(4), ..Default::default() };
        let merged = flags.over(file);
        assert_eq!(merged.seed, Some(3));
        assert_eq!(merged.n, Some(4));
        assert_eq!(merged.format, Some(Format::Csv));
    }

    #[test]
    fn unknown_keys_and_missing_seed_are_rejected() {
        assert!(serde_json::from_str::<Overrides>(r#"{"sead": 3}"#).is_err());
        assert!(RunConfig::resolve(Target::All, Overrides::default()).is_err());
        let bad = Overrides { seed: Some(1), tol: Some(-1.0), ..Default::default() };
        assert!(RunConfig::resolve(Target::All, bad).is_err());
    }
}
