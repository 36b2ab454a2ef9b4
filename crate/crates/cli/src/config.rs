//! Flat `key=value` run configuration.

use std::path::Path;

use twofactor::absorber::TemplateChoice;
use twofactor::embed::EmbedOptions;
use twofactor::{Constants, Mode};

use crate::error::CliError;

/// Triangle provider used by `embed`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProviderChoice {
    Greedy,
    Exact,
    None,
}

/// Settings gathered from the config file and then the command line.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    pub seed: u64,
    pub constants: Constants,
    pub p: Option<f64>,
    pub lambda: Option<f64>,
    pub template: TemplateChoice,
    pub provider: ProviderChoice,
    pub path_budget: Option<usize>,
}

/// Config keys and the constant each one sets.
pub const KEYS: &[&str] = &[
    "mode", "seed", "K", "p_R", "L", "gamma", "alpha", "partition_factor", "m_prime", "p", "lambda", "template", "provider",
    "path_budget",
];

impl RunConfig {
    pub fn new(mode: Mode) -> Self {
        RunConfig {
            mode,
            seed: 0,
            constants: Constants::for_mode(mode),
            p: None,
            lambda: None,
            template: TemplateChoice::Auto,
            provider: ProviderChoice::Greedy,
            path_budget: None,
        }
    }

    /// Reads `path` on top of the defaults of the mode it names (or
    /// `fallback`). Unknown keys are errors.
    pub fn load(path: Option<&Path>, fallback: Mode, mode_flag: Option<Mode>) -> Result<Self, CliError> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?,
            None => String::new(),
        };
        let pairs = parse_pairs(&text)?;
        let file_mode = pairs.iter().find(|(_, k, _)| k == "mode").map(|(line, _, v)| {
            v.parse::<Mode>().map_err(|e| CliError::Parse(format!("config line {line}: {e}")))
        });
        let mode = match (mode_flag, file_mode) {
            (Some(m), _) => m,
            (None, Some(m)) => m?,
            (None, None) => fallback,
        };
        let mut cfg = RunConfig::new(mode);
        for (line, key, value) in pairs {
            cfg.set(&key, &value).map_err(|e| CliError::Parse(format!("config line {line}: {e}")))?;
        }
        cfg.mode = mode;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("{key}: cannot parse {v:?}"))
        }
        let c = &mut self.constants;
        match key {
            "mode" => {}
            "seed" => self.seed = num(key, value)?,
            "K" => c.pages = num(key, value)?,
            "p_R" => c.template_prime = num(key, value)?,
            "L" => c.short_max = num(key, value)?,
            "gamma" => c.long_gamma = num(key, value)?,
            "alpha" => c.short_alpha = Some(num(key, value)?),
            "partition_factor" => c.partition_factor = num(key, value)?,
            "m_prime" => c.long_slack = num(key, value)?,
            "p" => self.p = Some(num(key, value)?),
            "lambda" => self.lambda = Some(num(key, value)?),
            "path_budget" => self.path_budget = Some(num(key, value)?),
            "template" => {
                self.template = match value {
                    "auto" => TemplateChoice::Auto,
                    "lps" => TemplateChoice::Lps,
                    v => match v.strip_prefix("random:") {
                        Some(d) => TemplateChoice::Random { degree: num(key, d)? },
                        None => return Err(format!("template: expected auto, lps or random:D, found {v:?}")),
                    },
                }
            }
            "provider" => {
                self.provider = match value {
                    "greedy" => ProviderChoice::Greedy,
                    "exact" => ProviderChoice::Exact,
                    "none" => ProviderChoice::None,
                    v => return Err(format!("provider: expected greedy, exact or none, found {v:?}")),
                }
            }
            _ => return Err(format!("unknown key {key:?} (known: {})", KEYS.join(", "))),
        }
        Ok(())
    }

    pub fn embed_options(&self) -> EmbedOptions {
        let mut o = EmbedOptions::for_mode(self.mode);
        o.constants = self.constants.clone();
        o.template = self.template.clone();
        o.seed = self.seed;
        if let Some(b) = self.path_budget {
            o.path_budget = b;
        }
        o
    }
}

fn parse_pairs(text: &str) -> Result<Vec<(usize, String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Parse(format!("config line {}: expected key=value", i + 1)));
        };
        out.push((i + 1, k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_sets_constants_and_mode() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "# desk run\nmode = practical\nL=100\ntemplate=random:5\nprovider=exact\n").unwrap();
        let cfg = RunConfig::load(Some(&path), Mode::Strict, None).unwrap();
        assert_eq!(cfg.mode, Mode::Practical);
        assert_eq!(cfg.constants.short_max, 100);
        assert_eq!(cfg.constants.pages, Constants::practical().pages);
        assert!(matches!(cfg.template, TemplateChoice::Random { degree: 5 }));
        assert_eq!(cfg.provider, ProviderChoice::Exact);
    }

    #[test]
    fn flag_mode_wins_and_bad_keys_fail() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "mode=practical\n").unwrap();
        assert_eq!(RunConfig::load(Some(&path), Mode::Strict, Some(Mode::Strict)).unwrap().mode, Mode::Strict);
        std::fs::write(&path, "colour=blue\n").unwrap();
        assert!(matches!(RunConfig::load(Some(&path), Mode::Strict, None), Err(CliError::Parse(_))));
        std::fs::write(&path, "K\n").unwrap();
        assert!(matches!(RunConfig::load(Some(&path), Mode::Strict, None), Err(CliError::Parse(_))));
    }
}
