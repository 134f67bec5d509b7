use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::archimedean::{Family, Generator};
use crate::error::{Error, Result};
use crate::estimators::{Estimator, Mode, TailProblem};
use crate::marginals::{parse_marginals, Marginal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(Error::Config(format!("unknown output format `{other}` (csv or markdown)"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Markdown => "markdown",
        })
    }
}

/// A tuning parameter given outright or left to the pilot search.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ParamChoice {
    #[default]
    Tune,
    Fixed(f64),
}

impl FromStr for ParamChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("tune") {
            return Ok(ParamChoice::Tune);
        }
        s.parse()
            .map(ParamChoice::Fixed)
            .map_err(|_| Error::Config(format!("expected a number or `tune`, got `{s}`")))
    }
}

/// Everything needed to run `estimate`, `bounds` or `tune`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub family: Family,
    pub tau: Option<f64>,
    pub param: Option<f64>,
    pub mode: Mode,
    pub marginals: String,
    pub s: Vec<f64>,
    pub estimators: Vec<Estimator>,
    pub reps: usize,
    pub seed: u64,
    pub lambda: ParamChoice,
    pub kappa: ParamChoice,
    pub pilot_reps: Option<usize>,
    pub m: Option<u32>,
    pub allow_large_grid: bool,
    pub format: OutputFormat,
    pub full_precision: bool,
    pub timings: bool,
}

pub const DEFAULT_REPS: usize = 100_000;
pub const DEFAULT_SEED: u64 = 42;

/// Keys accepted in config files; flags use the same names with `-`.
pub const CONFIG_KEYS: &[&str] = &[
    "family",
    "tau",
    "param",
    "mode",
    "marginals",
    "s",
    "estimator",
    "reps",
    "seed",
    "lambda",
    "kappa",
    "pilot_reps",
    "m",
    "allow_large_grid",
    "format",
    "full_precision",
    "timings",
];

/// Parses flat `key = value` text. Blank lines and `#` comments are skipped;
/// errors name the offending line.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got `{line}`", no + 1)))?;
        let key = k.trim().replace('-', "_").to_ascii_lowercase();
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("line {}: unknown key `{}`", no + 1, k.trim())));
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(Error::Config(format!("line {}: key `{key}` given twice", no + 1)));
        }
    }
    Ok(out)
}

fn field<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("field `{key}`: cannot parse `{v}`"))),
    }
}

fn flag(map: &BTreeMap<String, String>, key: &str) -> Result<bool> {
    match map.get(key).map(|v| v.to_ascii_lowercase()) {
        None => Ok(false),
        Some(v) if v == "true" || v == "1" || v == "yes" => Ok(true),
        Some(v) if v == "false" || v == "0" || v == "no" => Ok(false),
        Some(v) => Err(Error::Config(format!("field `{key}`: expected true or false, got `{v}`"))),
    }
}

/// Parses a comma-separated list of positive thresholds.
pub fn parse_s_list(text: &str) -> Result<Vec<f64>> {
    let s: Vec<f64> = text
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("field `s`: cannot parse `{}`", v.trim())))
        })
        .collect::<Result<_>>()?;
    if let Some(bad) = s.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::Config(format!("field `s`: thresholds must be positive, got {bad}")));
    }
    Ok(s)
}

/// Parses `all` or a comma-separated estimator list.
pub fn parse_estimators(text: &str) -> Result<Vec<Estimator>> {
    if text.trim().eq_ignore_ascii_case("all") {
        return Ok(Estimator::CONDITIONAL.to_vec());
    }
    let mut out: Vec<Estimator> = text
        .split(',')
        .map(|v| v.parse().map_err(|e: Error| Error::Config(format!("field `estimator`: {e}"))))
        .collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

impl ExperimentConfig {
    /// Builds and validates a config from `key → value` pairs.
    pub fn from_pairs(map: &BTreeMap<String, String>) -> Result<Self> {
        let family = field(map, "family")?.unwrap_or(Family::Clayton);
        let tau: Option<f64> = field(map, "tau")?;
        let param: Option<f64> = field(map, "param")?;
        let mode = field(map, "mode")?.unwrap_or(Mode::CopulaX);
        let marginals = map
            .get("marginals")
            .cloned()
            .ok_or_else(|| Error::Config("field `marginals` is required (e.g. pareto:2.5,2.5)".into()))?;
        let s = parse_s_list(
            map.get("s")
                .ok_or_else(|| Error::Config("field `s` is required".into()))?,
        )?;
        let estimators = match map.get("estimator") {
            Some(v) => parse_estimators(v)?,
            None => Estimator::CONDITIONAL.to_vec(),
        };
        let cfg = Self {
            family,
            tau,
            param,
            mode,
            marginals,
            s,
            estimators,
            reps: field(map, "reps")?.unwrap_or(DEFAULT_REPS),
            seed: field(map, "seed")?.unwrap_or(DEFAULT_SEED),
            lambda: field(map, "lambda")?.unwrap_or_default(),
            kappa: field(map, "kappa")?.unwrap_or_default(),
            pilot_reps: field(map, "pilot_reps")?,
            m: field(map, "m")?,
            allow_large_grid: flag(map, "allow_large_grid")?,
            format: field(map, "format")?.unwrap_or_default(),
            full_precision: flag(map, "full_precision")?,
            timings: flag(map, "timings")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        match (self.tau, self.param) {
            (Some(_), Some(_)) => return Err(Error::Config("give either `tau` or `param`, not both".into())),
            (None, None) => return Err(Error::Config("one of `tau` or `param` is required".into())),
            _ => {}
        }
        if self.reps < 2 {
            return Err(Error::Config(format!("field `reps`: need at least 2, got {}", self.reps)));
        }
        self.parsed_marginals()?;
        Ok(())
    }

    pub fn generator(&self) -> Result<Generator> {
        match (self.tau, self.param) {
            (Some(t), None) => Generator::from_tau(self.family, t),
            (None, Some(p)) => Generator::new(self.family, p),
            _ => Err(Error::Config("give exactly one of `tau` or `param`".into())),
        }
    }

    pub fn parsed_marginals(&self) -> Result<Vec<Arc<dyn Marginal>>> {
        parse_marginals(&self.marginals)
    }

    pub fn problem(&self, s: f64) -> Result<TailProblem> {
        TailProblem::new(self.mode, self.generator()?, self.parsed_marginals()?, s)
    }

    pub fn n(&self) -> usize {
        self.parsed_marginals().map(|m| m.len()).unwrap_or(0)
    }

    /// Pilot size for tuning: a tenth of the main run, at least 1000.
    pub fn pilot_reps(&self) -> usize {
        self.pilot_reps.unwrap_or((self.reps / 10).max(1000))
    }

    /// Renders the config back as `key = value` lines.
    pub fn echo(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(",");
        let choice = |c: ParamChoice| match c {
            ParamChoice::Tune => "tune".to_string(),
            ParamChoice::Fixed(v) => v.to_string(),
        };
        let mut lines = vec![format!("family = {}", self.family)];
        if let Some(t) = self.tau {
            lines.push(format!("tau = {t}"));
        }
        if let Some(p) = self.param {
            lines.push(format!("param = {p}"));
        }
        lines.push(format!("mode = {}", self.mode));
        lines.push(format!("marginals = {}", self.marginals));
        lines.push(format!("s = {}", list(&self.s)));
        lines.push(format!(
            "estimator = {}",
            self.estimators.iter().map(|e| e.name()).collect::<Vec<_>>().join(",")
        ));
        lines.push(format!("reps = {}", self.reps));
        lines.push(format!("seed = {}", self.seed));
        lines.push(format!("lambda = {}", choice(self.lambda)));
        lines.push(format!("kappa = {}", choice(self.kappa)));
        if let Some(m) = self.m {
            lines.push(format!("m = {m}"));
        }
        lines.push(format!("format = {}", self.format));
        lines.join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(text: &str) -> BTreeMap<String, String> {
        parse_config_text(text).unwrap()
    }

    #[test]
    fn parses_file_text() {
        let map = pairs(
            "# table 3 setting\nfamily = clayton\nmode = survival\ntau = 0.5 # half\n\
             marginals = pareto:2.5,2.5\ns = 100, 1e4\nestimator = nr2\nreps = 1000\nseed = 7\n",
        );
        let cfg = ExperimentConfig::from_pairs(&map).unwrap();
        assert_eq!(cfg.mode, Mode::SurvivalY);
        assert_eq!(cfg.s, vec![100.0, 1e4]);
        assert_eq!(cfg.estimators, vec![Estimator::Nr2]);
        assert!((cfg.generator().unwrap().param() - 0.5).abs() < 1e-15);
        assert_eq!(cfg.n(), 2);
        let again = ExperimentConfig::from_pairs(&parse_config_text(&cfg.echo()).unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_config_text("family = clayton\nthis line is wrong\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = parse_config_text("colour = red\n").unwrap_err();
        assert!(err.to_string().contains("unknown key"));
    }

    #[test]
    fn rejects_inconsistent_configs() {
        let base = "marginals = pareto:2,2\ns = 1\n";
        assert!(ExperimentConfig::from_pairs(&pairs(&format!("{base}tau = 0.5\nparam = 0.5\n"))).is_err());
        assert!(ExperimentConfig::from_pairs(&pairs(base)).is_err());
        assert!(ExperimentConfig::from_pairs(&pairs("tau = 0.5\nmarginals = pareto:2\ns = -1\n")).is_err());
        assert!(ExperimentConfig::from_pairs(&pairs("tau = 0.5\nmarginals = pareto:2\ns = 1\nreps = 1\n")).is_err());
        assert!(ExperimentConfig::from_pairs(&pairs("tau = 0.5\nmarginals = gamma:2\ns = 1\n")).is_err());
    }

    #[test]
    fn estimator_lists() {
        assert_eq!(parse_estimators("all").unwrap().len(), 4);
        assert_eq!(parse_estimators("nr3, nr1,nr3").unwrap(), vec![Estimator::Nr1, Estimator::Nr3]);
        assert!(parse_estimators("nr9").is_err());
        assert_eq!("tune".parse::<ParamChoice>().unwrap(), ParamChoice::Tune);
        assert_eq!("0.1".parse::<ParamChoice>().unwrap(), ParamChoice::Fixed(0.1));
    }
}
