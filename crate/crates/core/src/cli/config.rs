//! Flat `key = value` experiment configs.
//!
//! One pair per line; `#` starts a comment; blank lines are ignored. The
//! value is everything after the first `=`, so `c_spec = trace= 0.5,0.1`
//! is valid.

use std::collections::HashSet;
use std::fmt;
use std::path::PathBuf;

use crate::lab::{parse_real_list, ExperimentConfig, ExperimentKind, FiberSpec};
use crate::mcg::TwistWord;

pub const CONFIG_KEYS: [&str; 16] = [
    "kind",
    "c_spec",
    "N",
    "word_length",
    "trials",
    "seed",
    "height",
    "tol",
    "out",
    "a_angles",
    "start_angles",
    "word",
    "warmup",
    "ks_threshold",
    "null_threshold",
    "reference_samples",
];

/// A config problem tied to the key that caused it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}, key \"{}\": {}", self.key, self.message),
            None => write!(f, "key \"{}\": {}", self.key, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(key: &str, line: Option<usize>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        key: key.to_string(),
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, line: usize, v: &str) -> Result<T, ConfigError> {
    v.parse()
        .map_err(|_| err(key, Some(line), format!("cannot parse {v:?}")))
}

fn parse_f64(key: &str, line: usize, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = parse_num(key, line, v)?;
    if !x.is_finite() {
        return Err(err(key, Some(line), format!("{v:?} is not finite")));
    }
    Ok(x)
}

/// Parses a config. `seed_override` (from `--seed`) replaces or supplies the seed.
pub fn parse_config(text: &str, seed_override: Option<u64>) -> Result<ExperimentConfig, ConfigError> {
    let mut pairs: Vec<(usize, String, String)> = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = content
            .split_once('=')
            .ok_or_else(|| err(content, Some(line_no), "expected key = value"))?;
        let (k, v) = (k.trim(), v.trim());
        if !CONFIG_KEYS.contains(&k) {
            return Err(err(k, Some(line_no), "unknown key"));
        }
        if !seen.insert(k.to_string()) {
            return Err(err(k, Some(line_no), "duplicate key"));
        }
        if v.is_empty() {
            return Err(err(k, Some(line_no), "empty value"));
        }
        pairs.push((line_no, k.to_string(), v.to_string()));
    }

    let find = |key: &str| pairs.iter().find(|(_, k, _)| k == key);
    let (kline, _, kval) = find("kind").ok_or_else(|| err("kind", None, "missing"))?;
    let kind: ExperimentKind = kval
        .parse()
        .map_err(|e: crate::Error| err("kind", Some(*kline), e.to_string()))?;
    let seed = match (seed_override, find("seed")) {
        (Some(s), _) => s,
        (None, Some((l, _, v))) => parse_num::<u64>("seed", *l, v)?,
        (None, None) => return Err(err("seed", None, "missing")),
    };

    let mut cfg = ExperimentConfig::new(kind, seed);
    for (line, key, v) in &pairs {
        let line = *line;
        match key.as_str() {
            "kind" | "seed" => {}
            "c_spec" => {
                cfg.c_spec = v
                    .parse::<FiberSpec>()
                    .map_err(|e| err(key, Some(line), e.to_string()))?
            }
            "N" => cfg.n = parse_num(key, line, v)?,
            "word_length" => cfg.word_length = parse_num(key, line, v)?,
            "trials" => cfg.trials = parse_num(key, line, v)?,
            "height" => cfg.height = parse_num(key, line, v)?,
            "tol" => cfg.tol = parse_f64(key, line, v)?,
            "out" => cfg.out = Some(PathBuf::from(v)),
            "a_angles" => {
                cfg.a_angles = Some(
                    parse_real_list::<2>(v, key).map_err(|e| err(key, Some(line), e.to_string()))?,
                )
            }
            "start_angles" => {
                cfg.start_angles = Some(
                    parse_real_list::<4>(v, key).map_err(|e| err(key, Some(line), e.to_string()))?,
                )
            }
            "word" => {
                cfg.word = v
                    .parse::<TwistWord>()
                    .map_err(|e| err(key, Some(line), e.to_string()))?
            }
            "warmup" => cfg.warmup = parse_num(key, line, v)?,
            "ks_threshold" => cfg.ks_threshold = parse_f64(key, line, v)?,
            "null_threshold" => cfg.null_threshold = parse_f64(key, line, v)?,
            "reference_samples" => cfg.reference_samples = parse_num(key, line, v)?,
            _ => unreachable!("keys are checked against CONFIG_KEYS"),
        }
    }
    if cfg.n == 0 {
        return Err(err("N", find("N").map(|p| p.0), "must be at least 1"));
    }
    if cfg.trials == 0 {
        return Err(err("trials", find("trials").map(|p| p.0), "must be at least 1"));
    }
    if cfg.height < 1 {
        return Err(err("height", find("height").map(|p| p.0), "must be at least 1"));
    }
    if !(cfg.tol > 0.0) {
        return Err(err("tol", find("tol").map(|p| p.0), "must be positive"));
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn full_config() {
        let text = "\
# coset orbit on an order-3 element
kind = coset_twist_orbit
c_spec = trace= 0.5, -0.25   # interior trace
N = 1000
word_length = 20
trials = 2
seed = 42
height = 10
tol = 1e-8
out = report.json
a_angles = 0, 0.3333333333333333
";
        let cfg = parse_config(text, None).unwrap();
        assert_eq!(cfg.kind, ExperimentKind::CosetTwistOrbit);
        assert_eq!(cfg.c_spec, FiberSpec::Trace(Complex64::new(0.5, -0.25)));
        assert_eq!((cfg.n, cfg.word_length, cfg.trials, cfg.seed), (1000, 20, 2, 42));
        assert_eq!(cfg.height, 10);
        assert_eq!(cfg.tol, 1e-8);
        assert_eq!(cfg.out, Some(PathBuf::from("report.json")));
        assert_eq!(cfg.a_angles, Some([0.0, 1.0 / 3.0]));
    }

    #[test]
    fn missing_seed_names_key() {
        let e = parse_config("kind = central_fiber_rigidity\n", None).unwrap_err();
        assert_eq!(e.key, "seed");
        assert!(e.to_string().contains("seed"));
        let cfg = parse_config("kind = central_fiber_rigidity\n", Some(3)).unwrap();
        assert_eq!(cfg.seed, 3);
    }

    #[test]
    fn malformed_values_name_key() {
        let cases = [
            ("kind = nope\nseed = 1", "kind"),
            ("seed = 1", "kind"),
            ("kind = submersion_census\nseed = x", "seed"),
            ("kind = submersion_census\nseed = 1\nN = -3", "N"),
            ("kind = submersion_census\nseed = 1\nN = 0", "N"),
            ("kind = submersion_census\nseed = 1\nc_spec = trace=1", "c_spec"),
            ("kind = submersion_census\nseed = 1\ntol = nan", "tol"),
            ("kind = submersion_census\nseed = 1\nbogus = 2", "bogus"),
            ("kind = submersion_census\nseed = 1\nseed = 2", "seed"),
            ("kind = submersion_census\nseed = 1\nword = axb", "word"),
            ("kind = submersion_census\nseed = 1\ntrials =", "trials"),
        ];
        for (text, key) in cases {
            let e = parse_config(text, None).unwrap_err();
            assert_eq!(e.key, key, "{text}");
        }
        let e = parse_config("kind central", None).unwrap_err();
        assert_eq!(e.line, Some(1));
    }
}
