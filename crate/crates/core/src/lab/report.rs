use std::collections::BTreeMap;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};

/// Results of one experiment, possibly merged over several trials.
///
/// Statistics are stored per trial, so every statistic is an array with one
/// entry per trial. Checks are merged by conjunction.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentReport {
    pub kind: String,
    /// Which sampler produced the points (`"haar"`, `"flow_walk"`, ...).
    pub sampler: String,
    pub trials: usize,
    pub thresholds: BTreeMap<String, f64>,
    pub stats: BTreeMap<String, Vec<Value>>,
    pub checks: BTreeMap<String, bool>,
}

impl ExperimentReport {
    pub fn new(kind: &str, sampler: &str) -> Self {
        Self {
            kind: kind.to_string(),
            sampler: sampler.to_string(),
            trials: 1,
            ..Default::default()
        }
    }

    /// Records a real statistic; non-finite values are an error.
    pub fn stat(&mut self, name: &str, value: f64) -> Result<()> {
        let n = Number::from_f64(value).ok_or_else(|| {
            Error::InvalidInput(format!("statistic {name} is not finite ({value})"))
        })?;
        self.push(name, Value::Number(n));
        Ok(())
    }

    pub fn count(&mut self, name: &str, value: u64) {
        self.push(name, Value::from(value));
    }

    pub fn flag(&mut self, name: &str, value: bool) {
        self.push(name, Value::Bool(value));
    }

    /// Records a list of reals as a single statistic.
    pub fn series(&mut self, name: &str, values: &[f64]) -> Result<()> {
        let mut out = Vec::with_capacity(values.len());
        for v in values {
            out.push(Value::Number(Number::from_f64(*v).ok_or_else(|| {
                Error::InvalidInput(format!("statistic {name} has a non-finite entry ({v})"))
            })?));
        }
        self.push(name, Value::Array(out));
        Ok(())
    }

    pub fn threshold(&mut self, name: &str, value: f64) {
        self.thresholds.insert(name.to_string(), value);
    }

    pub fn check(&mut self, name: &str, ok: bool) {
        let slot = self.checks.entry(name.to_string()).or_insert(true);
        *slot &= ok;
    }

    fn push(&mut self, name: &str, value: Value) {
        self.stats.entry(name.to_string()).or_default().push(value);
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|v| *v)
    }

    /// First value of a numeric statistic.
    pub fn get(&self, name: &str) -> Option<f64> {
        self.stats.get(name)?.first()?.as_f64()
    }

    pub fn get_flag(&self, name: &str) -> Option<bool> {
        self.stats.get(name)?.first()?.as_bool()
    }

    /// All trial values of a numeric statistic.
    pub fn values(&self, name: &str) -> Vec<f64> {
        self.stats
            .get(name)
            .map(|v| v.iter().filter_map(Value::as_f64).collect())
            .unwrap_or_default()
    }

    /// Concatenates per-trial statistics in trial order.
    pub fn merge(reports: Vec<ExperimentReport>) -> Result<ExperimentReport> {
        let mut iter = reports.into_iter();
        let mut out = iter
            .next()
            .ok_or_else(|| Error::InvalidInput("no trials to merge".into()))?;
        for r in iter {
            if r.kind != out.kind {
                return Err(Error::InvalidInput(format!(
                    "cannot merge {} into {}",
                    r.kind, out.kind
                )));
            }
            out.trials += r.trials;
            for (k, v) in r.stats {
                out.stats.entry(k).or_default().extend(v);
            }
            for (k, v) in r.checks {
                out.check(&k, v);
            }
            for (k, v) in r.thresholds {
                out.thresholds.entry(k).or_insert(v);
            }
        }
        Ok(out)
    }

    /// Flat JSON object: statistics by name, `threshold_*`, `pass_*` and `pass`.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("kind".into(), Value::from(self.kind.clone()));
        m.insert("sampler".into(), Value::from(self.sampler.clone()));
        m.insert("trials".into(), Value::from(self.trials as u64));
        for (k, v) in &self.stats {
            m.insert(k.clone(), Value::Array(v.clone()));
        }
        for (k, v) in &self.thresholds {
            let n = Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null);
            m.insert(format!("threshold_{k}"), n);
        }
        for (k, v) in &self.checks {
            m.insert(format!("pass_{k}"), Value::Bool(*v));
        }
        m.insert("pass".into(), Value::Bool(self.passed()));
        Value::Object(m)
    }
}
