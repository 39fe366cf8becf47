//! Full reports and corpus runs.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::decomp::{decompose, Decomposed, RETRY_BUDGET};
use crate::error::Error;
use crate::parse::{default_vars, parse};
use crate::ratfunc::RationalFunction;
use crate::spectrum::{analyze_spectrum, Rho, SpectrumReport};

/// Default seed when neither a flag nor the environment provides one.
pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    pub retry_budget: usize,
    pub max_degree: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: DEFAULT_SEED,
            retry_budget: RETRY_BUDGET,
            max_degree: 8,
        }
    }
}

impl Options {
    pub fn check_degree(&self, f: &RationalFunction) -> Result<(), Error> {
        if f.degree() > self.max_degree {
            return Err(Error::DegreeLimit {
                degree: f.degree(),
                limit: self.max_degree,
            });
        }
        Ok(())
    }
}

/// Spectrum report plus the decomposition of composite bivariate input.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub input: String,
    pub vars: Vec<String>,
    pub spectrum: SpectrumReport,
    pub decomposition: Option<Result<Decomposed, Error>>,
}

impl Analysis {
    pub fn bound_failed(&self) -> bool {
        self.spectrum.bounds.any_failed()
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(&self.spectrum).expect("report serializes");
        let obj = v.as_object_mut().expect("object");
        obj.insert("input".into(), json!(self.input));
        obj.insert("vars".into(), json!(self.vars));
        obj.insert("spectrum_size".into(), json!(self.spectrum.spectrum_size()));
        let (d, e) = match &self.decomposition {
            Some(Ok(Decomposed::Composite(d))) => (d.to_json(&self.vars), Value::Null),
            Some(Err(e)) => (Value::Null, json!(e.to_string())),
            _ => (Value::Null, Value::Null),
        };
        obj.insert("decomposition".into(), d);
        if !e.is_null() {
            obj.insert("decomposition_error".into(), e);
        }
        v
    }

    pub fn to_text(&self) -> String {
        let s = &self.spectrum;
        let mut out = format!("f = {}\n", self.input);
        out += &format!(
            "degree {}, {} variables, seed {}\n",
            s.degree, s.nvars, s.seed
        );
        out += &format!("composite: {}\n", s.composite);
        if !s.composite {
            out += if s.entries.is_empty() {
                "spectrum: empty\n"
            } else {
                "spectrum:\n"
            };
            for e in &s.entries {
                out += &format!(
                    "  {:<16} n = {} (conjugacy {})\n",
                    e.location(),
                    e.n,
                    e.conjugacy()
                );
            }
        }
        out += &format!("rho: {}\n", s.rho);
        out += &format!(
            "bounds: stein {}, theorem1 {}, lorenzini {}\n",
            s.bounds.stein.as_str(),
            s.bounds.theorem1.as_str(),
            s.bounds.lorenzini.as_str()
        );
        if s.nvars > 2 {
            out += &format!(
                "confidence: {}\n",
                serde_json::to_value(s.confidence)
                    .unwrap()
                    .as_str()
                    .unwrap()
            );
        }
        match &self.decomposition {
            Some(Ok(Decomposed::Composite(d))) => {
                out += &format!(
                    "decomposition: ({})∘({})\n",
                    d.outer,
                    d.inner.to_string_with(&self.vars)
                );
            }
            Some(Err(e)) => out += &format!("decomposition: {e}\n"),
            _ => {}
        }
        out
    }
}

pub fn analyze(
    f: &RationalFunction,
    vars: &[String],
    options: &Options,
) -> Result<Analysis, Error> {
    options.check_degree(f)?;
    let spectrum = analyze_spectrum(f, options.seed)?;
    let decomposition = (spectrum.composite && f.nvars() == 2)
        .then(|| decompose(f, options.seed, options.retry_budget));
    Ok(Analysis {
        input: f.to_string_with(vars),
        vars: vars.to_vec(),
        spectrum,
        decomposition,
    })
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    pub nvars: usize,
    pub f: String,
    #[serde(default)]
    pub vars: Option<Vec<String>>,
    #[serde(default)]
    pub expect: Option<Expect>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    pub composite: Option<bool>,
    pub rho: Option<ExpectRho>,
    pub spectrum_size: Option<usize>,
    pub bounds: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ExpectRho {
    Finite(usize),
    Named(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Pass,
    /// Expectations that did not hold, or a failed bound verdict.
    Fail(Vec<String>),
    /// The entry could not be read or analyzed.
    Error(String),
}

#[derive(Clone, Debug)]
pub struct EntryOutcome {
    pub line: usize,
    pub name: String,
    pub status: Status,
    pub analysis: Option<Analysis>,
}

impl EntryOutcome {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("line".into(), json!(self.line));
        m.insert("name".into(), json!(self.name));
        let (status, detail) = match &self.status {
            Status::Pass => ("pass", Value::Null),
            Status::Fail(why) => ("fail", json!(why)),
            Status::Error(e) => ("error", json!(e)),
        };
        m.insert("status".into(), json!(status));
        m.insert("detail".into(), detail);
        m.insert(
            "report".into(),
            self.analysis
                .as_ref()
                .map_or(Value::Null, Analysis::to_json),
        );
        Value::Object(m)
    }
}

fn check_expectations(entry: &CorpusEntry, a: &Analysis) -> Vec<String> {
    let mut bad = Vec::new();
    let s = &a.spectrum;
    if let Some(e) = &entry.expect {
        if let Some(c) = e.composite {
            if c != s.composite {
                bad.push(format!("composite: expected {c}, got {}", s.composite));
            }
        }
        if let Some(r) = &e.rho {
            let ok = match (r, s.rho) {
                (ExpectRho::Finite(x), Rho::Finite(y)) => *x == y,
                (ExpectRho::Named(n), Rho::Infinite) => n == "infinite",
                _ => false,
            };
            if !ok {
                let shown = match r {
                    ExpectRho::Finite(x) => x.to_string(),
                    ExpectRho::Named(n) => n.clone(),
                };
                bad.push(format!("rho: expected {shown}, got {}", s.rho));
            }
        }
        if let Some(n) = e.spectrum_size {
            if n != s.spectrum_size() {
                bad.push(format!(
                    "spectrum_size: expected {n}, got {}",
                    s.spectrum_size()
                ));
            }
        }
        if let Some(b) = &e.bounds {
            let got = serde_json::to_value(s.bounds).expect("bounds serialize");
            for (k, want) in b {
                match got.get(k).and_then(Value::as_str) {
                    Some(g) if g == want => {}
                    Some(g) => bad.push(format!("bounds.{k}: expected {want}, got {g}")),
                    None => bad.push(format!("bounds.{k}: unknown bound")),
                }
            }
        }
    }
    if s.bounds.any_failed() {
        bad.push("a bound verdict failed".into());
    }
    bad
}

fn run_entry(line: usize, raw: &str, duplicate: bool, options: &Options) -> EntryOutcome {
    let entry: CorpusEntry = match serde_json::from_str(raw) {
        Ok(e) => e,
        Err(e) => {
            let name = serde_json::from_str::<Value>(raw)
                .ok()
                .and_then(|v| v.get("name").and_then(Value::as_str).map(String::from))
                .unwrap_or_default();
            return EntryOutcome {
                line,
                name,
                status: Status::Error(format!("malformed entry: {e}")),
                analysis: None,
            };
        }
    };
    let fail = |msg: String| EntryOutcome {
        line,
        name: entry.name.clone(),
        status: Status::Error(msg),
        analysis: None,
    };
    if duplicate {
        return fail(format!("duplicate name `{}`", entry.name));
    }
    if entry.nvars < 2 {
        return fail(format!("nvars must be at least 2, got {}", entry.nvars));
    }
    let vars = entry
        .vars
        .clone()
        .unwrap_or_else(|| default_vars(entry.nvars));
    if vars.len() != entry.nvars {
        return fail(format!(
            "{} variable names for nvars = {}",
            vars.len(),
            entry.nvars
        ));
    }
    let analysis = parse(&entry.f, &vars).and_then(|f| analyze(&f, &vars, options));
    match analysis {
        Err(e) => fail(e.to_string()),
        Ok(a) => {
            let bad = check_expectations(&entry, &a);
            let status = if bad.is_empty() {
                Status::Pass
            } else {
                Status::Fail(bad)
            };
            EntryOutcome {
                line,
                name: entry.name,
                status,
                analysis: Some(a),
            }
        }
    }
}

/// Runs every entry of a JSON Lines corpus. Blank lines and lines starting
/// with `#` are skipped; outcomes come back in input order.
pub fn run_corpus(text: &str, options: &Options) -> Vec<EntryOutcome> {
    let mut seen = HashSet::new();
    let lines: Vec<(usize, &str, bool)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            let name = serde_json::from_str::<Value>(l)
                .ok()
                .and_then(|v| v.get("name").and_then(Value::as_str).map(String::from));
            let duplicate = name.is_some_and(|n| !seen.insert(n));
            (i + 1, l, duplicate)
        })
        .collect();
    lines
        .par_iter()
        .map(|&(line, raw, dup)| run_entry(line, raw, dup, options))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_json_shape() {
        let vars = default_vars(2);
        let f = parse("x/y", &vars).unwrap();
        let v = analyze(&f, &vars, &Options::default()).unwrap().to_json();
        assert_eq!(v["rho"], json!(0));
        assert_eq!(v["composite"], json!(false));
        assert_eq!(v["decomposition"], Value::Null);
        let f = parse("x^2/y^2", &vars).unwrap();
        let v = analyze(&f, &vars, &Options::default()).unwrap().to_json();
        assert_eq!(v["rho"], json!("infinite"));
        assert_eq!(v["decomposition"]["inner_num"], json!("x"));
        assert_eq!(v["decomposition"]["field"], json!("Q"));
    }

    #[test]
    fn degree_guard() {
        let vars = default_vars(2);
        let f = parse("x^9 + y", &vars).unwrap();
        assert_eq!(
            analyze(&f, &vars, &Options::default()).unwrap_err(),
            Error::DegreeLimit {
                degree: 9,
                limit: 8
            }
        );
    }

    #[test]
    fn corpus_entries_fail_independently() {
        let text = r#"
{"name": "ratio", "nvars": 2, "f": "x/y", "expect": {"composite": false, "rho": 0, "spectrum_size": 0}}
# comment
{"name": "square", "nvars": 2, "f": "x^2/y^2", "expect": {"composite": true, "rho": "infinite"}}
{"name": "wrong", "nvars": 2, "f": "x*y", "expect": {"rho": 5}}
{"name": "ratio", "nvars": 2, "f": "x"}
{"name": "bad", "nvars": 2}
not json
{"name": "syntax", "nvars": 2, "f": "x +* y"}
{"name": "one", "nvars": 1, "f": "x"}
"#;
        let out = run_corpus(text, &Options::default());
        let statuses: Vec<&str> = out
            .iter()
            .map(|o| match o.status {
                Status::Pass => "pass",
                Status::Fail(_) => "fail",
                Status::Error(_) => "error",
            })
            .collect();
        assert_eq!(
            statuses,
            ["pass", "pass", "fail", "error", "error", "error", "error", "error"]
        );
        assert_eq!(out[0].line, 2);
        assert_eq!(out[2].name, "wrong");
    }
}
