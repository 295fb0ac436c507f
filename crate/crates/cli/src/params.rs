//! Merged run parameters: preset, then config file, then flags.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use crate::Failure;

/// One run's parameters. Every key read is remembered with its resolved
/// value so the run can be written back as an equivalent command line.
#[derive(Debug, Clone, Default)]
pub struct Params {
    map: BTreeMap<String, String>,
    used: Vec<(String, String)>,
}

impl Params {
    pub fn new(map: BTreeMap<String, String>) -> Self {
        Params {
            map,
            used: Vec::new(),
        }
    }

    fn record(&mut self, key: &str, value: &str) {
        if let Some(slot) = self.used.iter_mut().find(|(k, _)| k == key) {
            slot.1 = value.to_string();
        } else {
            self.used.push((key.to_string(), value.to_string()));
        }
    }

    pub fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    pub fn opt_str(&mut self, key: &str) -> Option<String> {
        let v = self.map.get(key).cloned()?;
        self.record(key, &v);
        Some(v)
    }

    pub fn str_or(&mut self, key: &str, default: &str) -> String {
        let v = self.map.get(key).cloned().unwrap_or_else(|| default.to_string());
        self.record(key, &v);
        v
    }

    /// Records a value that was derived rather than given.
    pub fn set(&mut self, key: &str, value: &str) {
        self.map.insert(key.to_string(), value.to_string());
        self.record(key, value);
    }

    pub fn opt<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, Failure> {
        self.opt_str(key).map(|s| parse_value(key, &s)).transpose()
    }

    pub fn or<T: FromStr + Display>(&mut self, key: &str, default: T) -> Result<T, Failure> {
        match self.opt(key)? {
            Some(v) => Ok(v),
            None => {
                self.record(key, &default.to_string());
                Ok(default)
            }
        }
    }

    pub fn require<T: FromStr>(&mut self, key: &str) -> Result<T, Failure> {
        self.opt(key)?
            .ok_or_else(|| Failure::usage(format!("missing --{key}")))
    }

    /// A count such as `1000000` or `1e6`.
    pub fn count_or(&mut self, key: &str, default: u64) -> Result<u64, Failure> {
        match self.opt_str(key) {
            Some(s) => parse_count(key, &s),
            None => {
                self.record(key, &default.to_string());
                Ok(default)
            }
        }
    }

    pub fn floats(&mut self, key: &str) -> Result<Vec<f64>, Failure> {
        let s = self
            .opt_str(key)
            .ok_or_else(|| Failure::usage(format!("missing --{key}")))?;
        parse_floats(key, &s)
    }

    pub fn opt_floats(&mut self, key: &str) -> Result<Option<Vec<f64>>, Failure> {
        self.opt_str(key).map(|s| parse_floats(key, &s)).transpose()
    }

    pub fn range_or(&mut self, key: &str, default: &str) -> Result<Vec<u32>, Failure> {
        let s = self.str_or(key, default);
        parse_range(key, &s)
    }

    pub fn opt_range(&mut self, key: &str) -> Result<Option<Vec<u32>>, Failure> {
        self.opt_str(key).map(|s| parse_range(key, &s)).transpose()
    }

    pub fn bool_or(&mut self, key: &str, default: bool) -> Result<bool, Failure> {
        match self.opt_str(key).as_deref() {
            None => {
                self.record(key, &default.to_string());
                Ok(default)
            }
            Some("true" | "yes" | "1") => Ok(true),
            Some("false" | "no" | "0") => Ok(false),
            Some(other) => Err(Failure::usage(format!("--{key}: expected true or false, got {other:?}"))),
        }
    }

    /// Fails on keys no command step asked for.
    pub fn finish(&self) -> Result<(), Failure> {
        let unknown: Vec<&str> = self
            .map
            .keys()
            .filter(|k| !self.used.iter().any(|(u, _)| u == *k))
            .map(String::as_str)
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(Failure::usage(format!("unknown parameter(s): {}", unknown.join(", "))))
        }
    }

    /// `cfountain <command> --key value …` reproducing this run.
    pub fn command_line(&self, command: &str) -> String {
        let mut out = format!("cfountain {command}");
        for (k, v) in &self.used {
            out.push_str(&format!(" --{k} {v}"));
        }
        out
    }
}

fn parse_value<T: FromStr>(key: &str, s: &str) -> Result<T, Failure> {
    s.trim()
        .parse()
        .map_err(|_| Failure::usage(format!("--{key}: cannot parse {s:?}")))
}

pub fn parse_count(key: &str, s: &str) -> Result<u64, Failure> {
    if let Ok(v) = s.trim().parse::<u64>() {
        return Ok(v);
    }
    match s.trim().parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 => Ok(v as u64),
        _ => Err(Failure::usage(format!("--{key}: {s:?} is not a whole number"))),
    }
}

/// Comma-separated floats.
pub fn parse_floats(key: &str, s: &str) -> Result<Vec<f64>, Failure> {
    let out: Vec<f64> = s
        .split(',')
        .map(|t| parse_value::<f64>(key, t))
        .collect::<Result<_, _>>()?;
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Failure::usage(format!("--{key}: values must be finite")));
    }
    Ok(out)
}

/// Comma-separated integers and inclusive ranges `a..b`.
pub fn parse_range(key: &str, s: &str) -> Result<Vec<u32>, Failure> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (u32, u32) = (parse_value(key, a)?, parse_value(key, b)?);
            if a > b {
                return Err(Failure::usage(format!("--{key}: empty range {part:?}")));
            }
            out.extend(a..=b);
        } else {
            out.push(parse_value(key, part)?);
        }
    }
    Ok(out)
}
