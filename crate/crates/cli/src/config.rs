//! Flat `key=value` settings shared by the config file and the flags.

use std::collections::BTreeMap;
use std::path::Path;

use dctmg::{Error, ExperimentSpec, Method, ProjectorOrder, RhsMode, ZeroLocation};

pub const KEYS: [&str; 11] = [
    "dim", "zero", "q", "r", "size", "method", "tol", "max-iters", "seed", "rhs", "output",
];

/// Settings keyed by long flag name; later layers override earlier ones.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

fn canonical(key: &str) -> Result<String, Error> {
    let k = key.trim().to_ascii_lowercase().replace('_', "-");
    if KEYS.contains(&k.as_str()) {
        Ok(k)
    } else {
        Err(Error::Usage(format!("unknown setting {key:?}; known: {}", KEYS.join(", "))))
    }
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut out = Settings::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("config line {}: expected key=value, got {line:?}", n + 1)))?;
            out.set(k, v.trim())?;
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), Error> {
        self.0.insert(canonical(key)?, value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn overlay(mut self, other: Settings) -> Self {
        self.0.extend(other.0);
        self
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, Error>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::Usage(format!("invalid value {v:?} for {key}: {e}")))
            })
            .transpose()
    }

    /// Builds and validates the experiment, starting from `base`.
    pub fn experiment(&self, base: ExperimentSpec) -> Result<ExperimentSpec, Error> {
        let mut spec = base;
        if let Some(v) = self.parsed::<usize>("dim")? {
            spec.dim = v;
        }
        if let Some(v) = self.parsed::<ZeroLocation>("zero")? {
            spec.zero = v;
        }
        if let Some(v) = self.parsed::<u32>("q")? {
            spec.q = v;
        }
        if let Some(v) = self.parsed::<ProjectorOrder>("r")? {
            spec.r = v;
        }
        if let Some(v) = self.get("size") {
            spec.sizes = v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Usage(format!("invalid size {s:?}: {e}")))
                })
                .collect::<Result<_, _>>()?;
        }
        if let Some(v) = self.parsed::<Method>("method")? {
            spec.method = v;
        }
        if let Some(v) = self.parsed::<f64>("tol")? {
            spec.tol = v;
        }
        if let Some(v) = self.parsed::<usize>("max-iters")? {
            spec.max_iters = v;
        }
        if let Some(v) = self.parsed::<u64>("seed")? {
            spec.seed = v;
        }
        if let Some(v) = self.parsed::<RhsMode>("rhs")? {
            spec.rhs = v;
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_overlay() {
        let file = Settings::parse("# comment\nq = 2\nsize=64,128\nmax_iters=50\n\nmethod=tgm").unwrap();
        let mut flags = Settings::default();
        flags.set("q", "3").unwrap();
        let spec = file.overlay(flags).experiment(ExperimentSpec::default()).unwrap();
        assert_eq!(spec.q, 3);
        assert_eq!(spec.sizes, vec![64, 128]);
        assert_eq!(spec.max_iters, 50);
        assert_eq!(spec.method, Method::Tgm);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Settings::parse("colour=red").is_err());
        assert!(Settings::parse("q").is_err());
        let s = Settings::parse("size=100").unwrap();
        assert!(s.experiment(ExperimentSpec::default()).is_err());
        let s = Settings::parse("r=0").unwrap();
        assert!(s.experiment(ExperimentSpec::default()).is_err());
    }
}
