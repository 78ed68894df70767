//! Flag and config-file parsing.
//!
//! Every option can come from command-line flags or from a `key = value`
//! config file (`--config PATH`); flags win on conflict. All runs are
//! reproducible from their config: seeds are explicit, never wall-clock.

use std::collections::BTreeMap;
use submod::error::{Error, Result};

/// Value-carrying options; `--overwrite` and `--degree-weighted` are the
/// boolean presence flags.
const VALUE_KEYS: [&str; 18] = [
    "instance",
    "objective",
    "budgets",
    "seed",
    "out",
    "strategy",
    "samples",
    "R",
    "node-cap",
    "costs",
    "gamma",
    "cmin",
    "gen",
    "instances",
    "kind",
    "nv",
    "nw",
    "n",
];
const EXTRA_VALUE_KEYS: [&str; 4] = ["edges", "p", "wmax", "inject-fault"];
const FLAG_KEYS: [&str; 2] = ["overwrite", "degree-weighted"];

/// Parsed options for one subcommand invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub subcommand: String,
    options: BTreeMap<String, String>,
}

impl RunConfig {
    /// Parse `argv` (without the program name): subcommand first, then
    /// `--key value` / `--flag` options, with `--config FILE` merged in at
    /// lower precedence.
    pub fn parse(args: &[String]) -> Result<RunConfig> {
        let invalid = |msg: String| Error::InvalidParameter(msg);
        let subcommand = args
            .first()
            .ok_or_else(|| invalid("missing subcommand (greedy|bnb|verify|gen)".into()))?
            .clone();
        let mut from_flags: BTreeMap<String, String> = BTreeMap::new();
        let mut config_path: Option<String> = None;
        let mut it = args[1..].iter().peekable();
        while let Some(arg) = it.next() {
            let key = arg
                .strip_prefix("--")
                .ok_or_else(|| invalid(format!("expected a --flag, found `{arg}`")))?;
            if key == "config" {
                let path = it
                    .next()
                    .ok_or_else(|| invalid("--config needs a path".into()))?;
                config_path = Some(path.clone());
            } else if FLAG_KEYS.contains(&key) {
                from_flags.insert(key.to_string(), "true".to_string());
            } else if VALUE_KEYS.contains(&key) || EXTRA_VALUE_KEYS.contains(&key) {
                let value = it
                    .next()
                    .ok_or_else(|| invalid(format!("--{key} needs a value")))?;
                from_flags.insert(key.to_string(), value.clone());
            } else {
                return Err(invalid(format!("unknown flag --{key}")));
            }
        }

        let mut options = match config_path {
            Some(path) => read_config_file(&path)?,
            None => BTreeMap::new(),
        };
        // Flags override the config file.
        options.extend(from_flags);
        Ok(RunConfig {
            subcommand,
            options,
        })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.options.get(key).map(String::as_str)
    }

    pub fn flag(&self, key: &str) -> bool {
        matches!(self.get(key), Some("true") | Some("1") | Some("yes"))
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.get(key).unwrap_or(default)
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|e| Error::InvalidParameter(format!("--{key} {raw}: {e}"))),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.u64_or(key, default as u64)? as usize)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|e| Error::InvalidParameter(format!("--{key} {raw}: {e}"))),
        }
    }

    /// The budget list `a,b,c`; may legitimately be empty.
    pub fn budgets(&self) -> Result<Vec<f64>> {
        let Some(raw) = self.get("budgets") else {
            return Ok(Vec::new());
        };
        let mut budgets = Vec::new();
        for tok in raw.split(',').filter(|t| !t.trim().is_empty()) {
            let b: f64 = tok
                .trim()
                .parse()
                .map_err(|e| Error::InvalidParameter(format!("budget `{tok}`: {e}")))?;
            if b.is_nan() || b <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "budget {b} must be positive"
                )));
            }
            budgets.push(b);
        }
        Ok(budgets)
    }
}

fn read_config_file(path: &str) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = match body.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => match body.split_once(char::is_whitespace) {
                Some((k, v)) => (k.trim(), v.trim()),
                None => (body, "true"),
            },
        };
        if !VALUE_KEYS.contains(&key)
            && !EXTRA_VALUE_KEYS.contains(&key)
            && !FLAG_KEYS.contains(&key)
        {
            return Err(Error::Parse {
                path: path.to_string(),
                line: idx + 1,
                message: format!("unknown config key `{key}`"),
            });
        }
        map.insert(key.to_string(), value.to_string());
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_flags_and_values() {
        let cfg = RunConfig::parse(&args(&[
            "greedy",
            "--objective",
            "coverage",
            "--budgets",
            "1,2,3",
            "--overwrite",
        ]))
        .unwrap();
        assert_eq!(cfg.subcommand, "greedy");
        assert_eq!(cfg.get("objective"), Some("coverage"));
        assert_eq!(cfg.budgets().unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(cfg.flag("overwrite"));
    }

    #[test]
    fn rejects_unknown_flags() {
        assert!(RunConfig::parse(&args(&["greedy", "--bogus", "1"])).is_err());
    }

    #[test]
    fn empty_budget_list_is_allowed() {
        let cfg = RunConfig::parse(&args(&["greedy", "--budgets", ""])).unwrap();
        assert!(cfg.budgets().unwrap().is_empty());
    }

    #[test]
    fn flags_override_config_file() {
        let dir = std::env::temp_dir().join("submod-cli-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "seed = 7\nobjective = modular\n").unwrap();
        let cfg = RunConfig::parse(&args(&[
            "greedy",
            "--config",
            path.to_str().unwrap(),
            "--seed",
            "9",
        ]))
        .unwrap();
        assert_eq!(cfg.u64_or("seed", 0).unwrap(), 9);
        assert_eq!(cfg.get("objective"), Some("modular"));
    }
}
