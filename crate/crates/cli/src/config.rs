use std::collections::BTreeMap;

use crate::error::CliError;

/// Keys accepted in a sweep config file; they mirror the long flag names.
pub const SWEEP_KEYS: [&str; 14] = [
    "datasets",
    "algos",
    "pair",
    "step",
    "sym",
    "target",
    "seed",
    "jobs",
    "degree",
    "path-metric",
    "threshold",
    "baseline",
    "timing",
    "data-dir",
];

/// Parses `key = value` lines. `#` starts a comment; blank lines are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Invalid(format!("config line {}: expected key=value", i + 1)))?;
        let key = key.trim().replace('_', "-");
        if !SWEEP_KEYS.contains(&key.as_str()) {
            return Err(CliError::Invalid(format!(
                "config line {}: unknown key {key:?} (expected one of {})",
                i + 1,
                SWEEP_KEYS.join(", ")
            )));
        }
        if out.insert(key.clone(), value.trim().to_owned()).is_some() {
            return Err(CliError::Invalid(format!("config line {}: duplicate key {key:?}", i + 1)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_pairs_and_comments() {
        let cfg = parse_config("# sweep\nstep = 0.25\ndatasets=zachary # inline\n\nalgos = louvain\n").unwrap();
        assert_eq!(cfg["step"], "0.25");
        assert_eq!(cfg["datasets"], "zachary");
        assert_eq!(cfg["algos"], "louvain");
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(parse_config("stepsize = 1").is_err());
        assert!(parse_config("step").is_err());
        assert!(parse_config("step = 1\nstep = 2").is_err());
        assert_eq!(parse_config("path_metric = hops").unwrap()["path-metric"], "hops");
    }
}
