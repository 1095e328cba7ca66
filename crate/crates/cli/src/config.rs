//! `--config <path>` support.
//!
//! The file holds `key = value` lines, where `key` is a long flag name
//! without the dashes (underscores are accepted for hyphens). Blank lines and
//! lines starting with `#` are skipped. Entries whose flag already appears on
//! the command line are dropped; the rest are appended as `--key=value`, so
//! the argument parser applies the same validation to both sources and
//! rejects keys the chosen command does not know.

use std::collections::HashSet;
use std::fs;
use std::path::PathBuf;

use crate::error::{CliError, Result};

/// `argv` with the entries of the config file (if any) appended.
pub fn merge(mut argv: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path).map_err(|source| CliError::Config {
        path: path.clone(),
        source,
    })?;
    let present: HashSet<&str> = argv
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split_once('=').map_or(a, |(k, _)| k))
        .collect();
    let extra: Vec<String> = parse(&text)?
        .into_iter()
        .filter(|(key, _)| !present.contains(key.as_str()))
        .map(|(key, value)| format!("--{key}={value}"))
        .collect();
    argv.extend(extra);
    Ok(argv)
}

fn config_path(argv: &[String]) -> Result<Option<PathBuf>> {
    let mut found = None;
    let mut it = argv.iter().skip(1);
    while let Some(arg) = it.next() {
        let path = if arg == "--config" {
            it.next()
                .ok_or_else(|| CliError::usage("--config needs a path"))?
                .as_str()
        } else if let Some(p) = arg.strip_prefix("--config=") {
            p
        } else {
            continue;
        };
        if found.replace(PathBuf::from(path)).is_some() {
            return Err(CliError::usage("--config given more than once"));
        }
    }
    Ok(found)
}

/// `(key, value)` pairs in file order, keys normalised to flag spelling.
pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |why: &str| CliError::usage(format!("config line {}: {why}", n + 1));
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| bad("expected key = value"))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(bad("empty key or value"));
        }
        if key == "config" {
            return Err(bad("config files cannot include other config files"));
        }
        if !seen.insert(key.clone()) {
            return Err(bad("duplicate key"));
        }
        entries.push((key, value.to_owned()));
    }
    Ok(entries)
}
