//! INI configuration files merged into the argument list, and the hash that
//! identifies an effective configuration.

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{Context, Result};
use ini::Ini;
use sha2::{Digest, Sha256};

use crate::args::{Command, SUBCOMMANDS};
use crate::UsageError;

/// Inserts `--key value` pairs from the config file right after the
/// subcommand, so flags given on the command line come later and win.
pub fn merged_args(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let strings: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let Some(config) = flag_value(&strings, "--config") else {
        return Ok(args);
    };
    let Some(position) = strings.iter().position(|a| SUBCOMMANDS.contains(&a.as_str())) else {
        return Ok(args);
    };
    let section = flag_value(&strings, "--section").unwrap_or_else(|| strings[position].clone());
    let path = PathBuf::from(&config);
    let ini = Ini::load_from_file(&path).map_err(|e| UsageError(format!("config {}: {e}", path.display())))?;

    let mut injected = Vec::new();
    let general = ini.general_section().iter();
    let named = ini.section(Some(section.as_str())).into_iter().flat_map(|s| s.iter());
    for (key, value) in general.chain(named) {
        let key = key.trim().replace('_', "-");
        if key == "config" || key == "section" {
            return Err(UsageError(format!("config {}: `{key}` cannot be set from a file", path.display())).into());
        }
        match value.trim() {
            "true" => injected.push(OsString::from(format!("--{key}"))),
            "false" => {}
            v => {
                injected.push(OsString::from(format!("--{key}")));
                injected.push(OsString::from(v));
            }
        }
    }
    let mut merged = args;
    merged.splice(position + 1..position + 1, injected);
    Ok(merged)
}

fn flag_value(args: &[String], flag: &str) -> Option<String> {
    let prefix = format!("{flag}=");
    args.iter().enumerate().find_map(|(i, a)| {
        if a == flag {
            args.get(i + 1).cloned()
        } else {
            a.strip_prefix(&prefix).map(str::to_owned)
        }
    })
}

/// SHA-256 of the effective configuration, ignoring the seed (reported on
/// its own) and settings that cannot change results.
pub fn config_hash(command: &Command) -> Result<String> {
    let mut value = serde_json::to_value(command).context("serializing configuration")?;
    if let Some(body) = value.as_object_mut().and_then(|o| o.values_mut().next()) {
        if let Some(out) = body.get_mut("out").and_then(|o| o.as_object_mut()) {
            for volatile in ["seed", "threads", "output", "format"] {
                out.remove(volatile);
            }
        }
    }
    let digest = Sha256::digest(value.to_string().as_bytes());
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}
