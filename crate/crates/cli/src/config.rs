//! `--config <path>`: a JSON object whose keys mirror the subcommand's flags.
//!
//! The file is turned into `--key value` arguments placed ahead of the ones
//! typed on the command line, so explicit flags win. Unknown keys then fail
//! in the argument parser like any unknown flag.

use std::ffi::OsString;
use std::path::Path;

use serde_json::Value;

/// Splits `--config PATH` / `--config=PATH` out of `args`.
pub fn take_config_path(args: &mut Vec<OsString>) -> Result<Option<OsString>, String> {
    let mut found = None;
    let mut i = 1;
    while i < args.len() {
        let a = args[i].to_string_lossy().into_owned();
        if a == "--" {
            break;
        }
        if a == "--config" {
            if i + 1 >= args.len() {
                return Err("--config needs a path".into());
            }
            found = Some(args.remove(i + 1));
            args.remove(i);
            continue;
        }
        if let Some(p) = a.strip_prefix("--config=") {
            found = Some(OsString::from(p));
            args.remove(i);
            continue;
        }
        i += 1;
    }
    Ok(found)
}

/// Converts a parsed config object into command-line arguments.
pub fn to_args(value: &Value) -> Result<Vec<OsString>, String> {
    let obj = value
        .as_object()
        .ok_or_else(|| "config file must hold a JSON object".to_string())?;
    let mut out = Vec::new();
    for (key, v) in obj {
        let flag = format!("--{}", key.replace('_', "-"));
        match v {
            Value::Bool(true) => out.push(flag.into()),
            Value::Bool(false) | Value::Null => {}
            Value::Number(n) => {
                out.push(flag.into());
                out.push(n.to_string().into());
            }
            Value::String(s) => {
                out.push(flag.into());
                out.push(s.into());
            }
            Value::Array(_) | Value::Object(_) => {
                return Err(format!("config key `{key}` must be a number, string or boolean"));
            }
        }
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<Vec<OsString>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| format!("config {} is not valid JSON: {e}", path.display()))?;
    to_args(&value)
}

/// Inserts `extra` right after the subcommand name, or appends it if no
/// subcommand is present (the parser then reports the missing subcommand).
pub fn splice_after_subcommand(args: &mut Vec<OsString>, extra: Vec<OsString>) {
    let at = args
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map(|p| p + 2)
        .unwrap_or(args.len());
    args.splice(at..at, extra);
}
