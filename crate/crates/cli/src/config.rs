//! `key=value` flag files.
//!
//! `--config FILE` is replaced in the argument list by `--key value` pairs
//! read from the file, so flags given after it override the file.

use std::ffi::OsString;
use std::fs;

use crate::CliError;

pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut out = Vec::with_capacity(args.len());
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        let path = if arg == "--config" {
            iter.next().ok_or_else(|| CliError::Usage("--config needs a file".into()))?
        } else if let Some(p) = arg.to_str().and_then(|s| s.strip_prefix("--config=")) {
            OsString::from(p)
        } else {
            out.push(arg);
            continue;
        };
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.to_string_lossy())))?;
        out.extend(parse(&text)?);
    }
    Ok(out)
}

fn parse(text: &str) -> Result<Vec<OsString>, CliError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", n + 1)))?;
        out.push(format!("--{}", key.trim()).into());
        out.push(value.trim().into());
    }
    Ok(out)
}
