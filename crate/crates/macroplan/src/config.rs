//! `key = value` configuration files for the command line.
//!
//! Each pair becomes `--key value` and is placed in front of the arguments
//! given on the command line, which therefore win when both set a flag.
//! Underscores in keys are read as hyphens, `#` starts a comment.

use std::ffi::OsString;

use anyhow::Context;

use crate::formats::FormatError;

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, FormatError> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| FormatError {
            line: i + 1,
            message: format!("expected key = value, got {line:?}"),
        })?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() || key.contains(char::is_whitespace) || key == "config" {
            return Err(FormatError {
                line: i + 1,
                message: format!("bad key {key:?}"),
            });
        }
        pairs.push((key, value.trim().to_string()));
    }
    Ok(pairs)
}

/// Replaces `--config FILE` (or `--config=FILE`) in `args` by the file's
/// pairs, inserted right after the subcommand name at `args[1]`.
pub fn expand_config_args(args: Vec<OsString>) -> anyhow::Result<Vec<OsString>> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        let text = arg.to_string_lossy();
        if text == "--config" {
            path = Some(it.next().context("--config needs a file")?);
        } else if let Some(p) = text.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = std::fs::read_to_string(&path)
        .with_context(|| format!("reading config {}", path.to_string_lossy()))?;
    let pairs = parse_config(&text).with_context(|| format!("in config {}", path.to_string_lossy()))?;
    let insert_at = rest.len().min(2);
    let flags = pairs
        .into_iter()
        .flat_map(|(k, v)| [OsString::from(format!("--{k}")), OsString::from(v)]);
    rest.splice(insert_at..insert_at, flags);
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_comments_and_errors() {
        let text = "# sweep\nruns = 10\n\nkbar=1-3  # inclusive\nnum_macros = 5\n";
        let pairs = parse_config(text).unwrap();
        assert_eq!(
            pairs,
            vec![
                ("runs".to_string(), "10".to_string()),
                ("kbar".to_string(), "1-3".to_string()),
                ("num-macros".to_string(), "5".to_string()),
            ]
        );
        assert_eq!(parse_config("runs 10").unwrap_err().line, 1);
        assert_eq!(parse_config("ok=1\n=2").unwrap_err().line, 2);
    }

    #[test]
    fn config_flags_go_before_user_flags() {
        let dir = std::env::temp_dir().join(format!("macroplan-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.txt");
        std::fs::write(&path, "seed = 4\nruns = 2\n").unwrap();
        let args: Vec<OsString> = ["macroplan", "sweep", "--seed", "9", "--config"]
            .into_iter()
            .map(OsString::from)
            .chain([path.clone().into_os_string()])
            .collect();
        let out = expand_config_args(args).unwrap();
        let out: Vec<String> = out.into_iter().map(|a| a.into_string().unwrap()).collect();
        assert_eq!(out, ["macroplan", "sweep", "--seed", "4", "--runs", "2", "--seed", "9"]);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
