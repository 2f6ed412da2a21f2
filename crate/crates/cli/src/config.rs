//! Flat `key = value` configuration files.
//!
//! One setting per line; `#` starts a comment; blank lines are ignored.
//! Keys are the long flag names of the subcommand (`nu`, `c`, `gamma`,
//! ...). Values given on the command line take precedence.
//!
//! ```text
//! # Case 1 example
//! nu = 1
//! c = 0, 0, 0.5
//! ```

use std::collections::BTreeMap;

use crate::CliError;

pub fn parse(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected `key = value`", no + 1))
        })?;
        let k = k.trim();
        if k.is_empty()
            || !k
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
        {
            return Err(CliError::Usage(format!(
                "config line {}: bad key `{k}`",
                no + 1
            )));
        }
        out.insert(k.replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

/// Flags equivalent to the settings, for insertion ahead of the explicit
/// arguments.
pub fn as_args(cfg: &BTreeMap<String, String>) -> Vec<String> {
    let mut out = Vec::new();
    for (k, v) in cfg {
        out.push(format!("--{k}"));
        if !v.is_empty() {
            out.push(v.replace(' ', ""));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blanks() {
        let m = parse("# header\n\nnu = 1\nc = 0, 0, 0.5  # Case 1\nout_dir=figs\n").unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m["c"], "0, 0, 0.5");
        assert_eq!(
            as_args(&m),
            ["--c", "0,0,0.5", "--nu", "1", "--out-dir", "figs"]
        );
    }

    #[test]
    fn malformed() {
        assert!(parse("nu 1").is_err());
        assert!(parse("= 1").is_err());
    }
}
