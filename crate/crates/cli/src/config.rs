//! `key=value` config files, spliced into the argument list ahead of the
//! command-line flags so that explicit flags win.

use std::ffi::OsString;
use std::fs;

use crate::output::Failure;

/// Path given with `--config`, in either `--config p` or `--config=p` form.
fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Turns config lines into `--key value` tokens. Blank lines and `#` comments
/// are skipped; `config` itself may not appear.
pub fn parse_config(text: &str) -> Result<Vec<OsString>, Failure> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("config line {}: expected key=value", i + 1)))?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" {
            return Err(Failure::usage(format!("config line {}: invalid key '{key}'", i + 1)));
        }
        out.push(format!("--{key}").into());
        out.push(value.trim().into());
    }
    Ok(out)
}

/// Inserts config-file flags right after the subcommand name.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>, Failure> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| Failure::io(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    let extra = parse_config(&text)?;
    if args.len() < 2 {
        return Ok(args);
    }
    let mut out = Vec::with_capacity(args.len() + extra.len());
    out.extend_from_slice(&args[..2]);
    out.extend(extra);
    out.extend_from_slice(&args[2..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines_become_flags() {
        let toks = parse_config("# sweep\nsigma = 2,0,2\n\ndims=3,5\n").unwrap();
        let toks: Vec<String> = toks.into_iter().map(|t| t.into_string().unwrap()).collect();
        assert_eq!(toks, ["--sigma", "2,0,2", "--dims", "3,5"]);
        assert!(parse_config("nonsense").is_err());
        assert!(parse_config("config=x").is_err());
    }
}
