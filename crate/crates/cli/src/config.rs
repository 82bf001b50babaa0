//! `--config` files and output placement.
//!
//! A config file holds `key=value` lines (`#` starts a comment). Each key is
//! turned into `--key=value` and inserted after the subcommand unless the
//! command line already sets that flag, so flags always win. `true`/`false`
//! values toggle switches.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Environment variable that redirects every output file into a directory.
pub const OUTPUT_DIR_ENV: &str = "SIMPLEXCM_OUTPUT_DIR";

/// Returns the path given to `--config`, if any.
fn config_path(args: &[String]) -> Result<Option<String>, String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it
                .next()
                .map(|p| Some(p.clone()))
                .ok_or_else(|| "--config needs a file path".to_string());
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Ok(Some(p.to_string()));
        }
    }
    Ok(None)
}

fn flag_present(args: &[String], key: &str) -> bool {
    let bare = format!("--{key}");
    let eq = format!("--{key}=");
    args.iter().any(|a| *a == bare || a.starts_with(&eq))
}

/// Parses `key=value` lines into `(key, value)` pairs with `_` normalised to `-`.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value, got {raw:?}", i + 1))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(format!("config line {}: invalid key {:?}", i + 1, k.trim()));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Expands `--config` into explicit flags placed right after the subcommand.
pub fn merge_config(args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&args)? else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let entries = parse_config(&text)?;
    if args.len() < 2 || args[1].starts_with('-') {
        return Ok(args);
    }
    let mut extra = Vec::new();
    for (k, v) in entries {
        if flag_present(&args, &k) {
            continue;
        }
        match v.as_str() {
            "true" => extra.push(format!("--{k}")),
            "false" => {}
            _ => extra.push(format!("--{k}={v}")),
        }
    }
    let mut merged = args[..2].to_vec();
    merged.extend(extra);
    merged.extend_from_slice(&args[2..]);
    Ok(merged)
}

/// Where a subcommand writes its CSV: `None` means stdout.
///
/// With the output-directory variable set, the file lands in that directory
/// under the file name of `--out`, or `<default_name>` when `--out` is absent.
pub fn resolve_output(out: Option<&Path>, default_name: &str) -> Result<Option<PathBuf>, String> {
    let path = match (std::env::var_os(OUTPUT_DIR_ENV), out) {
        (Some(dir), Some(p)) => {
            let name = p
                .file_name()
                .ok_or_else(|| format!("--out {} has no file name", p.display()))?;
            Some(PathBuf::from(dir).join(name))
        }
        (Some(dir), None) => Some(PathBuf::from(dir).join(default_name)),
        (None, p) => p.map(Path::to_path_buf),
    };
    if let Some(p) = &path {
        let parent = parent_dir(p);
        if !parent.is_dir() {
            return Err(format!("output directory {} does not exist", parent.display()));
        }
    }
    Ok(path)
}

fn parent_dir(p: &Path) -> &Path {
    match p.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    }
}

/// Writes through a temporary file in the target directory and renames it into place.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), String> {
    match path {
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| format!("cannot write to stdout: {e}")),
        Some(p) => {
            let mut tmp = tempfile::NamedTempFile::new_in(parent_dir(p))
                .map_err(|e| format!("cannot create temporary file next to {}: {e}", p.display()))?;
            tmp.write_all(bytes)
                .and_then(|_| tmp.as_file().sync_all())
                .map_err(|e| format!("cannot write {}: {e}", p.display()))?;
            tmp.persist(p)
                .map_err(|e| format!("cannot move output into {}: {e}", p.display()))?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: &[&str]) -> Vec<String> {
        a.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn config_lines() {
        let e = parse_config("# comment\nd = 3\nm_list=1,2 # trailing\n\n").unwrap();
        assert_eq!(e, vec![("d".into(), "3".into()), ("m-list".into(), "1,2".into())]);
        assert!(parse_config("novalue").is_err());
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.cfg");
        fs::write(&cfg, "d=3\nseed=9\nself-test-corrupt=true\n").unwrap();
        let args = v(&["bin", "cm-scan", "--d", "2", "--config", cfg.to_str().unwrap()]);
        let merged = merge_config(args).unwrap();
        assert_eq!(
            merged,
            v(&["bin", "cm-scan", "--seed=9", "--self-test-corrupt", "--d", "2", "--config", cfg.to_str().unwrap()])
        );
    }
}
