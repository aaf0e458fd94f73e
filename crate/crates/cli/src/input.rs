//! Parsing of command-line values and input files.

use std::fs;
use std::path::Path;

use serde::Serialize;
use spectra_core::poly::rational::{from_f64, int, parse_rational};
use spectra_core::poly::ParseError;
use spectra_core::{MPoly, Rational};

use crate::{CliError, RunConfig};

/// `"1/2,-1,0"` as rationals.
pub fn point(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',')
        .map(|c| parse_rational(c.trim()).ok_or_else(|| CliError::input(format!("invalid coordinate '{}' in '{s}'", c.trim()))))
        .collect()
}

fn caret(src: &str, e: &ParseError) -> String {
    format!("invalid polynomial: {e}\n  {src}\n  {}^", " ".repeat(e.pos.min(src.len())))
}

pub fn poly(src: &str, nvars: usize) -> Result<MPoly, CliError> {
    MPoly::parse(src, nvars).map_err(|e| CliError::input(caret(src, &e)))
}

pub fn poly_homogeneous(src: &str, n: usize) -> Result<MPoly, CliError> {
    MPoly::parse_homogeneous(src, n).map_err(|e| CliError::input(caret(src, &e)))
}

pub fn poly_auto(src: &str) -> Result<MPoly, CliError> {
    MPoly::parse_auto(src).map_err(|e| CliError::input(caret(src, &e)))
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        context: format!("reading {}", path.display()),
        source,
    })
}

/// A JSON number or a rational string.
pub fn json_rational(v: &serde_json::Value) -> Result<Rational, CliError> {
    let bad = || CliError::input(format!("expected a number or rational string, got {v}"));
    match v {
        serde_json::Value::String(s) => parse_rational(s).ok_or_else(bad),
        serde_json::Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(int(i)),
            None => n.as_f64().and_then(from_f64).ok_or_else(bad),
        },
        _ => Err(bad()),
    }
}

pub fn write_file(cfg: &RunConfig, dir_default: Option<&Path>, name: &str, contents: &str) -> Result<Option<String>, CliError> {
    let Some(dir) = cfg.out.as_deref().or(dir_default) else {
        return Ok(None);
    };
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        context: format!("creating {}", dir.display()),
        source,
    })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Io {
        context: format!("writing {}", path.display()),
        source,
    })?;
    Ok(Some(path.display().to_string()))
}

/// Prints a JSON report and, with `--out`, saves it as `<name>.json`.
pub fn emit<T: Serialize>(cfg: &RunConfig, name: &str, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize") + "\n";
    print!("{text}");
    write_file(cfg, None, &format!("{name}.json"), &text)?;
    Ok(())
}
