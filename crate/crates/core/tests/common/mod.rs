#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use regex::Regex;

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/fables")
}

/// Fixture documents as `(stem, text)` in file-name order.
pub fn fixture_documents() -> Vec<(String, String)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let stem = p.file_stem().unwrap().to_string_lossy().into_owned();
            (stem, std::fs::read_to_string(&p).unwrap())
        })
        .collect()
}

/// Word counts by a regex route that shares no code with the library
/// tokenizer. Valid for the fixture, where lowercasing equals case folding.
pub fn oracle_counts(text: &str) -> BTreeMap<String, u64> {
    let run = Regex::new(r"[\p{L}\p{M}\x{2D}\x{2010}]+").unwrap();
    let mut counts = BTreeMap::new();
    for m in run.find_iter(text) {
        let word = m.as_str().trim_matches(|c| c == '-' || c == '\u{2010}');
        if !word.is_empty() {
            *counts.entry(word.to_lowercase()).or_insert(0) += 1;
        }
    }
    counts
}

pub fn lexstat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lexstat"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn lexstat_ok(args: &[&str]) -> String {
    let out = lexstat(args);
    assert!(
        out.status.success(),
        "lexstat {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}
