//! On-disk formats.
//!
//! * Corpus table TSV: header `word<TAB>cat1<TAB>...<TAB>catN`, one row of
//!   integer counts per word, rows sorted by word, LF endings. A sidecar
//!   `<table>.meta` holds `key=value` lines with category names and sizes,
//!   totals and tokenizer settings.
//! * Ranked dictionary TSV: a `# measure=<name>` line, the header
//!   `rank<TAB>word<TAB>score<TAB>freq`, then one row per entry with the
//!   score at 4 decimals.
//! * Structured variants of both, plus comparison reports, are JSON
//!   documents. JSON scores keep full precision.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusError, CorpusTable, TokenizerConfig};
use crate::lexicon::{ComparisonReport, MeasureKind, RankedDictionary, RankedEntry};
use crate::measures::CurveRow;

pub const TABLE_META_FORMAT: &str = "lexstat-table/1";
const MEASURE_PREFIX: &str = "# measure=";
const DICT_HEADER: &str = "rank\tword\tscore\tfreq";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("metadata: {0}")]
    Meta(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: not a corpus table or ranked dictionary", .0.display())]
    Unrecognized(PathBuf),
}

fn line_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Line {
        line,
        message: message.into(),
    }
}

/// Path of the metadata sidecar that accompanies a table TSV.
pub fn sidecar_path(table: &Path) -> PathBuf {
    let mut os = table.as_os_str().to_owned();
    os.push(".meta");
    PathBuf::from(os)
}

pub fn table_to_tsv(table: &CorpusTable) -> String {
    let mut out = String::from("word");
    for name in table.category_names() {
        out.push('\t');
        out.push_str(name);
    }
    out.push('\n');
    for dist in table.entries() {
        out.push_str(dist.word());
        for c in dist.counts() {
            write!(out, "\t{c}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn encode_chars<'a>(chars: impl Iterator<Item = &'a char>) -> String {
    chars
        .map(|c| format!("U+{:04X}", *c as u32))
        .collect::<Vec<_>>()
        .join(" ")
}

fn decode_chars(value: &str) -> Result<Vec<char>, FormatError> {
    value
        .split_whitespace()
        .map(|code| {
            code.strip_prefix("U+")
                .and_then(|hex| u32::from_str_radix(hex, 16).ok())
                .and_then(char::from_u32)
                .ok_or_else(|| FormatError::Meta(format!("bad code point {code:?}")))
        })
        .collect()
}

pub fn table_meta(table: &CorpusTable) -> String {
    let mut out = String::new();
    writeln!(out, "format={TABLE_META_FORMAT}").unwrap();
    writeln!(out, "categories={}", table.n_categories()).unwrap();
    for c in table.categories() {
        writeln!(out, "category.{}.name={}", c.id, c.name).unwrap();
        writeln!(out, "category.{}.size={}", c.id, c.size_tokens).unwrap();
    }
    writeln!(out, "total_tokens={}", table.total_tokens()).unwrap();
    writeln!(out, "vocabulary={}", table.vocabulary_size()).unwrap();
    let tok = table.tokenizer();
    writeln!(out, "tokenizer.hyphen_is_letter={}", tok.hyphen_is_letter).unwrap();
    writeln!(out, "tokenizer.case_fold={}", tok.case_fold).unwrap();
    writeln!(
        out,
        "tokenizer.extra_letter_chars={}",
        encode_chars(tok.extra_letter_chars.iter())
    )
    .unwrap();
    out
}

#[derive(Debug, Default)]
struct TableMeta {
    names: Vec<String>,
    sizes: Vec<u64>,
    total_tokens: u64,
    vocabulary: usize,
    tokenizer: TokenizerConfig,
}

fn parse_meta(text: &str) -> Result<TableMeta, FormatError> {
    let mut fields = std::collections::BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| FormatError::Meta(format!("line {}: expected key=value", idx + 1)))?;
        fields.insert(key, value);
    }
    let get = |key: &str| {
        fields
            .get(key)
            .copied()
            .ok_or_else(|| FormatError::Meta(format!("missing key {key}")))
    };
    let num = |key: &str| -> Result<u64, FormatError> {
        get(key)?
            .parse()
            .map_err(|_| FormatError::Meta(format!("{key} is not an integer")))
    };
    let flag = |key: &str| -> Result<bool, FormatError> {
        get(key)?
            .parse()
            .map_err(|_| FormatError::Meta(format!("{key} is not a boolean")))
    };
    if get("format")? != TABLE_META_FORMAT {
        return Err(FormatError::Meta(format!(
            "unsupported format {:?}",
            get("format")?
        )));
    }
    let n = num("categories")? as usize;
    let mut meta = TableMeta::default();
    for j in 0..n {
        meta.names
            .push(get(&format!("category.{j}.name"))?.to_owned());
        meta.sizes.push(num(&format!("category.{j}.size"))?);
    }
    meta.total_tokens = num("total_tokens")?;
    meta.vocabulary = num("vocabulary")? as usize;
    meta.tokenizer = TokenizerConfig {
        hyphen_is_letter: flag("tokenizer.hyphen_is_letter")?,
        case_fold: flag("tokenizer.case_fold")?,
        extra_letter_chars: decode_chars(get("tokenizer.extra_letter_chars")?)?
            .into_iter()
            .collect(),
    };
    Ok(meta)
}

/// Parses a table TSV, checking it against the sidecar when one is given.
pub fn table_from_tsv(tsv: &str, meta: Option<&str>) -> Result<CorpusTable, FormatError> {
    let mut lines = tsv.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| line_err(1, "missing header"))?;
    let mut columns = header.split('\t');
    if columns.next() != Some("word") {
        return Err(line_err(1, "header must start with \"word\""));
    }
    let names: Vec<String> = columns.map(str::to_owned).collect();
    let mut rows = Vec::new();
    let mut previous: Option<&str> = None;
    for (line, text) in lines {
        let mut cells = text.split('\t');
        let word = cells.next().unwrap_or_default();
        if previous.is_some_and(|p| p >= word) {
            return Err(line_err(
                line,
                format!("word {word:?} is out of order or repeated"),
            ));
        }
        previous = Some(word);
        let counts = cells
            .map(|c| {
                c.parse::<u64>().map_err(|_| {
                    line_err(line, format!("count {c:?} is not a non-negative integer"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if counts.len() != names.len() {
            return Err(line_err(
                line,
                format!("expected {} counts, found {}", names.len(), counts.len()),
            ));
        }
        rows.push((word.to_owned(), counts));
    }

    let meta = meta.map(parse_meta).transpose()?;
    let tokenizer = meta
        .as_ref()
        .map(|m| m.tokenizer.clone())
        .unwrap_or_default();
    let table = CorpusTable::from_counts(names, rows, tokenizer)?;
    if let Some(meta) = meta {
        check_meta(&table, &meta)?;
    }
    Ok(table)
}

fn check_meta(table: &CorpusTable, meta: &TableMeta) -> Result<(), FormatError> {
    let names: Vec<&str> = table.category_names().collect();
    if names != meta.names {
        return Err(FormatError::Meta(
            "category names differ from the table header".into(),
        ));
    }
    for (c, &declared) in table.categories().iter().zip(&meta.sizes) {
        if c.size_tokens != declared {
            return Err(CorpusError::SizeMismatch {
                name: c.name.clone(),
                declared,
                counted: c.size_tokens,
            }
            .into());
        }
    }
    if meta.total_tokens != table.total_tokens() || meta.vocabulary != table.vocabulary_size() {
        return Err(FormatError::Meta(
            "totals differ from the table rows".into(),
        ));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct TableDoc {
    categories: Vec<crate::corpus::Category>,
    total_tokens: u64,
    tokenizer: TokenizerConfig,
    entries: Vec<EntryDoc>,
}

#[derive(Serialize, Deserialize)]
struct EntryDoc {
    word: String,
    counts: Vec<u64>,
}

pub fn table_to_json(table: &CorpusTable) -> String {
    let doc = TableDoc {
        categories: table.categories().to_vec(),
        total_tokens: table.total_tokens(),
        tokenizer: table.tokenizer().clone(),
        entries: table
            .entries()
            .map(|d| EntryDoc {
                word: d.word().to_owned(),
                counts: d.counts().to_vec(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
    out.push('\n');
    out
}

pub fn table_from_json(json: &str) -> Result<CorpusTable, FormatError> {
    let doc: TableDoc = serde_json::from_str(json)?;
    let names = doc.categories.iter().map(|c| c.name.clone()).collect();
    let table = CorpusTable::from_counts(
        names,
        doc.entries.into_iter().map(|e| (e.word, e.counts)),
        doc.tokenizer.clone(),
    )?;
    let meta = TableMeta {
        names: doc.categories.iter().map(|c| c.name.clone()).collect(),
        sizes: doc.categories.iter().map(|c| c.size_tokens).collect(),
        total_tokens: doc.total_tokens,
        vocabulary: table.vocabulary_size(),
        tokenizer: doc.tokenizer,
    };
    check_meta(&table, &meta)?;
    Ok(table)
}

pub fn dictionary_to_tsv(dict: &RankedDictionary) -> String {
    let mut out = format!("{MEASURE_PREFIX}{}\n{DICT_HEADER}\n", dict.measure);
    for e in &dict.entries {
        writeln!(out, "{}\t{}\t{:.4}\t{}", e.rank, e.word, e.score, e.freq).unwrap();
    }
    out
}

/// Parses a dictionary TSV. Scores carry only the 4 printed decimals.
pub fn dictionary_from_tsv(tsv: &str) -> Result<RankedDictionary, FormatError> {
    let mut lines = tsv.lines().enumerate().map(|(i, l)| (i + 1, l));
    let measure = lines
        .next()
        .and_then(|(_, l)| l.strip_prefix(MEASURE_PREFIX))
        .ok_or_else(|| line_err(1, format!("expected \"{MEASURE_PREFIX}<name>\"")))?;
    let measure: MeasureKind = measure.parse().map_err(|e| line_err(1, format!("{e}")))?;
    match lines.next() {
        Some((_, DICT_HEADER)) => {}
        _ => return Err(line_err(2, format!("expected header {DICT_HEADER:?}"))),
    }
    let mut entries = Vec::new();
    for (line, text) in lines {
        let cells: Vec<&str> = text.split('\t').collect();
        let [rank, word, score, freq] = cells[..] else {
            return Err(line_err(
                line,
                format!("expected 4 fields, found {}", cells.len()),
            ));
        };
        let rank: usize = rank.parse().map_err(|_| line_err(line, "bad rank"))?;
        if rank != entries.len() + 1 {
            return Err(line_err(
                line,
                format!("rank {rank} breaks the 1..n sequence"),
            ));
        }
        let score: f64 = score
            .parse()
            .ok()
            .filter(|s: &f64| s.is_finite())
            .ok_or_else(|| line_err(line, "bad score"))?;
        let freq: u64 = freq.parse().map_err(|_| line_err(line, "bad frequency"))?;
        if word.is_empty() {
            return Err(line_err(line, "empty word"));
        }
        entries.push(RankedEntry {
            rank,
            word: word.to_owned(),
            score,
            freq,
        });
    }
    Ok(RankedDictionary { measure, entries })
}

pub fn dictionary_to_json(dict: &RankedDictionary) -> String {
    let mut out = serde_json::to_string_pretty(dict).expect("serializable");
    out.push('\n');
    out
}

pub fn dictionary_from_json(json: &str) -> Result<RankedDictionary, FormatError> {
    let dict: RankedDictionary = serde_json::from_str(json)?;
    for (i, e) in dict.entries.iter().enumerate() {
        if e.rank != i + 1 {
            return Err(FormatError::Meta(format!(
                "entry {} has rank {}",
                i + 1,
                e.rank
            )));
        }
    }
    Ok(dict)
}

pub fn report_to_tsv(report: &ComparisonReport) -> String {
    let mut out = String::new();
    writeln!(out, "n\t{}", report.n).unwrap();
    writeln!(out, "common\t{}", report.common).unwrap();
    writeln!(out, "jaccard\t{:.4}", report.jaccard).unwrap();
    for (key, words) in [("only_a", &report.only_a), ("only_b", &report.only_b)] {
        out.push_str(key);
        for w in words {
            out.push('\t');
            out.push_str(w);
        }
        out.push('\n');
    }
    out
}

pub fn report_to_json(report: &ComparisonReport) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("serializable");
    out.push('\n');
    out
}

pub fn curves_to_tsv(rows: &[CurveRow]) -> String {
    let mut out = String::from("F\tstevens\tharmonic\tweber_fechner\n");
    for r in rows {
        writeln!(
            out,
            "{}\t{:.6}\t{:.6}\t{:.6}",
            r.f, r.stevens, r.harmonic, r.weber_fechner
        )
        .unwrap();
    }
    out
}

/// Either artifact kind, as detected from file contents.
#[derive(Debug)]
pub enum Artifact {
    Table(CorpusTable),
    Dictionary(RankedDictionary),
}

fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })
}

fn with_path(path: &Path, err: FormatError) -> FormatError {
    match err {
        FormatError::Io { .. } => err,
        other => FormatError::Meta(format!("{}: {other}", path.display())),
    }
}

/// Loads a table or dictionary in TSV or JSON form. A table's sidecar is
/// read when present.
pub fn load_artifact(path: &Path) -> Result<Artifact, FormatError> {
    let text = read(path)?;
    let parsed = if text.trim_start().starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(&text)?;
        if value.get("measure").is_some() {
            dictionary_from_json(&text).map(Artifact::Dictionary)
        } else if value.get("categories").is_some() {
            table_from_json(&text).map(Artifact::Table)
        } else {
            return Err(FormatError::Unrecognized(path.to_owned()));
        }
    } else if text.starts_with(MEASURE_PREFIX) {
        dictionary_from_tsv(&text).map(Artifact::Dictionary)
    } else if text.starts_with("word") {
        let sidecar = sidecar_path(path);
        let meta = if sidecar.exists() {
            Some(read(&sidecar)?)
        } else {
            None
        };
        table_from_tsv(&text, meta.as_deref()).map(Artifact::Table)
    } else {
        return Err(FormatError::Unrecognized(path.to_owned()));
    };
    parsed.map_err(|e| with_path(path, e))
}
