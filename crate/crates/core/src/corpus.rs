//! Tokenization and per-category counting.
//!
//! One document is one category. Tokens are maximal runs of letters
//! (general category `L`, plus combining marks `M` so that decomposed or
//! case-folded letters stay whole), hyphens and any configured extra
//! characters. Leading and trailing hyphens are stripped.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_general_category::{get_general_category, GeneralCategory};

use crate::measures::FrequencyDistribution;

/// Characters treated as hyphens: HYPHEN-MINUS and HYPHEN. Dashes separate.
pub const HYPHENS: [char; 2] = ['\u{2D}', '\u{2010}'];

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus has no documents")]
    NoDocuments,
    #[error("duplicate category name {0:?}")]
    DuplicateCategory(String),
    #[error("category names shared by both tables: {}", .0.join(", "))]
    OverlappingCategories(Vec<String>),
    #[error("invalid category name {0:?}: must be non-empty without tabs or line breaks")]
    InvalidCategoryName(String),
    #[error("{}: invalid UTF-8 at byte offset {offset}", .path.display())]
    Encoding { path: PathBuf, offset: usize },
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {message}", .path.display())]
    Manifest {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("word {word:?} has {got} counts, expected {expected}")]
    ShapeMismatch {
        word: String,
        expected: usize,
        got: usize,
    },
    #[error("invalid word {0:?}: must be non-empty without tabs or line breaks")]
    InvalidWord(String),
    #[error("word {0:?} has no occurrences")]
    EmptyEntry(String),
    #[error("category {name:?} declares {declared} tokens but its counts sum to {counted}")]
    SizeMismatch {
        name: String,
        declared: u64,
        counted: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub hyphen_is_letter: bool,
    pub case_fold: bool,
    pub extra_letter_chars: BTreeSet<char>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            hyphen_is_letter: true,
            case_fold: true,
            extra_letter_chars: BTreeSet::new(),
        }
    }
}

impl TokenizerConfig {
    fn is_hyphen(&self, c: char) -> bool {
        self.hyphen_is_letter && HYPHENS.contains(&c)
    }

    fn is_word_char(&self, c: char) -> bool {
        use GeneralCategory::*;
        let letter_or_mark = matches!(
            get_general_category(c),
            UppercaseLetter
                | LowercaseLetter
                | TitlecaseLetter
                | ModifierLetter
                | OtherLetter
                | NonspacingMark
                | SpacingMark
                | EnclosingMark
        );
        letter_or_mark || self.is_hyphen(c) || self.extra_letter_chars.contains(&c)
    }
}

/// Splits `text` into word tokens.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> Vec<String> {
    let mut tokens = Vec::new();
    for run in text.split(|c: char| !config.is_word_char(c)) {
        let word = run.trim_matches(|c: char| config.is_hyphen(c));
        if word.is_empty() {
            continue;
        }
        if config.case_fold {
            tokens.push(caseless::default_case_fold_str(word));
        } else {
            tokens.push(word.to_owned());
        }
    }
    tokens
}

/// Decodes `bytes` as UTF-8, reporting the offset of the first bad byte.
pub fn decode_utf8<'a>(bytes: &'a [u8], path: &Path) -> Result<&'a str, CorpusError> {
    std::str::from_utf8(bytes).map_err(|e| CorpusError::Encoding {
        path: path.to_owned(),
        offset: e.valid_up_to(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Category {
    pub id: usize,
    pub name: String,
    pub size_tokens: u64,
}

/// Per-category counts for every word of a corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusTable {
    categories: Vec<Category>,
    entries: BTreeMap<String, FrequencyDistribution>,
    total_tokens: u64,
    tokenizer: TokenizerConfig,
}

fn check_name(name: &str) -> Result<(), CorpusError> {
    if name.is_empty() || name.contains(['\t', '\n', '\r']) {
        return Err(CorpusError::InvalidCategoryName(name.to_owned()));
    }
    Ok(())
}

fn check_unique<'a>(names: impl IntoIterator<Item = &'a str>) -> Result<(), CorpusError> {
    let mut seen = HashSet::new();
    for name in names {
        check_name(name)?;
        if !seen.insert(name) {
            return Err(CorpusError::DuplicateCategory(name.to_owned()));
        }
    }
    Ok(())
}

impl CorpusTable {
    /// Assembles a table from category names and per-word count rows,
    /// deriving category sizes and checking every invariant.
    pub fn from_counts(
        names: Vec<String>,
        rows: impl IntoIterator<Item = (String, Vec<u64>)>,
        tokenizer: TokenizerConfig,
    ) -> Result<Self, CorpusError> {
        check_unique(names.iter().map(String::as_str))?;
        let mut sizes = vec![0u64; names.len()];
        let mut entries = BTreeMap::new();
        for (word, counts) in rows {
            if word.is_empty() || word.contains(['\t', '\n', '\r']) {
                return Err(CorpusError::InvalidWord(word));
            }
            if counts.len() != names.len() {
                return Err(CorpusError::ShapeMismatch {
                    word,
                    expected: names.len(),
                    got: counts.len(),
                });
            }
            if counts.iter().all(|&c| c == 0) {
                return Err(CorpusError::EmptyEntry(word));
            }
            for (size, &c) in sizes.iter_mut().zip(&counts) {
                *size += c;
            }
            entries.insert(word.clone(), FrequencyDistribution::new(word, counts));
        }
        let categories: Vec<Category> = names
            .into_iter()
            .zip(sizes)
            .enumerate()
            .map(|(id, (name, size_tokens))| Category {
                id,
                name,
                size_tokens,
            })
            .collect();
        let total_tokens = categories.iter().map(|c| c.size_tokens).sum();
        Ok(Self {
            categories,
            entries,
            total_tokens,
            tokenizer,
        })
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn category_names(&self) -> impl Iterator<Item = &str> {
        self.categories.iter().map(|c| c.name.as_str())
    }

    pub fn category_sizes(&self) -> Vec<u64> {
        self.categories.iter().map(|c| c.size_tokens).collect()
    }

    pub fn n_categories(&self) -> usize {
        self.categories.len()
    }

    /// Entries in code-point order of the word.
    pub fn entries(&self) -> impl ExactSizeIterator<Item = &FrequencyDistribution> {
        self.entries.values()
    }

    pub fn get(&self, word: &str) -> Option<&FrequencyDistribution> {
        self.entries.get(word)
    }

    pub fn vocabulary_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn tokenizer(&self) -> &TokenizerConfig {
        &self.tokenizer
    }
}

fn count_tokens(text: &str, config: &TokenizerConfig) -> HashMap<String, u64> {
    let mut counts = HashMap::new();
    for token in tokenize(text, config) {
        *counts.entry(token).or_insert(0) += 1;
    }
    counts
}

/// Builds a table with one category per document, in input order.
pub fn build_table<N, T>(
    documents: &[(N, T)],
    config: &TokenizerConfig,
) -> Result<CorpusTable, CorpusError>
where
    N: AsRef<str> + Sync,
    T: AsRef<str> + Sync,
{
    if documents.is_empty() {
        return Err(CorpusError::NoDocuments);
    }
    check_unique(documents.iter().map(|(name, _)| name.as_ref()))?;
    let n = documents.len();

    let per_doc: Vec<HashMap<String, u64>> = documents
        .par_iter()
        .map(|(_, text)| count_tokens(text.as_ref(), config))
        .collect();

    let mut rows: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    for (j, counts) in per_doc.into_iter().enumerate() {
        for (word, c) in counts {
            rows.entry(word).or_insert_with(|| vec![0; n])[j] = c;
        }
    }
    let names = documents
        .iter()
        .map(|(name, _)| name.as_ref().to_owned())
        .collect();
    CorpusTable::from_counts(names, rows, config.clone())
}

/// Pools two corpora: `a`'s categories followed by `b`'s.
///
/// The merged table keeps `a`'s tokenizer settings.
pub fn merge_tables(a: &CorpusTable, b: &CorpusTable) -> Result<CorpusTable, CorpusError> {
    let a_names: HashSet<&str> = a.category_names().collect();
    let shared: Vec<String> = b
        .category_names()
        .filter(|name| a_names.contains(name))
        .map(str::to_owned)
        .collect();
    if !shared.is_empty() {
        return Err(CorpusError::OverlappingCategories(shared));
    }
    let (na, nb) = (a.n_categories(), b.n_categories());
    let mut entries = a.entries.clone();
    for dist in entries.values_mut() {
        dist.counts_mut().resize(na + nb, 0);
    }
    for (word, dist) in &b.entries {
        let merged = entries
            .entry(word.clone())
            .or_insert_with(|| FrequencyDistribution::new(word.clone(), vec![0; na + nb]));
        merged.counts_mut()[na..].copy_from_slice(dist.counts());
    }
    let categories = a
        .categories
        .iter()
        .chain(&b.categories)
        .enumerate()
        .map(|(id, c)| Category {
            id,
            name: c.name.clone(),
            size_tokens: c.size_tokens,
        })
        .collect();
    Ok(CorpusTable {
        categories,
        entries,
        total_tokens: a.total_tokens + b.total_tokens,
        tokenizer: a.tokenizer.clone(),
    })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io {
        path: path.to_owned(),
        source,
    }
}

fn read_text(path: &Path) -> Result<String, CorpusError> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    decode_utf8(&bytes, path)?;
    Ok(String::from_utf8(bytes).expect("validated above"))
}

/// Reads `(name, text)` documents from a directory or a manifest.
///
/// A directory contributes every regular, non-hidden file, ordered by file
/// name and named by file stem. A manifest is a text file of
/// `name<TAB>path` lines; relative paths resolve against the manifest's
/// directory, blank lines and `#` comments are skipped.
pub fn read_documents(path: &Path) -> Result<Vec<(String, String)>, CorpusError> {
    let meta = fs::metadata(path).map_err(io_err(path))?;
    let documents = if meta.is_dir() {
        read_directory(path)?
    } else {
        read_manifest(path)?
    };
    if documents.is_empty() {
        return Err(CorpusError::NoDocuments);
    }
    check_unique(documents.iter().map(|(name, _)| name.as_str()))?;
    Ok(documents)
}

fn read_directory(dir: &Path) -> Result<Vec<(String, String)>, CorpusError> {
    let mut files: Vec<PathBuf> = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let entry = entry.map_err(io_err(dir))?;
        let path = entry.path();
        let hidden = entry.file_name().to_string_lossy().starts_with('.');
        if !hidden && path.is_file() {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    files
        .into_iter()
        .map(|path| {
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok((name, read_text(&path)?))
        })
        .collect()
}

fn read_manifest(path: &Path) -> Result<Vec<(String, String)>, CorpusError> {
    let manifest = read_text(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut documents = Vec::new();
    for (idx, line) in manifest.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, doc_path) = line.split_once('\t').ok_or_else(|| CorpusError::Manifest {
            path: path.to_owned(),
            line: idx + 1,
            message: "expected name<TAB>path".into(),
        })?;
        documents.push((name.to_owned(), read_text(&base.join(doc_path))?));
    }
    Ok(documents)
}
