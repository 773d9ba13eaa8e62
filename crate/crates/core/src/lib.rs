//! Corpus lexicostatistics: word-usage measures, ranked frequency
//! dictionaries and the tooling to build them from plain-text corpora.
//!
//! * [`measures`] scores per-category counts: frequency, range, the
//!   generalized measure, Juilland's `U`, Carroll's `U_m` and the harmonic
//!   measure `U_R`.
//! * [`corpus`] tokenizes documents into a [`corpus::CorpusTable`].
//! * [`lexicon`] ranks, cuts, pools and compares dictionaries.
//! * [`formats`] reads and writes the TSV and JSON artifacts.

pub mod cli;
pub mod corpus;
pub mod demo;
pub mod formats;
pub mod lexicon;
pub mod measures;

pub use corpus::{build_table, merge_tables, tokenize, CorpusTable, TokenizerConfig};
pub use lexicon::{compare, pool_ur, rank, ComparisonReport, MeasureKind, RankedDictionary};
pub use measures::{harmonic_r, ur_score, FrequencyDistribution, EULER_C};
