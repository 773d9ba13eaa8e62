//! Command-line surface.
//!
//! ```text
//! lexstat [--output PATH] [--format tsv|structured] <command>
//!   analyze <CORPUS> [--no-hyphen-letter] [--no-case-fold] [--extra-letter-chars CHARS]
//!   rank <TABLE> --measure M [--a A] [--equal-sizes] [--top N] [--min-freq N]
//!   table-demo
//!   compare <DICT_A> <DICT_B> --n N
//!   merge <INPUT>...
//!   curves --max-f N
//! ```

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::corpus::{self, CorpusError, TokenizerConfig};
use crate::demo;
use crate::formats::{self, Artifact, FormatError};
use crate::lexicon::{self, LexiconError, MeasureKind, RankedDictionary};
use crate::measures::{self, GeneralizedParams, MeasureError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("writing output: {0}")]
    Stdout(#[source] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Tsv,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Frequency,
    Range,
    Generalized,
    Juilland,
    Carroll,
    Ur,
}

#[derive(Debug, Parser)]
#[command(
    name = "lexstat",
    version,
    about = "Word-usage measures and ranked frequency dictionaries"
)]
pub struct Cli {
    /// Write data here instead of standard output
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t, global = true)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count words per document of a corpus directory or manifest
    Analyze {
        corpus: PathBuf,
        /// Treat hyphens as separators
        #[arg(long)]
        no_hyphen_letter: bool,
        #[arg(long)]
        no_case_fold: bool,
        /// Additional characters that count as letters
        #[arg(long, default_value = "")]
        extra_letter_chars: String,
    },
    /// Rank the words of a corpus table under one measure
    Rank {
        table: PathBuf,
        #[arg(long, value_enum)]
        measure: MeasureArg,
        /// Exponent of the generalized measure, in [0, 1]
        #[arg(long)]
        a: Option<f64>,
        /// Carroll only: treat all categories as equally sized
        #[arg(long)]
        equal_sizes: bool,
        #[arg(long)]
        top: Option<usize>,
        /// Frequency only: keep words with total frequency >= N
        #[arg(long)]
        min_freq: Option<u64>,
    },
    /// Print the nine-word illustration scored under U, U_m and U_R
    TableDemo,
    /// Overlap of the top-n words of two ranked dictionaries
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Pool U_R dictionaries, or merge corpus tables with disjoint categories
    Merge {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Stevens, harmonic and Weber-Fechner curves for F = 1..=max-f
    Curves {
        #[arg(long)]
        max_f: u64,
    },
}

fn measure_kind(
    measure: MeasureArg,
    a: Option<f64>,
    equal_sizes: bool,
) -> Result<MeasureKind, CliError> {
    if a.is_some() && measure != MeasureArg::Generalized {
        return Err(CliError::Usage(
            "--a applies only to --measure generalized".into(),
        ));
    }
    if equal_sizes && measure != MeasureArg::Carroll {
        return Err(CliError::Usage(
            "--equal-sizes applies only to --measure carroll".into(),
        ));
    }
    Ok(match measure {
        MeasureArg::Frequency => MeasureKind::Frequency,
        MeasureArg::Range => MeasureKind::Range,
        MeasureArg::Generalized => {
            let a =
                a.ok_or_else(|| CliError::Usage("--measure generalized requires --a".into()))?;
            MeasureKind::Generalized(GeneralizedParams::new(a)?)
        }
        MeasureArg::Juilland => MeasureKind::JuillandU,
        MeasureArg::Carroll => MeasureKind::CarrollUm { equal_sizes },
        MeasureArg::Ur => MeasureKind::UR,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

struct Sink<'a> {
    output: Option<&'a Path>,
    stdout: &'a mut dyn Write,
}

impl Sink<'_> {
    fn emit(&mut self, contents: &str) -> Result<(), CliError> {
        match self.output {
            Some(path) => write_file(path, contents),
            None => self
                .stdout
                .write_all(contents.as_bytes())
                .map_err(CliError::Stdout),
        }
    }
}

fn load_table(path: &Path) -> Result<corpus::CorpusTable, CliError> {
    match formats::load_artifact(path)? {
        Artifact::Table(t) => Ok(t),
        Artifact::Dictionary(_) => Err(CliError::Usage(format!(
            "{}: expected a corpus table, found a ranked dictionary",
            path.display()
        ))),
    }
}

fn load_dictionary(path: &Path) -> Result<RankedDictionary, CliError> {
    match formats::load_artifact(path)? {
        Artifact::Dictionary(d) => Ok(d),
        Artifact::Table(_) => Err(CliError::Usage(format!(
            "{}: expected a ranked dictionary, found a corpus table",
            path.display()
        ))),
    }
}

fn emit_dictionary(
    sink: &mut Sink<'_>,
    format: OutputFormat,
    dict: &RankedDictionary,
) -> Result<(), CliError> {
    sink.emit(&match format {
        OutputFormat::Tsv => formats::dictionary_to_tsv(dict),
        OutputFormat::Structured => formats::dictionary_to_json(dict),
    })
}

fn emit_table(
    sink: &mut Sink<'_>,
    format: OutputFormat,
    table: &corpus::CorpusTable,
) -> Result<(), CliError> {
    match format {
        OutputFormat::Tsv => {
            sink.emit(&formats::table_to_tsv(table))?;
            if let Some(path) = sink.output {
                write_file(&formats::sidecar_path(path), &formats::table_meta(table))?;
            }
            Ok(())
        }
        OutputFormat::Structured => sink.emit(&formats::table_to_json(table)),
    }
}

/// Runs one parsed command. Data goes to `--output` or `stdout`,
/// informational lines to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let format = cli.format;
    let mut sink = Sink {
        output: cli.output.as_deref(),
        stdout,
    };
    match cli.command {
        Command::Analyze {
            corpus: path,
            no_hyphen_letter,
            no_case_fold,
            extra_letter_chars,
        } => {
            if extra_letter_chars.contains(['\t', '\n', '\r']) {
                return Err(CliError::Usage(
                    "--extra-letter-chars may not contain tabs or line breaks".into(),
                ));
            }
            let config = TokenizerConfig {
                hyphen_is_letter: !no_hyphen_letter,
                case_fold: !no_case_fold,
                extra_letter_chars: extra_letter_chars.chars().collect(),
            };
            let documents = corpus::read_documents(&path)?;
            let table = corpus::build_table(&documents, &config)?;
            emit_table(&mut sink, format, &table)?;
            writeln!(
                stderr,
                "documents\t{}\ntokens\t{}\nvocabulary\t{}",
                table.n_categories(),
                table.total_tokens(),
                table.vocabulary_size()
            )
            .map_err(CliError::Stdout)?;
        }
        Command::Rank {
            table,
            measure,
            a,
            equal_sizes,
            top,
            min_freq,
        } => {
            let measure = measure_kind(measure, a, equal_sizes)?;
            let table = load_table(&table)?;
            let mut dict = lexicon::rank(&table, measure)?;
            if let Some(min_freq) = min_freq {
                dict = lexicon::select_by_threshold(&dict, min_freq)?;
            }
            if let Some(top) = top {
                dict = lexicon::select_top(&dict, top)?;
            }
            emit_dictionary(&mut sink, format, &dict)?;
        }
        Command::TableDemo => {
            let rows = demo::rows()?;
            sink.emit(&match format {
                OutputFormat::Tsv => demo::render(&rows),
                OutputFormat::Structured => {
                    let mut s = serde_json::to_string_pretty(&rows).expect("serializable");
                    s.push('\n');
                    s
                }
            })?;
        }
        Command::Compare { a, b, n } => {
            let report = lexicon::compare(&load_dictionary(&a)?, &load_dictionary(&b)?, n)?;
            sink.emit(&match format {
                OutputFormat::Tsv => formats::report_to_tsv(&report),
                OutputFormat::Structured => formats::report_to_json(&report),
            })?;
        }
        Command::Merge { inputs } => {
            let artifacts = inputs
                .iter()
                .map(|p| formats::load_artifact(p))
                .collect::<Result<Vec<_>, _>>()?;
            if artifacts
                .iter()
                .all(|a| matches!(a, Artifact::Dictionary(_)))
            {
                let dicts: Vec<RankedDictionary> = artifacts
                    .into_iter()
                    .filter_map(|a| match a {
                        Artifact::Dictionary(d) => Some(d),
                        Artifact::Table(_) => None,
                    })
                    .collect();
                emit_dictionary(&mut sink, format, &lexicon::pool_ur(&dicts)?)?;
            } else if artifacts.iter().all(|a| matches!(a, Artifact::Table(_))) {
                let mut tables = artifacts.into_iter().filter_map(|a| match a {
                    Artifact::Table(t) => Some(t),
                    Artifact::Dictionary(_) => None,
                });
                let first = tables.next().expect("at least one input");
                let merged = tables.try_fold(first, |acc, t| corpus::merge_tables(&acc, &t))?;
                emit_table(&mut sink, format, &merged)?;
            } else {
                return Err(CliError::Usage(
                    "merge inputs must be all ranked dictionaries or all corpus tables".into(),
                ));
            }
        }
        Command::Curves { max_f } => {
            let rows = measures::law_curves(max_f)?;
            sink.emit(&match format {
                OutputFormat::Tsv => formats::curves_to_tsv(&rows),
                OutputFormat::Structured => {
                    let mut s = serde_json::to_string_pretty(&rows).expect("serializable");
                    s.push('\n');
                    s
                }
            })?;
        }
    }
    Ok(())
}
