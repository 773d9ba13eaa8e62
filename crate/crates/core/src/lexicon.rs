//! Ranked dictionaries: scoring a corpus table under one measure, cutting
//! the head of the list, pooling `U_R` dictionaries and comparing lists.
//!
//! Ranking order is score descending, then total frequency descending, then
//! word ascending by code point.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::CorpusTable;
use crate::measures::{self, range_of, GeneralizedParams, MeasureError};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot rank an empty table")]
    EmptyTable,
    #[error("{measure}: {source}")]
    Measure {
        measure: MeasureKind,
        #[source]
        source: MeasureError,
    },
    #[error("expected a {expected} dictionary, got {got}")]
    WrongMeasure {
        expected: &'static str,
        got: MeasureKind,
    },
    #[error("nothing to pool")]
    NothingToPool,
    #[error("{what} must be >= 1")]
    NonPositive { what: &'static str },
    #[error("list {list} has {len} entries, fewer than the {n} requested")]
    ListTooShort { list: char, len: usize, n: usize },
    #[error("unknown measure {0:?}")]
    UnknownMeasure(String),
}

/// Which usage measure a dictionary is ranked by.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum MeasureKind {
    Frequency,
    Range,
    Generalized(GeneralizedParams),
    JuillandU,
    /// Carroll's `U_m`; `equal_sizes` ignores category sizes.
    CarrollUm {
        equal_sizes: bool,
    },
    UR,
}

impl MeasureKind {
    fn score(&self, counts: &[u64], sizes: &[u64]) -> Result<f64, MeasureError> {
        let total: u64 = counts.iter().sum();
        match *self {
            MeasureKind::Frequency => Ok(total as f64),
            MeasureKind::Range => Ok(range_of(counts) as f64),
            MeasureKind::Generalized(p) => measures::generalized_m(total, range_of(counts), p),
            MeasureKind::JuillandU => measures::juilland_u(counts),
            MeasureKind::CarrollUm { equal_sizes } => {
                measures::carroll_um(counts, (!equal_sizes).then_some(sizes))
            }
            MeasureKind::UR => Ok(measures::ur_score(counts)),
        }
    }
}

/// Canonical names: `frequency`, `range`, `generalized:<a>`, `juilland`,
/// `carroll`, `carroll-equal`, `ur`.
impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureKind::Frequency => f.write_str("frequency"),
            MeasureKind::Range => f.write_str("range"),
            MeasureKind::Generalized(p) => write!(f, "generalized:{p}"),
            MeasureKind::JuillandU => f.write_str("juilland"),
            MeasureKind::CarrollUm { equal_sizes: false } => f.write_str("carroll"),
            MeasureKind::CarrollUm { equal_sizes: true } => f.write_str("carroll-equal"),
            MeasureKind::UR => f.write_str("ur"),
        }
    }
}

impl FromStr for MeasureKind {
    type Err = LexiconError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || LexiconError::UnknownMeasure(s.to_owned());
        Ok(match s {
            "frequency" => MeasureKind::Frequency,
            "range" => MeasureKind::Range,
            "juilland" => MeasureKind::JuillandU,
            "carroll" => MeasureKind::CarrollUm { equal_sizes: false },
            "carroll-equal" => MeasureKind::CarrollUm { equal_sizes: true },
            "ur" => MeasureKind::UR,
            _ => {
                let a = s.strip_prefix("generalized:").ok_or_else(unknown)?;
                let a: f64 = a.parse().map_err(|_| unknown())?;
                MeasureKind::Generalized(GeneralizedParams::new(a).map_err(|_| unknown())?)
            }
        })
    }
}

impl From<MeasureKind> for String {
    fn from(m: MeasureKind) -> String {
        m.to_string()
    }
}

impl TryFrom<String> for MeasureKind {
    type Error = LexiconError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub rank: usize,
    pub word: String,
    pub score: f64,
    pub freq: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedDictionary {
    pub measure: MeasureKind,
    pub entries: Vec<RankedEntry>,
}

impl RankedDictionary {
    /// Sorts `(word, score, freq)` triples under the tie-break contract and
    /// assigns ranks 1..=len.
    pub fn from_scored(measure: MeasureKind, mut scored: Vec<(String, f64, u64)>) -> Self {
        scored.sort_by(ranking_order);
        let entries = scored
            .into_iter()
            .enumerate()
            .map(|(i, (word, score, freq))| RankedEntry {
                rank: i + 1,
                word,
                score,
                freq,
            })
            .collect();
        Self { measure, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.word.as_str())
    }
}

fn ranking_order(a: &(String, f64, u64), b: &(String, f64, u64)) -> Ordering {
    b.1.total_cmp(&a.1)
        .then_with(|| b.2.cmp(&a.2))
        .then_with(|| a.0.cmp(&b.0))
}

/// Scores every word of `table` and ranks by decreasing score.
pub fn rank(table: &CorpusTable, measure: MeasureKind) -> Result<RankedDictionary, LexiconError> {
    if table.is_empty() {
        return Err(LexiconError::EmptyTable);
    }
    let sizes = table.category_sizes();
    let dists: Vec<_> = table.entries().collect();
    let scored = dists
        .par_iter()
        .map(|d| {
            let score = measure
                .score(d.counts(), &sizes)
                .map_err(|source| LexiconError::Measure { measure, source })?;
            Ok((d.word().to_owned(), score, d.total()))
        })
        .collect::<Result<Vec<_>, LexiconError>>()?;
    Ok(RankedDictionary::from_scored(measure, scored))
}

/// The first `min(n, len)` entries.
pub fn select_top(dict: &RankedDictionary, n: usize) -> Result<RankedDictionary, LexiconError> {
    if n == 0 {
        return Err(LexiconError::NonPositive { what: "top-n" });
    }
    Ok(RankedDictionary {
        measure: dict.measure,
        entries: dict.entries.iter().take(n).cloned().collect(),
    })
}

/// Entries of a frequency dictionary with total frequency `>= min_freq`.
pub fn select_by_threshold(
    dict: &RankedDictionary,
    min_freq: u64,
) -> Result<RankedDictionary, LexiconError> {
    if dict.measure != MeasureKind::Frequency {
        return Err(LexiconError::WrongMeasure {
            expected: "frequency",
            got: dict.measure,
        });
    }
    if min_freq == 0 {
        return Err(LexiconError::NonPositive {
            what: "minimum frequency",
        });
    }
    Ok(RankedDictionary {
        measure: dict.measure,
        entries: dict
            .entries
            .iter()
            .filter(|e| e.freq >= min_freq)
            .cloned()
            .collect(),
    })
}

/// Pools `U_R` dictionaries by summing each word's scores.
///
/// Per-word contributions are summed in ascending order, so the result does
/// not depend on the order of `dicts`.
pub fn pool_ur(dicts: &[RankedDictionary]) -> Result<RankedDictionary, LexiconError> {
    if dicts.is_empty() {
        return Err(LexiconError::NothingToPool);
    }
    if let Some(d) = dicts.iter().find(|d| d.measure != MeasureKind::UR) {
        return Err(LexiconError::WrongMeasure {
            expected: "ur",
            got: d.measure,
        });
    }
    let mut pooled: BTreeMap<&str, (Vec<f64>, u64)> = BTreeMap::new();
    for entry in dicts.iter().flat_map(|d| &d.entries) {
        let slot = pooled.entry(&entry.word).or_default();
        slot.0.push(entry.score);
        slot.1 += entry.freq;
    }
    let scored = pooled
        .into_iter()
        .map(|(word, (mut scores, freq))| {
            (word.to_owned(), measures::order_free_sum(&mut scores), freq)
        })
        .collect();
    Ok(RankedDictionary::from_scored(MeasureKind::UR, scored))
}

/// Overlap of the top-`n` words of two ranked lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub n: usize,
    pub common: usize,
    pub only_a: Vec<String>,
    pub only_b: Vec<String>,
    pub jaccard: f64,
}

pub fn compare(
    a: &RankedDictionary,
    b: &RankedDictionary,
    n: usize,
) -> Result<ComparisonReport, LexiconError> {
    if n == 0 {
        return Err(LexiconError::NonPositive { what: "n" });
    }
    for (list, d) in [('A', a), ('B', b)] {
        if d.len() < n {
            return Err(LexiconError::ListTooShort {
                list,
                len: d.len(),
                n,
            });
        }
    }
    let top_a: HashSet<&str> = a.words().take(n).collect();
    let top_b: HashSet<&str> = b.words().take(n).collect();
    let only = |d: &RankedDictionary, other: &HashSet<&str>| -> Vec<String> {
        d.words()
            .take(n)
            .filter(|w| !other.contains(w))
            .map(str::to_owned)
            .collect()
    };
    let only_a = only(a, &top_b);
    let only_b = only(b, &top_a);
    let common = n - only_a.len();
    Ok(ComparisonReport {
        n,
        common,
        only_a,
        only_b,
        jaccard: common as f64 / (2 * n - common) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_table, TokenizerConfig};
    use crate::demo;
    use proptest::prelude::*;

    fn words(d: &RankedDictionary) -> Vec<&str> {
        d.words().collect()
    }

    #[test]
    fn demo_rank_under_ur_and_frequency() {
        let table = demo::table();
        let ur = rank(&table, MeasureKind::UR).unwrap();
        assert_eq!(words(&ur), ["9", "8", "1", "2", "3", "4", "5", "6", "7"]);
        let ranks: Vec<usize> = ur.entries.iter().map(|e| e.rank).collect();
        assert_eq!(ranks, (1..=9).collect::<Vec<_>>());
        let freq = rank(&table, MeasureKind::Frequency).unwrap();
        assert_eq!(&words(&freq)[..2], ["8", "9"]);
        assert!(freq.entries[2..].iter().all(|e| e.score == 5.0));
    }

    #[test]
    fn single_word_and_degenerate_tables() {
        let table = build_table(&[("A", "solo solo")], &TokenizerConfig::default()).unwrap();
        for m in [MeasureKind::Frequency, MeasureKind::UR, MeasureKind::Range] {
            let d = rank(&table, m).unwrap();
            assert_eq!(d.entries[0].rank, 1);
            assert_eq!(d.entries[0].word, "solo");
        }
        let err = rank(&table, MeasureKind::JuillandU).unwrap_err();
        assert!(err.to_string().contains("n >= 2"), "{err}");
        assert!(rank(&table, MeasureKind::CarrollUm { equal_sizes: false }).is_err());
        let empty = build_table(&[("A", "")], &TokenizerConfig::default()).unwrap();
        assert!(matches!(
            rank(&empty, MeasureKind::UR),
            Err(LexiconError::EmptyTable)
        ));
    }

    #[test]
    fn selections() {
        let table = demo::table();
        let freq = rank(&table, MeasureKind::Frequency).unwrap();
        assert_eq!(select_top(&freq, 100).unwrap(), freq);
        assert_eq!(select_top(&freq, 1).unwrap().entries, freq.entries[..1]);
        assert!(select_top(&freq, 0).is_err());
        assert_eq!(select_by_threshold(&freq, 1).unwrap(), freq);
        assert_eq!(select_by_threshold(&freq, 10).unwrap().len(), 2);
        assert!(select_by_threshold(&freq, 11).unwrap().is_empty());
        let ur = rank(&table, MeasureKind::UR).unwrap();
        assert!(matches!(
            select_by_threshold(&ur, 3),
            Err(LexiconError::WrongMeasure { .. })
        ));
    }

    #[test]
    fn pooling() {
        let cfg = TokenizerConfig::default();
        let a = rank(
            &build_table(&[("A", "x x y")], &cfg).unwrap(),
            MeasureKind::UR,
        )
        .unwrap();
        let b = rank(&build_table(&[("B", "z")], &cfg).unwrap(), MeasureKind::UR).unwrap();
        assert_eq!(pool_ur(std::slice::from_ref(&a)).unwrap(), a);
        let p = pool_ur(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(words(&p), ["x", "y", "z"]);
        assert_eq!(p.entries[0].score, 1.5);
        assert!(matches!(pool_ur(&[]), Err(LexiconError::NothingToPool)));
        let f = rank(
            &build_table(&[("C", "q")], &cfg).unwrap(),
            MeasureKind::Frequency,
        )
        .unwrap();
        assert!(matches!(
            pool_ur(&[a, f]),
            Err(LexiconError::WrongMeasure { .. })
        ));
    }

    #[test]
    fn comparisons() {
        let table = demo::table();
        let ur = rank(&table, MeasureKind::UR).unwrap();
        let freq = rank(&table, MeasureKind::Frequency).unwrap();
        let same = compare(&ur, &ur, 5).unwrap();
        assert_eq!((same.common, same.jaccard), (5, 1.0));
        let r = compare(&ur, &freq, 3).unwrap();
        // UR top-3: 9 8 1; frequency top-3: 8 9 1
        assert_eq!(r.common, 3);
        // range top-3: 9 1 2
        let range = rank(&table, MeasureKind::Range).unwrap();
        let r = compare(&ur, &range, 3).unwrap();
        assert_eq!(r.common, 2);
        assert_eq!(r.only_a, ["8"]);
        assert_eq!(r.only_b, ["2"]);
        assert_eq!(r.jaccard, 0.5);
        assert!(matches!(
            compare(&ur, &freq, 10),
            Err(LexiconError::ListTooShort {
                list: 'A',
                len: 9,
                n: 10
            })
        ));
        let cfg = TokenizerConfig::default();
        let x = rank(
            &build_table(&[("A", "a b")], &cfg).unwrap(),
            MeasureKind::UR,
        )
        .unwrap();
        let y = rank(
            &build_table(&[("A", "c d")], &cfg).unwrap(),
            MeasureKind::UR,
        )
        .unwrap();
        let r = compare(&x, &y, 2).unwrap();
        assert_eq!((r.common, r.jaccard), (0, 0.0));
    }

    #[test]
    fn measure_names_round_trip() {
        for m in [
            MeasureKind::Frequency,
            MeasureKind::Range,
            MeasureKind::Generalized(GeneralizedParams::new(0.25).unwrap()),
            MeasureKind::JuillandU,
            MeasureKind::CarrollUm { equal_sizes: false },
            MeasureKind::CarrollUm { equal_sizes: true },
            MeasureKind::UR,
        ] {
            assert_eq!(m.to_string().parse::<MeasureKind>().unwrap(), m);
        }
        assert!("generalized:2".parse::<MeasureKind>().is_err());
        assert!("tfidf".parse::<MeasureKind>().is_err());
    }

    fn arb_table() -> impl Strategy<Value = CorpusTable> {
        prop::collection::vec(prop::collection::vec(0u64..12, 3), 1..25).prop_map(|rows| {
            let rows = rows
                .into_iter()
                .filter(|r| r.iter().any(|&c| c > 0))
                .enumerate()
                .map(|(i, r)| (format!("w{i:02}"), r));
            CorpusTable::from_counts(
                vec!["A".into(), "B".into(), "C".into()],
                rows,
                TokenizerConfig::default(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn rank_is_a_sorted_permutation(table in arb_table(), a in 0.0f64..=1.0) {
            prop_assume!(!table.is_empty());
            let m = MeasureKind::Generalized(GeneralizedParams::new(a).unwrap());
            let d = rank(&table, m).unwrap();
            let mut seen: Vec<&str> = d.words().collect();
            seen.sort_unstable();
            let vocab: Vec<&str> = table.entries().map(|e| e.word()).collect();
            prop_assert_eq!(seen, vocab);
            prop_assert!(d.entries.windows(2).all(|w| w[0].score >= w[1].score));
            prop_assert!(d.entries.iter().enumerate().all(|(i, e)| e.rank == i + 1));
        }

        #[test]
        fn generalized_monotone_rescaling(table in arb_table(), a in 0.0f64..=1.0, k in 0.2f64..5.0) {
            let p = GeneralizedParams::new(a).unwrap();
            for x in table.entries() {
                for y in table.entries() {
                    let mx = measures::generalized_m(x.total(), x.range(), p).unwrap();
                    let my = measures::generalized_m(y.total(), y.range(), p).unwrap();
                    if mx < my {
                        prop_assert!(mx.powf(k) <= my.powf(k));
                    }
                }
            }
        }

        #[test]
        fn compare_symmetry(table in arb_table(), n in 1usize..5) {
            let ur = rank(&table, MeasureKind::UR);
            prop_assume!(ur.is_ok());
            let ur = ur.unwrap();
            let fr = rank(&table, MeasureKind::Frequency).unwrap();
            prop_assume!(ur.len() >= n);
            let ab = compare(&ur, &fr, n).unwrap();
            let ba = compare(&fr, &ur, n).unwrap();
            prop_assert_eq!(ab.common, ba.common);
            prop_assert_eq!(ab.jaccard, ba.jaccard);
            prop_assert_eq!(&ab.only_a, &ba.only_b);
            prop_assert_eq!(ab.common + ab.only_a.len(), n);
            prop_assert_eq!(ab.common + ab.only_b.len(), n);
        }

        #[test]
        fn pool_order_free(texts in prop::collection::vec("[a-e ]{0,30}", 2..5)) {
            let cfg = TokenizerConfig::default();
            let dicts: Vec<RankedDictionary> = texts
                .iter()
                .enumerate()
                .filter_map(|(i, t)| {
                    let table = build_table(&[(format!("d{i}"), t.as_str())], &cfg).unwrap();
                    rank(&table, MeasureKind::UR).ok()
                })
                .collect();
            prop_assume!(dicts.len() >= 2);
            let forward = pool_ur(&dicts).unwrap();
            let mut rev = dicts.clone();
            rev.reverse();
            prop_assert_eq!(&forward, &pool_ur(&rev).unwrap());
            let head = pool_ur(&dicts[..1]).unwrap();
            let tail = pool_ur(&dicts[1..]).unwrap();
            let grouped = pool_ur(&[head, tail]).unwrap();
            prop_assert_eq!(grouped.len(), forward.len());
            let by_word: BTreeMap<&str, f64> =
                grouped.entries.iter().map(|e| (e.word.as_str(), e.score)).collect();
            for f in &forward.entries {
                let g = by_word[f.word.as_str()];
                prop_assert!((g - f.score).abs() <= 1e-9 * f.score.abs());
            }
        }
    }
}
