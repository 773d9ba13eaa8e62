//! The nine-word, five-category illustration from Juilland and Carroll,
//! scored under `U`, `U_m` and `U_R`.

use std::fmt::Write;

use serde::Serialize;

use crate::corpus::{CorpusTable, TokenizerConfig};
use crate::measures::{self, MeasureError};

pub const CATEGORIES: [&str; 5] = ["A", "B", "C", "D", "E"];

/// Frequencies by category for words 1 through 9.
pub const ROWS: [[u64; 5]; 9] = [
    [1, 1, 1, 1, 1],
    [2, 1, 1, 1, 0],
    [2, 2, 1, 0, 0],
    [3, 1, 1, 0, 0],
    [3, 2, 0, 0, 0],
    [4, 1, 0, 0, 0],
    [5, 0, 0, 0, 0],
    [0, 0, 3, 3, 4],
    [1, 1, 1, 1, 6],
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoRow {
    pub word: String,
    pub counts: Vec<u64>,
    pub total: u64,
    pub u: f64,
    pub u_m: f64,
    pub u_r: f64,
}

/// The rows as a corpus table with words named `"1"` .. `"9"`.
pub fn table() -> CorpusTable {
    CorpusTable::from_counts(
        CATEGORIES.iter().map(|c| c.to_string()).collect(),
        ROWS.iter()
            .enumerate()
            .map(|(i, r)| ((i + 1).to_string(), r.to_vec())),
        TokenizerConfig::default(),
    )
    .expect("built-in rows are valid")
}

/// Scores every row; categories are taken as equally sized.
pub fn rows() -> Result<Vec<DemoRow>, MeasureError> {
    ROWS.iter()
        .enumerate()
        .map(|(i, counts)| {
            Ok(DemoRow {
                word: (i + 1).to_string(),
                counts: counts.to_vec(),
                total: counts.iter().sum(),
                u: measures::juilland_u(counts)?,
                u_m: measures::carroll_um(counts, None)?,
                u_r: measures::ur_score(counts),
            })
        })
        .collect()
}

/// Rounds half away from zero to `decimals` places.
pub fn round_half_away(x: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    (x * scale).round() / scale
}

fn fixed2(x: f64) -> String {
    format!("{:.2}", round_half_away(x, 2))
}

/// Tab-separated table with two-decimal scores.
pub fn render(rows: &[DemoRow]) -> String {
    let mut out = String::from("word");
    for c in CATEGORIES {
        out.push('\t');
        out.push_str(c);
    }
    out.push_str("\ttotal\tU\tU_m\tU_R\n");
    for row in rows {
        out.push_str(&row.word);
        for c in &row.counts {
            write!(out, "\t{c}").unwrap();
        }
        writeln!(
            out,
            "\t{}\t{}\t{}\t{}",
            row.total,
            fixed2(row.u),
            fixed2(row.u_m),
            fixed2(row.u_r)
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_half_away(1.125, 2), 1.13);
        assert_eq!(round_half_away(-1.125, 2), -1.13);
        assert_eq!(round_half_away(2.2833, 2), 2.28);
        assert_eq!(fixed2(5.0), "5.00");
    }

    #[test]
    fn rendered_rows() {
        let text = render(&rows().unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[0], "word\tA\tB\tC\tD\tE\ttotal\tU\tU_m\tU_R");
        assert_eq!(lines[4], "4\t3\t1\t1\t0\t0\t5\t2.26\t3.36\t3.83");
        assert_eq!(lines[6], "6\t4\t1\t0\t0\t0\t5\t1.13\t2.24\t3.08");
    }

    #[test]
    fn table_shape() {
        let t = table();
        assert_eq!(t.n_categories(), 5);
        assert_eq!(t.vocabulary_size(), 9);
        assert_eq!(t.total_tokens(), 55);
    }
}
