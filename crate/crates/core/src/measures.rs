//! Word-usage measures and the special functions behind them.
//!
//! Everything here is a pure function of per-category frequency counts.
//! The family covers plain frequency and range, the generalized measure
//! `M = F^(1-a) * t^a`, Juilland's usage coefficient `U = F * D`, Carroll's
//! entropy-based `U_m`, and the harmonic usage measure `U_R`, which sums
//! `H(F_j) = psi(F_j + 1) + C` over categories.
//!
//! Juilland's `D` and Carroll's minimum value are reconstructions:
//!
//! * `D = 1 - V / sqrt(n - 1)` with `V` the population coefficient of
//!   variation of the counts.
//! * `U_m = D2 * F + (1 - D2) * f_min`, where `f_min = F * s_min / S` is the
//!   frequency the word would have in the smallest category alone
//!   (`F / n` for equal categories).
//!
//! Both reproduce the classic nine-word illustration to two decimals.
//!
//! `U_R` uses raw per-category counts, so it is sensitive to category sizes
//! when texts differ in length.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Euler's constant `C = -psi(1)`.
pub const EULER_C: f64 = 0.577_215_664_901_532_9;

/// Largest frequency for which [`harmonic_r`] sums the series term by term.
pub const EXACT_SUM_CUTOFF: u64 = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("generalized parameter a must lie in [0, 1], got {0}")]
    InvalidGeneralizedParam(f64),
    #[error("Stevens exponent must be finite and > 0, got {0}")]
    InvalidStevensExponent(f64),
    #[error("{measure} needs n >= 2 categories, got n = {n}")]
    TooFewCategories { measure: &'static str, n: usize },
    #[error("{0} is undefined for a word with zero total frequency")]
    ZeroTotal(&'static str),
    #[error("frequency {frequency} is smaller than range {range}")]
    FrequencyBelowRange { frequency: u64, range: u64 },
    #[error("range must be >= 1")]
    ZeroRange,
    #[error("asymptotic expansion needs F >= 1 (ln 0 is singular)")]
    ZeroFrequency,
    #[error("expected {expected} category sizes, got {got}")]
    SizeCountMismatch { expected: usize, got: usize },
    #[error("category {0} has size 0")]
    ZeroCategorySize(usize),
    #[error("stimulus must be a non-negative real, got {0}")]
    InvalidStimulus(f64),
    #[error("curve table needs max F >= 1")]
    EmptyCurve,
}

/// One word's per-category frequencies `F_1 .. F_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrequencyDistribution {
    word: String,
    counts: Vec<u64>,
}

impl FrequencyDistribution {
    pub fn new(word: impl Into<String>, counts: Vec<u64>) -> Self {
        Self {
            word: word.into(),
            counts,
        }
    }

    pub fn word(&self) -> &str {
        &self.word
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub(crate) fn counts_mut(&mut self) -> &mut Vec<u64> {
        &mut self.counts
    }

    /// Number of categories.
    pub fn n(&self) -> usize {
        self.counts.len()
    }

    /// Total frequency `F`.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Range `t`: categories with a non-zero count.
    pub fn range(&self) -> u64 {
        range_of(&self.counts)
    }
}

pub(crate) fn range_of(counts: &[u64]) -> u64 {
    counts.iter().filter(|&&c| c > 0).count() as u64
}

/// Exponent of the generalized measure; `a = 0` ranks by frequency,
/// `a = 1` by range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct GeneralizedParams {
    a: f64,
}

impl GeneralizedParams {
    pub fn new(a: f64) -> Result<Self, MeasureError> {
        if (0.0..=1.0).contains(&a) {
            Ok(Self { a })
        } else {
            Err(MeasureError::InvalidGeneralizedParam(a))
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
}

impl TryFrom<f64> for GeneralizedParams {
    type Error = MeasureError;

    fn try_from(a: f64) -> Result<Self, Self::Error> {
        Self::new(a)
    }
}

impl From<GeneralizedParams> for f64 {
    fn from(p: GeneralizedParams) -> f64 {
        p.a
    }
}

impl fmt::Display for GeneralizedParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.a)
    }
}

/// Parameters of the power law `R = scale * S^exponent + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StevensParams {
    scale: f64,
    offset: f64,
    exponent: f64,
}

impl StevensParams {
    pub fn new(scale: f64, offset: f64, exponent: f64) -> Result<Self, MeasureError> {
        if exponent.is_finite() && exponent > 0.0 {
            Ok(Self {
                scale,
                offset,
                exponent,
            })
        } else {
            Err(MeasureError::InvalidStevensExponent(exponent))
        }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }
}

impl Default for StevensParams {
    /// `a = 1, b = 0, n = 0.5`, i.e. `R = sqrt(S)`.
    fn default() -> Self {
        Self {
            scale: 1.0,
            offset: 0.0,
            exponent: 0.5,
        }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Sums `values` in ascending order with compensation, so the result
/// depends only on the multiset of inputs.
pub(crate) fn order_free_sum(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let mut acc = CompensatedSum::default();
    for &v in values.iter() {
        acc.add(v);
    }
    acc.value()
}

/// Reaction to a word seen `f` times: the harmonic number
/// `H_f = 1 + 1/2 + ... + 1/f = psi(f + 1) + C`, with `H_0 = 0`.
///
/// Summed exactly up to [`EXACT_SUM_CUTOFF`], asymptotic expansion beyond.
pub fn harmonic_r(f: u64) -> f64 {
    if f <= EXACT_SUM_CUTOFF {
        (1..=f).map(|k| 1.0 / k as f64).sum()
    } else {
        asymptotic(f as f64)
    }
}

/// `ln F + C + 1/(2F) - 1/(12F^2) + 1/(120F^4)`.
///
/// Coarse for small `F` (about 2e-3 off at `F = 1`); below 1e-13 absolute
/// error from `F = 64` upward.
pub fn harmonic_r_asymptotic(f: u64) -> Result<f64, MeasureError> {
    if f == 0 {
        return Err(MeasureError::ZeroFrequency);
    }
    Ok(asymptotic(f as f64))
}

fn asymptotic(f: f64) -> f64 {
    let inv = 1.0 / f;
    let inv2 = inv * inv;
    f.ln() + EULER_C + 0.5 * inv - inv2 / 12.0 + inv2 * inv2 / 120.0
}

/// Generalized usage measure `M = F^(1-a) * t^a`.
pub fn generalized_m(
    frequency: u64,
    range: u64,
    params: GeneralizedParams,
) -> Result<f64, MeasureError> {
    if range == 0 {
        return Err(MeasureError::ZeroRange);
    }
    if frequency < range {
        return Err(MeasureError::FrequencyBelowRange { frequency, range });
    }
    let a = params.a();
    Ok((frequency as f64).powf(1.0 - a) * (range as f64).powf(a))
}

fn dispersion_preconditions(measure: &'static str, counts: &[u64]) -> Result<u64, MeasureError> {
    if counts.len() < 2 {
        return Err(MeasureError::TooFewCategories {
            measure,
            n: counts.len(),
        });
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(MeasureError::ZeroTotal(measure));
    }
    Ok(total)
}

/// Juilland's dispersion coefficient `D = 1 - V / sqrt(n - 1)`.
///
/// `V` is the population standard deviation over the mean. Evaluated as
/// `1 - sqrt(S / (n (n - 1))) / F` with the integer `S = sum (n F_j - F)^2`.
pub fn juilland_d(counts: &[u64]) -> Result<f64, MeasureError> {
    let total = dispersion_preconditions("Juilland's D", counts)?;
    let range = range_of(counts);
    if range == 1 {
        return Ok(0.0);
    }
    if counts.iter().all(|&c| c == counts[0]) {
        return Ok(1.0);
    }
    let n = counts.len() as i128;
    let f = total as i128;
    let spread: i128 = counts
        .iter()
        .map(|&c| {
            let d = n * c as i128 - f;
            d * d
        })
        .sum();
    let v_ratio = ((spread as f64) / ((n * (n - 1)) as f64)).sqrt() / total as f64;
    Ok((1.0 - v_ratio).clamp(0.0, 1.0))
}

/// Juilland's usage coefficient `U = F * D`.
pub fn juilland_u(counts: &[u64]) -> Result<f64, MeasureError> {
    let d = juilland_d(counts)?;
    Ok(counts.iter().sum::<u64>() as f64 * d)
}

fn validate_sizes(counts: &[u64], sizes: Option<&[u64]>) -> Result<(), MeasureError> {
    if let Some(sizes) = sizes {
        if sizes.len() != counts.len() {
            return Err(MeasureError::SizeCountMismatch {
                expected: counts.len(),
                got: sizes.len(),
            });
        }
        if let Some(j) = sizes.iter().position(|&s| s == 0) {
            return Err(MeasureError::ZeroCategorySize(j));
        }
    }
    Ok(())
}

/// Proportional weights: raw counts for equal categories, `F_j / s_j` otherwise.
fn proportional_weights(counts: &[u64], sizes: Option<&[u64]>) -> Vec<f64> {
    match sizes {
        Some(sizes) if sizes.iter().any(|&s| s != sizes[0]) => counts
            .iter()
            .zip(sizes)
            .map(|(&c, &s)| c as f64 / s as f64)
            .collect(),
        _ => counts.iter().map(|&c| c as f64).collect(),
    }
}

fn d2_with_log(
    counts: &[u64],
    sizes: Option<&[u64]>,
    log: fn(f64) -> f64,
) -> Result<f64, MeasureError> {
    dispersion_preconditions("Carroll's D2", counts)?;
    validate_sizes(counts, sizes)?;
    if range_of(counts) == 1 {
        return Ok(0.0);
    }
    let weights = proportional_weights(counts, sizes);
    let mut norm = CompensatedSum::default();
    weights.iter().for_each(|&w| norm.add(w));
    let norm = norm.value();
    let mut entropy = CompensatedSum::default();
    for &w in weights.iter().filter(|&&w| w > 0.0) {
        let p = w / norm;
        entropy.add(-p * log(p));
    }
    let d2 = entropy.value() / log(counts.len() as f64);
    Ok(d2.clamp(0.0, 1.0))
}

/// Carroll's dispersion index `D2 = -sum p_j log p_j / log n`.
///
/// With `sizes` given and unequal, `p_j` is proportional to `F_j / s_j`.
pub fn carroll_d2(counts: &[u64], sizes: Option<&[u64]>) -> Result<f64, MeasureError> {
    d2_with_log(counts, sizes, f64::ln)
}

/// Carroll's usage coefficient `U_m = D2 * F + (1 - D2) * f_min`.
///
/// `f_min = F * min(s) / sum(s)`, which is `F / n` when sizes are absent or equal.
pub fn carroll_um(counts: &[u64], sizes: Option<&[u64]>) -> Result<f64, MeasureError> {
    let d2 = carroll_d2(counts, sizes)?;
    let total = counts.iter().sum::<u64>() as f64;
    let min_share = match sizes {
        Some(sizes) => {
            let smallest = *sizes.iter().min().expect("validated non-empty") as f64;
            smallest / sizes.iter().map(|&s| s as f64).sum::<f64>()
        }
        None => 1.0 / counts.len() as f64,
    };
    let f_min = total * min_share;
    Ok(d2 * total + (1.0 - d2) * f_min)
}

/// Harmonic usage measure `U_R = sum_j H(F_j)`.
///
/// Defined for any `n >= 0`; zero counts contribute nothing. The sum is
/// taken in ascending order so equal multisets of counts score identically.
pub fn ur_score(counts: &[u64]) -> f64 {
    let mut terms: Vec<f64> = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| harmonic_r(c))
        .collect();
    order_free_sum(&mut terms)
}

/// Power-law reaction `R = a * S^n + b`.
pub fn stevens_r(stimulus: f64, params: StevensParams) -> Result<f64, MeasureError> {
    if !stimulus.is_finite() || stimulus < 0.0 {
        return Err(MeasureError::InvalidStimulus(stimulus));
    }
    Ok(params.scale * stimulus.powf(params.exponent) + params.offset)
}

/// Logarithmic reaction `R = ln S + C` (scale 1, offset Euler's constant).
pub fn weber_fechner_r(stimulus: f64) -> Result<f64, MeasureError> {
    if !stimulus.is_finite() || stimulus <= 0.0 {
        return Err(MeasureError::InvalidStimulus(stimulus));
    }
    Ok(stimulus.ln() + EULER_C)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub f: u64,
    pub stevens: f64,
    pub harmonic: f64,
    pub weber_fechner: f64,
}

/// The three stimulus-response curves for `F = 1 ..= max_f`.
pub fn law_curves(max_f: u64) -> Result<Vec<CurveRow>, MeasureError> {
    if max_f == 0 {
        return Err(MeasureError::EmptyCurve);
    }
    let stevens = StevensParams::default();
    (1..=max_f)
        .map(|f| {
            let s = f as f64;
            Ok(CurveRow {
                f,
                stevens: stevens_r(s, stevens)?,
                harmonic: harmonic_r(f),
                weber_fechner: weber_fechner_r(s)?,
            })
        })
        .collect()
}
