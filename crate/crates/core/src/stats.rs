//! Small statistics helpers: sample moments and a pooled chi-square
//! goodness-of-fit test.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Cells whose expected count falls below this are pooled.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Cells entering the statistic after pooling.
    pub cells: usize,
    /// Raw cells merged into the pooled cell.
    pub pooled: usize,
    pub samples: u64,
}

/// Pearson chi-square test of `observed` counts against cell probabilities
/// `probs` (which should sum to 1).
///
/// Cells are taken in increasing order of expected count and merged into a
/// single pool until the pool reaches [`MIN_EXPECTED`]; if the pool is still
/// short once every sparse cell is in it, the smallest remaining cell is
/// absorbed as well.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> Result<ChiSquareReport> {
    if observed.len() != probs.len() {
        return Err(Error::Degenerate(format!(
            "{} observed cells vs {} probabilities",
            observed.len(),
            probs.len()
        )));
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::Degenerate("no samples".into()));
    }
    let n = total as f64;
    let mut cells: Vec<(f64, f64)> = observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| (p * n, o as f64))
        .collect();
    if let Some(&(_, o)) = cells.iter().find(|(e, o)| *e <= 0.0 && *o > 0.0) {
        return Err(Error::UnexpectedOutcome(format!("{o} hits in a zero-probability cell")));
    }
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut pool = (0.0, 0.0);
    let mut pooled = 0;
    let mut it = cells.into_iter().peekable();
    while let Some(&(e, _)) = it.peek() {
        if e >= MIN_EXPECTED && (pooled == 0 || pool.0 >= MIN_EXPECTED) {
            break;
        }
        let (e, o) = it.next().unwrap();
        pool.0 += e;
        pool.1 += o;
        pooled += 1;
    }
    let mut kept: Vec<(f64, f64)> = it.collect();
    if pooled > 0 {
        kept.push(pool);
    }
    if kept.len() < 2 {
        return Err(Error::Degenerate(format!(
            "only {} cell(s) left after pooling",
            kept.len()
        )));
    }
    let statistic: f64 = kept.iter().map(|(e, o)| (o - e).powi(2) / e).sum();
    let dof = kept.len() - 1;
    let p_value = ChiSquared::new(dof as f64)
        .expect("dof is positive")
        .sf(statistic);
    Ok(ChiSquareReport {
        statistic,
        dof,
        p_value,
        cells: kept.len(),
        pooled,
        samples: total,
    })
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
