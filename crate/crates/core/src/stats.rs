//! Summary statistics and goodness-of-fit tests.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, Result};

/// Sample mean with the standard error of the mean.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

pub fn mean_se(values: &[f64]) -> MeanEstimate {
    let n = values.len();
    if n == 0 {
        return MeanEstimate { mean: f64::NAN, std_error: f64::NAN, n };
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = if n > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    MeanEstimate { mean, std_error: (var / n as f64).sqrt(), n }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TestResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

fn chi_square_p(statistic: f64, dof: usize) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    ChiSquared::new(dof as f64).expect("positive dof").sf(statistic)
}

/// Expected count below which cells are pooled.
const MIN_EXPECTED: f64 = 5.0;

/// Pearson goodness-of-fit of `observed` counts against cell probabilities.
/// Cells with expected count below 5 are pooled into one cell; cells of zero
/// probability must be empty.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> Result<TestResult> {
    if observed.len() != probs.len() {
        return invalid("observed and probability vectors differ in length");
    }
    let n: u64 = observed.iter().sum();
    if n == 0 {
        return invalid("no observations");
    }
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut pooled = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        let e = p * n as f64;
        if p <= 0.0 {
            if o > 0 {
                return Ok(TestResult { statistic: f64::INFINITY, dof: 1, p_value: 0.0 });
            }
            continue;
        }
        if e < MIN_EXPECTED {
            pooled.0 += o as f64;
            pooled.1 += e;
        } else {
            cells.push((o as f64, e));
        }
    }
    if pooled.1 > 0.0 {
        if pooled.1 < MIN_EXPECTED && !cells.is_empty() {
            let (i, _) = cells
                .iter()
                .enumerate()
                .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
                .expect("nonempty");
            cells[i].0 += pooled.0;
            cells[i].1 += pooled.1;
        } else {
            cells.push(pooled);
        }
    }
    let statistic: f64 = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = cells.len().saturating_sub(1);
    Ok(TestResult { statistic, dof, p_value: chi_square_p(statistic, dof) })
}

/// Pearson chi-square test that two samples of categorical counts come from
/// the same distribution. Categories whose combined count is below 10 are pooled.
pub fn chi_square_homogeneity(a: &[u64], b: &[u64]) -> Result<TestResult> {
    if a.len() != b.len() {
        return invalid("count vectors differ in length");
    }
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    if na == 0 || nb == 0 {
        return invalid("both samples need observations");
    }
    let mut cols: Vec<(f64, f64)> = Vec::new();
    let mut pooled = (0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        if x + y < 10 {
            pooled.0 += x as f64;
            pooled.1 += y as f64;
        } else {
            cols.push((x as f64, y as f64));
        }
    }
    if pooled.0 + pooled.1 > 0.0 {
        cols.push(pooled);
    }
    let (na, nb) = (na as f64, nb as f64);
    let n = na + nb;
    let statistic: f64 = cols
        .iter()
        .map(|&(x, y)| {
            let t = x + y;
            let ea = t * na / n;
            let eb = t * nb / n;
            (x - ea).powi(2) / ea + (y - eb).powi(2) / eb
        })
        .sum();
    let dof = cols.len().saturating_sub(1);
    Ok(TestResult { statistic, dof, p_value: chi_square_p(statistic, dof) })
}

/// Bowker's test of symmetry of a square contingency table built from paired
/// observations `(a, b)`: tests `P(a = i, b = j) = P(a = j, b = i)`.
/// Pairs of cells with fewer than 10 observations in total are pooled.
pub fn bowker_symmetry(pairs: &[(usize, usize)]) -> TestResult {
    use std::collections::BTreeMap;
    let mut table: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for &(a, b) in pairs {
        *table.entry((a, b)).or_default() += 1;
    }
    let mut statistic = 0.0;
    let mut dof = 0;
    let mut pooled = (0.0, 0.0);
    for (&(i, j), &nij) in &table {
        if i >= j {
            if i > j && !table.contains_key(&(j, i)) {
                pooled.1 += nij as f64;
            }
            continue;
        }
        let nji = table.get(&(j, i)).copied().unwrap_or(0);
        let (x, y) = (nij as f64, nji as f64);
        if x + y < 10.0 {
            pooled.0 += x;
            pooled.1 += y;
        } else {
            statistic += (x - y).powi(2) / (x + y);
            dof += 1;
        }
    }
    if pooled.0 + pooled.1 > 0.0 {
        statistic += (pooled.0 - pooled.1).powi(2) / (pooled.0 + pooled.1);
        dof += 1;
    }
    TestResult { statistic, dof, p_value: chi_square_p(statistic, dof) }
}

/// Two-sided z-test that two independent estimates agree.
pub fn z_score(a: f64, se_a: f64, b: f64, se_b: f64) -> f64 {
    (a - b) / (se_a * se_a + se_b * se_b).sqrt()
}
