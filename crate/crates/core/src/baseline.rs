//! The mean-rating baseline and the metrics used to compare it with the
//! graph embedding: rank correlation, tie structure, recovery of a known
//! ground truth.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{AnnotationMatrix, MISSING};
use crate::embedding::DenoisedResult;

/// Projections closer than this are treated as tied.
pub const DENOISED_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("datapoints with no ratings at all: {}", .0.join(", "))]
    AllMissingColumn(Vec<String>),
    #[error("correlation undefined: {0} has zero variance")]
    ZeroVariance(&'static str),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least 2 values, got {0}")]
    TooShort(usize),
    #[error("non-finite value in input")]
    NonFinite,
}

/// Per-datapoint mean over the ratings actually given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineScores {
    pub means: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Column means over nonzero entries. Fails if any datapoint has no ratings.
pub fn mean_baseline(matrix: &AnnotationMatrix) -> Result<BaselineScores, EvalError> {
    let n = matrix.n_datapoints();
    let mut means = Vec::with_capacity(n);
    let mut counts = Vec::with_capacity(n);
    let mut empty = Vec::new();
    for (j, col) in matrix.ratings().columns().into_iter().enumerate() {
        let (sum, count) = col
            .iter()
            .filter(|&&r| r != MISSING)
            .fold((0u64, 0usize), |(s, c), &r| (s + u64::from(r), c + 1));
        if count == 0 {
            empty.push(matrix.datapoint_ids()[j].clone());
            means.push(0.0);
        } else {
            means.push(sum as f64 / count as f64);
        }
        counts.push(count);
    }
    if !empty.is_empty() {
        return Err(EvalError::AllMissingColumn(empty));
    }
    Ok(BaselineScores { means, counts })
}

/// 1-based ranks with ties sharing their average rank.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && x[order[end]] == x[order[start]] {
            end += 1;
        }
        let avg = (start + end + 1) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = avg;
        }
        start = end;
    }
    ranks
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<(), EvalError> {
    if x.len() != y.len() {
        return Err(EvalError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(EvalError::TooShort(x.len()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(EvalError::NonFinite);
    }
    Ok(())
}

fn centered_products(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    (sxy, sxx, syy)
}

/// Pearson correlation; `ZeroVariance` if either side is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, EvalError> {
    check_pair(x, y)?;
    let (sxy, sxx, syy) = centered_products(x, y);
    if sxx == 0.0 {
        return Err(EvalError::ZeroVariance("first vector"));
    }
    if syy == 0.0 {
        return Err(EvalError::ZeroVariance("second vector"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Spearman rank correlation with average-rank tie handling.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64, EvalError> {
    check_pair(x, y)?;
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Tie structure of a score vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrimination {
    pub distinct_count: usize,
    /// group size -> number of groups of that size
    pub tie_histogram: BTreeMap<usize, usize>,
}

/// Groups sorted scores by single linkage: neighbours at most `tolerance`
/// apart share a group.
pub fn discrimination(scores: &[f64], tolerance: f64) -> Discrimination {
    let tolerance = tolerance.max(0.0);
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_histogram = BTreeMap::new();
    let mut distinct_count = 0;
    let mut size = 0;
    for (k, &s) in sorted.iter().enumerate() {
        if k > 0 && s - sorted[k - 1] > tolerance {
            *tie_histogram.entry(size).or_insert(0) += 1;
            distinct_count += 1;
            size = 0;
        }
        size += 1;
    }
    if size > 0 {
        *tie_histogram.entry(size).or_insert(0) += 1;
        distinct_count += 1;
    }
    Discrimination {
        distinct_count,
        tie_histogram,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerMethod<T> {
    pub mean: T,
    pub denoised: T,
}

/// Mean baseline versus denoised scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub n_annotators: usize,
    pub n_datapoints: usize,
    pub spearman_mean_vs_denoised: f64,
    pub distinct_values: PerMethod<usize>,
    pub tie_histograms: PerMethod<BTreeMap<usize, usize>>,
    /// Spearman of each method against the ground truth, when one is known.
    pub vs_truth: Option<PerMethod<f64>>,
}

/// Compares `result`'s presentation scores with the mean baseline of `matrix`.
pub fn evaluate(
    matrix: &AnnotationMatrix,
    result: &DenoisedResult,
    truth: Option<&[f64]>,
) -> Result<ComparisonReport, EvalError> {
    let base = mean_baseline(matrix)?;
    let denoised = &result.presentation_scores;
    let spearman_mean_vs_denoised = spearman(&base.means, denoised)?;
    let mean_d = discrimination(&base.means, 0.0);
    let den_d = discrimination(denoised, DENOISED_TIE_TOL);
    let vs_truth = match truth {
        Some(t) => Some(PerMethod {
            mean: spearman(&base.means, t)?,
            denoised: spearman(denoised, t)?,
        }),
        None => None,
    };
    Ok(ComparisonReport {
        n_annotators: matrix.n_annotators(),
        n_datapoints: matrix.n_datapoints(),
        spearman_mean_vs_denoised,
        distinct_values: PerMethod {
            mean: mean_d.distinct_count,
            denoised: den_d.distinct_count,
        },
        tie_histograms: PerMethod {
            mean: mean_d.tie_histogram,
            denoised: den_d.tie_histogram,
        },
        vs_truth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn means_skip_missing() {
        let m = AnnotationMatrix::from_rows(&[vec![1, 2], vec![0, 2], vec![3, 2]], 3).unwrap();
        let b = mean_baseline(&m).unwrap();
        assert_eq!(b.means, vec![2.0, 2.0]);
        assert_eq!(b.counts, vec![2, 3]);
    }

    #[test]
    fn toy_means() {
        let m = AnnotationMatrix::from_rows(&[vec![1, 1, 2], vec![1, 2, 2]], 3).unwrap();
        let b = mean_baseline(&m).unwrap();
        assert_eq!(b.means, vec![1.0, 1.5, 2.0]);
        assert_eq!(b.counts, vec![2, 2, 2]);
    }

    #[test]
    fn all_missing_column_is_named() {
        let m = AnnotationMatrix::from_rows(&[vec![0, 1, 0], vec![0, 2, 0]], 3).unwrap();
        assert_eq!(
            mean_baseline(&m),
            Err(EvalError::AllMissingColumn(vec!["d1".into(), "d3".into()]))
        );
    }

    // Oracle: textbook 1 − 6Σd²/(n(n²−1)), valid without ties.
    fn spearman_no_ties(x: &[f64], y: &[f64]) -> f64 {
        let rank = |v: &[f64]| -> Vec<f64> {
            v.iter()
                .map(|a| 1.0 + v.iter().filter(|b| *b < a).count() as f64)
                .collect()
        };
        let (rx, ry) = (rank(x), rank(y));
        let n = x.len() as f64;
        let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b) * (a - b)).sum();
        1.0 - 6.0 * d2 / (n * (n * n - 1.0))
    }

    #[test]
    fn spearman_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_abs_diff_eq!(spearman(&x, &x).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(spearman(&x, &[4.0, 3.0, 2.0, 1.0]).unwrap(), -1.0, epsilon = 1e-15);
        let y = [1.0, 3.0, 2.0, 4.0];
        assert_abs_diff_eq!(spearman_no_ties(&x, &y), 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(spearman(&x, &y).unwrap(), 0.8, epsilon = 1e-12);
        assert!(matches!(spearman(&x, &[2.0; 4]), Err(EvalError::ZeroVariance(_))));
        assert!(matches!(spearman(&x, &[1.0]), Err(EvalError::LengthMismatch { .. })));
        assert!(matches!(spearman(&[1.0], &[1.0]), Err(EvalError::TooShort(1))));
    }

    #[test]
    fn average_ranks_share_ties() {
        assert_eq!(average_ranks(&[10.0, 20.0, 10.0, 5.0]), vec![2.5, 4.0, 2.5, 1.0]);
    }

    #[test]
    fn discrimination_examples() {
        let d = discrimination(&[1.0, 1.0, 2.0], 0.0);
        assert_eq!(d.distinct_count, 2);
        assert_eq!(d.tie_histogram, BTreeMap::from([(1, 1), (2, 1)]));
        assert_eq!(discrimination(&[3.0, 1.0, 2.0, 5.0], 0.0).distinct_count, 4);
        // chaining: 1.0 ~ 1.4 ~ 1.8 even though 1.0 and 1.8 are 0.8 apart
        assert_eq!(discrimination(&[1.0, 1.4, 1.8, 3.0], 0.5).distinct_count, 2);
        assert_eq!(discrimination(&[], 0.0).distinct_count, 0);
    }

    proptest! {
        #[test]
        fn spearman_invariant_under_monotone_maps(
            x in prop::collection::vec(-100.0f64..100.0, 3..30),
            shift in -5.0f64..5.0,
            scale in 0.1f64..10.0,
        ) {
            let y: Vec<f64> = x.iter().rev().map(|v| v.sin() * 7.0).collect();
            let fx: Vec<f64> = x.iter().map(|v| (v * scale + shift).powi(3)).collect();
            let gy: Vec<f64> = y.iter().map(|v| v.exp()).collect();
            match (spearman(&x, &y), spearman(&fx, &gy)) {
                (Ok(a), Ok(b)) => prop_assert!((a - b).abs() <= 1e-12),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
            }
        }

        #[test]
        fn distinct_count_nonincreasing_in_tolerance(
            x in prop::collection::vec(0.0f64..10.0, 1..40),
            t1 in 0.0f64..2.0,
            dt in 0.0f64..2.0,
        ) {
            let a = discrimination(&x, t1);
            let b = discrimination(&x, t1 + dt);
            prop_assert!(b.distinct_count <= a.distinct_count);
            let total: usize = a.tie_histogram.iter().map(|(s, c)| s * c).sum();
            prop_assert_eq!(total, x.len());
        }

        #[test]
        fn baseline_row_invariant_column_equivariant(
            rows in prop::collection::vec(prop::collection::vec(1u32..=7, 6), 1..6),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let m = AnnotationMatrix::from_rows(&rows, 7).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut rp: Vec<usize> = (0..m.n_annotators()).collect();
            rp.shuffle(&mut rng);
            let mut cp: Vec<usize> = (0..6).collect();
            cp.shuffle(&mut rng);
            let base = mean_baseline(&m).unwrap();
            prop_assert_eq!(&mean_baseline(&m.select_annotators(&rp).unwrap()).unwrap(), &base);
            let permuted = mean_baseline(&m.select_datapoints(&cp).unwrap()).unwrap();
            for (k, &j) in cp.iter().enumerate() {
                prop_assert_eq!(permuted.means[k], base.means[j]);
            }
        }
    }
}
