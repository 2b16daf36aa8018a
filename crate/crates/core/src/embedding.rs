//! One-dimensional locality preserving projection of the datapoints.
//!
//! With `X` the `m x n` rating matrix and `L`, `D` from the averaged
//! annotator graphs, the direction `a` minimizes `aᵀ X L Xᵀ a` subject to
//! `aᵀ X D Xᵀ a = 1`. Its stationarity condition is the pencil
//! `X L Xᵀ a = λ X D Xᵀ a`; the minimizer is the eigenvector of smallest `λ`,
//! and datapoint `j` is scored by `y_j = aᵀ X_{:j}`.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, ArrayView2};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baseline::{mean_baseline, pearson, BaselineScores, EvalError};
use crate::data::AnnotationMatrix;
use crate::graph::{average_graphs, build_all_graphs, GraphError, LaplacianPair};
use crate::linalg::{generalized_eigen, sandwich, LinalgError, SymMatrix};

/// Relative spread below which a projection counts as constant.
pub const TRIVIAL_SPREAD: f64 = 1e-8;
/// Default ridge is this fraction of the mean diagonal of `X D Xᵀ`.
pub const AUTO_RIDGE_FACTOR: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("degenerate problem: {0}")]
    DegenerateProblem(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Baseline(#[from] EvalError),
}

#[derive(Debug, Error)]
#[error("unrecognized value `{0}`")]
pub struct ParseOptionError(String);

/// Which generalized eigenpair becomes the embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    /// Smallest eigenvalue, whatever its projection looks like.
    #[default]
    Paper,
    /// Smallest eigenvalue whose projection is not (near-)constant.
    SkipTrivial,
}

impl FromStr for Selection {
    type Err = ParseOptionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Self::Paper),
            "skip-trivial" | "skip_trivial" => Ok(Self::SkipTrivial),
            _ => Err(ParseOptionError(s.into())),
        }
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Paper => "paper",
            Self::SkipTrivial => "skip-trivial",
        })
    }
}

/// Regularization applied when `X D Xᵀ` is not positive definite.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Ridge {
    /// `ε = 1e-10 · trace(B) / m`
    #[default]
    Auto,
    Fixed(f64),
    Off,
}

impl FromStr for Ridge {
    type Err = ParseOptionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Self::Auto),
            "off" => Ok(Self::Off),
            _ => match s.parse::<f64>() {
                Ok(e) if e.is_finite() && e >= 0.0 => Ok(Self::Fixed(e)),
                _ => Err(ParseOptionError(s.into())),
            },
        }
    }
}

impl fmt::Display for Ridge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Auto => f.write_str("auto"),
            Self::Off => f.write_str("off"),
            Self::Fixed(e) => write!(f, "{e}"),
        }
    }
}

/// Orientation of the final scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlipMode {
    /// Negate when the projection correlates negatively with the mean ratings.
    #[default]
    Auto,
    On,
    Off,
}

impl FromStr for FlipMode {
    type Err = ParseOptionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Self::Auto),
            "on" => Ok(Self::On),
            "off" => Ok(Self::Off),
            _ => Err(ParseOptionError(s.into())),
        }
    }
}

impl fmt::Display for FlipMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Auto => "auto",
            Self::On => "on",
            Self::Off => "off",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EmbeddingOptions {
    pub selection: Selection,
    pub ridge: Ridge,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PipelineOptions {
    pub embedding: EmbeddingOptions,
    pub flip: FlipMode,
}

/// How the eigenpair was chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRecord {
    pub mode: Selection,
    /// Position of the chosen pair in ascending eigenvalue order.
    pub index: usize,
    /// Whether lower pairs were passed over for having constant projections.
    pub skipped_trivial: bool,
    /// Whether the chosen pair itself has a constant projection.
    pub chosen_trivial: bool,
    /// Ridge added to the constraint matrix, 0 if none.
    pub ridge_epsilon: f64,
}

/// Projection direction with its certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub direction: Vec<f64>,
    pub eigenvalue: f64,
    /// `aᵀ X L Xᵀ a`
    pub objective: f64,
    /// `|aᵀ B a − 1|` for the (possibly ridged) constraint matrix `B` that was solved.
    pub constraint_residual: f64,
    pub selection: SelectionRecord,
}

/// Builds the averaged Laplacian pair of `matrix`.
pub fn laplacian_pair(matrix: &AnnotationMatrix) -> Result<LaplacianPair, GraphError> {
    average_graphs(&build_all_graphs(matrix))
}

/// Solves for the embedding direction of `matrix` under `pair`.
pub fn solve_embedding(
    matrix: &AnnotationMatrix,
    pair: &LaplacianPair,
    options: &EmbeddingOptions,
) -> Result<Embedding, EmbeddingError> {
    if pair.n_nodes() != matrix.n_datapoints() {
        return Err(EmbeddingError::DimensionMismatch(format!(
            "Laplacian has {} nodes, matrix has {} datapoints",
            pair.n_nodes(),
            matrix.n_datapoints()
        )));
    }
    let x = matrix.to_f64();
    let m_mat = sandwich(pair.laplacian(), x.view())?;
    let b_mat = sandwich(pair.degree_matrix().view(), x.view())?;
    solve_pencil(x.view(), &m_mat, &b_mat, options)
}

/// Eigenpair selection and normalization for an already assembled pencil
/// `M a = λ B a` over data `x`.
pub fn solve_pencil(
    x: ArrayView2<'_, f64>,
    m_mat: &SymMatrix,
    b_mat: &SymMatrix,
    options: &EmbeddingOptions,
) -> Result<Embedding, EmbeddingError> {
    if m_mat.order() != x.nrows() || b_mat.order() != x.nrows() {
        return Err(EmbeddingError::DimensionMismatch(format!(
            "pencil order {}/{} vs {} annotators",
            m_mat.order(),
            b_mat.order(),
            x.nrows()
        )));
    }
    let (pairs, eps, b_eff) = match generalized_eigen(m_mat, b_mat) {
        Ok(p) => (p, 0.0, b_mat.clone()),
        Err(LinalgError::NotPositiveDefinite { .. }) if options.ridge != Ridge::Off => {
            let eps = match options.ridge {
                Ridge::Fixed(e) => e,
                _ => AUTO_RIDGE_FACTOR * b_mat.trace() / b_mat.order() as f64,
            };
            if eps.is_nan() || eps <= 0.0 {
                return Err(EmbeddingError::DegenerateProblem(
                    "constraint matrix X D Xᵀ vanishes (no annotator graph has an edge)".into(),
                ));
            }
            let ridged = b_mat.with_ridge(eps);
            (generalized_eigen(m_mat, &ridged)?, eps, ridged)
        }
        Err(e) => return Err(e.into()),
    };

    let max_col_norm = x
        .columns()
        .into_iter()
        .map(|c| c.dot(&c).sqrt())
        .fold(0.0_f64, f64::max);
    let trivial: Vec<bool> = pairs
        .iter()
        .map(|p| is_trivial_projection(&p.vector, &x.t().dot(&p.vector), max_col_norm))
        .collect();
    if trivial.iter().all(|&t| t) {
        return Err(EmbeddingError::DegenerateProblem(
            "every eigenvector projects the datapoints to a constant".into(),
        ));
    }
    let index = match options.selection {
        Selection::Paper => 0,
        Selection::SkipTrivial => trivial.iter().position(|&t| !t).expect("checked above"),
    };

    let mut a = pairs[index].vector.clone();
    let norm = b_eff.quad_form(a.view());
    a.mapv_inplace(|v| v / norm.sqrt());
    let constraint_residual = (b_eff.quad_form(a.view()) - 1.0).abs();
    Ok(Embedding {
        objective: m_mat.quad_form(a.view()),
        direction: a.to_vec(),
        eigenvalue: pairs[index].value,
        constraint_residual,
        selection: SelectionRecord {
            mode: options.selection,
            index,
            skipped_trivial: index > 0 && trivial[..index].iter().any(|&t| t),
            chosen_trivial: trivial[index],
            ridge_epsilon: eps,
        },
    })
}

// |y_j| ≤ ‖a‖·‖X_{:j}‖, so the spread of y is measured against that bound
// rather than against mean(y), which can itself be roundoff.
fn is_trivial_projection(a: &Array1<f64>, y: &Array1<f64>, max_col_norm: f64) -> bool {
    let bound = a.dot(a).sqrt() * max_col_norm;
    let n = y.len() as f64;
    let mean = y.sum() / n;
    let spread = (y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
    bound.is_nan() || bound <= 0.0 || spread <= TRIVIAL_SPREAD * bound
}

/// `y_j = aᵀ X_{:j}` for every datapoint.
pub fn project(matrix: &AnnotationMatrix, embedding: &Embedding) -> Result<Vec<f64>, EmbeddingError> {
    project_direction(matrix, &embedding.direction)
}

pub fn project_direction(matrix: &AnnotationMatrix, direction: &[f64]) -> Result<Vec<f64>, EmbeddingError> {
    if direction.len() != matrix.n_annotators() {
        return Err(EmbeddingError::DimensionMismatch(format!(
            "direction has {} entries, matrix has {} annotators",
            direction.len(),
            matrix.n_annotators()
        )));
    }
    let ratings = matrix.ratings();
    Ok(ratings
        .columns()
        .into_iter()
        .map(|col| {
            let mut s = 0.0;
            for (a, &r) in direction.iter().zip(col) {
                s += a * f64::from(r);
            }
            s
        })
        .collect())
}

/// Orientation, Likert-scale rescaling and ranks for a projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Postprocessed {
    pub flipped: bool,
    pub presentation_scores: Vec<f64>,
    pub ranks: Vec<usize>,
}

/// Orients `y` (negating under `On`, or under `Auto` when its Pearson
/// correlation with `baseline` is negative) and maps it affinely onto
/// `[1, K]`. A constant `y` maps to the midpoint. Rank 1 is the lowest
/// score; ties go to the lower index.
pub fn postprocess(y: &[f64], scale_max: u32, flip: FlipMode, baseline: &[f64]) -> Postprocessed {
    let flipped = match flip {
        FlipMode::On => true,
        FlipMode::Off => false,
        FlipMode::Auto => pearson(y, baseline).is_ok_and(|r| r < 0.0),
    };
    let oriented: Vec<f64> = if flipped {
        y.iter().map(|v| -v).collect()
    } else {
        y.to_vec()
    };
    let k = f64::from(scale_max);
    let lo = oriented.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = oriented.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let magnitude = lo.abs().max(hi.abs());
    let range = hi - lo;
    let presentation_scores: Vec<f64> = if range.is_nan() || range <= 1e-12 * magnitude {
        vec![(1.0 + k) / 2.0; y.len()]
    } else {
        oriented.iter().map(|v| 1.0 + (k - 1.0) * (v - lo) / range).collect()
    };
    let ranks = ascending_ranks(&presentation_scores);
    Postprocessed {
        flipped,
        presentation_scores,
        ranks,
    }
}

fn ascending_ranks(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    let mut ranks = vec![0; scores.len()];
    for (pos, &idx) in order.iter().enumerate() {
        ranks[idx] = pos + 1;
    }
    ranks
}

/// Full output of the pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenoisedResult {
    pub raw_scores: Vec<f64>,
    pub flipped: bool,
    pub presentation_scores: Vec<f64>,
    pub ranks: Vec<usize>,
    pub embedding: Embedding,
    pub baseline: BaselineScores,
    pub scale_max: u32,
}

/// Graphs, averaging, eigen-solve, projection and post-processing in one call.
pub fn denoise_pipeline(
    matrix: &AnnotationMatrix,
    options: &PipelineOptions,
) -> Result<DenoisedResult, EmbeddingError> {
    let baseline = mean_baseline(matrix)?;
    let pair = laplacian_pair(matrix)?;
    let embedding = solve_embedding(matrix, &pair, &options.embedding)?;
    let raw_scores = project(matrix, &embedding)?;
    let post = postprocess(&raw_scores, matrix.scale_max(), options.flip, &baseline.means);
    Ok(DenoisedResult {
        raw_scores,
        flipped: post.flipped,
        presentation_scores: post.presentation_scores,
        ranks: post.ranks,
        embedding,
        baseline,
        scale_max: matrix.scale_max(),
    })
}
