//! Summarizing multi-annotator Likert ratings with a one-dimensional graph
//! embedding.
//!
//! Every annotator contributes an equality graph over the datapoints (two
//! datapoints are linked when the annotator gave them the same nonzero
//! rating). The graphs are averaged into a Laplacian, and the datapoints are
//! projected onto the direction in annotator space that keeps linked
//! datapoints close, normalized by node degree. The result is compared with
//! the plain mean rating.
//!
//! ```
//! use likert_lpp::{denoise_pipeline, AnnotationMatrix, PipelineOptions};
//!
//! let x = AnnotationMatrix::from_rows(&[vec![1, 1, 2], vec![1, 2, 2]], 3).unwrap();
//! let result = denoise_pipeline(&x, &PipelineOptions::default()).unwrap();
//! assert_eq!(result.ranks, vec![1, 2, 3]);
//! ```

pub mod baseline;
pub mod data;
pub mod embedding;
pub mod graph;
pub mod linalg;
pub mod synthetic;

pub use ndarray;

pub use baseline::{
    discrimination, evaluate, mean_baseline, pearson, spearman, BaselineScores, ComparisonReport, Discrimination,
    EvalError, PerMethod,
};
pub use data::{AnnotationMatrix, DataError};
pub use embedding::{
    denoise_pipeline, laplacian_pair, postprocess, project, project_direction, solve_embedding, DenoisedResult,
    Embedding, EmbeddingError, EmbeddingOptions, FlipMode, ParseOptionError, PipelineOptions, Ridge, Selection,
};
pub use graph::{
    average_graphs, build_annotator_graph, graph_stats, AnnotatorGraph, GraphError, GraphStats, LaplacianPair,
};
pub use linalg::{cholesky, generalized_eigen, jacobi_eigen, sandwich, EigenPair, LinalgError, SymMatrix};
pub use synthetic::{generate_synthetic, SpecError, Synthetic, SyntheticSpec};
