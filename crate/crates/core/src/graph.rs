//! Per-annotator equality graphs and their averaged Laplacian.
//!
//! Two datapoints are adjacent in annotator `m`'s graph exactly when `m` gave
//! both the same nonzero rating. Averaging over all annotators (empty graphs
//! included) yields `A_avg`, its row sums `D_avg`, and `L = D_avg − A_avg`.

use ndarray::{Array1, Array2, ArrayView2};
use petgraph::graph::UnGraph;
use serde::Serialize;
use thiserror::Error;

use crate::data::{AnnotationMatrix, MISSING};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("annotator index {index} out of range ({len} annotators)")]
    AnnotatorOutOfRange { index: usize, len: usize },
    #[error("cannot average an empty list of graphs")]
    NoGraphs,
    #[error("graph {index} has {found} nodes, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
}

/// Equality graph of one annotator: a disjoint union of cliques, one per
/// distinct nonzero rating value.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatorGraph {
    adjacency: Array2<u8>,
    annotator_index: usize,
}

impl AnnotatorGraph {
    /// Builds the graph from a single row of ratings.
    pub fn from_ratings(ratings: &[u32], annotator_index: usize) -> Self {
        let n = ratings.len();
        let mut adjacency = Array2::<u8>::zeros((n, n));
        for i in 0..n {
            if ratings[i] == MISSING {
                continue;
            }
            for j in (i + 1)..n {
                if ratings[i] == ratings[j] {
                    adjacency[[i, j]] = 1;
                    adjacency[[j, i]] = 1;
                }
            }
        }
        Self {
            adjacency,
            annotator_index,
        }
    }

    pub fn adjacency(&self) -> ArrayView2<'_, u8> {
        self.adjacency.view()
    }

    pub fn annotator_index(&self) -> usize {
        self.annotator_index
    }

    pub fn n_nodes(&self) -> usize {
        self.adjacency.nrows()
    }

    /// Unordered edges `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .indexed_iter()
            .filter(|&((i, j), &w)| i < j && w != 0)
            .map(|((i, j), _)| (i, j))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency.row(i).iter().map(|&w| usize::from(w)).sum()
    }
}

/// Graph of annotator `annotator` over all datapoints of `matrix`.
pub fn build_annotator_graph(matrix: &AnnotationMatrix, annotator: usize) -> Result<AnnotatorGraph, GraphError> {
    let row = matrix.row(annotator).map_err(|_| GraphError::AnnotatorOutOfRange {
        index: annotator,
        len: matrix.n_annotators(),
    })?;
    Ok(AnnotatorGraph::from_ratings(&row.to_vec(), annotator))
}

/// One graph per annotator, in row order.
pub fn build_all_graphs(matrix: &AnnotationMatrix) -> Vec<AnnotatorGraph> {
    (0..matrix.n_annotators())
        .map(|i| AnnotatorGraph::from_ratings(&matrix.ratings().row(i).to_vec(), i))
        .collect()
}

/// Averaged adjacency with its degree vector and Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianPair {
    avg_adjacency: Array2<f64>,
    avg_degree: Array1<f64>,
    laplacian: Array2<f64>,
}

impl LaplacianPair {
    pub fn avg_adjacency(&self) -> ArrayView2<'_, f64> {
        self.avg_adjacency.view()
    }

    pub fn avg_degree(&self) -> &Array1<f64> {
        &self.avg_degree
    }

    /// `D_avg` as a full diagonal matrix.
    pub fn degree_matrix(&self) -> Array2<f64> {
        Array2::from_diag(&self.avg_degree)
    }

    pub fn laplacian(&self) -> ArrayView2<'_, f64> {
        self.laplacian.view()
    }

    pub fn n_nodes(&self) -> usize {
        self.avg_degree.len()
    }
}

/// Elementwise mean of the adjacency matrices, divided by the total graph
/// count. Edge counts are accumulated as integers, so the result does not
/// depend on the order of `graphs`.
pub fn average_graphs(graphs: &[AnnotatorGraph]) -> Result<LaplacianPair, GraphError> {
    let first = graphs.first().ok_or(GraphError::NoGraphs)?;
    let n = first.n_nodes();
    let mut counts = Array2::<u32>::zeros((n, n));
    for (index, g) in graphs.iter().enumerate() {
        if g.n_nodes() != n {
            return Err(GraphError::DimensionMismatch {
                index,
                expected: n,
                found: g.n_nodes(),
            });
        }
        counts.zip_mut_with(&g.adjacency, |c, &w| *c += u32::from(w));
    }
    let total = graphs.len() as f64;
    let avg_adjacency = counts.mapv(|c| f64::from(c) / total);
    let avg_degree = Array1::from_iter(
        counts
            .rows()
            .into_iter()
            .map(|row| row.iter().map(|&c| u64::from(c)).sum::<u64>() as f64 / total),
    );
    let mut laplacian = -&avg_adjacency;
    for i in 0..n {
        laplacian[[i, i]] += avg_degree[i];
    }
    Ok(LaplacianPair {
        avg_adjacency,
        avg_degree,
        laplacian,
    })
}

/// Summary of the support graph of `A_avg`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphStats {
    pub n_nodes: usize,
    pub edge_count: usize,
    pub isolated_vertices: usize,
    pub components: usize,
    pub min_degree: f64,
    pub max_degree: f64,
    pub mean_degree: f64,
}

pub fn graph_stats(pair: &LaplacianPair) -> GraphStats {
    let n = pair.n_nodes();
    let mut support = UnGraph::<(), ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| support.add_node(())).collect();
    for ((i, j), &w) in pair.avg_adjacency.indexed_iter() {
        if i < j && w > 0.0 {
            support.add_edge(nodes[i], nodes[j], ());
        }
    }
    let deg = &pair.avg_degree;
    GraphStats {
        n_nodes: n,
        edge_count: support.edge_count(),
        isolated_vertices: deg.iter().filter(|&&d| d == 0.0).count(),
        components: petgraph::algo::connected_components(&support),
        min_degree: deg.iter().copied().fold(f64::INFINITY, f64::min),
        max_degree: deg.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean_degree: deg.sum() / n as f64,
    }
}
