//! Result tables and embedding analysis.

mod embedding;
pub mod fixtures;
mod pca;
mod separability;
mod svg;
mod tables;

pub use embedding::{EmbeddingRecord, EmbeddingSet};
pub use pca::{pca_project, Projection, PCA_MAX_ITERATIONS, PCA_TOLERANCE};
pub use separability::{fisher_ratio, separability_scores, silhouette, Separability};
pub use svg::scatter_svg;
pub use tables::{
    render_iteration_table, render_source_rows, render_source_table, IterationResult, SourceTableRow,
    EMPHASIS_THRESHOLD,
};
