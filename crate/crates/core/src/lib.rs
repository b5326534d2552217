//! Automatic classification by frequency minimax graph dichotomy.
//!
//! The pipeline has three levels:
//!
//! * [`dichotomy`] splits a connected graph in two by laying random
//!   bottleneck-optimal paths and removing the edges that reach the
//!   maximal path frequency;
//! * [`daa`] alternates such splits with agglomeration, producing a family
//!   of `(k+1)k/2` classifications per run;
//! * [`ensemble`] repeats the runs, keeps the distinct classifications and
//!   reports the problem's complexity and each solution's stability.
//!
//! Inputs are vote matrices, point sets or raw dissimilarity matrices
//! ([`matrix_io`], [`input`]); [`synthetic`] generates planted test data.

pub mod classification;
pub mod daa;
pub mod dichotomy;
pub mod ensemble;
pub mod error;
pub mod graph;
pub mod input;
pub mod kmeans;
pub mod matrix_io;
pub mod methods;
pub mod registry;
pub mod sweep;
pub mod synthetic;

pub use classification::Classification;
pub use daa::{run_daa, RunFamily};
pub use dichotomy::{frequency_dichotomy, DichotomyResult};
pub use ensemble::{run_external, EnsembleConfig, SolutionSet};
pub use error::{Error, Result};
pub use graph::{build_neighborhood_graph, FrequencyGraph};
pub use input::Dataset;
pub use matrix_io::{DissimilarityMatrix, PointSet, VoteMatrix};
