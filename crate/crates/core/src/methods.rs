//! Classification methods compared against each other, selectable by name.

use crate::classification::Classification;
use crate::ensemble::{run_families, run_rng, EnsembleConfig};
use crate::error::{invalid, Result};
use crate::input::Dataset;
use crate::kmeans::{kmeans_baseline, DEFAULT_MAX_ITERS};
use crate::registry::Registry;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodOptions {
    /// Number of classes every solution should have.
    pub classes: usize,
    pub repetitions: usize,
    pub neighbors: usize,
    pub max_iters: usize,
}

impl Default for MethodOptions {
    fn default() -> Self {
        Self {
            classes: 4,
            repetitions: crate::dichotomy::DEFAULT_REPETITIONS,
            neighbors: crate::graph::DEFAULT_NEIGHBORS,
            max_iters: DEFAULT_MAX_ITERS,
        }
    }
}

pub trait ClassificationMethod: Send + Sync {
    fn name(&self) -> &'static str;

    /// One classification per independent run (or restart), seeded from
    /// `seed` and the run index.
    fn solutions(&self, data: &Dataset, runs: usize, seed: u64) -> Result<Vec<Classification>>;
}

/// Divisive-agglomerative runs with `classes - 1` dichotomies; each run
/// contributes its essential classification with `classes` classes.
pub struct DivisiveAgglomerative {
    options: MethodOptions,
}

impl ClassificationMethod for DivisiveAgglomerative {
    fn name(&self) -> &'static str {
        "daa"
    }

    fn solutions(&self, data: &Dataset, runs: usize, seed: u64) -> Result<Vec<Classification>> {
        let classes = self.options.classes;
        if classes == 1 {
            return Ok(vec![Classification::single_class(data.len()); runs]);
        }
        let config = EnsembleConfig {
            k: classes - 1,
            runs,
            repetitions: self.options.repetitions,
            seed,
            neighbors: self.options.neighbors,
        };
        run_families(&data.dissimilarity, &config)?
            .iter()
            .map(|run| {
                run.essential(classes)
                    .cloned()
                    .ok_or_else(|| invalid(format!("run has no essential classification with {classes} classes")))
            })
            .collect()
    }
}

/// K-means restarts from random data points.
pub struct KMeans {
    options: MethodOptions,
}

impl ClassificationMethod for KMeans {
    fn name(&self) -> &'static str {
        "kmeans"
    }

    fn solutions(&self, data: &Dataset, runs: usize, seed: u64) -> Result<Vec<Classification>> {
        let vectors = data
            .vectors
            .as_ref()
            .ok_or_else(|| invalid("K-means needs vector input (votes or points)"))?;
        (0..runs)
            .map(|i| kmeans_baseline(vectors, self.options.classes, self.options.max_iters, &mut run_rng(seed, i)))
            .collect()
    }
}

pub fn methods() -> Registry<dyn ClassificationMethod, MethodOptions> {
    let mut reg: Registry<dyn ClassificationMethod, MethodOptions> = Registry::new("method");
    reg.register("daa", |&options| Ok(Box::new(DivisiveAgglomerative { options })))
        .register("kmeans", |&options| Ok(Box::new(KMeans { options })));
    reg
}
