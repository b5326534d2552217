//! Lloyd's K-means, used as a baseline.

use rand::seq::index::sample;
use rand::Rng;

use crate::classification::Classification;
use crate::error::{invalid, Result};

pub const DEFAULT_MAX_ITERS: usize = 1000;

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lloyd iteration from `k` distinct random data points as centroids.
///
/// Stops when no assignment changes or after `max_iters` rounds. A cluster
/// left empty is re-seeded with the point farthest from its own centroid.
pub fn kmeans_baseline<R: Rng + ?Sized>(
    vectors: &[Vec<f64>],
    k: usize,
    max_iters: usize,
    rng: &mut R,
) -> Result<Classification> {
    let n = vectors.len();
    if k < 1 || k > n {
        return Err(invalid(format!("K must lie in 1..={n}, got {k}")));
    }
    let dim = vectors[0].len();
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(invalid("all vectors must share one dimension"));
    }

    let mut centroids: Vec<Vec<f64>> = sample(rng, n, k).into_iter().map(|i| vectors[i].clone()).collect();
    let mut labels = vec![usize::MAX; n];
    for _ in 0..max_iters {
        let mut changed = false;
        for (i, v) in vectors.iter().enumerate() {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (c, centroid) in centroids.iter().enumerate() {
                let d = sq_dist(v, centroid);
                if d < best_d {
                    best = c;
                    best_d = d;
                }
            }
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }

        let mut counts = vec![0usize; k];
        let mut sums = vec![vec![0.0; dim]; k];
        for (v, &l) in vectors.iter().zip(&labels) {
            counts[l] += 1;
            sums[l].iter_mut().zip(v).for_each(|(s, x)| *s += x);
        }
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let far = (0..n)
                .filter(|&i| counts[labels[i]] > 1)
                .max_by(|&a, &b| {
                    sq_dist(&vectors[a], &centroids[labels[a]])
                        .total_cmp(&sq_dist(&vectors[b], &centroids[labels[b]]))
                        .then(b.cmp(&a))
                });
            if let Some(i) = far {
                counts[labels[i]] -= 1;
                counts[c] = 1;
                labels[i] = c;
                centroids[c] = vectors[i].clone();
            }
        }
    }
    Ok(Classification::from_labels(&labels))
}
