//! Complexity over a grid of dichotomy counts `k` and run counts `r`.

use std::collections::HashSet;
use std::ops::RangeInclusive;

use crate::daa::{family_size, RunFamily};
use crate::ensemble::{complexity, run_families, EnsembleConfig};
use crate::error::{invalid, Result};
use crate::matrix_io::DissimilarityMatrix;

/// Rows indexed by `r`, columns by `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub ks: Vec<usize>,
    pub rs: Vec<usize>,
    pub cells: Vec<Vec<f64>>,
}

impl SweepGrid {
    /// Cell `(r, k)` uses the first `r` runs, each cut to its first `k`
    /// dichotomies, so every cell is a prefix of the largest computation.
    pub fn from_runs(runs: &[RunFamily], ks: RangeInclusive<usize>, rs: RangeInclusive<usize>) -> Result<Self> {
        let (ks, rs): (Vec<usize>, Vec<usize>) = (ks.collect(), rs.collect());
        if ks.is_empty() || rs.is_empty() || ks[0] == 0 || rs[0] == 0 {
            return Err(invalid("sweep ranges must be nonempty and start at 1 or more"));
        }
        let (max_k, max_r) = (*ks.last().unwrap(), *rs.last().unwrap());
        if runs.len() < max_r || runs.iter().any(|r| r.k < max_k) {
            return Err(invalid("not enough runs or dichotomies for the requested grid"));
        }
        let cells = rs
            .iter()
            .map(|&r| {
                ks.iter()
                    .map(|&k| {
                        let distinct: HashSet<_> = runs[..r]
                            .iter()
                            .flat_map(|run| run.entries[..family_size(k)].iter().map(|e| &e.classification))
                            .collect();
                        complexity(distinct.len(), k, r)
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        Ok(Self { ks, rs, cells })
    }

    pub fn get(&self, r: usize, k: usize) -> Option<f64> {
        let i = self.rs.iter().position(|&x| x == r)?;
        let j = self.ks.iter().position(|&x| x == k)?;
        Some(self.cells[i][j])
    }

    /// CSV with a `r\k` header row; values carry six decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r\\k");
        for k in &self.ks {
            out.push_str(&format!(",{k}"));
        }
        out.push('\n');
        for (r, row) in self.rs.iter().zip(&self.cells) {
            out.push_str(&r.to_string());
            for v in row {
                out.push_str(&format!(",{v:.6}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Runs `max(rs)` runs with `max(ks)` dichotomies once and fills the grid.
pub fn sweep(
    d: &DissimilarityMatrix,
    ks: RangeInclusive<usize>,
    rs: RangeInclusive<usize>,
    base: EnsembleConfig,
) -> Result<SweepGrid> {
    if ks.is_empty() || rs.is_empty() {
        return Err(invalid("sweep ranges must be nonempty"));
    }
    let config = EnsembleConfig { k: *ks.end(), runs: *rs.end(), ..base };
    let runs = run_families(d, &config)?;
    SweepGrid::from_runs(&runs, ks, rs)
}
