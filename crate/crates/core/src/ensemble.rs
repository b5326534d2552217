//! Repeated runs, distinct-solution extraction, the complexity index, and
//! agreement measures between classifications.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classification::Classification;
use crate::daa::{family_size, run_daa, RunFamily};
use crate::error::{invalid, Result};
use crate::graph::{build_neighborhood_graph, repair_connectivity};
use crate::matrix_io::DissimilarityMatrix;

/// Parameters of the external level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleConfig {
    pub k: usize,
    pub runs: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub neighbors: usize,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            k: 10,
            runs: 10,
            repetitions: crate::dichotomy::DEFAULT_REPETITIONS,
            seed: 0,
            neighbors: crate::graph::DEFAULT_NEIGHBORS,
        }
    }
}

/// Generator for run `index`: ChaCha8 keyed by the master seed, on a
/// stream numbered by the run index. Independent of execution order.
pub fn run_rng(master_seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index as u64);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistinctSolution {
    pub classification: Classification,
    pub multiplicity: usize,
    pub stability: f64,
}

#[derive(Debug, Clone)]
pub struct SolutionSet {
    pub config: EnsembleConfig,
    /// Distinct classifications in order of first appearance.
    pub distinct: Vec<DistinctSolution>,
    pub complexity: f64,
    pub runs: Vec<RunFamily>,
}

#[derive(Serialize)]
struct DistinctReport<'a> {
    classes: &'a Classification,
    multiplicity: usize,
    stability: f64,
    degenerate: bool,
    uniformity: f64,
    num_classes: usize,
}

#[derive(Serialize)]
struct SolutionReport<'a> {
    k: usize,
    r: usize,
    #[serde(rename = "T")]
    repetitions: usize,
    seed: u64,
    complexity: f64,
    distinct: Vec<DistinctReport<'a>>,
}

impl SolutionSet {
    /// Deduplicates the families of `runs` (each cut to its first `k`
    /// dichotomies) and scores every distinct classification.
    pub fn from_runs(runs: &[RunFamily], config: EnsembleConfig) -> Result<Self> {
        if runs.is_empty() {
            return Err(invalid("at least one run is required"));
        }
        let runs: Vec<RunFamily> = runs.iter().map(|r| r.prefix(config.k)).collect::<Result<_>>()?;
        let mut index: HashMap<&Classification, usize> = HashMap::new();
        let mut distinct: Vec<&Classification> = Vec::new();
        let mut multiplicity: Vec<usize> = Vec::new();
        let mut run_ids: Vec<Vec<usize>> = Vec::with_capacity(runs.len());
        for run in &runs {
            let ids = run
                .classifications()
                .map(|c| {
                    let id = *index.entry(c).or_insert_with(|| {
                        distinct.push(c);
                        multiplicity.push(0);
                        distinct.len() - 1
                    });
                    multiplicity[id] += 1;
                    id
                })
                .collect();
            run_ids.push(ids);
        }

        let mut cache = RandCache::new(&distinct);
        let stabilities: Vec<f64> = (0..distinct.len())
            .map(|id| greedy_stability(id, &run_ids, |a, b| cache.get(a, b)))
            .collect::<Result<_>>()?;

        let complexity = complexity(distinct.len(), config.k, runs.len())?;
        let distinct = distinct
            .iter()
            .zip(multiplicity)
            .zip(stabilities)
            .map(|((c, multiplicity), stability)| DistinctSolution {
                classification: (*c).clone(),
                multiplicity,
                stability,
            })
            .collect();
        let config = EnsembleConfig { runs: runs.len(), ..config };
        Ok(Self { config, distinct, complexity, runs })
    }

    pub fn to_json(&self) -> Result<String> {
        let report = SolutionReport {
            k: self.config.k,
            r: self.config.runs,
            repetitions: self.config.repetitions,
            seed: self.config.seed,
            complexity: self.complexity,
            distinct: self
                .distinct
                .iter()
                .map(|d| DistinctReport {
                    classes: &d.classification,
                    multiplicity: d.multiplicity,
                    stability: d.stability,
                    degenerate: is_degenerate(&d.classification),
                    uniformity: uniformity(&d.classification),
                    num_classes: d.classification.num_classes(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&report)?)
    }
}

/// Builds and repairs the neighborhood graph, then runs `config.runs`
/// independent DAA runs in parallel.
pub fn run_families(d: &DissimilarityMatrix, config: &EnsembleConfig) -> Result<Vec<RunFamily>> {
    if config.runs < 1 {
        return Err(invalid("at least one run is required"));
    }
    let mut g = build_neighborhood_graph(d, config.neighbors)?;
    let everything: Vec<usize> = (0..d.size()).collect();
    repair_connectivity(&mut g, &everything, d)?;
    (0..config.runs)
        .into_par_iter()
        .map(|i| run_daa(&g, d, config.k, config.repetitions, &mut run_rng(config.seed, i)))
        .collect()
}

/// The whole pipeline: runs, deduplication, complexity and stability.
pub fn run_external(d: &DissimilarityMatrix, config: EnsembleConfig) -> Result<SolutionSet> {
    let runs = run_families(d, &config)?;
    SolutionSet::from_runs(&runs, config)
}

/// Share of the `(k+1)k/2 · r` found classifications that are distinct.
pub fn complexity(distinct_count: usize, k: usize, runs: usize) -> Result<f64> {
    let total = family_size(k) * runs;
    if distinct_count < 1 || total == 0 {
        return Err(invalid("complexity needs at least one classification"));
    }
    if distinct_count > total {
        return Err(invalid(format!(
            "{distinct_count} distinct classifications exceed the {total} constructed"
        )));
    }
    Ok(distinct_count as f64 / total as f64)
}

/// Agreeing pairs, total pairs.
fn rand_counts(a: &Classification, b: &Classification) -> Result<(u64, u64)> {
    let n = a.num_objects();
    if n != b.num_objects() {
        return Err(invalid(format!(
            "classifications cover {n} and {} objects",
            b.num_objects()
        )));
    }
    let pairs = |x: u64| x * x.saturating_sub(1) / 2;
    let (la, lb) = (a.labels(), b.labels());
    let mut joint: HashMap<(usize, usize), u64> = HashMap::new();
    for (&x, &y) in la.iter().zip(&lb) {
        *joint.entry((x, y)).or_default() += 1;
    }
    let same_a: u64 = a.classes().iter().map(|c| pairs(c.len() as u64)).sum();
    let same_b: u64 = b.classes().iter().map(|c| pairs(c.len() as u64)).sum();
    let same_both: u64 = joint.values().map(|&c| pairs(c)).sum();
    let total = pairs(n as u64);
    Ok((total - (same_a + same_b - 2 * same_both), total))
}

/// Fraction of object pairs on which the two classifications agree.
/// Fewer than two objects count as full agreement.
pub fn rand_index(a: &Classification, b: &Classification) -> Result<f64> {
    let (agree, total) = rand_counts(a, b)?;
    Ok(if total == 0 { 1.0 } else { agree as f64 / total as f64 })
}

/// Smallest pairwise RAND index in the family; 1 for a single member.
pub fn concordance(family: &[Classification]) -> Result<f64> {
    if family.is_empty() {
        return Err(invalid("concordance of an empty family"));
    }
    let mut min = 1.0f64;
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            min = min.min(rand_index(a, b)?);
        }
    }
    Ok(min)
}

/// Greedy maximal concordance of a family holding `a` and one member of
/// every other run.
pub fn stability(a: &Classification, runs: &[RunFamily]) -> Result<f64> {
    let mut index: HashMap<&Classification, usize> = HashMap::new();
    let mut distinct: Vec<&Classification> = Vec::new();
    let run_ids: Vec<Vec<usize>> = runs
        .iter()
        .map(|run| {
            run.classifications()
                .map(|c| {
                    *index.entry(c).or_insert_with(|| {
                        distinct.push(c);
                        distinct.len() - 1
                    })
                })
                .collect()
        })
        .collect();
    let id = *index
        .get(a)
        .ok_or_else(|| invalid("classification does not occur in any run"))?;
    let mut cache = RandCache::new(&distinct);
    greedy_stability(id, &run_ids, |x, y| cache.get(x, y))
}

/// The run where `target` first occurs seeds the family with it; each other
/// run, in order, adds the member that keeps the family's minimal pairwise
/// RAND highest (first in family order on ties).
fn greedy_stability(
    target: usize,
    run_ids: &[Vec<usize>],
    mut rand: impl FnMut(usize, usize) -> Result<f64>,
) -> Result<f64> {
    let home = run_ids
        .iter()
        .position(|ids| ids.contains(&target))
        .ok_or_else(|| invalid("classification does not occur in any run"))?;
    let mut family = vec![target];
    let mut current = 1.0f64;
    for (r, ids) in run_ids.iter().enumerate() {
        if r == home {
            continue;
        }
        let mut best: Option<(f64, usize)> = None;
        for &candidate in ids {
            let mut value = current;
            for &member in &family {
                value = value.min(rand(candidate, member)?);
            }
            if best.is_none_or(|(b, _)| value > b) {
                best = Some((value, candidate));
            }
        }
        let (value, chosen) = best.ok_or_else(|| invalid("empty run family"))?;
        family.push(chosen);
        current = value;
    }
    Ok(current)
}

/// Memoized RAND indices between distinct classifications.
struct RandCache<'a> {
    items: &'a [&'a Classification],
    values: HashMap<(usize, usize), f64>,
}

impl<'a> RandCache<'a> {
    fn new(items: &'a [&'a Classification]) -> Self {
        Self { items, values: HashMap::new() }
    }

    fn get(&mut self, a: usize, b: usize) -> Result<f64> {
        if a == b {
            return Ok(1.0);
        }
        let key = (a.min(b), a.max(b));
        if let Some(&v) = self.values.get(&key) {
            return Ok(v);
        }
        let v = rand_index(self.items[a], self.items[b])?;
        self.values.insert(key, v);
        Ok(v)
    }
}

/// A classification with a class of one or two objects.
pub fn is_degenerate(c: &Classification) -> bool {
    c.classes().iter().any(|class| class.len() <= 2)
}

/// Largest class size over smallest class size.
pub fn uniformity(c: &Classification) -> f64 {
    let sizes = c.class_sizes();
    match (sizes.iter().max(), sizes.iter().min()) {
        (Some(&max), Some(&min)) if min > 0 => max as f64 / min as f64,
        _ => 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::daa::{EntryKind, EntryTag, FamilyEntry};

    fn cls(labels: &[usize]) -> Classification {
        Classification::from_labels(labels)
    }

    fn run_of(list: &[Classification]) -> RunFamily {
        // Tags are irrelevant to the metrics.
        RunFamily {
            k: 1,
            entries: list
                .iter()
                .map(|c| FamilyEntry {
                    tag: EntryTag { classes: c.num_classes(), stage: 2, kind: EntryKind::Essential },
                    classification: c.clone(),
                })
                .collect(),
            truncated: false,
        }
    }

    #[test]
    fn rand_examples() {
        let a = cls(&[0, 0, 1, 1]);
        assert_eq!(rand_index(&a, &a).unwrap(), 1.0);
        assert_eq!(rand_index(&cls(&[0, 1, 2]), &cls(&[0, 0, 0])).unwrap(), 0.0);
        let r = rand_index(&cls(&[0, 0, 1, 1]), &cls(&[0, 1, 0, 1])).unwrap();
        assert!((r - 2.0 / 6.0).abs() < 1e-15);
        assert!(rand_index(&cls(&[0, 0]), &cls(&[0, 0, 0])).is_err());
    }

    #[test]
    fn concordance_examples() {
        let a = cls(&[0, 0, 1]);
        assert_eq!(concordance(&[a.clone(), a.clone(), a.clone()]).unwrap(), 1.0);
        let fam = [cls(&[0, 1, 2]), cls(&[0, 0, 0]), cls(&[0, 1, 2])];
        assert_eq!(concordance(&fam).unwrap(), 0.0);
        assert_eq!(concordance(&[a]).unwrap(), 1.0);
        assert!(concordance(&[]).is_err());
    }

    #[test]
    fn complexity_examples() {
        assert!((complexity(10, 3, 4).unwrap() - 10.0 / 24.0).abs() < 1e-15);
        assert_eq!(complexity(1, 1, 1).unwrap(), 1.0);
        assert_eq!(complexity(550, 10, 10).unwrap(), 1.0);
        assert!(complexity(551, 10, 10).is_err());
        assert!(complexity(0, 1, 1).is_err());
    }

    #[test]
    fn stability_examples() {
        let a = cls(&[0, 0, 0, 1, 1, 1]);
        let b = cls(&[0, 0, 1, 1, 2, 2]);
        let runs = vec![run_of(&[a.clone(), b.clone()]), run_of(&[b.clone(), a.clone()])];
        assert_eq!(stability(&a, &runs).unwrap(), 1.0);
        assert_eq!(stability(&a, &runs[..1]).unwrap(), 1.0);

        // Second run only offers a partner at RAND x.
        let partner = cls(&[0, 1, 0, 1, 0, 1]);
        let x = rand_index(&a, &partner).unwrap();
        let runs = vec![run_of(std::slice::from_ref(&a)), run_of(&[partner])];
        assert_eq!(stability(&a, &runs).unwrap(), x);
        assert!(stability(&b, &runs).is_err());
    }

    #[test]
    fn degeneracy_and_uniformity() {
        let sized = |sizes: &[usize]| {
            let labels: Vec<usize> = sizes.iter().enumerate().flat_map(|(i, &s)| vec![i; s]).collect();
            cls(&labels)
        };
        assert!(!is_degenerate(&sized(&[5, 5])));
        assert!(is_degenerate(&sized(&[9, 1])));
        assert!(is_degenerate(&sized(&[8, 2])));
        assert_eq!(uniformity(&sized(&[5, 5])), 1.0);
        assert_eq!(uniformity(&sized(&[6, 3])), 2.0);
        assert_eq!(uniformity(&sized(&[4])), 1.0);
    }

    #[test]
    fn solution_set_counts() {
        let a = cls(&[0, 0, 1, 1]);
        let b = cls(&[0, 1, 1, 1]);
        let runs = vec![run_of(std::slice::from_ref(&a)), run_of(std::slice::from_ref(&b)), run_of(std::slice::from_ref(&a))];
        let set = SolutionSet::from_runs(&runs, EnsembleConfig { k: 1, ..Default::default() }).unwrap();
        assert_eq!(set.distinct.len(), 2);
        assert_eq!(set.distinct[0].multiplicity, 2);
        assert_eq!(set.distinct[1].multiplicity, 1);
        assert!((set.complexity - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(set.config.runs, 3);
        let json: serde_json::Value = serde_json::from_str(&set.to_json().unwrap()).unwrap();
        assert_eq!(json["distinct"][0]["classes"], serde_json::json!([[0, 1], [2, 3]]));
        assert_eq!(json["distinct"][1]["degenerate"], serde_json::json!(true));
        assert_eq!(json["T"], serde_json::json!(2000));
    }
}
