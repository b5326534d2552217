//! Divisive-agglomerative construction of one run's classification family.
//!
//! Each divisive step splits the largest class with a frequency dichotomy.
//! After every split the new essential classification is coarsened back to
//! two classes by repeatedly merging the pair of classes joined by the most
//! neighborhood-graph edges; the intermediate results are the adjoint
//! classifications.

use rand::Rng;
use serde::Serialize;

use crate::classification::Classification;
use crate::dichotomy::frequency_dichotomy;
use crate::error::{invalid, Error, Result};
use crate::graph::{connected_components, repair_connectivity, Cut, FrequencyGraph};
use crate::matrix_io::DissimilarityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Essential,
    Adjoint,
}

/// Position of a classification in the family: it has `classes` classes and
/// was derived from the essential classification with `stage` classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EntryTag {
    pub classes: usize,
    pub stage: usize,
    pub kind: EntryKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyEntry {
    pub tag: EntryTag,
    pub classification: Classification,
}

/// Output of one run: `(k+1)k/2` classifications ordered by stage, and
/// within a stage by increasing class count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunFamily {
    pub k: usize,
    pub entries: Vec<FamilyEntry>,
    /// Set when no class could be split any more and the remaining slots
    /// repeat the last classification.
    pub truncated: bool,
}

pub fn family_size(k: usize) -> usize {
    (k + 1) * k / 2
}

impl RunFamily {
    /// The family a run with fewer dichotomies would have produced.
    pub fn prefix(&self, k: usize) -> Result<RunFamily> {
        if k == 0 || k > self.k {
            return Err(invalid(format!("cannot take a k={k} prefix of a k={} family", self.k)));
        }
        let entries = self.entries[..family_size(k)].to_vec();
        Ok(RunFamily { k, entries, truncated: self.truncated })
    }

    pub fn classifications(&self) -> impl Iterator<Item = &Classification> {
        self.entries.iter().map(|e| &e.classification)
    }

    pub fn essential(&self, classes: usize) -> Option<&Classification> {
        self.entries
            .iter()
            .find(|e| e.tag.kind == EntryKind::Essential && e.tag.classes == classes)
            .map(|e| &e.classification)
    }
}

/// Index of the largest class; ties go to the earliest class.
pub fn select_class_to_split(c: &Classification) -> usize {
    let mut best = 0;
    for (i, class) in c.classes().iter().enumerate() {
        if class.len() > c.classes()[best].len() {
            best = i;
        }
    }
    best
}

/// Adjoint classifications `C_{j-1} .. C_2` of a `j`-class classification,
/// merging at each step the pair of classes joined by the most edges of `g`
/// (ties: lexicographically smallest class-index pair).
pub fn agglomerate_chain(d_j: &Classification, g: &FrequencyGraph) -> Vec<Classification> {
    let m = d_j.num_classes();
    if m < 3 {
        return Vec::new();
    }
    let labels = d_j.labels();
    let mut counts = vec![vec![0usize; m]; m];
    for e in g.edges() {
        let (a, b) = (labels[e.u], labels[e.v]);
        if a != b {
            counts[a][b] += 1;
            counts[b][a] += 1;
        }
    }
    let mut classes = d_j.classes().to_vec();
    let mut chain = Vec::with_capacity(m - 2);
    while classes.len() > 2 {
        let (mut bi, mut bj) = (0, 1);
        for i in 0..classes.len() {
            for j in (i + 1)..classes.len() {
                if counts[i][j] > counts[bi][bj] {
                    (bi, bj) = (i, j);
                }
            }
        }
        // Class bi keeps its smallest member, so dropping bj keeps the order canonical.
        let absorbed = classes.remove(bj);
        classes[bi].extend(absorbed);
        classes[bi].sort_unstable();
        let row = counts.remove(bj);
        for (x, r) in counts.iter_mut().enumerate() {
            let moved = r.remove(bj);
            if x != bi {
                r[bi] += moved;
            }
        }
        for (x, &c) in row.iter().enumerate() {
            if x != bj && x != bi {
                let x = if x > bj { x - 1 } else { x };
                counts[bi][x] += c;
            }
        }
        chain.push(Classification::from_canonical_unchecked(classes.clone()));
    }
    chain
}

/// Replaces class `split_class` of `d_j` by the two parts of `cut`.
pub fn splice_dichotomy(d_j: &Classification, split_class: usize, cut: &Cut) -> Result<Classification> {
    let class = d_j
        .classes()
        .get(split_class)
        .ok_or_else(|| invalid(format!("class index {split_class} out of range")))?;
    let mut cut_vertices: Vec<usize> = cut.part_a.iter().chain(&cut.part_b).copied().collect();
    cut_vertices.sort_unstable();
    if cut_vertices != *class || cut.part_a.is_empty() || cut.part_b.is_empty() {
        return Err(Error::InvalidCut(format!(
            "cut does not partition class {split_class} into two nonempty parts"
        )));
    }
    let mut classes: Vec<Vec<usize>> = d_j.classes().to_vec();
    classes[split_class] = cut.part_a.clone();
    classes.push(cut.part_b.clone());
    Classification::from_classes(classes)
}

/// One divisive-agglomerative run with `k` dichotomies.
///
/// `g` must be connected. Crossing edges of each dichotomy are dropped from
/// a working copy of `g`; before each later dichotomy the selected class is
/// made connected using `d`. Agglomeration always counts edges of `g`
/// itself. If `k` exceeds what the object count allows, the family is
/// padded with the last classification and marked truncated.
pub fn run_daa<R: Rng + ?Sized>(
    g: &FrequencyGraph,
    d: &DissimilarityMatrix,
    k: usize,
    repetitions: usize,
    rng: &mut R,
) -> Result<RunFamily> {
    let n = g.vertex_count();
    if d.size() != n {
        return Err(invalid(format!("graph has {n} vertices but the matrix has {} objects", d.size())));
    }
    if k < 1 {
        return Err(invalid("k must be at least 1"));
    }
    let components = connected_components(g, None).len();
    if components > 1 {
        return Err(Error::Disconnected { components });
    }

    let mut working = g.clone();
    let first = frequency_dichotomy(&mut working, repetitions, rng)?;
    let mut current = Classification::from_classes(vec![first.cut.part_a, first.cut.part_b])?;

    let mut entries = Vec::with_capacity(family_size(k));
    entries.push(FamilyEntry {
        tag: EntryTag { classes: 2, stage: 2, kind: EntryKind::Essential },
        classification: current.clone(),
    });
    let mut truncated = false;

    for stage in 3..=k + 1 {
        let split = select_class_to_split(&current);
        let class = current.classes()[split].clone();
        if truncated || class.len() < 2 {
            truncated = true;
            let last = entries.last().expect("family is nonempty").classification.clone();
            entries.extend((2..=stage).map(|classes| FamilyEntry {
                tag: EntryTag {
                    classes,
                    stage,
                    kind: if classes == stage { EntryKind::Essential } else { EntryKind::Adjoint },
                },
                classification: last.clone(),
            }));
            continue;
        }

        repair_connectivity(&mut working, &class, d)?;
        let mut sub = working.induced_subgraph(&class);
        let result = frequency_dichotomy(&mut sub, repetitions, rng)?;
        let cut = result.cut.relabel(&class);
        let mut side = vec![0u8; n];
        cut.part_a.iter().for_each(|&v| side[v] = 1);
        cut.part_b.iter().for_each(|&v| side[v] = 2);
        working.retain_edges(|e| side[e.u] == 0 || side[e.v] == 0 || side[e.u] == side[e.v]);

        current = splice_dichotomy(&current, split, &cut)?;
        let chain = agglomerate_chain(&current, g);
        for (offset, c) in chain.into_iter().rev().enumerate() {
            entries.push(FamilyEntry {
                tag: EntryTag { classes: 2 + offset, stage, kind: EntryKind::Adjoint },
                classification: c,
            });
        }
        entries.push(FamilyEntry {
            tag: EntryTag { classes: stage, stage, kind: EntryKind::Essential },
            classification: current.clone(),
        });
    }
    debug_assert_eq!(entries.len(), family_size(k));
    Ok(RunFamily { k, entries, truncated })
}
