use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A partition of `{0..n}` in canonical form: each class ascending, classes
/// ordered by smallest member. Structural equality is partition equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Classification {
    classes: Vec<Vec<usize>>,
}

impl Classification {
    /// Canonicalizes arbitrary classes; fails unless they are nonempty,
    /// disjoint and cover `0..n` exactly.
    pub fn from_classes(mut classes: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = classes.iter().map(Vec::len).sum();
        let mut seen = vec![false; n];
        for class in &mut classes {
            if class.is_empty() {
                return Err(invalid("classes must be nonempty"));
            }
            for &v in class.iter() {
                if v >= n || std::mem::replace(&mut seen[v], true) {
                    return Err(invalid(format!(
                        "classes do not partition 0..{n} (object {v} is out of range or repeated)"
                    )));
                }
            }
            class.sort_unstable();
        }
        classes.sort_unstable_by_key(|c| c[0]);
        Ok(Self { classes })
    }

    /// Groups objects by label; label values themselves are irrelevant.
    pub fn from_labels<L: Eq + std::hash::Hash + Copy>(labels: &[L]) -> Self {
        let mut index = std::collections::HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (obj, label) in labels.iter().enumerate() {
            let slot = *index.entry(*label).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[slot].push(obj);
        }
        // Classes are created in order of first member, so this is canonical.
        Self { classes }
    }

    pub fn single_class(n: usize) -> Self {
        Self { classes: vec![(0..n).collect()] }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn num_objects(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    /// Class index of every object.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.num_objects()];
        for (c, class) in self.classes.iter().enumerate() {
            for &v in class {
                labels[v] = c;
            }
        }
        labels
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Class sizes sorted in decreasing order.
    pub fn size_profile(&self) -> Vec<usize> {
        let mut sizes = self.class_sizes();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    pub(crate) fn from_canonical_unchecked(classes: Vec<Vec<usize>>) -> Self {
        debug_assert!(classes.windows(2).all(|w| w[0][0] < w[1][0]));
        Self { classes }
    }
}
