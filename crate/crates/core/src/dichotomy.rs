//! Frequency minimax dichotomy of a connected graph, plus exact cut scores.
//!
//! Random vertex pairs are joined by bottleneck-optimal paths, where an
//! edge's length is the number of earlier paths that used it. Once the
//! statistics are accumulated, the set of edges sitting at the maximal
//! frequency contains a cut, and removing it splits the graph.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::graph::{cut_edges, Cut, FrequencyGraph};

/// Default number of accumulated paths per dichotomy.
pub const DEFAULT_REPETITIONS: usize = 2000;

/// The final stage may run at most this many times `T` extra paths.
const FINAL_STAGE_CAP_FACTOR: usize = 10;

/// Largest graph accepted by the exhaustive cut search.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DichotomyResult {
    /// `part_a` is the largest component left after removing the
    /// maximal-frequency edges; `part_b` is everything else.
    pub cut: Cut,
    /// Maximal edge frequency saved after the accumulation stage.
    pub f_max: u64,
    /// Paths whose increments were kept (`T` plus final-stage paths, minus
    /// the undone one).
    pub paths_built: usize,
    /// Maximal frequency observed right before the edge removal.
    pub max_before_removal: u64,
    /// Component count after removing every edge at `f_max`.
    pub components_after_removal: usize,
    /// Number of edges removed at `f_max`.
    pub removed_edges: usize,
}

impl DichotomyResult {
    pub fn part_one(&self) -> &[usize] {
        &self.cut.part_a
    }

    pub fn part_two(&self) -> &[usize] {
        &self.cut.part_b
    }
}

/// Reusable state for bottleneck shortest-path searches.
#[derive(Debug, Default)]
pub struct MinimaxSearch {
    bottleneck: Vec<u64>,
    parent_edge: Vec<usize>,
    settled: Vec<bool>,
    heap: BinaryHeap<Reverse<(u64, usize)>>,
}

impl MinimaxSearch {
    pub fn new() -> Self {
        Self::default()
    }

    /// Edge ids of a path from `s` to `t` minimizing the maximal edge
    /// frequency. Vertices leave the queue ordered by (bottleneck, id), and
    /// a label is only replaced by a strictly better one, so the result is
    /// fixed for a given graph state.
    pub fn find(&mut self, g: &FrequencyGraph, s: usize, t: usize) -> Result<Vec<usize>> {
        let n = g.vertex_count();
        if s >= n || t >= n {
            return Err(invalid(format!("endpoint out of range for {n} vertices")));
        }
        if s == t {
            return Err(invalid("path endpoints must differ"));
        }
        self.bottleneck.clear();
        self.bottleneck.resize(n, u64::MAX);
        self.parent_edge.clear();
        self.parent_edge.resize(n, usize::MAX);
        self.settled.clear();
        self.settled.resize(n, false);
        self.heap.clear();

        self.bottleneck[s] = 0;
        self.heap.push(Reverse((0, s)));
        while let Some(Reverse((b, x))) = self.heap.pop() {
            if self.settled[x] {
                continue;
            }
            self.settled[x] = true;
            if x == t {
                break;
            }
            for &(y, id) in g.neighbors(x) {
                if self.settled[y] {
                    continue;
                }
                let candidate = b.max(g.freq(id));
                if candidate < self.bottleneck[y] {
                    self.bottleneck[y] = candidate;
                    self.parent_edge[y] = id;
                    self.heap.push(Reverse((candidate, y)));
                }
            }
        }
        if !self.settled[t] {
            return Err(Error::Unreachable(s, t));
        }
        let mut path = Vec::new();
        let mut v = t;
        while v != s {
            let id = self.parent_edge[v];
            path.push(id);
            v = g.edge(id).other(v);
        }
        path.reverse();
        Ok(path)
    }
}

/// Bottleneck-optimal path from `s` to `t`, as edge ids in walking order.
pub fn minimax_path(g: &FrequencyGraph, s: usize, t: usize) -> Result<Vec<usize>> {
    MinimaxSearch::new().find(g, s, t)
}

/// Uniform unordered pair of distinct vertices.
fn random_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

/// Splits a connected graph in two.
///
/// Frequencies are zeroed, `repetitions` random minimax paths are laid,
/// then single paths are added until one raises the maximal frequency.
/// That last path is undone, every edge at the saved maximum is removed,
/// and the largest remaining component becomes part one (ties go to the
/// component holding the smallest vertex). On return `g` keeps the final
/// frequencies and has lost exactly the crossing edges of the cut.
pub fn frequency_dichotomy<R: Rng + ?Sized>(
    g: &mut FrequencyGraph,
    repetitions: usize,
    rng: &mut R,
) -> Result<DichotomyResult> {
    let n = g.vertex_count();
    if repetitions < 1 {
        return Err(invalid("the repetition count T must be at least 1"));
    }
    if n < 2 || g.edge_count() == 0 {
        return Err(invalid("a dichotomy needs at least 2 vertices and 1 edge"));
    }
    let components = g.components_where(|_| true).len();
    if components > 1 {
        return Err(Error::Disconnected { components });
    }

    g.reset_frequencies();
    let mut search = MinimaxSearch::new();
    for _ in 0..repetitions {
        let (s, t) = random_pair(n, rng);
        let path = search.find(g, s, t)?;
        g.increment_path(&path);
    }
    let mut paths_built = repetitions;
    let f_max = g.max_frequency();

    let cap = FINAL_STAGE_CAP_FACTOR * repetitions;
    let mut extra = 0;
    loop {
        if extra == cap {
            return Err(Error::Invariant(format!(
                "final stage did not raise the maximal frequency within {cap} paths"
            )));
        }
        extra += 1;
        let (s, t) = random_pair(n, rng);
        let path = search.find(g, s, t)?;
        let before = g.frequencies();
        g.increment_path(&path);
        let f_mod = path.iter().map(|&id| g.freq(id)).max().unwrap_or(0).max(f_max);
        if f_mod == f_max {
            paths_built += 1;
            continue;
        }
        g.decrement_path(&path);
        if g.frequencies() != before {
            return Err(Error::Invariant("undoing the last path did not restore the frequencies".into()));
        }
        break;
    }

    let max_before_removal = g.max_frequency();
    if max_before_removal != f_max {
        return Err(Error::Invariant(format!(
            "maximal frequency {max_before_removal} differs from the saved {f_max}"
        )));
    }
    let parts = g.components_where(|e| e.freq != f_max);
    if parts.len() < 2 {
        return Err(Error::Invariant("edges at the maximal frequency do not contain a cut".into()));
    }
    let mut largest = 0;
    for (i, p) in parts.iter().enumerate() {
        if p.len() > parts[largest].len() {
            largest = i;
        }
    }
    let removed_edges = g.edges().iter().filter(|e| e.freq == f_max).count();
    let cut = cut_edges(g, &parts[largest])?;

    let mut in_one = vec![false; n];
    cut.part_a.iter().for_each(|&v| in_one[v] = true);
    g.retain_edges(|e| in_one[e.u] == in_one[e.v]);

    Ok(DichotomyResult {
        cut,
        f_max,
        paths_built,
        max_before_removal,
        components_after_removal: parts.len(),
        removed_edges,
    })
}

/// `|A|·|B| / d(A,B)`; undefined for a cut with no crossing edges.
pub fn decomposition_value(cut: &Cut) -> Result<f64> {
    if cut.size() == 0 {
        return Err(Error::InvalidCut("decomposition value needs at least one crossing edge".into()));
    }
    Ok((cut.part_a.len() * cut.part_b.len()) as f64 / cut.size() as f64)
}

/// `d(A,B)·(1/|A| + 1/|B|)`.
pub fn ratio_cut_value(cut: &Cut) -> Result<f64> {
    if cut.part_a.is_empty() || cut.part_b.is_empty() {
        return Err(Error::InvalidCut("ratio cut needs two nonempty parts".into()));
    }
    let d = cut.size() as f64;
    Ok(d * (1.0 / cut.part_a.len() as f64 + 1.0 / cut.part_b.len() as f64))
}

/// Crossing-edge count of every two-part split (part A holds vertex 0),
/// as `(mask of part B over vertices 1..n, d)`.
fn enumerate_cut_sizes(g: &FrequencyGraph) -> impl Iterator<Item = (u32, usize)> + '_ {
    let n = g.vertex_count();
    let masks = 1u32..(1u32 << (n - 1));
    masks.map(move |mask| {
        let full = mask << 1;
        let d = g
            .edges()
            .iter()
            .filter(|e| ((full >> e.u) & 1) != ((full >> e.v) & 1))
            .count();
        (full, d)
    })
}

fn mask_to_part_a(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| (mask >> v) & 1 == 0).collect()
}

/// Every two-part cut of a small graph, each listed once.
pub fn all_cuts(g: &FrequencyGraph) -> Result<Vec<Cut>> {
    guard_size(g)?;
    enumerate_cut_sizes(g)
        .map(|(mask, _)| cut_edges(g, &mask_to_part_a(mask, g.vertex_count())))
        .collect()
}

fn guard_size(g: &FrequencyGraph) -> Result<()> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(invalid("need at least 2 vertices to cut"));
    }
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(invalid(format!(
            "exhaustive cut search is limited to {BRUTE_FORCE_MAX_VERTICES} vertices, got {n}"
        )));
    }
    Ok(())
}

/// Exact maximizer of the decomposition value over all cuts of a small
/// connected graph; ties go to the lexicographically smallest part A.
pub fn brute_force_best_cut(g: &FrequencyGraph) -> Result<Cut> {
    guard_size(g)?;
    let components = g.components_where(|_| true).len();
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    let n = g.vertex_count();
    // (|A||B|, d, part A)
    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    for (mask, d) in enumerate_cut_sizes(g) {
        let b = mask.count_ones() as usize;
        let product = (n - b) * b;
        let better = match &best {
            None => true,
            Some((bp, bd, ba)) => {
                let (lhs, rhs) = (product * bd, bp * d);
                lhs > rhs || (lhs == rhs && mask_to_part_a(mask, n) < *ba)
            }
        };
        if better {
            best = Some((product, d, mask_to_part_a(mask, n)));
        }
    }
    let (_, _, part_a) = best.expect("at least one cut exists for n >= 2");
    cut_edges(g, &part_a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(n: usize, edges: &[(usize, usize)]) -> FrequencyGraph {
        FrequencyGraph::from_edges(n, edges).unwrap()
    }

    fn two_triangles() -> FrequencyGraph {
        graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    }

    fn bottleneck(g: &FrequencyGraph, path: &[usize]) -> u64 {
        path.iter().map(|&id| g.freq(id)).max().unwrap()
    }

    #[test]
    fn minimax_avoids_heavy_edge() {
        // s=0, m=1, t=2
        let mut g = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let heavy = g.edge_id(0, 2).unwrap();
        for _ in 0..5 {
            g.increment_path(&[heavy]);
        }
        let path = minimax_path(&g, 0, 2).unwrap();
        assert_eq!(path, vec![g.edge_id(0, 1).unwrap(), g.edge_id(1, 2).unwrap()]);
        assert_eq!(bottleneck(&g, &path), 0);
    }

    #[test]
    fn minimax_zero_frequencies_and_unique_paths() {
        let g = two_triangles();
        let path = minimax_path(&g, 0, 5).unwrap();
        assert_eq!(bottleneck(&g, &path), 0);

        let mut p = graph(3, &[(0, 1), (1, 2)]);
        p.increment_path(&[0, 0, 1]);
        assert_eq!(minimax_path(&p, 0, 2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn minimax_errors() {
        let g = graph(4, &[(0, 1), (2, 3)]);
        assert!(matches!(minimax_path(&g, 0, 3), Err(Error::Unreachable(0, 3))));
        assert!(minimax_path(&g, 1, 1).is_err());
    }

    #[test]
    fn dichotomy_of_single_edge() {
        let mut g = graph(2, &[(0, 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = frequency_dichotomy(&mut g, 10, &mut rng).unwrap();
        assert_eq!(r.cut.part_a, vec![0]);
        assert_eq!(r.cut.part_b, vec![1]);
        assert_eq!(r.cut.crossing_edges, vec![(0, 1)]);
        assert_eq!(r.f_max, 10);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn dichotomy_rejects_bad_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut g = graph(4, &[(0, 1), (2, 3)]);
        assert!(matches!(
            frequency_dichotomy(&mut g, 10, &mut rng),
            Err(Error::Disconnected { components: 2 })
        ));
        let mut g = graph(2, &[(0, 1)]);
        assert!(frequency_dichotomy(&mut g, 0, &mut rng).is_err());
    }

    #[test]
    fn dichotomy_cuts_triangle_bridge_and_is_deterministic() {
        let run = |seed| {
            let mut g = two_triangles();
            frequency_dichotomy(&mut g, 300, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
        };
        let a = run(7);
        assert_eq!(a.cut.crossing_edges, vec![(2, 3)]);
        assert_eq!(a.cut.part_a, vec![0, 1, 2], "equal sizes: part one holds vertex 0");
        assert_eq!(a, run(7));
        assert_eq!(a.max_before_removal, a.f_max);
        assert!(a.components_after_removal >= 2);
        assert!(a.paths_built >= 300);
    }

    #[test]
    fn decomposition_values() {
        let k2 = graph(2, &[(0, 1)]);
        let cut = cut_edges(&k2, &[0]).unwrap();
        assert_eq!(decomposition_value(&cut).unwrap(), 1.0);
        assert_eq!(ratio_cut_value(&cut).unwrap(), 2.0);

        let p3 = graph(3, &[(0, 1), (1, 2)]);
        let cut = cut_edges(&p3, &[0]).unwrap();
        assert_eq!(decomposition_value(&cut).unwrap(), 2.0);

        let no_cross = cut_edges(&graph(2, &[]), &[0]).unwrap();
        assert!(decomposition_value(&no_cross).is_err());
        assert_eq!(ratio_cut_value(&no_cross).unwrap(), 0.0);
    }

    #[test]
    fn brute_force_cases() {
        let k2 = graph(2, &[(0, 1)]);
        assert_eq!(brute_force_best_cut(&k2).unwrap().part_a, vec![0]);

        let best = brute_force_best_cut(&two_triangles()).unwrap();
        assert_eq!(best.crossing_edges, vec![(2, 3)]);
        assert_eq!(decomposition_value(&best).unwrap(), 9.0);

        let path = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let best = brute_force_best_cut(&path).unwrap();
        assert_eq!((best.part_a.clone(), best.part_b.clone()), (vec![0, 1], vec![2, 3]));
        assert_eq!(decomposition_value(&best).unwrap(), 4.0);
        assert_eq!(all_cuts(&path).unwrap().len(), 7);

        assert!(brute_force_best_cut(&FrequencyGraph::new(21)).is_err());
    }
}
