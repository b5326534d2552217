//! Neighborhood graphs with per-edge path frequencies, connectivity and cuts.

use std::collections::{HashMap, VecDeque};

use crate::error::{invalid, Error, Result};
use crate::matrix_io::DissimilarityMatrix;

/// Default number of nearest neighbors joined to every object.
pub const DEFAULT_NEIGHBORS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub freq: u64,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected simple graph whose edges carry a path-frequency counter.
#[derive(Debug, Clone, Default)]
pub struct FrequencyGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, usize)>>,
    index: HashMap<(usize, usize), usize>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl FrequencyGraph {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            vertex_count,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); vertex_count],
            index: HashMap::new(),
        }
    }

    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(vertex_count);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds edge `{u, v}` with zero frequency and returns its id.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        if u >= self.vertex_count || v >= self.vertex_count {
            return Err(invalid(format!("edge ({u},{v}) is out of range for {} vertices", self.vertex_count)));
        }
        if u == v {
            return Err(invalid(format!("self-loop at vertex {u}")));
        }
        if self.index.contains_key(&key(u, v)) {
            return Err(invalid(format!("duplicate edge ({u},{v})")));
        }
        let (u, v) = key(u, v);
        let id = self.edges.len();
        self.edges.push(Edge { u, v, freq: 0 });
        self.adjacency[u].push((v, id));
        self.adjacency[v].push((u, id));
        self.index.insert((u, v), id);
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&key(u, v)).copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.index.contains_key(&key(u, v))
    }

    /// `(neighbor, edge id)` pairs incident to `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn freq(&self, id: usize) -> u64 {
        self.edges[id].freq
    }

    pub fn frequencies(&self) -> Vec<u64> {
        self.edges.iter().map(|e| e.freq).collect()
    }

    pub fn max_frequency(&self) -> u64 {
        self.edges.iter().map(|e| e.freq).max().unwrap_or(0)
    }

    pub fn increment_path(&mut self, path: &[usize]) {
        for &id in path {
            self.edges[id].freq += 1;
        }
    }

    pub fn decrement_path(&mut self, path: &[usize]) {
        for &id in path {
            self.edges[id].freq -= 1;
        }
    }

    pub fn reset_frequencies(&mut self) {
        self.edges.iter_mut().for_each(|e| e.freq = 0);
    }

    /// Keeps only the edges satisfying `keep`; edge ids are renumbered.
    pub fn retain_edges(&mut self, mut keep: impl FnMut(&Edge) -> bool) {
        let kept: Vec<Edge> = self.edges.drain(..).filter(|e| keep(e)).collect();
        self.adjacency.iter_mut().for_each(Vec::clear);
        self.index.clear();
        for e in kept {
            let id = self.edges.len();
            self.adjacency[e.u].push((e.v, id));
            self.adjacency[e.v].push((e.u, id));
            self.index.insert((e.u, e.v), id);
            self.edges.push(e);
        }
    }

    /// Subgraph induced on `vertices` (which must be ascending), relabelled
    /// to `0..vertices.len()` in the same order. Frequencies are copied.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> FrequencyGraph {
        let mut local = vec![usize::MAX; self.vertex_count];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut sub = FrequencyGraph::new(vertices.len());
        for e in &self.edges {
            let (a, b) = (local[e.u], local[e.v]);
            if a != usize::MAX && b != usize::MAX {
                let id = sub.add_edge(a, b).expect("induced edges are simple");
                sub.edges[id].freq = e.freq;
            }
        }
        sub
    }

    /// Components of the graph formed by the edges passing `keep`, each
    /// sorted ascending and ordered by smallest member.
    pub fn components_where(&self, keep: impl Fn(&Edge) -> bool) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count];
        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = vec![start];
            while let Some(x) = queue.pop_front() {
                for &(y, id) in &self.adjacency[x] {
                    if !seen[y] && keep(&self.edges[id]) {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count <= 1 || connected_components(self, None).len() == 1
    }

    /// `u,v,freq` lines for plotting or debugging.
    pub fn to_edge_csv(&self) -> String {
        let mut out = String::from("u,v,freq\n");
        for e in &self.edges {
            out.push_str(&format!("{},{},{}\n", e.u, e.v, e.freq));
        }
        out
    }
}

/// Joins every object to its `neighbors` nearest objects plus all objects
/// tied with the last of them. The edge set is the union over all objects.
pub fn build_neighborhood_graph(d: &DissimilarityMatrix, neighbors: usize) -> Result<FrequencyGraph> {
    let n = d.size();
    if n < 2 {
        return Err(invalid("a neighborhood graph needs at least 2 objects"));
    }
    if neighbors == 0 {
        return Err(invalid("the neighbor count must be positive"));
    }
    let mut g = FrequencyGraph::new(n);
    let mut dists = Vec::with_capacity(n - 1);
    for a in 0..n {
        let row = d.row(a);
        let threshold = if n - 1 <= neighbors {
            f64::INFINITY
        } else {
            dists.clear();
            dists.extend(row.iter().enumerate().filter(|&(b, _)| b != a).map(|(_, &x)| x));
            let (_, kth, _) = dists.select_nth_unstable_by(neighbors - 1, f64::total_cmp);
            *kth
        };
        for (b, &dist) in row.iter().enumerate() {
            if b != a && dist <= threshold && !g.has_edge(a, b) {
                g.add_edge(a, b)?;
            }
        }
    }
    Ok(g)
}

/// Connected components, optionally restricted to the subgraph induced on
/// `restrict_to`. Components are sorted and ordered by smallest member.
pub fn connected_components(g: &FrequencyGraph, restrict_to: Option<&[usize]>) -> Vec<Vec<usize>> {
    match restrict_to {
        None => g.components_where(|_| true),
        Some(subset) => {
            let mut inside = vec![false; g.vertex_count()];
            subset.iter().for_each(|&v| inside[v] = true);
            g.components_where(|e| inside[e.u] && inside[e.v])
                .into_iter()
                .filter(|c| inside[c[0]])
                .collect()
        }
    }
}

/// Adds edges to `g` until the subgraph induced on `class` is connected.
///
/// Each added edge joins the closest pair (by `d`) of vertices lying in
/// different current components, ties going to the smallest `(i, j)`.
/// Returns the added edges in insertion order.
pub fn repair_connectivity(
    g: &mut FrequencyGraph,
    class: &[usize],
    d: &DissimilarityMatrix,
) -> Result<Vec<(usize, usize)>> {
    if class.is_empty() {
        return Err(invalid("cannot repair an empty class"));
    }
    let components = connected_components(g, Some(class));
    if components.len() <= 1 {
        return Ok(Vec::new());
    }
    let mut comp_of = vec![usize::MAX; g.vertex_count()];
    for (c, comp) in components.iter().enumerate() {
        comp.iter().for_each(|&v| comp_of[v] = c);
    }
    let mut members: Vec<usize> = class.to_vec();
    members.sort_unstable();
    let mut pairs = Vec::new();
    for (x, &i) in members.iter().enumerate() {
        for &j in &members[x + 1..] {
            if comp_of[i] != comp_of[j] {
                pairs.push((d.get(i, j), i, j));
            }
        }
    }
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    // Taking the globally closest inter-component pair repeatedly is
    // Kruskal's order over the component quotient.
    let mut parent: Vec<usize> = (0..components.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut added = Vec::with_capacity(components.len() - 1);
    for (_, i, j) in pairs {
        let (ri, rj) = (find(&mut parent, comp_of[i]), find(&mut parent, comp_of[j]));
        if ri != rj {
            parent[ri] = rj;
            g.add_edge(i, j)?;
            added.push((i, j));
            if added.len() == components.len() - 1 {
                break;
            }
        }
    }
    Ok(added)
}

/// A two-part split of a graph's vertices with its crossing edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub part_a: Vec<usize>,
    pub part_b: Vec<usize>,
    pub crossing_edges: Vec<(usize, usize)>,
}

impl Cut {
    /// Number of crossing edges.
    pub fn size(&self) -> usize {
        self.crossing_edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.part_a.len() + self.part_b.len()
    }

    /// The same cut with part ids translated through `map`.
    pub fn relabel(&self, map: &[usize]) -> Cut {
        let tr = |vs: &[usize]| {
            let mut out: Vec<usize> = vs.iter().map(|&v| map[v]).collect();
            out.sort_unstable();
            out
        };
        let mut crossing: Vec<(usize, usize)> = self
            .crossing_edges
            .iter()
            .map(|&(u, v)| key(map[u], map[v]))
            .collect();
        crossing.sort_unstable();
        Cut {
            part_a: tr(&self.part_a),
            part_b: tr(&self.part_b),
            crossing_edges: crossing,
        }
    }
}

/// Cut between `part_a` and the remaining vertices of `g`.
pub fn cut_edges(g: &FrequencyGraph, part_a: &[usize]) -> Result<Cut> {
    let n = g.vertex_count();
    let mut in_a = vec![false; n];
    for &v in part_a {
        if v >= n {
            return Err(Error::InvalidCut(format!("vertex {v} is out of range")));
        }
        in_a[v] = true;
    }
    let a: Vec<usize> = (0..n).filter(|&v| in_a[v]).collect();
    let b: Vec<usize> = (0..n).filter(|&v| !in_a[v]).collect();
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidCut("both parts must be nonempty".into()));
    }
    let crossing_edges = g
        .edges()
        .iter()
        .filter(|e| in_a[e.u] != in_a[e.v])
        .map(|e| (e.u, e.v))
        .collect();
    Ok(Cut { part_a: a, part_b: b, crossing_edges })
}
