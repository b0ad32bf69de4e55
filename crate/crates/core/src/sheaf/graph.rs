use std::collections::{HashSet, VecDeque};

use rand::Rng;

use crate::error::{Error, Result};

/// A simple undirected graph. Edges are stored as `(i, j)` with `i < j`; the
/// smaller endpoint is the edge's `(−)` end, the larger its `(+)` end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// `(neighbor, edge index)` per node, sorted by neighbor.
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Endpoints may be given in either order; loops and repeated edges are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) outside {n} nodes")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at node {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!("repeated edge ({}, {})", e.0, e.1)));
            }
            list.push(e);
        }
        let mut adj = vec![Vec::new(); n];
        for (k, &(i, j)) in list.iter().enumerate() {
            adj[i].push((j, k));
            adj[j].push((i, k));
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        Ok(Graph { n, edges: list, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("path edges are simple")
    }

    /// `n ≥ 3` nodes on a ring; smaller `n` falls back to a path.
    pub fn cycle(n: usize) -> Self {
        if n < 3 {
            return Self::path(n);
        }
        Self::new(n, (1..n).map(|i| (i - 1, i)).chain([(0, n - 1)])).expect("cycle edges are simple")
    }

    pub fn complete(n: usize) -> Self {
        Self::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).expect("complete edges are simple")
    }

    /// Node 0 joined to every other node.
    pub fn star(n: usize) -> Self {
        Self::new(n, (1..n).map(|j| (0, j))).expect("star edges are simple")
    }

    /// Uniform points in the unit square, an edge whenever the Euclidean
    /// distance is at most `r`. Returns the graph and the points.
    pub fn random_geometric<R: Rng + ?Sized>(n: usize, r: f64, rng: &mut R) -> (Self, Vec<(f64, f64)>) {
        let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| {
            let (dx, dy) = (points[i].0 - points[j].0, points[i].1 - points[j].1);
            (dx * dx + dy * dy).sqrt() <= r
        });
        let edges: Vec<_> = edges.collect();
        (Self::new(n, edges).expect("pairs are distinct"), points)
    }

    /// A uniformly attached random tree plus each remaining pair with
    /// probability `extra`. Always connected.
    pub fn random_connected<R: Rng + ?Sized>(n: usize, extra: f64, rng: &mut R) -> Self {
        let mut edges: Vec<(usize, usize)> = (1..n).map(|j| (rng.gen_range(0..j), j)).collect();
        let tree: HashSet<(usize, usize)> = edges.iter().copied().collect();
        for i in 0..n {
            for j in i + 1..n {
                if !tree.contains(&(i, j)) && rng.gen_bool(extra) {
                    edges.push((i, j));
                }
            }
        }
        Self::new(n, edges).expect("pairs are distinct")
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// `(neighbor, edge)` pairs of node `i`, sorted by neighbor.
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn edge_between(&self, i: usize, j: usize) -> Option<usize> {
        let row = self.adj.get(i)?;
        row.binary_search_by_key(&j, |&(k, _)| k).ok().map(|p| row[p].1)
    }

    /// Hop distances from `src`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::from([src]);
        dist[src] = Some(0);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &(v, _) in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Largest hop distance, or `None` for a disconnected graph.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for src in 0..self.n {
            for d in self.bfs_distances(src) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// Membership mask of the nodes within `k` hops of `i`.
    pub fn k_hop(&self, i: usize, k: usize) -> Vec<bool> {
        self.bfs_distances(i).iter().map(|d| d.is_some_and(|d| d <= k)).collect()
    }
}
