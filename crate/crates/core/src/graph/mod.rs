//! Simple undirected graphs and the parameters of their cycle codes.
//!
//! A [`Graph`] stores its edges in canonical lexicographic order with
//! `u < v`; edge `i` is coordinate `i` of the cycle code.

mod generate;
mod io;

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

pub use generate::{complete, cycle, irregular_family, path, petersen, random_regular, random_with_degrees};
pub use io::{format_edge_list, parse_edge_list, read_edge_list, write_edge_list, EdgeListError};

/// Number of configuration-model restarts before a generator gives up.
pub const MAX_RESAMPLES: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph has no edges")]
    NoEdges,
    #[error("infeasible degree request: {0}")]
    Infeasible(String),
    #[error("no simple connected realisation found after {0} resamples; retry with another seed")]
    RejectionBudget(usize),
}

/// Length of a shortest circuit. Forests have infinite girth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

/// Block length, dimension, rate and minimum distance of a cycle code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeParameters {
    pub n_code: usize,
    pub k_code: usize,
    pub rate: f64,
    pub girth: Girth,
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    // incidence[v][j] is the index of edge {v, adjacency[v][j]}
    incidence: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting loops, repeated edges and bad ids.
    /// Edges may be given in any order and orientation.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut canon = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &canon {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let incidence = adjacency
            .iter()
            .enumerate()
            .map(|(v, list)| {
                list.iter()
                    .map(|&w| canon.binary_search(&(v.min(w), v.max(w))).expect("edge present"))
                    .collect()
            })
            .collect();
        Ok(Graph {
            n,
            edges: canon,
            adjacency,
            incidence,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order, each as `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Edge indices incident to `v`, aligned with [`Self::neighbors`].
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Index of edge `{u, v}` in canonical order.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    /// Average degree `2|E| / n`, rounded once by the final division.
    /// Returns 0 for the graph with no vertices.
    pub fn average_degree(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        (2 * self.edges.len()) as f64 / self.n as f64
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Two-colourability test; used to recognise periodic arc operators.
    pub fn is_bipartite(&self) -> bool {
        let mut colour = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if colour[s] != u8::MAX {
                continue;
            }
            colour[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if colour[w] == u8::MAX {
                        colour[w] = 1 - colour[u];
                        queue.push_back(w);
                    } else if colour[w] == colour[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Shortest circuit length via breadth-first search from every vertex.
    ///
    /// From root `s`, a non-tree edge `{u, w}` closes a closed walk of length
    /// `dist(u) + dist(w) + 1` that contains a circuit no longer than that;
    /// rooting at a vertex of a shortest circuit attains the girth exactly.
    pub fn girth(&self) -> Girth {
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[s] = 0;
            parent[s] = usize::MAX;
            queue.clear();
            queue.push_back(s);
            'bfs: while let Some(u) = queue.pop_front() {
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for &w in &self.adjacency[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        best = best.min(dist[u] + dist[w] + 1);
                        if 2 * dist[u] + 1 >= best {
                            break 'bfs;
                        }
                    }
                }
            }
        }
        if best == usize::MAX {
            Girth::Infinite
        } else {
            Girth::Finite(best)
        }
    }

    /// Parameters `[|E|, |E| - |V| + 1]` of the cycle code of a connected graph.
    pub fn code_parameters(&self) -> Result<CodeParameters, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::NotConnected);
        }
        let m = self.edges.len();
        if m == 0 {
            return Err(GraphError::NoEdges);
        }
        let k = m + 1 - self.n;
        Ok(CodeParameters {
            n_code: m,
            k_code: k,
            rate: k as f64 / m as f64,
            girth: self.girth(),
        })
    }

    /// Repeatedly deletes vertices of degree at most one. Surviving vertices
    /// are relabelled densely in increasing order of their old ids.
    pub fn strip_degree_one(&self) -> Graph {
        self.strip_degree_one_with_map().0
    }

    /// As [`Self::strip_degree_one`], also returning the old id of each
    /// surviving vertex.
    pub fn strip_degree_one_with_map(&self) -> (Graph, Vec<usize>) {
        let mut deg = self.degrees();
        let mut alive = vec![true; self.n];
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| deg[v] <= 1).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &w in &self.adjacency[v] {
                if alive[w] {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        stack.push(w);
                    }
                }
            }
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| alive[v]).collect();
        let mut relabel = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            relabel[old] = new;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| alive[u] && alive[v])
            .map(|&(u, v)| (relabel[u], relabel[v]));
        let g = Graph::new(keep.len(), edges).expect("subgraph of a simple graph is simple");
        (g, keep)
    }
}
