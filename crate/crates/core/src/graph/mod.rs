//! Interaction graphs, coupling weights and vertex covers.

mod cover;
mod schema;
mod weights;

pub use cover::{validate_cover, vertex_cover, CoverMode, VertexCover, EXACT_COVER_LIMIT};
pub use schema::{load_graph, parse_graph, GraphSpec};
pub use weights::WeightMatrix;

use crate::{Error, Result};
use serde::Serialize;

/// Undirected simple graph on vertices `0..n`, edges stored as `(min, max)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InteractionGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip)]
    neighbors: Vec<Vec<usize>>,
}

impl InteractionGraph {
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut canon = Vec::with_capacity(edges.len());
        for (idx, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {idx} ({a}, {b}) has a vertex outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!(
                    "edge {idx} is a self-loop at vertex {a}"
                )));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        canon.dedup();
        let mut neighbors = vec![Vec::new(); n];
        for &(a, b) in &canon {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        let g = InteractionGraph {
            n,
            edges: canon,
            neighbors,
        };
        let degree_sum: usize = (0..n).map(|i| g.degree(i)).sum();
        assert_eq!(degree_sum, 2 * g.edges.len(), "handshake identity");
        Ok(g)
    }

    /// Star with center `0` and leaves `1..n`.
    pub fn star(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|j| (0, j)).collect();
        Self::from_edge_list(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|j| (j - 1, j)).collect();
        Self::from_edge_list(n, &edges)
    }

    pub fn ring(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!("ring needs n >= 3, got {n}")));
        }
        let edges: Vec<_> = (0..n).map(|j| (j, (j + 1) % n)).collect();
        Self::from_edge_list(n, &edges)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        Self::from_edge_list(n, &edges)
    }

    /// Parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for x in 0..a {
            for y in a..a + b {
                edges.push((x, y));
            }
        }
        Self::from_edge_list(a + b, &edges)
    }

    /// Hypercubic lattice with the given side lengths, periodic along every
    /// axis of length at least 3. Vertex index is row-major in the coordinates.
    pub fn lattice(dims: &[usize]) -> Result<Self> {
        Self::lattice_with(dims, true)
    }

    /// As [`InteractionGraph::lattice`], with wrap-around edges only when `periodic`.
    pub fn lattice_with(dims: &[usize], periodic: bool) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidGraph(format!("bad lattice dimensions {dims:?}")));
        }
        let n: usize = dims.iter().product();
        let mut strides = vec![1usize; dims.len()];
        for ax in (0..dims.len().saturating_sub(1)).rev() {
            strides[ax] = strides[ax + 1] * dims[ax + 1];
        }
        let mut edges = Vec::new();
        for v in 0..n {
            for (ax, &len) in dims.iter().enumerate() {
                let coord = (v / strides[ax]) % len;
                if coord + 1 < len {
                    edges.push((v, v + strides[ax]));
                } else if periodic && len >= 3 {
                    edges.push((v, v - coord * strides[ax]));
                }
            }
        }
        Self::from_edge_list(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && self.neighbors[a].binary_search(&b).is_ok()
    }

    /// Common degree if every vertex has the same nonzero degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let c = self.degree(0);
        (c > 0 && (0..self.n).all(|i| self.degree(i) == c)).then_some(c)
    }

    /// Center of a star: one vertex adjacent to all others, no other edges.
    pub fn star_center(&self) -> Option<usize> {
        if self.n < 2 || self.num_edges() != self.n - 1 {
            return None;
        }
        (0..self.n).find(|&i| self.degree(i) == self.n - 1)
    }
}
