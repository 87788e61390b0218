//! Minimal undirected graph views shared by the torus builder, the
//! automorphism search and the Cayley graph constructor.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Read-only adjacency access over points `0..order()`.
pub trait Adjacency {
    fn order(&self) -> usize;

    /// Neighbors of `point`, sorted ascending.
    fn neighbors_of(&self, point: usize) -> &[usize];

    fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.order() && self.neighbors_of(a).binary_search(&b).is_ok()
    }

    fn degree(&self, point: usize) -> usize {
        self.neighbors_of(point).len()
    }

    /// Number of undirected edges, counting each `{a, b}` once.
    fn size(&self) -> usize {
        (0..self.order()).map(|p| self.degree(p)).sum::<usize>() / 2
    }

    /// Edges as `(a, b)` with `a < b`, sorted.
    fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.size());
        for a in 0..self.order() {
            for &b in self.neighbors_of(a) {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Breadth-first distances from `source`; `usize::MAX` marks unreachable points.
    fn distances_from(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.order()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(p) = queue.pop_front() {
            for &q in self.neighbors_of(p) {
                if dist[q] == usize::MAX {
                    dist[q] = dist[p] + 1;
                    queue.push_back(q);
                }
            }
        }
        dist
    }

    fn is_connected(&self) -> bool {
        self.order() == 0 || self.distances_from(0).iter().all(|&d| d != usize::MAX)
    }
}

/// A simple undirected graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    adjacency: Vec<Vec<usize>>,
}

impl SimpleGraph {
    /// Builds a graph on `order` points; duplicate edges collapse, loops are rejected.
    pub fn from_edges(order: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); order];
        for (a, b) in edges {
            if a >= order || b >= order {
                return Err(Error::Range(format!("edge ({a}, {b}) on {order} points")));
            }
            if a == b {
                return Err(Error::Parameter(format!("self-loop at point {a}")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(SimpleGraph { adjacency })
    }

    pub fn cycle(len: usize) -> Result<Self> {
        if len < 3 {
            return Err(Error::Parameter(format!("a cycle needs at least 3 points, got {len}")));
        }
        Self::from_edges(len, (0..len).map(|k| (k, (k + 1) % len)))
    }

    pub fn complete(order: usize) -> Self {
        let edges = (0..order).flat_map(|a| (a + 1..order).map(move |b| (a, b)));
        Self::from_edges(order, edges).expect("complete graph edges are in range")
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut degs: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        degs.sort_unstable();
        degs
    }
}

impl Adjacency for SimpleGraph {
    fn order(&self) -> usize {
        self.adjacency.len()
    }

    fn neighbors_of(&self, point: usize) -> &[usize] {
        &self.adjacency[point]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_counts() {
        let k4 = SimpleGraph::complete(4);
        assert_eq!(k4.order(), 4);
        assert_eq!(k4.size(), 6);
        assert_eq!(k4.edges(), vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn cycle_distances() {
        let c6 = SimpleGraph::cycle(6).unwrap();
        assert_eq!(c6.distances_from(0), vec![0, 1, 2, 3, 2, 1]);
        assert!(c6.is_connected());
    }

    #[test]
    fn disconnected_and_bad_edges() {
        let g = SimpleGraph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!g.is_connected());
        assert!(SimpleGraph::from_edges(3, [(0, 3)]).is_err());
        assert!(SimpleGraph::from_edges(3, [(1, 1)]).is_err());
        assert!(SimpleGraph::cycle(2).is_err());
    }
}
