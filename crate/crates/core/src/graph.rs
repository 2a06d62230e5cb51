//! Plain undirected simple graphs, used by the rank kernel, the counting
//! checks and the splits that operate on arbitrary (non-embedded) graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Unordered vertex pair, stored with the smaller identifier first.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(pub Vertex, pub Vertex);

impl Edge {
    pub fn new(a: Vertex, b: Vertex) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0 == v || self.1 == v
    }

    pub fn other(&self, v: Vertex) -> Vertex {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges<I: IntoIterator<Item = Edge>>(edges: I) -> Self {
        let mut g = Graph::new();
        for e in edges {
            g.add_edge(e.0, e.1);
        }
        g
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.adj.entry(v).or_default();
    }

    /// Inserts the edge; returns `false` if it was already present.
    /// Self-loops are ignored.
    pub fn add_edge(&mut self, a: Vertex, b: Vertex) -> bool {
        if a == b {
            return false;
        }
        let fresh = self.adj.entry(a).or_default().insert(b);
        self.adj.entry(b).or_default().insert(a);
        fresh
    }

    pub fn remove_edge(&mut self, a: Vertex, b: Vertex) -> bool {
        let had = self.adj.get_mut(&a).map_or(false, |s| s.remove(&b));
        if let Some(s) = self.adj.get_mut(&b) {
            s.remove(&a);
        }
        had
    }

    /// Removes the vertex and its edges.
    pub fn remove_vertex(&mut self, v: Vertex) {
        for w in self.adj.remove(&v).unwrap_or_default() {
            if let Some(s) = self.adj.get_mut(&w) {
                s.remove(&v);
            }
        }
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.adj.get(&a).map_or(false, |s| s.contains(&b))
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj.get(&v).map_or(0, |s| s.len())
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .flat_map(|(&a, s)| s.range(a + 1..).map(move |&b| Edge(a, b)))
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.adj.keys().next_back().copied()
    }

    pub fn common_neighbors(&self, a: Vertex, b: Vertex) -> Vec<Vertex> {
        match (self.adj.get(&a), self.adj.get(&b)) {
            (Some(x), Some(y)) => x.intersection(y).copied().collect(),
            _ => Vec::new(),
        }
    }

    /// Subgraph induced on `keep`.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> Graph {
        let mut g = Graph::new();
        for &v in keep {
            if self.contains_vertex(v) {
                g.add_vertex(v);
            }
        }
        for e in self.edges() {
            if keep.contains(&e.0) && keep.contains(&e.1) {
                g.add_edge(e.0, e.1);
            }
        }
        g
    }

    /// Connected components of the graph with `removed` deleted.
    pub fn components_without(&self, removed: &BTreeSet<Vertex>) -> Vec<BTreeSet<Vertex>> {
        let mut seen: BTreeSet<Vertex> = removed.clone();
        let mut out = Vec::new();
        for start in self.vertices() {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for w in self.neighbors(v) {
                    if seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components_without(&BTreeSet::new()).len() <= 1
    }

    /// Brute-force vertex 3-connectivity: no one or two vertices disconnect
    /// the graph. Quadratic in |V| connectivity checks.
    pub fn is_three_connected(&self) -> bool {
        let vs: Vec<Vertex> = self.vertices().collect();
        if vs.len() < 4 {
            return false;
        }
        if !self.is_connected() {
            return false;
        }
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i..] {
                let removed: BTreeSet<Vertex> = [a, b].into_iter().collect();
                if self.components_without(&removed).len() > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Vertex split on an arbitrary graph: `x` keeps its edges except those to
    /// `moved`, which are transferred to the new vertex `new`; both `x` and
    /// `new` are joined to the two `shared` neighbours and to each other.
    pub fn vertex_split(
        &self,
        x: Vertex,
        new: Vertex,
        shared: [Vertex; 2],
        moved: &[Vertex],
    ) -> Result<Graph> {
        if !self.contains_vertex(x) {
            return Err(Error::precondition(format!("vertex {x} not in graph")));
        }
        if self.contains_vertex(new) {
            return Err(Error::precondition(format!("vertex {new} already exists")));
        }
        if shared[0] == shared[1] {
            return Err(Error::precondition("shared neighbours must be distinct"));
        }
        for &s in &shared {
            if !self.has_edge(x, s) {
                return Err(Error::precondition(format!("{s} is not a neighbour of {x}")));
            }
            if moved.contains(&s) {
                return Err(Error::precondition("a shared neighbour cannot also be moved"));
            }
        }
        let mut g = self.clone();
        for &m in moved {
            if !g.remove_edge(x, m) {
                return Err(Error::precondition(format!("{m} is not a neighbour of {x}")));
            }
            g.add_edge(new, m);
        }
        g.add_edge(x, new);
        g.add_edge(new, shared[0]);
        g.add_edge(new, shared[1]);
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: Vertex) -> Graph {
        let mut g = Graph::new();
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b);
            }
        }
        g
    }

    #[test]
    fn complete_graph_counts() {
        let g = k(5);
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 10);
        assert!(g.is_three_connected());
    }

    #[test]
    fn split_adds_one_vertex_three_edges() {
        let g = k(4);
        let s = g.vertex_split(0, 4, [1, 2], &[3]).unwrap();
        assert_eq!(s.vertex_count(), 5);
        assert_eq!(s.edge_count(), 9);
        assert!(s.has_edge(4, 3) && !s.has_edge(0, 3));
    }

    #[test]
    fn cycle_is_not_three_connected() {
        let g = Graph::from_edges((0..6).map(|i| Edge::new(i, (i + 1) % 6)));
        assert!(!g.is_three_connected());
    }
}
