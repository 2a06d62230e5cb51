//! The (3,6) pebble game for sparsity on subsets of at least three vertices.
//!
//! Every vertex starts with three pebbles; an accepted edge is directed out
//! of an endpoint and consumes one of its pebbles. The pebbles that can be
//! gathered on a vertex set `S` equal `min (3|V'| - |E(V')|)` over
//! `V' ⊇ S`, so an edge `uv` keeps every subset of three or more vertices
//! within `3|V'| - 6` exactly when seven pebbles can be gathered on
//! `{u, v, w}` for every other vertex `w`.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{Edge, Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityReport {
    pub sparse: bool,
    pub accepted: Vec<Edge>,
    pub rejected: Vec<Edge>,
    /// First rejected edge and a vertex set it overfills.
    pub violation: Option<(Edge, BTreeSet<Vertex>)>,
}

struct Game {
    pebbles: BTreeMap<Vertex, u8>,
    out: BTreeMap<Vertex, Vec<Vertex>>,
}

impl Game {
    fn new(vertices: impl Iterator<Item = Vertex>) -> Self {
        let vs: Vec<Vertex> = vertices.collect();
        Game {
            pebbles: vs.iter().map(|&v| (v, 3)).collect(),
            out: vs.iter().map(|&v| (v, Vec::new())).collect(),
        }
    }

    /// Moves one pebble onto `target` from a vertex outside `pinned`,
    /// reversing the directed path it travels along.
    fn fetch(&mut self, target: Vertex, pinned: &[Vertex]) -> bool {
        let mut parent: BTreeMap<Vertex, Vertex> = BTreeMap::new();
        let mut stack = vec![target];
        let mut seen: BTreeSet<Vertex> = [target].into_iter().collect();
        let mut found = None;
        while let Some(x) = stack.pop() {
            if x != target && !pinned.contains(&x) && self.pebbles[&x] > 0 {
                found = Some(x);
                break;
            }
            for &y in &self.out[&x] {
                if seen.insert(y) {
                    parent.insert(y, x);
                    stack.push(y);
                }
            }
        }
        let Some(src) = found else { return false };
        *self.pebbles.get_mut(&src).unwrap() -= 1;
        *self.pebbles.get_mut(&target).unwrap() += 1;
        let mut cur = src;
        while cur != target {
            let p = parent[&cur];
            let list = self.out.get_mut(&p).unwrap();
            let i = list.iter().position(|&z| z == cur).unwrap();
            list.swap_remove(i);
            self.out.get_mut(&cur).unwrap().push(p);
            cur = p;
        }
        true
    }

    fn reach(&self, from: &[Vertex]) -> BTreeSet<Vertex> {
        let mut seen: BTreeSet<Vertex> = from.iter().copied().collect();
        let mut stack: Vec<Vertex> = from.to_vec();
        while let Some(x) = stack.pop() {
            for &y in &self.out[&x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Tries to insert `u v`; on refusal returns the overfilled set.
    fn insert(&mut self, u: Vertex, v: Vertex) -> Result<(), BTreeSet<Vertex>> {
        while self.pebbles[&u] < 3 && self.fetch(u, &[v]) {}
        while self.pebbles[&v] < 3 && self.fetch(v, &[u]) {}
        debug_assert_eq!(self.pebbles[&u] + self.pebbles[&v], 6);
        let others: Vec<Vertex> = self.pebbles.keys().copied().filter(|&w| w != u && w != v).collect();
        for w in others {
            if self.pebbles[&w] == 0 && !self.fetch(w, &[u, v]) {
                // everything w reaches is pebble-free, so with u and v it is tight
                let mut set = self.reach(&[w]);
                set.insert(u);
                set.insert(v);
                return Err(set);
            }
        }
        let tail = if self.pebbles[&u] > 0 { u } else { v };
        let head = if tail == u { v } else { u };
        *self.pebbles.get_mut(&tail).unwrap() -= 1;
        self.out.get_mut(&tail).unwrap().push(head);
        Ok(())
    }
}

/// Runs the game over the edges in order.
pub fn sparsity_check(g: &Graph) -> SparsityReport {
    let mut game = Game::new(g.vertices());
    let mut rep = SparsityReport { sparse: true, accepted: Vec::new(), rejected: Vec::new(), violation: None };
    for e in g.edges() {
        match game.insert(e.0, e.1) {
            Ok(()) => rep.accepted.push(e),
            Err(set) => {
                rep.sparse = false;
                if rep.violation.is_none() {
                    rep.violation = Some((e, set));
                }
                rep.rejected.push(e);
            }
        }
    }
    rep
}

/// Edges of `g` with both ends in `set`.
pub fn induced_edge_count(g: &Graph, set: &BTreeSet<Vertex>) -> usize {
    g.edges().filter(|e| set.contains(&e.0) && set.contains(&e.1)).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: Vertex) -> Graph {
        let mut g = Graph::new();
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b);
            }
        }
        g
    }

    #[test]
    fn k4_is_sparse_k5_is_not() {
        assert!(sparsity_check(&complete(4)).sparse);
        let r = sparsity_check(&complete(5));
        assert!(!r.sparse);
        let (_, set) = r.violation.unwrap();
        assert!(induced_edge_count(&complete(5), &set) + 1 > 3 * set.len() - 6);
        assert_eq!(r.rejected.len(), 1);
    }

    #[test]
    fn violation_set_overfills() {
        // two K5s sharing an edge
        let mut g = complete(5);
        for a in 3..8 {
            for b in a + 1..8 {
                g.add_edge(a, b);
            }
        }
        let r = sparsity_check(&g);
        let (e, set) = r.violation.unwrap();
        assert!(set.contains(&e.0) && set.contains(&e.1));
        assert!(induced_edge_count(&g, &set) >= 3 * set.len() - 6);
    }
}
