//! Cycle splits and path splits on arbitrary graphs.
//!
//! A cycle split duplicates chosen vertices `i` of a cycle into `i'`, moves
//! the selected edges `S_i` to the duplicates and joins the two copies of
//! the cycle by a triangulated band: the copied cycle, the rungs `i i'` and
//! the diagonals `i (i+1)'`. Unsplit vertices act as their own duplicate;
//! loops and repeated edges are dropped, so each split vertex adds one
//! vertex and three edges. A chord between cycle vertices follows the
//! selections at its two ends.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSplitSpec {
    pub cycle: Vec<Vertex>,
    /// `selections[i]`: neighbours of `cycle[i]` whose edges move to the copy.
    pub selections: Vec<BTreeSet<Vertex>>,
    /// Whether `cycle[i]` is duplicated.
    pub split: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSplitSpec {
    pub path: Vec<Vertex>,
    /// One entry per path vertex; the two endpoint entries must be empty.
    pub selections: Vec<BTreeSet<Vertex>>,
}

/// One step of a plain-graph vertex split sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSplit {
    pub vertex: Vertex,
    pub new_vertex: Vertex,
    pub shared: [Vertex; 2],
    pub moved: Vec<Vertex>,
}

impl GraphSplit {
    pub fn apply(&self, g: &Graph) -> Result<Graph> {
        g.vertex_split(self.vertex, self.new_vertex, self.shared, &self.moved)
    }
}

/// Shared core: `seq` lists the vertices in order (closed for a cycle),
/// `dup` maps each vertex of `seq` to its copy (itself when unsplit).
fn band(
    g: &Graph,
    seq: &[Vertex],
    closed: bool,
    selections: &[BTreeSet<Vertex>],
    dup: &BTreeMap<Vertex, Vertex>,
) -> Graph {
    let k = seq.len();
    let pos: BTreeMap<Vertex, usize> = seq.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let on_seq = |a: Vertex, b: Vertex| {
        let (Some(&i), Some(&j)) = (pos.get(&a), pos.get(&b)) else { return false };
        let d = i.abs_diff(j);
        d == 1 || (closed && d == k - 1)
    };
    let end = |u: Vertex, v: Vertex| -> Vertex {
        match pos.get(&u) {
            Some(&i) if selections[i].contains(&v) => dup[&u],
            _ => u,
        }
    };
    let mut out = Graph::new();
    for v in g.vertices() {
        out.add_vertex(v);
    }
    for &c in dup.values() {
        out.add_vertex(c);
    }
    for e in g.edges() {
        if on_seq(e.0, e.1) {
            out.add_edge(e.0, e.1);
        } else {
            out.add_edge(end(e.0, e.1), end(e.1, e.0));
        }
    }
    let steps = if closed { k } else { k - 1 };
    for i in 0..steps {
        let (a, b) = (seq[i], seq[(i + 1) % k]);
        out.add_edge(dup[&a], dup[&b]);
        out.add_edge(a, dup[&b]);
    }
    for &v in seq {
        out.add_edge(v, dup[&v]);
    }
    out
}

fn check_selections(g: &Graph, seq: &[Vertex], closed: bool, selections: &[BTreeSet<Vertex>]) -> Result<()> {
    let k = seq.len();
    if selections.len() != k {
        return Err(Error::precondition("one selection set per vertex is required"));
    }
    let set: BTreeSet<Vertex> = seq.iter().copied().collect();
    if set.len() != k {
        return Err(Error::precondition("the cycle or path repeats a vertex"));
    }
    let steps = if closed { k } else { k - 1 };
    for i in 0..steps {
        if !g.has_edge(seq[i], seq[(i + 1) % k]) {
            return Err(Error::precondition(format!(
                "{}-{} is not an edge",
                seq[i],
                seq[(i + 1) % k]
            )));
        }
    }
    for (i, s) in selections.iter().enumerate() {
        let (prev, next) = (
            if i > 0 || closed { Some(seq[(i + k - 1) % k]) } else { None },
            if i + 1 < k || closed { Some(seq[(i + 1) % k]) } else { None },
        );
        for &w in s {
            if Some(w) == prev || Some(w) == next {
                return Err(Error::precondition(format!(
                    "selection at {} contains the cycle edge {}-{w}",
                    seq[i], seq[i]
                )));
            }
            if !g.has_edge(seq[i], w) {
                return Err(Error::precondition(format!("{w} is not a neighbour of {}", seq[i])));
            }
        }
    }
    Ok(())
}

fn cycle_dups(g: &Graph, spec: &CycleSplitSpec) -> Result<BTreeMap<Vertex, Vertex>> {
    let k = spec.cycle.len();
    if k < 3 {
        return Err(Error::precondition("a cycle needs at least three vertices"));
    }
    if spec.split.len() != k {
        return Err(Error::precondition("one split flag per cycle vertex is required"));
    }
    check_selections(g, &spec.cycle, true, &spec.selections)?;
    if !spec.split.iter().any(|&s| s) {
        return Err(Error::precondition("no vertex of the cycle is split"));
    }
    for (i, s) in spec.selections.iter().enumerate() {
        if !spec.split[i] && !s.is_empty() {
            return Err(Error::precondition(format!(
                "vertex {} is not split but has moved edges",
                spec.cycle[i]
            )));
        }
    }
    let mut next = g.max_vertex().map_or(0, |m| m + 1);
    let mut dup = BTreeMap::new();
    for (i, &v) in spec.cycle.iter().enumerate() {
        if spec.split[i] {
            dup.insert(v, next);
            next += 1;
        } else {
            dup.insert(v, v);
        }
    }
    Ok(dup)
}

/// Applies a cycle split; returns the new graph and the duplicate map.
pub fn cycle_split(g: &Graph, spec: &CycleSplitSpec) -> Result<(Graph, BTreeMap<Vertex, Vertex>)> {
    let dup = cycle_dups(g, spec)?;
    Ok((band(g, &spec.cycle, true, &spec.selections, &dup), dup))
}

fn path_dups(g: &Graph, spec: &PathSplitSpec) -> Result<BTreeMap<Vertex, Vertex>> {
    let k = spec.path.len();
    if k < 3 {
        return Err(Error::precondition("a path split needs a path of length at least 2"));
    }
    check_selections(g, &spec.path, false, &spec.selections)?;
    let (a, b) = (spec.path[0], spec.path[k - 1]);
    if g.has_edge(a, b) {
        return Err(Error::precondition(format!("path endpoints {a} and {b} are adjacent")));
    }
    if !spec.selections[0].is_empty() || !spec.selections[k - 1].is_empty() {
        return Err(Error::precondition("path endpoints are not duplicated"));
    }
    let mut next = g.max_vertex().map_or(0, |m| m + 1);
    let mut dup = BTreeMap::new();
    for (i, &v) in spec.path.iter().enumerate() {
        if i == 0 || i == k - 1 {
            dup.insert(v, v);
        } else {
            dup.insert(v, next);
            next += 1;
        }
    }
    Ok(dup)
}

/// Applies a path split: interior path vertices are duplicated and a
/// triangulated fence joins the path to its copy.
pub fn path_split(g: &Graph, spec: &PathSplitSpec) -> Result<(Graph, BTreeMap<Vertex, Vertex>)> {
    let dup = path_dups(g, spec)?;
    Ok((band(g, &spec.path, false, &spec.selections, &dup), dup))
}

/// Recovers the vertex splits taking `g` to `target`, splitting the
/// duplicated vertices in the given order.
fn split_sequence(g: &Graph, target: &Graph, order: &[(Vertex, Vertex)]) -> Result<Vec<GraphSplit>> {
    // stage t merges the copies of the splits not yet performed
    let stage = |t: usize| -> Graph {
        let merge: BTreeMap<Vertex, Vertex> = order[t..].iter().map(|&(v, c)| (c, v)).collect();
        let phi = |v: Vertex| *merge.get(&v).unwrap_or(&v);
        let mut h = Graph::new();
        for v in target.vertices() {
            h.add_vertex(phi(v));
        }
        for e in target.edges() {
            h.add_edge(phi(e.0), phi(e.1));
        }
        h
    };
    let mut cur = stage(0);
    if &cur != g {
        return Err(Error::Verification("merging every copy does not give back the input".into()));
    }
    let mut seq = Vec::new();
    for (t, &(v, c)) in order.iter().enumerate() {
        let after = stage(t + 1);
        let a: BTreeSet<Vertex> = after.neighbors(v).filter(|&w| w != c).collect();
        let b: BTreeSet<Vertex> = after.neighbors(c).filter(|&w| w != v).collect();
        let shared: Vec<Vertex> = a.intersection(&b).copied().collect();
        if shared.len() != 2 {
            return Err(Error::Verification(format!(
                "splitting {v} shares {} neighbours, not 2",
                shared.len()
            )));
        }
        let step = GraphSplit {
            vertex: v,
            new_vertex: c,
            shared: [shared[0], shared[1]],
            moved: b.difference(&a).copied().collect(),
        };
        let next = step.apply(&cur)?;
        if next != after {
            return Err(Error::Verification(format!("split of {v} does not reproduce the stage graph")));
        }
        seq.push(step);
        cur = next;
    }
    Ok(seq)
}

/// The vertex-split sequence realising a cycle split, in cycle order.
pub fn cycle_split_sequence(g: &Graph, spec: &CycleSplitSpec) -> Result<Vec<GraphSplit>> {
    let (target, dup) = cycle_split(g, spec)?;
    let order: Vec<(Vertex, Vertex)> = spec
        .cycle
        .iter()
        .filter(|v| dup[v] != **v)
        .map(|&v| (v, dup[&v]))
        .collect();
    split_sequence(g, &target, &order)
}

/// The vertex-split sequence realising a path split, along the path.
pub fn path_split_sequence(g: &Graph, spec: &PathSplitSpec) -> Result<Vec<GraphSplit>> {
    let (target, dup) = path_split(g, spec)?;
    let order: Vec<(Vertex, Vertex)> = spec
        .path
        .iter()
        .filter(|v| dup[v] != **v)
        .map(|&v| (v, dup[&v]))
        .collect();
    split_sequence(g, &target, &order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

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
    fn triangle_of_k5_split_everywhere() {
        let g = complete(5);
        let spec = CycleSplitSpec {
            cycle: vec![0, 1, 2],
            selections: vec![BTreeSet::new(); 3],
            split: vec![true; 3],
        };
        let (h, _) = cycle_split(&g, &spec).unwrap();
        assert_eq!(h.vertex_count(), 8);
        assert_eq!(h.edge_count(), 10 + 9);
        let seq = cycle_split_sequence(&g, &spec).unwrap();
        let mut cur = g.clone();
        for s in &seq {
            cur = s.apply(&cur).unwrap();
        }
        assert_eq!(cur, h);
    }

    #[test]
    fn unsplit_cycle_rejected() {
        let g = complete(5);
        let spec = CycleSplitSpec {
            cycle: vec![0, 1, 2],
            selections: vec![BTreeSet::new(); 3],
            split: vec![false; 3],
        };
        assert!(cycle_split(&g, &spec).is_err());
    }

    #[test]
    fn cycle_edge_in_selection_rejected() {
        let g = complete(5);
        let spec = CycleSplitSpec {
            cycle: vec![0, 1, 2],
            selections: vec![[1].into_iter().collect(), BTreeSet::new(), BTreeSet::new()],
            split: vec![true; 3],
        };
        assert!(cycle_split(&g, &spec).is_err());
    }

    #[test]
    fn length_two_path_split_is_a_vertex_split() {
        let mut g = complete(5);
        g.remove_edge(0, 2);
        let spec = PathSplitSpec {
            path: vec![0, 1, 2],
            selections: vec![BTreeSet::new(), [3].into_iter().collect(), BTreeSet::new()],
        };
        let (h, dup) = path_split(&g, &spec).unwrap();
        let direct = g.vertex_split(1, dup[&1], [0, 2], &[3]).unwrap();
        assert_eq!(h, direct);
    }

    #[test]
    fn path_split_counts() {
        let g = Graph::from_edges((0..6).map(|i| Edge::new(i, i + 1)));
        let spec = PathSplitSpec { path: vec![0, 1, 2, 3, 4], selections: vec![BTreeSet::new(); 5] };
        let (h, _) = path_split(&g, &spec).unwrap();
        assert_eq!(h.edge_count(), g.edge_count() + 3 * 3);
        assert_eq!(path_split_sequence(&g, &spec).unwrap().len(), 3);
    }

    #[test]
    fn adjacent_path_ends_rejected() {
        let g = complete(4);
        let spec = PathSplitSpec { path: vec![0, 1, 2], selections: vec![BTreeSet::new(); 3] };
        assert!(path_split(&g, &spec).is_err());
    }
}
