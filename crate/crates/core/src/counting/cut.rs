//! Cut cycles: closed vertex sequences whose steps are surface edges or
//! chords through a shared triangulated disc.
//!
//! Disc interior vertices are never on a cut cycle (a chord through the
//! disc does the same job) and block braces are ignored, since they are
//! not surface edges.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::graph::{Edge, Vertex};
use crate::poly::{FaceRef, Polyhedron};
use crate::poly::DiscId;
use crate::{Error, Result};

/// Enumeration is exponential in the cycle size.
pub const MAX_CUT_BOUND: usize = 12;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Edge,
    Chord(DiscId),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Edge => write!(f, "edge"),
            Step::Chord(d) => write!(f, "chord@{d}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CutSide {
    pub blocks: Vec<usize>,
    pub holes: Vec<usize>,
    /// `sum (b - 3) - sum (h - 3)` over this side.
    pub excess: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutCycle {
    pub vertices: Vec<Vertex>,
    /// `steps[i]` joins `vertices[i]` to `vertices[i + 1]` (cyclically).
    pub steps: Vec<Step>,
    pub sides: [CutSide; 2],
}

impl CutCycle {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn bound(&self) -> i64 {
        self.size() as i64 - 3
    }

    pub fn violated(&self) -> bool {
        self.sides.iter().any(|s| s.excess > self.bound())
    }

    pub fn pure_edges(&self) -> bool {
        self.steps.iter().all(|s| *s == Step::Edge)
    }

    /// Whether `a` and `b` lie on opposite sides.
    pub fn separates(&self, a: FaceRef, b: FaceRef) -> bool {
        let side = |f: FaceRef| {
            self.sides.iter().position(|s| match f {
                FaceRef::Block(i) => s.blocks.contains(&i),
                FaceRef::Hole(i) => s.holes.contains(&i),
                FaceRef::Disc(_) => false,
            })
        };
        matches!((side(a), side(b)), (Some(x), Some(y)) if x != y)
    }

    /// `cut-cycle,<vertices>,<steps>,<excess side 0>,<excess side 1>,<c-3>`.
    pub fn csv_row(&self) -> String {
        let vs: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        let st: Vec<String> = self.steps.iter().map(|s| s.to_string()).collect();
        format!(
            "cut-cycle,{},{},{},{},{}",
            vs.join(" "),
            st.join(" "),
            self.sides[0].excess,
            self.sides[1].excess,
            self.bound()
        )
    }
}

#[derive(Clone, Debug)]
pub struct CutReport {
    pub max_c: usize,
    pub enumerated: usize,
    /// Vertex sequences rejected because two chords cross inside a disc.
    pub crossing: usize,
    pub cycles: Vec<CutCycle>,
}

impl CutReport {
    pub fn violations(&self) -> impl Iterator<Item = &CutCycle> {
        self.cycles.iter().filter(|c| c.violated())
    }
}

fn adjacency(p: &Polyhedron) -> BTreeMap<Vertex, Vec<(Vertex, Step)>> {
    let interior = p.interior_vertices();
    let owners = p.dart_owners();
    let mut adj: BTreeMap<Vertex, Vec<(Vertex, Step)>> =
        p.vertices().filter(|v| !interior.contains(v)).map(|v| (v, Vec::new())).collect();
    for e in p.topology().edges() {
        if owners.get(&(e.0, e.1)) != owners.get(&(e.1, e.0)) {
            adj.get_mut(&e.0).unwrap().push((e.1, Step::Edge));
            adj.get_mut(&e.1).unwrap().push((e.0, Step::Edge));
        }
    }
    for (&id, d) in &p.discs {
        let b = d.boundary().expect("validated disc");
        let n = b.len();
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                adj.get_mut(&b[i]).unwrap().push((b[j], Step::Chord(id)));
                adj.get_mut(&b[j]).unwrap().push((b[i], Step::Chord(id)));
            }
        }
    }
    for list in adj.values_mut() {
        list.sort();
    }
    adj
}

/// Splits a polygon along non-crossing chords; `None` when two chords cross.
fn split_polygon(poly: Vec<Vertex>, chords: &[Edge]) -> Option<Vec<Vec<Vertex>>> {
    let mut done = Vec::new();
    let mut todo = vec![poly];
    while let Some(pg) = todo.pop() {
        let n = pg.len();
        let pos = |v: Vertex| pg.iter().position(|&x| x == v);
        let cut = chords.iter().find_map(|c| {
            let (i, j) = (pos(c.0)?, pos(c.1)?);
            let (i, j) = (i.min(j), i.max(j));
            (j - i >= 2 && !(i == 0 && j == n - 1)).then_some((i, j))
        });
        match cut {
            Some((i, j)) => {
                todo.push(pg[i..=j].to_vec());
                let mut other = pg[j..].to_vec();
                other.extend_from_slice(&pg[..=i]);
                todo.push(other);
            }
            None => done.push(pg),
        }
    }
    // every chord must end up as a side of some piece
    let sides: BTreeSet<Edge> = done
        .iter()
        .flat_map(|pg| (0..pg.len()).map(move |k| Edge::new(pg[k], pg[(k + 1) % pg.len()])))
        .collect();
    chords.iter().all(|c| sides.contains(c)).then_some(done)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Owner {
    Block(usize),
    Hole(usize),
    Disc,
}

fn sides_of(p: &Polyhedron, vertices: &[Vertex], steps: &[Step]) -> Option<[CutSide; 2]> {
    let c = vertices.len();
    let step_set: BTreeSet<(Edge, Step)> =
        (0..c).map(|i| (Edge::new(vertices[i], vertices[(i + 1) % c]), steps[i])).collect();
    let mut pieces: Vec<(Owner, Vec<Vertex>)> = Vec::new();
    for (i, b) in p.blocks.iter().enumerate() {
        pieces.push((Owner::Block(i), b.boundary.clone()));
    }
    for (i, h) in p.holes.iter().enumerate() {
        pieces.push((Owner::Hole(i), h.boundary.clone()));
    }
    for (&id, d) in &p.discs {
        let chords: Vec<Edge> = step_set
            .iter()
            .filter(|(_, s)| *s == Step::Chord(id))
            .map(|(e, _)| *e)
            .collect();
        for pg in split_polygon(d.boundary().ok()?, &chords)? {
            pieces.push((Owner::Disc, pg));
        }
    }
    // pieces meeting across a surface edge that is not on the cycle
    let mut by_edge: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (k, (_, pg)) in pieces.iter().enumerate() {
        for i in 0..pg.len() {
            let e = Edge::new(pg[i], pg[(i + 1) % pg.len()]);
            if p.topology().has_edge(e.0, e.1) && !step_set.contains(&(e, Step::Edge)) {
                by_edge.entry(e).or_default().push(k);
            }
        }
    }
    let mut nbrs = vec![Vec::new(); pieces.len()];
    for ks in by_edge.values() {
        for &a in ks {
            for &b in ks {
                if a != b {
                    nbrs[a].push(b);
                }
            }
        }
    }
    let mut comp = vec![usize::MAX; pieces.len()];
    let mut count = 0;
    for s in 0..pieces.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &y in &nbrs[x] {
                if comp[y] == usize::MAX {
                    comp[y] = count;
                    q.push_back(y);
                }
            }
        }
        count += 1;
    }
    if count != 2 {
        log::warn!("cut cycle {vertices:?} gave {count} regions");
        return None;
    }
    let mut sides: [CutSide; 2] = Default::default();
    for (k, (owner, _)) in pieces.iter().enumerate() {
        let s = &mut sides[comp[k]];
        match *owner {
            Owner::Block(i) => {
                s.blocks.push(i);
                s.excess += p.blocks[i].size() as i64 - 3;
            }
            Owner::Hole(i) => {
                s.holes.push(i);
                s.excess -= p.holes[i].size() as i64 - 3;
            }
            Owner::Disc => {}
        }
    }
    Some(sides)
}

/// Every cut cycle with at most `max_c` vertices, each with its two sides.
pub fn enumerate_cut_cycles(p: &Polyhedron, max_c: usize) -> Result<CutReport> {
    if max_c > MAX_CUT_BOUND {
        return Err(Error::precondition(format!(
            "cut cycles of size {max_c} are out of reach; use a bound of at most {MAX_CUT_BOUND}"
        )));
    }
    let adj = adjacency(p);
    let mut report = CutReport { max_c, enumerated: 0, crossing: 0, cycles: Vec::new() };
    for &s in adj.keys() {
        let mut path = vec![s];
        let mut steps = Vec::new();
        extend(p, &adj, max_c, &mut path, &mut steps, &mut report);
    }
    Ok(report)
}

fn extend(
    p: &Polyhedron,
    adj: &BTreeMap<Vertex, Vec<(Vertex, Step)>>,
    max_c: usize,
    path: &mut Vec<Vertex>,
    steps: &mut Vec<Step>,
    report: &mut CutReport,
) {
    let s = path[0];
    let last = *path.last().unwrap();
    for &(w, step) in &adj[&last] {
        if w == s {
            if path.len() >= 3 && path[1] < last {
                steps.push(step);
                report.enumerated += 1;
                match sides_of(p, path, steps) {
                    Some(sides) => report.cycles.push(CutCycle {
                        vertices: path.clone(),
                        steps: steps.clone(),
                        sides,
                    }),
                    None => report.crossing += 1,
                }
                steps.pop();
            }
        } else if w > s && path.len() < max_c && !path.contains(&w) {
            path.push(w);
            steps.push(step);
            extend(p, adj, max_c, path, steps, report);
            path.pop();
            steps.pop();
        }
    }
}

/// Cut cycles of size at most `max_c` that violate the side inequality.
pub fn cut_cycle_check(p: &Polyhedron, max_c: usize) -> Result<Vec<CutCycle>> {
    Ok(enumerate_cut_cycles(p, max_c)?.cycles.into_iter().filter(|c| c.violated()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_square_along_diagonal() {
        let parts = split_polygon(vec![0, 1, 2, 3], &[Edge::new(0, 2)]).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(split_polygon(vec![0, 1, 2, 3], &[Edge::new(0, 2), Edge::new(1, 3)]).is_none());
    }

    #[test]
    fn rejects_large_bound() {
        let p = Polyhedron::from_unoriented(
            vec![],
            vec![],
            vec![(0, vec![[0, 1, 2], [0, 2, 3]]), (1, vec![[1, 3, 2], [0, 3, 1]])],
        )
        .unwrap();
        assert!(enumerate_cut_cycles(&p, 13).is_err());
        let r = enumerate_cut_cycles(&p, 4).unwrap();
        assert!(r.cycles.iter().all(|c| !c.violated()));
    }
}
