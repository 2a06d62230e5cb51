//! Combinatorial necessary conditions: block/hole balance, (3,6)-sparsity,
//! separation of blocks and holes, cut cycles and Menger path counts.

mod cut;
mod pebble;

pub use cut::{cut_cycle_check, enumerate_cut_cycles, CutCycle, CutReport, CutSide, Step, MAX_CUT_BOUND};
pub use pebble::{induced_edge_count, sparsity_check, SparsityReport};

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::graph::{Edge, Graph, Vertex};
use crate::poly::{FaceRef, Polyhedron};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Balance {
    pub blocks: i64,
    pub holes: i64,
}

impl Balance {
    pub fn balanced(&self) -> bool {
        self.blocks == self.holes
    }
}

/// `sum (b_i - 3)` against `sum (h_j - 3)`.
pub fn balance_check(p: &Polyhedron) -> Balance {
    Balance {
        blocks: p.blocks.iter().map(|b| b.size() as i64 - 3).sum(),
        holes: p.holes.iter().map(|h| h.size() as i64 - 3).sum(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationViolation {
    /// 1: two blocks (or two holes) meet badly; 2: an outside edge joins two
    /// vertices of a block or hole.
    pub clause: u8,
    pub detail: String,
    pub witness: Vec<Vertex>,
}

impl fmt::Display for SeparationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause {}: {} {:?}", self.clause, self.detail, self.witness)
    }
}

fn pairwise(
    name: &str,
    cycles: &[Vec<Vertex>],
    has_edge: impl Fn(Vertex, Vertex) -> bool,
    out: &mut Vec<SeparationViolation>,
) {
    for i in 0..cycles.len() {
        let a: BTreeSet<Vertex> = cycles[i].iter().copied().collect();
        for (j, cj) in cycles.iter().enumerate().skip(i + 1) {
            let common: Vec<Vertex> = cj.iter().copied().filter(|v| a.contains(v)).collect();
            let bad = common.len() > 2 || (common.len() == 2 && !has_edge(common[0], common[1]));
            if bad {
                out.push(SeparationViolation {
                    clause: 1,
                    detail: format!("{name}s {i} and {j} meet in {} vertices without a shared edge", common.len()),
                    witness: common,
                });
            }
        }
    }
}

fn chords(name: &str, cycles: &[Vec<Vertex>], g: &Graph, out: &mut Vec<SeparationViolation>) {
    for (i, c) in cycles.iter().enumerate() {
        let n = c.len();
        let on: BTreeSet<Vertex> = c.iter().copied().collect();
        let ring: BTreeSet<Edge> = (0..n).map(|k| Edge::new(c[k], c[(k + 1) % n])).collect();
        for &u in c {
            for w in g.neighbors(u) {
                if u < w && on.contains(&w) && !ring.contains(&Edge::new(u, w)) {
                    out.push(SeparationViolation {
                        clause: 2,
                        detail: format!("{name} {i} has the outside edge {u}-{w}"),
                        witness: vec![u, w],
                    });
                }
            }
        }
    }
}

/// Checks that blocks (and holes) pairwise meet in at most an edge and that
/// no surface edge joins two non-consecutive vertices of a block or hole.
pub fn separation_check(p: &Polyhedron) -> Vec<SeparationViolation> {
    let topo = p.topology();
    let mut out = Vec::new();
    let blocks: Vec<Vec<Vertex>> = p.blocks.iter().map(|b| b.boundary.clone()).collect();
    let holes: Vec<Vec<Vertex>> = p.holes.iter().map(|h| h.boundary.clone()).collect();
    pairwise("block", &blocks, |a, b| topo.has_edge(a, b), &mut out);
    pairwise("hole", &holes, |a, b| topo.has_edge(a, b), &mut out);
    let g = topo.graph();
    chords("block", &blocks, &g, &mut out);
    chords("hole", &holes, &g, &mut out);
    out
}

/// Maximum number of vertex-disjoint paths from `a` to `b` together with a
/// minimum vertex cut separating them.
pub fn vertex_disjoint_paths(g: &Graph, a: &BTreeSet<Vertex>, b: &BTreeSet<Vertex>) -> (usize, Vec<Vertex>) {
    // node 2i is v_in, 2i+1 is v_out; source and sink at the end
    let verts: Vec<Vertex> = g.vertices().collect();
    let idx: BTreeMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = 2 * verts.len() + 2;
    let (s, t) = (n - 2, n - 1);
    let big = usize::MAX / 4;
    let mut cap: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
    let add = |cap: &mut Vec<BTreeMap<usize, usize>>, x: usize, y: usize, c: usize| {
        *cap[x].entry(y).or_insert(0) += c;
        cap[y].entry(x).or_insert(0);
    };
    for (i, &v) in verts.iter().enumerate() {
        add(&mut cap, 2 * i, 2 * i + 1, 1);
        for w in g.neighbors(v) {
            add(&mut cap, 2 * i + 1, 2 * idx[&w], big);
        }
        if a.contains(&v) {
            add(&mut cap, s, 2 * i, big);
        }
        if b.contains(&v) {
            add(&mut cap, 2 * i + 1, t, big);
        }
    }
    let mut flow = 0;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            if x == t {
                break;
            }
            for (&y, &c) in &cap[x] {
                if c > 0 && parent[y] == usize::MAX {
                    parent[y] = x;
                    q.push_back(y);
                }
            }
        }
        if parent[t] == usize::MAX {
            let cut = verts
                .iter()
                .enumerate()
                .filter(|(i, _)| parent[2 * i] != usize::MAX && parent[2 * i + 1] == usize::MAX)
                .map(|(_, &v)| v)
                .collect();
            return (flow, cut);
        }
        let mut y = t;
        while y != s {
            let x = parent[y];
            *cap[x].get_mut(&y).unwrap() -= 1;
            *cap[y].get_mut(&x).unwrap() += 1;
            y = x;
        }
        flow += 1;
    }
}

fn face_vertices(p: &Polyhedron, f: FaceRef) -> BTreeSet<Vertex> {
    p.face_boundary(f).unwrap_or_default().into_iter().collect()
}

/// Vertex-disjoint paths between the boundaries of two faces.
pub fn menger_paths(p: &Polyhedron, a: FaceRef, b: FaceRef) -> crate::Result<usize> {
    if a == b {
        return Err(crate::Error::precondition("the two faces must differ"));
    }
    Ok(vertex_disjoint_paths(&p.topology().graph(), &face_vertices(p, a), &face_vertices(p, b)).0)
}

/// A minimum vertex cut between two faces' boundaries.
pub fn min_vertex_cut(p: &Polyhedron, a: FaceRef, b: FaceRef) -> Vec<Vertex> {
    vertex_disjoint_paths(&p.topology().graph(), &face_vertices(p, a), &face_vertices(p, b)).1
}
