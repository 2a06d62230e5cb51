//! Graph surgery on block-and-hole polyhedra.
//!
//! Every move edits the oriented face list, rebuilds the rotation system from
//! it and revalidates the partition, so a move either yields a valid
//! polyhedron or fails with an error.

mod cycle;

pub use cycle::{cycle_split, cycle_split_sequence, path_split, path_split_sequence, CycleSplitSpec, GraphSplit, PathSplitSpec};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{Edge, Vertex};
use crate::poly::{Block, Disc, DiscId, FaceRef, Hole, Polyhedron};

/// A vertex split of `vertex` along the two `shared` neighbours.
///
/// Around `vertex` in counter-clockwise order the neighbours read
/// `shared[0], moved.., shared[1], kept..`. The new vertex takes the moved
/// arc and both shared neighbours; `vertex` keeps the rest; the edge
/// between the two is added. The two new triangles
/// `(vertex, shared[0], new_vertex)` and `(new_vertex, shared[1], vertex)`
/// go to `discs[0]` and `discs[1]`, or to a neighbouring disc when unset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSpec {
    pub vertex: Vertex,
    pub new_vertex: Vertex,
    pub shared: [Vertex; 2],
    pub moved: Vec<Vertex>,
    pub discs: [Option<DiscId>; 2],
}

/// Everything needed to undo one edge contraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionMove {
    pub survivor: Vertex,
    pub absorbed: Vertex,
    /// Apexes of the triangles `(survivor, absorbed, apex[0])` and
    /// `(absorbed, survivor, apex[1])`.
    pub apex: [Vertex; 2],
    /// Discs that held those two triangles.
    pub discs: [DiscId; 2],
    /// Other neighbours of the absorbed vertex, counter-clockwise from
    /// `apex[1]` to `apex[0]`.
    pub moved: Vec<Vertex>,
    /// Sorted common neighbours of the two endpoints before contraction.
    pub witness: Vec<Vertex>,
}

impl ContractionMove {
    pub fn edge(&self) -> Edge {
        Edge::new(self.survivor, self.absorbed)
    }
}

/// The vertex split undoing a contraction.
pub fn invert(m: &ContractionMove) -> SplitSpec {
    SplitSpec {
        vertex: m.survivor,
        new_vertex: m.absorbed,
        shared: [m.apex[1], m.apex[0]],
        moved: m.moved.clone(),
        discs: [Some(m.discs[1]), Some(m.discs[0])],
    }
}

/// Mutable copy of a polyhedron's partition.
#[derive(Clone, Debug)]
pub(crate) struct Parts {
    pub blocks: Vec<Block>,
    pub holes: Vec<Hole>,
    pub discs: BTreeMap<DiscId, Disc>,
    pub next_id: Vertex,
}

impl Parts {
    pub fn of(p: &Polyhedron) -> Self {
        Parts {
            blocks: p.blocks.clone(),
            holes: p.holes.clone(),
            discs: p.discs.clone(),
            next_id: p.next_id(),
        }
    }

    pub fn build(self) -> Result<Polyhedron> {
        Polyhedron::from_parts(self.blocks, self.holes, self.discs, Some(self.next_id))
    }

    fn disc_mut(&mut self, id: DiscId) -> &mut Disc {
        self.discs.entry(id).or_default()
    }
}

fn owner_disc(owners: &std::collections::HashMap<(Vertex, Vertex), FaceRef>, a: Vertex, b: Vertex) -> Option<DiscId> {
    let mut ids: Vec<DiscId> = [owners.get(&(a, b)), owners.get(&(b, a))]
        .into_iter()
        .flatten()
        .filter_map(|r| match r {
            FaceRef::Disc(id) => Some(*id),
            _ => None,
        })
        .collect();
    ids.sort_unstable();
    ids.first().copied()
}

/// Neighbours strictly between positions `from` and `to`, counter-clockwise.
fn arc(rot: &[Vertex], from: usize, to: usize) -> Vec<Vertex> {
    let d = rot.len();
    let mut out = Vec::new();
    let mut i = (from + 1) % d;
    while i != to {
        out.push(rot[i]);
        i = (i + 1) % d;
    }
    out
}

pub fn vertex_split(p: &Polyhedron, spec: &SplitSpec) -> Result<Polyhedron> {
    let x = spec.vertex;
    let y = spec.new_vertex;
    let topo = p.topology();
    let rot = topo.rotation(x).to_vec();
    if rot.is_empty() {
        return Err(Error::precondition(format!("vertex {x} is not in the polyhedron")));
    }
    if !topo.rotation(y).is_empty() {
        return Err(Error::precondition(format!("new vertex {y} already exists")));
    }
    let [s0, s1] = spec.shared;
    let pos = |v: Vertex| rot.iter().position(|&w| w == v);
    let (Some(i0), Some(i1)) = (pos(s0), pos(s1)) else {
        return Err(Error::precondition(format!(
            "shared vertices {s0}, {s1} must both be neighbours of {x}"
        )));
    };
    if s0 == s1 {
        return Err(Error::precondition("a split needs two distinct shared edges"));
    }
    let moved: BTreeSet<Vertex> = spec.moved.iter().copied().collect();
    if moved.len() != spec.moved.len() {
        return Err(Error::precondition("moved neighbours repeat"));
    }
    let fwd: BTreeSet<Vertex> = arc(&rot, i0, i1).into_iter().collect();
    let back: BTreeSet<Vertex> = arc(&rot, i1, i0).into_iter().collect();
    let (pp, qq, dp, dq, ip, iq) = if moved == fwd {
        (s0, s1, spec.discs[0], spec.discs[1], i0, i1)
    } else if moved == back {
        (s1, s0, spec.discs[1], spec.discs[0], i1, i0)
    } else {
        return Err(Error::precondition(format!(
            "moved neighbours of {x} are not contiguous between {s0} and {s1}"
        )));
    };
    // wedges (n_i, n_{i+1}) from p round to q go to the new vertex
    let d = rot.len();
    let mut side = BTreeSet::new();
    let mut i = ip;
    while i != iq {
        side.insert((rot[i], rot[(i + 1) % d]));
        i = (i + 1) % d;
    }
    let rename = |f: &[Vertex]| -> (Vec<Vertex>, bool) {
        let n = f.len();
        let mut out = f.to_vec();
        let mut hit = false;
        for j in 0..n {
            if f[j] == x {
                let u = f[(j + n - 1) % n];
                let w = f[(j + 1) % n];
                if side.contains(&(w, u)) {
                    out[j] = y;
                    hit = true;
                }
            }
        }
        (out, hit)
    };

    let owners = p.dart_owners();
    let dp = dp
        .or_else(|| owner_disc(&owners, x, pp))
        .ok_or_else(|| Error::precondition(format!("no disc next to {x}-{pp} for the new triangle")))?;
    let dq = dq
        .or_else(|| owner_disc(&owners, x, qq))
        .ok_or_else(|| Error::precondition(format!("no disc next to {x}-{qq} for the new triangle")))?;

    let mut parts = Parts::of(p);
    for b in &mut parts.blocks {
        let (nb, hit) = rename(&b.boundary);
        if hit {
            let braces = b
                .braces
                .iter()
                .map(|e| {
                    let (a, c) = (if e.0 == x { y } else { e.0 }, if e.1 == x { y } else { e.1 });
                    Edge::new(a, c)
                })
                .collect();
            *b = Block::new(nb, braces);
        }
    }
    for h in &mut parts.holes {
        let (nh, hit) = rename(&h.boundary);
        if hit {
            *h = Hole::new(nh);
        }
    }
    for disc in parts.discs.values_mut() {
        let tris: Vec<[Vertex; 3]> = disc.triangles.iter().copied().collect();
        *disc = Disc::new(tris.into_iter().map(|t| {
            let (r, _) = rename(&t);
            [r[0], r[1], r[2]]
        }));
    }
    parts.disc_mut(dp).insert([x, pp, y]);
    parts.disc_mut(dq).insert([y, qq, x]);
    parts.next_id = parts.next_id.max(y + 1);
    let out = parts.build()?;
    debug_assert_eq!(out.edge_count(), p.edge_count() + 3);
    Ok(out)
}

/// Contracts the edge `{keep, drop}` onto `keep`.
///
/// Both faces at the edge must be disc triangles and the endpoints may share
/// no neighbour besides the two apexes; otherwise the edge is short and the
/// contraction is refused.
pub fn contract_edge(p: &Polyhedron, keep: Vertex, drop: Vertex) -> Result<(Polyhedron, ContractionMove)> {
    let (x, y) = (keep, drop);
    let topo = p.topology();
    if !topo.has_edge(x, y) {
        return Err(Error::precondition(format!("{x}-{y} is not a surface edge")));
    }
    let owners = p.dart_owners();
    let (Some(FaceRef::Disc(da)), Some(FaceRef::Disc(db))) = (owners.get(&(x, y)).copied(), owners.get(&(y, x)).copied()) else {
        return Err(Error::precondition(format!(
            "{x}-{y} lies on a block or hole boundary"
        )));
    };
    let prev = |v: Vertex, u: Vertex| -> Vertex {
        let r = topo.rotation(v);
        let i = r.iter().position(|&w| w == u).expect("adjacent");
        r[(i + r.len() - 1) % r.len()]
    };
    let a = prev(y, x);
    let b = prev(x, y);
    let mut witness: Vec<Vertex> = topo
        .rotation(x)
        .iter()
        .copied()
        .filter(|w| topo.rotation(y).contains(w))
        .collect();
    witness.sort_unstable();
    let mut expect = vec![a, b];
    expect.sort_unstable();
    if witness != expect {
        return Err(Error::ShortEdge { u: x, v: y, common: witness });
    }
    if p.blocks.iter().any(|bl| bl.braces.iter().any(|e| e.contains(y))) {
        return Err(Error::precondition(format!("vertex {y} carries block braces")));
    }
    let both = |c: &[Vertex]| c.contains(&x) && c.contains(&y);
    if p.blocks.iter().any(|bl| both(&bl.boundary)) || p.holes.iter().any(|h| both(&h.boundary)) {
        return Err(Error::precondition(format!(
            "{x} and {y} lie on the same block or hole"
        )));
    }
    let ry = topo.rotation(y);
    let ib = ry.iter().position(|&w| w == b).expect("apex adjacent");
    let ia = ry.iter().position(|&w| w == a).expect("apex adjacent");
    let moved = arc(ry, ib, ia);

    let ren = |v: Vertex| if v == y { x } else { v };
    let mut parts = Parts::of(p);
    for bl in &mut parts.blocks {
        *bl = Block::new(bl.boundary.iter().map(|&v| ren(v)).collect(), bl.braces.clone());
    }
    for h in &mut parts.holes {
        *h = Hole::new(h.boundary.iter().map(|&v| ren(v)).collect());
    }
    for disc in parts.discs.values_mut() {
        let tris: Vec<[Vertex; 3]> = disc
            .triangles
            .iter()
            .filter(|t| !(t.contains(&x) && t.contains(&y)))
            .map(|t| [ren(t[0]), ren(t[1]), ren(t[2])])
            .collect();
        *disc = Disc::new(tris);
    }
    parts.discs.retain(|_, d| !d.triangles.is_empty());
    let out = parts
        .build()
        .map_err(|e| Error::precondition(format!("contracting {x}-{y} breaks the partition: {e}")))?;
    if out.edge_count() + 3 != p.edge_count() {
        return Err(Error::ShortEdge { u: x, v: y, common: witness });
    }
    let m = ContractionMove { survivor: x, absorbed: y, apex: [a, b], discs: [da, db], moved, witness };
    Ok((out, m))
}

/// Inserts a vertex on an edge separating two discs and fans both sides.
pub fn subdivide_boundary_edge(p: &Polyhedron, e: Edge) -> Result<(Polyhedron, Vertex)> {
    let owners = p.dart_owners();
    let (u, v) = (e.0, e.1);
    let (Some(FaceRef::Disc(d1)), Some(FaceRef::Disc(d2))) = (owners.get(&(u, v)).copied(), owners.get(&(v, u)).copied()) else {
        return Err(Error::precondition(format!("{e} is not an edge between two discs")));
    };
    if d1 == d2 {
        return Err(Error::precondition(format!("{e} is inside disc {d1}, not between two discs")));
    }
    let topo = p.topology();
    let apex = |s: Vertex, t: Vertex| {
        let r = topo.rotation(t);
        let i = r.iter().position(|&w| w == s).expect("adjacent");
        r[(i + r.len() - 1) % r.len()]
    };
    let a = apex(u, v);
    let b = apex(v, u);
    let mut parts = Parts::of(p);
    let w = parts.next_id;
    parts.next_id += 1;
    let t1 = parts.disc_mut(d1);
    t1.remove([u, v, a]);
    t1.insert([u, w, a]);
    t1.insert([w, v, a]);
    let t2 = parts.disc_mut(d2);
    t2.remove([v, u, b]);
    t2.insert([v, w, b]);
    t2.insert([w, u, b]);
    Ok((parts.build()?, w))
}

/// Places a new vertex inside a triangle of a disc.
pub fn insert_interior_vertex(p: &Polyhedron, disc: DiscId, t: [Vertex; 3]) -> Result<(Polyhedron, Vertex)> {
    let d = p
        .discs
        .get(&disc)
        .ok_or_else(|| Error::precondition(format!("no disc {disc}")))?;
    let oriented = d
        .triangles
        .iter()
        .find(|s| {
            let mut a = **s;
            let mut b = t;
            a.sort_unstable();
            b.sort_unstable();
            a == b
        })
        .copied()
        .ok_or_else(|| Error::precondition(format!("{t:?} is not a triangle of disc {disc}")))?;
    let [a, b, c] = oriented;
    let mut parts = Parts::of(p);
    let w = parts.next_id;
    parts.next_id += 1;
    let dm = parts.disc_mut(disc);
    dm.remove(oriented);
    dm.insert([a, b, w]);
    dm.insert([b, c, w]);
    dm.insert([c, a, w]);
    Ok((parts.build()?, w))
}

/// Replaces an inner edge of a disc by the other diagonal of its quad.
pub fn flip_edge(p: &Polyhedron, disc: DiscId, e: Edge) -> Result<Polyhedron> {
    let owners = p.dart_owners();
    let (u, v) = (e.0, e.1);
    if owners.get(&(u, v)) != Some(&FaceRef::Disc(disc)) || owners.get(&(v, u)) != Some(&FaceRef::Disc(disc)) {
        return Err(Error::precondition(format!("{e} is not an inner edge of disc {disc}")));
    }
    let topo = p.topology();
    let apex = |s: Vertex, t: Vertex| {
        let r = topo.rotation(t);
        let i = r.iter().position(|&w| w == s).expect("adjacent");
        r[(i + r.len() - 1) % r.len()]
    };
    let a = apex(u, v);
    let b = apex(v, u);
    if a == b || topo.has_edge(a, b) || p.blocks.iter().any(|bl| bl.braces.contains(&Edge::new(a, b))) {
        return Err(Error::precondition(format!(
            "flipping {e} would duplicate the edge {a}-{b}"
        )));
    }
    let mut parts = Parts::of(p);
    let dm = parts.disc_mut(disc);
    dm.remove([u, v, a]);
    dm.remove([v, u, b]);
    dm.insert([a, u, b]);
    dm.insert([b, v, a]);
    parts.build()
}

/// Turns every block into a hole and every hole into a double-fan block.
pub fn swap_blocks_holes(p: &Polyhedron) -> Result<Polyhedron> {
    let mut parts = Parts::of(p);
    let blocks: Vec<Block> = p.holes.iter().map(|h| Block::double_fan(h.boundary.clone())).collect();
    let topo = p.topology();
    for b in &blocks {
        if let Some(e) = b.braces.iter().find(|e| topo.has_edge(e.0, e.1)) {
            return Err(Error::precondition(format!(
                "hole {:?} already has the chord {e}",
                b.boundary
            )));
        }
    }
    parts.holes = p.blocks.iter().map(|b| Hole::new(b.boundary.clone())).collect();
    parts.blocks = blocks;
    parts.build()
}

/// Directed edges of all disc triangles, used to pick random moves.
#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::write_bhp;

    fn octahedron() -> Polyhedron {
        let mut tris = Vec::new();
        for i in 0..4u32 {
            let a = 1 + i;
            let b = 1 + (i + 1) % 4;
            tris.push([0, a, b]);
            tris.push([5, b, a]);
        }
        let (upper, lower): (Vec<_>, Vec<_>) = tris.into_iter().partition(|t| t[0] == 0);
        Polyhedron::from_unoriented(vec![], vec![], vec![(0, upper), (1, lower)]).unwrap()
    }

    fn tetra() -> Polyhedron {
        Polyhedron::from_unoriented(
            vec![],
            vec![],
            vec![(0, vec![[0, 1, 2], [0, 2, 3], [0, 3, 1]]), (1, vec![[1, 3, 2]])],
        )
        .unwrap()
    }

    #[test]
    fn octahedron_contraction_counts() {
        let p = octahedron();
        let (q, m) = contract_edge(&p, 0, 1).unwrap();
        assert_eq!(q.vertex_count(), 5);
        assert_eq!(q.edge_count(), 9);
        assert_eq!(m.witness.len(), 2);
    }

    #[test]
    fn contraction_round_trip_on_octahedron() {
        let p = octahedron();
        for e in p.topology().edges() {
            for (k, d) in [(e.0, e.1), (e.1, e.0)] {
                let (q, m) = contract_edge(&p, k, d).unwrap();
                let back = vertex_split(&q, &invert(&m)).unwrap();
                assert_eq!(write_bhp(&back), write_bhp(&p), "edge {e} keep {k}");
            }
        }
    }

    #[test]
    fn tetrahedron_split_adds_three_edges() {
        let p = tetra();
        let rot = p.topology().rotation(0).to_vec();
        let spec = SplitSpec { vertex: 0, new_vertex: 4, shared: [rot[0], rot[1]], moved: vec![], discs: [None, None] };
        let q = vertex_split(&p, &spec).unwrap();
        assert_eq!(q.vertex_count(), 5);
        assert_eq!(q.edge_count(), 9);
    }

    #[test]
    fn tetrahedron_contracts_to_double_triangle() {
        let p = tetra();
        let (q, _) = contract_edge(&p, 0, 1).unwrap();
        assert_eq!(q.vertex_count(), 3);
        assert_eq!(q.topology().faces().unwrap().len(), 2);
    }

    #[test]
    fn non_contiguous_split_rejected() {
        let p = octahedron();
        let rot = p.topology().rotation(0).to_vec();
        let spec = SplitSpec { vertex: 0, new_vertex: 6, shared: [rot[0], rot[2]], moved: vec![rot[1], rot[3]], discs: [None, None] };
        assert!(vertex_split(&p, &spec).is_err());
    }

    #[test]
    fn flip_is_an_involution() {
        let p = octahedron();
        let e = Edge::new(0, 1);
        let q = flip_edge(&p, 0, e).unwrap();
        assert!(!q.topology().has_edge(0, 1));
        let new = q.topology().edges().difference(&p.topology().edges()).copied().next().unwrap();
        let r = flip_edge(&q, 0, new).unwrap();
        assert_eq!(write_bhp(&r), write_bhp(&p));
    }

    #[test]
    fn insertion_adds_a_hub() {
        let p = octahedron();
        let (q, w) = insert_interior_vertex(&p, 0, [0, 1, 2]).unwrap();
        assert_eq!(q.topology().rotation(w).len(), 3);
        assert_eq!(q.edge_count(), p.edge_count() + 3);
    }
}
