//! The combinatorial model: a graph embedded in the 2-sphere by a rotation
//! system, with its faces partitioned into blocks, holes and triangulated
//! discs.
//!
//! Orientation convention: `rotation[v]` lists the neighbours of `v` in
//! counter-clockwise order. A face is traced from a dart `u -> v` by stepping
//! to the neighbour of `v` that precedes `u` in `rotation[v]`; every dart lies
//! on exactly one face, and faces are stored as oriented cycles rotated so
//! that the smallest vertex comes first.

mod format;
mod predicates;

pub use format::{parse_bhp, parse_document, parse_graph, write_bhp, write_graph, Document};
pub use predicates::{
    boundary_paths, check_well_designed, has_clean_boundary, is_long_edge,
    is_nonfacial_triangle, nonfacial_triangles_through, unclean_chords, BoundaryPath, Condition,
    Failure, WellDesignedReport,
};

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};

pub type DiscId = u32;

/// Rotates a cycle so that its smallest vertex comes first, keeping direction.
pub fn canonical_cycle(cycle: &[Vertex]) -> Vec<Vertex> {
    let Some((pos, _)) = cycle.iter().enumerate().min_by_key(|(_, &v)| v) else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(cycle.len());
    out.extend_from_slice(&cycle[pos..]);
    out.extend_from_slice(&cycle[..pos]);
    out
}

pub fn reversed_cycle(cycle: &[Vertex]) -> Vec<Vertex> {
    let mut r: Vec<Vertex> = cycle.to_vec();
    r.reverse();
    canonical_cycle(&r)
}

fn canonical_triangle(t: [Vertex; 3]) -> [Vertex; 3] {
    let c = canonical_cycle(&t);
    [c[0], c[1], c[2]]
}

/// Directed edges of a cyclic vertex sequence.
pub fn darts(cycle: &[Vertex]) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
    let n = cycle.len();
    (0..n).map(move |i| (cycle[i], cycle[(i + 1) % n]))
}

/// A sphere-embedded graph given by its rotation system.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TopologicalGraph {
    rotation: BTreeMap<Vertex, Vec<Vertex>>,
}

impl TopologicalGraph {
    /// Builds from an explicit rotation system. Each list is rotated to start
    /// at its smallest neighbour; adjacency must be symmetric and simple.
    pub fn from_rotation(rotation: BTreeMap<Vertex, Vec<Vertex>>) -> Result<Self> {
        let mut rot = BTreeMap::new();
        for (&v, nbrs) in &rotation {
            let set: BTreeSet<Vertex> = nbrs.iter().copied().collect();
            if set.len() != nbrs.len() {
                return Err(Error::Embedding(format!("parallel edges at vertex {v}")));
            }
            if set.contains(&v) {
                return Err(Error::Embedding(format!("self-loop at vertex {v}")));
            }
            for &w in nbrs {
                let back = rotation.get(&w).map_or(false, |l| l.contains(&v));
                if !back {
                    return Err(Error::Embedding(format!(
                        "edge {v}-{w} missing from rotation at {w}"
                    )));
                }
            }
            rot.insert(v, canonical_cycle(nbrs));
        }
        let g = TopologicalGraph { rotation: rot };
        g.faces()?;
        Ok(g)
    }

    /// Builds the rotation system from consistently oriented faces: every
    /// directed edge must appear in exactly one face.
    pub fn from_oriented_faces(faces: &[Vec<Vertex>]) -> Result<Self> {
        // For a face (.., u, v, w, ..) the neighbour w precedes u around v.
        let mut succ: BTreeMap<Vertex, HashMap<Vertex, Vertex>> = BTreeMap::new();
        let mut seen_darts = BTreeSet::new();
        for f in faces {
            let n = f.len();
            if n < 2 {
                return Err(Error::Embedding(format!("degenerate face {f:?}")));
            }
            for i in 0..n {
                let u = f[(i + n - 1) % n];
                let v = f[i];
                let w = f[(i + 1) % n];
                if !seen_darts.insert((v, w)) {
                    return Err(Error::Embedding(format!(
                        "dart {v}->{w} used by two faces (orientation inconsistent)"
                    )));
                }
                if u == v || v == w {
                    return Err(Error::Embedding(format!("self-loop in face {f:?}")));
                }
                if succ.entry(v).or_default().insert(w, u).is_some() {
                    return Err(Error::Embedding(format!("vertex {v} is not a manifold point")));
                }
            }
        }
        for &(a, b) in &seen_darts {
            if !seen_darts.contains(&(b, a)) {
                return Err(Error::Embedding(format!(
                    "edge {a}-{b} has a face on one side only"
                )));
            }
        }
        let mut rotation = BTreeMap::new();
        for (v, map) in succ {
            let start = *map.keys().min().expect("non-empty");
            let mut cyc = vec![start];
            let mut cur = map[&start];
            while cur != start {
                if cyc.len() > map.len() {
                    return Err(Error::Embedding(format!("broken rotation at {v}")));
                }
                cyc.push(cur);
                cur = *map
                    .get(&cur)
                    .ok_or_else(|| Error::Embedding(format!("open fan at vertex {v}")))?;
            }
            if cyc.len() != map.len() {
                return Err(Error::Embedding(format!(
                    "vertex {v} has a pinched neighbourhood"
                )));
            }
            rotation.insert(v, cyc);
        }
        let g = TopologicalGraph { rotation };
        g.faces()?;
        Ok(g)
    }

    /// Orients an unoriented face list of a sphere consistently (breadth
    /// first over shared edges) and builds the rotation system.
    pub fn from_faces(faces: &[Vec<Vertex>]) -> Result<Self> {
        Self::from_oriented_faces(&orient_faces(faces)?)
    }

    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        self.rotation.get(&v).map_or(&[], |r| r.as_slice())
    }

    pub fn rotations(&self) -> &BTreeMap<Vertex, Vec<Vertex>> {
        &self.rotation
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.rotation.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rotation.values().map(|r| r.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        self.rotation
            .iter()
            .flat_map(|(&v, r)| r.iter().map(move |&w| Edge::new(v, w)))
            .collect()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.rotation.get(&a).map_or(false, |r| r.contains(&b))
    }

    pub fn graph(&self) -> Graph {
        let mut g = Graph::new();
        for (&v, r) in &self.rotation {
            g.add_vertex(v);
            for &w in r {
                g.add_edge(v, w);
            }
        }
        g
    }

    fn prev_around(&self, v: Vertex, u: Vertex) -> Option<Vertex> {
        let r = self.rotation.get(&v)?;
        let i = r.iter().position(|&x| x == u)?;
        Some(r[(i + r.len() - 1) % r.len()])
    }

    /// Traces all faces. Fails unless |V| - |E| + |F| = 2 on a connected graph.
    pub fn faces(&self) -> Result<Vec<Vec<Vertex>>> {
        let mut used: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
        let mut faces = Vec::new();
        for (&u, r) in &self.rotation {
            for &v in r {
                if used.contains(&(u, v)) {
                    continue;
                }
                let mut face = Vec::new();
                let (mut a, mut b) = (u, v);
                loop {
                    if !used.insert((a, b)) {
                        return Err(Error::Embedding(format!(
                            "face tracing revisited dart {a}->{b}"
                        )));
                    }
                    face.push(a);
                    let c = self
                        .prev_around(b, a)
                        .ok_or_else(|| Error::Embedding(format!("dart {a}->{b} dangling")))?;
                    a = b;
                    b = c;
                    if (a, b) == (u, v) {
                        break;
                    }
                }
                faces.push(canonical_cycle(&face));
            }
        }
        faces.sort();
        let v = self.vertex_count() as i64;
        let e = self.edge_count() as i64;
        let f = faces.len() as i64;
        if v > 0 && v - e + f != 2 {
            return Err(Error::Embedding(format!(
                "Euler relation fails: {v} - {e} + {f} != 2"
            )));
        }
        if !self.graph().is_connected() {
            return Err(Error::Embedding("graph is disconnected".into()));
        }
        Ok(faces)
    }

    pub fn is_three_connected(&self) -> bool {
        self.graph().is_three_connected()
    }
}

/// Consistently orients the faces of a closed orientable surface.
pub fn orient_faces(faces: &[Vec<Vertex>]) -> Result<Vec<Vec<Vertex>>> {
    let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for (a, b) in darts(f) {
            by_edge.entry(Edge::new(a, b)).or_default().push(i);
        }
    }
    let mut out: Vec<Option<Vec<Vertex>>> = vec![None; faces.len()];
    for root in 0..faces.len() {
        if out[root].is_some() {
            continue;
        }
        out[root] = Some(faces[root].clone());
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let fi = out[i].clone().expect("oriented");
            for (a, b) in darts(&fi) {
                for &j in &by_edge[&Edge::new(a, b)] {
                    if j == i {
                        continue;
                    }
                    // neighbour must traverse the shared edge as b -> a
                    let want = |f: &[Vertex]| darts(f).any(|d| d == (b, a));
                    match &out[j] {
                        Some(fj) => {
                            if !want(fj) {
                                return Err(Error::Embedding(format!(
                                    "faces {i} and {j} cannot be oriented consistently"
                                )));
                            }
                        }
                        None => {
                            let mut fj = faces[j].clone();
                            if !want(&fj) {
                                fj.reverse();
                            }
                            if !want(&fj) {
                                return Err(Error::Embedding(format!(
                                    "face {j} does not contain edge {a}-{b}"
                                )));
                            }
                            out[j] = Some(fj);
                            queue.push_back(j);
                        }
                    }
                }
            }
        }
    }
    Ok(out.into_iter().map(|f| f.expect("all oriented")).collect())
}

/// A face filled with a generically isostatic subgraph on its boundary
/// vertices. Braces are kept outside the rotation system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub boundary: Vec<Vertex>,
    pub braces: BTreeSet<Edge>,
}

impl Block {
    pub fn new(boundary: Vec<Vertex>, braces: BTreeSet<Edge>) -> Self {
        Block {
            boundary: canonical_cycle(&boundary),
            braces,
        }
    }

    /// Block with the deterministic double-fan bracing.
    pub fn double_fan(boundary: Vec<Vertex>) -> Self {
        let boundary = canonical_cycle(&boundary);
        let braces = double_fan_braces(&boundary);
        Block { boundary, braces }
    }

    pub fn size(&self) -> usize {
        self.boundary.len()
    }
}

/// Fan diagonals from the first boundary vertex (inside) and from the second
/// (outside): `2(n - 3)` edges which, with the boundary cycle, triangulate a
/// sphere on the `n` boundary vertices.
pub fn double_fan_braces(boundary: &[Vertex]) -> BTreeSet<Edge> {
    double_fan_order(boundary).into_iter().collect()
}

/// Double-fan diagonals in fill order: fan from `boundary[0]` first, then the
/// fan from `boundary[1]`.
pub fn double_fan_order(boundary: &[Vertex]) -> Vec<Edge> {
    let n = boundary.len();
    let mut out = Vec::new();
    if n < 4 {
        return out;
    }
    for i in 2..n - 1 {
        out.push(Edge::new(boundary[0], boundary[i]));
    }
    for i in 3..n {
        out.push(Edge::new(boundary[1], boundary[i]));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hole {
    pub boundary: Vec<Vertex>,
}

impl Hole {
    pub fn new(boundary: Vec<Vertex>) -> Self {
        Hole {
            boundary: canonical_cycle(&boundary),
        }
    }

    pub fn size(&self) -> usize {
        self.boundary.len()
    }
}

/// A triangulated disc, stored as its oriented triangles; the boundary cycle
/// and interior vertices are derived.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Disc {
    pub triangles: BTreeSet<[Vertex; 3]>,
}

impl Disc {
    pub fn new<I: IntoIterator<Item = [Vertex; 3]>>(triangles: I) -> Self {
        Disc {
            triangles: triangles.into_iter().map(canonical_triangle).collect(),
        }
    }

    pub fn insert(&mut self, t: [Vertex; 3]) {
        self.triangles.insert(canonical_triangle(t));
    }

    pub fn remove(&mut self, t: [Vertex; 3]) -> bool {
        self.triangles.remove(&canonical_triangle(t))
    }

    pub fn contains_triangle(&self, t: [Vertex; 3]) -> bool {
        self.triangles.contains(&canonical_triangle(t))
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.triangles.iter().flatten().copied().collect()
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        self.triangles
            .iter()
            .flat_map(|t| darts(t).map(|(a, b)| Edge::new(a, b)).collect::<Vec<_>>())
            .collect()
    }

    fn dart_set(&self) -> BTreeSet<(Vertex, Vertex)> {
        self.triangles.iter().flat_map(|t| darts(t).collect::<Vec<_>>()).collect()
    }

    /// Darts on the boundary, oriented as in the triangles.
    pub fn boundary_darts(&self) -> Vec<(Vertex, Vertex)> {
        let ds = self.dart_set();
        ds.iter().copied().filter(|&(a, b)| !ds.contains(&(b, a))).collect()
    }

    pub fn boundary_edges(&self) -> BTreeSet<Edge> {
        self.boundary_darts().into_iter().map(|(a, b)| Edge::new(a, b)).collect()
    }

    /// Edges of the triangulation that are not on the boundary.
    pub fn inner_edges(&self) -> BTreeSet<Edge> {
        let b = self.boundary_edges();
        self.edges().into_iter().filter(|e| !b.contains(e)).collect()
    }

    /// The boundary cycle, or an error if the triangles do not form a disc.
    pub fn boundary(&self) -> Result<Vec<Vertex>> {
        let bd = self.boundary_darts();
        if bd.is_empty() {
            return Err(Error::Partition("disc has no boundary".into()));
        }
        let mut next: HashMap<Vertex, Vertex> = HashMap::new();
        for &(a, b) in &bd {
            if next.insert(a, b).is_some() {
                return Err(Error::Partition(format!(
                    "disc boundary is pinched at vertex {a}"
                )));
            }
        }
        let start = bd.iter().map(|d| d.0).min().expect("non-empty");
        let mut cyc = vec![start];
        let mut cur = next[&start];
        while cur != start {
            cyc.push(cur);
            if cyc.len() > bd.len() {
                return Err(Error::Partition("disc boundary is not a cycle".into()));
            }
            cur = *next
                .get(&cur)
                .ok_or_else(|| Error::Partition("disc boundary is open".into()))?;
        }
        if cyc.len() != bd.len() {
            return Err(Error::Partition(
                "disc boundary splits into several cycles".into(),
            ));
        }
        let v = self.vertices().len() as i64;
        let e = self.edges().len() as i64;
        let f = self.triangles.len() as i64;
        if v - e + f != 1 {
            return Err(Error::Partition(format!(
                "triangles do not form a disc (Euler characteristic {})",
                v - e + f
            )));
        }
        Ok(cyc)
    }

    pub fn interior_vertices(&self) -> BTreeSet<Vertex> {
        let on_boundary: BTreeSet<Vertex> =
            self.boundary_darts().into_iter().map(|(a, _)| a).collect();
        self.vertices().into_iter().filter(|v| !on_boundary.contains(v)).collect()
    }

    pub fn boundary_vertices(&self) -> BTreeSet<Vertex> {
        self.boundary_darts().into_iter().map(|(a, _)| a).collect()
    }
}

/// Which part of the partition a face belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FaceRef {
    Block(usize),
    Hole(usize),
    Disc(DiscId),
}

/// A block-and-hole polyhedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    topo: TopologicalGraph,
    pub blocks: Vec<Block>,
    pub holes: Vec<Hole>,
    pub discs: BTreeMap<DiscId, Disc>,
    next_id: Vertex,
}

impl Polyhedron {
    /// Assembles a polyhedron from its partition. The rotation system is
    /// rebuilt from the oriented faces and the whole value is validated.
    pub fn from_parts(
        blocks: Vec<Block>,
        holes: Vec<Hole>,
        discs: BTreeMap<DiscId, Disc>,
        next_id: Option<Vertex>,
    ) -> Result<Self> {
        let mut faces: Vec<Vec<Vertex>> = Vec::new();
        faces.extend(blocks.iter().map(|b| b.boundary.clone()));
        faces.extend(holes.iter().map(|h| h.boundary.clone()));
        for d in discs.values() {
            faces.extend(d.triangles.iter().map(|t| t.to_vec()));
        }
        let topo = TopologicalGraph::from_oriented_faces(&faces)?;
        let min_next = topo.vertices().max().map_or(0, |m| m + 1);
        let p = Polyhedron {
            topo,
            blocks: blocks
                .into_iter()
                .map(|b| Block::new(b.boundary, b.braces))
                .collect(),
            holes: holes.into_iter().map(|h| Hole::new(h.boundary)).collect(),
            discs: discs.into_iter().filter(|(_, d)| !d.triangles.is_empty()).collect(),
            next_id: next_id.unwrap_or(min_next).max(min_next),
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds from unoriented pieces: faces are oriented consistently first.
    /// `discs` lists triangles per disc id.
    pub fn from_unoriented(
        blocks: Vec<(Vec<Vertex>, BTreeSet<Edge>)>,
        holes: Vec<Vec<Vertex>>,
        discs: Vec<(DiscId, Vec<[Vertex; 3]>)>,
    ) -> Result<Self> {
        let mut faces: Vec<Vec<Vertex>> = Vec::new();
        faces.extend(blocks.iter().map(|b| b.0.clone()));
        faces.extend(holes.iter().cloned());
        for (_, ts) in &discs {
            faces.extend(ts.iter().map(|t| t.to_vec()));
        }
        let oriented = orient_faces(&faces)?;
        let mut it = oriented.into_iter();
        let blocks = blocks
            .into_iter()
            .map(|(_, braces)| Block::new(it.next().expect("face"), braces))
            .collect();
        let holes = holes.into_iter().map(|_| Hole::new(it.next().expect("face"))).collect();
        let mut dm = BTreeMap::new();
        for (id, ts) in discs {
            let d: &mut Disc = dm.entry(id).or_default();
            for _ in ts {
                let f = it.next().expect("face");
                d.insert([f[0], f[1], f[2]]);
            }
        }
        Polyhedron::from_parts(blocks, holes, dm, None)
    }

    pub fn topology(&self) -> &TopologicalGraph {
        &self.topo
    }

    pub fn next_id(&self) -> Vertex {
        self.next_id
    }

    /// Reserves a fresh vertex identifier.
    pub fn fresh_vertex(&mut self) -> Vertex {
        let v = self.next_id;
        self.next_id += 1;
        v
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.topo.vertices()
    }

    pub fn vertex_count(&self) -> usize {
        self.topo.vertex_count()
    }

    /// Topological edges plus block braces.
    pub fn edge_count(&self) -> usize {
        self.topo.edge_count() + self.blocks.iter().map(|b| b.braces.len()).sum::<usize>()
    }

    /// The full bar graph: topological edges and block braces.
    pub fn graph(&self) -> Graph {
        let mut g = self.topo.graph();
        for b in &self.blocks {
            for e in &b.braces {
                g.add_edge(e.0, e.1);
            }
        }
        g
    }

    /// All assigned faces with their owners, as oriented canonical cycles.
    pub fn assigned_faces(&self) -> Vec<(FaceRef, Vec<Vertex>)> {
        let mut out = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            out.push((FaceRef::Block(i), b.boundary.clone()));
        }
        for (i, h) in self.holes.iter().enumerate() {
            out.push((FaceRef::Hole(i), h.boundary.clone()));
        }
        for (&id, d) in &self.discs {
            for t in &d.triangles {
                out.push((FaceRef::Disc(id), t.to_vec()));
            }
        }
        out
    }

    /// Map from directed edge to the face on its left.
    pub fn dart_owners(&self) -> HashMap<(Vertex, Vertex), FaceRef> {
        let mut m = HashMap::new();
        for (r, f) in self.assigned_faces() {
            for d in darts(&f) {
                m.insert(d, r);
            }
        }
        m
    }

    pub fn face_boundary(&self, r: FaceRef) -> Result<Vec<Vertex>> {
        match r {
            FaceRef::Block(i) => Ok(self.blocks[i].boundary.clone()),
            FaceRef::Hole(i) => Ok(self.holes[i].boundary.clone()),
            FaceRef::Disc(id) => self.discs[&id].boundary(),
        }
    }

    /// Faces (blocks, holes, whole discs) each vertex touches.
    pub fn incident_faces(&self) -> BTreeMap<Vertex, BTreeSet<FaceRef>> {
        let mut m: BTreeMap<Vertex, BTreeSet<FaceRef>> = BTreeMap::new();
        for (r, f) in self.assigned_faces() {
            for v in f {
                m.entry(v).or_default().insert(r);
            }
        }
        m
    }

    pub fn block_vertices(&self) -> BTreeSet<Vertex> {
        self.blocks.iter().flat_map(|b| b.boundary.iter().copied()).collect()
    }

    pub fn hole_vertices(&self) -> BTreeSet<Vertex> {
        self.holes.iter().flat_map(|h| h.boundary.iter().copied()).collect()
    }

    /// Vertex sets of triangular faces, for facial-triangle lookups.
    pub fn facial_triangles(&self) -> BTreeSet<[Vertex; 3]> {
        self.assigned_faces()
            .into_iter()
            .filter(|(_, f)| f.len() == 3)
            .map(|(_, f)| {
                let mut t = [f[0], f[1], f[2]];
                t.sort_unstable();
                t
            })
            .collect()
    }

    /// Checks every structural invariant of the partition.
    pub fn validate(&self) -> Result<()> {
        let mut derived = self.topo.faces()?;
        let mut assigned: Vec<Vec<Vertex>> =
            self.assigned_faces().into_iter().map(|(_, f)| f).collect();
        derived.sort();
        assigned.sort();
        if derived != assigned {
            return Err(Error::Partition(
                "faces of the embedding are not assigned exactly once".into(),
            ));
        }
        for (id, d) in &self.discs {
            d.boundary()
                .map_err(|e| Error::Partition(format!("disc {id}: {e}")))?;
        }
        let topo_edges = self.topo.edges();
        let mut braces_seen = BTreeSet::new();
        for (i, b) in self.blocks.iter().enumerate() {
            let on: BTreeSet<Vertex> = b.boundary.iter().copied().collect();
            if on.len() != b.boundary.len() || b.boundary.len() < 3 {
                return Err(Error::Partition(format!("block {i} boundary is not a simple cycle")));
            }
            for e in &b.braces {
                if !on.contains(&e.0) || !on.contains(&e.1) || e.0 == e.1 {
                    return Err(Error::Partition(format!(
                        "brace {e} of block {i} leaves the block boundary"
                    )));
                }
                if topo_edges.contains(e) || !braces_seen.insert(*e) {
                    return Err(Error::Partition(format!("brace {e} duplicates an edge")));
                }
            }
            let n = b.boundary.len();
            if n + b.braces.len() != 3 * n - 6 {
                return Err(Error::Partition(format!(
                    "block {i} has {} bars on {n} vertices, expected {}",
                    n + b.braces.len(),
                    3 * n - 6
                )));
            }
        }
        for (i, h) in self.holes.iter().enumerate() {
            let on: BTreeSet<Vertex> = h.boundary.iter().copied().collect();
            if on.len() != h.boundary.len() || h.boundary.len() < 3 {
                return Err(Error::Partition(format!("hole {i} boundary is not a simple cycle")));
            }
        }
        if let Some(&max) = self.topo.rotations().keys().next_back() {
            if self.next_id <= max {
                return Err(Error::Partition("next-id is not above every vertex".into()));
            }
        }
        Ok(())
    }

    pub fn disc_of_triangle(&self, t: [Vertex; 3]) -> Option<DiscId> {
        self.discs
            .iter()
            .find(|(_, d)| d.contains_triangle(t))
            .map(|(&id, _)| id)
    }

    /// Vertices interior to some disc.
    pub fn interior_vertices(&self) -> BTreeSet<Vertex> {
        self.discs.values().flat_map(|d| d.interior_vertices()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tetra_faces() -> Vec<Vec<Vertex>> {
        vec![vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 1], vec![1, 3, 2]]
    }

    #[test]
    fn tetrahedron_has_four_triangles() {
        let g = TopologicalGraph::from_oriented_faces(&tetra_faces()).unwrap();
        let f = g.faces().unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|c| c.len() == 3));
    }

    #[test]
    fn octahedron_has_eight_triangles() {
        // poles 0,5; equator 1..4
        let mut faces = Vec::new();
        for i in 0..4u32 {
            let a = 1 + i;
            let b = 1 + (i + 1) % 4;
            faces.push(vec![0, a, b]);
            faces.push(vec![5, b, a]);
        }
        let g = TopologicalGraph::from_faces(&faces).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 12);
        assert_eq!(g.faces().unwrap().len(), 8);
    }

    #[test]
    fn cube_has_six_quadrilaterals() {
        let faces = vec![
            vec![0, 1, 2, 3],
            vec![4, 5, 6, 7],
            vec![0, 1, 5, 4],
            vec![1, 2, 6, 5],
            vec![2, 3, 7, 6],
            vec![3, 0, 4, 7],
        ];
        let g = TopologicalGraph::from_faces(&faces).unwrap();
        let f = g.faces().unwrap();
        assert_eq!(f.len(), 6);
        assert!(f.iter().all(|c| c.len() == 4));
        assert!(g.is_three_connected());
    }

    #[test]
    fn rotation_round_trips_through_faces() {
        let g = TopologicalGraph::from_oriented_faces(&tetra_faces()).unwrap();
        let again = TopologicalGraph::from_rotation(g.rotations().clone()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn inconsistent_rotation_rejected() {
        // K4 with one rotation reversed gives a torus-like trace
        let g = TopologicalGraph::from_oriented_faces(&tetra_faces()).unwrap();
        let mut rot = g.rotations().clone();
        let r = rot.get_mut(&0).unwrap();
        r.swap(0, 1);
        assert!(TopologicalGraph::from_rotation(rot).is_err());
    }

    #[test]
    fn disc_boundary_and_interior() {
        // wheel: hub 0, rim 1..4
        let d = Disc::new([[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 1]]);
        assert_eq!(d.boundary().unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(d.interior_vertices(), [0].into_iter().collect());
        let pinched = Disc::new([[0, 1, 2], [0, 3, 4]]);
        assert!(pinched.boundary().is_err());
    }

    #[test]
    fn double_fan_on_five_omits_one_chord() {
        let braces = double_fan_braces(&[1, 2, 3, 4, 5]);
        let expect: BTreeSet<Edge> =
            [Edge::new(1, 3), Edge::new(1, 4), Edge::new(2, 4), Edge::new(2, 5)]
                .into_iter()
                .collect();
        assert_eq!(braces, expect);
    }
}
