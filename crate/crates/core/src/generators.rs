//! Seedable constructors: blocks, towers, cylinders, random spheres,
//! expansions and a few fixed fixtures.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counting::separation_check;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};
use crate::poly::{
    boundary_paths, check_well_designed, double_fan_braces, unclean_chords, Block, FaceRef, Polyhedron,
    TopologicalGraph,
};
use crate::transform::{flip_edge, insert_interior_vertex, subdivide_boundary_edge};

/// Double-fan block on `0..n`.
pub fn double_fan_block(n: usize) -> Result<Block> {
    if n < 3 {
        return Err(Error::precondition(format!("a block needs at least 3 vertices, got {n}")));
    }
    Ok(Block::double_fan((0..n as Vertex).collect()))
}

/// Boundary cycle plus braces.
pub fn block_graph(b: &Block) -> Graph {
    let n = b.boundary.len();
    let mut g = Graph::from_edges((0..n).map(|i| Edge::new(b.boundary[i], b.boundary[(i + 1) % n])));
    for e in &b.braces {
        g.add_edge(e.0, e.1);
    }
    g
}

fn ring(start: Vertex, len: usize) -> Vec<Vertex> {
    (start..start + len as Vertex).collect()
}

/// Triangulated annulus between two rings, merge triangles spread evenly
/// along the larger ring.
fn tube(a: &[Vertex], b: &[Vertex]) -> Vec<[Vertex; 3]> {
    if a.len() < b.len() {
        return tube(b, a);
    }
    let (na, nb) = (a.len(), b.len());
    let f = |i: usize| (i * nb / na) % nb;
    let mut out = Vec::with_capacity(na + nb);
    for i in 0..na {
        let (j0, j1) = (f(i), f(i + 1));
        let (ai, an) = (a[i], a[(i + 1) % na]);
        if j0 == j1 {
            out.push([ai, an, b[j0]]);
        } else {
            out.push([ai, an, b[j1]]);
            out.push([ai, b[j1], b[j0]]);
        }
    }
    out
}

/// Two end rings of sizes `m` and `n` joined through a waist ring of size
/// `k` (omitted when `k = min(m, n)`). Each tube triangle is its own disc.
/// Blocked ends get double-fan braces, the others become holes.
pub fn make_tube(m: usize, k: usize, n: usize, blocked: [bool; 2]) -> Result<Polyhedron> {
    if k < 3 || k > m.min(n) {
        return Err(Error::precondition(format!(
            "waist {k} must lie between 3 and min({m}, {n})"
        )));
    }
    let first = ring(0, m);
    let mut tris = Vec::new();
    let last = if k < m.min(n) {
        let waist = ring(m as Vertex, k);
        let last = ring((m + k) as Vertex, n);
        tris.extend(tube(&first, &waist));
        tris.extend(tube(&waist, &last));
        last
    } else {
        let last = ring(m as Vertex, n);
        tris.extend(tube(&first, &last));
        last
    };
    let mut blocks = Vec::new();
    let mut holes = Vec::new();
    for (cyc, b) in [(first, blocked[0]), (last, blocked[1])] {
        if b {
            let braces = double_fan_braces(&cyc);
            blocks.push((cyc, braces));
        } else {
            holes.push(cyc);
        }
    }
    let discs = tris.into_iter().enumerate().map(|(i, t)| (i as u32, vec![t])).collect();
    Polyhedron::from_unoriented(blocks, holes, discs)
}

/// Proper `n`-tower: an `n`-block and an `n`-hole joined by an antiprism tube.
pub fn make_tower(n: usize) -> Result<Polyhedron> {
    make_tube(n, n, n, [true, false])
}

/// Cylinder `C(m, k, n)`: an `m`-hole and an `n`-hole with waist `k`.
pub fn make_cylinder(m: usize, k: usize, n: usize) -> Result<Polyhedron> {
    make_tube(m, k, n, [false, false])
}

struct SphereBuilder {
    faces: Vec<[Vertex; 3]>,
    owner: HashMap<(Vertex, Vertex), usize>,
    adj: Vec<BTreeSet<Vertex>>,
}

impl SphereBuilder {
    fn new() -> Self {
        let mut s = SphereBuilder { faces: Vec::new(), owner: HashMap::new(), adj: vec![BTreeSet::new(); 4] };
        for t in [[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]] {
            s.push(t);
        }
        s
    }

    fn set(&mut self, i: usize, t: [Vertex; 3]) {
        for k in 0..3 {
            let (u, v) = (t[k], t[(k + 1) % 3]);
            self.owner.insert((u, v), i);
            self.adj[u as usize].insert(v);
            self.adj[v as usize].insert(u);
        }
        self.faces[i] = t;
    }

    fn push(&mut self, t: [Vertex; 3]) {
        self.faces.push(t);
        self.set(self.faces.len() - 1, t);
    }

    fn insert(&mut self, i: usize) {
        let [a, b, c] = self.faces[i];
        let w = self.adj.len() as Vertex;
        self.adj.push(BTreeSet::new());
        self.set(i, [a, b, w]);
        self.push([b, c, w]);
        self.push([c, a, w]);
    }

    /// Flips the edge leaving corner `k` of face `i` when the result stays a
    /// simple 3-connected triangulation.
    fn flip(&mut self, i: usize, k: usize) -> bool {
        let t = self.faces[i];
        let (u, v, a) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
        let j = self.owner[&(v, u)];
        let s = self.faces[j];
        let b = s[(s.iter().position(|&x| x == u).unwrap() + 1) % 3];
        if self.adj[a as usize].contains(&b) || self.adj[u as usize].len() <= 3 || self.adj[v as usize].len() <= 3 {
            return false;
        }
        self.owner.remove(&(u, v));
        self.owner.remove(&(v, u));
        self.adj[u as usize].remove(&v);
        self.adj[v as usize].remove(&u);
        self.set(i, [a, u, b]);
        self.set(j, [b, v, a]);
        true
    }
}

fn sphere_faces(n: usize, seed: u64) -> Result<Vec<[Vertex; 3]>> {
    if n < 4 {
        return Err(Error::precondition(format!("a triangulated sphere needs at least 4 vertices, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = SphereBuilder::new();
    let flip_once = |s: &mut SphereBuilder, rng: &mut ChaCha8Rng| {
        let i = rng.gen_range(0..s.faces.len());
        let k = rng.gen_range(0..3);
        s.flip(i, k);
    };
    while s.adj.len() < n {
        let i = rng.gen_range(0..s.faces.len());
        s.insert(i);
        flip_once(&mut s, &mut rng);
    }
    for _ in 0..n {
        flip_once(&mut s, &mut rng);
    }
    Ok(s.faces)
}

/// Random triangulated sphere on `n` vertices: stacked insertions into the
/// tetrahedron mixed with random flips.
pub fn random_triangulated_sphere(n: usize, seed: u64) -> Result<TopologicalGraph> {
    let faces: Vec<Vec<Vertex>> = sphere_faces(n, seed)?.into_iter().map(|t| t.to_vec()).collect();
    TopologicalGraph::from_oriented_faces(&faces)
}

/// A random sphere as two discs: one triangle and everything else.
pub fn random_sphere_polyhedron(n: usize, seed: u64) -> Result<Polyhedron> {
    let mut faces = sphere_faces(n, seed)?;
    let first = faces.remove(0);
    Polyhedron::from_unoriented(vec![], vec![], vec![(0, faces), (1, vec![first])])
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct ExpandOps {
    pub subdivisions: usize,
    pub insertions: usize,
    pub flips: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Op {
    Subdivide,
    Insert,
    Flip,
}

const ATTEMPTS: usize = 64;

/// Well-designed, separated, and every unclean chord is fixable by
/// rerouting a shared path.
fn admissible(p: &Polyhedron) -> bool {
    if !check_well_designed(p).passed() || !separation_check(p).is_empty() {
        return false;
    }
    let paths = boundary_paths(p);
    p.discs.keys().all(|&d| {
        unclean_chords(p, d).unwrap_or_default().into_iter().all(|c| {
            paths.iter().any(|bp| {
                let (a, b) = bp.between;
                (a == FaceRef::Disc(d) || b == FaceRef::Disc(d))
                    && matches!((a, b), (FaceRef::Disc(_), FaceRef::Disc(_)))
                    && bp.vertices.contains(&c.0)
                    && bp.vertices.contains(&c.1)
            })
        })
    })
}

fn try_op(p: &Polyhedron, op: Op, rng: &mut ChaCha8Rng) -> Option<Polyhedron> {
    let owners = p.dart_owners();
    let mut shared = Vec::new();
    let mut inner = Vec::new();
    for e in p.topology().edges() {
        match (owners[&(e.0, e.1)], owners[&(e.1, e.0)]) {
            (FaceRef::Disc(a), FaceRef::Disc(b)) if a == b => inner.push((a, e)),
            (FaceRef::Disc(_), FaceRef::Disc(_)) => shared.push(e),
            _ => {}
        }
    }
    let result = match op {
        Op::Subdivide => {
            let e = *shared.choose(rng)?;
            subdivide_boundary_edge(p, e).map(|(q, _)| q)
        }
        Op::Insert => {
            let ids: Vec<u32> = p.discs.keys().copied().collect();
            let d = *ids.choose(rng)?;
            let tris: Vec<[Vertex; 3]> = p.discs[&d].triangles.iter().copied().collect();
            let t = *tris.choose(rng)?;
            insert_interior_vertex(p, d, t).map(|(q, _)| q)
        }
        Op::Flip => {
            let (d, e) = *inner.choose(rng)?;
            flip_edge(p, d, e)
        }
    };
    result.ok().filter(admissible)
}

/// Applies the requested numbers of random subdivisions, insertions and
/// flips in a seeded order. Each move is kept only when the result is still
/// well-designed; a move with no admissible choice is skipped.
pub fn expand(p: &Polyhedron, seed: u64, ops: ExpandOps) -> Result<Polyhedron> {
    if !check_well_designed(p).passed() {
        return Err(Error::NotWellDesigned(check_well_designed(p).to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut plan = Vec::new();
    plan.extend(std::iter::repeat(Op::Subdivide).take(ops.subdivisions));
    plan.extend(std::iter::repeat(Op::Insert).take(ops.insertions));
    plan.extend(std::iter::repeat(Op::Flip).take(ops.flips));
    plan.shuffle(&mut rng);
    let mut cur = p.clone();
    for op in plan {
        match (0..ATTEMPTS).find_map(|_| try_op(&cur, op, &mut rng)) {
            Some(q) => cur = q,
            None => log::debug!("no admissible {op:?} move"),
        }
    }
    Ok(cur)
}

/// Two triangular bipyramids glued at their tips `0` and `1`.
pub fn double_banana() -> Graph {
    let mut g = Graph::new();
    for tri in [[2, 3, 4], [5, 6, 7]] {
        for i in 0..3 {
            g.add_edge(tri[i], tri[(i + 1) % 3]);
            g.add_edge(0, tri[i]);
            g.add_edge(1, tri[i]);
        }
    }
    g
}

/// A sphere with two quadrilateral blocks and two quadrilateral holes whose
/// graph is exactly the double banana. Tips are `0` (shared by the blocks)
/// and `1`.
pub fn implicit_banana() -> Result<Polyhedron> {
    let blocks = vec![
        (vec![2, 0, 3, 4], [Edge::new(2, 3), Edge::new(0, 4)].into_iter().collect()),
        (vec![5, 0, 6, 7], [Edge::new(5, 6), Edge::new(0, 7)].into_iter().collect()),
    ];
    let holes = vec![vec![1, 2, 0, 5], vec![1, 3, 0, 6]];
    let discs = vec![
        (0, vec![[1, 3, 4]]),
        (1, vec![[1, 4, 2]]),
        (2, vec![[1, 6, 7]]),
        (3, vec![[1, 7, 5]]),
    ];
    Polyhedron::from_unoriented(blocks, holes, discs)
}

/// A wheel disc (hub `0`, rim `1..=4`) whose rim vertices `1` and `3` are
/// joined outside the disc.
pub fn unclean_wheel() -> Result<Polyhedron> {
    Polyhedron::from_unoriented(
        vec![],
        vec![],
        vec![
            (0, vec![[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 1]]),
            (1, vec![[1, 3, 2]]),
            (2, vec![[1, 4, 3]]),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::vertex_disjoint_paths;
    use crate::poly::write_bhp;

    #[test]
    fn double_fan_sizes() {
        let g = block_graph(&double_fan_block(4).unwrap());
        assert_eq!(g.edge_count(), 6);
        let g5 = block_graph(&double_fan_block(5).unwrap());
        assert_eq!(g5.edge_count(), 9);
        assert!(!g5.has_edge(2, 4));
        assert_eq!(block_graph(&double_fan_block(8).unwrap()).edge_count(), 18);
    }

    #[test]
    fn tube_has_one_triangle_per_ring_vertex() {
        assert_eq!(tube(&ring(0, 8), &ring(8, 4)).len(), 12);
        assert_eq!(tube(&ring(0, 3), &ring(3, 5)).len(), 8);
    }

    #[test]
    fn towers_count_like_spheres() {
        for n in 3..=8 {
            let p = make_tower(n).unwrap();
            assert_eq!(p.edge_count(), 3 * p.vertex_count() - 6, "n = {n}");
            assert!(check_well_designed(&p).passed(), "n = {n}");
            assert!(separation_check(&p).is_empty());
        }
    }

    #[test]
    fn cylinder_waists() {
        for m in 3..=8 {
            for n in 3..=8 {
                for k in 3..=m.min(n) {
                    let p = make_cylinder(m, k, n).unwrap();
                    let a: BTreeSet<Vertex> = p.holes[0].boundary.iter().copied().collect();
                    let b: BTreeSet<Vertex> = p.holes[1].boundary.iter().copied().collect();
                    let (flow, _) = vertex_disjoint_paths(&p.topology().graph(), &a, &b);
                    assert_eq!(flow, k, "C({m},{k},{n})");
                    assert!(check_well_designed(&p).passed(), "C({m},{k},{n})");
                    assert!(separation_check(&p).is_empty(), "C({m},{k},{n})");
                }
            }
        }
        assert!(make_cylinder(4, 5, 4).is_err());
    }

    #[test]
    fn spheres_are_simple_triangulations() {
        for seed in 0..5 {
            let t = random_triangulated_sphere(30, seed).unwrap();
            assert_eq!(t.vertex_count(), 30);
            assert_eq!(t.edge_count(), 84);
            assert!(t.is_three_connected());
        }
        assert_eq!(random_triangulated_sphere(4, 9).unwrap().edge_count(), 6);
    }

    #[test]
    fn expansion_is_seeded_and_well_designed() {
        let base = make_tower(4).unwrap();
        let ops = ExpandOps { subdivisions: 6, insertions: 4, flips: 6 };
        let a = expand(&base, 7, ops).unwrap();
        let b = expand(&base, 7, ops).unwrap();
        assert_eq!(write_bhp(&a), write_bhp(&b));
        assert!(a.vertex_count() > base.vertex_count());
        assert!(check_well_designed(&a).passed());
        assert_eq!(expand(&base, 3, ExpandOps::default()).unwrap(), base);
    }

    #[test]
    fn implicit_banana_graph_is_the_double_banana() {
        let p = implicit_banana().unwrap();
        assert_eq!(p.graph(), double_banana());
        assert_eq!(double_banana().edge_count(), 18);
    }
}
