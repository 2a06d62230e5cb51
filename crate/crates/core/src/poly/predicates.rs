//! Structural predicates used by the contraction engine.
//!
//! All checks here use topological edges only. Block braces live inside their
//! block and never take part in separating triangles, chords or paths.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{DiscId, FaceRef, Polyhedron};
use crate::error::{Error, Result};
use crate::graph::{Edge, Vertex};

/// True iff `{a, b, c}` is a face of the embedding (block, hole or disc
/// triangle). Uses the rotation system directly.
pub(crate) fn is_facial(p: &Polyhedron, a: Vertex, b: Vertex, c: Vertex) -> bool {
    let topo = p.topology();
    let face_from = |u: Vertex, v: Vertex, w: Vertex| {
        topo.prev_around(v, u) == Some(w) && topo.prev_around(w, v) == Some(u)
    };
    face_from(a, b, c) || face_from(b, a, c)
}

/// A triangle of the graph that is not a face and not a disc triangle.
pub fn is_nonfacial_triangle(p: &Polyhedron, t: [Vertex; 3]) -> Result<bool> {
    let topo = p.topology();
    let [a, b, c] = t;
    if a == b || b == c || a == c {
        return Err(Error::precondition(format!("{t:?} is not a vertex triple")));
    }
    for (x, y) in [(a, b), (b, c), (a, c)] {
        if !topo.has_edge(x, y) {
            return Err(Error::precondition(format!(
                "{x}-{y} is not an edge, so {t:?} is not a triangle"
            )));
        }
    }
    Ok(!is_facial(p, a, b, c))
}

/// Third vertices `w` for which `{u, v, w}` is a non-facial triangle.
pub fn nonfacial_triangles_through(p: &Polyhedron, e: Edge) -> Vec<Vertex> {
    let topo = p.topology();
    let nu: BTreeSet<Vertex> = topo.rotation(e.0).iter().copied().collect();
    topo.rotation(e.1)
        .iter()
        .copied()
        .filter(|w| nu.contains(w) && !is_facial(p, e.0, e.1, *w))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// An edge in no non-facial triangle.
pub fn is_long_edge(p: &Polyhedron, e: Edge) -> Result<bool> {
    if !p.topology().has_edge(e.0, e.1) {
        return Err(Error::precondition(format!("{e} is not an edge of the polyhedron")));
    }
    Ok(nonfacial_triangles_through(p, e).is_empty())
}

/// Every edge between two boundary vertices of the disc lies in the disc.
pub fn has_clean_boundary(p: &Polyhedron, disc: DiscId) -> Result<bool> {
    Ok(unclean_chords(p, disc)?.is_empty())
}

/// Edges joining boundary vertices of `disc` that are not edges of the disc.
pub fn unclean_chords(p: &Polyhedron, disc: DiscId) -> Result<Vec<Edge>> {
    let d = p
        .discs
        .get(&disc)
        .ok_or_else(|| Error::precondition(format!("no disc {disc}")))?;
    let bv = d.boundary_vertices();
    let own = d.edges();
    let topo = p.topology();
    let mut out = Vec::new();
    for &u in &bv {
        for &w in topo.rotation(u) {
            if u < w && bv.contains(&w) && !own.contains(&Edge::new(u, w)) {
                out.push(Edge::new(u, w));
            }
        }
    }
    Ok(out)
}

/// A maximal run of edges shared by two faces of the partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPath {
    pub between: (FaceRef, FaceRef),
    /// `x_1 .. x_k`, oriented along the boundary of the first face.
    pub vertices: Vec<Vertex>,
    /// The shared edges close up into a cycle.
    pub closed: bool,
}

impl BoundaryPath {
    pub fn length(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    pub fn interior(&self) -> &[Vertex] {
        if self.closed || self.vertices.len() < 2 {
            &self.vertices[..0]
        } else {
            &self.vertices[1..self.vertices.len() - 1]
        }
    }

    pub fn edges(&self) -> Vec<Edge> {
        let n = self.vertices.len();
        let m = if self.closed { n } else { n - 1 };
        (0..m)
            .map(|i| Edge::new(self.vertices[i], self.vertices[(i + 1) % n]))
            .collect()
    }
}

/// All runs of shared edges between distinct faces, grouped by face pair.
pub fn boundary_paths(p: &Polyhedron) -> Vec<BoundaryPath> {
    let owners = p.dart_owners();
    let mut by_pair: BTreeMap<(FaceRef, FaceRef), BTreeMap<Vertex, Vertex>> = BTreeMap::new();
    for (&(a, b), &fa) in &owners {
        let fb = owners[&(b, a)];
        if fa < fb {
            by_pair.entry((fa, fb)).or_default().insert(a, b);
        }
    }
    let mut out = Vec::new();
    for (pair, next) in by_pair {
        let heads: BTreeSet<Vertex> = next.values().copied().collect();
        let mut used: BTreeSet<Vertex> = BTreeSet::new();
        let starts: Vec<Vertex> = next.keys().copied().filter(|a| !heads.contains(a)).collect();
        for s in starts {
            let mut path = vec![s];
            used.insert(s);
            let mut cur = s;
            while let Some(&n) = next.get(&cur) {
                path.push(n);
                used.insert(n);
                cur = n;
            }
            out.push(BoundaryPath { between: pair, vertices: path, closed: false });
        }
        for &s in next.keys() {
            if used.contains(&s) {
                continue;
            }
            let mut cyc = vec![s];
            used.insert(s);
            let mut cur = next[&s];
            while cur != s {
                cyc.push(cur);
                used.insert(cur);
                cur = next[&cur];
            }
            out.push(BoundaryPath { between: pair, vertices: cyc, closed: true });
        }
    }
    out
}

/// Which well-designed condition a failure belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Condition {
    WellAttached,
    WellSurrounded,
    Coverage,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::WellAttached => "well-attached",
            Condition::WellSurrounded => "well-surrounded",
            Condition::Coverage => "coverage",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub condition: Condition,
    pub detail: String,
    pub witness: Vec<Vertex>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WellDesignedReport {
    pub pairs_checked: usize,
    pub discs_checked: usize,
    pub vertices_checked: usize,
    pub failures: Vec<Failure>,
}

impl WellDesignedReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn passed_condition(&self, c: Condition) -> bool {
        self.failures.iter().all(|f| f.condition != c)
    }

    fn fail(&mut self, condition: Condition, detail: String, witness: Vec<Vertex>) {
        self.failures.push(Failure { condition, detail, witness });
    }

    /// Converts the first failure into an error.
    pub fn into_result(self) -> Result<()> {
        match self.failures.first() {
            None => Ok(()),
            Some(f) => Err(Error::NotWellDesigned(format!(
                "{} fails: {} (witness {:?})",
                f.condition, f.detail, f.witness
            ))),
        }
    }
}

impl fmt::Display for WellDesignedReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in [Condition::WellAttached, Condition::WellSurrounded, Condition::Coverage] {
            let verdict = if self.passed_condition(c) { "pass" } else { "fail" };
            writeln!(f, "{c}: {verdict}")?;
        }
        for x in &self.failures {
            writeln!(f, "  {}: {} {:?}", x.condition, x.detail, x.witness)?;
        }
        Ok(())
    }
}

fn face_name(r: FaceRef) -> String {
    match r {
        FaceRef::Block(i) => format!("block {i}"),
        FaceRef::Hole(i) => format!("hole {i}"),
        FaceRef::Disc(i) => format!("disc {i}"),
    }
}

fn face_vertices(p: &Polyhedron, r: FaceRef) -> BTreeSet<Vertex> {
    match r {
        FaceRef::Block(i) => p.blocks[i].boundary.iter().copied().collect(),
        FaceRef::Hole(i) => p.holes[i].boundary.iter().copied().collect(),
        FaceRef::Disc(id) => p.discs[&id].vertices(),
    }
}

fn face_boundary_vertices(p: &Polyhedron, r: FaceRef) -> BTreeSet<Vertex> {
    match r {
        FaceRef::Disc(id) => p.discs[&id].boundary_vertices(),
        other => face_vertices(p, other),
    }
}

/// Checks the three well-designed conditions and reports every failure.
///
/// Pairs of discs sharing at least one edge must be well-attached: the
/// shared edges form one path, interior path vertices see only the two
/// discs, and each disc keeps boundary edges off the path. Two discs whose
/// shared edges close into a cycle cover the sphere between them and count
/// as attached. Every triangulated disc must be well-surrounded, and every
/// vertex must lie on some disc, block or hole.
pub fn check_well_designed(p: &Polyhedron) -> WellDesignedReport {
    let mut rep = WellDesignedReport::default();
    let paths = boundary_paths(p);
    let mut runs: BTreeMap<(FaceRef, FaceRef), Vec<&BoundaryPath>> = BTreeMap::new();
    for bp in &paths {
        runs.entry(bp.between).or_default().push(bp);
    }

    for (&(a, b), rs) in &runs {
        let (FaceRef::Disc(da), FaceRef::Disc(db)) = (a, b) else { continue };
        rep.pairs_checked += 1;
        let name = format!("discs {da} and {db}");
        if rs.len() != 1 {
            let w = rs.iter().flat_map(|r| r.vertices.iter().copied()).collect();
            rep.fail(Condition::WellAttached, format!("{name} share several paths"), w);
            continue;
        }
        let path = rs[0];
        if path.closed {
            continue;
        }
        let va = p.discs[&da].vertices();
        let vb = p.discs[&db].vertices();
        let common: BTreeSet<Vertex> = va.intersection(&vb).copied().collect();
        let on_path: BTreeSet<Vertex> = path.vertices.iter().copied().collect();
        if common != on_path {
            let extra = common.difference(&on_path).copied().collect();
            rep.fail(
                Condition::WellAttached,
                format!("{name} meet outside their shared path"),
                extra,
            );
        }
        for &x in path.interior() {
            let stray: Vec<Vertex> = p
                .topology()
                .rotation(x)
                .iter()
                .copied()
                .filter(|w| !va.contains(w) && !vb.contains(w))
                .collect();
            if !stray.is_empty() {
                rep.fail(
                    Condition::WellAttached,
                    format!("path vertex {x} of {name} has neighbours outside both discs"),
                    stray,
                );
            }
        }
        let pe: BTreeSet<Edge> = path.edges().into_iter().collect();
        for id in [da, db] {
            if p.discs[&id].boundary_edges().is_subset(&pe) {
                rep.fail(
                    Condition::WellAttached,
                    format!("disc {id} has no boundary edge off its path with the other"),
                    path.vertices.clone(),
                );
            }
        }
    }

    let incident = p.incident_faces();
    for (&id, disc) in &p.discs {
        rep.discs_checked += 1;
        let me = FaceRef::Disc(id);
        let bv = disc.boundary_vertices();
        let mut around: BTreeSet<FaceRef> = BTreeSet::new();
        for v in &bv {
            around.extend(incident[v].iter().copied().filter(|&r| r != me));
        }
        for &other in &around {
            let common: BTreeSet<Vertex> =
                face_boundary_vertices(p, other).intersection(&bv).copied().collect();
            let key = if me < other { (me, other) } else { (other, me) };
            let rs = runs.get(&key).map_or(&[][..], |v| v.as_slice());
            let connected = match rs {
                [] => common.len() == 1,
                [r] => {
                    let on: BTreeSet<Vertex> = r.vertices.iter().copied().collect();
                    on == common
                }
                _ => false,
            };
            if !connected {
                rep.fail(
                    Condition::WellSurrounded,
                    format!(
                        "{} meets disc {id} in neither one vertex nor a connected path",
                        face_name(other)
                    ),
                    common.into_iter().collect(),
                );
                continue;
            }
            let shared_edges: usize = rs.iter().map(|r| r.length()).sum();
            if shared_edges > 1 && !matches!(other, FaceRef::Disc(_)) {
                rep.fail(
                    Condition::WellSurrounded,
                    format!("{} shares {shared_edges} edges with disc {id}", face_name(other)),
                    rs[0].vertices.clone(),
                );
            }
        }
        // (iii): chords between boundary vertices must run inside the disc or
        // through a surrounding face.
        let own = disc.edges();
        let owners = p.dart_owners();
        for &u in &bv {
            for &w in p.topology().rotation(u) {
                if u < w && bv.contains(&w) && !own.contains(&Edge::new(u, w)) {
                    let inside_neighbour = [owners[&(u, w)], owners[&(w, u)]]
                        .iter()
                        .any(|r| around.contains(r));
                    if !inside_neighbour {
                        rep.fail(
                            Condition::WellSurrounded,
                            format!("chord {u}-{w} of disc {id} crosses no surrounding face"),
                            vec![u, w],
                        );
                    }
                }
            }
        }
    }

    let covered: BTreeSet<Vertex> = p
        .assigned_faces()
        .into_iter()
        .flat_map(|(_, f)| f.into_iter())
        .collect();
    for v in p.vertices() {
        rep.vertices_checked += 1;
        if !covered.contains(&v) {
            rep.fail(Condition::Coverage, format!("vertex {v} lies in no face"), vec![v]);
        }
    }
    rep
}
