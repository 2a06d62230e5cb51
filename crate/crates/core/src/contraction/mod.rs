//! The contraction sequence: reroute unclear paths, contract interior edges,
//! contract hub spokes, then shrink every disc-to-disc path to one edge.
//! Each step records enough to be undone by vertex splits.

mod certificate;
mod clear;

pub use certificate::{parse_certificate, replay, verify, write_certificate, Certificate};
pub use clear::{clear_disc, ClearedDisc};

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{Edge, Vertex};
use crate::poly::{
    boundary_paths, check_well_designed, nonfacial_triangles_through, unclean_chords, write_bhp, Disc, DiscId,
    FaceRef, Polyhedron,
};
use crate::transform::{contract_edge, ContractionMove};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MoveKind {
    Interior,
    Spoke,
    Path,
    Length1,
}

impl MoveKind {
    pub fn name(self) -> &'static str {
        match self {
            MoveKind::Interior => "interior",
            MoveKind::Spoke => "spoke",
            MoveKind::Path => "path",
            MoveKind::Length1 => "length1",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "interior" => MoveKind::Interior,
            "spoke" => MoveKind::Spoke,
            "path" => MoveKind::Path,
            "length1" => MoveKind::Length1,
            _ => return None,
        })
    }
}

/// Triangles handed from one disc to its neighbour, shortening their path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reroute {
    pub from: DiscId,
    pub to: DiscId,
    pub triangles: Vec<[Vertex; 3]>,
    pub old_path: Vec<Vertex>,
    pub new_path: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Reroute(Reroute),
    Contract(MoveKind, ContractionMove),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Reroute(r) => write!(f, "reroute {} -> {} ({} triangles)", r.from, r.to, r.triangles.len()),
            Move::Contract(k, m) => write!(f, "contract-{} {} into {}", k.name(), m.absorbed, m.survivor),
        }
    }
}

/// Hex SHA-256 of the serialized polyhedron.
pub fn polyhedron_hash(p: &Polyhedron) -> String {
    hex::encode(Sha256::digest(write_bhp(p).as_bytes()))
}

/// Total vertices and total vertices on disc-to-disc boundary paths.
pub fn measure(p: &Polyhedron) -> (usize, usize) {
    let pv = disc_paths(p).iter().map(|bp| bp.vertices.len()).sum();
    (p.vertex_count(), pv)
}

fn disc_paths(p: &Polyhedron) -> Vec<crate::poly::BoundaryPath> {
    boundary_paths(p)
        .into_iter()
        .filter(|bp| matches!(bp.between, (FaceRef::Disc(_), FaceRef::Disc(_))))
        .collect()
}

/// Blocks, holes, disc ids and which faces share an edge. Unchanged by
/// every move of the sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub blocks: Vec<(Vec<Vertex>, BTreeSet<Edge>)>,
    pub holes: Vec<Vec<Vertex>>,
    pub discs: BTreeSet<DiscId>,
    pub adjacent: BTreeMap<(FaceRef, FaceRef), usize>,
}

pub fn structure(p: &Polyhedron) -> Structure {
    let mut adjacent = BTreeMap::new();
    for bp in boundary_paths(p) {
        *adjacent.entry(bp.between).or_insert(0) += 1;
    }
    Structure {
        blocks: p.blocks.iter().map(|b| (b.boundary.clone(), b.braces.clone())).collect(),
        holes: p.holes.iter().map(|h| h.boundary.clone()).collect(),
        discs: p.discs.keys().copied().collect(),
        adjacent,
    }
}

/// No interior vertices and every disc-to-disc path a single edge (a
/// triangle when the path closes up).
pub fn is_simplified(p: &Polyhedron) -> bool {
    p.interior_vertices().is_empty()
        && disc_paths(p)
            .iter()
            .all(|bp| if bp.closed { bp.vertices.len() == 3 } else { bp.vertices.len() == 2 })
}

fn all_clean(p: &Polyhedron) -> bool {
    p.discs.keys().all(|&d| unclean_chords(p, d).map_or(false, |c| c.is_empty()))
}

struct Run {
    p: Polyhedron,
    moves: Vec<Move>,
    shape: Structure,
}

impl Run {
    fn contract(&mut self, kind: MoveKind, keep: Vertex, drop: Vertex) -> Result<()> {
        let (q, m) = contract_edge(&self.p, keep, drop)?;
        self.p = q;
        self.moves.push(Move::Contract(kind, m));
        Ok(())
    }

    fn check_shape(&self, step: &str) -> Result<()> {
        if structure(&self.p) != self.shape {
            return Err(Error::Verification(format!("{step} changed the face structure")));
        }
        Ok(())
    }

    fn on_block_or_hole(&self, v: Vertex) -> bool {
        self.p.blocks.iter().any(|b| b.boundary.contains(&v)) || self.p.holes.iter().any(|h| h.boundary.contains(&v))
    }
}

/// Triangles of `disc` cut off by the chord `c` on the side of the dart
/// `start`, which must belong to the disc.
fn enclosed(p: &Polyhedron, disc: DiscId, start: (Vertex, Vertex), chord: Edge) -> Vec<[Vertex; 3]> {
    let d = &p.discs[&disc];
    let mut by_dart: BTreeMap<(Vertex, Vertex), [Vertex; 3]> = BTreeMap::new();
    for t in &d.triangles {
        for k in 0..3 {
            by_dart.insert((t[k], t[(k + 1) % 3]), *t);
        }
    }
    let mut seen: BTreeSet<[Vertex; 3]> = BTreeSet::new();
    let first = by_dart[&start];
    seen.insert(first);
    let mut q = VecDeque::from([first]);
    while let Some(t) = q.pop_front() {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            if Edge::new(a, b) == chord {
                continue;
            }
            if let Some(&s) = by_dart.get(&(b, a)) {
                if seen.insert(s) {
                    q.push_back(s);
                }
            }
        }
    }
    seen.into_iter().collect()
}

fn move_triangles(p: &Polyhedron, from: DiscId, to: DiscId, tris: &[[Vertex; 3]]) -> Result<Polyhedron> {
    let mut discs = p.discs.clone();
    for t in tris {
        if !discs.get_mut(&from).map_or(false, |d| d.remove(*t)) {
            return Err(Error::Verification(format!("triangle {t:?} is not in disc {from}")));
        }
        discs.entry(to).or_insert_with(Disc::default).insert(*t);
    }
    Polyhedron::from_parts(p.blocks.clone(), p.holes.clone(), discs, Some(p.next_id()))
}

pub(crate) fn apply_reroute(p: &Polyhedron, r: &Reroute) -> Result<Polyhedron> {
    move_triangles(p, r.from, r.to, &r.triangles)
}

pub(crate) fn undo_reroute(p: &Polyhedron, r: &Reroute) -> Result<Polyhedron> {
    move_triangles(p, r.to, r.from, &r.triangles)
}

/// Step 1: reroute every disc-to-disc path that has a chord until every
/// disc boundary is clean.
fn clean_boundaries(run: &mut Run) -> Result<()> {
    loop {
        let topo = run.p.topology();
        let owners = run.p.dart_owners();
        let mut best: Option<(Edge, usize, usize, crate::poly::BoundaryPath)> = None;
        for bp in disc_paths(&run.p) {
            if bp.closed || bp.vertices.len() < 3 {
                continue;
            }
            let xs = &bp.vertices;
            for i in 0..xs.len() {
                for j in i + 2..xs.len() {
                    let e = Edge::new(xs[i], xs[j]);
                    if topo.has_edge(e.0, e.1) && best.as_ref().map_or(true, |b| e < b.0) {
                        best = Some((e, i, j, bp.clone()));
                    }
                }
            }
        }
        let Some((chord, i, j, bp)) = best else { break };
        let xs = &bp.vertices;
        let inside = |d: FaceRef| owners.get(&(chord.0, chord.1)) == Some(&d) && owners.get(&(chord.1, chord.0)) == Some(&d);
        let (from, to) = match bp.between {
            (a, b) if inside(a) => (a, b),
            (a, b) if inside(b) => (b, a),
            _ => {
                return Err(Error::Verification(format!(
                    "chord {chord} of the path {xs:?} lies in neither disc"
                )))
            }
        };
        let (FaceRef::Disc(from), FaceRef::Disc(to)) = (from, to) else { unreachable!() };
        let dart = if owners.get(&(xs[i], xs[i + 1])) == Some(&FaceRef::Disc(from)) {
            (xs[i], xs[i + 1])
        } else {
            (xs[i + 1], xs[i])
        };
        let tris = enclosed(&run.p, from, dart, chord);
        if tris.len() == run.p.discs[&from].triangles.len() {
            return Err(Error::Verification(format!("rerouting through {chord} would swallow disc {from}")));
        }
        let mut new_path = xs[..=i].to_vec();
        new_path.extend_from_slice(&xs[j..]);
        let r = Reroute { from, to, triangles: tris, old_path: xs.clone(), new_path };
        run.p = apply_reroute(&run.p, &r)?;
        run.moves.push(Move::Reroute(r));
    }
    for &d in run.p.discs.keys() {
        let bad = unclean_chords(&run.p, d)?;
        if !bad.is_empty() {
            return Err(Error::Verification(format!(
                "disc {d} keeps the chords {bad:?} after path clearing"
            )));
        }
    }
    run.check_shape("path clearing")
}

/// Descends through nested non-facial triangles from an edge between two
/// interior vertices of `disc` to a long edge, returned as (keep, drop).
fn descend(p: &Polyhedron, disc: DiscId, start: Edge) -> Result<(Vertex, Vertex)> {
    let interior = p.discs[&disc].interior_vertices();
    let graph = p.topology().graph();
    // a vertex off the disc interior survives
    let orient = |e: Edge| if interior.contains(&e.0) && !interior.contains(&e.1) { (e.1, e.0) } else { (e.0, e.1) };
    let mut edge = start;
    let mut region: Option<BTreeSet<Vertex>> = None;
    let mut stack: Vec<[Vertex; 3]> = Vec::new();
    for _ in 0..=interior.len() + 1 {
        let zs = nonfacial_triangles_through(p, edge);
        if zs.is_empty() {
            return Ok(orient(edge));
        }
        let mut inner: Option<([Vertex; 3], BTreeSet<Vertex>)> = None;
        for z in zs {
            let t = [edge.0, edge.1, z];
            let cut: BTreeSet<Vertex> = t.iter().copied().collect();
            for comp in graph.components_without(&cut) {
                let nested = region.as_ref().map_or(true, |r| comp.len() < r.len() && comp.is_subset(r));
                if nested && comp.is_subset(&interior) && inner.as_ref().map_or(true, |(_, c)| comp.len() < c.len()) {
                    inner = Some((t, comp));
                }
            }
        }
        let Some((t, comp)) = inner else {
            return Err(Error::Verification(format!("no nested region inside a non-facial triangle at {edge}")));
        };
        stack.push(t);
        let both = comp
            .iter()
            .flat_map(|&u| graph.neighbors(u).filter(move |w| u < *w).map(move |w| Edge::new(u, w)))
            .find(|e| comp.contains(&e.0) && comp.contains(&e.1));
        edge = match both {
            Some(e) => e,
            None => {
                let u = *comp.iter().next().expect("non-empty region");
                Edge::new(u, graph.neighbors(u).next().expect("has neighbours"))
            }
        };
        region = Some(comp);
    }
    Err(Error::Verification(format!("descent from {start} did not terminate ({} levels)", stack.len())))
}

/// Step 2: contract edges between interior vertices until only wheel hubs
/// remain inside the discs.
fn contract_interior_edges(run: &mut Run) -> Result<()> {
    loop {
        let mut found = None;
        'discs: for (&id, d) in &run.p.discs {
            let inner = d.interior_vertices();
            for e in d.edges() {
                if inner.contains(&e.0) && inner.contains(&e.1) {
                    found = Some((id, e));
                    break 'discs;
                }
            }
        }
        let Some((id, e)) = found else { break };
        let (keep, drop) = descend(&run.p, id, e)?;
        run.contract(MoveKind::Interior, keep, drop)?;
    }
    run.check_shape("interior contraction")
}

/// Step 3: in every currently clean disc, merge each hub into a rim vertex.
fn contract_spokes(run: &mut Run) -> Result<()> {
    let ids: Vec<DiscId> = run.p.discs.keys().copied().collect();
    for id in ids {
        let hubs: Vec<Vertex> = run.p.discs[&id].interior_vertices().into_iter().collect();
        for h in hubs {
            if !unclean_chords(&run.p, id)?.is_empty() {
                log::debug!("disc {id} is not clean; its spokes wait for the next pass");
                break;
            }
            let rim: Vec<Vertex> = run.p.topology().rotation(h).to_vec();
            let mut rim_sorted = rim.clone();
            rim_sorted.sort_unstable();
            let mut done = false;
            for r in rim_sorted {
                match run.contract(MoveKind::Spoke, r, h) {
                    Ok(()) => {
                        done = true;
                        break;
                    }
                    Err(Error::ShortEdge { .. }) | Err(Error::Precondition(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            if !done {
                log::debug!("no spoke of hub {h} could be contracted");
            }
        }
    }
    run.check_shape("spoke contraction")
}

/// Step 4: shrink every disc-to-disc path to a single edge.
fn contract_path_edges(run: &mut Run) -> Result<()> {
    loop {
        let target = disc_paths(&run.p).into_iter().find(|bp| {
            if bp.closed {
                bp.vertices.len() > 3
            } else {
                bp.vertices.len() > 2
            }
        });
        let Some(bp) = target else { break };
        let xs = &bp.vertices;
        let n = xs.len();
        let tries = if bp.closed {
            vec![(xs[0], xs[1]), (xs[1], xs[2])]
        } else {
            vec![(xs[0], xs[1]), (xs[n - 1], xs[n - 2])]
        };
        let mut last = None;
        for (keep, drop) in tries {
            match run.contract(MoveKind::Path, keep, drop) {
                Ok(()) => {
                    last = None;
                    break;
                }
                Err(e) => last = Some(e),
            }
        }
        if let Some(e) = last {
            return Err(e);
        }
    }
    run.check_shape("path contraction")
}

/// Runs the full sequence and returns its certificate.
pub fn run_contraction_sequence(p: &Polyhedron) -> Result<Certificate> {
    let report = check_well_designed(p);
    if !report.passed() {
        return Err(Error::NotWellDesigned(report.to_string()));
    }
    let mut run = Run { p: p.clone(), moves: Vec::new(), shape: structure(p) };
    loop {
        let before = measure(&run.p);
        clean_boundaries(&mut run)?;
        contract_interior_edges(&mut run)?;
        contract_spokes(&mut run)?;
        let again = !all_clean(&run.p) || !run.p.interior_vertices().is_empty();
        if !again {
            break;
        }
        let after = measure(&run.p);
        let fewer_vertices = after.0 < before.0 && after.1 <= before.1;
        let shorter_paths = after.0 == before.0 && after.1 < before.1;
        if !(fewer_vertices || shorter_paths) {
            return Err(Error::Verification(format!(
                "no progress in a pass: (vertices, path vertices) {before:?} -> {after:?}"
            )));
        }
    }
    contract_path_edges(&mut run)?;
    if !is_simplified(&run.p) {
        return Err(Error::Verification("sequence ended on a polyhedron that is not simplified".into()));
    }
    Ok(Certificate { initial_hash: polyhedron_hash(p), moves: run.moves, base: run.p })
}

/// Contracts each listed length-1 path to a single vertex, extending the
/// certificate. The endpoint on a block (then on a hole, then the smaller
/// label) survives.
pub fn contract_to_base(cert: &Certificate, collapse: &[Edge]) -> Result<Certificate> {
    let mut run = Run { p: cert.base.clone(), moves: cert.moves.clone(), shape: structure(&cert.base) };
    for &e in collapse {
        let owners = run.p.dart_owners();
        match (owners.get(&(e.0, e.1)), owners.get(&(e.1, e.0))) {
            (Some(FaceRef::Disc(a)), Some(FaceRef::Disc(b))) if a != b => {}
            _ => {
                return Err(Error::precondition(format!("{e} is not a path between two discs")));
            }
        }
        let braced = |v: Vertex| run.p.blocks.iter().any(|b| b.braces.iter().any(|x| x.contains(v)));
        let rank = |v: Vertex| (!braced(v), !run.on_block_or_hole(v), v);
        let (keep, drop) = if rank(e.0) <= rank(e.1) { (e.0, e.1) } else { (e.1, e.0) };
        run.contract(MoveKind::Length1, keep, drop)?;
    }
    Ok(Certificate { initial_hash: cert.initial_hash.clone(), moves: run.moves, base: run.p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{expand, make_cylinder, make_tower, ExpandOps};

    #[test]
    fn simplified_input_gives_empty_certificate() {
        let p = make_tower(4).unwrap();
        let c = run_contraction_sequence(&p).unwrap();
        assert!(c.moves.is_empty());
        assert_eq!(c.base, p);
    }

    #[test]
    fn expanded_tower_returns_to_a_tower() {
        let base = make_tower(4).unwrap();
        let big = expand(&base, 1, ExpandOps { subdivisions: 10, insertions: 10, flips: 20 }).unwrap();
        let c = run_contraction_sequence(&big).unwrap();
        assert_eq!(c.base.vertex_count(), 8);
        assert_eq!(structure(&c.base), structure(&base));
        assert_eq!(write_bhp(&replay(&c).unwrap()), write_bhp(&big));
        verify(&c, Some(&big)).unwrap();
    }

    #[test]
    fn expanded_cylinder_round_trip() {
        let base = make_cylinder(5, 3, 4).unwrap();
        for seed in 0..3 {
            let big = expand(&base, seed, ExpandOps { subdivisions: 8, insertions: 6, flips: 10 }).unwrap();
            let c = run_contraction_sequence(&big).unwrap();
            assert!(is_simplified(&c.base));
            verify(&c, Some(&big)).unwrap();
        }
    }

    #[test]
    fn tower_collapses_to_a_blocked_polygon() {
        let p = make_tower(4).unwrap();
        let c = run_contraction_sequence(&p).unwrap();
        let rungs: Vec<Edge> = (0..4).map(|i| Edge::new(i, i + 4)).collect();
        let c2 = contract_to_base(&c, &rungs).unwrap();
        assert_eq!(c2.base.vertex_count(), 4);
        assert!(c2.base.discs.is_empty());
        assert_eq!(c2.base.edge_count(), 6);
        verify(&c2, Some(&p)).unwrap();
    }
}
