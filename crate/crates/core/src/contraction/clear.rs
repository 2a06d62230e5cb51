//! Clearing a triangulated disc inside an arbitrary graph.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};
use crate::poly::Disc;
use crate::transform::GraphSplit;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClearedDisc {
    pub graph: Graph,
    pub disc: Disc,
    /// Splits that rebuild the original graph from `graph`, in order.
    pub splits: Vec<GraphSplit>,
}

impl ClearedDisc {
    pub fn replay(&self) -> Result<Graph> {
        self.splits.iter().try_fold(self.graph.clone(), |g, s| s.apply(&g))
    }
}

/// Apexes of the two disc triangles on an inner edge.
fn apexes(d: &Disc, e: Edge) -> Option<[Vertex; 2]> {
    let mut out = d
        .triangles
        .iter()
        .filter(|t| t.contains(&e.0) && t.contains(&e.1))
        .map(|t| *t.iter().find(|&&v| v != e.0 && v != e.1).expect("third vertex"));
    let a = out.next()?;
    let b = out.next()?;
    out.next().is_none().then_some([a, b])
}

/// Contracts interior vertices of `disc` into neighbours until none are
/// left. The boundary must be clear: every edge of `g` between two boundary
/// vertices lies in the disc, and interior vertices have no edges outside
/// it.
pub fn clear_disc(g: &Graph, disc: &Disc) -> Result<ClearedDisc> {
    let boundary: BTreeSet<Vertex> = disc.boundary()?.into_iter().collect();
    let own = disc.edges();
    for e in g.edges() {
        if boundary.contains(&e.0) && boundary.contains(&e.1) && !own.contains(&e) {
            return Err(Error::precondition(format!("boundary is not clear: {e} lies outside the disc")));
        }
    }
    for v in disc.interior_vertices() {
        if let Some(w) = g.neighbors(v).find(|&w| !own.contains(&Edge::new(v, w))) {
            return Err(Error::precondition(format!("interior vertex {v} has the outside edge {v}-{w}")));
        }
    }
    let mut g = g.clone();
    let mut d = disc.clone();
    let mut undo = Vec::new();
    loop {
        let inner = d.interior_vertices();
        if inner.is_empty() {
            break;
        }
        // interior-interior edges first, then spokes, lowest labels first
        let mut cands: Vec<(bool, Vertex, Vertex)> = Vec::new();
        for &y in &inner {
            for x in g.neighbors(y) {
                cands.push((!inner.contains(&x), x, y));
            }
        }
        cands.sort_unstable();
        let pick = cands.into_iter().find_map(|(_, x, y)| {
            let ap = apexes(&d, Edge::new(x, y))?;
            let mut common = g.common_neighbors(x, y);
            common.sort_unstable();
            let mut want = ap.to_vec();
            want.sort_unstable();
            (common == want).then_some((x, y, ap))
        });
        let Some((x, y, [a, b])) = pick else {
            return Err(Error::Verification("no long edge at an interior vertex".into()));
        };
        let moved: Vec<Vertex> = g.neighbors(y).filter(|&w| w != x && w != a && w != b).collect();
        for &w in &moved {
            g.add_edge(x, w);
        }
        g.remove_vertex(y);
        let tris: Vec<[Vertex; 3]> = d
            .triangles
            .iter()
            .filter(|t| !(t.contains(&x) && t.contains(&y)))
            .map(|t| t.map(|v| if v == y { x } else { v }))
            .collect();
        d = Disc::new(tris);
        undo.push(GraphSplit { vertex: x, new_vertex: y, shared: [a, b], moved });
    }
    undo.reverse();
    Ok(ClearedDisc { graph: g, disc: d, splits: undo })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::random_triangulated_sphere;

    #[test]
    fn sphere_minus_a_triangle_clears_to_a_double_triangle() {
        let t = random_triangulated_sphere(25, 4).unwrap();
        let faces = t.faces().unwrap();
        let tris: Vec<[Vertex; 3]> = faces[1..].iter().map(|f| [f[0], f[1], f[2]]).collect();
        let g = t.graph();
        let c = clear_disc(&g, &Disc::new(tris)).unwrap();
        assert_eq!(c.graph.vertex_count(), 3);
        assert_eq!(c.graph.edge_count(), 3);
        assert_eq!(c.disc.triangles.len(), 1);
        assert_eq!(c.splits.len(), 22);
        assert_eq!(c.replay().unwrap(), g);
    }

    #[test]
    fn unclear_boundary_is_refused() {
        // square disc 0-1-2-3 with diagonal 0-2 inside and 1-3 outside
        let g = Graph::from_edges([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)].map(|(a, b)| Edge::new(a, b)));
        let d = Disc::new([[0, 1, 2], [0, 2, 3]]);
        assert!(clear_disc(&g, &d).is_err());
    }
}
