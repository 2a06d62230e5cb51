//! Exact generic rigidity in 3-space.
//!
//! The rigidity matrix of a framework has one row per edge `{x, y}` with
//! `p(x) - p(y)` in the three columns of `x` and `p(y) - p(x)` in those of
//! `y`. Its rank is computed exactly over the prime field `F_p`,
//! `p = 2^61 - 1`, at coordinates drawn uniformly from `[1, p - 1]`.
//!
//! The rank at a random point never exceeds the generic rank, and it falls
//! short only on the zero set of a nonzero minor of degree at most `r`
//! (the generic rank). By Schwartz-Zippel a single trial underestimates
//! with probability at most `r / p`, under `2^-50` for every graph here;
//! several trials make the maximum the generic value with overwhelming
//! probability.
//!
//! Coordinates depend only on `(seed, trial, vertex)`, so within one trial
//! ranks are monotone under adding edges and vertices.

pub mod field;

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};

pub const DEFAULT_TRIALS: usize = 3;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// A graph with a configuration over the field.
#[derive(Clone, Debug)]
pub struct Framework {
    pub graph: Graph,
    pub coords: BTreeMap<Vertex, [u64; 3]>,
}

fn vertex_rng(seed: u64, trial: u64, v: Vertex, salt: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    key[16..24].copy_from_slice(&(v as u64).to_le_bytes());
    key[24..].copy_from_slice(&salt.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

impl Framework {
    /// Random configuration for one trial; resampled until the points span
    /// 3-space (or as much of it as the vertex count allows).
    pub fn random(graph: &Graph, seed: u64, trial: u64) -> Self {
        for salt in 0.. {
            let coords: BTreeMap<Vertex, [u64; 3]> = graph
                .vertices()
                .map(|v| {
                    let mut r = vertex_rng(seed, trial, v, salt);
                    (v, [0; 3].map(|_| r.gen_range(1..field::P)))
                })
                .collect();
            let f = Framework { graph: graph.clone(), coords };
            if f.spans() {
                return f;
            }
            log::warn!("degenerate configuration for trial {trial}; resampling");
        }
        unreachable!()
    }

    /// Configuration from small integer coordinates.
    pub fn with_integer_coords(graph: &Graph, coords: &BTreeMap<Vertex, [i64; 3]>) -> Self {
        Framework {
            graph: graph.clone(),
            coords: coords
                .iter()
                .map(|(&v, c)| (v, c.map(field::from_i64)))
                .collect(),
        }
    }

    /// Affine span has dimension `min(n - 1, 3)`.
    pub fn spans(&self) -> bool {
        let pts: Vec<&[u64; 3]> = self.coords.values().collect();
        let Some(first) = pts.first() else { return true };
        let mut basis = EchelonBasis::new(3);
        for q in &pts[1..] {
            basis.insert((0..3).map(|i| field::sub(q[i], first[i])).collect());
        }
        basis.rank() == (pts.len().saturating_sub(1)).min(3)
    }

    fn columns(&self) -> BTreeMap<Vertex, usize> {
        self.graph.vertices().enumerate().map(|(i, v)| (v, 3 * i)).collect()
    }

    fn row(&self, cols: &BTreeMap<Vertex, usize>, e: Edge) -> Vec<u64> {
        let mut r = vec![0; 3 * cols.len()];
        let (a, b) = (self.coords[&e.0], self.coords[&e.1]);
        for i in 0..3 {
            let d = field::sub(a[i], b[i]);
            r[cols[&e.0] + i] = d;
            r[cols[&e.1] + i] = field::sub(0, d);
        }
        r
    }

    /// Rows of the rigidity matrix in edge order.
    pub fn rigidity_matrix(&self) -> Vec<Vec<u64>> {
        let cols = self.columns();
        self.graph.edges().map(|e| self.row(&cols, e)).collect()
    }

    /// Rank plus the edges whose rows depend on earlier ones.
    pub fn rank_with_redundant(&self) -> (usize, Vec<Edge>) {
        let cols = self.columns();
        let mut basis = EchelonBasis::new(3 * cols.len());
        let mut redundant = Vec::new();
        for e in self.graph.edges() {
            if !basis.insert(self.row(&cols, e)) {
                redundant.push(e);
            }
        }
        (basis.rank(), redundant)
    }

    pub fn rank(&self) -> usize {
        self.rank_with_redundant().0
    }
}

/// Incremental row-echelon basis over the field. Each stored row has a
/// leading 1 at its pivot and zeros at the pivots of earlier rows.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    width: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl EchelonBasis {
    pub fn new(width: usize) -> Self {
        EchelonBasis { width, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a row; returns false if it lies in the span already.
    pub fn insert(&mut self, mut row: Vec<u64>) -> bool {
        debug_assert_eq!(row.len(), self.width);
        for (pivot, b) in &self.rows {
            let c = row[*pivot];
            if c == 0 {
                continue;
            }
            for j in *pivot..self.width {
                if b[j] != 0 {
                    row[j] = field::sub(row[j], field::mul(c, b[j]));
                }
            }
        }
        let Some(pivot) = row.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = field::inv(row[pivot]);
        for x in &mut row[pivot..] {
            *x = field::mul(*x, s);
        }
        self.rows.push((pivot, row));
        true
    }
}

/// Rank over the field of an arbitrary matrix.
pub fn matrix_rank(rows: &[Vec<u64>]) -> usize {
    let Some(w) = rows.first().map(|r| r.len()) else { return 0 };
    let mut b = EchelonBasis::new(w);
    for r in rows {
        b.insert(r.clone());
    }
    b.rank()
}

/// Ranks from several independent trials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    pub per_trial: Vec<usize>,
    /// Dependent edges in a best trial, in edge order.
    pub redundant: Vec<Edge>,
}

impl RankResult {
    pub fn agreeing(&self) -> usize {
        self.per_trial.iter().filter(|&&r| r == self.rank).count()
    }
}

pub fn generic_rank_detail(g: &Graph, trials: usize, seed: u64) -> RankResult {
    let trials = trials.max(1);
    let runs: Vec<(usize, Vec<Edge>)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| Framework::random(g, seed, t).rank_with_redundant())
        .collect();
    let best = runs.iter().map(|r| r.0).max().unwrap_or(0);
    let per_trial: Vec<usize> = runs.iter().map(|r| r.0).collect();
    if per_trial.iter().any(|&r| r != best) {
        log::warn!("rank trials disagree ({per_trial:?}); taking the maximum {best}");
    }
    let redundant = runs.into_iter().find(|r| r.0 == best).map(|r| r.1).unwrap_or_default();
    RankResult { rank: best, per_trial, redundant }
}

pub fn generic_rank(g: &Graph, trials: usize) -> usize {
    generic_rank_detail(g, trials, DEFAULT_SEED).rank
}

/// Internal degrees of freedom `3|V| - 6 - rank`.
pub fn idof(g: &Graph, trials: usize) -> Result<usize> {
    let n = g.vertex_count();
    if n < 3 {
        return Err(Error::precondition(format!("idof needs at least 3 vertices, found {n}")));
    }
    Ok(3 * n - 6 - generic_rank(g, trials))
}

/// Whether adding `e` raises the generic rank.
pub fn edge_independent(g: &Graph, e: Edge, trials: usize) -> Result<bool> {
    if g.has_edge(e.0, e.1) {
        return Err(Error::precondition(format!("{e} is already an edge")));
    }
    if !g.contains_vertex(e.0) || !g.contains_vertex(e.1) {
        return Err(Error::precondition(format!("{e} joins a vertex outside the graph")));
    }
    let mut h = g.clone();
    h.add_edge(e.0, e.1);
    Ok(generic_rank(&h, trials) == generic_rank(g, trials) + 1)
}

/// Rank gained by adding every missing pair among the hole's vertices.
pub fn hole_idof(g: &Graph, boundary: &[Vertex], trials: usize) -> usize {
    let mut h = g.clone();
    for (i, &a) in boundary.iter().enumerate() {
        for &b in &boundary[i + 1..] {
            h.add_edge(a, b);
        }
    }
    generic_rank(&h, trials) - generic_rank(g, trials)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityReport {
    pub vertices: usize,
    pub edges: usize,
    pub rank: usize,
    pub idof: usize,
    pub isostatic: bool,
    pub independent: bool,
    pub redundant_edges: Vec<Edge>,
    pub trials: usize,
    pub agreeing: usize,
}

impl RigidityReport {
    pub fn analyze(g: &Graph, trials: usize, seed: u64) -> Result<Self> {
        let n = g.vertex_count();
        if n < 3 {
            return Err(Error::precondition(format!("analysis needs at least 3 vertices, found {n}")));
        }
        let r = generic_rank_detail(g, trials, seed);
        let e = g.edge_count();
        Ok(RigidityReport {
            vertices: n,
            edges: e,
            rank: r.rank,
            idof: (3 * n - 6).saturating_sub(r.rank),
            isostatic: e == 3 * n - 6 && r.rank == e,
            independent: r.rank == e,
            agreeing: r.agreeing(),
            trials: r.per_trial.len(),
            redundant_edges: r.redundant,
        })
    }

    pub fn csv_header() -> &'static str {
        "vertices,edges,rank,idof,isostatic,independent,redundant,trials,agreeing"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.vertices,
            self.edges,
            self.rank,
            self.idof,
            self.isostatic,
            self.independent,
            self.redundant_edges.len(),
            self.trials,
            self.agreeing
        )
    }
}

impl fmt::Display for RigidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let red: Vec<String> = self.redundant_edges.iter().map(|e| e.to_string()).collect();
        writeln!(f, "vertices = {}", self.vertices)?;
        writeln!(f, "edges = {}", self.edges)?;
        writeln!(f, "rank = {}", self.rank)?;
        writeln!(f, "idof = {}", self.idof)?;
        writeln!(f, "isostatic = {}", self.isostatic)?;
        writeln!(f, "independent = {}", self.independent)?;
        writeln!(f, "redundant_edges = {}", red.join(" "))?;
        writeln!(f, "trials = {}", self.trials)?;
        writeln!(f, "agreeing = {}", self.agreeing)
    }
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
    fn single_edge_matrix() {
        let g = complete(2);
        let f = Framework::random(&g, 1, 0);
        let m = f.rigidity_matrix();
        assert_eq!((m.len(), m[0].len()), (1, 6));
        assert_eq!(f.rank(), 1);
    }

    #[test]
    fn small_complete_graphs() {
        assert_eq!(generic_rank(&complete(3), 3), 3);
        assert_eq!(generic_rank(&complete(4), 3), 6);
        assert_eq!(generic_rank(&complete(5), 3), 9);
        assert_eq!(idof(&complete(4), 3).unwrap(), 0);
    }

    #[test]
    fn isolated_polygon_idof() {
        for n in 4..9u32 {
            let g = Graph::from_edges((0..n).map(|i| Edge::new(i, (i + 1) % n)));
            assert_eq!(idof(&g, 3).unwrap() as u32, 2 * (n - 3));
        }
    }

    #[test]
    fn small_graphs_rejected() {
        assert!(idof(&complete(2), 3).is_err());
    }

    #[test]
    fn existing_edge_rejected() {
        assert!(edge_independent(&complete(4), Edge::new(0, 1), 3).is_err());
    }

    #[test]
    fn k5_has_one_redundant_edge() {
        let r = RigidityReport::analyze(&complete(5), 3, 7).unwrap();
        assert_eq!(r.rank, 9);
        assert_eq!(r.redundant_edges.len(), 1);
        assert!(!r.independent);
        assert_eq!(r.agreeing, 3);
    }

    #[test]
    fn coplanar_points_do_not_span() {
        let g = complete(4);
        let coords = (0..4).map(|v| (v, [v as i64, (v * v) as i64, 0])).collect();
        assert!(!Framework::with_integer_coords(&g, &coords).spans());
    }
}
