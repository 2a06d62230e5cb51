//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use blockhole::{Edge, Graph, Vertex};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let width = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            for j in col + 1..width {
                let v = (&m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j]) / &prev;
                m[i][j] = v;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Integer rigidity matrix, one row per edge, columns in vertex order.
pub fn rigidity_rows(g: &Graph, coords: &BTreeMap<Vertex, [i64; 3]>) -> Vec<Vec<i64>> {
    let col: BTreeMap<Vertex, usize> = g.vertices().enumerate().map(|(i, v)| (v, 3 * i)).collect();
    g.edges()
        .map(|e| {
            let mut r = vec![0; 3 * col.len()];
            for i in 0..3 {
                let d = coords[&e.0][i] - coords[&e.1][i];
                r[col[&e.0] + i] = d;
                r[col[&e.1] + i] = -d;
            }
            r
        })
        .collect()
}

pub fn integer_coords(g: &Graph, seed: u64) -> BTreeMap<Vertex, [i64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    g.vertices().map(|v| (v, [0; 3].map(|_| rng.gen_range(-1000..=1000)))).collect()
}

pub fn rational_rank(g: &Graph, seed: u64) -> usize {
    bareiss_rank(&rigidity_rows(g, &integer_coords(g, seed)))
}

/// `|E(S)| <= 3|S| - 6` for every vertex subset with at least three vertices.
pub fn brute_sparse(g: &Graph) -> bool {
    let vs: Vec<Vertex> = g.vertices().collect();
    let n = vs.len();
    assert!(n <= 16, "brute force is for small graphs");
    let edges: Vec<Edge> = g.edges().collect();
    (0u32..1 << n).all(|mask| {
        let size = mask.count_ones() as usize;
        if size < 3 {
            return true;
        }
        let inside = |v: Vertex| {
            let i = vs.iter().position(|&x| x == v).unwrap();
            mask >> i & 1 == 1
        };
        edges.iter().filter(|e| inside(e.0) && inside(e.1)).count() <= 3 * size - 6
    })
}

pub fn graph_of(edges: &[(Vertex, Vertex)]) -> Graph {
    Graph::from_edges(edges.iter().map(|&(a, b)| Edge::new(a, b)))
}

/// Seeded random simple graph on `0..n` with each pair present with
/// probability `p`.
pub fn random_graph(n: u32, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new();
    for v in 0..n {
        g.add_vertex(v);
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(a, b);
            }
        }
    }
    g
}

pub fn subsets<T: Clone + Ord>(items: &[T]) -> Vec<BTreeSet<T>> {
    (0u32..1 << items.len())
        .map(|m| items.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// Random vertex split with two shared neighbours; `None` when the chosen
/// vertex has fewer than two neighbours.
pub fn random_vertex_split(g: &Graph, rng: &mut ChaCha8Rng) -> Option<Graph> {
    let vs: Vec<Vertex> = g.vertices().collect();
    let v = vs[rng.gen_range(0..vs.len())];
    let mut nb: Vec<Vertex> = g.neighbors(v).collect();
    if nb.len() < 2 {
        return None;
    }
    let a = nb.swap_remove(rng.gen_range(0..nb.len()));
    let b = nb.swap_remove(rng.gen_range(0..nb.len()));
    let moved: Vec<Vertex> = nb.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    let w = g.max_vertex().unwrap() + 1;
    Some(g.vertex_split(v, w, [a, b], &moved).expect("valid split"))
}

/// A simple cycle with exactly `k` vertices, found by randomised search.
pub fn random_cycle(g: &Graph, k: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Vertex>> {
    fn grow(g: &Graph, k: usize, path: &mut Vec<Vertex>, rng: &mut ChaCha8Rng, budget: &mut usize) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let last = *path.last().unwrap();
        if path.len() == k {
            return g.has_edge(last, path[0]);
        }
        let mut nb: Vec<Vertex> = g.neighbors(last).filter(|w| !path.contains(w)).collect();
        for i in (1..nb.len()).rev() {
            nb.swap(i, rng.gen_range(0..=i));
        }
        for w in nb {
            path.push(w);
            if grow(g, k, path, rng, budget) {
                return true;
            }
            path.pop();
        }
        false
    }
    let vs: Vec<Vertex> = g.vertices().collect();
    for _ in 0..20 {
        let mut path = vec![vs[rng.gen_range(0..vs.len())]];
        let mut budget = 10_000;
        if grow(g, k, &mut path, rng, &mut budget) {
            return Some(path);
        }
    }
    None
}
