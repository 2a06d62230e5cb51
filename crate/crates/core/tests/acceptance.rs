//! The eleven acceptance criteria. Each prints one PASS/FAIL line with its
//! running time; all checks are exact.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use blockhole::allostery::{run_transmission, waist_decomposition_check};
use blockhole::contraction::{is_simplified, run_contraction_sequence, structure, verify, replay};
use blockhole::counting::{balance_check, cut_cycle_check, sparsity_check};
use blockhole::generators::{
    double_banana, expand, implicit_banana, make_cylinder, make_tower, make_tube, random_triangulated_sphere, ExpandOps,
};
use blockhole::poly::write_bhp;
use blockhole::rigidity::{generic_rank, Framework, RigidityReport};
use blockhole::transform::{cycle_split, cycle_split_sequence, CycleSplitSpec};
use blockhole::{Graph, Vertex};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn criterion(id: u32, name: &str, budget: Duration, f: impl FnOnce() -> Check) {
    let start = Instant::now();
    let res = f();
    let took = start.elapsed();
    let res = res.and_then(|()| {
        if took <= budget {
            Ok(())
        } else {
            Err(format!("took {took:?}, budget {budget:?}"))
        }
    });
    match &res {
        Ok(()) => println!("[PASS] {id:>2} {name} ({} ms)", took.as_millis()),
        Err(e) => println!("[FAIL] {id:>2} {name} ({} ms): {e}", took.as_millis()),
    }
    if let Err(e) = res {
        panic!("criterion {id} failed: {e}");
    }
}

fn isostatic(g: &Graph) -> bool {
    let n = g.vertex_count();
    g.edge_count() == 3 * n - 6 && generic_rank(g, 2) == g.edge_count()
}

#[test]
fn c01_square_cylinder() {
    criterion(1, "C(4,4,4) loses one idof per fill edge", Duration::from_secs(1), || {
        let p = make_cylinder(4, 4, 4).map_err(|e| e.to_string())?;
        let t = run_transmission(&p, 0, None, false, 2).map_err(|e| e.to_string())?;
        let idof: Vec<usize> = t.steps.iter().map(|s| s.idof).collect();
        ensure!(idof == [2, 1, 0], "idof trace {idof:?}");
        ensure!(t.initial().hole_idof == [2, 2], "initial hole idof {:?}", t.initial().hole_idof);
        let mut g = p.graph();
        for e in &t.order {
            g.add_edge(e.0, e.1);
        }
        ensure!(isostatic(&g), "filled cylinder is not isostatic");
        Ok(())
    });
}

#[test]
fn c02_narrow_first_hole() {
    criterion(2, "C(4,4,8) with a full block keeps 4 idof, independent", Duration::from_secs(1), || {
        let t = run_transmission(&make_cylinder(4, 4, 8).unwrap(), 0, None, false, 2).map_err(|e| e.to_string())?;
        ensure!(t.last().idof == 4, "final idof {}", t.last().idof);
        ensure!(t.redundant_steps().is_empty(), "redundant steps {:?}", t.redundant_steps());
        let blocked = make_tube(4, 4, 8, [true, false]).unwrap();
        let r = RigidityReport::analyze(&blocked.graph(), 2, 1).map_err(|e| e.to_string())?;
        ensure!(r.idof == 4 && r.independent, "blocked tube: idof {} independent {}", r.idof, r.independent);
        Ok(())
    });
}

#[test]
fn c03_wide_first_hole() {
    criterion(3, "C(8,4,4) holds H2 for 4 additions, rigid after 6", Duration::from_secs(2), || {
        let t = run_transmission(&make_cylinder(8, 4, 4).unwrap(), 0, None, false, 2).map_err(|e| e.to_string())?;
        ensure!(t.initial().idof == 6, "initial idof {}", t.initial().idof);
        let h2: Vec<usize> = t.steps.iter().map(|s| s.hole_idof[1]).collect();
        ensure!(h2[..5].iter().all(|&x| x == 2), "H2 over the first 4 additions {:?}", &h2[..5]);
        ensure!(h2[6] == 0, "H2 after 6 additions {}", h2[6]);
        ensure!(t.redundant_steps() == [7, 8, 9, 10], "redundant {:?}", t.redundant_steps());
        Ok(())
    });
}

#[test]
fn c04_narrow_waist() {
    criterion(4, "C(8,4,8) splits at its waist", Duration::from_secs(2), || {
        let r = waist_decomposition_check(&make_cylinder(8, 4, 8).unwrap(), 0, 2).map_err(|e| e.to_string())?;
        println!("{}", r.summary().trim_end());
        ensure!(r.trace.initial().idof == 10, "initial idof {}", r.trace.initial().idof);
        ensure!(r.measured_remaining == 4, "final H2 idof {}", r.measured_remaining);
        let c = r.components.as_ref().ok_or("no waist components")?;
        ensure!(c.first.rigid_after() == Some(6), "first component rigid after {:?}", c.first.rigid_after());
        Ok(())
    });
}

#[test]
fn c05_spheres() {
    criterion(5, "50 random triangulated spheres are isostatic", Duration::from_secs(60), || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..50 {
            let n = rng.gen_range(4..=200);
            let g = random_triangulated_sphere(n, i).map_err(|e| e.to_string())?.graph();
            ensure!(g.vertex_count() == n, "sphere {i}: {} vertices", g.vertex_count());
            ensure!(isostatic(&g), "sphere {i} with {n} vertices is not isostatic");
        }
        Ok(())
    });
}

#[test]
fn c06_towers() {
    criterion(6, "proper towers isostatic, 3-waist tower violates a cut", Duration::from_secs(10), || {
        for n in 3..=8 {
            ensure!(isostatic(&make_tower(n).unwrap().graph()), "tower {n} is not isostatic");
        }
        let bad = make_tube(5, 3, 5, [true, false]).unwrap();
        ensure!(!isostatic(&bad.graph()), "defective tower is isostatic");
        let cuts = cut_cycle_check(&bad, 3).map_err(|e| e.to_string())?;
        ensure!(cuts.iter().any(|c| c.size() == 3), "no violated 3-cycle");
        Ok(())
    });
}

#[test]
fn c07_contraction_round_trip() {
    criterion(7, "25 expansions contract and replay exactly", Duration::from_secs(60), || {
        let bases = [
            make_tower(4).unwrap(),
            make_tower(5).unwrap(),
            make_tower(6).unwrap(),
            make_cylinder(6, 4, 5).unwrap(),
            make_cylinder(8, 3, 4).unwrap(),
        ];
        for seed in 0..25u64 {
            let base = &bases[seed as usize % bases.len()];
            let ops = ExpandOps { subdivisions: 8, insertions: 8, flips: 30 };
            let p = expand(base, seed, ops).map_err(|e| e.to_string())?;
            let cert = run_contraction_sequence(&p).map_err(|e| format!("seed {seed}: {e}"))?;
            ensure!(is_simplified(&cert.base), "seed {seed}: base not simplified");
            ensure!(structure(&cert.base) == structure(base), "seed {seed}: structure changed");
            ensure!(cert.base.vertex_count() == base.vertex_count(), "seed {seed}: base size");
            let back = replay(&cert).map_err(|e| e.to_string())?;
            ensure!(write_bhp(&back) == write_bhp(&p), "seed {seed}: replay differs");
            verify(&cert, Some(&p)).map_err(|e| format!("seed {seed}: {e}"))?;
        }
        Ok(())
    });
}

#[test]
fn c08_vertex_splits() {
    criterion(8, "200 vertex splits add exactly 3 to the rank", Duration::from_secs(30), || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut done = 0;
        while done < 200 {
            let g = match done % 3 {
                0 => random_triangulated_sphere(rng.gen_range(4..40), done as u64).unwrap().graph(),
                1 => make_tower(rng.gen_range(3..9)).unwrap().graph(),
                _ => double_fan_graph(rng.gen_range(4..12)),
            };
            let Some(h) = random_vertex_split(&g, &mut rng) else { continue };
            let (r0, r1) = (generic_rank(&g, 2), generic_rank(&h, 2));
            ensure!(r1 == r0 + 3, "split {done}: rank {r0} -> {r1}");
            done += 1;
        }
        Ok(())
    });
}

fn double_fan_graph(n: usize) -> Graph {
    blockhole::generators::block_graph(&blockhole::generators::double_fan_block(n).unwrap())
}

#[test]
fn c09_counting_insufficient() {
    criterion(9, "double banana passes the counts yet is flexible", Duration::from_secs(2), || {
        let g = double_banana();
        ensure!(sparsity_check(&g).sparse, "not sparse");
        ensure!(g.edge_count() == 3 * g.vertex_count() - 6, "edge count {}", g.edge_count());
        let rank = generic_rank(&g, 3);
        ensure!(rank == 17, "rank {rank}");
        let p = implicit_banana().map_err(|e| e.to_string())?;
        ensure!(balance_check(&p).balanced(), "implicit banana unbalanced");
        let r = RigidityReport::analyze(&p.graph(), 3, 9).map_err(|e| e.to_string())?;
        ensure!(!r.redundant_edges.is_empty() && !r.independent, "no redundant edges reported");
        Ok(())
    });
}

#[test]
fn c10_oracles() {
    criterion(10, "modular rank and pebble game agree with brute force", Duration::from_secs(120), || {
        let mut corpus: Vec<Graph> = Vec::new();
        for n in 4..=7 {
            corpus.push(double_fan_graph(n));
            for seed in 0..5 {
                corpus.push(random_triangulated_sphere(n, seed).unwrap().graph());
            }
        }
        corpus.push(make_tower(3).unwrap().graph());
        corpus.push(make_cylinder(3, 3, 3).unwrap().graph());
        for seed in 0..400u64 {
            corpus.push(random_graph(3 + (seed % 5) as u32, 0.3 + (seed % 7) as f64 / 10.0, seed));
        }
        let mut disagreements = 0;
        for (i, g) in corpus.iter().enumerate() {
            let coords = integer_coords(g, i as u64);
            let modular = Framework::with_integer_coords(g, &coords).rank();
            let rational = bareiss_rank(&rigidity_rows(g, &coords));
            if modular != rational || generic_rank(g, 2) != rational {
                disagreements += 1;
            }
        }
        let mut pebble_graphs = vec![double_banana()];
        for seed in 0..300u64 {
            pebble_graphs.push(random_graph(4 + (seed % 6) as u32, 0.4 + (seed % 6) as f64 / 10.0, 1000 + seed));
        }
        for g in &pebble_graphs {
            let rep = sparsity_check(g);
            if rep.sparse != brute_sparse(g) {
                disagreements += 1;
                continue;
            }
            let acc = Graph::from_edges(rep.accepted.iter().copied());
            let mut acc_full = acc.clone();
            for v in g.vertices() {
                acc_full.add_vertex(v);
            }
            if !brute_sparse(&acc_full) {
                disagreements += 1;
            }
            for e in &rep.rejected {
                let mut h = acc_full.clone();
                h.add_edge(e.0, e.1);
                if brute_sparse(&h) {
                    disagreements += 1;
                }
            }
        }
        println!("   {} rank graphs, {} sparsity graphs", corpus.len(), pebble_graphs.len());
        ensure!(disagreements == 0, "{disagreements} disagreements");
        Ok(())
    });
}

#[test]
fn c11_cycle_splits() {
    criterion(11, "100 cycle splits preserve isostaticity and replay", Duration::from_secs(60), || {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut done = 0;
        let mut seed = 0;
        while done < 100 {
            seed += 1;
            let g = random_triangulated_sphere(rng.gen_range(8..30), seed).unwrap().graph();
            let k = 3 + done % 4;
            let Some(cycle) = random_cycle(&g, k, &mut rng) else { continue };
            let mut split: Vec<bool> = (0..k).map(|_| rng.gen_bool(0.7)).collect();
            split[rng.gen_range(0..k)] = true;
            let selections: Vec<BTreeSet<Vertex>> = (0..k)
                .map(|i| {
                    if !split[i] {
                        return BTreeSet::new();
                    }
                    let (prev, next) = (cycle[(i + k - 1) % k], cycle[(i + 1) % k]);
                    g.neighbors(cycle[i]).filter(|&w| w != prev && w != next && rng.gen_bool(0.5)).collect()
                })
                .collect();
            let spec = CycleSplitSpec { cycle, selections, split };
            let (h, _) = cycle_split(&g, &spec).map_err(|e| e.to_string())?;
            ensure!(isostatic(&h), "split {done} ({spec:?}) is not isostatic");
            let seq = cycle_split_sequence(&g, &spec).map_err(|e| format!("split {done}: {e}"))?;
            let mut r = g.clone();
            for s in &seq {
                r = s.apply(&r).map_err(|e| e.to_string())?;
            }
            ensure!(r == h, "split {done}: sequence replays to a different graph");
            done += 1;
        }
        Ok(())
    });
}
