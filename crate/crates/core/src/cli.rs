//! Command-line front end. Exit codes: 0 success, 1 precondition or
//! validation failure, 2 parse error.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Read as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::allostery::{run_transmission, waist_decomposition_check, Window};
use crate::contraction::{contract_to_base, parse_certificate, run_contraction_sequence, verify, write_certificate};
use crate::counting::{balance_check, enumerate_cut_cycles, separation_check, sparsity_check};
use crate::error::{Error, Result};
use crate::generators::{block_graph, double_fan_block, expand, make_cylinder, make_tower, random_sphere_polyhedron, ExpandOps};
use crate::graph::{Edge, Vertex};
use crate::poly::{check_well_designed, parse_bhp, parse_document, parse_graph, write_bhp, write_graph, Document};
use crate::rigidity::{RigidityReport, DEFAULT_SEED, DEFAULT_TRIALS};
use crate::transform::{contract_edge, cycle_split, path_split, swap_blocks_holes, vertex_split, CycleSplitSpec, PathSplitSpec, SplitSpec};

#[derive(Parser, Debug)]
#[command(name = "blockhole", version, about = "Block-and-hole polyhedra and their generic rigidity")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads for rank trials and sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Output file for the main result (stdout when absent).
    #[arg(short, long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a generated instance.
    Generate {
        #[command(subcommand)]
        what: Generate,
    },
    /// Rigidity and counting report for a BHP or graph document.
    Analyze {
        /// Input file, `-` for stdin.
        file: String,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        /// Also enumerate cut cycles up to this size.
        #[arg(long)]
        cut_max: Option<usize>,
    },
    /// Contract to a base polyhedron and write the certificate.
    Contract {
        file: String,
        /// Where to write the base polyhedron.
        #[arg(long)]
        to_base: Option<PathBuf>,
        /// Length-1 boundary paths to collapse after the sequence, as `a-b`.
        #[arg(long, value_delimiter = ',', value_parser = parse_edge)]
        collapse: Vec<Edge>,
    },
    /// Replay a certificate from `base` and compare with `original`.
    Verify { base: String, certificate: String, original: String },
    /// Random subdivisions, interior insertions and flips.
    Expand {
        file: String,
        #[arg(long, default_value_t = 0)]
        subdiv: usize,
        #[arg(long, default_value_t = 0)]
        insert: usize,
        #[arg(long, default_value_t = 0)]
        flip: usize,
    },
    /// Fill one hole edge by edge and print the trace as CSV.
    Transmit {
        file: String,
        #[arg(long, default_value_t = 0)]
        hole: usize,
        /// Explicit fill order, `a-b,c-d,...`.
        #[arg(long, value_delimiter = ',', value_parser = parse_edge)]
        order: Option<Vec<Edge>>,
        #[arg(long)]
        stop_at_redundant: bool,
        /// Append the waist decomposition report.
        #[arg(long)]
        waist: bool,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
    },
    /// Waist reports for every cylinder with sizes in `min..=max`.
    Sweep {
        min: usize,
        max: usize,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
    },
    /// Apply one transformation.
    Transform {
        #[command(subcommand)]
        op: Transform,
    },
}

#[derive(Subcommand, Debug)]
pub enum Generate {
    /// Random triangulated sphere as one big disc plus one triangle.
    Sphere { n: usize },
    /// Proper tower: an n-block and an n-hole.
    Tower { n: usize },
    /// Cylinder with hole sizes m and n and waist k.
    Cylinder { m: usize, k: usize, n: usize },
    /// Double-fan block graph on n boundary vertices.
    Block { n: usize },
}

#[derive(Args, Debug)]
pub struct SplitArgs {
    file: String,
    #[arg(long)]
    vertex: Vertex,
    /// Label for the new vertex (next free label when absent).
    #[arg(long)]
    new_vertex: Option<Vertex>,
    #[arg(long, value_delimiter = ',', num_args = 2)]
    shared: Vec<Vertex>,
    #[arg(long, value_delimiter = ',')]
    moved: Vec<Vertex>,
}

#[derive(Subcommand, Debug)]
pub enum Transform {
    /// Vertex split on a polyhedron.
    Split(SplitArgs),
    /// Contract `drop` into `keep`.
    ContractEdge {
        file: String,
        #[arg(long)]
        keep: Vertex,
        #[arg(long)]
        drop: Vertex,
    },
    /// Cycle split on a graph.
    CycleSplit {
        file: String,
        #[arg(long, value_delimiter = ',')]
        cycle: Vec<Vertex>,
        /// `v=a,b`: neighbours of `v` whose edges move to its copy.
        #[arg(long = "select", value_parser = parse_selection)]
        selections: Vec<(Vertex, Vec<Vertex>)>,
        /// Cycle vertices left undivided.
        #[arg(long, value_delimiter = ',')]
        unsplit: Vec<Vertex>,
    },
    /// Path split on a graph.
    PathSplit {
        file: String,
        #[arg(long, value_delimiter = ',')]
        path: Vec<Vertex>,
        #[arg(long = "select", value_parser = parse_selection)]
        selections: Vec<(Vertex, Vec<Vertex>)>,
    },
    /// Exchange blocks and holes.
    Swap { file: String },
}

fn parse_edge(s: &str) -> std::result::Result<Edge, String> {
    let (a, b) = s.trim().split_once('-').ok_or_else(|| format!("expected a-b, found {s:?}"))?;
    let a: Vertex = a.trim().parse().map_err(|_| format!("bad vertex {a:?}"))?;
    let b: Vertex = b.trim().parse().map_err(|_| format!("bad vertex {b:?}"))?;
    if a == b {
        return Err(format!("loop {s:?}"));
    }
    Ok(Edge::new(a, b))
}

fn parse_selection(s: &str) -> std::result::Result<(Vertex, Vec<Vertex>), String> {
    let (v, rest) = s.split_once('=').ok_or_else(|| format!("expected v=a,b, found {s:?}"))?;
    let v = v.trim().parse().map_err(|_| format!("bad vertex {v:?}"))?;
    let list = rest
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| format!("bad vertex {t:?}")))
        .collect::<std::result::Result<_, _>>()?;
    Ok((v, list))
}

fn read_input(name: &str) -> Result<String> {
    if name == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(name)?)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn selections_for(seq: &[Vertex], given: &[(Vertex, Vec<Vertex>)]) -> Result<Vec<BTreeSet<Vertex>>> {
    for (v, _) in given {
        if !seq.contains(v) {
            return Err(Error::precondition(format!("selection for {v}, which is not on the sequence")));
        }
    }
    Ok(seq
        .iter()
        .map(|v| given.iter().filter(|(w, _)| w == v).flat_map(|(_, s)| s.iter().copied()).collect())
        .collect())
}

fn show_window(w: Option<Window>) -> String {
    w.map(|(a, b)| format!("{a}-{b}")).unwrap_or_else(|| "none".into())
}

fn analyze(doc: &Document, trials: usize, seed: u64, cut_max: Option<usize>) -> Result<String> {
    let g = doc.graph();
    let mut s = RigidityReport::analyze(&g, trials, seed)?.to_string();
    let sp = sparsity_check(&g);
    writeln!(s, "sparse = {}", sp.sparse).unwrap();
    if let Document::Polyhedron(p) = doc {
        let b = balance_check(p);
        writeln!(s, "balance = {} {}", b.blocks, b.holes).unwrap();
        writeln!(s, "balanced = {}", b.balanced()).unwrap();
        let sep = separation_check(p);
        writeln!(s, "separated = {}", sep.is_empty()).unwrap();
        for v in &sep {
            writeln!(s, "separation-violation = {v}").unwrap();
        }
        let wd = check_well_designed(p);
        writeln!(s, "well_designed = {}", wd.passed()).unwrap();
        if let Some(c) = cut_max {
            let r = enumerate_cut_cycles(p, c)?;
            let bad: Vec<_> = r.violations().collect();
            writeln!(s, "cut_cycles = {}", r.cycles.len()).unwrap();
            writeln!(s, "cut_violations = {}", bad.len()).unwrap();
            for cyc in bad {
                writeln!(s, "{}", cyc.csv_row()).unwrap();
            }
        }
    }
    Ok(s)
}

fn sweep(min: usize, max: usize, trials: usize) -> Result<String> {
    let mut shapes = Vec::new();
    for m in min.max(3)..=max {
        for n in min.max(3)..=max {
            for k in 3..=m.min(n) {
                shapes.push((m, k, n));
            }
        }
    }
    let rows: Vec<Result<String>> = shapes
        .par_iter()
        .map(|&(m, k, n)| {
            let r = waist_decomposition_check(&make_cylinder(m, k, n)?, 0, trials)?;
            Ok(format!(
                "{m},{k},{n},{},{},{},{},{},{}",
                r.trace.initial().idof,
                r.measured_remaining,
                show_window(r.measured_window),
                show_window(r.component_window),
                show_window(Some(r.stated_window)),
                r.not_applicable.is_none()
            ))
        })
        .collect();
    let mut s = String::from("m,k,n,initial_idof,final_hole_idof_h2,measured_window,component_window,stated_window,narrow_waist\n");
    for r in rows {
        s.push_str(&r?);
        s.push('\n');
    }
    Ok(s)
}

fn transform(op: &Transform) -> Result<String> {
    match op {
        Transform::Split(a) => {
            let p = parse_bhp(&read_input(&a.file)?)?;
            let shared: [Vertex; 2] = a
                .shared
                .clone()
                .try_into()
                .map_err(|_| Error::precondition("--shared needs two vertices"))?;
            let spec = SplitSpec {
                vertex: a.vertex,
                new_vertex: a.new_vertex.unwrap_or_else(|| p.next_id()),
                shared,
                moved: a.moved.clone(),
                discs: [None, None],
            };
            Ok(write_bhp(&vertex_split(&p, &spec)?))
        }
        Transform::ContractEdge { file, keep, drop } => {
            let p = parse_bhp(&read_input(file)?)?;
            Ok(write_bhp(&contract_edge(&p, *keep, *drop)?.0))
        }
        Transform::CycleSplit { file, cycle, selections, unsplit } => {
            let g = parse_graph(&read_input(file)?)?;
            let spec = CycleSplitSpec {
                cycle: cycle.clone(),
                selections: selections_for(cycle, selections)?,
                split: cycle.iter().map(|v| !unsplit.contains(v)).collect(),
            };
            Ok(write_graph(&cycle_split(&g, &spec)?.0))
        }
        Transform::PathSplit { file, path, selections } => {
            let g = parse_graph(&read_input(file)?)?;
            let spec = PathSplitSpec { path: path.clone(), selections: selections_for(path, selections)? };
            Ok(write_graph(&path_split(&g, &spec)?.0))
        }
        Transform::Swap { file } => Ok(write_bhp(&swap_blocks_holes(&parse_bhp(&read_input(file)?)?)?)),
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let seed = cli.seed;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Generate { what } => {
            let text = match *what {
                Generate::Sphere { n } => write_bhp(&random_sphere_polyhedron(n, seed)?),
                Generate::Tower { n } => write_bhp(&make_tower(n)?),
                Generate::Cylinder { m, k, n } => write_bhp(&make_cylinder(m, k, n)?),
                Generate::Block { n } => write_graph(&block_graph(&double_fan_block(n)?)),
            };
            emit(out, &text)
        }
        Command::Analyze { file, trials, cut_max } => {
            let doc = parse_document(&read_input(file)?)?;
            emit(out, &analyze(&doc, *trials, seed, *cut_max)?)
        }
        Command::Contract { file, to_base, collapse } => {
            let p = parse_bhp(&read_input(file)?)?;
            let mut cert = run_contraction_sequence(&p)?;
            if !collapse.is_empty() {
                cert = contract_to_base(&cert, collapse)?;
            }
            if let Some(b) = to_base {
                std::fs::write(b, write_bhp(&cert.base))?;
            }
            log::info!("{} moves, base has {} vertices", cert.moves.len(), cert.base.vertex_count());
            emit(out, &write_certificate(&cert))
        }
        Command::Verify { base, certificate, original } => {
            let base = parse_bhp(&read_input(base)?)?;
            let cert = parse_certificate(&read_input(certificate)?)?;
            let original = parse_bhp(&read_input(original)?)?;
            if write_bhp(&base) != write_bhp(&cert.base) {
                return Err(Error::Verification("base file differs from the certificate's base".into()));
            }
            let n = verify(&cert, Some(&original))?;
            emit(out, &format!("verified = {n} moves\n"))
        }
        Command::Expand { file, subdiv, insert, flip } => {
            let p = parse_bhp(&read_input(file)?)?;
            let ops = ExpandOps { subdivisions: *subdiv, insertions: *insert, flips: *flip };
            emit(out, &write_bhp(&expand(&p, seed, ops)?))
        }
        Command::Transmit { file, hole, order, stop_at_redundant, waist, trials } => {
            let p = parse_bhp(&read_input(file)?)?;
            let t = run_transmission(&p, *hole, order.clone(), *stop_at_redundant, *trials)?;
            let mut s = t.csv();
            for l in t.summary().lines() {
                writeln!(s, "# {l}").unwrap();
            }
            if *waist {
                let r = waist_decomposition_check(&p, *hole, *trials)?;
                for l in r.summary().lines() {
                    writeln!(s, "# waist {l}").unwrap();
                }
            }
            emit(out, &s)
        }
        Command::Sweep { min, max, trials } => emit(out, &sweep(*min, *max, *trials)?),
        Command::Transform { op } => emit(out, &transform(op)?),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 2,
        _ => 1,
    }
}

/// Parses the process arguments, runs, and returns the exit code.
pub fn main() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_arguments() {
        assert_eq!(parse_edge("3-1"), Ok(Edge::new(1, 3)));
        assert!(parse_edge("3").is_err());
        assert!(parse_edge("2-2").is_err());
        assert_eq!(parse_selection("4=1,2"), Ok((4, vec![1, 2])));
        assert_eq!(parse_selection("4="), Ok((4, vec![])));
    }

    #[test]
    fn command_line_shapes() {
        let cli = Cli::try_parse_from(["blockhole", "--seed", "7", "transmit", "x", "--order", "0-2,1-3"]).unwrap();
        assert_eq!(cli.seed, 7);
        let Command::Transmit { order: Some(o), .. } = cli.command else { panic!("transmit") };
        assert_eq!(o, [Edge::new(0, 2), Edge::new(1, 3)]);
    }

    #[test]
    fn cylinder_analysis_reports_two_dof() {
        let doc = Document::Polyhedron(make_cylinder(4, 4, 4).unwrap());
        let s = analyze(&doc, 2, 1, Some(4)).unwrap();
        assert!(s.contains("idof = 2\n"));
        assert!(s.contains("balanced = false\n"));
    }
}
