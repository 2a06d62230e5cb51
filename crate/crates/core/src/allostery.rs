//! Filling one hole edge by edge and watching the degrees of freedom at the
//! other hole.
//!
//! A step *transmits* when the other hole's idof drops.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::counting::{menger_paths, min_vertex_cut};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};
use crate::poly::{double_fan_order, FaceRef, Polyhedron};
use crate::rigidity::{generic_rank, hole_idof};

/// Double-fan diagonals of `boundary`, fan from the first vertex first.
pub fn block_fill_order(boundary: &[Vertex]) -> Vec<Edge> {
    double_fan_order(boundary)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    /// `None` for the starting state.
    pub edge: Option<Edge>,
    pub idof: usize,
    /// idof at the filled hole and at the other one.
    pub hole_idof: [usize; 2],
    pub independent: Option<bool>,
    pub transmitted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransmissionTrace {
    /// `(m, k, n)`: filled hole size, number of disjoint paths, other hole size.
    pub shape: (usize, usize, usize),
    pub order: Vec<Edge>,
    /// `steps[0]` is the starting state, `steps[t]` follows addition `t`.
    pub steps: Vec<TraceStep>,
}

/// 1-based `(first, last)` of a run of step numbers.
pub type Window = (usize, usize);

fn window(ts: impl Iterator<Item = usize>) -> Option<Window> {
    ts.fold(None, |w, t| match w {
        None => Some((t, t)),
        Some((a, _)) => Some((a, t)),
    })
}

impl TransmissionTrace {
    pub fn additions(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn initial(&self) -> &TraceStep {
        &self.steps[0]
    }

    pub fn last(&self) -> &TraceStep {
        self.steps.last().expect("starting state")
    }

    pub fn transmission_window(&self) -> Option<Window> {
        window((1..self.steps.len()).filter(|&t| self.steps[t].transmitted))
    }

    pub fn redundant_steps(&self) -> Vec<usize> {
        (1..self.steps.len()).filter(|&t| self.steps[t].independent == Some(false)).collect()
    }

    /// First step at which the whole structure is rigid.
    pub fn rigid_after(&self) -> Option<usize> {
        self.steps.iter().position(|s| s.idof == 0)
    }

    pub fn csv_header() -> &'static str {
        "step,edge,idof,hole_idof_h1,hole_idof_h2,independent,transmitted"
    }

    pub fn csv(&self) -> String {
        let mut s = format!("{}\n", Self::csv_header());
        for (t, st) in self.steps.iter().enumerate() {
            let edge = st.edge.map(|e| e.to_string()).unwrap_or_default();
            let ind = st.independent.map(|b| b.to_string()).unwrap_or_default();
            writeln!(
                s,
                "{t},{edge},{},{},{},{ind},{}",
                st.idof, st.hole_idof[0], st.hole_idof[1], st.transmitted
            )
            .unwrap();
        }
        s
    }

    pub fn summary(&self) -> String {
        let (m, k, n) = self.shape;
        let win = match self.transmission_window() {
            Some((a, b)) => format!("{a}-{b}"),
            None => "none".into(),
        };
        let red: Vec<String> = self.redundant_steps().iter().map(|t| t.to_string()).collect();
        let rigid = self.rigid_after().map(|t| t.to_string()).unwrap_or_else(|| "never".into());
        let mut s = String::new();
        writeln!(s, "shape = {m} {k} {n}").unwrap();
        writeln!(s, "additions = {}", self.additions()).unwrap();
        writeln!(s, "initial_idof = {}", self.initial().idof).unwrap();
        writeln!(s, "final_idof = {}", self.last().idof).unwrap();
        writeln!(s, "initial_hole_idof = {} {}", self.initial().hole_idof[0], self.initial().hole_idof[1]).unwrap();
        writeln!(s, "final_hole_idof = {} {}", self.last().hole_idof[0], self.last().hole_idof[1]).unwrap();
        writeln!(s, "transmission_window = {win}").unwrap();
        writeln!(s, "redundant_steps = {}", red.join(" ")).unwrap();
        writeln!(s, "rigid_after = {rigid}").unwrap();
        s
    }
}

fn state(g: &Graph, holes: [&[Vertex]; 2], trials: usize) -> (usize, usize, [usize; 2]) {
    let rank = generic_rank(g, trials);
    let idof = 3 * g.vertex_count() - 6 - rank;
    (rank, idof, [hole_idof(g, holes[0], trials), hole_idof(g, holes[1], trials)])
}

/// Adds `order` to `g` one edge at a time. Shared by whole polyhedra and the
/// waist components.
fn trace_graph(
    g: &Graph,
    holes: [&[Vertex]; 2],
    shape: (usize, usize, usize),
    order: Vec<Edge>,
    stop_at_redundant: bool,
    trials: usize,
) -> Result<TransmissionTrace> {
    if g.vertex_count() < 3 {
        return Err(Error::precondition("a trace needs at least 3 vertices"));
    }
    let on_hole: BTreeSet<Vertex> = holes[0].iter().copied().collect();
    let mut g = g.clone();
    for e in &order {
        if !on_hole.contains(&e.0) || !on_hole.contains(&e.1) {
            return Err(Error::precondition(format!("{e} does not join two vertices of the filled hole")));
        }
    }
    let (mut rank, idof, hi) = state(&g, holes, trials);
    let mut steps = vec![TraceStep { edge: None, idof, hole_idof: hi, independent: None, transmitted: false }];
    let mut used = Vec::new();
    for &e in &order {
        if !g.add_edge(e.0, e.1) {
            return Err(Error::precondition(format!("{e} is already present")));
        }
        used.push(e);
        let (r, idof, hi) = state(&g, holes, trials);
        let independent = r > rank;
        rank = r;
        let before = steps.last().unwrap().hole_idof[1];
        steps.push(TraceStep {
            edge: Some(e),
            idof,
            hole_idof: hi,
            independent: Some(independent),
            transmitted: hi[1] < before,
        });
        if stop_at_redundant && !independent {
            break;
        }
    }
    Ok(TransmissionTrace { shape, order: used, steps })
}

fn two_holes(p: &Polyhedron, target: usize) -> Result<(usize, usize)> {
    if p.holes.len() != 2 {
        return Err(Error::precondition(format!(
            "transmission needs exactly two holes, found {}",
            p.holes.len()
        )));
    }
    if target > 1 {
        return Err(Error::precondition(format!("hole {target} does not exist")));
    }
    Ok((target, 1 - target))
}

/// Fills hole `target` along `order` (the double-fan order by default),
/// stopping after the first redundant edge when asked.
pub fn run_transmission(
    p: &Polyhedron,
    target: usize,
    order: Option<Vec<Edge>>,
    stop_at_redundant: bool,
    trials: usize,
) -> Result<TransmissionTrace> {
    let (a, b) = two_holes(p, target)?;
    let h1 = &p.holes[a].boundary;
    let h2 = &p.holes[b].boundary;
    let k = menger_paths(p, FaceRef::Hole(a), FaceRef::Hole(b))?;
    let order = order.unwrap_or_else(|| block_fill_order(h1));
    trace_graph(&p.graph(), [h1, h2], (h1.len(), k, h2.len()), order, stop_at_redundant, trials)
}

/// The two sides of a minimum waist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaistComponents {
    pub waist: Vec<Vertex>,
    /// Filled-hole side, traced with the waist as its far hole.
    pub first: TransmissionTrace,
    /// idof left at the far hole once the waist is held rigid.
    pub second_remaining: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaistReport {
    pub shape: (usize, usize, usize),
    /// Set when no waist is strictly narrower than both holes.
    pub not_applicable: Option<String>,
    /// `m - k` silent additions followed by `2(k - 3)` transmitting ones.
    pub component_window: Option<Window>,
    /// The closing range `(m - k, m + k - 3)` read literally.
    pub stated_window: Window,
    pub measured_window: Option<Window>,
    pub predicted_remaining: usize,
    pub measured_remaining: usize,
    pub components: Option<WaistComponents>,
    pub trace: TransmissionTrace,
}

impl WaistReport {
    pub fn component_window_agrees(&self) -> bool {
        self.component_window == self.measured_window
    }

    pub fn stated_window_agrees(&self) -> bool {
        self.measured_window == Some(self.stated_window)
    }

    pub fn summary(&self) -> String {
        let w = |w: Option<Window>| w.map(|(a, b)| format!("{a}-{b}")).unwrap_or_else(|| "none".into());
        let (m, k, n) = self.shape;
        let mut s = String::new();
        writeln!(s, "shape = {m} {k} {n}").unwrap();
        match &self.not_applicable {
            Some(r) => writeln!(s, "decomposition = not-applicable ({r})").unwrap(),
            None => writeln!(s, "decomposition = applicable").unwrap(),
        }
        writeln!(s, "component_window = {}", w(self.component_window)).unwrap();
        writeln!(s, "stated_window = {}", w(Some(self.stated_window))).unwrap();
        writeln!(s, "measured_window = {}", w(self.measured_window)).unwrap();
        writeln!(s, "component_window_agrees = {}", self.component_window_agrees()).unwrap();
        writeln!(s, "stated_window_agrees = {}", self.stated_window_agrees()).unwrap();
        writeln!(s, "predicted_remaining = {}", self.predicted_remaining).unwrap();
        writeln!(s, "measured_remaining = {}", self.measured_remaining).unwrap();
        if let Some(c) = &self.components {
            let ws: Vec<String> = c.waist.iter().map(|v| v.to_string()).collect();
            let rigid = c.first.rigid_after().map(|t| t.to_string()).unwrap_or_else(|| "never".into());
            writeln!(s, "waist = {}", ws.join(" ")).unwrap();
            writeln!(s, "first_component_window = {}", w(c.first.transmission_window())).unwrap();
            writeln!(s, "first_component_rigid_after = {rigid}").unwrap();
            writeln!(s, "second_component_remaining = {}", c.second_remaining).unwrap();
        }
        s
    }
}

/// Compares the transmission profile of a two-holed polyhedron against the
/// split-at-the-waist prediction. Both windows are reported; neither is
/// forced to match.
pub fn waist_decomposition_check(p: &Polyhedron, target: usize, trials: usize) -> Result<WaistReport> {
    let (a, b) = two_holes(p, target)?;
    let trace = run_transmission(p, target, None, false, trials)?;
    let (m, k, n) = trace.shape;
    let component_window = (k > 3).then(|| (m - k + 1, m + k - 6));
    let stated_window = (m - k, m + k - 3);
    let measured_remaining = trace.last().hole_idof[1];
    let mut report = WaistReport {
        shape: (m, k, n),
        not_applicable: None,
        component_window,
        stated_window,
        measured_window: trace.transmission_window(),
        predicted_remaining: n.saturating_sub(k),
        measured_remaining,
        components: None,
        trace,
    };
    if k >= m.min(n) {
        report.not_applicable = Some(format!("narrowest waist {k} is not below min({m}, {n})"));
        return Ok(report);
    }
    let h1 = &p.holes[a].boundary;
    let h2 = &p.holes[b].boundary;
    let waist = min_vertex_cut(p, FaceRef::Hole(a), FaceRef::Hole(b));
    let cut: BTreeSet<Vertex> = waist.iter().copied().collect();
    let g = p.graph();
    let mut side = [BTreeSet::new(), BTreeSet::new()];
    for comp in g.components_without(&cut) {
        let i = if h1.iter().any(|v| comp.contains(v)) {
            0
        } else if h2.iter().any(|v| comp.contains(v)) {
            1
        } else {
            continue;
        };
        side[i].extend(comp);
    }
    for s in &mut side {
        s.extend(cut.iter().copied());
    }
    let g1 = g.induced(&side[0]);
    let first = trace_graph(&g1, [h1, &waist], (m, k, k), block_fill_order(h1), false, trials)?;
    let mut g2 = g.induced(&side[1]);
    for (i, &x) in waist.iter().enumerate() {
        for &y in &waist[i + 1..] {
            g2.add_edge(x, y);
        }
    }
    let second_remaining = 3 * g2.vertex_count() - 6 - generic_rank(&g2, trials);
    report.components = Some(WaistComponents { waist, first, second_remaining });
    Ok(report)
}
