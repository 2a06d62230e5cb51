//! Text formats.
//!
//! A polyhedron (`bhp 1`) is written one record per line:
//!
//! ```text
//! bhp 1
//! next-id 9
//! vertices 0 1 2 3 ...
//! edges 0-1 0-2 ...
//! rotation 0 : 1 2 3
//! block 0 : 0 1 2 3 ; braces 0-2 1-3
//! hole 0 : 4 5 6 7
//! disc 3 : boundary 0 1 5 4 ; interior ; triangles 0 1 5 , 0 5 4
//! ```
//!
//! Rotations list neighbours counter-clockwise; boundaries and triangles are
//! oriented cycles consistent with the rotation (a reversed cycle is accepted
//! on input and normalised). The `boundary` and `interior` fields of a disc
//! are derived and are checked against its triangles. A plain graph
//! (`graph 1`) has only `vertices` and `edges`. Blank lines and text after
//! `#` are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{canonical_cycle, reversed_cycle, Block, Disc, DiscId, Hole, Polyhedron, TopologicalGraph};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};

/// Either kind of document the tools exchange.
#[derive(Clone, Debug)]
pub enum Document {
    Polyhedron(Polyhedron),
    Graph(Graph),
}

impl Document {
    /// The bar graph, including block braces.
    pub fn graph(&self) -> Graph {
        match self {
            Document::Polyhedron(p) => p.graph(),
            Document::Graph(g) => g.clone(),
        }
    }
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn write_bhp(p: &Polyhedron) -> String {
    let mut s = String::new();
    let topo = p.topology();
    writeln!(s, "bhp 1").unwrap();
    writeln!(s, "next-id {}", p.next_id()).unwrap();
    writeln!(s, "vertices {}", join(topo.vertices())).unwrap();
    writeln!(s, "edges {}", join(topo.edges())).unwrap();
    for (v, r) in topo.rotations() {
        writeln!(s, "rotation {v} : {}", join(r.iter())).unwrap();
    }
    for (i, b) in p.blocks.iter().enumerate() {
        writeln!(s, "block {i} : {} ; braces {}", join(&b.boundary), join(&b.braces)).unwrap();
    }
    for (i, h) in p.holes.iter().enumerate() {
        writeln!(s, "hole {i} : {}", join(&h.boundary)).unwrap();
    }
    for (id, d) in &p.discs {
        let boundary = d.boundary().unwrap_or_default();
        let tris: Vec<String> = d.triangles.iter().map(|t| join(t.iter())).collect();
        writeln!(
            s,
            "disc {id} : boundary {} ; interior {} ; triangles {}",
            join(boundary),
            join(d.interior_vertices()),
            tris.join(" , ")
        )
        .unwrap();
    }
    s
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = String::new();
    writeln!(s, "graph 1").unwrap();
    writeln!(s, "vertices {}", join(g.vertices())).unwrap();
    writeln!(s, "edges {}", join(g.edges())).unwrap();
    s
}

struct Line<'a> {
    no: usize,
    key: &'a str,
    rest: &'a str,
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            return None;
        }
        let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        Some(Line { no: i + 1, key, rest: rest.trim() })
    })
}

fn vertex(line: usize, tok: &str) -> Result<Vertex> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected a vertex id, found `{tok}`")))
}

fn vertex_list(line: usize, s: &str) -> Result<Vec<Vertex>> {
    s.split_whitespace().map(|t| vertex(line, t)).collect()
}

fn edge(line: usize, tok: &str) -> Result<Edge> {
    let (a, b) = tok
        .split_once('-')
        .ok_or_else(|| Error::parse(line, format!("expected an edge `u-v`, found `{tok}`")))?;
    let (a, b) = (vertex(line, a)?, vertex(line, b)?);
    if a == b {
        return Err(Error::parse(line, format!("self-loop `{tok}`")));
    }
    Ok(Edge::new(a, b))
}

fn edge_list(line: usize, s: &str) -> Result<Vec<Edge>> {
    s.split_whitespace().map(|t| edge(line, t)).collect()
}

/// Splits `id : body` and parses the id.
fn indexed<'a>(line: &Line<'a>) -> Result<(u32, &'a str)> {
    let (id, body) = line
        .rest
        .split_once(':')
        .ok_or_else(|| Error::parse(line.no, format!("`{}` record needs `id : ...`", line.key)))?;
    let id = id
        .trim()
        .parse()
        .map_err(|_| Error::parse(line.no, format!("bad {} id `{}`", line.key, id.trim())))?;
    Ok((id, body.trim()))
}

/// Splits `name values ; name values ; ...` into labelled fields.
fn fields<'a>(line: usize, body: &'a str, names: &[&str]) -> Result<Vec<&'a str>> {
    let parts: Vec<&str> = body.split(';').map(str::trim).collect();
    if parts.len() != names.len() {
        return Err(Error::parse(
            line,
            format!("expected {} `;`-separated fields", names.len()),
        ));
    }
    let mut out = Vec::new();
    for (part, name) in parts.iter().zip(names) {
        if name.is_empty() {
            out.push(*part);
            continue;
        }
        let (head, rest) = part.split_once(char::is_whitespace).unwrap_or((part, ""));
        if head != *name {
            return Err(Error::parse(line, format!("expected field `{name}`, found `{head}`")));
        }
        out.push(rest.trim());
    }
    Ok(out)
}

/// Orients a cycle to agree with one of the traced faces.
fn orient(line: usize, faces: &BTreeSet<Vec<Vertex>>, cycle: &[Vertex]) -> Result<Vec<Vertex>> {
    let c = canonical_cycle(cycle);
    if faces.contains(&c) {
        return Ok(c);
    }
    let r = reversed_cycle(cycle);
    if faces.contains(&r) {
        return Ok(r);
    }
    Err(Error::parse(line, format!("{cycle:?} is not a face of the embedding")))
}

pub fn parse_bhp(text: &str) -> Result<Polyhedron> {
    match parse_document(text)? {
        Document::Polyhedron(p) => Ok(p),
        Document::Graph(_) => Err(Error::parse(1, "expected a `bhp 1` document, found a graph")),
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    Ok(parse_document(text)?.graph())
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut it = lines(text).peekable();
    let header = it.next().ok_or_else(|| Error::parse(1, "empty document"))?;
    match (header.key, header.rest) {
        ("graph", "1") => parse_graph_body(it).map(Document::Graph),
        ("bhp", "1") => parse_bhp_body(it).map(Document::Polyhedron),
        _ => Err(Error::parse(
            header.no,
            format!("unknown header `{} {}`", header.key, header.rest),
        )),
    }
}

fn parse_graph_body<'a>(it: impl Iterator<Item = Line<'a>>) -> Result<Graph> {
    let mut g = Graph::new();
    for l in it {
        match l.key {
            "vertices" => {
                for v in vertex_list(l.no, l.rest)? {
                    g.add_vertex(v);
                }
            }
            "edges" => {
                for e in edge_list(l.no, l.rest)? {
                    if !g.add_edge(e.0, e.1) {
                        return Err(Error::parse(l.no, format!("duplicate edge {e}")));
                    }
                }
            }
            k => return Err(Error::parse(l.no, format!("unknown record `{k}` in graph"))),
        }
    }
    Ok(g)
}

fn parse_bhp_body<'a>(it: impl Iterator<Item = Line<'a>>) -> Result<Polyhedron> {
    let mut next_id = None;
    let mut vertices: Option<(usize, BTreeSet<Vertex>)> = None;
    let mut edges: Option<(usize, BTreeSet<Edge>)> = None;
    let mut rotation: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    let mut rot_line = 0;
    let mut blocks = Vec::new();
    let mut holes = Vec::new();
    let mut discs = Vec::new();
    for l in it {
        match l.key {
            "next-id" => {
                next_id = Some(vertex(l.no, l.rest)?);
            }
            "vertices" => vertices = Some((l.no, vertex_list(l.no, l.rest)?.into_iter().collect())),
            "edges" => edges = Some((l.no, edge_list(l.no, l.rest)?.into_iter().collect())),
            "rotation" => {
                let (v, body) = indexed(&l)?;
                if rotation.insert(v, vertex_list(l.no, body)?).is_some() {
                    return Err(Error::parse(l.no, format!("second rotation for vertex {v}")));
                }
                rot_line = l.no;
            }
            "block" => {
                let (i, body) = indexed(&l)?;
                if i as usize != blocks.len() {
                    return Err(Error::parse(l.no, format!("block {i} out of order")));
                }
                let f = fields(l.no, body, &["", "braces"])?;
                blocks.push((l.no, vertex_list(l.no, f[0])?, edge_list(l.no, f[1])?));
            }
            "hole" => {
                let (i, body) = indexed(&l)?;
                if i as usize != holes.len() {
                    return Err(Error::parse(l.no, format!("hole {i} out of order")));
                }
                holes.push((l.no, vertex_list(l.no, body)?));
            }
            "disc" => {
                let (id, body) = indexed(&l)?;
                let f = fields(l.no, body, &["boundary", "interior", "triangles"])?;
                let mut tris = Vec::new();
                for t in f[2].split(',') {
                    let vs = vertex_list(l.no, t)?;
                    if vs.len() != 3 {
                        return Err(Error::parse(l.no, format!("triangle `{}` needs 3 vertices", t.trim())));
                    }
                    tris.push(vs);
                }
                discs.push((l.no, id, vertex_list(l.no, f[0])?, vertex_list(l.no, f[1])?, tris));
            }
            k => return Err(Error::parse(l.no, format!("unknown record `{k}`"))),
        }
    }

    let topo = TopologicalGraph::from_rotation(rotation)
        .map_err(|e| Error::parse(rot_line, e.to_string()))?;
    if let Some((no, vs)) = vertices {
        if vs != topo.vertices().collect() {
            return Err(Error::parse(no, "vertex list disagrees with the rotation system"));
        }
    }
    if let Some((no, es)) = edges {
        if es != topo.edges() {
            return Err(Error::parse(no, "edge list disagrees with the rotation system"));
        }
    }
    let faces: BTreeSet<Vec<Vertex>> = topo.faces()?.into_iter().collect();

    let mut bs = Vec::new();
    for (no, cyc, braces) in blocks {
        bs.push(Block::new(orient(no, &faces, &cyc)?, braces.into_iter().collect()));
    }
    let mut hs = Vec::new();
    for (no, cyc) in holes {
        hs.push(Hole::new(orient(no, &faces, &cyc)?));
    }
    let mut ds: BTreeMap<DiscId, Disc> = BTreeMap::new();
    let mut disc_lines = BTreeMap::new();
    for (no, id, boundary, interior, tris) in discs {
        let mut d = Disc::default();
        for t in tris {
            let o = orient(no, &faces, &t)?;
            d.insert([o[0], o[1], o[2]]);
        }
        let derived = d.boundary().map_err(|e| Error::parse(no, e.to_string()))?;
        let given_ok = boundary.is_empty()
            || canonical_cycle(&boundary) == derived
            || reversed_cycle(&boundary) == derived;
        if !given_ok {
            return Err(Error::parse(no, format!("disc {id} boundary disagrees with its triangles")));
        }
        if !interior.is_empty() && interior.iter().copied().collect::<BTreeSet<_>>() != d.interior_vertices() {
            return Err(Error::parse(no, format!("disc {id} interior disagrees with its triangles")));
        }
        if ds.insert(id, d).is_some() {
            return Err(Error::parse(no, format!("duplicate disc id {id}")));
        }
        disc_lines.insert(id, no);
    }
    let p = Polyhedron::from_parts(bs, hs, ds, next_id)?;
    if let Some(n) = next_id {
        if p.next_id() != n {
            return Err(Error::parse(1, format!("next-id {n} is not above every vertex")));
        }
    }
    if p.topology() != &topo {
        return Err(Error::Partition("face partition disagrees with the rotation system".into()));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Polyhedron {
        // quad block 0..3 over quad hole 4..7 (a 4-tower)
        let mut discs = Vec::new();
        for i in 0..4u32 {
            let (b0, b1, h0, h1) = (i, (i + 1) % 4, 4 + i, 4 + (i + 1) % 4);
            discs.push((i, vec![[b0, b1, h1], [b0, h1, h0]]));
        }
        let braces = [Edge::new(0, 2), Edge::new(1, 3)].into_iter().collect();
        Polyhedron::from_unoriented(vec![(vec![0, 1, 2, 3], braces)], vec![vec![4, 5, 6, 7]], discs)
            .unwrap()
    }

    #[test]
    fn round_trip_is_identity() {
        let p = sample();
        let text = write_bhp(&p);
        let q = parse_bhp(&text).unwrap();
        assert_eq!(p, q);
        assert_eq!(write_bhp(&q), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = write_bhp(&sample()).replace("hole 0 : ", "hole 0 : x ");
        match parse_bhp(&text) {
            Err(Error::Parse { line, .. }) => {
                assert!(text.lines().nth(line - 1).unwrap().starts_with("hole"))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reversed_cycles_are_normalised() {
        let p = sample();
        let text = write_bhp(&p);
        let hole = &p.holes[0].boundary;
        let mut rev = hole.clone();
        rev.reverse();
        let text2 = text.replace(&format!("hole 0 : {}", join(hole)), &format!("hole 0 : {}", join(&rev)));
        assert_ne!(text, text2);
        assert_eq!(parse_bhp(&text2).unwrap(), p);
    }

    #[test]
    fn graph_round_trip() {
        let g = Graph::from_edges([(0, 1), (1, 2), (2, 0), (2, 3)].map(|(a, b)| Edge::new(a, b)));
        let back = parse_graph(&write_graph(&g)).unwrap();
        assert_eq!(back, g);
    }
}
