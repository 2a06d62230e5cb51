//! Certificate text format and replay.
//!
//! ```text
//! certificate 1
//! initial-hash <sha256 of the initial polyhedron's BHP text>
//! move reroute <from> <to> ; old <path> ; new <path> ; triangles a b c , d e f
//! move <interior|spoke|path|length1> <keep> <drop> ; apex a b ; discs d e ; moved v .. ; witness a b
//! base
//! <BHP text of the base polyhedron>
//! ```

use std::fmt::Write as _;

use super::{apply_reroute, polyhedron_hash, undo_reroute, Move, MoveKind, Reroute};
use crate::error::{Error, Result};
use crate::graph::{Edge, Vertex};
use crate::poly::{nonfacial_triangles_through, parse_bhp, write_bhp, Polyhedron};
use crate::transform::{contract_edge, invert, vertex_split, ContractionMove};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub initial_hash: String,
    pub moves: Vec<Move>,
    pub base: Polyhedron,
}

fn join(vs: &[Vertex]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn write_certificate(c: &Certificate) -> String {
    let mut s = String::from("certificate 1\n");
    writeln!(s, "initial-hash {}", c.initial_hash).unwrap();
    for m in &c.moves {
        match m {
            Move::Reroute(r) => {
                let tris: Vec<String> = r.triangles.iter().map(|t| join(t)).collect();
                writeln!(
                    s,
                    "move reroute {} {} ; old {} ; new {} ; triangles {}",
                    r.from,
                    r.to,
                    join(&r.old_path),
                    join(&r.new_path),
                    tris.join(" , ")
                )
                .unwrap();
            }
            Move::Contract(k, m) => {
                writeln!(
                    s,
                    "move {} {} {} ; apex {} ; discs {} {} ; moved {} ; witness {}",
                    k.name(),
                    m.survivor,
                    m.absorbed,
                    join(&m.apex),
                    m.discs[0],
                    m.discs[1],
                    join(&m.moved),
                    join(&m.witness)
                )
                .unwrap();
            }
        }
    }
    s.push_str("base\n");
    s.push_str(&write_bhp(&c.base));
    s
}

fn nums(line: usize, s: &str) -> Result<Vec<Vertex>> {
    s.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(line, format!("expected a number, found {t:?}"))))
        .collect()
}

fn fixed<const N: usize>(line: usize, s: &str, what: &str) -> Result<[Vertex; N]> {
    nums(line, s)?
        .try_into()
        .map_err(|_| Error::parse(line, format!("{what} needs exactly {N} numbers")))
}

/// Splits `key rest` sections separated by `;`, checking the keys.
fn sections<'a>(line: usize, text: &'a str, keys: &[&str]) -> Result<Vec<&'a str>> {
    let parts: Vec<&str> = text.split(';').map(str::trim).collect();
    if parts.len() != keys.len() + 1 {
        return Err(Error::parse(line, format!("expected {} ';'-separated sections", keys.len() + 1)));
    }
    let mut out = vec![parts[0]];
    for (p, k) in parts[1..].iter().zip(keys) {
        let rest = p
            .strip_prefix(k)
            .ok_or_else(|| Error::parse(line, format!("expected section {k:?}")))?;
        out.push(rest.trim());
    }
    Ok(out)
}

fn parse_move(line: usize, text: &str) -> Result<Move> {
    let (kind, rest) = text.split_once(' ').unwrap_or((text, ""));
    if kind == "reroute" {
        let s = sections(line, rest, &["old", "new", "triangles"])?;
        let [from, to] = fixed::<2>(line, s[0], "reroute")?;
        let triangles = s[3]
            .split(',')
            .map(|t| fixed::<3>(line, t, "triangle"))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Move::Reroute(Reroute {
            from,
            to,
            triangles,
            old_path: nums(line, s[1])?,
            new_path: nums(line, s[2])?,
        }));
    }
    let kind = MoveKind::from_name(kind).ok_or_else(|| Error::parse(line, format!("unknown move {kind:?}")))?;
    let s = sections(line, rest, &["apex", "discs", "moved", "witness"])?;
    let [survivor, absorbed] = fixed::<2>(line, s[0], "contraction")?;
    Ok(Move::Contract(
        kind,
        ContractionMove {
            survivor,
            absorbed,
            apex: fixed::<2>(line, s[1], "apex")?,
            discs: fixed::<2>(line, s[2], "discs")?,
            moved: nums(line, s[3])?,
            witness: nums(line, s[4])?,
        },
    ))
}

pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim() == "certificate 1" => {}
        _ => return Err(Error::parse(1, "expected header 'certificate 1'")),
    }
    let mut initial_hash = None;
    let mut moves = Vec::new();
    let mut base_start = None;
    for (no, raw) in lines.by_ref() {
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if l == "base" {
            base_start = Some(no);
            break;
        }
        if let Some(h) = l.strip_prefix("initial-hash ") {
            let h = h.trim();
            if h.len() != 64 || !h.chars().all(|c| c.is_ascii_hexdigit()) {
                return Err(Error::parse(no, "initial-hash must be 64 hex digits"));
            }
            initial_hash = Some(h.to_string());
        } else if let Some(m) = l.strip_prefix("move ") {
            moves.push(parse_move(no, m.trim())?);
        } else {
            return Err(Error::parse(no, format!("unexpected line {l:?}")));
        }
    }
    let initial_hash = initial_hash.ok_or_else(|| Error::parse(1, "missing initial-hash"))?;
    let offset = base_start.ok_or_else(|| Error::parse(text.lines().count(), "missing base section"))?;
    let rest: Vec<&str> = lines.map(|(_, l)| l).collect();
    let base = parse_bhp(&rest.join("\n")).map_err(|e| match e {
        Error::Parse { line, message } => Error::parse(line + offset, message),
        other => other,
    })?;
    Ok(Certificate { initial_hash, moves, base })
}

/// Undoes every move from the base, newest first.
pub fn replay(c: &Certificate) -> Result<Polyhedron> {
    let mut p = c.base.clone();
    for m in c.moves.iter().rev() {
        p = match m {
            Move::Reroute(r) => undo_reroute(&p, r)?,
            Move::Contract(_, cm) => vertex_split(&p, &invert(cm))?,
        };
    }
    Ok(p)
}

/// Replays the certificate, re-checking each move against the state it was
/// applied to: contracted edges must be long with the recorded common
/// neighbours and must contract back to the recorded successor. The
/// result must hash to the recorded initial hash and, when given, equal
/// `original`. Returns the number of moves checked.
pub fn verify(c: &Certificate, original: Option<&Polyhedron>) -> Result<usize> {
    let fail = |i: usize, msg: String| Error::Verification(format!("move {}: {msg}", i + 1));
    let mut p = c.base.clone();
    for (i, m) in c.moves.iter().enumerate().rev() {
        let prev = match m {
            Move::Reroute(r) => {
                let prev = undo_reroute(&p, r).map_err(|e| fail(i, e.to_string()))?;
                if r.new_path.len() >= r.old_path.len() {
                    return Err(fail(i, "reroute does not shorten the path".into()));
                }
                if apply_reroute(&prev, r).map_err(|e| fail(i, e.to_string()))? != p {
                    return Err(fail(i, "reroute does not reproduce its successor".into()));
                }
                prev
            }
            Move::Contract(_, cm) => {
                let prev = vertex_split(&p, &invert(cm)).map_err(|e| fail(i, e.to_string()))?;
                let e = Edge::new(cm.survivor, cm.absorbed);
                let short = nonfacial_triangles_through(&prev, e);
                if !short.is_empty() {
                    return Err(fail(i, format!("{e} is short (non-facial triangles via {short:?})")));
                }
                let mut common = prev.topology().graph().common_neighbors(e.0, e.1);
                common.sort_unstable();
                if common != cm.witness {
                    return Err(fail(i, format!("witness {:?} but common neighbours {common:?}", cm.witness)));
                }
                let (next, again) = contract_edge(&prev, cm.survivor, cm.absorbed).map_err(|e| fail(i, e.to_string()))?;
                if next != p || &again != cm {
                    return Err(fail(i, "contraction does not reproduce its successor".into()));
                }
                prev
            }
        };
        p = prev;
    }
    if polyhedron_hash(&p) != c.initial_hash {
        return Err(Error::Verification("replayed polyhedron does not match the initial hash".into()));
    }
    if let Some(o) = original {
        if write_bhp(o) != write_bhp(&p) {
            return Err(Error::Verification("replayed polyhedron differs from the original".into()));
        }
    }
    Ok(c.moves.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::run_contraction_sequence;
    use crate::generators::{expand, make_tower, ExpandOps};

    #[test]
    fn text_round_trip() {
        let big = expand(&make_tower(4).unwrap(), 5, ExpandOps { subdivisions: 5, insertions: 5, flips: 5 }).unwrap();
        let c = run_contraction_sequence(&big).unwrap();
        let text = write_certificate(&c);
        assert_eq!(parse_certificate(&text).unwrap(), c);
    }

    #[test]
    fn tampered_witness_is_caught() {
        let big = expand(&make_tower(4).unwrap(), 2, ExpandOps { subdivisions: 4, insertions: 4, flips: 0 }).unwrap();
        let mut c = run_contraction_sequence(&big).unwrap();
        let Some(Move::Contract(_, m)) = c.moves.iter_mut().find(|m| matches!(m, Move::Contract(..))) else {
            panic!("expected a contraction");
        };
        m.witness.push(999);
        assert!(matches!(verify(&c, None), Err(Error::Verification(_))));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = parse_certificate("certificate 1\ninitial-hash xyz\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
