//! Plain-text mesh files.
//!
//! ```text
//! # cavitylab mesh v1
//! nodes 4
//! 1 0
//! 0 1
//! -1 0
//! 0 -1
//! elements 4
//! 0 1
//! 1 2
//! 2 3
//! 3 0
//! ```
//!
//! Lines starting with `#` and blank lines are ignored. Coordinates are
//! written in shortest round-trip form, so export followed by import is
//! lossless.

use super::curve::Point;
use super::mesh::BoundaryMesh;
use crate::error::{Error, Result};
use std::io::Write;

pub const MESH_HEADER: &str = "# cavitylab mesh v1";

/// Node/element lists as read from a mesh file.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshText {
    pub nodes: Vec<Point>,
    pub elements: Vec<[usize; 2]>,
}

pub fn write_mesh_text<W: Write>(mesh: &BoundaryMesh, mut w: W) -> Result<()> {
    writeln!(w, "{MESH_HEADER}")?;
    writeln!(w, "nodes {}", mesh.nodes.len())?;
    for p in &mesh.nodes {
        writeln!(w, "{:?} {:?}", p[0], p[1])?;
    }
    writeln!(w, "elements {}", mesh.elements.len())?;
    for e in &mesh.elements {
        writeln!(w, "{} {}", e[0], e[1])?;
    }
    Ok(())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn section(line: usize, text: &str, name: &str) -> Result<usize> {
    let mut it = text.split_whitespace();
    if it.next() != Some(name) {
        return Err(parse_err(line, format!("expected `{name} <count>`")));
    }
    let count = it
        .next()
        .ok_or_else(|| parse_err(line, "missing count"))?
        .parse::<usize>()
        .map_err(|e| parse_err(line, format!("bad count: {e}")))?;
    if it.next().is_some() {
        return Err(parse_err(line, "trailing tokens"));
    }
    Ok(count)
}

/// Parses a mesh file and checks that the elements form one closed cycle
/// through every node with positive lengths.
pub fn read_mesh_text(text: &str) -> Result<MeshText> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, l) = lines.next().ok_or_else(|| parse_err(0, "empty mesh file"))?;
    let n_nodes = section(ln, l, "nodes")?;
    // cap preallocation by what the input could possibly hold
    let mut nodes = Vec::with_capacity(n_nodes.min(text.len() / 4 + 1));
    for _ in 0..n_nodes {
        let (ln, l) = lines.next().ok_or_else(|| parse_err(0, "unexpected end of node list"))?;
        let v: Vec<&str> = l.split_whitespace().collect();
        if v.len() != 2 {
            return Err(parse_err(ln, "node line needs two coordinates"));
        }
        let mut p = [0.0; 2];
        for (slot, tok) in p.iter_mut().zip(&v) {
            *slot = tok.parse::<f64>().map_err(|e| parse_err(ln, format!("bad coordinate: {e}")))?;
            if !slot.is_finite() {
                return Err(parse_err(ln, "coordinate is not finite"));
            }
        }
        nodes.push(p);
    }
    let (ln, l) = lines.next().ok_or_else(|| parse_err(0, "missing element section"))?;
    let n_el = section(ln, l, "elements")?;
    let mut elements = Vec::with_capacity(n_el.min(text.len() / 4 + 1));
    for _ in 0..n_el {
        let (ln, l) = lines.next().ok_or_else(|| parse_err(0, "unexpected end of element list"))?;
        let v: Vec<&str> = l.split_whitespace().collect();
        if v.len() != 2 {
            return Err(parse_err(ln, "element line needs two node indices"));
        }
        let mut e = [0usize; 2];
        for (slot, tok) in e.iter_mut().zip(&v) {
            *slot = tok.parse::<usize>().map_err(|e| parse_err(ln, format!("bad index: {e}")))?;
            if *slot >= n_nodes {
                return Err(parse_err(ln, format!("node index {} out of range", *slot)));
            }
        }
        elements.push(e);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "trailing content after element list"));
    }
    check_closed_cycle(&nodes, &elements)?;
    Ok(MeshText { nodes, elements })
}

fn check_closed_cycle(nodes: &[Point], elements: &[[usize; 2]]) -> Result<()> {
    let n = nodes.len();
    if n < 3 || elements.len() != n {
        return Err(parse_err(0, "a closed mesh needs n >= 3 nodes and n elements"));
    }
    let mut next = vec![usize::MAX; n];
    let mut incoming = vec![0u8; n];
    for &[a, b] in elements {
        if a == b || next[a] != usize::MAX {
            return Err(parse_err(0, format!("node {a} starts more than one element")));
        }
        let (p, q) = (nodes[a], nodes[b]);
        if (p[0] - q[0]).hypot(p[1] - q[1]) <= 0.0 {
            return Err(parse_err(0, format!("element {a}-{b} has zero length")));
        }
        next[a] = b;
        incoming[b] += 1;
    }
    if incoming.iter().any(|&c| c != 1) {
        return Err(parse_err(0, "every node must end exactly one element"));
    }
    let mut seen = 1;
    let mut cur = next[0];
    while cur != 0 {
        seen += 1;
        if seen > n {
            return Err(parse_err(0, "elements do not form a single cycle"));
        }
        cur = next[cur];
    }
    if seen != n {
        return Err(parse_err(0, "elements do not form a single cycle"));
    }
    Ok(())
}
