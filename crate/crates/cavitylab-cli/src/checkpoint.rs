//! Append-only checkpoint of finished work items.
//!
//! ```text
//! # cavitylab checkpoint v1
//! config 0123456789abcdef
//! row 4059000000000000 iterations 100.0,1766,165,true,9.1e-7
//! done 4059000000000000
//! ```
//!
//! Rows belong to an item only once its `done` line is present; a torn last
//! line (no trailing newline) is ignored.

use std::collections::BTreeMap;
use std::io::Write;

pub const CHECKPOINT_HEADER: &str = "# cavitylab checkpoint v1";

/// Finished items: key → (table name, CSV record) pairs in write order.
pub type Completed = BTreeMap<u64, Vec<(String, Vec<String>)>>;

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub config_hash: u64,
    pub completed: Completed,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("checkpoint line {line}: {message}")]
pub struct CheckpointError {
    pub line: usize,
    pub message: String,
}

fn hex(s: &str, line: usize) -> Result<u64, CheckpointError> {
    if s.len() != 16 {
        return Err(CheckpointError { line, message: format!("`{s}` is not a 16-digit hex key") });
    }
    u64::from_str_radix(s, 16).map_err(|_| CheckpointError { line, message: format!("`{s}` is not hex") })
}

impl Checkpoint {
    pub fn parse(text: &str) -> Result<Self, CheckpointError> {
        let complete = match text.rfind('\n') {
            Some(i) => &text[..=i],
            None => "",
        };
        let mut lines = complete.lines().enumerate().map(|(i, l)| (i + 1, l));
        match lines.next() {
            Some((_, CHECKPOINT_HEADER)) => {}
            _ => return Err(CheckpointError { line: 1, message: "missing checkpoint header".into() }),
        }
        let config_hash = match lines.next() {
            Some((n, l)) => match l.strip_prefix("config ") {
                Some(h) => hex(h, n)?,
                None => return Err(CheckpointError { line: n, message: "expected `config <hash>`".into() }),
            },
            None => return Err(CheckpointError { line: 2, message: "missing config line".into() }),
        };
        let mut pending: BTreeMap<u64, Vec<(String, Vec<String>)>> = BTreeMap::new();
        let mut completed = Completed::new();
        for (n, l) in lines {
            if let Some(rest) = l.strip_prefix("row ") {
                let mut parts = rest.splitn(3, ' ');
                let key = hex(parts.next().unwrap_or(""), n)?;
                let table = parts.next().filter(|t| !t.is_empty()).ok_or_else(|| CheckpointError {
                    line: n,
                    message: "row without table name".into(),
                })?;
                let record = parse_record(parts.next().unwrap_or("")).map_err(|message| CheckpointError { line: n, message })?;
                pending.entry(key).or_default().push((table.to_string(), record));
            } else if let Some(k) = l.strip_prefix("done ") {
                let key = hex(k, n)?;
                completed.insert(key, pending.remove(&key).unwrap_or_default());
            } else if !l.is_empty() {
                return Err(CheckpointError { line: n, message: "unknown line kind".into() });
            }
        }
        Ok(Checkpoint { config_hash, completed })
    }
}

fn parse_record(s: &str) -> Result<Vec<String>, String> {
    let mut rd = csv::ReaderBuilder::new().has_headers(false).from_reader(s.as_bytes());
    match rd.records().next() {
        Some(Ok(r)) => Ok(r.iter().map(String::from).collect()),
        Some(Err(e)) => Err(e.to_string()),
        None => Ok(Vec::new()),
    }
}

/// One CSV record on a single line (fields holding newlines are rejected
/// by the callers, which only emit numbers and identifiers).
pub fn encode_record(fields: &[String]) -> String {
    let mut wr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    wr.write_record(fields).expect("in-memory write");
    let mut s = String::from_utf8(wr.into_inner().expect("in-memory flush")).expect("utf8 fields");
    s.pop();
    s
}

pub fn write_header<W: Write>(mut w: W, config_hash: u64) -> std::io::Result<()> {
    writeln!(w, "{CHECKPOINT_HEADER}")?;
    writeln!(w, "config {config_hash:016x}")
}

pub fn write_item<W: Write>(mut w: W, key: u64, rows: &[(String, Vec<String>)]) -> std::io::Result<()> {
    let mut buf = String::new();
    for (table, rec) in rows {
        buf.push_str(&format!("row {key:016x} {table} {}\n", encode_record(rec)));
    }
    buf.push_str(&format!("done {key:016x}\n"));
    w.write_all(buf.as_bytes())?;
    w.flush()
}

/// FNV-1a, stable across platforms and compiler versions.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}
