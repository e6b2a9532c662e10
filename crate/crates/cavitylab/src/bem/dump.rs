//! Binary matrix dumps.
//!
//! Layout, all integers and floats little endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 4 | magic `CLMX` |
//! | 4 | format version, `u32` = 1 |
//! | 8 | rows, `u64` |
//! | 8 | columns, `u64` |
//! | 1 | length `t` of the operator tag |
//! | t | operator tag, ASCII (`aprime`, `s-ik`, ...) |
//! | 8 | wavenumber, `f64` (0 for the mass matrix) |
//! | 8 | mesh id, `u64` |
//! | 16·rows·cols | entries row by row, each as `re, im` |

use super::{OperatorKind, OperatorMatrix};
use crate::error::{Error, Result};
use crate::geometry::MeshId;
use crate::linalg::{CMat, C64};
use std::io::Write;

pub const MAGIC: &[u8; 4] = b"CLMX";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct MatrixDump {
    pub entries: CMat,
    pub kind: OperatorKind,
    pub mesh_id: MeshId,
}

pub fn write_matrix_dump<W: Write>(m: &OperatorMatrix, mut w: W) -> Result<()> {
    let tag = m.kind.tag().as_bytes();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(m.entries.nrows() as u64).to_le_bytes())?;
    w.write_all(&(m.entries.ncols() as u64).to_le_bytes())?;
    w.write_all(&[tag.len() as u8])?;
    w.write_all(tag)?;
    w.write_all(&m.kind.wavenumber().unwrap_or(0.0).to_le_bytes())?;
    w.write_all(&m.mesh_id.0.to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * m.entries.ncols());
    for i in 0..m.entries.nrows() {
        buf.clear();
        for j in 0..m.entries.ncols() {
            let v = m.entries[(i, j)];
            buf.extend_from_slice(&v.re.to_le_bytes());
            buf.extend_from_slice(&v.im.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

fn bad(message: impl Into<String>) -> Error {
    Error::Parse { line: 0, message: message.into() }
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.data.len()).ok_or_else(|| bad("truncated matrix dump"))?;
        let s = &self.data[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

pub fn read_matrix_dump(data: &[u8]) -> Result<MatrixDump> {
    let mut c = Cursor { data, pos: 0 };
    if c.take(4)? != MAGIC {
        return Err(bad("not a matrix dump (bad magic)"));
    }
    let version = u32::from_le_bytes(c.take(4)?.try_into().expect("4 bytes"));
    if version != VERSION {
        return Err(bad(format!("unsupported dump version {version}")));
    }
    let rows = c.u64()?;
    let cols = c.u64()?;
    let tag_len = c.take(1)?[0] as usize;
    let tag = std::str::from_utf8(c.take(tag_len)?).map_err(|_| bad("operator tag is not UTF-8"))?;
    let k = c.f64()?;
    let mesh_id = MeshId(c.u64()?);
    let kind = OperatorKind::from_tag(tag, k).ok_or_else(|| bad(format!("unknown operator tag `{tag}`")))?;
    match kind.wavenumber() {
        Some(k) if !(k > 0.0 && k.is_finite()) => return Err(bad(format!("invalid wavenumber {k}"))),
        None if k != 0.0 => return Err(bad("mass matrix dump must store wavenumber 0")),
        _ => {}
    }
    let count = rows
        .checked_mul(cols)
        .and_then(|v| v.checked_mul(16))
        .ok_or_else(|| bad("matrix dimensions overflow"))?;
    let remaining = (data.len() - c.pos) as u64;
    if count != remaining {
        return Err(bad(format!("expected {count} bytes of entries, found {remaining}")));
    }
    let (rows, cols) = (rows as usize, cols as usize);
    let body = &data[c.pos..];
    let entry = |i: usize, j: usize| {
        let off = 16 * (i * cols + j);
        let re = f64::from_le_bytes(body[off..off + 8].try_into().expect("8 bytes"));
        let im = f64::from_le_bytes(body[off + 8..off + 16].try_into().expect("8 bytes"));
        C64::new(re, im)
    };
    let entries = CMat::from_fn(rows, cols, entry);
    Ok(MatrixDump { entries, kind, mesh_id })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bem::QuadratureOptions;

    fn sample() -> OperatorMatrix {
        OperatorMatrix {
            entries: CMat::from_fn(3, 2, |i, j| C64::new(i as f64 + 0.25, -(j as f64) * 1e-300)),
            kind: OperatorKind::Breg(12.5),
            mesh_id: MeshId(0xdead_beef),
            quadrature: QuadratureOptions::default(),
        }
    }

    #[test]
    fn round_trip() {
        let m = sample();
        let mut buf = Vec::new();
        write_matrix_dump(&m, &mut buf).unwrap();
        let d = read_matrix_dump(&buf).unwrap();
        assert_eq!(d.kind, m.kind);
        assert_eq!(d.mesh_id, m.mesh_id);
        assert_eq!(d.entries, m.entries);
    }

    #[test]
    fn rejects_corruption() {
        let mut buf = Vec::new();
        write_matrix_dump(&sample(), &mut buf).unwrap();
        assert!(read_matrix_dump(&buf[..buf.len() - 1]).is_err());
        let mut extra = buf.clone();
        extra.push(0);
        assert!(read_matrix_dump(&extra).is_err());
        let mut magic = buf.clone();
        magic[0] = b'X';
        assert!(read_matrix_dump(&magic).is_err());
        let mut huge = buf;
        huge[8..16].copy_from_slice(&u64::MAX.to_le_bytes());
        assert!(read_matrix_dump(&huge).is_err());
    }
}
