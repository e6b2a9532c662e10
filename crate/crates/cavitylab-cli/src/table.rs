//! Output tables. Every CSV starts with a `# cavitylab-csv v1 <name>` line
//! followed by the column header.

use std::io::Write;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &'static [&'static str]) -> Self {
        Table { name: name.into(), columns, rows: Vec::new() }
    }

    pub fn schema_line(&self) -> String {
        format!("# cavitylab-csv v{SCHEMA_VERSION} {}", self.name)
    }

    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.schema_line())?;
        let mut wr = csv::WriterBuilder::new().flexible(false).from_writer(w);
        wr.write_record(self.columns)?;
        for r in &self.rows {
            wr.write_record(r)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn write_file(&self, dir: &Path) -> std::io::Result<()> {
        let path = dir.join(format!("{}.csv", self.name));
        let mut buf = Vec::new();
        self.write(&mut buf)?;
        std::fs::write(path, buf)
    }
}

/// Reads a table written by [`Table::write`]; returns the schema name,
/// the header and the rows.
pub fn read_table(text: &str) -> Result<(String, Vec<String>, Vec<Vec<String>>), String> {
    let (first, rest) = text.split_once('\n').ok_or("missing schema line")?;
    let name = first
        .strip_prefix(&format!("# cavitylab-csv v{SCHEMA_VERSION} "))
        .ok_or_else(|| format!("bad schema line `{first}`"))?
        .trim()
        .to_string();
    let mut rd = csv::ReaderBuilder::new().from_reader(rest.as_bytes());
    let header = rd.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
    let rows = rd
        .records()
        .map(|r| r.map(|r| r.iter().map(String::from).collect()).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    Ok((name, header, rows))
}

/// Shortest round-trip formatting, so CSVs are reproducible bit for bit.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
