//! Work-item driver: worker pool, checkpointing, failure manifest.

use crate::checkpoint::{self, Checkpoint};
use crate::table::Table;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

/// Table name reserved for problems found while computing an item whose
/// rows are still kept (for example a bound that fails to dominate).
pub const PROBLEM_TABLE: &str = "__problem";
pub const TIMING_COLUMNS: &[&str] = &["item", "wall_seconds"];
pub const FAILURE_COLUMNS: &[&str] = &["command", "item", "error"];

pub type Rows = Vec<(String, Vec<String>)>;

#[derive(Debug, Clone, PartialEq)]
pub struct Item {
    pub key: u64,
    pub label: String,
    pub k: f64,
}

impl Item {
    pub fn wavenumber(k: f64) -> Self {
        Item { key: k.to_bits(), label: crate::table::num(k), k }
    }

    pub fn index(i: u64) -> Self {
        Item { key: i, label: i.to_string(), k: f64::NAN }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub item: String,
    pub error: String,
}

#[derive(Debug)]
pub struct RunResult {
    /// Output tables in declaration order, rows in item order.
    pub tables: Vec<Table>,
    pub timing: Table,
    pub failures: Vec<Failure>,
    pub reused: usize,
    pub computed: usize,
}

impl RunResult {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}

#[derive(Debug, Clone)]
pub struct RunContext {
    pub command: String,
    pub output_dir: PathBuf,
    pub workers: usize,
    pub config_hash: u64,
    /// Ignore an existing checkpoint.
    pub fresh: bool,
}

impl RunContext {
    pub fn checkpoint_path(&self) -> PathBuf {
        self.output_dir.join(format!("{}.checkpoint", self.command))
    }
}

fn load_checkpoint(path: &Path, hash: u64) -> Option<checkpoint::Completed> {
    let text = std::fs::read_to_string(path).ok()?;
    match Checkpoint::parse(&text) {
        Ok(c) if c.config_hash == hash => Some(c.completed),
        Ok(_) => {
            eprintln!("warning: {} belongs to a different configuration, starting over", path.display());
            None
        }
        Err(e) => {
            eprintln!("warning: ignoring unreadable {}: {e}", path.display());
            None
        }
    }
}

/// Runs `work` on every item not already in the checkpoint and collects
/// the rows of the named tables.
pub fn run_items<F>(
    ctx: &RunContext,
    items: &[Item],
    tables: &[(&str, &'static [&'static str])],
    work: F,
) -> std::io::Result<RunResult>
where
    F: Fn(&Item) -> Result<Rows, String> + Sync,
{
    std::fs::create_dir_all(&ctx.output_dir)?;
    let path = ctx.checkpoint_path();
    let mut done = if ctx.fresh { None } else { load_checkpoint(&path, ctx.config_hash) }.unwrap_or_default();
    // rewrite the checkpoint so it holds exactly the items being reused
    {
        let mut f = std::fs::File::create(&path)?;
        checkpoint::write_header(&mut f, ctx.config_hash)?;
        done.retain(|key, _| items.iter().any(|it| it.key == *key));
        for (key, rows) in &done {
            checkpoint::write_item(&mut f, *key, rows)?;
        }
    }
    let reused = done.len();
    let todo: Vec<&Item> = items.iter().filter(|it| !done.contains_key(&it.key)).collect();
    let file = Mutex::new(OpenOptions::new().append(true).open(&path)?);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.workers)
        .build()
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::Other, e.to_string()))?;
    let results: Vec<(u64, Result<Rows, String>)> = pool.install(|| {
        todo.par_iter()
            .map(|it| {
                let start = Instant::now();
                let out = work(it).map(|mut rows| {
                    rows.push(("timing".into(), vec![it.label.clone(), format!("{:.3}", start.elapsed().as_secs_f64())]));
                    rows
                });
                if let Ok(rows) = &out {
                    let mut f = file.lock().expect("checkpoint lock");
                    if let Err(e) = checkpoint::write_item(&mut *f, it.key, rows) {
                        eprintln!("warning: checkpoint write failed: {e}");
                    }
                }
                (it.key, out)
            })
            .collect()
    });
    let computed = results.len();
    let mut errors = BTreeMap::new();
    for (key, r) in results {
        match r {
            Ok(rows) => {
                done.insert(key, rows);
            }
            Err(e) => {
                errors.insert(key, e);
            }
        }
    }

    let mut out: Vec<Table> = tables.iter().map(|(n, c)| Table::new(*n, c)).collect();
    let mut timing = Table::new(format!("{}_timing", ctx.command), TIMING_COLUMNS);
    let mut failures = Vec::new();
    for it in items {
        if let Some(e) = errors.get(&it.key) {
            failures.push(Failure { item: it.label.clone(), error: e.clone() });
            continue;
        }
        for (table, rec) in done.get(&it.key).into_iter().flatten() {
            if table == PROBLEM_TABLE {
                failures.push(Failure { item: it.label.clone(), error: rec.join(" ") });
            } else if table == "timing" {
                timing.rows.push(rec.clone());
            } else if let Some(t) = out.iter_mut().find(|t| &t.name == table) {
                t.rows.push(rec.clone());
            }
        }
    }
    Ok(RunResult { tables: out, timing, failures, reused, computed })
}

/// Writes the tables, the timing table and, when needed, the failure
/// manifest; drops the checkpoint once every item succeeded.
pub fn finish(ctx: &RunContext, result: &RunResult, extra: &[Table]) -> std::io::Result<()> {
    for t in result.tables.iter().chain(extra) {
        t.write_file(&ctx.output_dir)?;
    }
    result.timing.write_file(&ctx.output_dir)?;
    let manifest = ctx.output_dir.join("failures.csv");
    if result.failures.is_empty() {
        let _ = std::fs::remove_file(&manifest);
        std::fs::remove_file(ctx.checkpoint_path())?;
    } else {
        let mut t = Table::new("failures", FAILURE_COLUMNS);
        for f in &result.failures {
            t.rows.push(vec![ctx.command.clone(), f.item.clone(), f.error.replace('\n', " ")]);
        }
        t.write_file(&ctx.output_dir)?;
    }
    Ok(())
}
