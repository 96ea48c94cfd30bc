//! On-disk cache of presentations, keyed by order, parity, excluded
//! relations and the SHA-256 of the relation table's canonical text.

use std::fs;
use std::path::{Path, PathBuf};

use oneloop_core::canon::{canonical_form, Form};
use oneloop_core::quotient::{build_quotient, Quotient, Row};
use oneloop_core::relations::{RelationTable, SpanOptions};
use oneloop_core::vector::Q;
use oneloop_core::{Graph, Parity};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::AppError;

pub const CACHE_ENV: &str = "ONELOOP_CACHE_DIR";
const FORMAT: u32 = 2;

pub fn table_sha256(table: &RelationTable) -> String {
    let digest = Sha256::digest(table.canonical_text().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// `--cache-dir`, else `$ONELOOP_CACHE_DIR`, else `$XDG_CACHE_HOME/oneloop`
/// or `~/.cache/oneloop`.
pub fn resolve_dir(flag: Option<&Path>) -> Option<PathBuf> {
    if let Some(p) = flag {
        return Some(p.to_path_buf());
    }
    if let Some(p) = std::env::var_os(CACHE_ENV) {
        return Some(PathBuf::from(p));
    }
    if let Some(p) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(p).join("oneloop"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("oneloop"))
}

#[derive(Serialize, Deserialize)]
struct Stored {
    format: u32,
    k: usize,
    parity: String,
    exclude: Vec<String>,
    table_sha256: String,
    basis: Vec<String>,
    rows: Vec<Vec<(usize, String)>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Disabled,
    Hit,
    Miss,
}

pub struct Presentations {
    pub dir: Option<PathBuf>,
    pub table: RelationTable,
    pub table_sha256: String,
    pub limit: usize,
}

impl Presentations {
    pub fn new(dir: Option<PathBuf>, table: RelationTable, limit: usize) -> Self {
        let table_sha256 = table_sha256(&table);
        Presentations { dir, table, table_sha256, limit }
    }

    fn path(&self, k: usize, parity: Parity, opts: &SpanOptions) -> Option<PathBuf> {
        let mut excl = opts.exclude.clone();
        excl.sort();
        let tag = if excl.is_empty() { String::from("all") } else { format!("no-{}", excl.join("-")) };
        let par = parity.label().replace(',', "-");
        let name = format!("k{k}-{par}-{tag}-{}.json", &self.table_sha256[..16]);
        self.dir.as_ref().map(|d| d.join(name))
    }

    /// The presentation, from the cache when a valid entry exists. Corrupt or
    /// mismatching entries are rebuilt and overwritten.
    pub fn get(&self, k: usize, parity: Parity, opts: &SpanOptions) -> Result<(Quotient, CacheStatus), AppError> {
        let path = self.path(k, parity, opts);
        if let Some(p) = &path {
            if let Some(q) = self.load(p, k, parity, opts) {
                return Ok((q, CacheStatus::Hit));
            }
        }
        let (q, _) = build_quotient(k, parity, &self.table, opts, self.limit)?;
        let status = match &path {
            Some(p) => {
                // A cache that cannot be written is not an error.
                let _ = self.store(p, &q, opts);
                CacheStatus::Miss
            }
            None => CacheStatus::Disabled,
        };
        Ok((q, status))
    }

    fn load(&self, path: &Path, k: usize, parity: Parity, opts: &SpanOptions) -> Option<Quotient> {
        let src = fs::read_to_string(path).ok()?;
        let s: Stored = serde_json::from_str(&src).ok()?;
        let mut excl = opts.exclude.clone();
        excl.sort();
        if s.format != FORMAT
            || s.k != k
            || s.parity != parity.label()
            || s.exclude != excl
            || s.table_sha256 != self.table_sha256
        {
            return None;
        }
        let basis: Vec<Form> = s
            .basis
            .iter()
            .map(|b| {
                let f = canonical_form(&Graph::parse(b).ok()?);
                (f.to_string() == *b).then_some(f)
            })
            .collect::<Option<_>>()?;
        let rows: Vec<Row> = s
            .rows
            .iter()
            .map(|r| r.iter().map(|(c, x)| Some((*c, x.parse::<Q>().ok()?))).collect::<Option<Row>>())
            .collect::<Option<_>>()?;
        Quotient::from_parts(k, parity, basis, rows).ok()
    }

    fn store(&self, path: &Path, q: &Quotient, opts: &SpanOptions) -> std::io::Result<()> {
        let mut exclude = opts.exclude.clone();
        exclude.sort();
        let s = Stored {
            format: FORMAT,
            k: q.k,
            parity: q.parity.label().to_string(),
            exclude,
            table_sha256: self.table_sha256.clone(),
            basis: q.basis.iter().map(|f| f.to_string()).collect(),
            rows: q
                .echelon_rows()
                .iter()
                .map(|r| r.iter().map(|(c, x)| (*c, x.to_string())).collect())
                .collect(),
        };
        if let Some(d) = path.parent() {
            fs::create_dir_all(d)?;
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&s)?)?;
        fs::rename(&tmp, path)
    }
}
