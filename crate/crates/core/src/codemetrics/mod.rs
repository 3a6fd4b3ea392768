//! Source-tree scanning for the code-complexity indicators.

mod lexer;
mod profile;

use std::collections::BTreeMap;
use std::path::{Component, Path};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use crate::error::{Error, Issue, Result};
use crate::indicators::{CodeModule, ControlFlow, Halstead};

pub use lexer::{scan_source, FileMetrics};
pub use profile::{LanguageProfile, PROFILE_SCHEMA_VERSION};

pub const SCAN_SCHEMA_VERSION: u32 = 1;
pub const MODULE_MAP_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FileEntry {
    pub path: String,
    pub module: String,
    #[serde(flatten)]
    pub metrics: FileMetrics,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FileError {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ScanReport {
    pub schema_version: u32,
    pub profile: String,
    pub files: Vec<FileEntry>,
    /// Files whose extension the profile does not handle.
    pub skipped: Vec<String>,
    pub errors: Vec<FileError>,
}

impl ScanReport {
    pub fn from_json(text: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(text).map_err(|e| Error::json("scan report", e))?;
        let mut issues = Vec::new();
        if r.schema_version != SCAN_SCHEMA_VERSION {
            issues.push(Issue::new("schemaVersion", format!("unsupported version {}", r.schema_version)));
        }
        for (k, f) in r.files.iter().enumerate() {
            let h = &f.metrics.halstead;
            if h.n1 > h.big_n1 || h.n2 > h.big_n2 {
                issues.push(Issue::new(format!("files[{k}].halstead"), "distinct counts exceed totals"));
            }
        }
        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }
        Ok(r)
    }
}

/// Path-prefix to module-id overrides; the longest matching prefix wins.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ModuleMap {
    pub schema_version: u32,
    pub modules: BTreeMap<String, String>,
}

fn components(p: &str) -> Vec<&str> {
    p.split('/').filter(|c| !c.is_empty() && *c != ".").collect()
}

impl ModuleMap {
    pub fn from_json(text: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(text).map_err(|e| Error::json("module map", e))?;
        let mut issues = Vec::new();
        if m.schema_version != MODULE_MAP_SCHEMA_VERSION {
            issues.push(Issue::new("schemaVersion", format!("unsupported version {}", m.schema_version)));
        }
        for (prefix, id) in &m.modules {
            if id.trim().is_empty() {
                issues.push(Issue::new(format!("modules.{prefix}"), "module id must not be empty"));
            }
        }
        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }
        Ok(m)
    }

    /// Module id for a `/`-separated relative path, matching whole components.
    pub fn lookup(&self, rel: &str) -> Option<&str> {
        let path = components(rel);
        self.modules
            .iter()
            .filter(|(prefix, _)| {
                let pre = components(prefix);
                pre.len() <= path.len() && path[..pre.len()] == pre[..]
            })
            .max_by_key(|(prefix, _)| components(prefix).len())
            .map(|(_, id)| id.as_str())
    }
}

fn rel_string(rel: &Path) -> String {
    rel.components()
        .filter_map(|c| match c {
            Component::Normal(s) => Some(s.to_string_lossy().into_owned()),
            _ => None,
        })
        .collect::<Vec<_>>()
        .join("/")
}

fn default_module(rel: &str) -> String {
    match rel.rsplit_once('/') {
        Some((dir, _)) => dir.to_string(),
        None => ".".to_string(),
    }
}

fn is_hidden(name: &std::ffi::OsStr) -> bool {
    name.to_string_lossy().starts_with('.')
}

/// Scan every file under `root`. Hidden files and directories are ignored.
/// Files are reported in lexicographic path order regardless of how the
/// parallel scan is scheduled.
pub fn scan_tree(root: &Path, profile: &LanguageProfile, map: Option<&ModuleMap>) -> Result<ScanReport> {
    let meta = std::fs::metadata(root).map_err(|e| Error::io(root, e))?;
    if !meta.is_dir() {
        return Err(Error::io(
            root,
            std::io::Error::new(std::io::ErrorKind::InvalidInput, "not a directory"),
        ));
    }
    let mut candidates = Vec::new();
    let mut skipped = Vec::new();
    let mut errors = Vec::new();
    let walker = WalkDir::new(root)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !is_hidden(e.file_name()));
    for entry in walker {
        let entry = match entry {
            Ok(e) => e,
            Err(e) => {
                let path = e
                    .path()
                    .and_then(|p| p.strip_prefix(root).ok())
                    .map(rel_string)
                    .unwrap_or_default();
                errors.push(FileError {
                    path,
                    message: e.to_string(),
                });
                continue;
            }
        };
        if entry.file_type().is_dir() {
            continue;
        }
        let rel = rel_string(entry.path().strip_prefix(root).unwrap_or(entry.path()));
        let handled = entry
            .path()
            .extension()
            .is_some_and(|ext| profile.handles_extension(&ext.to_string_lossy()));
        if handled {
            candidates.push((rel, entry.into_path()));
        } else {
            skipped.push(rel);
        }
    }

    let scanned: Vec<(String, std::io::Result<FileMetrics>)> = candidates
        .par_iter()
        .map(|(rel, path)| {
            let res = std::fs::read(path).map(|bytes| scan_source(&String::from_utf8_lossy(&bytes), profile));
            (rel.clone(), res)
        })
        .collect();

    let mut files = Vec::new();
    for (rel, res) in scanned {
        match res {
            Ok(metrics) => {
                let module = map
                    .and_then(|m| m.lookup(&rel))
                    .map_or_else(|| default_module(&rel), str::to_string);
                files.push(FileEntry {
                    path: rel,
                    module,
                    metrics,
                });
            }
            Err(e) => errors.push(FileError {
                path: rel,
                message: e.to_string(),
            }),
        }
    }
    files.sort_by(|a, b| a.path.cmp(&b.path));
    skipped.sort();
    errors.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(ScanReport {
        schema_version: SCAN_SCHEMA_VERSION,
        profile: profile.name.clone(),
        files,
        skipped,
        errors,
    })
}

/// Aggregate files into code modules. Module cyclomatic complexity is
/// decision points + 1, carried as a one-node graph with one edge per
/// decision.
pub fn to_metric_inputs(report: &ScanReport) -> Vec<CodeModule> {
    let mut modules: BTreeMap<&str, (u64, Halstead, u64)> = BTreeMap::new();
    for f in &report.files {
        let m = modules.entry(f.module.as_str()).or_default();
        let h = &f.metrics.halstead;
        m.0 += f.metrics.loc;
        m.1.n1 += h.n1;
        m.1.n2 += h.n2;
        m.1.big_n1 += h.big_n1;
        m.1.big_n2 += h.big_n2;
        m.2 += f.metrics.decision_points;
    }
    modules
        .into_iter()
        .map(|(id, (loc, halstead, decisions))| CodeModule {
            id: id.to_string(),
            loc,
            halstead,
            cfg: ControlFlow {
                edges: decisions,
                nodes: 1,
            },
        })
        .collect()
}
