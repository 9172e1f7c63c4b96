//! The shipped metric catalog.

use std::path::{Path, PathBuf};

/// Environment variable overriding the catalog directory.
pub const CATALOG_ENV: &str = "CURVLAB_CATALOG";

pub const ENTRIES: [&str; 5] = ["vaidya", "schwarzschild", "ludwig-edgar", "minkowski", "sphere2"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub metric: PathBuf,
    /// Golden structure report, when one is shipped.
    pub report: Option<PathBuf>,
}

pub fn directory() -> PathBuf {
    if let Some(dir) = std::env::var_os(CATALOG_ENV) {
        return PathBuf::from(dir);
    }
    let local = PathBuf::from("catalog");
    if local.join("vaidya.metric").is_file() {
        return local;
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

pub fn entry(name: &str) -> CatalogEntry {
    let dir = directory();
    let report = dir.join(format!("{name}.report"));
    CatalogEntry {
        name: name.to_string(),
        metric: dir.join(format!("{name}.metric")),
        report: report.is_file().then_some(report),
    }
}

pub fn list() -> Vec<CatalogEntry> {
    ENTRIES.iter().map(|n| entry(n)).collect()
}

/// A metric argument is a file path, or a bare catalog name.
pub fn resolve(arg: &str) -> PathBuf {
    let path = PathBuf::from(arg);
    if path.is_file() {
        return path;
    }
    let candidate = entry(arg).metric;
    if candidate.is_file() {
        candidate
    } else {
        path
    }
}
