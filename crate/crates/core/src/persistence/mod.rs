//! On-disk formats: the versioned meta-dataset file, per-iteration run-log
//! CSVs, and the aggregate tables written by experiments.
//!
//! Every writer goes through [`write_atomic`], so a reader never observes a
//! partially written file. Floats are written in their shortest round-trip
//! decimal form and parse back to the identical value.

mod meta_file;
mod runlog;
mod tables;

use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

use crate::error::{Error, Result};

pub use meta_file::{load_meta, save_meta, DomainRecord, MetaDatasetFile, SCHEMA_VERSION};
pub use runlog::{load_runlog, parse_runlog, runlog_header, save_runlog, write_runlog};
pub use tables::{load_aggregate, load_summary, save_aggregate, save_summary, AGGREGATE_HEADER, SUMMARY_HEADER};

/// Writes `bytes` to a temporary file next to `path`, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    // Temporary files are created owner-only; published files are world-readable.
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(0o644))
            .map_err(|e| Error::io(tmp.path(), e))?;
    }
    tmp.as_file().sync_all().map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
