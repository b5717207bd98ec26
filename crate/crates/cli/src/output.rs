use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

pub const TRACE_DIR_VAR: &str = "AITGL_TRACE_DIR";

/// Where a trace goes: `--out` (or `<command>.jsonl`), moved into
/// `$AITGL_TRACE_DIR` when that is set.
pub fn resolve_out(out: Option<&Path>, default_name: &str) -> PathBuf {
    let requested = out.map_or_else(|| PathBuf::from(default_name), Path::to_path_buf);
    match std::env::var_os(TRACE_DIR_VAR) {
        Some(dir) if !dir.is_empty() => {
            let name = requested
                .file_name()
                .map_or_else(|| default_name.into(), |n| n.to_os_string());
            PathBuf::from(dir).join(name)
        }
        _ => requested,
    }
}

/// JSON-lines trace file; one record per line, summary last.
pub struct Trace {
    path: PathBuf,
    out: BufWriter<File>,
}

impl Trace {
    pub fn create(path: PathBuf) -> Result<Self, CliError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        Ok(Self {
            path,
            out: BufWriter::new(file),
        })
    }

    pub fn record<T: Serialize>(&mut self, value: &T) -> Result<(), CliError> {
        serde_json::to_writer(&mut self.out, value)
            .map_err(|e| CliError::io(&self.path, e.into()))?;
        self.out
            .write_all(b"\n")
            .map_err(|e| CliError::io(&self.path, e))
    }

    pub fn summary<T: Serialize>(mut self, value: &T) -> Result<PathBuf, CliError> {
        #[derive(Serialize)]
        struct Wrapped<'a, T> {
            summary: &'a T,
        }
        self.record(&Wrapped { summary: value })?;
        self.out.flush().map_err(|e| CliError::io(&self.path, e))?;
        Ok(self.path)
    }
}
