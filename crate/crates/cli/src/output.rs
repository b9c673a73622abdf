//! CSV trace and provenance-sidecar writers.

use std::io::Write;
use std::path::{Path, PathBuf};

use gossip_rank::engine::AggregatedTrace;
use gossip_rank::{Error, Result};

/// Decimal with 12 significant digits, the stable trace format.
pub fn fmt_sig(v: f64) -> String {
    format!("{v:.11e}")
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::invalid_input(format!("cannot write {}: {e}", path.display()))
}

/// Appends `_suffix` before the file extension.
pub fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = path.extension().and_then(|s| s.to_str());
    let name = match ext {
        Some(ext) => format!("{stem}{suffix}.{ext}"),
        None => format!("{stem}{suffix}"),
    };
    path.with_file_name(name)
}

/// Sidecar path for a trace file: `<out>.meta`.
pub fn provenance_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(".meta");
    PathBuf::from(s)
}

/// Writes `tick,mean_error,std_error[,extra...]` with 12 significant
/// digits per value.
pub fn write_trace_csv(
    path: &Path,
    trace: &AggregatedTrace,
    extra: &[(String, Vec<f64>)],
) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| io_err(path, e))?;
        }
    }
    let mut out = Vec::new();
    let mut header = String::from("tick,mean_error,std_error");
    for (name, values) in extra {
        assert_eq!(values.len(), trace.ticks.len(), "extra column misaligned");
        header.push(',');
        header.push_str(name);
    }
    writeln!(out, "{header}").expect("vec write");
    for (idx, &tick) in trace.ticks.iter().enumerate() {
        let mut row = format!(
            "{tick},{},{}",
            fmt_sig(trace.mean[idx]),
            fmt_sig(trace.std[idx])
        );
        for (_, values) in extra {
            row.push(',');
            row.push_str(&fmt_sig(values[idx]));
        }
        writeln!(out, "{row}").expect("vec write");
    }
    std::fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Key-value report text, one `key = value` per line.
pub fn kv_report(lines: &[(String, String)]) -> String {
    let mut s = String::new();
    for (k, v) in lines {
        s.push_str(k);
        s.push_str(" = ");
        s.push_str(v);
        s.push('\n');
    }
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| io_err(path, e))?;
        }
    }
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Writes the provenance sidecar next to a trace file.
pub fn write_provenance(out: &Path, lines: &[(String, String)]) -> Result<()> {
    write_text(&provenance_path(out), &kv_report(lines))
}
