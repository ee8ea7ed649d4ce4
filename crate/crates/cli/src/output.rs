//! Report files: JSON plus CSV tables, each written atomically.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

use crate::report::Report;

pub fn report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn degrees_csv(report: &Report) -> String {
    let mut s = format!(
        "# schema={} seed={}\nn,deg\n",
        report.schema, report.config.seed
    );
    for (i, d) in report.degrees.iter().enumerate() {
        writeln!(s, "{},{d}", i + 1).unwrap();
    }
    s
}

/// `None` when the report carries no fitted constant.
pub fn residuals_csv(report: &Report) -> Option<String> {
    let fit = report.fit.as_ref()?;
    let rows = fit.residual_table(&report.degrees);
    if rows.is_empty() {
        return None;
    }
    let mut s = format!(
        "# schema={} seed={}\nn,deg,b_lambda1_n,residual,lambda2_half_n\n",
        report.schema, report.config.seed
    );
    for (n, d, main, res, bound) in rows {
        writeln!(s, "{n},{d},{main},{res},{bound}").unwrap();
    }
    Some(s)
}

/// Writes `contents` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Writes `report.json`, `degrees.csv` and (when fitted) `residuals.csv`
/// into `dir`.
pub fn write_report(dir: &Path, report: &Report) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    write_atomic(&dir.join("report.json"), &report_json(report))?;
    if !report.degrees.is_empty() {
        write_atomic(&dir.join("degrees.csv"), &degrees_csv(report))?;
    }
    if let Some(csv) = residuals_csv(report) {
        write_atomic(&dir.join("residuals.csv"), &csv)?;
    }
    Ok(())
}
