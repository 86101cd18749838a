//! CSV tables and companion gnuplot scripts.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(title: impl Into<String>, header: Vec<String>) -> Self {
        Table { title: title.into(), header, rows: Vec::new() }
    }

    /// Number of cells holding NaN (failed evaluations).
    pub fn failures(&self) -> usize {
        self.rows.iter().flatten().filter(|v| v.is_nan()).count()
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_value(*v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// 17 significant digits in exponent form.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

/// Path of panel `index`: the output path itself, then `_b`, `_c`, ... before the extension.
pub fn panel_path(base: &Path, index: usize) -> PathBuf {
    if index == 0 {
        return base.to_path_buf();
    }
    let suffix = (b'a' + index as u8) as char;
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    base.with_file_name(name)
}

/// Writes each table to its panel path; returns the paths written.
pub fn write_tables(base: &Path, tables: &[Table]) -> io::Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for (i, t) in tables.iter().enumerate() {
        let p = panel_path(base, i);
        if let Some(dir) = p.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        std::fs::write(&p, t.to_csv())?;
        paths.push(p);
    }
    Ok(paths)
}

/// gnuplot script plotting every column against the first, one plot per CSV.
pub fn plot_script(tables: &[Table], paths: &[PathBuf]) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\nset key autotitle columnhead\nset grid\n");
    for (t, p) in tables.iter().zip(paths) {
        let file = p.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
        let _ = writeln!(s, "\nset title '{}'", t.title);
        let _ = writeln!(s, "set xlabel '{}'", t.header.first().map(String::as_str).unwrap_or(""));
        let curves: Vec<String> = (2..=t.header.len())
            .map(|c| format!("'{file}' using 1:{c} with lines"))
            .collect();
        let _ = writeln!(s, "plot {}", curves.join(", \\\n     "));
        s.push_str("pause -1\n");
    }
    s
}
