//! Tab-separated report tables.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a value
//! read back from a report is bit-identical to the one written.

use std::fmt::Write as _;
use std::path::Path;

use kbga::Point;

use crate::CliError;

/// A header row plus data rows.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join("\t");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join("\t"));
            s.push('\n');
        }
        s
    }

    /// Parses text produced by [`Table::render`], checking the header.
    pub fn parse(text: &str, header: &[&str]) -> Result<Vec<Vec<String>>, String> {
        let mut lines = text.lines();
        let got = lines.next().ok_or("empty table")?;
        if got.split('\t').ne(header.iter().copied()) {
            return Err(format!("unexpected header `{got}`"));
        }
        lines
            .enumerate()
            .map(|(i, l)| {
                let cells: Vec<String> = l.split('\t').map(str::to_string).collect();
                if cells.len() == header.len() {
                    Ok(cells)
                } else {
                    Err(format!("row {}: expected {} cells, got {}", i + 1, header.len(), cells.len()))
                }
            })
            .collect()
    }
}

/// Two-column `key value` table.
pub fn key_values(pairs: &[(&str, String)]) -> String {
    let mut t = Table::new(&["key", "value"]);
    for (k, v) in pairs {
        t.row(vec![k.to_string(), v.clone()]);
    }
    t.render()
}

pub fn num(x: f64) -> String {
    format!("{x}")
}

/// `x,y x,y ...`
pub fn path_cell(path: &[Point]) -> String {
    let mut s = String::new();
    for p in path {
        if !s.is_empty() {
            s.push(' ');
        }
        let _ = write!(s, "{},{}", p.x, p.y);
    }
    s
}

pub fn points_table(path: &[Point]) -> String {
    let mut t = Table::new(&["x", "y"]);
    for p in path {
        t.row(vec![num(p.x), num(p.y)]);
    }
    t.render()
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|source| CliError::Io { path: parent.to_path_buf(), source })?;
    }
    std::fs::write(&path, contents).map_err(|source| CliError::Io { path, source })
}
