use std::fmt::Write;

use plmorse_core::matrix::IntMatrix;
use plmorse_core::{CellComplex, CellId};

pub fn names(cx: &CellComplex, cells: &[CellId]) -> Vec<String> {
    cells.iter().map(|c| cx.name(*c).to_string()).collect()
}

pub fn mark(ok: bool) -> &'static str {
    if ok {
        "✓"
    } else {
        "✗"
    }
}

/// Dense matrix with row and column labels.
pub fn matrix(title: &str, rows: &[String], cols: &[String], m: &IntMatrix) -> String {
    let mut s = format!("{title} ({} x {})\n", rows.len(), cols.len());
    if rows.is_empty() || cols.is_empty() {
        return s;
    }
    let cells: Vec<Vec<String>> = (0..rows.len())
        .map(|r| (0..cols.len()).map(|c| m.get(r, c).to_string()).collect())
        .collect();
    let head = rows.iter().map(String::len).max().unwrap_or(0);
    let width: Vec<usize> = (0..cols.len())
        .map(|c| cells.iter().map(|row| row[c].len()).chain([cols[c].len()]).max().unwrap_or(1))
        .collect();
    let _ = write!(s, "  {:head$}", "");
    for (c, name) in cols.iter().enumerate() {
        let _ = write!(s, " {:>w$}", name, w = width[c]);
    }
    s.push('\n');
    for (r, name) in rows.iter().enumerate() {
        let _ = write!(s, "  {name:head$}");
        for (c, v) in cells[r].iter().enumerate() {
            let _ = write!(s, " {:>w$}", v, w = width[c]);
        }
        s.push('\n');
    }
    s
}

/// Cells grouped by degree: `  0: a b` per line.
pub fn graded(cx: &CellComplex, basis: &[Vec<CellId>]) -> String {
    let mut s = String::new();
    for (d, cells) in basis.iter().enumerate() {
        let _ = writeln!(s, "  {d}: {}", names(cx, cells).join(" "));
    }
    s
}

pub fn tuple(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}
