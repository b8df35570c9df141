//! Fixed-format MPS export and import.
//!
//! Names are at most 8 characters and numbers at most 12, placed in the
//! classic columns (2-3, 5-12, 15-22, 25-36). The reader splits on
//! whitespace, so it also accepts free-format files without embedded
//! spaces in names.

use std::fmt::Write as _;

use super::{Column, LpProblem, Row};
use crate::error::{Error, Result};

const OBJ: &str = "OBJ";
const NAME_WIDTH: usize = 8;
const NUMBER_WIDTH: usize = 12;

/// Shortest representation of `v` that fits in 12 characters.
///
/// Values that do not fit exactly are rounded to the most significant
/// digits that do. Formatting is idempotent on its own output: parsing the
/// result and formatting again gives the same string.
pub fn format_number(v: f64) -> String {
    let fits = |s: &String| s.len() <= NUMBER_WIDTH;
    let plain = format!("{v}");
    if fits(&plain) {
        return plain;
    }
    let sci = format!("{v:e}");
    if fits(&sci) {
        return sci;
    }
    for digits in (1..=17).rev() {
        let rounded: f64 = format!("{:.*e}", digits - 1, v).parse().expect("formatted float parses");
        let plain = format!("{rounded}");
        if fits(&plain) {
            return plain;
        }
        let sci = format!("{rounded:e}");
        if fits(&sci) {
            return sci;
        }
    }
    unreachable!("one significant digit always fits in 12 characters")
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.len() <= NAME_WIDTH && name.is_ascii() && !name.contains(char::is_whitespace)
}

fn names<'a>(given: impl Iterator<Item = &'a str>, prefix: char, count: usize) -> Vec<String> {
    let given: Vec<&str> = given.collect();
    let mut seen = std::collections::HashSet::new();
    let ok = given.iter().all(|n| valid_name(n) && *n != OBJ && seen.insert(*n));
    if ok {
        given.into_iter().map(str::to_owned).collect()
    } else {
        (0..count).map(|i| format!("{prefix}{:07}", i + 1)).collect()
    }
}

fn data_line(out: &mut String, kind: &str, a: &str, b: &str, v: f64) {
    let line = format!(" {kind:<2} {a:<8}  {b:<8}  {:>12}", format_number(v));
    out.push_str(line.trim_end());
    out.push('\n');
}

/// Render `problem` as fixed-format MPS. Generic names (`C0000001`,
/// `R0000001`) replace the originals if any is too long or duplicated.
pub fn write_mps(problem: &LpProblem) -> String {
    let col_names = names(problem.columns.iter().map(|c| c.name.as_str()), 'C', problem.n_cols());
    let row_names = names(problem.rows.iter().map(|r| r.name.as_str()), 'R', problem.n_rows());
    let mut out = String::new();
    let title = if valid_name(&problem.name) { problem.name.as_str() } else { "PROBLEM" };
    let _ = writeln!(out, "NAME          {title}");

    out.push_str("ROWS\n");
    let _ = writeln!(out, " N  {OBJ}");
    let mut ranges = Vec::new();
    let mut rhs = Vec::new();
    for (row, name) in problem.rows.iter().zip(&row_names) {
        let (kind, value, range) = match (row.lo.is_finite(), row.hi.is_finite()) {
            (false, false) => ("N", None, None),
            (false, true) => ("L", Some(row.hi), None),
            (true, false) => ("G", Some(row.lo), None),
            (true, true) if row.lo == row.hi => ("E", Some(row.lo), None),
            (true, true) => ("G", Some(row.lo), Some(row.hi - row.lo)),
        };
        let _ = writeln!(out, " {kind:<2} {name}");
        if let Some(v) = value {
            if v != 0.0 {
                rhs.push((name, v));
            }
        }
        if let Some(r) = range {
            ranges.push((name, r));
        }
    }

    let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); problem.n_cols()];
    for (i, row) in problem.rows.iter().enumerate() {
        for &(j, a) in &row.coeffs {
            by_col[j].push((i, a));
        }
    }
    out.push_str("COLUMNS\n");
    let mut in_int = false;
    let mut marker = 0;
    for (j, col) in problem.columns.iter().enumerate() {
        if col.integer != in_int {
            marker += 1;
            let tag = if col.integer { "'INTORG'" } else { "'INTEND'" };
            let _ = writeln!(out, "    M{marker:07}  'MARKER'                 {tag}");
            in_int = col.integer;
        }
        let name = &col_names[j];
        let mut wrote = false;
        if col.cost != 0.0 {
            data_line(&mut out, "", name, OBJ, col.cost);
            wrote = true;
        }
        for &(i, a) in &by_col[j] {
            data_line(&mut out, "", name, &row_names[i], a);
            wrote = true;
        }
        if !wrote {
            data_line(&mut out, "", name, OBJ, 0.0);
        }
    }
    if in_int {
        marker += 1;
        let _ = writeln!(out, "    M{marker:07}  'MARKER'                 'INTEND'");
    }

    out.push_str("RHS\n");
    for (name, v) in rhs {
        data_line(&mut out, "", "RHS", name, v);
    }
    if !ranges.is_empty() {
        out.push_str("RANGES\n");
        for (name, v) in ranges {
            data_line(&mut out, "", "RNG", name, v);
        }
    }

    out.push_str("BOUNDS\n");
    for (col, name) in problem.columns.iter().zip(&col_names) {
        let (lo, hi) = (col.lo, col.hi);
        if lo == hi {
            data_line(&mut out, "FX", "BND", name, lo);
            continue;
        }
        match (lo.is_finite(), hi.is_finite()) {
            (false, false) => {
                let line = format!(" FR BND       {name}");
                out.push_str(&line);
                out.push('\n');
                continue;
            }
            (false, true) => {
                let line = format!(" MI BND       {name}");
                out.push_str(&line);
                out.push('\n');
            }
            (true, _) if lo != 0.0 => data_line(&mut out, "LO", "BND", name, lo),
            _ => {}
        }
        if hi.is_finite() {
            data_line(&mut out, "UP", "BND", name, hi);
        }
    }
    out.push_str("ENDATA\n");
    out
}

fn mps_err(line: usize, message: impl Into<String>) -> Error {
    Error::Mps { line, message: message.into() }
}

fn number(line: usize, s: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|_| mps_err(line, format!("bad number `{s}`")))
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Start,
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
    End,
}

/// Parse an MPS document. Only the first `N` row is treated as the objective;
/// later `N` rows become free rows.
pub fn parse_mps(text: &str) -> Result<LpProblem> {
    let mut problem = LpProblem::new("");
    let mut section = Section::Start;
    let mut obj_name: Option<String> = None;
    let mut row_index = std::collections::HashMap::new();
    let mut row_kind: Vec<char> = Vec::new();
    let mut col_index = std::collections::HashMap::new();
    let mut entries: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut range: Vec<Option<f64>> = Vec::new();
    let mut integer = false;

    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') {
            section = match fields[0] {
                "NAME" => {
                    problem.name = fields.get(1).copied().unwrap_or("").to_owned();
                    Section::Start
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "RANGES" => Section::Ranges,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::End,
                other => return Err(mps_err(ln, format!("unknown section `{other}`"))),
            };
            continue;
        }
        match section {
            Section::Rows => {
                let [kind, name] = fields[..] else {
                    return Err(mps_err(ln, "ROWS entry needs a type and a name"));
                };
                let kind = kind.chars().next().unwrap_or(' ').to_ascii_uppercase();
                if kind == 'N' && obj_name.is_none() {
                    obj_name = Some(name.to_owned());
                    continue;
                }
                if !matches!(kind, 'N' | 'L' | 'G' | 'E') {
                    return Err(mps_err(ln, format!("unknown row type `{kind}`")));
                }
                row_index.insert(name.to_owned(), problem.rows.len());
                problem.rows.push(Row { name: name.to_owned(), lo: 0.0, hi: 0.0, coeffs: Vec::new() });
                row_kind.push(kind);
                rhs.push(0.0);
                range.push(None);
            }
            Section::Columns => {
                if fields.len() >= 3 && fields[1] == "'MARKER'" {
                    integer = match fields[2] {
                        "'INTORG'" => true,
                        "'INTEND'" => false,
                        other => return Err(mps_err(ln, format!("unknown marker `{other}`"))),
                    };
                    continue;
                }
                if fields.len() != 3 && fields.len() != 5 {
                    return Err(mps_err(ln, "COLUMNS entry needs 3 or 5 fields"));
                }
                let name = fields[0];
                let j = *col_index.entry(name.to_owned()).or_insert_with(|| {
                    problem.columns.push(Column {
                        name: name.to_owned(),
                        lo: 0.0,
                        hi: f64::INFINITY,
                        cost: 0.0,
                        integer,
                    });
                    entries.push(Vec::new());
                    problem.columns.len() - 1
                });
                for pair in fields[1..].chunks(2) {
                    let v = number(ln, pair[1])?;
                    if Some(pair[0]) == obj_name.as_deref() {
                        problem.columns[j].cost = v;
                    } else {
                        let i = *row_index
                            .get(pair[0])
                            .ok_or_else(|| mps_err(ln, format!("unknown row `{}`", pair[0])))?;
                        if v != 0.0 {
                            entries[j].push((i, v));
                        }
                    }
                }
            }
            Section::Rhs | Section::Ranges => {
                let pairs = match fields.len() {
                    3 | 5 => &fields[1..],
                    2 | 4 => &fields[..],
                    _ => return Err(mps_err(ln, "RHS/RANGES entry has the wrong number of fields")),
                };
                for pair in pairs.chunks(2) {
                    let v = number(ln, pair[1])?;
                    if Some(pair[0]) == obj_name.as_deref() {
                        continue;
                    }
                    let i = *row_index
                        .get(pair[0])
                        .ok_or_else(|| mps_err(ln, format!("unknown row `{}`", pair[0])))?;
                    if section == Section::Rhs {
                        rhs[i] = v;
                    } else {
                        range[i] = Some(v);
                    }
                }
            }
            Section::Bounds => {
                if fields.len() < 3 {
                    return Err(mps_err(ln, "BOUNDS entry too short"));
                }
                let kind = fields[0];
                let name = fields[2];
                let j = *col_index.get(name).ok_or_else(|| mps_err(ln, format!("unknown column `{name}`")))?;
                let value = match kind {
                    "FR" | "MI" | "PL" | "BV" => None,
                    _ => Some(number(ln, fields.get(3).ok_or_else(|| mps_err(ln, "bound needs a value"))?)?),
                };
                let col = &mut problem.columns[j];
                match (kind, value) {
                    ("UP", Some(v)) => col.hi = v,
                    ("LO", Some(v)) => col.lo = v,
                    ("FX", Some(v)) => {
                        col.lo = v;
                        col.hi = v;
                    }
                    ("FR", _) => {
                        col.lo = f64::NEG_INFINITY;
                        col.hi = f64::INFINITY;
                    }
                    ("MI", _) => col.lo = f64::NEG_INFINITY,
                    ("PL", _) => col.hi = f64::INFINITY,
                    ("BV", _) => {
                        col.lo = 0.0;
                        col.hi = 1.0;
                        col.integer = true;
                    }
                    ("LI", Some(v)) => {
                        col.lo = v;
                        col.integer = true;
                    }
                    ("UI", Some(v)) => {
                        col.hi = v;
                        col.integer = true;
                    }
                    _ => return Err(mps_err(ln, format!("unknown bound type `{kind}`"))),
                }
            }
            Section::Start | Section::End => return Err(mps_err(ln, "data outside of a section")),
        }
    }
    if section != Section::End {
        return Err(mps_err(text.lines().count(), "missing ENDATA"));
    }

    for (i, row) in problem.rows.iter_mut().enumerate() {
        let b = rhs[i];
        let (lo, hi) = match row_kind[i] {
            'N' => (f64::NEG_INFINITY, f64::INFINITY),
            'L' => (range[i].map_or(f64::NEG_INFINITY, |r| b - r.abs()), b),
            'G' => (b, range[i].map_or(f64::INFINITY, |r| b + r.abs())),
            _ => match range[i] {
                Some(r) if r > 0.0 => (b, b + r),
                Some(r) => (b + r, b),
                None => (b, b),
            },
        };
        row.lo = lo;
        row.hi = hi;
    }
    for (j, list) in entries.into_iter().enumerate() {
        for (i, a) in list {
            problem.rows[i].coeffs.push((j, a));
        }
    }
    for row in &mut problem.rows {
        row.coeffs.sort_by_key(|&(j, _)| j);
    }
    Ok(problem)
}
