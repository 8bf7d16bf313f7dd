//! Table files: the `LOOPTAB v1` text format and its JSON equivalent.
//!
//! Text: `#` comment lines, then the order `n`, then `n` rows of `n`
//! whitespace-separated entries. JSON: `{"n": .., "table": [[..]], "name": ..}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{LoopError, Result};
use crate::table::LoopTable;

#[derive(Serialize, Deserialize)]
struct JsonTable {
    n: usize,
    table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> LoopError {
    LoopError::Parse { line, msg: msg.into() }
}

/// Parses either format; JSON is recognised by a leading `{`.
pub fn parse_table(text: &str) -> Result<LoopTable> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

pub fn parse_text(text: &str) -> Result<LoopTable> {
    let mut name = None;
    let mut n: Option<(usize, usize)> = None;
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if let Some(c) = line.strip_prefix('#') {
            if let Some(v) = c.trim().strip_prefix("name:") {
                name = Some(v.trim().to_string());
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        last = line_no;
        let Some((order, _)) = n else {
            let v: usize = line
                .parse()
                .map_err(|_| parse_err(line_no, format!("expected the order, found '{line}'")))?;
            if v == 0 || v > crate::table::MAX_ORDER {
                return Err(parse_err(line_no, format!("order {v} outside 1..=255")));
            }
            n = Some((v, line_no));
            continue;
        };
        if rows.len() == order {
            return Err(parse_err(line_no, "more rows than the declared order"));
        }
        let row = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| parse_err(line_no, format!("'{t}' is not a nonnegative integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != order {
            return Err(parse_err(line_no, format!("row has {} entries, expected {order}", row.len())));
        }
        if let Some(&bad) = row.iter().find(|&&v| v >= order) {
            return Err(parse_err(line_no, format!("entry {bad} out of range 0..{order}")));
        }
        rows.push(row);
    }
    let Some((order, decl)) = n else {
        return Err(parse_err(last.max(1), "missing order line"));
    };
    if rows.len() != order {
        return Err(parse_err(last.max(decl), format!("found {} rows, expected {order}", rows.len())));
    }
    let q = LoopTable::from_rows(&rows).map_err(|e| parse_err(decl, e.to_string()))?;
    Ok(match name {
        Some(s) => q.with_name(s),
        None => q,
    })
}

pub fn parse_json(text: &str) -> Result<LoopTable> {
    let j: JsonTable = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    if j.table.len() != j.n {
        return Err(parse_err(1, format!("table has {} rows, n is {}", j.table.len(), j.n)));
    }
    let q = LoopTable::from_rows(&j.table).map_err(|e| parse_err(1, e.to_string()))?;
    Ok(match j.name {
        Some(s) => q.with_name(s),
        None => q,
    })
}

pub fn to_text(q: &LoopTable) -> String {
    let mut out = String::from("# LOOPTAB v1\n");
    if let Some(name) = q.name() {
        out.push_str(&format!("# name: {name}\n"));
    }
    out.push_str(&format!("{}\n", q.order()));
    for row in q.rows() {
        let cells: Vec<String> = row.iter().map(usize::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn to_json(q: &LoopTable) -> String {
    let j = JsonTable {
        n: q.order(),
        table: q.rows(),
        name: q.name().map(str::to_string),
    };
    let mut s = serde_json::to_string(&j).expect("table serializes");
    s.push('\n');
    s
}

pub fn read_table(path: &Path) -> Result<LoopTable> {
    let text = fs::read_to_string(path).map_err(|e| parse_err(0, format!("{}: {e}", path.display())))?;
    parse_table(&text)
}

/// Writes JSON when the extension is `.json`, text otherwise.
pub fn write_table(path: &Path, q: &LoopTable) -> std::io::Result<()> {
    let body = if path.extension().is_some_and(|e| e == "json") {
        to_json(q)
    } else {
        to_text(q)
    };
    fs::write(path, body)
}
