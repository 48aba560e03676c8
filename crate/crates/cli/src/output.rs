use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

/// Shortest representation that parses back to the same double.
pub fn fmt_f64(v: f64) -> String {
    let mut buf = ryu::Buffer::new();
    buf.format(v).to_owned()
}

pub fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct Table<'a> {
    columns: &'a [&'a str],
    rows: &'a [Vec<f64>],
}

pub fn json_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut s = serde_json::to_string_pretty(&Table {
        columns: header,
        rows,
    })
    .expect("finite table serializes");
    s.push('\n');
    s
}

pub fn emit(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut stdout = io::stdout().lock();
            match stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
            {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                other => other,
            }
        }
    }
}
