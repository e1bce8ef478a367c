//! Three-column CSV point files with an optional header row.

use super::{format_num, CliError, CliResult};

/// A parsed point file: data rows with their 1-based line numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFile {
    pub header: Option<Vec<String>>,
    pub rows: Vec<(usize, [f64; 3])>,
}

/// Parses CSV text with three numeric columns. The first record is taken as a
/// header when none of its fields is a number. Blank lines are ignored.
pub fn parse_points(text: &str) -> CliResult<PointFile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    // The reader's line counter ignores skipped blank lines and a record's
    // byte offset points before them, so step over those and count newlines.
    let bytes = text.as_bytes();
    let line_of = |pos: Option<&csv::Position>| {
        pos.map_or(0, |p| {
            let mut b = (p.byte() as usize).min(bytes.len());
            while b < bytes.len() {
                match bytes[b] {
                    b'\r' | b'\n' => b += 1,
                    b'#' => {
                        b += bytes[b..]
                            .iter()
                            .position(|&c| c == b'\n')
                            .map_or(bytes.len() - b, |k| k + 1)
                    }
                    _ => break,
                }
            }
            bytes[..b].iter().filter(|&&c| c == b'\n').count() + 1
        })
    };
    let mut header = None;
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Parse {
            line: line_of(e.position()),
            message: e.to_string(),
        })?;
        let line = line_of(rec.position());
        if i == 0 && rec.iter().all(|f| f.parse::<f64>().is_err()) {
            header = Some(rec.iter().map(str::to_string).collect());
            continue;
        }
        if rec.len() != 3 {
            return Err(CliError::Parse {
                line,
                message: format!("expected 3 fields, found {}", rec.len()),
            });
        }
        let mut p = [0.0; 3];
        for (slot, field) in p.iter_mut().zip(rec.iter()) {
            *slot = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Parse {
                    line,
                    message: format!("not a finite number: {field:?}"),
                })?;
        }
        rows.push((line, p));
    }
    if rows.is_empty() {
        return Err(CliError::invalid("point file contains no data rows"));
    }
    Ok(PointFile { header, rows })
}

/// Formats points as CSV, one `x,y,z` row each.
pub fn write_points(header: Option<&[&str]>, points: &[[f64; 3]]) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        out.push_str(&h.join(","));
        out.push('\n');
    }
    for p in points {
        out.push_str(&format!(
            "{},{},{}\n",
            format_num(p[0]),
            format_num(p[1]),
            format_num(p[2])
        ));
    }
    out
}
