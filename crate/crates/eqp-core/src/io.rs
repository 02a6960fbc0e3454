//! Counts file formats.
//!
//! CSV (frozen, bit-exact): header row `,H,V,D,A,R,L`, then six rows labeled
//! likewise; UTF-8, LF line endings, `.` as the decimal point. JSON: an
//! object with `"counts"` holding a 6×6 array, plus an optional
//! `"label_order"` permutation of the six labels.

use nalgebra::Matrix6;

use crate::error::{Error, Result};
use crate::pauli::OutcomeLabel;
use crate::tomography::CoincidenceMatrix;

const LABELS: [&str; 6] = ["H", "V", "D", "A", "R", "L"];

/// Renders the frozen CSV representation.
pub fn write_counts_csv(counts: &CoincidenceMatrix) -> String {
    let mut out = String::new();
    out.push(',');
    out.push_str(&LABELS.join(","));
    out.push('\n');
    for (i, label) in LABELS.iter().enumerate() {
        out.push_str(label);
        for j in 0..6 {
            out.push(',');
            let v = counts.matrix()[(i, j)];
            // Integer-valued counts print without a trailing ".0".
            if v.fract() == 0.0 && v.abs() < 1e15 {
                out.push_str(&format!("{}", v as i64));
            } else {
                out.push_str(&format!("{v}"));
            }
        }
        out.push('\n');
    }
    out
}

/// Parses the CSV format, accepting rows in any labeled order.
pub fn parse_counts_csv(text: &str) -> Result<CoincidenceMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::ParseCounts("empty file".into()))?;
    let cols = parse_label_row(header)?;

    let mut m = Matrix6::<f64>::zeros();
    let mut seen = [false; 6];
    for line in lines {
        let mut fields = line.split(',');
        let row_label = fields.next().unwrap_or("").trim();
        let row = OutcomeLabel::parse(row_label)
            .ok_or_else(|| Error::ParseCounts(format!("unknown row label {row_label:?}")))?;
        if seen[row.index()] {
            return Err(Error::ParseCounts(format!("duplicate row {row_label}")));
        }
        seen[row.index()] = true;
        let values: Vec<&str> = fields.collect();
        if values.len() != 6 {
            return Err(Error::ParseCounts(format!(
                "row {row_label} has {} values, expected 6",
                values.len()
            )));
        }
        for (k, v) in values.iter().enumerate() {
            let parsed: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::ParseCounts(format!("bad number {v:?} in row {row_label}")))?;
            m[(row.index(), cols[k].index())] = parsed;
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::ParseCounts(format!(
            "missing row {}",
            LABELS[missing]
        )));
    }
    CoincidenceMatrix::new(m).map_err(|_| Error::ParseCounts("negative or non-finite count".into()))
}

fn parse_label_row(header: &str) -> Result<[OutcomeLabel; 6]> {
    let fields: Vec<&str> = header.split(',').collect();
    if fields.len() != 7 || !fields[0].trim().is_empty() {
        return Err(Error::ParseCounts(
            "header must be `,H,V,D,A,R,L` (any label order)".into(),
        ));
    }
    let mut out = [OutcomeLabel::H; 6];
    let mut seen = [false; 6];
    for (k, f) in fields[1..].iter().enumerate() {
        let label = OutcomeLabel::parse(f)
            .ok_or_else(|| Error::ParseCounts(format!("unknown column label {f:?}")))?;
        if seen[label.index()] {
            return Err(Error::ParseCounts(format!("duplicate column {f}")));
        }
        seen[label.index()] = true;
        out[k] = label;
    }
    Ok(out)
}

/// Renders the JSON representation (canonical label order).
pub fn write_counts_json(counts: &CoincidenceMatrix) -> String {
    let rows: Vec<Vec<f64>> = (0..6)
        .map(|i| (0..6).map(|j| counts.matrix()[(i, j)]).collect())
        .collect();
    let doc = serde_json::json!({
        "label_order": LABELS,
        "counts": rows,
    });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

/// Parses the JSON representation. `label_order`, when present, must be a
/// permutation of the six labels and reorders both rows and columns.
pub fn parse_counts_json(text: &str) -> Result<CoincidenceMatrix> {
    let doc: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::ParseCounts(format!("invalid JSON: {e}")))?;
    let order: Vec<OutcomeLabel> = match doc.get("label_order") {
        None => OutcomeLabel::ALL.to_vec(),
        Some(arr) => {
            let labels: Vec<OutcomeLabel> = arr
                .as_array()
                .ok_or_else(|| Error::ParseCounts("label_order must be an array".into()))?
                .iter()
                .map(|v| {
                    v.as_str()
                        .and_then(OutcomeLabel::parse)
                        .ok_or_else(|| Error::ParseCounts(format!("bad label {v}")))
                })
                .collect::<Result<_>>()?;
            let mut seen = [false; 6];
            for l in &labels {
                seen[l.index()] = true;
            }
            if labels.len() != 6 || seen.iter().any(|s| !s) {
                return Err(Error::ParseCounts(
                    "label_order must be a permutation of H,V,D,A,R,L".into(),
                ));
            }
            labels
        }
    };
    let rows = doc
        .get("counts")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::ParseCounts("missing \"counts\" array".into()))?;
    if rows.len() != 6 {
        return Err(Error::ParseCounts(format!(
            "counts has {} rows, expected 6",
            rows.len()
        )));
    }
    let mut m = Matrix6::<f64>::zeros();
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::ParseCounts(format!("row {i} is not an array")))?;
        if row.len() != 6 {
            return Err(Error::ParseCounts(format!(
                "row {i} has {} values, expected 6",
                row.len()
            )));
        }
        for (j, v) in row.iter().enumerate() {
            let x = v
                .as_f64()
                .ok_or_else(|| Error::ParseCounts(format!("bad number at ({i},{j})")))?;
            m[(order[i].index(), order[j].index())] = x;
        }
    }
    CoincidenceMatrix::new(m).map_err(|_| Error::ParseCounts("negative or non-finite count".into()))
}

/// Reads a counts file, dispatching on the extension (`.json` vs CSV).
pub fn read_counts_file(path: &std::path::Path) -> Result<CoincidenceMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::ParseCounts(format!("cannot read {}: {e}", path.display())))?;
    if path.extension().and_then(|e| e.to_str()) == Some("json") {
        parse_counts_json(&text)
    } else {
        parse_counts_csv(&text)
    }
}
