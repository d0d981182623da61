//! CSV and JSON writers for sweep rows. CSV follows RFC 4180: CRLF line
//! endings, UTF-8, '.' decimal separator; numbers are printed with 17
//! significant digits so parsing recovers every f64 bit-exactly.

use crate::config::SweepSpec;
use crate::sweep::{param_columns, SweepRow};
use std::io::Write;

/// 17 significant digits: enough for exact f64 round trips.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\r') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn flags_cell(row: &SweepRow) -> String {
    row.flags
        .iter()
        .map(|f| format!("{}={:.3e}", f.name, f.magnitude))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn emit_csv(spec: &SweepSpec, rows: &[SweepRow], w: &mut dyn Write) -> std::io::Result<()> {
    let mut header: Vec<String> = param_columns(spec)
        .iter()
        .map(|p| p.as_str().to_string())
        .collect();
    header.extend(spec.outputs.iter().map(|m| m.name()));
    header.push("flags".into());
    header.push("error".into());
    write!(w, "{}\r\n", header.join(","))?;
    for row in rows {
        let mut cells: Vec<String> = row.params.iter().map(|&(_, v)| format_f64(v)).collect();
        for v in &row.values {
            cells.push(v.map(format_f64).unwrap_or_default());
        }
        cells.push(csv_escape(&flags_cell(row)));
        cells.push(csv_escape(row.error.as_deref().unwrap_or("")));
        write!(w, "{}\r\n", cells.join(","))?;
    }
    Ok(())
}

pub fn emit_json(spec: &SweepSpec, rows: &[SweepRow], w: &mut dyn Write) -> std::io::Result<()> {
    let mut array = Vec::with_capacity(rows.len());
    for row in rows {
        let mut obj = serde_json::Map::new();
        for &(p, v) in &row.params {
            obj.insert(p.as_str().to_string(), serde_json::json!(v));
        }
        for (m, v) in spec.outputs.iter().zip(&row.values) {
            let value = match v {
                Some(x) => serde_json::json!(x),
                None => serde_json::Value::Null,
            };
            obj.insert(m.name(), value);
        }
        obj.insert("flags".into(), serde_json::json!(flags_cell(row)));
        obj.insert(
            "error".into(),
            serde_json::json!(row.error.as_deref().unwrap_or("")),
        );
        array.push(serde_json::Value::Object(obj));
    }
    serde_json::to_writer_pretty(&mut *w, &serde_json::Value::Array(array))?;
    writeln!(w)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trip_is_exact() {
        for v in [
            0.1,
            -3.0,
            std::f64::consts::PI,
            1.0 / 3.0,
            6.02e23,
            5e-324,
            0.0,
        ] {
            let s = format_f64(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "round trip failed for {s}");
        }
    }

    #[test]
    fn csv_escaping() {
        assert_eq!(csv_escape("plain"), "plain");
        assert_eq!(csv_escape("a,b"), "\"a,b\"");
        assert_eq!(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
