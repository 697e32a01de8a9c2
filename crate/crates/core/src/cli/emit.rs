//! CSV and JSON output of homogeneous records.

use std::io::{self, Write};

use serde_json::{Map, Value};

use super::args::Format;

pub type Record = Map<String, Value>;

/// Builds a record with keys in the given order.
#[macro_export]
#[doc(hidden)]
macro_rules! record {
    ($($key:expr => $value:expr),* $(,)?) => {{
        let mut r = $crate::cli::emit::Record::new();
        $( r.insert($key.to_string(), serde_json::json!($value)); )*
        r
    }};
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => i.to_string(),
            (_, Some(u), _) => u.to_string(),
            (_, _, Some(f)) => format_float(f),
            _ => n.to_string(),
        },
        Value::String(s) => {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        }
        Value::Array(items) => items.iter().map(csv_cell).collect::<Vec<_>>().join(";"),
        Value::Object(_) => v.to_string(),
    }
}

/// 17 significant digits, enough to read back the identical double.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn write_csv<W: Write>(columns: &[&str], records: &[Record], mut w: W) -> io::Result<()> {
    writeln!(w, "{}", columns.join(","))?;
    for r in records {
        let row: Vec<String> = columns
            .iter()
            .map(|c| r.get(*c).map(csv_cell).unwrap_or_default())
            .collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_json<W: Write>(records: &[Record], mut w: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, records)?;
    writeln!(w)
}

pub fn emit<W: Write>(
    columns: &[&str],
    records: &[Record],
    format: Format,
    w: W,
) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(columns, records, w),
        Format::Json => write_json(records, w),
    }
}
