//! Tabular and key-value reports, rendered as CSV or JSON.

use std::io::Write;

use anyhow::{Context, Result};
use serde_json::{Map, Value};

/// Significant digits of every float written to CSV.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// The fixed header of phase-study tables.
pub const PHASE_COLUMNS: [&str; 8] = [
    "param",
    "baseline_qoi",
    "true_qoi",
    "xi_lower",
    "xi_upper",
    "lin_lower",
    "lin_upper",
    "re_rate",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Named scalar results in a fixed order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    pub fields: Vec<(String, f64)>,
}

impl Record {
    pub fn push(&mut self, name: impl Into<String>, value: f64) {
        self.fields.push((name.into(), value));
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.fields.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Table(Table),
    Record(Record),
}

/// `%.12g`: 12 significant digits, trailing zeros trimmed, exponent form
/// outside `[1e-5, 1e12)`. Zero of either sign prints as `0`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent form");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if exponent < -5 || exponent >= SIGNIFICANT_DIGITS as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exponent.abs())
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn parse_float(s: &str) -> Result<f64> {
    match s {
        "nan" => Ok(f64::NAN),
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s.parse().with_context(|| format!("not a number: {s:?}")),
    }
}

impl Report {
    pub fn write(&self, format: OutputFormat, out: impl Write) -> Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(out),
            OutputFormat::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        match self {
            Report::Table(t) => {
                w.write_record(&t.columns)?;
                for row in &t.rows {
                    w.write_record(row.iter().map(|v| format_float(*v)))?;
                }
            }
            Report::Record(r) => {
                w.write_record(["quantity", "value"])?;
                for (k, v) in &r.fields {
                    w.write_record([k.clone(), format_float(*v)])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    fn write_json(&self, mut out: impl Write) -> Result<()> {
        let number = |v: f64| serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number);
        let value = match self {
            Report::Table(t) => Value::Array(
                t.rows
                    .iter()
                    .map(|row| {
                        Value::Object(
                            t.columns
                                .iter()
                                .zip(row)
                                .map(|(k, v)| (k.clone(), number(*v)))
                                .collect::<Map<_, _>>(),
                        )
                    })
                    .collect(),
            ),
            Report::Record(r) => Value::Object(
                r.fields
                    .iter()
                    .map(|(k, v)| (k.clone(), number(*v)))
                    .collect::<Map<_, _>>(),
            ),
        };
        serde_json::to_writer_pretty(&mut out, &value)?;
        writeln!(out)?;
        Ok(())
    }
}

/// Reads a CSV table written by [`Report::write`].
pub fn read_table(input: impl std::io::Read) -> Result<Table> {
    let mut r = csv::Reader::from_reader(input);
    let columns = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .map(parse_float)
            .collect::<Result<Vec<_>>>()
            .with_context(|| format!("row {}", i + 2))?;
        rows.push(row);
    }
    Ok(Table { columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(0.1 + 0.2), "0.3");
        assert_eq!(format_float(-1.5), "-1.5");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(123456.789), "123456.789");
        assert_eq!(format_float(1e-7), "1e-07");
        assert_eq!(format_float(2.5e15), "2.5e+15");
        assert_eq!(format_float(f64::NAN), "nan");
        assert_eq!(format_float(999999999999.5), "1e+12");
    }

    #[test]
    fn csv_round_trip() {
        let t = Table {
            columns: PHASE_COLUMNS.iter().map(|s| s.to_string()).collect(),
            rows: vec![vec![0.1, -0.25, 1.0 / 7.0, f64::NAN, 3e-9, 1.0, 2.0, 0.0]],
        };
        let mut buf = Vec::new();
        Report::Table(t).write(OutputFormat::Csv, &mut buf).unwrap();
        let back = read_table(&buf[..]).unwrap();
        let mut again = Vec::new();
        Report::Table(back)
            .write(OutputFormat::Csv, &mut again)
            .unwrap();
        assert_eq!(buf, again);
    }

    proptest::proptest! {
        #[test]
        fn emitted_values_round_trip_at_twelve_digits(
            rows in proptest::collection::vec(proptest::collection::vec(proptest::num::f64::ANY, 8), 1..8)
        ) {
            let t = Table {
                columns: PHASE_COLUMNS.iter().map(|s| s.to_string()).collect(),
                rows,
            };
            let mut buf = Vec::new();
            Report::Table(t.clone()).write(OutputFormat::Csv, &mut buf).unwrap();
            let back = read_table(&buf[..]).unwrap();
            for (a, b) in t.rows.iter().flatten().zip(back.rows.iter().flatten()) {
                let expected = parse_float(&format_float(*a)).unwrap();
                proptest::prop_assert!(
                    expected.to_bits() == b.to_bits() || (expected.is_nan() && b.is_nan()),
                    "{a} -> {b}"
                );
            }
        }
    }
}
