//! Rendering of tables and report streams as text, CSV or JSON.

use std::fmt::Write as _;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::verify::{fmt_sig17, VerifyReport};

use super::{summary_line, Format};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    pub(crate) fn text(s: &str) -> Self {
        Cell::Text(s.to_string())
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => fmt_sig17(*v),
            Cell::Text(t) => t.clone(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Int(v) => v.serialize(s),
            Cell::Num(v) => crate::verify::report_number(*v).serialize(s),
            Cell::Text(t) => t.serialize(s),
        }
    }
}

struct Row<'a> {
    header: &'a [String],
    cells: &'a [Cell],
}

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.cells.len()))?;
        for (k, v) in self.header.iter().zip(self.cells) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub(crate) fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub(crate) fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let rows: Vec<Row<'_>> = self
                    .rows
                    .iter()
                    .map(|cells| Row {
                        header: &self.header,
                        cells,
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&rows)
                    .map_err(|e| Error::InvalidArgument(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
                w.write_record(&self.header).map_err(io)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::render)).map_err(io)?;
                }
                let bytes = w
                    .into_inner()
                    .map_err(|e| Error::InvalidArgument(e.to_string()))?;
                Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
            }
            Format::Text => {
                let cells: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| r.iter().map(Cell::render).collect())
                    .collect();
                let widths: Vec<usize> = (0..self.header.len())
                    .map(|i| {
                        cells
                            .iter()
                            .map(|r| r[i].len())
                            .chain(std::iter::once(self.header[i].len()))
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let mut out = String::new();
                let mut line = |parts: &[String]| {
                    let joined: Vec<String> = parts
                        .iter()
                        .zip(&widths)
                        .map(|(p, w)| format!("{p:<w$}"))
                        .collect();
                    let _ = writeln!(out, "{}", joined.join("  ").trim_end());
                };
                line(&self.header);
                for r in &cells {
                    line(r);
                }
                Ok(out)
            }
        }
    }
}

pub(crate) fn render_reports(reports: &[VerifyReport], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(reports)
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
            w.write_record(VerifyReport::CSV_HEADER).map_err(io)?;
            for r in reports {
                w.write_record(r.csv_record()).map_err(io)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Text => {
            let mut out = format!("1..{}\n", reports.len());
            for (i, r) in reports.iter().enumerate() {
                out.push_str(&r.to_tap(i + 1));
                out.push('\n');
            }
            out.push_str(&summary_line(reports));
            out.push('\n');
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["q", "index", "value"]);
        t.push(vec![Cell::Num(0.5), Cell::text("[2,1]"), Cell::Num(0.25)]);
        t
    }

    #[test]
    fn csv_has_header() {
        let s = sample().render(Format::Csv).unwrap();
        assert_eq!(
            s,
            "q,index,value\n5.0000000000000000e-1,\"[2,1]\",2.5000000000000000e-1\n"
        );
    }

    #[test]
    fn json_keeps_column_order() {
        let s = sample().render(Format::Json).unwrap();
        let q = s.find("\"q\"").unwrap();
        let idx = s.find("\"index\"").unwrap();
        assert!(q < idx);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v[0]["value"], 0.25);
    }

    #[test]
    fn text_is_aligned() {
        let s = sample().render(Format::Text).unwrap();
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines[0].find("index"), lines[1].find("[2,1]"));
    }
}
