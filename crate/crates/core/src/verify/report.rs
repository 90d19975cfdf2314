use std::fmt::Write as _;

use num_complex::Complex64;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::qarith::CertifiedValue;

/// JSON number with 17 significant digits; non-finite values become `null`.
pub(crate) fn json_number(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

/// Text rendering with 17 significant digits.
pub fn fmt_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) struct Num(pub(crate) f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        json_number(self.0).serialize(s)
    }
}

struct Cx(Complex64);

impl Serialize for Cx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Complex", 2)?;
        st.serialize_field("re", &Num(self.0.re))?;
        st.serialize_field("im", &Num(self.0.im))?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    Complex(Complex64),
    Text(String),
}

impl std::fmt::Display for ParamValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Real(v) => write!(f, "{v}"),
            ParamValue::Complex(z) => {
                if z.im >= 0.0 {
                    write!(f, "{}+{}i", z.re, z.im)
                } else {
                    write!(f, "{}{}i", z.re, z.im)
                }
            }
            ParamValue::Text(t) => f.write_str(t),
        }
    }
}

/// Named parameters of a verification point, kept in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params(Vec<(String, ParamValue)>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn int(mut self, name: &str, v: i64) -> Self {
        self.0.push((name.to_string(), ParamValue::Int(v)));
        self
    }

    pub fn real(mut self, name: &str, v: f64) -> Self {
        self.0.push((name.to_string(), ParamValue::Real(v)));
        self
    }

    pub fn complex(mut self, name: &str, v: Complex64) -> Self {
        self.0.push((name.to_string(), ParamValue::Complex(v)));
        self
    }

    pub fn text(mut self, name: &str, v: &str) -> Self {
        self.0
            .push((name.to_string(), ParamValue::Text(v.to_string())));
        self
    }

    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.0.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ParamValue)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// `name=value` pairs joined by `sep`.
    pub fn joined(&self, sep: &str) -> String {
        self.0
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            match v {
                ParamValue::Int(i) => map.serialize_entry(k, i)?,
                ParamValue::Real(x) => map.serialize_entry(k, &Num(*x))?,
                ParamValue::Complex(z) => map.serialize_entry(k, &Cx(*z))?,
                ParamValue::Text(t) => map.serialize_entry(k, t)?,
            }
        }
        map.end()
    }
}

/// One coefficient or term of a tabulated side.
#[derive(Debug, Clone, PartialEq)]
pub struct TableEntry {
    pub key: Vec<u32>,
    pub value: Complex64,
    pub bound: f64,
}

impl Serialize for TableEntry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TableEntry", 3)?;
        st.serialize_field("key", &self.key)?;
        if self.value.im == 0.0 {
            st.serialize_field("value", &Num(self.value.re))?;
        } else {
            st.serialize_field("value", &Cx(self.value))?;
        }
        st.serialize_field("bound", &Num(self.bound))?;
        st.end()
    }
}

/// Either side of an identity: a certified scalar or a coefficient table.
#[derive(Debug, Clone, PartialEq)]
pub enum Side {
    Real(CertifiedValue<f64>),
    Complex(CertifiedValue<Complex64>),
    Table(Vec<TableEntry>),
}

impl Serialize for Side {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Side::Real(v) => {
                let mut st = s.serialize_struct("Value", 3)?;
                st.serialize_field("value", &Num(v.value))?;
                st.serialize_field("tail_bound", &Num(v.tail_bound))?;
                st.serialize_field("terms_used", &v.terms_used)?;
                st.end()
            }
            Side::Complex(v) => {
                let mut st = s.serialize_struct("Value", 3)?;
                st.serialize_field("value", &Cx(v.value))?;
                st.serialize_field("tail_bound", &Num(v.tail_bound))?;
                st.serialize_field("terms_used", &v.terms_used)?;
                st.end()
            }
            Side::Table(rows) => {
                let mut st = s.serialize_struct("Table", 1)?;
                st.serialize_field("table", rows)?;
                st.end()
            }
        }
    }
}

/// Outcome of checking one identity at one parameter point.
///
/// `pass` holds exactly when `residual <= budget`; the budget is always
/// assembled from certified tail bounds plus a rounding allowance.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub identity: String,
    pub parameters: Params,
    pub lhs: Side,
    pub rhs: Side,
    pub residual: f64,
    pub budget: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn new(
        identity: &str,
        parameters: Params,
        lhs: Side,
        rhs: Side,
        residual: f64,
        budget: f64,
    ) -> Self {
        Self {
            identity: identity.to_string(),
            parameters,
            lhs,
            rhs,
            residual,
            budget,
            pass: residual <= budget,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// One TAP-style line: `ok 3 - sum N=4 r=2 q=0.5 residual=... budget=...`.
    pub fn to_tap(&self, number: usize) -> String {
        let mut line = String::new();
        let status = if self.pass { "ok" } else { "not ok" };
        let _ = write!(line, "{status} {number} - {}", self.identity);
        let params = self.parameters.joined(" ");
        if !params.is_empty() {
            let _ = write!(line, " {params}");
        }
        let _ = write!(
            line,
            " residual={} budget={}",
            fmt_sig17(self.residual),
            fmt_sig17(self.budget)
        );
        line
    }

    pub const CSV_HEADER: [&'static str; 5] =
        ["identity", "parameters", "residual", "budget", "pass"];

    pub fn csv_record(&self) -> [String; 5] {
        [
            self.identity.clone(),
            self.parameters.joined(";"),
            fmt_sig17(self.residual),
            fmt_sig17(self.budget),
            self.pass.to_string(),
        ]
    }
}

impl Serialize for VerifyReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("VerifyReport", 8)?;
        st.serialize_field("identity_name", &self.identity)?;
        st.serialize_field("parameters", &self.parameters)?;
        st.serialize_field("lhs", &self.lhs)?;
        st.serialize_field("rhs", &self.rhs)?;
        st.serialize_field("residual", &Num(self.residual))?;
        st.serialize_field("budget", &Num(self.budget))?;
        st.serialize_field("pass", &self.pass)?;
        st.serialize_field("notes", &self.notes)?;
        st.end()
    }
}
