//! Hand-written parsers for command-line literals.
//!
//! Index literals: `[3,1,1]`, `[3, 1*2]`, `[3,{1}^2]`, optionally prefixed by
//! `zeta` or `zeta*`. Complex literals: `0.5`, `-3i`, `i`, `0.5+0.5i`,
//! `1e-3-2.5i`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::indices::MultiIndex;

/// Longest index the parser accepts, after expanding repetitions.
pub const MAX_PARSED_DEPTH: usize = 64;

/// Largest single exponent the parser accepts.
pub const MAX_PARSED_PART: u32 = 1024;

/// An index literal together with its `zeta*` flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexLiteral {
    pub star: bool,
    pub index: MultiIndex,
}

impl IndexLiteral {
    pub fn label(&self) -> String {
        let prefix = if self.star { "zeta*" } else { "zeta" };
        format!("{prefix}{}", self.index)
    }
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_uint(text: &str, what: &str) -> Result<u32> {
    let t = text.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(format!(
            "expected a positive integer for {what}, got '{t}'"
        )));
    }
    t.parse::<u32>()
        .map_err(|_| parse_err(format!("{what} '{t}' is too large")))
}

pub fn parse_index_literal(text: &str) -> Result<IndexLiteral> {
    let t = text.trim();
    let (star, rest) = if let Some(r) = t.strip_prefix("zeta*") {
        (true, r)
    } else if let Some(r) = t.strip_prefix("zeta") {
        (false, r)
    } else {
        (false, t)
    };
    let body = rest
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| parse_err(format!("index literal must be bracketed: '{t}'")))?;
    if body.trim().is_empty() {
        return Err(parse_err("empty index"));
    }
    let mut parts = Vec::new();
    for item in body.split(',') {
        let item = item.trim();
        let (part, count) = if let Some(inner) = item.strip_prefix('{') {
            let (value, power) = inner
                .split_once("}^")
                .ok_or_else(|| parse_err(format!("malformed repetition '{item}'")))?;
            (parse_uint(value, "part")?, parse_uint(power, "repetition")?)
        } else if let Some((value, count)) = item.split_once('*') {
            (parse_uint(value, "part")?, parse_uint(count, "repetition")?)
        } else {
            (parse_uint(item, "part")?, 1)
        };
        if part == 0 {
            return Err(parse_err("index parts must be positive"));
        }
        if part > MAX_PARSED_PART {
            return Err(parse_err(format!("part {part} exceeds {MAX_PARSED_PART}")));
        }
        if parts.len() + count as usize > MAX_PARSED_DEPTH {
            return Err(parse_err(format!("index deeper than {MAX_PARSED_DEPTH}")));
        }
        parts.extend(std::iter::repeat_n(part, count as usize));
    }
    let index = MultiIndex::new(parts).map_err(|e| parse_err(e.to_string()))?;
    Ok(IndexLiteral { star, index })
}

fn parse_real(text: &str) -> Result<f64> {
    let t = text.trim();
    // f64::from_str also takes "inf" and "nan"; only plain decimals are wanted
    let plain = !t.is_empty()
        && t.bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+' | b'-'));
    let v: f64 = if plain { t.parse().ok() } else { None }
        .ok_or_else(|| parse_err(format!("not a number: '{t}'")))?;
    if !v.is_finite() {
        return Err(parse_err(format!("number out of range: '{t}'")));
    }
    Ok(v)
}

/// Imaginary coefficient: empty, `+` and `-` stand for `1`, `1`, `-1`.
fn parse_imag(text: &str) -> Result<f64> {
    match text.trim() {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        t => parse_real(t),
    }
}

pub fn parse_complex(text: &str) -> Result<Complex64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(parse_err("empty complex literal"));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(&t)?, 0.0));
    };
    // split at the last sign that is neither leading nor an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => Ok(Complex64::new(
            parse_real(&body[..i])?,
            parse_imag(&body[i..])?,
        )),
        None => Ok(Complex64::new(0.0, parse_imag(body)?)),
    }
}

/// Comma-separated list of `q` values, each in `(0, 1)`.
pub fn parse_q_list(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let q = parse_real(item)?;
        if !(q > 0.0 && q < 1.0) {
            return Err(parse_err(format!("q = {q} is outside (0, 1)")));
        }
        out.push(q);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parts(t: &str) -> Vec<u32> {
        parse_index_literal(t).unwrap().index.into_parts()
    }

    #[test]
    fn index_forms() {
        assert_eq!(parts("[3,1,1]"), vec![3, 1, 1]);
        assert_eq!(parts(" [ 3 , 1*2 ] "), vec![3, 1, 1]);
        assert_eq!(parts("[3,{1}^2]"), vec![3, 1, 1]);
        assert_eq!(parts("zeta[2]"), vec![2]);
        let lit = parse_index_literal("zeta*[1]").unwrap();
        assert!(lit.star);
        assert_eq!(lit.label(), "zeta*[1]");
        assert_eq!(parse_index_literal("[1,2]").unwrap().label(), "zeta[1,2]");
    }

    #[test]
    fn index_rejects() {
        for bad in [
            "",
            "[]",
            "[0]",
            "[2,]",
            "3,1",
            "[a]",
            "[-1]",
            "[2*0]",
            "zeta**[2]",
            "[1*65]",
            "[2000]",
            "[{1}2]",
        ] {
            assert!(
                matches!(parse_index_literal(bad), Err(Error::Parse(_))),
                "{bad} should not parse"
            );
        }
    }

    #[test]
    fn complex_forms() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex("-3i").unwrap(), c(0.0, -3.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("0.5+0.5i").unwrap(), c(0.5, 0.5));
        assert_eq!(parse_complex("-0.7 + 0.2i").unwrap(), c(-0.7, 0.2));
        assert_eq!(parse_complex("2-i").unwrap(), c(2.0, -1.0));
        assert_eq!(parse_complex("1e-3-2.5e+1i").unwrap(), c(1e-3, -25.0));
        assert_eq!(parse_complex("-2e-1").unwrap(), c(-0.2, 0.0));
    }

    #[test]
    fn complex_rejects() {
        for bad in ["", "ii", "1+", "nan", "inf", "1e999", "1+2j", "+-i", "x"] {
            assert!(parse_complex(bad).is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn q_lists() {
        assert_eq!(parse_q_list("0.2,0.5, 0.95").unwrap(), vec![0.2, 0.5, 0.95]);
        assert!(parse_q_list("0.5,1").is_err());
        assert!(parse_q_list("0").is_err());
        assert!(parse_q_list("").is_err());
        assert!(parse_q_list("0.5,,0.6").is_err());
    }

    proptest! {
        #[test]
        fn index_display_round_trips(p in prop::collection::vec(1u32..50, 1..10)) {
            let idx = MultiIndex::new(p.clone()).unwrap();
            let back = parse_index_literal(&idx.to_string()).unwrap();
            prop_assert_eq!(back.index.into_parts(), p);
        }

        #[test]
        fn complex_display_round_trips(re in -1e3f64..1e3, im in -1e3f64..1e3) {
            let z = Complex64::new(re, im);
            let text = if im >= 0.0 { format!("{re}+{im}i") } else { format!("{re}{im}i") };
            prop_assert_eq!(parse_complex(&text).unwrap(), z);
        }

        #[test]
        fn parsers_never_panic(s in "\\PC{0,24}") {
            let _ = parse_index_literal(&s);
            let _ = parse_complex(&s);
            let _ = parse_q_list(&s);
        }
    }
}
