//! Replays the checked-in fuzz seeds through the same assertions the fuzz
//! targets make, so the corpus is exercised on stable toolchains too.

use std::fs;
use std::path::PathBuf;

use qmzv::cli::parse::{parse_complex, parse_index_literal, parse_q_list};
use qmzv::stuffle::StuffleExpr;
use qmzv::QParam;

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let text = fs::read_to_string(&path).unwrap();
            (path, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn index_literal_seeds() {
    let mut ok = 0;
    for (_, text) in seeds("index_literal") {
        if let Ok(lit) = parse_index_literal(&text) {
            assert_eq!(parse_index_literal(&lit.label()).unwrap(), lit);
            ok += 1;
        }
    }
    assert!(ok >= 5);
}

#[test]
fn complex_literal_seeds() {
    for (path, text) in seeds("complex_literal") {
        if let Ok(z) = parse_complex(&text) {
            assert!(z.re.is_finite() && z.im.is_finite(), "{}", path.display());
        }
    }
}

#[test]
fn q_list_seeds() {
    for (_, text) in seeds("q_list") {
        if let Ok(qs) = parse_q_list(&text) {
            assert!(!qs.is_empty());
            for q in qs {
                QParam::with_tol(q, 1e-10).unwrap();
            }
        }
    }
}

#[test]
fn stuffle_json_seeds() {
    let mut ok = 0;
    for (path, text) in seeds("stuffle_json") {
        if let Ok(expr) = StuffleExpr::from_json(&text) {
            let back = StuffleExpr::from_json(&expr.to_json()).unwrap();
            assert_eq!(back, expr, "{}", path.display());
            ok += 1;
        }
    }
    assert!(ok >= 3);
}
