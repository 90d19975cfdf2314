use std::process::{Command, Output};

fn qmzv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmzv"))
        .args(args)
        .env_remove("QMZV_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_value_and_shift() {
    let o = qmzv(&[
        "eval", "[2,1]", "--q", "0.5", "--tol", "1e-13", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let value = v[0]["value"].as_f64().unwrap();
    assert!((value - 0.27220320563321367).abs() < 1e-12);

    let star = qmzv(&["eval", "zeta*[1]", "--q", "0.5", "--format", "csv"]);
    let plain = qmzv(&["eval", "[2]", "--q", "0.5", "--format", "csv"]);
    let value_col = |o: &Output| {
        stdout(o)
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(2)
            .unwrap()
            .to_string()
    };
    assert_eq!(value_col(&star), value_col(&plain));
}

#[test]
fn eval_repetition_sugar() {
    let a = qmzv(&["eval", "[3,{1}^2]", "--q", "0.4", "--format", "csv"]);
    let b = qmzv(&["eval", "[3,1,1]", "--q", "0.4", "--format", "csv"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn eval_stuffle_expression() {
    let expr = r#"{"terms":[{"index":[2,1],"eps":[1]},{"index":[3],"eps":[-1]}]}"#;
    let o = qmzv(&["eval", expr, "--q", "0.5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let value = v[0]["value"].as_f64().unwrap();
    let bound = v[0]["tail_bound"].as_f64().unwrap();
    assert!(value.abs() <= bound);
}

#[test]
fn exit_codes() {
    let div = qmzv(&["eval", "[1,2]", "--q", "0.5"]);
    assert_eq!(div.status.code(), Some(3));
    assert!(
        String::from_utf8_lossy(&div.stderr).contains("divergent: leading exponent must exceed 1")
    );
    assert_eq!(qmzv(&["eval", "[2,"]).status.code(), Some(2));
    assert_eq!(qmzv(&["eval", "[2]", "--q", "0"]).status.code(), Some(2));
    assert_eq!(qmzv(&["verify", "duality"]).status.code(), Some(2));
    assert_eq!(qmzv(&["table", "G0", "--cap", "20"]).status.code(), Some(0));
    assert_eq!(
        qmzv(&["verify", "height", "--cap", "20"]).status.code(),
        Some(2)
    );
    assert_eq!(
        qmzv(&[
            "eval",
            "[2]",
            "--q",
            "0.99",
            "--tol",
            "1e-15",
            "--max-terms",
            "5"
        ])
        .status
        .code(),
        Some(4)
    );
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_qmzv"))
        .args(["eval", "[2]"])
        .env("QMZV_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
    assert_eq!(qmzv(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_sweeps_pass() {
    let o = qmzv(&["verify", "sum", "--q", "0.5", "--max-weight", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("1..36\n"));
    assert!(text.ends_with("# total=36 passed=36 failed=0\n"));

    let o = qmzv(&["verify", "euler", "--q", "0.2,0.95", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1 + 2 * 7);

    let o = qmzv(&[
        "verify",
        "gf",
        "--q",
        "0.6",
        "--depth",
        "3",
        "--z=-0.7+0.2i",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("z=-0.7+0.2i"));
}

#[test]
fn tables() {
    let o = qmzv(&[
        "table",
        "zeta",
        "--max-weight",
        "5",
        "--q",
        "0.5",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    // admissible indices of weight 2..=5: 1 + 2 + 4 + 8
    assert_eq!(stdout(&o).lines().count(), 1 + 15);

    let o = qmzv(&[
        "table", "G0", "--weight", "4", "--q", "0.5", "--format", "json",
    ]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    let strata: Vec<(i64, i64)> = rows
        .iter()
        .map(|r| (r["r"].as_i64().unwrap(), r["s"].as_i64().unwrap()))
        .collect();
    assert_eq!(strata, vec![(1, 1), (2, 1), (2, 2), (3, 1)]);

    let o = qmzv(&[
        "table",
        "drin-coeffs",
        "--cap",
        "6",
        "--q",
        "0.5",
        "--format",
        "json",
    ]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    let get = |m: i64, n: i64| {
        rows.iter()
            .find(|r| r["m"] == m && r["n"] == n)
            .map(|r| (r["value"].as_f64().unwrap(), r["bound"].as_f64().unwrap()))
            .unwrap()
    };
    for m in 0..=4 {
        for n in 0..=4 - m {
            let (a, ea) = get(m, n);
            let (b, eb) = get(n, m);
            assert!((a - b).abs() <= ea + eb, "m={m} n={n}");
        }
    }
}

#[test]
fn output_file_and_thread_count_do_not_change_bytes() {
    let dir = std::env::temp_dir().join(format!("qmzv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("drin.json");
    let o = qmzv(&[
        "verify",
        "drin",
        "--q",
        "0.5,0.9",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let file = std::fs::read(&path).unwrap();
    let single = Command::new(env!("CARGO_BIN_EXE_qmzv"))
        .args(["verify", "drin", "--q", "0.5,0.9", "--format", "json"])
        .env("QMZV_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(single.stdout, file);
    std::fs::remove_dir_all(&dir).unwrap();
}
