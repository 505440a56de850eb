use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rootmult(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rootmult"))
        .args(args)
        .env_remove("ROOTMULT_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    let mut rows = vec![header];
    rows.extend(
        reader
            .records()
            .map(|r| r.unwrap().iter().map(String::from).collect()),
    );
    rows
}

fn validate(doc: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/rootmult.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{doc:#}");
}

#[test]
fn multiplicity_all_methods() {
    let out = rootmult(&[
        "multiplicity",
        "--lambda",
        "4,1",
        "--q",
        "6",
        "--method",
        "all",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(
        rows[0],
        [
            "lambda",
            "q",
            "n",
            "method",
            "value",
            "main_term",
            "error_scale",
            "ratio",
            "elapsed_ms"
        ]
    );
    let methods: Vec<&str> = rows[1..].iter().map(|r| r[3].as_str()).collect();
    assert_eq!(methods, ["brute", "closed_form", "asymptotic_main"]);
    // σ_0(6) - 1 = 3 only once n ≥ 6; at n = 5 the multiplicity is 2.
    for r in &rows[1..3] {
        assert_eq!(
            (r[0].as_str(), r[4].as_str(), r[5].as_str(), r[7].as_str()),
            ("4,1", "2", "4", "0.5")
        );
    }
    assert_eq!(rows[3][4], "4");

    let out = rootmult(&[
        "multiplicity",
        "--lambda",
        "5,1",
        "--q",
        "6",
        "--method",
        "all",
    ]);
    let rows = csv_rows(&out);
    assert_eq!((rows[1][4].as_str(), rows[1][7].as_str()), ("3", "0.75"));
}

#[test]
fn trivial_character() {
    let out = rootmult(&["multiplicity", "--lambda", "7", "--q", "5"]);
    assert!(out.status.success());
    assert_eq!(csv_rows(&out)[1][4], "1");
}

#[test]
fn tail_input_matches_brute() {
    let out = rootmult(&[
        "multiplicity",
        "--mu",
        "2",
        "--n",
        "24",
        "--q",
        "12",
        "--method",
        "all",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(rows[1][3], "brute");
    assert_eq!(rows[1][4], rows[2][4]);
    assert_eq!(rows[2][0], "22,2");
}

#[test]
fn invalid_input_exit_codes() {
    for args in [
        &["multiplicity", "--lambda", "3,4", "--q", "2"][..],
        &["multiplicity", "--lambda", "4,1", "--q", "0"],
        &["multiplicity", "--lambda", "4,1", "--q", "1000000001"],
        &[
            "multiplicity",
            "--lambda",
            "41",
            "--q",
            "2",
            "--method",
            "brute",
        ],
        &["multiplicity", "--mu", "3", "--n", "4", "--q", "2"],
        &["sample", "--n", "1000001"],
        &["sample", "--trials", "0"],
        &["sample", "--spec", "0:1"],
        &["verify", "theorem", "--threshold", "0"],
        &["verify", "nonsense"],
        &["table", "--mu", "3,3,3", "--q-max", "5"],
        &["multiplicity", "--q", "2"],
    ] {
        let out = rootmult(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn table_exact_column() {
    let out = rootmult(&["table", "--mu", "1", "--q-min", "2", "--q-max", "50"]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(rows[0].last().unwrap(), "monitored_k");
    assert_eq!(rows.len(), 50);
    for r in &rows[1..] {
        let q: u64 = r[1].parse().unwrap();
        let d = (1..=q).filter(|d| q.is_multiple_of(*d)).count() as u64;
        assert_eq!(r[4], (d - 1).to_string(), "q={q}");
    }
}

#[test]
fn table_primes_ratio_trend() {
    let out = rootmult(&["table", "--mu", "2", "--q-max", "1000", "--primes"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1 + 168);
    let ratios: Vec<f64> = rows[1..].iter().map(|r| r[7].parse().unwrap()).collect();
    // for odd primes both sides are (p + 1)/2
    assert_eq!(rows[1][7], "0.666666666667");
    assert!(ratios[1..].iter().all(|&r| r == 1.0), "{ratios:?}");
}

#[test]
fn empty_range_prints_header_only() {
    let out = rootmult(&["table", "--mu", "2", "--q-min", "10", "--q-max", "9"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "lambda,q,n,method,value,main_term,error_scale,ratio,elapsed_ms,monitored_k\n"
    );
}

#[test]
fn verify_suites() {
    for suite in ["scharf", "stirling", "theorem"] {
        let out = rootmult(&["verify", suite, "--threshold", "10"]);
        assert!(out.status.success(), "{suite}");
        let rows = csv_rows(&out);
        assert_eq!(rows[1][..2], [suite.to_string(), "all".to_string()]);
        assert_eq!(rows[1][3], "0");
    }
    let out = rootmult(&["verify", "theorem", "--threshold", "0.01"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sample_determinism_and_values() {
    let a = rootmult(&["sample", "--trials", "1", "--seed", "0"]);
    let b = rootmult(&["sample", "--trials", "1", "--seed", "0"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let rows = csv_rows(&a);
    assert_eq!(
        rows[0],
        [
            "spec",
            "n",
            "q",
            "trials",
            "seed",
            "estimate",
            "standard_error",
            "exact"
        ]
    );
    assert_eq!(rows[1][6], "0");

    let out = rootmult(&[
        "sample", "--n", "100", "--q", "6", "--spec", "1:1", "--trials", "100000", "--seed", "7",
    ]);
    let rows = csv_rows(&out);
    let est: f64 = rows[1][5].parse().unwrap();
    let se: f64 = rows[1][6].parse().unwrap();
    assert_eq!(rows[1][7], "4");
    assert!((est - 4.0).abs() <= 5.0 * se);

    let out = rootmult(&[
        "sample", "--n", "10", "--q", "1", "--spec", "2:2", "--spec", "1:1", "--trials", "100000",
    ]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1][7], "0.75");
    let est: f64 = rows[1][5].parse().unwrap();
    let se: f64 = rows[1][6].parse().unwrap();
    assert!((est - 0.75).abs() <= 5.0 * se);
}

#[test]
fn json_output_matches_schema() {
    let runs: [&[&str]; 6] = [
        &[
            "--format",
            "json",
            "multiplicity",
            "--lambda",
            "4,1",
            "--q",
            "6",
            "--method",
            "all",
        ],
        &[
            "--format",
            "json",
            "multiplicity",
            "--lambda",
            "7",
            "--q",
            "5",
        ],
        &["--format", "json", "table", "--mu", "2,1", "--q-max", "12"],
        &[
            "--format", "json", "table", "--mu", "2", "--q-min", "3", "--q-max", "2",
        ],
        &["--format", "json", "verify", "stirling"],
        &[
            "--format", "json", "sample", "--spec", "1:2", "--spec", "2:1", "--trials", "50",
        ],
    ];
    for args in runs {
        let out = rootmult(args);
        assert!(out.status.success(), "{args:?}");
        let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
        validate(&doc);
    }
    let out = rootmult(&[
        "--format",
        "json",
        "multiplicity",
        "--lambda",
        "4,1",
        "--q",
        "6",
        "--method",
        "brute",
    ]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        doc["rows"][0]["ratio"],
        serde_json::json!({"num": "1", "den": "2"})
    );
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# sweep\nlambda = 5,1\nq = 6\nmethod = brute\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let rows = csv_rows(&rootmult(&["--config", cfg, "multiplicity"]));
    assert_eq!(
        (
            rows[1][0].as_str(),
            rows[1][3].as_str(),
            rows[1][4].as_str()
        ),
        ("5,1", "brute", "3")
    );

    let rows = csv_rows(&rootmult(&[
        "--config",
        cfg,
        "multiplicity",
        "--q",
        "2",
        "--method",
        "closed_form",
    ]));
    assert_eq!(
        (
            rows[1][1].as_str(),
            rows[1][3].as_str(),
            rows[1][4].as_str()
        ),
        ("2", "closed_form", "1")
    );
}

#[test]
fn workers_do_not_change_output() {
    let one = rootmult(&[
        "--workers",
        "1",
        "multiplicity",
        "--lambda",
        "6,3,2,1",
        "--q",
        "4",
        "--method",
        "brute",
    ]);
    let many = rootmult(&[
        "--workers",
        "4",
        "multiplicity",
        "--lambda",
        "6,3,2,1",
        "--q",
        "4",
        "--method",
        "brute",
    ]);
    assert_eq!(csv_rows(&one)[1][4], csv_rows(&many)[1][4]);
}

#[test]
fn cache_dir_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_rootmult"))
            .args([
                "multiplicity",
                "--lambda",
                "5,3,1",
                "--q",
                "3",
                "--method",
                "brute",
            ])
            .env("ROOTMULT_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    let chars = std::fs::read_to_string(dir.path().join("characters.tsv")).unwrap();
    assert!(chars.lines().all(|l| l.split('\t').count() == 2));
    assert!(!chars.is_empty());
    let stirling = std::fs::read_to_string(dir.path().join("stirling.tsv")).unwrap();
    assert!(stirling.starts_with("1,0,0\t1\n"));
    let second = run();
    assert_eq!(csv_rows(&first)[1][4], csv_rows(&second)[1][4]);

    // Corrupt tables are ignored, not trusted.
    std::fs::write(dir.path().join("stirling.tsv"), "1,0,0\t7\n").unwrap();
    std::fs::write(dir.path().join("characters.tsv"), "garbage\n").unwrap();
    let third = run();
    assert!(third.status.success());
    assert_eq!(csv_rows(&first)[1][4], csv_rows(&third)[1][4]);
}
