use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellparity"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn chsh_example_reaches_tsirelson() {
    let out = run(&[
        "chsh",
        "--spin2",
        "1",
        "--xi",
        "0.7853981634",
        "--eta",
        "0",
        "--coplanar",
        "0,0.7853981634,-0.7853981634,1.5707963268",
    ]);
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert!((v["value"].as_f64().unwrap() - 2.828427).abs() < 1e-6);
    assert_eq!(v["violated"], true);
}

#[test]
fn chsh_in_degrees_matches_radians() {
    let deg = json(&run(&[
        "chsh",
        "--spin2",
        "1",
        "--degrees",
        "--coplanar",
        "0,45,-45,90",
    ]));
    assert!((deg["value"].as_f64().unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn parity_sweep_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = run(&[
        "parity-sweep",
        "--spin2-max",
        "4",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[0], "schema_version");
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    let s: Vec<&str> = rows.iter().map(|r| &r[col("s")]).collect();
    assert_eq!(s, ["1/2", "1", "3/2", "2"]);
    let violated: Vec<&str> = rows.iter().map(|r| &r[col("violated")]).collect();
    assert_eq!(violated, ["true", "false", "false", "false"]);
}

#[test]
fn parity_sweep_json_lines() {
    let out = run(&[
        "parity-sweep",
        "--spin2-max",
        "3",
        "--objective",
        "nlc_magnitude",
        "--grid",
        "8",
    ]);
    assert!(out.status.success());
    let rows: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 3);
    for (row, want) in rows.iter().zip([1.0, 0.0, 0.0625]) {
        assert!((row["best_value"].as_f64().unwrap() - want).abs() < 1e-6);
        assert_eq!(row["objective"], "nlc_magnitude");
    }
}

#[test]
fn integer_spin_correlate_has_no_nonlocal_part() {
    let v = json(&run(&[
        "correlate",
        "--spin2",
        "2",
        "--xi",
        "0.785",
        "--theta-a",
        "1.5708",
        "--theta-b",
        "1.5708",
    ]));
    assert_eq!(v["p_nlc"].as_f64().unwrap(), 0.0);
    assert_eq!(v["mode"], "closed_form");
    for key in ["p_lc", "p_total", "W", "rho11_lc", "rho44_nlc"] {
        assert!(v[key].is_f64(), "{key}");
    }
}

#[test]
fn every_subcommand_emits_reparseable_json() {
    let cases: [&[&str]; 7] = [
        &[
            "correlate",
            "--spin2",
            "3",
            "--theta-a",
            "0.3",
            "--phi-a",
            "1",
            "--theta-b",
            "2",
            "--mode",
            "oracle",
        ],
        &[
            "bell",
            "--spin2",
            "1",
            "--coplanar",
            "0,1.0471975511965976,2.0943951023931953",
        ],
        &[
            "chsh",
            "--spin2",
            "2",
            "--which",
            "local_only",
            "--coplanar",
            "0,1,2,3",
        ],
        &["maximize", "--spin2", "1", "--grid", "6", "--refine", "200"],
        &[
            "parity-sweep",
            "--spin2-max",
            "2",
            "--grid",
            "6",
            "--refine",
            "0",
        ],
        &[
            "sample-quantum",
            "--spin2",
            "1",
            "--theta-a",
            "0",
            "--theta-b",
            "1",
            "--shots",
            "5000",
            "--seed",
            "3",
        ],
        &[
            "sample-lhv",
            "--theta-a",
            "0",
            "--theta-b",
            "1",
            "--shots",
            "5000",
        ],
    ];
    for args in cases {
        let out = run(args);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        for line in String::from_utf8(out.stdout).unwrap().lines() {
            let v: Value = serde_json::from_str(line).unwrap();
            assert_eq!(v["schema_version"], 1, "{args:?}");
        }
    }
}

#[test]
fn bell_example_margin() {
    let v = json(&run(&[
        "bell",
        "--spin2",
        "1",
        "--coplanar",
        "0,1.0471975511965976,2.0943951023931953",
    ]));
    assert!((v["margin"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(v["violated"], true);
}

#[test]
fn sampling_is_seed_deterministic() {
    let args = [
        "sample-quantum",
        "--spin2",
        "3",
        "--theta-a",
        "0.4",
        "--theta-b",
        "1.1",
        "--shots",
        "20000",
        "--seed",
        "11",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn spin_out_of_range_exits_two() {
    for bad in ["0", "51", "-1"] {
        let out = run(&[
            "correlate",
            "--spin2",
            bad,
            "--theta-a",
            "0",
            "--theta-b",
            "0",
        ]);
        assert_eq!(out.status.code(), Some(2), "{bad}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("--spin2"));
    }
}

#[test]
fn unknown_subcommand_exits_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn invalid_flags_name_the_flag() {
    let cases: [(&[&str], &str); 5] = [
        (
            &[
                "correlate",
                "--spin2",
                "1",
                "--theta-a",
                "4",
                "--theta-b",
                "0",
            ],
            "--theta-a",
        ),
        (
            &["correlate", "--spin2", "1", "--theta-a", "0"],
            "--theta-b",
        ),
        (&["chsh", "--spin2", "1", "--coplanar", "0,1"], "--coplanar"),
        (
            &[
                "correlate",
                "--spin2",
                "1",
                "--xi",
                "NaN",
                "--theta-a",
                "0",
                "--theta-b",
                "0",
            ],
            "--xi",
        ),
        (&["maximize", "--spin2", "1", "--grid", "2"], "--grid"),
    ];
    for (args, flag) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(
            String::from_utf8_lossy(&out.stderr).contains(flag),
            "{args:?}"
        );
    }
}
