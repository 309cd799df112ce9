use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use eulerscan::format::{
    directions_to_json, fiber_pairs_to_json, function_to_json, parse_directions, parse_fiber_pairs,
    parse_function, parse_probes, probes_to_json,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eulerscan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

#[test]
fn chi_of_whole_space() {
    let out = stdout(&["chi", "--input", &path("whole_space_3d.json")]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["euler_integral"], -1);
    assert_eq!(
        stdout(&["chi", "--input", &path("triangle.json"), "--format", "csv"]),
        "euler_integral\n1\n"
    );
}

#[test]
fn ect_of_closed_segment() {
    let out = stdout(&[
        "ect",
        "--input",
        &path("closed_segment.json"),
        "--directions",
        &path("directions_1d.json"),
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let first = &v["directions"][0];
    assert_eq!(first["direction"][0], "1/1");
    assert_eq!(first["curve"]["value_at_minus_inf"], 0);
    assert_eq!(first["curve"]["breakpoints"], serde_json::json!(["-1/1"]));
    assert_eq!(first["curve"]["values"], serde_json::json!([1]));
}

#[test]
fn seeded_output_is_deterministic() {
    let args = |seed: &'static str| {
        vec![
            "ect", "--input", "", "--count", "25", "--seed", seed, "--format", "csv",
        ]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>()
    };
    let input = path("points_and_segment.json");
    let call = |seed| {
        let mut a = args(seed);
        a[2] = input.clone();
        stdout(&a.iter().map(String::as_str).collect::<Vec<_>>())
    };
    assert_eq!(call("7"), call("7"));
    assert_ne!(call("7"), call("8"));
    let q = |seed| {
        stdout(&[
            "qect",
            "--input",
            &path("triangle.json"),
            "--count",
            "6",
            "--seed",
            seed,
            "--refine-max",
            "2",
        ])
    };
    assert_eq!(q("3"), q("3"));
}

#[test]
fn fixtures_round_trip_byte_for_byte() {
    for entry in fs::read_dir(fixture("")).unwrap() {
        let p = entry.unwrap().path();
        let text = fs::read_to_string(&p).unwrap();
        let again = if let Ok(f) = parse_function(&text) {
            function_to_json(&f)
        } else if let Ok(d) = parse_directions(&text) {
            directions_to_json(&d)
        } else if let Ok(probes) = parse_probes(&text) {
            probes_to_json(&probes)
        } else {
            let (kind, pairs) =
                parse_fiber_pairs(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            fiber_pairs_to_json(&kind, &pairs)
        };
        assert_eq!(again, text, "{}", p.display());
    }
}

#[test]
fn qect_reports_exactness() {
    let exact = stdout(&[
        "qect",
        "--input",
        &path("points_and_segment.json"),
        "--probes",
        &path("probes_2d.json"),
    ]);
    let v: serde_json::Value = serde_json::from_str(&exact).unwrap();
    let values: Vec<i64> = v["probes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["value"].as_i64().unwrap())
        .collect();
    assert_eq!(values, vec![2, 0, 1, 2]);
    assert!(v["probes"]
        .as_array()
        .unwrap()
        .iter()
        .all(|p| p["exactness"] == "exact"));

    let pl = stdout(&[
        "qect",
        "--input",
        &path("triangle.json"),
        "--probes",
        &path("probes_2d.json"),
        "--refine-max",
        "3",
    ]);
    let v: serde_json::Value = serde_json::from_str(&pl).unwrap();
    for p in v["probes"].as_array().unwrap() {
        assert_eq!(p["exactness"], "pl-approximate");
        assert_eq!(p["value"], 1);
        assert_eq!(p["stable"], true);
    }
}

#[test]
fn invert1d_round_trip() {
    let out = stdout(&[
        "invert1d",
        "--input",
        &path("line_function.json"),
        "--count",
        "50",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mismatches"], 0);
    // Points count their weight, open edges minus their weight: 2 + 1 + 1 - 3 + 1.
    assert_eq!(v["integral"], 2);
    let bad = run(&["invert1d", "--input", &path("whole_space_3d.json")]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn fiber_chi_reports_agree() {
    for name in ["fiber_pairs_v0.json", "fiber_pairs_fixed_a.json"] {
        let out = stdout(&["fiber-chi", "--input", &path(name), "--refine-max", "5"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        for r in v["reports"].as_array().unwrap() {
            assert_eq!(r["agrees"], true);
            assert_eq!(r["oracle_stable"], true);
        }
    }
}

#[test]
fn verify_passes_and_writes_output() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.csv");
    let out = run(&[
        "verify",
        "--seed",
        "11",
        "--format",
        "csv",
        "--output",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report = fs::read_to_string(target).unwrap();
    assert_eq!(report.lines().count(), 7);
    assert!(report.lines().skip(1).all(|l| l.ends_with(",pass")));
}

#[test]
fn parse_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        "{\n  \"ambient_dim\": 1,\n  \"vertices\": [[\"1/0\"]],\n  \"simplices\": []\n}\n",
    )
    .unwrap();
    let out = run(&["chi", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn plot_csv_is_rejected_where_meaningless() {
    let out = run(&[
        "chi",
        "--input",
        &path("triangle.json"),
        "--format",
        "plot-csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
