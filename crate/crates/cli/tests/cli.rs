use std::path::PathBuf;
use std::process::Command;

use recsunit_cli::run;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn cli(args: &[&str]) -> recsunit_cli::Outcome {
    run(std::iter::once("recsunit").chain(args.iter().copied()))
}

fn json(out: &recsunit_cli::Outcome) -> serde_json::Value {
    serde_json::from_str(&out.stdout).expect("one JSON document")
}

#[test]
fn height_of_canonical_form() {
    // numerator degree 2, denominator degree 3
    let out = cli(&["height", "(x^2-1)/(x^3)"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "3\n"));
    assert_eq!(cli(&["height", "x^2/(x^2+1)"]).stdout, "2\n");
    assert_eq!(cli(&["height", "5"]).stdout, "0\n");
    assert_eq!(json(&cli(&["--machine", "height", "(x^2-1)/(x^3)"]))["height"], 3);
}

#[test]
fn valuation_and_divisor() {
    assert_eq!(cli(&["valuation", "(x^2-1)/x^3", "inf"]).stdout, "1\n");
    assert_eq!(cli(&["valuation", "(x^2-1)/x^3", "x"]).stdout, "-3\n");
    assert_eq!(cli(&["valuation", "(x^2-1)/x^3", "x^2+1"]).stdout, "0\n");
    let d = json(&cli(&["--machine", "divisor", "(x^2-1)/(x^3)"]));
    let total: i64 = d["divisor"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["degree"].as_i64().unwrap() * e["valuation"].as_i64().unwrap())
        .sum();
    assert_eq!(total, 0);
    assert_eq!(d["divisor"].as_array().unwrap().len(), 4);
}

#[test]
fn sunit_membership() {
    let s = fixture("s_x_xp1.sset");
    assert_eq!(cli(&["sunit", "x^2*(x+1)^-3", "--sset", &s]).stdout, "true\n");
    assert_eq!(cli(&["sunit", "x+2", "--sset", &s]).stdout, "false\n");
    assert_eq!(cli(&["sunit", "x", "--sset", "/nonexistent"]).code, 1);
}

#[test]
fn parse_diagnostics_exit_one() {
    let out = cli(&["height", "x^^2"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("column 3"));
    let m = json(&cli(&["--machine", "height", "x^^2"]));
    assert_eq!(m["column"], 3);
    assert_eq!(cli(&["height", "0"]).code, 1);
    assert_eq!(cli(&["frobnicate"]).code, 1);
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn bad_problem_file_reports_location() {
    let dir = std::env::temp_dir().join(format!("recsunit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.problem");
    std::fs::write(
        &path,
        "[sequences.U]\nroots = [\"x\", \"x\"]\ncoeffs = [\"1\", \"1\"]\n\n[problem]\nkind = \"triple_zero\"\nsequences = [\"U\", \"U\", \"U\"]\n",
    )
    .unwrap();
    let m = json(&cli(&["--machine", "solve", path.to_str().unwrap()]));
    assert_eq!((m["line"].as_u64(), m["column"].as_u64()), (Some(2), Some(15)));
    assert_eq!(m["kind"], "invalid value");
}

#[test]
fn hypothesis_violation_exits_two() {
    let dir = std::env::temp_dir().join(format!("recsunit-cli-h-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("degenerate.problem");
    // x and 2x have a constant ratio
    std::fs::write(
        &path,
        "[sequences.U]\nroots = [\"x\", \"2*x\"]\ncoeffs = [\"1\", \"1\"]\n\n[problem]\nkind = \"triple_zero\"\nsequences = [\"U\", \"U\", \"U\"]\n",
    )
    .unwrap();
    let out = cli(&["solve", path.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    let m = json(&cli(&["--machine", "bound", path.to_str().unwrap()]));
    assert_eq!(m["error"], "hypothesis");
    assert_eq!(m["report"]["non_degenerate"], false);
}

#[test]
fn solve_reports_diagonal_family() {
    let out = cli(&["--machine", "solve", &fixture("diagonal.problem")]);
    assert_eq!(out.code, 0);
    let m = json(&out);
    let fams = m["families"].as_array().unwrap();
    assert!(fams
        .iter()
        .any(|f| f["base"] == serde_json::json!([0, 0, 0]) && f["steps"] == serde_json::json!([1, 1, 1])));
    assert_eq!(m["trace"]["final"], 90);
    assert!(m["sporadic"].as_array().unwrap().is_empty());
}

#[test]
fn machine_and_text_list_the_same_solutions() {
    for name in ["sunit_r1.problem", "diagonal_c11.problem"] {
        let path = fixture(name);
        let m = json(&cli(&["--machine", "solve", &path]));
        let text = cli(&["solve", &path]).stdout;
        let listed: Vec<Vec<u64>> = serde_json::from_value(m["solutions"].clone()).unwrap();
        let section: Vec<&str> = text
            .lines()
            .skip_while(|l| !l.starts_with("solutions ("))
            .skip(1)
            .take_while(|l| l.starts_with("  ("))
            .collect();
        let rendered: Vec<String> = listed
            .iter()
            .map(|t| format!("  ({})", t.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        assert_eq!(section, rendered, "{name}");
    }
}

#[test]
fn oracle_and_bound_commands() {
    let m = json(&cli(&["--machine", "oracle", &fixture("diagonal.problem"), "--max", "6"]));
    let sols: Vec<Vec<u64>> = serde_json::from_value(m["solutions"].clone()).unwrap();
    assert_eq!(sols, (0..=6).map(|n| vec![n, n, n]).collect::<Vec<_>>());
    let b = json(&cli(&["--machine", "bound", &fixture("sunit_r2.problem")]));
    assert_eq!(b["trace"]["final"], 93);
    assert!(b.get("solutions").is_none());
}

#[test]
fn selfcheck_passes_and_prints_seed() {
    let out = cli(&["selfcheck", "--seed", "11", "--cases", "60"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.starts_with("seed 11\n"));
    assert!(!out.stdout.contains("FAIL"));
}

#[test]
fn jobs_flag_does_not_change_output() {
    let path = fixture("sunit_r1.problem");
    let one = cli(&["--machine", "--jobs", "1", "solve", &path]);
    let many = cli(&["--machine", "--jobs", "4", "solve", &path]);
    assert_eq!(one, many);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_recsunit");
    let ok = Command::new(bin).args(["height", "x^2/(x+1)"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "2\n");
    let bad = Command::new(bin).args(["height", "x^^2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
