use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brauer-kl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn dpoly_reports_both_values() {
    let o = run(&[
        "dpoly",
        "--family",
        "walled",
        "--delta",
        "2",
        "--lambda",
        "2,2,1|3,2",
        "--mu",
        "2,2|3,1",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "q\nrecursive: q, match\n");
}

#[test]
fn zero_polynomial_prints_zero() {
    let o = run(&[
        "ppoly", "--family", "brauer", "--delta", "1", "--lambda", "", "--mu", "2,2",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0\nrecursive: 0, match\n");
}

#[test]
fn ppoly_worked_example() {
    let o = run(&[
        "ppoly",
        "--family",
        "brauer",
        "--delta",
        "1",
        "--lambda",
        "7,6,6,6,5,4,1",
        "--mu",
        "4,3,3,1",
    ]);
    assert_eq!(stdout(&o).lines().next(), Some("q^11+q^9+2q^7+q^3"));
}

#[test]
fn weight_entries() {
    let o = run(&[
        "weight", "--family", "brauer", "--delta", "1", "--lambda", "4,3,2",
    ]);
    assert!(o.status.success());
    assert!(
        stdout(&o).contains("entries: (7/2,3/2,-1/2,-7/2,-9/2,"),
        "{}",
        stdout(&o)
    );
    let o = run(&[
        "weight",
        "--family",
        "walled",
        "--delta",
        "2",
        "--lambda",
        "2,2,1|3,2",
    ]);
    assert!(
        stdout(&o).contains("6,5,4,2,0,-1;5,3,0,-1,-2,-3,"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn verify_sweep_passes() {
    let o = run(&[
        "verify",
        "--family",
        "brauer",
        "--delta",
        "1",
        "--max-size",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).trim_end().ends_with(": ok"));
    let o = run(&[
        "verify",
        "--family",
        "walled",
        "--delta",
        "-1",
        "--max-size",
        "3",
        "--samples",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn output_is_independent_of_worker_count() {
    let args = [
        "verify",
        "--family",
        "walled",
        "--delta",
        "2",
        "--max-size",
        "3",
        "--format",
        "json",
    ];
    let one = run(&[&args[..], &["--jobs", "1"]].concat());
    let four = run(&[&args[..], &["--jobs", "4"]].concat());
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    let m = [
        "matrix", "--family", "brauer", "--delta", "2", "--lambda", "4,3,2,1", "--format", "csv",
    ];
    assert_eq!(
        run(&[&m[..], &["--jobs", "1"]].concat()).stdout,
        run(&[&m[..], &["--jobs", "3"]].concat()).stdout
    );
}

#[test]
fn matrix_csv_golden() {
    let o = run(&[
        "matrix", "--family", "brauer", "--delta", "1", "--lambda", "2,2", "--format", "csv",
        "--which", "d",
    ]);
    assert_eq!(stdout(&o), ",(),\"(2,2)\"\n(),1,0\n\"(2,2)\",q,1\n");
}

#[test]
fn block_lists_minimal_first() {
    let o = run(&[
        "block",
        "--family",
        "walled",
        "--delta",
        "2",
        "--lambda",
        "2,2,1|3,2",
    ]);
    let lines: Vec<String> = stdout(&o)
        .lines()
        .map(|l| l.split('\t').next().unwrap().to_string())
        .collect();
    assert_eq!(lines, ["((2,2),(3,1))", "((2,2,1),(3,2))"]);
}

#[test]
fn resolution_layers() {
    let o = run(&[
        "resolution",
        "--family",
        "brauer",
        "--delta",
        "1",
        "--lambda",
        "2,2",
    ]);
    assert_eq!(stdout(&o), "degree 0: P(2,2)\ndegree 1: P()\n");
}

#[test]
fn words() {
    let o = run(&[
        "word", "--family", "brauer", "--delta", "1", "--lambda", "2,2",
    ]);
    assert_eq!(stdout(&o), "b[b]\n");
    let o = run(&[
        "word", "--family", "brauer", "--delta", "1", "--lambda", "2,2", "--mu", "",
    ]);
    assert_eq!(stdout(&o), "a[a]\n");
}

#[test]
fn diagram_formats() {
    let base = [
        "diagram", "--family", "brauer", "--delta", "1", "--lambda", "4,3,2",
    ];
    assert_eq!(stdout(&run(&base)), " ╭─╮     │\n ∨ ∧ ∘ × ∨\n");
    let tikz = stdout(&run(&[&base[..], &["--format", "tikz"]].concat()));
    assert!(tikz.contains("tikzpicture"));
    let json: serde_json::Value =
        serde_json::from_slice(&run(&[&base[..], &["--format", "json"]].concat()).stdout).unwrap();
    assert_eq!(json["diagram"]["caps"], serde_json::json!([[1, 3]]));
}

#[test]
fn writes_to_out_file() {
    let path = std::env::temp_dir().join(format!("brauer-kl-out-{}.txt", std::process::id()));
    let o = run(&[
        "weight",
        "--family",
        "brauer",
        "--delta",
        "1",
        "--lambda",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .starts_with("shape: (2)"));
    let _ = std::fs::remove_file(path);
}

fn assert_usage_error(args: &[&str]) {
    let o = run(args);
    assert_eq!(o.status.code(), Some(2), "{args:?}");
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error[usage]: "), "{err}");
}

#[test]
fn usage_errors() {
    assert_usage_error(&[
        "weight", "--family", "brauer", "--delta", "1", "--lambda", "1,2",
    ]);
    assert_usage_error(&[
        "weight", "--family", "brauer", "--delta", "0", "--lambda", "1",
    ]);
    assert_usage_error(&[
        "weight", "--family", "brauer", "--delta", "1", "--lambda", "1", "--format", "csv",
    ]);
    assert_usage_error(&[
        "weight", "--family", "walled", "--delta", "1", "--lambda", "3",
    ]);
    assert_usage_error(&["verify", "--family", "brauer", "--delta", "1"]);
    assert_usage_error(&["frobnicate"]);
    assert_usage_error(&["block", "--family", "klein", "--delta", "1", "--lambda", ""]);
}

#[test]
fn delta_zero_override() {
    let o = run(&[
        "weight",
        "--family",
        "walled",
        "--delta",
        "0",
        "--lambda",
        "1|",
        "--allow-delta-zero",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
}
