use std::fs;
use std::process::{Command, Output};

const Z_SQUARED: &str = r#"{"type":"blaschke","lambda":[1,0],"zeros":[[0,0],[0,0]]}"#;
const IDENTITY: &str = r#"{"type":"blaschke","lambda":[1,0],"zeros":[[0,0]]}"#;

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_blaschke-lab"));
    cmd.args(args).env_remove("BLASCHKE_LAB_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(" = ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

/// Counts keyed by cell center, from the csv grid.
fn grid_cells(csv: &str) -> Vec<(f64, f64, i64)> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,y,count"));
    lines
        .map(|l| {
            let v: Vec<&str> = l.split(',').collect();
            (v[0].parse().unwrap(), v[1].parse().unwrap(), v[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn eval_prints_value_and_derivative() {
    let out = run(&["eval", "--map", Z_SQUARED, "--z", "0.5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "0.25 0 | 1 0\n");

    let out = run(&["eval", "--map", r#"{"type":"gallery","name":"slit-g"}"#, "--z", "0"]);
    // g(0) = -(3 - 2√2)
    let expected = -(3.0 - 2.0 * 2f64.sqrt());
    let got: f64 = stdout(&out).split_whitespace().next().unwrap().parse().unwrap();
    assert!((got - expected).abs() < 1e-13);
}

#[test]
fn spec_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("map.json");
    fs::write(&path, Z_SQUARED).unwrap();
    let out = run(&["eval", "--map", path.to_str().unwrap(), "--z", "0.1+0.2i"]);
    assert_eq!(code(&out), 0);
    // (0.1+0.2i)² = -0.03+0.04i
    let parts: Vec<f64> = stdout(&out)
        .split_whitespace()
        .filter(|s| *s != "|")
        .map(|s| s.parse().unwrap())
        .collect();
    assert!((parts[0] + 0.03).abs() < 1e-15 && (parts[1] - 0.04).abs() < 1e-15);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["eval", "--map", "{not json", "--z", "0"])), 2);
    assert_eq!(code(&run(&["eval", "--map", Z_SQUARED, "--z", "abc"])), 2);
    assert_eq!(code(&run(&["eval", "--map", Z_SQUARED, "--z", "1.5"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["gallery", "nope"])), 2);
    assert_eq!(code(&run(&["gallery", "slit-power", "--k", "1"])), 2);
    assert_eq!(code(&run(&["verify", "no-such-suite"])), 2);
    assert_eq!(code(&run(&["verify", "theorem-3-1", "--candidate", "nope"])), 2);
    assert_eq!(
        code(&run_env(&["gallery", "half"], &[("BLASCHKE_LAB_THREADS", "many")])),
        2
    );
}

#[test]
fn randomized_suites_require_a_seed() {
    for suite in ["theorem-a", "theorem-b", "theorem-c", "theorem-3-2"] {
        let out = run(&["verify", suite]);
        assert_eq!(code(&out), 2, "{suite}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
    }
}

#[test]
fn io_errors_exit_3() {
    assert_eq!(code(&run(&["eval", "--map", "/nonexistent/map.json", "--z", "0"])), 3);
    let out = run(&[
        "heatmap",
        "--map",
        IDENTITY,
        "--resolution",
        "16",
        "--out",
        "/nonexistent/dir/grid.csv",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn valence_of_scaled_exponential_depends_on_sign_of_target() {
    let map = r#"{"type":"gallery","name":"scaled-exp","params":{"epsilon":1e-10,"c":10}}"#;
    let out = run(&["valence", "--map", map, "--w", "1e-10"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(field(&text, "value"), "3");
    assert_eq!(field(&text, "stabilized"), "true");

    let map = r#"{"type":"gallery","name":"scaled-exp","params":{"epsilon":1e-10,"c":10}}"#;
    let text = stdout(&run(&["valence", "--map", map, "--w", "-1e-10"]));
    assert_eq!(field(&text, "value"), "4");
}

#[test]
fn valence_with_explicit_schedule() {
    let out = run(&["valence", "--map", Z_SQUARED, "--w", "0.25", "--schedule", "0.3,0.9"]);
    let text = stdout(&out);
    // preimages ±0.5 lie between the two radii
    assert_eq!(field(&text, "counts"), "0,2");
    assert_eq!(
        code(&run(&[
            "valence",
            "--map",
            Z_SQUARED,
            "--w",
            "0",
            "--schedule",
            "0.9,0.5"
        ])),
        2
    );
}

#[test]
fn gallery_prints_canonical_specs() {
    let out = run(&["gallery", "half"]);
    assert_eq!(stdout(&out), "{\"type\":\"gallery\",\"name\":\"half\"}\n");
    let out = run(&["gallery", "scaled-exp"]);
    assert_eq!(
        stdout(&out),
        "{\"type\":\"gallery\",\"name\":\"scaled-exp\",\"params\":{\"epsilon\":1e-10,\"c\":10.0}}\n"
    );
    let out = run(&["gallery", "slit-power"]);
    assert_eq!(
        stdout(&out),
        "{\"type\":\"gallery\",\"name\":\"slit-power\",\"params\":{\"k\":2}}\n"
    );
    // printed specs feed straight back into --map
    let spec = stdout(&run(&["gallery", "escape", "--n", "4"]));
    assert_eq!(code(&run(&["eval", "--map", spec.trim(), "--z", "0.1"])), 0);
}

#[test]
fn heatmap_of_z_squared() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let out = run(&["heatmap", "--map", Z_SQUARED, "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let cells = grid_cells(&fs::read_to_string(&path).unwrap());
    assert_eq!(cells.len(), 64 * 64);
    for (x, y, count) in cells {
        let m = x.hypot(y);
        // cells this close to the contour radius are reported as outside
        if m >= 0.99 - 1e-3 {
            assert_eq!(count, -1);
        } else if m.sqrt() < 0.99 {
            assert_eq!(count, 2, "at {x},{y}");
        } else {
            assert_eq!(count, 0, "at {x},{y}");
        }
    }
    assert!(stdout(&out).contains("max_count = 2"));
}

#[test]
fn identity_pgm() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.pgm");
    let args = [
        "heatmap",
        "--map",
        IDENTITY,
        "--resolution",
        "16",
        "--radius",
        "0.9",
        "--format",
        "pgm",
    ];
    let out = run(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("P2"));
    assert_eq!(lines.next(), Some("16 16"));
    assert_eq!(lines.next(), Some("255"));
    let rows: Vec<Vec<u32>> = lines
        .map(|l| l.split(' ').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 16);
    for (j, row) in rows.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            let x = -1.0 + (2 * i + 1) as f64 / 16.0;
            let y = 1.0 - (2 * j + 1) as f64 / 16.0;
            assert_eq!(*v, u32::from(x.hypot(y) < 0.9 - 1e-3));
        }
    }
    // without --out the grid is the whole of stdout
    let out = run(&args);
    assert_eq!(stdout(&out), text);
}

#[test]
fn slit_power_omits_only_zero() {
    let out = run(&[
        "heatmap",
        "--map",
        r#"{"type":"gallery","name":"slit-power","params":{"k":2}}"#,
        "--resolution",
        "65",
        "--radius",
        "0.999",
    ]);
    assert_eq!(code(&out), 0);
    let cells = grid_cells(&stdout(&out));
    let center = cells.iter().find(|c| c.0 == 0.0 && c.1 == 0.0).expect("center cell");
    assert_eq!(center.2, 0);
    let max = cells.iter().map(|c| c.2).max().unwrap();
    assert_eq!(max, 2);
    assert!(cells.iter().all(|c| c.2 <= 2));
}

#[test]
fn verify_exit_codes_and_reports() {
    let out = run(&["verify", "theorem-b", "--seed", "3", "--cases", "5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0]["seed"], 3);
    assert_eq!(lines[5]["summary"]["failures"], 0);

    let out = run(&["verify", "theorem-3-1", "--candidate", "atomic-inner"]);
    assert_eq!(code(&out), 0);
    let line: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(line["verdict"], "valence-unbounded");

    // the identity is recovered as an automorphism
    let out = run(&["verify", "theorem-3-1", "--map", IDENTITY, "--bound", "1"]);
    assert_eq!(code(&out), 0);
    let line: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(line["verdict"], "automorphism");

    let out = run(&["verify", "hurwitz-demo", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("n,valence\n2,2\n"));
}

#[test]
fn reports_are_identical_across_thread_counts() {
    let args = ["verify", "theorem-c", "--seed", "11", "--cases", "6", "--mobius", "3"];
    let one = run_env(&args, &[("BLASCHKE_LAB_THREADS", "1")]);
    let four = run_env(&args, &[("BLASCHKE_LAB_THREADS", "4")]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);

    let args = ["heatmap", "--map", Z_SQUARED, "--resolution", "24"];
    assert_eq!(
        run_env(&args, &[("BLASCHKE_LAB_THREADS", "1")]).stdout,
        run_env(&args, &[("BLASCHKE_LAB_THREADS", "3")]).stdout
    );
}
