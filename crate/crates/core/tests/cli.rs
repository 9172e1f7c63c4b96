use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn curvlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvlab"))
        .args(args)
        .current_dir(env!("CARGO_TARGET_TMPDIR"))
        .env_remove("CURVLAB_CATALOG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn catalog() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

#[test]
fn classify_output_matches_golden_files() {
    for name in ["vaidya", "schwarzschild", "ludwig-edgar", "minkowski", "sphere2"] {
        let o = curvlab(&["classify", name]);
        assert_eq!(o.status.code(), Some(0));
        let golden = std::fs::read_to_string(catalog().join(format!("{name}.report"))).unwrap();
        assert_eq!(stdout(&o), golden, "{name}");
    }
}

#[test]
fn compute_dumps_text_and_json_lines() {
    let o = curvlab(&["compute", "vaidya", "R"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "R[1][2][1][2] = -2*m(u)/r^3"), "{text}");
    assert!(text.lines().any(|l| l == "R[3][4][3][4] = 2*r*sin(theta)^2*m(u)"), "{text}");

    let o = curvlab(&["compute", "vaidya", "S", "--dump-format", "json-lines"]);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["name"], "S");
    assert_eq!(lines[0]["index"], serde_json::json!([1, 1]));
    assert_eq!(lines[0]["value"], "2*m'(u)/r^2");

    let o = curvlab(&["compute", "vaidya", "kappa"]);
    assert_eq!(stdout(&o), "kappa = 0\n");
}

#[test]
fn compute_writes_to_a_file() {
    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("vaidya-qgc.txt");
    let _ = std::fs::remove_file(&out);
    let o = curvlab(&["compute", "vaidya", "Q:g.C", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().any(|l| l == "Q:g.C[1][3][3][4][1][4] = 3*r*sin(theta)^2*m(u) - 6*sin(theta)^2*m(u)^2"), "{text}");
}

#[test]
fn check_reports_verdicts_through_exit_codes() {
    let o = curvlab(&["check", "vaidya", "C.C = L*Q(g,C)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "holds; witness L = m(u)/r^3\n");

    let o = curvlab(&["check", "vaidya", "R.R = L*Q(g,R)"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("fails; witness L["), "{text}");
    assert!(text.contains("-2*m(u)/r^3") && text.contains("= m(u)/r^3"), "{text}");
}

#[test]
fn input_errors_exit_with_two() {
    let o = curvlab(&["check", "vaidya", "R.R = L*Q(g,R,)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("expected"));

    assert_eq!(curvlab(&["compute", "vaidya", "Z"]).status.code(), Some(2));
    assert_eq!(curvlab(&["compute", "no-such-metric", "R"]).status.code(), Some(2));
    assert_eq!(curvlab(&["compute", "sphere2", "C"]).status.code(), Some(2));
}

#[test]
fn degenerate_metric_exits_with_three() {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join("degenerate.metric");
    std::fs::write(&path, "coords x y\ng[1][1] = 1\ng[1][2] = 1\ng[2][2] = 1\n").unwrap();
    let o = curvlab(&["compute", path.to_str().unwrap(), "R"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate"));
}

#[test]
fn compare_marks_unevaluated_rows() {
    let o = curvlab(&["compare", "vaidya", "ludwig-edgar"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = |name: &str| text.lines().find(|l| l.split_whitespace().next() == Some(name)).unwrap_or_else(|| panic!("{name} in {text}")).to_string();
    assert!(row("venzi-r-space").ends_with("n/a"));
    assert!(row("semisymmetric").ends_with("differ"));
    assert!(row("ricci-simple").ends_with("agree"));
}

#[test]
fn catalog_directory_can_be_overridden() {
    let o = curvlab(&["catalog", "list"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("vaidya\t"));

    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("alt-catalog");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("vaidya.metric"), "coords t x\ng[1][1] = -1\ng[2][2] = 1\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_curvlab"))
        .args(["compute", "vaidya", "kappa"])
        .env("CURVLAB_CATALOG", &dir)
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "kappa = 0\n");
    let o = Command::new(env!("CARGO_BIN_EXE_curvlab"))
        .args(["compute", "vaidya", "g"])
        .env("CURVLAB_CATALOG", &dir)
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "g[1][1] = -1\ng[2][2] = 1\n");
}
