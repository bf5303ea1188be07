use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn maxprod(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxprod")).args(args).current_dir(cwd).output().expect("spawn maxprod")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn construct_power_weight() {
    let dir = tempfile::tempdir().unwrap();
    let o = maxprod(&["construct", "--weight", "pow:beta=1", "--K", "12", "--out", "c"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("c/construction.txt")).unwrap();
    let csv = fs::read_to_string(dir.path().join("c/validation.csv")).unwrap();
    assert!(!text.is_empty() && csv.lines().count() > 10);
}

#[test]
fn inadmissible_gamma_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = maxprod(&["construct", "--weight", "pow:beta=1", "--gamma", "1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not admissible"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["construct"],
        &["verify", "--weight", "pow:beta=1", "--decades", "2"],
        &["eval", "--weight", "pow:beta=1", "--eps", "0.1", "--theta-num", "1", "--theta-den", "0"],
        &["construct", "--weight", "pow:beta=-1"],
        &["verify", "--weight", "pow:beta=1", "--tol", "0.7"],
    ];
    for args in cases {
        assert_eq!(maxprod(args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn eval_at_origin_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = maxprod(&["eval", "--weight", "pow:beta=1", "--eps", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("f0 = 1.0000000000000000e0+0.0000000000000000e0i"), "{out}");
    assert!(out.contains("f1 = 1.0000000000000000e0+0.0000000000000000e0i"), "{out}");
    assert!(out.contains("log omega = 0.0000000000000000e0"), "{out}");
}

#[test]
fn eval_at_a_zero() {
    // first zero circle of f₀ for γ = 5: s = 2^{-10/64}, zeros at angles π(2l+1)/64
    let dir = tempfile::tempdir().unwrap();
    let eps = format!("{:.17e}", 1.0 - 2f64.powf(-10.0 / 64.0));
    let o = maxprod(
        &["eval", "--weight", "pow:beta=1", "--gamma", "5", "--eps", &eps, "--theta-num", "1", "--theta-den", "128"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("log|f0| = -inf"), "{}", stdout(&o));
}

#[test]
fn range_shortfall_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = maxprod(&["verify", "--weight", "pow:beta=1", "--K", "8", "--decades", "8", "--out", "v"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("decades up to 5"));
}

#[test]
fn verify_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &str, threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_maxprod"))
            .args(["verify", "--weight", "exploglog", "--decades", "6", "--angles", "1024", "--out", out])
            .env("MAXPROD_THREADS", threads)
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert!(matches!(o.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&o.stderr));
        stdout(&o)
    };
    let (a, b) = (run("a", "1"), run("b", "3"));
    assert_eq!(a, b.replace("written to b", "written to a"));
    let files = [
        "construction.txt",
        "validation.csv",
        "cover.csv",
        "density.csv",
        "r1.csv",
        "radii.csv",
        "counting.csv",
        "jensen.csv",
        "summary.json",
    ];
    for f in files {
        let x = fs::read(dir.path().join("a").join(f)).unwrap();
        let y = fs::read(dir.path().join("b").join(f)).unwrap();
        assert!(x == y, "{f} differs between runs");
    }
    let summary: String = fs::read_to_string(dir.path().join("a/summary.json")).unwrap();
    assert!(summary.contains("\"covering\""), "{summary}");
}
