use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ntr(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ntr")).current_dir(dir).env_remove("NTR_OUT_DIR").args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn simulate_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let o = ntr(dir.path(), &["simulate", "--n", "100", "--rates", "1,0.25", "--seed", "3", "--out", "d.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("seed = 3  # flag"));
    let text = fs::read_to_string(dir.path().join("d.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("time,event"));
    assert_eq!(lines.count(), 100);

    let o = ntr(
        dir.path(),
        &["fit", "--data", "d.csv", "--prior", "beta:c=1", "--out", "post.csv", "--estimates", "an.csv"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let post = fs::read_to_string(dir.path().join("post.csv")).unwrap();
    assert!(post.starts_with("t_i,y,delta_n,mean,var\n"));
    let rows: Vec<Vec<f64>> =
        post.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert!(!rows.is_empty());
    for w in rows.windows(2) {
        assert!(w[0][0] < w[1][0] && w[0][3] <= w[1][3]);
    }
    assert!(fs::read_to_string(dir.path().join("an.csv")).unwrap().starts_with("time,value\n"));
}

#[test]
fn outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    assert!(ntr(dir.path(), &["simulate", "--n", "60", "--seed", "8", "--out", "d.csv"]).status.success());
    for out in ["a.csv", "b.csv"] {
        let o = ntr(
            dir.path(),
            &["sample", "--data", "d.csv", "--prior", "alpha:a=0.5", "--draws", "5", "--seed", "4", "--out", out],
        );
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.csv")).unwrap());
    assert!(a.starts_with(b"draw,time,jump_size\n"));
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    fs::create_dir(&out).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_ntr"))
        .current_dir(dir.path())
        .env("NTR_OUT_DIR", &out)
        .args(["simulate", "--n", "5"])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.join("data.csv").exists());
}

#[test]
fn coverage_svg_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = ntr(
        dir.path(),
        &[
            "coverage", "--alpha", "0.5,1", "--n", "10,20", "--reps", "3", "--draws", "50", "--format", "svg", "--out",
            "c.svg",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let svg = fs::read_to_string(dir.path().join("c.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = ntr(dir.path(), &["coverage", "--level", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("level must lie in (0,1)"));

    let o = ntr(dir.path(), &["fit", "--unknown", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = ntr(dir.path(), &["fit", "--data", "missing.csv"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr(&o).lines().filter(|l| l.starts_with("error")).count(), 1);

    fs::write(dir.path().join("bad.csv"), "time,event\n1.0,2\n").unwrap();
    let o = ntr(dir.path(), &["fit", "--data", "bad.csv"]);
    assert_eq!(o.status.code(), Some(3));

    assert_eq!(ntr(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.conf"), "# simulation\nn = 7\nseed = 1\n").unwrap();
    let o = ntr(dir.path(), &["simulate", "--config", "run.conf", "--seed", "2", "--out", "d.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let err = stderr(&o);
    assert!(err.contains("seed = 2  # flag") && err.contains("n = 7  # file"), "{err}");
    assert_eq!(fs::read_to_string(dir.path().join("d.csv")).unwrap().lines().count(), 8);
}

#[test]
fn conditions_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = ntr(dir.path(), &["conditions", "--prior", "alpha:a=0.25"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("a2_alpha_hat = 0.25"), "{out}");
}
