use std::process::Command;

fn stars() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stars"))
}

#[test]
fn bounds_prints_the_additive_values() {
    let out = stars()
        .args(["bounds", "--problem", "f1", "--n", "8", "--noise", "add", "--sigma", "1e-3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let record = text.lines().last().unwrap();
    assert!(record.contains("mu_star=0.0061790110386744"), "{record}");
    assert!(record.contains("N=56568"), "{record}");
}

#[test]
fn run_writes_trials_and_aggregates() {
    let dir = tempfile::tempdir().unwrap();
    let out = stars()
        .args(["run", "--noise", "add", "--sigma", "1e-3", "--solver", "stars,rg", "--seeds", "3", "--budget", "200", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for solver in ["stars", "rg"] {
        let agg = std::fs::read_to_string(dir.path().join("add_1e-3").join(format!("{solver}.csv"))).unwrap();
        assert!(agg.starts_with("nevals,mean,median,q25,q75,min,max\n"));
        for trial in 0..3 {
            assert!(dir.path().join("add_1e-3").join(solver).join(format!("trial_{trial}.csv")).exists());
        }
    }
}

#[test]
fn bad_arguments_exit_one() {
    let out = stars().args(["bounds", "--problem", "f1", "--n", "0", "--noise", "add", "--sigma", "1e-3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let out = stars()
        .args(["run", "--noise", "mult", "--sigma", "0.9", "--solver", "stars", "--budget", "10", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sigma"));
    let out = stars().arg("nonsense").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
