use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shockreg"))
}

fn run(args: &[&str], out: &Path) -> i32 {
    let s = bin().args(args).arg("--out").arg(out).output().unwrap();
    s.status.code().unwrap()
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn repeated_runs_write_identical_files() {
    let cases: [&[&str]; 7] = [
        &["polar", "--theta-w", "55"],
        &["reflect", "--theta-w1", "60", "--theta-w2", "70"],
        &["angles", "--samples", "60"],
        &["vorticity", "--seed", "7", "--samples", "200"],
        &["commutator", "--seed", "3", "--eps-schedule", "1/8,1/16,1/32"],
        &["identity", "--seed", "11"],
        &["contradict", "--theta-w", "55"],
    ];
    for args in cases {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        assert_eq!(run(args, a.path()), 0, "{args:?}");
        assert_eq!(run(args, b.path()), 0, "{args:?}");
        let (fa, fb) = (files(a.path()), files(b.path()));
        assert!(!fa.is_empty());
        assert_eq!(fa, fb, "{args:?}");
    }
}

#[test]
fn seeds_change_random_outputs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run(&["vorticity", "--seed", "1", "--samples", "20"], a.path());
    run(&["vorticity", "--seed", "2", "--samples", "20"], b.path());
    assert_ne!(files(a.path()), files(b.path()));
}

#[test]
fn straight_shock_is_rejected() {
    let d = tempfile::tempdir().unwrap();
    let out = bin().args(["reflect", "--straight", "--out"]).arg(d.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("not a straight segment"), "{msg}");
    assert!(d.path().join("validation.json").exists());
}

#[test]
fn exit_codes_for_bad_input() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run(&["polar", "--gamma", "0.9"], d.path()), 2);
    assert_eq!(run(&["angles", "--rho0", "2", "--rho1", "1"], d.path()), 2);
    assert_eq!(run(&["reflect", "--theta-w", "30"], d.path()), 2);
    assert_eq!(run(&["identity", "--m-schedule", "0.5"], d.path()), 2);
    let blocker = d.path().join("file");
    fs::write(&blocker, "x").unwrap();
    assert_eq!(run(&["polar"], &blocker), 4);
}

#[test]
fn settings_file_and_flag_overrides() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("run.txt");
    fs::write(&cfg, "# Lighthill data\nkind = lighthill\ngamma = 5\nrho1 = 1.1\ntheta_w = 45\nformat = json\n").unwrap();
    let out = d.path().join("o");
    let s = bin().args(["reflect", "--theta-w", "60", "--config"]).arg(&cfg).arg("--out").arg(&out).output().unwrap();
    assert_eq!(s.status.code(), Some(0), "{}", String::from_utf8_lossy(&s.stderr));
    let g = fs::read_to_string(out.join("geometry.json")).unwrap();
    assert!(g.contains("Lighthill"));
    let s = bin().args(["angles", "--format", "json", "--samples", "10", "--out"]).arg(&out).output().unwrap();
    assert_eq!(s.status.code(), Some(0));
    assert!(out.join("angle_sweep.json").exists());
}
