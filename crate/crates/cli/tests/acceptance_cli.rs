//! Acceptance criterion 10: every command with a fixed seed reproduces
//! byte-identical outputs across two runs, over the full command matrix.
//! Also pins the documented exit codes.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

fn minrep() -> Command {
    Command::new(env!("CARGO_BIN_EXE_minrep"))
}

fn run_ok(dir: &Path, args: &[&str]) {
    let out = minrep().current_dir(dir).args(args).output().expect("spawn minrep");
    assert!(
        out.status.success(),
        "minrep {args:?} failed:\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let entry = entry.unwrap();
        files.insert(
            entry.file_name().to_string_lossy().into_owned(),
            std::fs::read(entry.path()).unwrap(),
        );
    }
    files
}

/// The full command matrix: generation, every pass, costs, all four
/// reductions, merging, coloring, brute force, verification, and a gap run.
fn run_matrix(dir: &Path) {
    run_ok(dir, &[
        "gen", "--left", "3", "--right", "3", "--labels", "2", "2", "--degree", "2", "--eps",
        "1/4", "--seed", "7", "--out", "base.lc", "--report", "gen.rep",
    ]);
    run_ok(dir, &[
        "transform", "rightdeg", "base.lc", "rd.lc", "--d", "2", "--seed", "11", "--report",
        "rd.rep",
    ]);
    run_ok(dir, &["transform", "regularize", "rd.lc", "reg.lc", "--report", "reg.rep"]);
    run_ok(dir, &[
        "transform", "sparsify", "reg.lc", "sp.lc", "--gamma", "1/3", "--seed", "13", "--report",
        "sp.rep",
    ]);
    run_ok(dir, &[
        "transform", "trim", "sp.lc", "tr.lc", "--gamma", "1/3", "--report", "tr.rep",
    ]);
    run_ok(dir, &[
        "transform", "pipeline", "base.lc", "pipe.lc", "--gamma", "1/2", "--eps", "1/8", "--seed",
        "3", "--report", "pipe.rep",
    ]);
    run_ok(dir, &["costs", "base.lc", "costed.lc", "--eps-budget", "1/4", "--report", "costs.rep"]);
    for (gadget, file) in [
        ("rootedDirected", "dir.nw"),
        ("rootedUndirected", "undir.nw"),
        ("sndp", "sndp.nw"),
        ("kroute", "kroute.nw"),
    ] {
        run_ok(dir, &["reduce", gadget, "costed.lc", file, "--report", &format!("{file}.rep")]);
    }
    run_ok(dir, &["merge", "dir.nw", "dir-merged.nw", "--report", "merge.rep"]);
    // degree-1 source: classes are singletons or fully territory-disjoint,
    // so the k-route merge certificate passes
    run_ok(dir, &[
        "gen", "--left", "3", "--right", "3", "--labels", "2", "2", "--degree", "1", "--seed",
        "8", "--out", "sparse.lc",
    ]);
    run_ok(dir, &["costs", "sparse.lc", "sparse-costed.lc"]);
    run_ok(dir, &["reduce", "kroute", "sparse-costed.lc", "kroute-sparse.nw"]);
    run_ok(dir, &["merge", "kroute-sparse.nw", "kroute-merged.nw", "--report", "kmerge.rep"]);
    run_ok(dir, &["color", "costed.lc", "--report", "color.rep"]);
    run_ok(dir, &["bruteforce", "costed.lc", "--report", "bf-lc.rep"]);
    run_ok(dir, &[
        "bruteforce", "dir.nw", "--layout", "dir.nw.layout", "--out", "dir.sol", "--report",
        "bf-net.rep",
    ]);
    run_ok(dir, &[
        "verify", "dir.nw", "dir.sol", "--claims", "--layout", "dir.nw.layout", "--report",
        "verify.rep",
    ]);
    run_ok(dir, &[
        "gap", "--gamma", "1/2", "--eps", "0", "--seed", "5", "--gadget", "rootedDirected",
        "--report", "gap.rep",
    ]);
}

#[test]
fn criterion_10_byte_identical_reruns() {
    let run_a = tempfile::tempdir().unwrap();
    let run_b = tempfile::tempdir().unwrap();
    run_matrix(run_a.path());
    run_matrix(run_b.path());

    let a = snapshot(run_a.path());
    let b = snapshot(run_b.path());
    assert_eq!(
        a.keys().collect::<Vec<_>>(),
        b.keys().collect::<Vec<_>>(),
        "runs produced different file sets"
    );
    let mut compared = 0;
    for (name, bytes) in &a {
        assert_eq!(bytes, &b[name], "file {name} differs between runs");
        compared += 1;
    }
    assert!(compared >= 20, "matrix produced only {compared} files");
    println!("acceptance 10 cli-determinism: PASS ({compared} files byte-identical)");
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();

    // usage error: missing input file
    let out = minrep().current_dir(dir).args(["bruteforce", "missing.lc"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // usage error: infeasible generation profile
    let out = minrep()
        .current_dir(dir)
        .args(["gen", "--left", "2", "--right", "4", "--labels", "2", "2", "--degree", "5",
               "--seed", "1", "--out", "x.lc"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    run_ok(dir, &[
        "gen", "--left", "2", "--right", "2", "--labels", "2", "2", "--degree", "1", "--seed",
        "2", "--out", "ok.lc",
    ]);
    run_ok(dir, &["costs", "ok.lc", "ok-costed.lc"]);
    run_ok(dir, &["reduce", "rootedDirected", "ok-costed.lc", "ok.nw"]);

    // infeasible verdict: the empty solution buys nothing
    std::fs::write(dir.join("empty.sol"), "").unwrap();
    let out = minrep()
        .current_dir(dir)
        .args(["verify", "ok.nw", "empty.sol"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // cap exceeded
    let out = minrep()
        .current_dir(dir)
        .args(["bruteforce", "ok.nw", "--cap", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // dense sources trip the k-route merge disjointness certificate
    run_ok(dir, &[
        "gen", "--left", "3", "--right", "3", "--labels", "2", "2", "--degree", "2", "--seed",
        "7", "--out", "dense.lc",
    ]);
    run_ok(dir, &["costs", "dense.lc", "dense-costed.lc"]);
    run_ok(dir, &["reduce", "kroute", "dense-costed.lc", "dense.nw"]);
    let out = minrep()
        .current_dir(dir)
        .args(["merge", "dense.nw", "dense-merged.nw"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("share vertex"));

    // feasible solution exits 0
    run_ok(dir, &["bruteforce", "ok.nw", "--out", "ok.sol"]);
    run_ok(dir, &["verify", "ok.nw", "ok.sol"]);
}
