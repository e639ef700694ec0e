//! End-to-end tests that drive the compiled `mmspp` binary the way a user
//! would: write files, run subcommands, inspect exit codes and output.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicU64, Ordering};

const FAN: &str = "mmspp 1\narc s a\narc s b\narc a c\ncommodity s a\ncommodity s b\ncommodity s c\n";

const CHAIN_CLAW: &str = "mmspp 1\n\
arc r u\narc u v\narc v w1\narc v w2\narc v w3\narc v w4\narc v w5\n\
commodity r w1\ncommodity u w1\ncommodity r v\ncommodity r w2\n\
commodity v w3\ncommodity v w4\ncommodity u w5\n";

const STAR: &str = "mmspp 1\n\
arc s1 v\narc s2 v\narc v t1\narc v t2\narc v t3\n\
commodity s1 t1\ncommodity s1 t2\ncommodity s2 t3\n";

const JUNCTION: &str = "mmspp 1\n\
arc a c\narc b c\narc c d\narc c e\n\
commodity a d\ncommodity b e\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mmspp"))
}

fn scratch(name: &str) -> PathBuf {
    static NEXT: AtomicU64 = AtomicU64::new(0);
    let dir = std::env::temp_dir().join("mmspp-cli-e2e");
    std::fs::create_dir_all(&dir).unwrap();
    let tag = NEXT.fetch_add(1, Ordering::Relaxed);
    dir.join(format!("{}-{}-{name}", std::process::id(), tag))
}

fn write(name: &str, content: &str) -> PathBuf {
    let path = scratch(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// solve → verify must round-trip cleanly for every algorithm choice.
#[test]
fn solve_then_verify_round_trips_across_algorithms() {
    let cases = [
        (FAN, "single-source"),
        (CHAIN_CLAW, "out-tree"),
        (STAR, "tree"),
        (JUNCTION, "tree"),
        (FAN, "auto"),
        (CHAIN_CLAW, "auto"),
        (STAR, "auto"),
        (JUNCTION, "auto"),
    ];
    for (text, algo) in cases {
        let inst = write("inst.mmspp", text);
        let out = bin().args(["solve"]).arg(&inst).args(["--algo", algo]).output().unwrap();
        assert!(out.status.success(), "solve --algo {algo} failed: {}", stderr_of(&out));
        let sol = scratch("sol.txt");
        std::fs::write(&sol, stdout_of(&out)).unwrap();
        let ver = bin().arg("verify").arg(&inst).arg(&sol).output().unwrap();
        assert!(
            ver.status.success(),
            "verify rejected honest output for --algo {algo}:\n{}",
            stdout_of(&ver)
        );
        assert!(stdout_of(&ver).contains("verdict: ok"));
    }
}

#[test]
fn verify_flags_a_tampered_degree() {
    let inst = write("inst.mmspp", FAN);
    let out = bin().arg("solve").arg(&inst).output().unwrap();
    let tampered = stdout_of(&out).replace("max_out_degree: 2", "max_out_degree: 1");
    assert_ne!(tampered, stdout_of(&out), "fixture drifted; update the test");
    let sol = write("sol.txt", &tampered);
    let ver = bin().arg("verify").arg(&inst).arg(&sol).output().unwrap();
    assert_eq!(ver.status.code(), Some(4));
    assert!(stdout_of(&ver).contains("verdict: invalid"));
}

#[test]
fn malformed_input_exits_with_usage_code() {
    let bad = write("bad.mmspp", "mmspp 1\narc s\n");
    let out = bin().arg("solve").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("line 2"), "error should cite the line");

    let missing = scratch("missing.mmspp");
    let out = bin().arg("solve").arg(&missing).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shape_mismatches_exit_with_shape_code() {
    let inst = write("inst.mmspp", JUNCTION);
    let out = bin().arg("solve").arg(&inst).args(["--algo", "single-source"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr_of(&out));
    let out = bin().arg("solve").arg(&inst).args(["--algo", "out-tree"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn infeasible_target_exits_four_but_still_reports() {
    let inst = write("inst.mmspp", FAN);
    let out = bin()
        .arg("solve")
        .arg(&inst)
        .args(["--algo", "single-source", "--target", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let text = stdout_of(&out);
    assert!(text.contains("status: infeasible-at-target"));
    assert!(text.contains("certificate:"), "refutation must carry a witness");

    let zero = bin()
        .arg("solve")
        .arg(&inst)
        .args(["--algo", "single-source", "--target", "0"])
        .output()
        .unwrap();
    assert_eq!(zero.status.code(), Some(2), "target 0 is a usage error");
}

#[test]
fn oracle_node_cap_env_and_flag_interact() {
    let inst = write("inst.mmspp", FAN);
    let ok = bin().arg("oracle").arg(&inst).output().unwrap();
    assert!(ok.status.success());
    assert!(stdout_of(&ok).contains("max_out_degree: 2"));

    let capped = bin()
        .arg("oracle")
        .arg(&inst)
        .env("MMSPP_ORACLE_MAX_NODES", "3")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(5), "node cap must trip the limits code");

    let overridden = bin()
        .arg("oracle")
        .arg(&inst)
        .env("MMSPP_ORACLE_MAX_NODES", "3")
        .args(["--max-nodes", "14"])
        .output()
        .unwrap();
    assert!(overridden.status.success(), "explicit flag outranks the environment");

    let garbage = bin()
        .arg("oracle")
        .arg(&inst)
        .env("MMSPP_ORACLE_MAX_NODES", "many")
        .output()
        .unwrap();
    assert_eq!(garbage.status.code(), Some(2));
}

#[test]
fn oracle_self_check_reports_ok() {
    let inst = write("inst.mmspp", CHAIN_CLAW);
    let out = bin().arg("oracle").arg(&inst).arg("--self-check").output().unwrap();
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("self-check: ok"));
}

#[test]
fn generated_instances_feed_back_into_solve() {
    // Every generator subcommand must emit text the solver accepts.
    let sets = write("sets.txt", "1 2\n2 3\n1 3\n");
    let gens: Vec<Vec<String>> = vec![
        vec!["gen".into(), "hitting-set".into(), "--sets".into(), sets.display().to_string(), "--budget".into(), "2".into()],
        vec!["gen".into(), "svbp".into(), "--weights".into(), "1,-2,3".into(), "--target".into(), "2".into()],
        vec!["gen".into(), "star-gap".into(), "--n".into(), "2".into()],
        vec!["gen".into(), "random".into(), "--shape".into(), "out-tree".into(), "--n".into(), "9".into(), "--sources".into(), "2".into(), "--seed".into(), "7".into()],
    ];
    for args in gens {
        let out = bin().args(&args).output().unwrap();
        assert!(out.status.success(), "{args:?} failed: {}", stderr_of(&out));
        let inst = write("gen.mmspp", &stdout_of(&out));
        let solved = bin().arg("solve").arg(&inst).output().unwrap();
        assert!(solved.status.success(), "solve choked on {args:?}: {}", stderr_of(&solved));
        let text = stdout_of(&solved);
        assert!(text.contains("max_out_degree:"), "no degree in output for {args:?}");
    }
}

#[test]
fn gen_rejects_unknown_shape() {
    let out = bin()
        .args(["gen", "random", "--shape", "pentagon", "--n", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn trace_goes_to_stderr_and_keeps_stdout_parsable() {
    let inst = write("inst.mmspp", CHAIN_CLAW);
    let out = bin()
        .arg("solve")
        .arg(&inst)
        .args(["--algo", "out-tree", "--trace-contractions"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stderr_of(&out).contains("contraction 1:"), "trace missing from stderr");
    let sol = write("sol.txt", &stdout_of(&out));
    let ver = bin().arg("verify").arg(&inst).arg(&sol).output().unwrap();
    assert!(ver.status.success(), "traced run produced unverifiable output");
}

#[test]
fn bench_emits_deterministic_csv() {
    let run = || {
        let out = bin()
            .args([
                "bench",
                "--shape",
                "single-source-tree",
                "--sizes",
                "5,8",
                "--seeds",
                "2",
                "--oracle",
                "--threads",
                "2",
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr_of(&out));
        stdout_of(&out)
    };
    let (a, b) = (run(), run());
    let strip = |text: &str| -> Vec<String> {
        text.lines()
            .map(|l| l.rsplit_once(',').map(|(head, _millis)| head.to_string()).unwrap_or_default())
            .collect()
    };
    assert_eq!(strip(&a), strip(&b), "bench rows must be stable across runs");
    let rows: Vec<&str> = a.lines().collect();
    assert_eq!(rows[0], "shape,n,seed,algorithm,value,optimum,millis");
    assert_eq!(rows.len(), 1 + 4, "two sizes x two seeds");
    for row in &rows[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 7);
        assert_eq!(cols[4], cols[5], "single-source solver is exact; value must match oracle");
    }
}

#[test]
fn lb_exhaustive_and_named_witness_agree_on_the_fan() {
    let inst = write("inst.mmspp", FAN);
    let exhaustive = bin().arg("lb").arg(&inst).arg("--exhaustive").output().unwrap();
    assert!(exhaustive.status.success());
    let text = stdout_of(&exhaustive);
    assert!(text.contains("value: 2"), "exhaustive bound should reach the optimum:\n{text}");

    let named = bin()
        .arg("lb")
        .arg(&inst)
        .args(["--witness", "s"])
        .output()
        .unwrap();
    assert!(named.status.success(), "{}", stderr_of(&named));
    assert!(stdout_of(&named).contains("value: 2"));

    let bogus = bin()
        .arg("lb")
        .arg(&inst)
        .args(["--witness", "nosuch"])
        .output()
        .unwrap();
    assert_eq!(bogus.status.code(), Some(2));
}
