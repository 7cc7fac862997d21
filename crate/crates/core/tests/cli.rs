use std::fs;
use std::process::{Command, Output};

use mubqkd::protocol::{read_jsonl, Summary};

fn mubqkd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mubqkd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn verify_exit_codes() {
    let out = mubqkd(&["verify", "--p", "3", "--n", "1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["unbiasedness"]["max_cross_deviation"].as_f64().unwrap() < 1e-9);
    assert_eq!(report["passed"], true);

    let out = mubqkd(&["verify", "--p", "3", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["unbiasedness"]["basis_count"], 10);

    assert_eq!(code(&mubqkd(&["verify", "--p", "4", "--n", "1"])), 2);
    assert_eq!(code(&mubqkd(&["verify", "--p", "3", "--n", "5"])), 2);
    assert_eq!(code(&mubqkd(&["verify", "--p", "3", "--modulus", "2,0,1", "--n", "2"])), 2);
    assert_eq!(code(&mubqkd(&["verify", "--p", "3", "--bogus"])), 2);
}

#[test]
fn verify_accepts_modulus_override() {
    let out = mubqkd(&["verify", "--p", "3", "--n", "2", "--modulus", "2,2,1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["modulus"], serde_json::json!([2, 2, 1]));
}

#[test]
fn bases_dump() {
    let out = mubqkd(&["bases", "--p", "3"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("basis,b_index,c_index,n_index,re,im"));
    assert_eq!(text.lines().count(), 1 + 4 * 9);
}

#[test]
fn wigner_dumps() {
    let out = mubqkd(&["wigner", "--p", "3", "--b", "1", "--c", "0"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let nonzero: Vec<&str> = text.lines().skip(1).filter(|l| !l.ends_with(",0")).collect();
    assert_eq!(nonzero.len(), 3);
    for row in nonzero {
        let cols: Vec<usize> = row.split(',').take(2).map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols[1], 2 * cols[0] % 3);
    }
    assert_eq!(mubqkd(&["wigner", "--p", "3", "--b", "1", "--c", "0"]).stdout, out.stdout);

    let out = mubqkd(&["wigner", "--p", "3", "--b", "0", "--c", "0", "--pair"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "q1,p1,q2,p2,value");
    assert_eq!(rows.len(), 10);
    for row in &rows[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[0], cols[2]);
    }

    assert_eq!(code(&mubqkd(&["wigner", "--p", "9", "--b", "1"])), 2);
}

#[test]
fn session_clean_and_detected() {
    let dir = tempfile::tempdir().unwrap();
    let tx = dir.path().join("t.jsonl");
    let st = dir.path().join("s.json");
    let args = |extra: &[&str]| {
        let mut v = vec!["session", "--out", tx.to_str().unwrap(), "--stats", st.to_str().unwrap()];
        v.extend_from_slice(extra);
        v.into_iter().map(String::from).collect::<Vec<_>>()
    };
    let run = |a: Vec<String>| Command::new(env!("CARGO_BIN_EXE_mubqkd")).args(a).output().unwrap();

    let out = run(args(&["--p", "7", "--rounds", "1000", "--eve", "none", "--mode", "oracle", "--seed", "42"]));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let summary: Summary = serde_json::from_str(&fs::read_to_string(&st).unwrap()).unwrap();
    assert_eq!(summary.bit_error_rate, Some(0.0));
    assert_eq!(read_jsonl(fs::read(&tx).unwrap().as_slice()).unwrap().len(), 1000);

    let out = run(args(&[
        "--p", "7", "--rounds", "2000", "--check-frac", "0.5", "--eve", "uniform-all", "--seed", "42",
    ]));
    assert_eq!(code(&out), 3);
    let summary: Summary = serde_json::from_str(&fs::read_to_string(&st).unwrap()).unwrap();
    let rate = summary.check_pass_rate.unwrap();
    let n = summary.check_rounds as f64;
    assert!((rate - 0.25).abs() < 3.0 * (0.25 * 0.75 / n).sqrt(), "{rate}");
    assert!(String::from_utf8_lossy(&out.stdout).contains("DETECTED"));
}

#[test]
fn session_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for k in 0..2 {
        let tx = dir.path().join(format!("t{k}.jsonl"));
        let st = dir.path().join(format!("s{k}.json"));
        let out = mubqkd(&[
            "session", "--p", "5", "--rounds", "300", "--eve", "uniform-quadratic", "--mode", "swap",
            "--reps", "2", "--delta", "3", "--seed", "7", "--out", tx.to_str().unwrap(), "--stats",
            st.to_str().unwrap(),
        ]);
        assert!(code(&out) == 0 || code(&out) == 3);
        files.push((fs::read(tx).unwrap(), fs::read(st).unwrap()));
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn session_config_file_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let tx = dir.path().join("t.jsonl");
    let st = dir.path().join("s.json");
    fs::write(
        &cfg,
        r#"{"field": {"p": 3, "n": 2}, "rounds": 50, "check_fraction": 0.5, "eve": "none", "seed": 3}"#,
    )
    .unwrap();
    let out = mubqkd(&[
        "session", "--config", cfg.to_str().unwrap(), "--out", tx.to_str().unwrap(), "--stats",
        st.to_str().unwrap(), "--no-transcript",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!tx.exists());
    let summary: Summary = serde_json::from_str(&fs::read_to_string(&st).unwrap()).unwrap();
    assert_eq!(summary.rounds, 50);
    assert_eq!(summary.config.field.modulus, Some(vec![1, 0, 1]));

    fs::write(&cfg, r#"{"field": {"p": 3, "n": 1}, "rounds": 5, "unknown": true}"#).unwrap();
    let out = mubqkd(&["session", "--config", cfg.to_str().unwrap(), "--stats", st.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    for bad in [
        vec!["session", "--p", "6", "--rounds", "5"],
        vec!["session", "--p", "5", "--rounds", "0"],
        vec!["session", "--p", "5", "--rounds", "5", "--check-frac", "2"],
        vec!["session", "--p", "5", "--rounds", "5", "--eve", "sometimes"],
        vec!["session", "--p", "5", "--rounds", "5", "--mode", "psychic"],
        vec!["session", "--p", "5", "--rounds", "5", "--reps", "0"],
        vec!["session", "--p", "5", "--rounds", "5", "--b", "1"],
        vec!["session", "--rounds", "5"],
    ] {
        let mut bad = bad.clone();
        bad.extend(["--stats", st.to_str().unwrap(), "--no-transcript"]);
        assert_eq!(code(&mubqkd(&bad)), 2, "{bad:?}");
    }
}
