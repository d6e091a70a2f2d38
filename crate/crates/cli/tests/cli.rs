use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn gccodes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gccodes")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const PARAMS: [&str; 8] = ["--k", "16", "--ell", "4", "--c", "2", "--delta", "1"];

fn with_params<'a>(head: &[&'a str], tail: &[&'a str]) -> Vec<&'a str> {
    head.iter().chain(PARAMS.iter()).chain(tail).copied().collect()
}

#[test]
fn encode_worked_example() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "u.txt", "1110000011010001\n");
    let out = gccodes(&with_params(&["encode"], &["--in", &input]));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "11100000110100010000110000111111\n");
}

#[test]
fn decode_success_and_failure_exit_codes() {
    let dir = TempDir::new().unwrap();
    // Bit 14 deleted from the first worked codeword.
    let ok = write(dir.path(), "ok.txt", "1110000011010010000110000111111\n");
    let out = gccodes(&with_params(&["decode"], &["--in", &ok]));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1110000011010001\n");

    // Same position deleted from the second worked codeword.
    let u = write(dir.path(), "u2.txt", "1101000010000101");
    let x = String::from_utf8(gccodes(&with_params(&["encode"], &["--in", &u])).stdout).unwrap();
    let mut y: Vec<char> = x.trim().chars().collect();
    y.remove(13);
    let bad = write(dir.path(), "bad.txt", &y.into_iter().collect::<String>());
    let out = gccodes(&with_params(&["decode"], &["--in", &bad]));
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "2");
    assert_eq!(lines.len(), 3);
    assert!(lines.contains(&"1101000010000101"));
}

#[test]
fn decode_no_candidate() {
    let dir = TempDir::new().unwrap();
    // First message bit flipped: zero edits, parities no longer match.
    let f = write(dir.path(), "nc.txt", "01100000110100010000110000111111\n");
    let out = gccodes(&with_params(&["decode"], &["--in", &f]));
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_input_exits_one() {
    let dir = TempDir::new().unwrap();
    let malformed = write(dir.path(), "m.txt", "10201\n");
    let out = gccodes(&with_params(&["decode"], &["--in", &malformed]));
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    let short = write(dir.path(), "s.txt", "0101\n");
    assert_eq!(gccodes(&with_params(&["decode"], &["--in", &short])).status.code(), Some(1));
    let out = gccodes(&["encode", "--k", "16", "--ell", "4", "--c", "1", "--delta", "1", "--in", &short]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn corrupt_is_seeded() {
    let dir = TempDir::new().unwrap();
    let x = write(dir.path(), "x.txt", "11100000110100010000110000111111\n");
    let run = |seed: &str| gccodes(&["corrupt", "--in", &x, "--d", "2", "--seed", seed]);
    let (a, b) = (run("7"), run("7"));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    assert_eq!(String::from_utf8(a.stdout).unwrap().trim().len(), 30);
    assert!(String::from_utf8(a.stderr).unwrap().contains("positions"));
    let out = gccodes(&["corrupt", "--in", &x, "--d", "1", "--scope", "systematic"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn round_trip_across_parameters() {
    let dir = TempDir::new().unwrap();
    for (k, ell, c, delta) in [(16, 4, 2, 1), (37, 5, 3, 2), (64, 6, 4, 3), (100, 8, 3, 1)] {
        let u: String = (0..k).map(|i| if (i * 7 + k) % 3 == 0 { '1' } else { '0' }).collect();
        let input = write(dir.path(), "u.txt", &u);
        let (k, ell, c, delta) = (k.to_string(), ell.to_string(), c.to_string(), delta.to_string());
        let p = ["--k", &k, "--ell", &ell, "--c", &c, "--delta", &delta];
        let mut args = vec!["encode", "--in", &input];
        args.extend(p);
        let x = gccodes(&args);
        assert!(x.status.success());
        let encoded = write(dir.path(), "x.txt", std::str::from_utf8(&x.stdout).unwrap());
        for mode in ["deletions", "insertions"] {
            let mut args = vec!["decode", "--in", &encoded, "--mode", mode];
            args.extend(p);
            let out = gccodes(&args);
            assert_eq!(out.status.code(), Some(0));
            assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), u);
        }
    }
}

#[test]
fn simulate_csv_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = gccodes(&[
            "simulate",
            "--k",
            "64",
            "--ell",
            "6",
            "--c",
            "3",
            "--delta",
            "2",
            "--trials",
            "300",
            "--seed",
            "1",
            "--no-timing",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,ell,c,delta,scope,trials,failures,pf_hat,bound,redundancy,rate,seed,wall_time_ms"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..6], &["64", "6", "3", "2", "whole_codeword", "300"]);
    assert_eq!(row[9], "54");
    assert_eq!(row[12], "0");
}

#[test]
fn sweep_json_has_one_row_per_grid_point() {
    let out = gccodes(&[
        "sweep", "--k", "64", "--delta", "1", "--ell", "6,8", "--c", "2,3", "--trials", "100", "--format", "json",
    ]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let grid: Vec<(u64, u64)> = rows.iter().map(|r| (r["ell"].as_u64().unwrap(), r["c"].as_u64().unwrap())).collect();
    assert_eq!(grid, vec![(6, 2), (6, 3), (8, 2), (8, 3)]);
    let bad = gccodes(&["sweep", "--k", "64", "--delta", "2", "--ell", "6", "--c", "2", "--trials", "10"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn sync_csv() {
    let out = gccodes(&["sync", "--file-bits", "5000", "--deletions", "6", "--trials", "3", "--seed", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "mode,file_bits,d,trials,mean_rounds,mean_cost_bits,mean_fallback_bits,success_rate,seed"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("vt,5000,6,3,"));
    assert!(rows[1].starts_with("gc,5000,6,3,"));
    assert!(rows.iter().all(|r| r.ends_with(",1.0,2")));
}
