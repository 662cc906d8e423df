use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sparse_interp::domain::text::parse_poly;
use sparse_interp::multivariate::{pro_mpoly_si_mk, Bounds};
use sparse_interp::PolyBox;
use tempfile::TempDir;

fn spinterp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinterp")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn uni_recovers_rational_poly() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.txt", "# 3/2 x^2 - 1/2\nvars 1\n3/2 2\n-1/2 0\n");
    let o = spinterp(&["interp", "uni", "--input", s(&f), "--C", "2", "--H", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "-1/2 0\n3/2 2\n");
    let o = spinterp(&["interp", "uni", "--input", s(&f), "--C", "2", "--H", "2", "--T", "2"]);
    assert_eq!(stdout(&o), "-1/2 0\n3/2 2\n");
}

#[test]
fn uni_zero_and_violations() {
    let dir = TempDir::new().unwrap();
    let zero = write(&dir, "z.txt", "vars 1\n");
    let o = spinterp(&["interp", "uni", "--input", s(&zero), "--C", "1", "--H", "1"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "0\n"));

    let f = write(&dir, "f.txt", "vars 1\n1/3 2\n");
    let o = spinterp(&["interp", "uni", "--input", s(&f), "--C", "2", "--H", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("denominator"));

    let m = write(&dir, "m.txt", "vars 2\n1 1 0\n");
    assert_eq!(spinterp(&["interp", "uni", "--input", s(&m), "--C", "2", "--H", "2"]).status.code(), Some(1));

    let bad = write(&dir, "bad.txt", "vars 1\n1 x\n");
    let o = spinterp(&["interp", "uni", "--input", s(&bad), "--C", "2", "--H", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

const EXAMPLE: &str = "# x1 x2 - x2^2\nvars 2\n1 1 1\n-1 0 2\n";

#[test]
fn multi_modes() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.txt", EXAMPLE);
    for mode in ["det", "prob", "int"] {
        let o = spinterp(&[
            "interp", "multi", "--input", s(&f), "--D", "2", "--T", "2", "--C", "1", "--H", "1", "--mode", mode,
        ]);
        assert_eq!(o.status.code(), Some(0), "{mode}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o), "-1/1 0 2\n1/1 1 1\n", "{mode}");
    }
    let o = spinterp(&[
        "interp", "multi", "--input", s(&f), "--D", "2", "--T", "2", "--C", "1", "--H", "1", "--qs", "5,7",
    ]);
    assert_eq!(stdout(&o), "-1/1 0 2\n1/1 1 1\n");
    let zero = write(&dir, "z.txt", "vars 3\n");
    let o = spinterp(&["interp", "multi", "--input", s(&zero), "--D", "2", "--T", "2", "--C", "1", "--H", "1"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "0\n"));
}

#[test]
fn multi_rejects_bound_violations() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.txt", EXAMPLE);
    let o = spinterp(&["interp", "multi", "--input", s(&f), "--D", "1", "--T", "2", "--C", "1", "--H", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = spinterp(&["interp", "multi", "--input", s(&f), "--D", "2", "--T", "1", "--C", "1", "--H", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = spinterp(&[
        "interp", "multi", "--input", s(&f), "--D", "2", "--T", "2", "--C", "1", "--H", "1", "--qs", "3,2",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn prob_bad_prime_prints_failure() {
    // p = 29 maps x2^10 onto x^20, colliding with x1^20
    let text = "vars 2\n1 20 0\n1 0 10\n";
    let f = parse_poly(text).unwrap();
    let bounds = Bounds::new(2, 30, 2, 1, 1).unwrap();
    let attempts: Vec<_> = (0..64)
        .map(|seed| (seed, pro_mpoly_si_mk(&PolyBox::new(f.clone()), &bounds, None, seed).unwrap()))
        .collect();
    let (bad_seed, _) = attempts
        .iter()
        .find(|(_, a)| a.stats.chosen_prime == Some(29))
        .expect("some seed draws 29");
    assert!(attempts[*bad_seed as usize].1.outcome.is_failure());
    let (good_seed, _) = attempts.iter().find(|(_, a)| a.outcome.is_success()).expect("some seed succeeds");

    let dir = TempDir::new().unwrap();
    let path = write(&dir, "f.txt", text);
    let run = |seed: u64| {
        spinterp(&[
            "interp", "multi", "--input", s(&path), "--D", "30", "--T", "2", "--C", "1", "--H", "1", "--mode", "prob",
            "--seed", &seed.to_string(),
        ])
    };
    let o = run(*bad_seed);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(2), "FAILURE\n"));
    let o = run(*good_seed);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "1/1 0 10\n1/1 20 0\n"));
}

#[test]
fn bench_writes_csv() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t.csv");
    let args = [
        "bench", "--vary", "T", "--values", "10,20,40", "--trials", "3", "--seed", "5", "--out", s(&out), "--D", "200",
    ];
    let o = spinterp(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "param,value,trial,time_ms,blackbox_evals,success");
    assert_eq!(lines.len(), 10);
    assert!(!text.contains('\r') && !text.starts_with('\u{feff}'));
    assert!(lines[1..].iter().all(|l| l.starts_with("T,") && l.ends_with(",1,true")));

    // every column except time_ms is reproducible
    let strip = |t: &str| {
        t.lines()
            .map(|l| {
                let mut f: Vec<&str> = l.split(',').collect();
                f.remove(3);
                f.join(",")
            })
            .collect::<Vec<_>>()
    };
    let again = dir.path().join("t2.csv");
    let mut args2 = args;
    args2[10] = s(&again);
    assert_eq!(spinterp(&args2).status.code(), Some(0));
    assert_eq!(strip(&text), strip(&fs::read_to_string(&again).unwrap()));
}

#[test]
fn bench_errors() {
    let dir = TempDir::new().unwrap();
    let unwritable = dir.path().join("missing").join("t.csv");
    let o = spinterp(&["bench", "--vary", "T", "--values", "2", "--trials", "1", "--out", s(&unwritable), "--D", "20"]);
    assert_eq!(o.status.code(), Some(1));
    let o = spinterp(&["bench", "--vary", "Q", "--values", "2", "--out", s(&unwritable)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_exit_codes() {
    assert_eq!(spinterp(&["--help"]).status.code(), Some(0));
    assert_eq!(spinterp(&["interp", "uni"]).status.code(), Some(1));
    assert_eq!(spinterp(&["frobnicate"]).status.code(), Some(1));
    let o = spinterp(&["interp", "uni", "--input", "/nonexistent/f.txt", "--C", "1", "--H", "1"]);
    assert_eq!(o.status.code(), Some(1));
}
