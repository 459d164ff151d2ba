use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_edgeham"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(TempDir::new().unwrap())
    }

    fn put(&self, name: &str, text: &str) -> String {
        let p: PathBuf = self.0.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }

    fn path(&self, name: &str) -> String {
        self.0.path().join(name).to_string_lossy().into_owned()
    }
}

const C4: &str = "p edge 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n";
const TWO_TRIANGLES_APART: &str = "p edge 6 6\ne 1 2\ne 2 3\ne 3 1\ne 4 5\ne 5 6\ne 6 4\n";

#[test]
fn tw_on_c4_is_yes() {
    let f = Files::new();
    let c4 = f.put("c4.gr", C4);
    let o = run(&["solve", "--problem", "cycle", "--method", "tw", "--input", &c4]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("yes "));
}

#[test]
fn every_method_agrees_on_small_instances() {
    let f = Files::new();
    let c4 = f.put("c4.gr", C4);
    let apart = f.put("apart.gr", TWO_TRIANGLES_APART);
    for (file, want, hs) in [(&c4, 0, "1,3"), (&apart, 1, "1,2,4,5")] {
        for method in ["oracle", "tw", "vc"] {
            for problem in ["path", "cycle"] {
                let o = run(&["solve", "--problem", problem, "--method", method, "--input", file]);
                assert_eq!(code(&o), want, "{method} {problem} on {file}");
            }
        }
        let o = run(&["solve", "--problem", "path", "--method", "hyper", "--hitting-set", hs, "--input", file]);
        assert_eq!(code(&o), want);
    }
}

#[test]
fn certificates_round_trip_through_check() {
    let f = Files::new();
    let c4 = f.put("c4.gr", C4);
    for (method, kind) in [("oracle", "cycle"), ("tw", "des")] {
        let o = run(&["solve", "--method", method, "--input", &c4, "--certificate"]);
        assert_eq!(code(&o), 0);
        let out = stdout(&o);
        let mut lines = out.lines();
        lines.next();
        assert_eq!(lines.next(), Some(format!("certificate {kind}").as_str()));
        let w = f.put("w", lines.next().unwrap());
        assert_eq!(code(&run(&["check", "--kind", kind, "--input", &c4, "--witness", &w])), 0);
    }
}

#[test]
fn check_exit_codes() {
    let f = Files::new();
    let c4 = f.put("c4.gr", C4);
    let good = f.put("good", "c a valid witness\n1 2 3 4\n");
    let bad = f.put("bad", "1 2\n");
    assert_eq!(code(&run(&["check", "--kind", "des", "--input", &c4, "--witness", &good])), 0);
    assert_eq!(code(&run(&["check", "--kind", "des", "--input", &c4, "--witness", &bad])), 1);
    assert_eq!(code(&run(&["check", "--kind", "path", "--input", &c4, "--witness", &bad])), 1);
    let td = f.put("td", "s td 2 3 4\nb 1 1 2 3\nb 2 1 3 4\n1 2\n");
    assert_eq!(code(&run(&["check", "--kind", "td", "--input", &c4, "--witness", &td])), 0);
    let td_bad = f.put("tdb", "s td 2 2 4\nb 1 1 2\nb 2 3 4\n1 2\n");
    assert_eq!(code(&run(&["check", "--kind", "td", "--input", &c4, "--witness", &td_bad])), 1);
    let garbage = f.put("g", "1 2 x\n");
    assert_eq!(code(&run(&["check", "--kind", "des", "--input", &c4, "--witness", &garbage])), 3);
}

#[test]
fn usage_errors_exit_64() {
    let f = Files::new();
    let c4 = f.put("c4.gr", C4);
    assert_eq!(code(&run(&["solve", "--method", "hyper", "--problem", "path", "--input", &c4])), 64);
    assert_eq!(code(&run(&["solve", "--method", "cw", "--input", &c4])), 64);
    assert_eq!(code(&run(&["solve", "--frobnicate"])), 64);
    assert_eq!(code(&run(&["solve"])), 64);
    let o = bin().args(["solve", "--input", &c4]).env("EDGEHAM_ORACLE_CAP", "lots").output().unwrap();
    assert_eq!(code(&o), 64);
}

#[test]
fn malformed_input_is_an_error() {
    let f = Files::new();
    let bad = f.put("bad.gr", "p edge 2 1\ne 1 3\n");
    let o = run(&["solve", "--input", &bad]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("out of range"));
}

#[test]
fn auto_picks_by_size_and_env_cap() {
    let f = Files::new();
    let c4 = f.put("c4.gr", C4);
    assert!(stdout(&run(&["solve", "--input", &c4])).contains("method=oracle"));
    let o = bin().args(["solve", "--input", &c4]).env("EDGEHAM_ORACLE_CAP", "2").output().unwrap();
    assert!(stdout(&o).contains("method=tw"));
    let cwe = f.put("c4.cwe", "k 2\n(join 1 2 (union (union (intro 1) (intro 1)) (union (intro 2) (intro 2))))\n");
    let o = bin().args(["solve", "--input", &c4, "--cwe", &cwe]).env("EDGEHAM_ORACLE_CAP", "2").output().unwrap();
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("method=cw"));
}

#[test]
fn cw_reports_rewrites() {
    let f = Files::new();
    let mut text = String::from("k 2\n(join 1 2 ");
    let side = |l: usize| {
        let mut s = format!("(intro {l})");
        for _ in 1..7 {
            s = format!("(union {s} (intro {l}))");
        }
        s
    };
    text += &format!("(union {} {}))\n", side(1), side(2));
    let cwe = f.put("k77.cwe", &text);
    let o = run(&["solve", "--method", "cw", "--cwe", &cwe]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("c edges: 49 -> 42"));
}

#[test]
fn kernelize_then_lift() {
    let f = Files::new();
    let g = f.put("g.gr", "p edge 6 7\ne 1 2\ne 1 3\ne 1 4\ne 1 5\ne 2 3\ne 4 5\ne 5 6\n");
    let (k, t) = (f.path("k.gr"), f.path("t.json"));
    let o = run(&["kernelize", "--input", &g, "--cover", "1,3,5", "--output", &k, "--trace", &t]);
    assert_eq!(code(&o), 0);
    let o = run(&["solve", "--problem", "path", "--method", "oracle", "--input", &k, "--certificate"]);
    assert_eq!(code(&o), 0);
    let cert = f.put("kc", stdout(&o).lines().last().unwrap());
    let o = run(&["lift", "--trace", &t, "--kernel-cert", &cert]);
    assert_eq!(code(&o), 0);
    let lifted = f.put("lifted", stdout(&o).lines().nth(1).unwrap());
    assert_eq!(code(&run(&["check", "--kind", "path", "--input", &g, "--witness", &lifted])), 0);
    assert_eq!(code(&run(&["kernelize", "--input", &g, "--cover", "1", "--output", &k, "--trace", &t])), 64);
}

#[test]
fn reduce_and_gen() {
    let f = Files::new();
    let c4 = f.put("c4.gr", C4);
    let o = run(&["reduce", "--to", "cycle", "--input", &c4, "--at", "1,3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("p edge 6 7\n"));
    let o = run(&["reduce", "--to", "path", "--input", &c4, "--at", "2"]);
    assert!(stdout(&o).starts_with("p edge 8 8\n"));
    assert_eq!(code(&run(&["reduce", "--to", "cycle", "--input", &c4, "--at", "1"])), 64);

    let a = stdout(&run(&["gen", "--family", "gnm 8 10", "--seed", "4"]));
    let b = stdout(&run(&["gen", "--family", "gnm 8 10", "--seed", "4"]));
    assert_eq!(a, b);
    assert!(a.contains("p edge 8 10"));
    let h = stdout(&run(&["gen", "--family", "hyper_hs 9 2 6 3", "--seed", "1"]));
    assert!(h.contains("p hyp 9 6"));
    let hf = f.put("h.hg", &h);
    let o = run(&["solve", "--problem", "path", "--input", &hf]);
    assert!(matches!(code(&o), 0 | 1));
    assert_eq!(code(&run(&["gen", "--family", "wheel 5"])), 64);
}
