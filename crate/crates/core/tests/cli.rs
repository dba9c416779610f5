mod common;

use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use tempfile::TempDir;
use tokenfst::cli::run;
use tokenfst::oracle::{first_mismatch, Canonical};
use tokenfst::promote::promote_bpe;
use tokenfst::regex::compile_pattern;
use tokenfst::tokenize::BpeTokenizer;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn tokenfst(args: &[&str]) -> Out {
    let mut o = Vec::new();
    let mut e = Vec::new();
    let code = run(
        std::iter::once("tokenfst").chain(args.iter().copied()),
        &mut o,
        &mut e,
    );
    Out {
        code,
        stdout: String::from_utf8(o).unwrap(),
        stderr: String::from_utf8(e).unwrap(),
    }
}

fn write_tokenizer(dir: &Path, t: &BpeTokenizer) -> (PathBuf, PathBuf) {
    let v = t.vocab();
    let vocab: String = v
        .token_ids()
        .map(|id| format!("{}\n", v.token(id).unwrap()))
        .collect();
    let merges: String = t
        .merges()
        .iter()
        .map(|m| format!("{} {}\n", v.token(m.left).unwrap(), v.token(m.right).unwrap()))
        .collect();
    let (vp, mp) = (dir.join("vocab.txt"), dir.join("merges.txt"));
    fs::write(&vp, vocab).unwrap();
    fs::write(&mp, merges).unwrap();
    (vp, mp)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn fig_files(dir: &Path) -> (PathBuf, PathBuf) {
    let t = BpeTokenizer::from_strs(
        &["a", "b", "c", "ab", "bc", "abc"],
        &[("a", "b"), ("b", "c"), ("ab", "c")],
    )
    .unwrap();
    write_tokenizer(dir, &t)
}

#[test]
fn bpe_modes_agree_on_random_fixtures() {
    let dir = TempDir::new().unwrap();
    let mut rng = common::rng(7);
    for _ in 0..1000 {
        let sigma = rng.gen_range(2..=4);
        let k = rng.gen_range(0..=12);
        let t = common::random_bpe(&mut rng, sigma, k);
        let w = common::random_string(&mut rng, t.vocab(), 20);
        if w.is_empty() {
            continue;
        }
        let (vp, mp) = write_tokenizer(dir.path(), &t);
        let base = ["tokenize", "--vocab", s(&vp), "--merges", s(&mp), "--input", &w];
        let fast = tokenfst(&[&base[..], &["--mode", "bpe"]].concat());
        let slow = tokenfst(&[&base[..], &["--mode", "bpe-iterative"]].concat());
        assert_eq!(fast.code, 0, "{}", fast.stderr);
        assert_eq!(fast.stdout, slow.stdout, "{w}");
        assert_eq!(fast.stdout.trim().replace(' ', ""), w);
    }
}

#[test]
fn check_agrees_with_library() {
    let dir = TempDir::new().unwrap();
    let mut rng = common::rng(11);
    let patterns = ["(a|b)*ab", "a(ab|b)*a?", "(ab|ba)+", "[ab]c*", "abab|ba*"];
    for _ in 0..30 {
        let k = rng.gen_range(1..=6);
        let t = common::random_bpe(&mut rng, 3, k);
        let (vp, mp) = write_tokenizer(dir.path(), &t);
        for p in patterns {
            let a = compile_pattern(p, t.vocab().symbols()).unwrap();
            let d = promote_bpe(&a, &t).unwrap().dfa;
            let lib = first_mismatch(&a, &d, Canonical::Bpe(&t), 8, 8).unwrap();
            let out = tokenfst(&[
                "check", "--pattern", p, "--vocab", s(&vp), "--merges", s(&mp), "--mode", "bpe",
                "--max-len", "8",
            ]);
            assert_eq!(lib, None);
            assert_eq!((out.code, out.stdout.as_str()), (0, "ok\n"), "{p}");
        }
    }
}

#[test]
fn promote_enumerate_mask_dot() {
    let dir = TempDir::new().unwrap();
    let (vp, mp) = fig_files(dir.path());
    let out = dir.path().join("p.json");
    let stages = dir.path().join("stages");
    let r = tokenfst(&[
        "promote", "--pattern", "abc|bc", "--vocab", s(&vp), "--merges", s(&mp), "--mode", "bpe",
        "--out", s(&out), "--stats", "--dump-stages", s(&stages),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("stage\tstates"));
    assert_eq!(r.stdout.lines().count(), 1 + 4 + 1);
    assert_eq!(fs::read_dir(&stages).unwrap().count(), 3);

    let e = tokenfst(&["enumerate", "--automaton", s(&out), "--max-len", "3"]);
    assert_eq!(e.stdout, "bc\nabc\n");

    let m = tokenfst(&["mask", "--automaton", s(&out)]);
    assert_eq!(m.stdout, "bc\nabc\n");
    let m = tokenfst(&["mask", "--automaton", s(&out), "--prefix", "bc"]);
    assert_eq!((m.code, m.stdout.as_str()), (0, ""));
    let m = tokenfst(&["mask", "--automaton", s(&out), "--prefix", "a"]);
    assert_eq!(m.code, 1);

    let d = tokenfst(&["dot", "--automaton", s(&out)]);
    assert!(d.stdout.starts_with("digraph"));
    assert!(d.stdout.contains("doublecircle"));
}

#[test]
fn maxmatch_and_agnostic_promotion() {
    let dir = TempDir::new().unwrap();
    let vp = dir.path().join("v.txt");
    fs::write(&vp, "a\nb\nab\naba\n").unwrap();
    let out = dir.path().join("p.json");
    for (mode, want) in [("maxmatch", "aba ab\n"), ("agnostic", "aba ab\n")] {
        let r = tokenfst(&[
            "promote", "--pattern", "abaab", "--vocab", s(&vp), "--mode", mode, "--out", s(&out),
        ]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        let e = tokenfst(&["enumerate", "--automaton", s(&out), "--max-len", "2"]);
        assert_eq!(e.stdout, want, "{mode}");
    }
    let e = tokenfst(&["enumerate", "--automaton", s(&out), "--max-len", "5"]);
    assert_eq!(e.stdout.lines().count(), 6);
    let t = tokenfst(&["tokenize", "--mode", "maxmatch", "--vocab", s(&vp), "--input", "abaab"]);
    assert_eq!(t.stdout, "aba ab\n");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let (vp, _) = fig_files(dir.path());
    assert_eq!(tokenfst(&[]).code, 2);
    assert_eq!(tokenfst(&["frobnicate"]).code, 2);
    assert_eq!(tokenfst(&["--help"]).code, 0);
    let r = tokenfst(&["tokenize", "--mode", "bpe", "--vocab", s(&vp), "--input", "ab"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--merges"));
    let r = tokenfst(&["tokenize", "--mode", "maxmatch", "--vocab", s(&vp), "--input", "abz"]);
    assert_eq!(r.code, 1);
    let r = tokenfst(&[
        "promote", "--pattern", "a(", "--vocab", s(&vp), "--mode", "agnostic", "--out",
        s(&dir.path().join("x.json")),
    ]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("syntax error"));
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"symbols\": 3}").unwrap();
    let r = tokenfst(&["enumerate", "--automaton", s(&bad), "--max-len", "2"]);
    assert_eq!(r.code, 1);
    let missing = dir.path().join("nope.txt");
    let r = tokenfst(&["tokenize", "--mode", "maxmatch", "--vocab", s(&missing), "--input", "a"]);
    assert_eq!(r.code, 1);
}
