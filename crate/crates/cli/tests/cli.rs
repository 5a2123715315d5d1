use std::path::Path;
use std::process::{Command, Output};

fn labeler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_labeler")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn pipeline(dir: &Path, family: &str, scheme: &str, n: &str, delta: &str) -> (String, String) {
    let g = dir.join(format!("{scheme}.g"));
    let l = dir.join(format!("{scheme}.l"));
    let out = labeler(&["generate", "--family", family, "--n", n, "--delta", delta, "--seed", "7", "-o", p(&g)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = labeler(&["encode", "--scheme", scheme, "-i", p(&g), "-o", p(&l)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    (p(&g).to_string(), p(&l).to_string())
}

#[test]
fn generate_encode_verify_every_scheme() {
    let dir = tempfile::tempdir().unwrap();
    for (family, scheme) in [
        ("tree", "tree"),
        ("outerplanar", "outerplanar"),
        ("outerplanar", "outerplanar-split"),
        ("general", "bounded-concat"),
        ("general", "bounded-list"),
        ("general", "combinadic"),
        ("planar", "planar"),
    ] {
        let (g, l) = pipeline(dir.path(), family, scheme, "512", "3");
        let out = labeler(&["verify", "-g", &g, "-l", &l]);
        assert_eq!(out.status.code(), Some(0), "{scheme}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn query_prints_adjacency() {
    let dir = tempfile::tempdir().unwrap();
    let (g, l) = pipeline(dir.path(), "tree", "tree", "512", "3");
    let text = std::fs::read_to_string(&g).unwrap();
    let edge: Vec<&str> = text.lines().nth(1).unwrap().split_whitespace().collect();
    let out = labeler(&["query", "-l", &l, edge[0], edge[1]]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "true");

    let adjacent: std::collections::HashSet<(String, String)> = text
        .lines()
        .skip(1)
        .map(|x| {
            let e: Vec<&str> = x.split_whitespace().collect();
            (e[0].to_string(), e[1].to_string())
        })
        .collect();
    let far = (1..512).map(|v| v.to_string()).find(|v| {
        !adjacent.contains(&("0".to_string(), v.clone())) && !adjacent.contains(&(v.clone(), "0".to_string()))
    });
    let out = labeler(&["query", "-l", &l, "0", &far.unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "false");
}

#[test]
fn flipped_bit_never_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let (g, l) = pipeline(dir.path(), "outerplanar", "outerplanar", "256", "3");
    let text = std::fs::read_to_string(&l).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut failures = 0;
    for (victim, nibble) in [(1, 0), (5, 3), (40, 6), (200, 8)] {
        let orig = lines[victim].clone();
        let (head, hex) = orig.split_once(':').unwrap();
        let mut chars: Vec<char> = hex.chars().collect();
        let d = chars[nibble].to_digit(16).unwrap() ^ 0b1000;
        chars[nibble] = char::from_digit(d, 16).unwrap();
        lines[victim] = format!("{head}:{}", chars.into_iter().collect::<String>());
        let bad = dir.path().join("bad.l");
        std::fs::write(&bad, lines.join("\n") + "\n").unwrap();
        let out = labeler(&["verify", "-g", &g, "-l", p(&bad)]);
        let code = out.status.code();
        assert!(code == Some(1) || code == Some(3), "flip ({victim},{nibble}) gave {code:?}");
        failures += 1;
        lines[victim] = orig;
    }
    assert_eq!(failures, 4);
}

#[test]
fn exit_codes() {
    assert_eq!(labeler(&["encode"]).status.code(), Some(2));
    assert_eq!(labeler(&["generate", "--family", "nope", "--n", "3", "--delta", "2"]).status.code(), Some(2));
    assert_eq!(labeler(&["verify", "-g", "/nonexistent/g", "-l", "/nonexistent/l"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    std::fs::write(&g, "3 3 2\n0 1\n1 2\n0 2\n").unwrap();
    let out = labeler(&["encode", "--scheme", "tree", "-i", p(&g)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bench_tsv() {
    let out = labeler(&["bench", "--scheme", "tree", "--sizes", "2^6..2^10:2", "--pairs", "100"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows[0][3], "max_minus_log2n");
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1][0], "64");
    assert!(rows.iter().all(|r| r.len() == 7));

    let out = labeler(&["bench", "--scheme", "combinadic", "--range", "--range-n", "10000", "--points", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().skip(1).all(|l| l.ends_with("true\ttrue")), "{text}");
}

#[test]
fn dumps() {
    let out = labeler(&["universal-dump", "--n", "15", "--delta", "1"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).lines().count() >= 4);

    let dir = tempfile::tempdir().unwrap();
    let (g, _) = pipeline(dir.path(), "planar", "planar", "300", "4");
    let out = labeler(&["embed-audit", "-g", &g, "--family", "planar"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.starts_with("level\tcapacity"));
    let placed: u64 = text.lines().skip(1).map(|l| l.split('\t').nth(4).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(placed, 300);
}
