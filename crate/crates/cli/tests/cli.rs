use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn pdt(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pdt"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: &[u8]) -> String {
    let out = pdt(args, stdin);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

const WORDS: &str = "zeta\nalpha\nfoo\nfoobar\nbar\nalpha\nbarn\n";

#[test]
fn build_lookup_access_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = path(dir.path(), "c.txt");
    std::fs::write(&corpus, WORDS).unwrap();
    let sorted = ["alpha", "bar", "barn", "foo", "foobar", "zeta"];
    for (strategy, compress) in [("lex", false), ("lex", true), ("centroid", false), ("centroid", true)] {
        let out = path(dir.path(), "d.pdt");
        let mut args = vec!["build", "--strategy", strategy, &corpus, &out];
        if compress {
            args.extend(["--compress", "--repair-k", "4"]);
        }
        ok(&args, b"");
        let queries = format!("{}\nfo\n\nmissing\n", sorted.join("\n"));
        let ids: Vec<i64> = ok(&["lookup", &out], queries.as_bytes())
            .lines()
            .map(|l| l.parse().unwrap())
            .collect();
        assert_eq!(ids.len(), sorted.len() + 3);
        assert_eq!(&ids[sorted.len()..], [-1, -1, -1]);
        if strategy == "lex" {
            assert_eq!(&ids[..sorted.len()], [0, 1, 2, 3, 4, 5]);
        }
        let id_lines: String = ids[..sorted.len()].iter().map(|i| format!("{i}\n")).collect();
        let ids_file = path(dir.path(), "ids.txt");
        std::fs::write(&ids_file, id_lines).unwrap();
        let back = ok(&["access", &out, &ids_file], b"");
        assert_eq!(back.lines().collect::<Vec<_>>(), sorted);
    }
}

#[test]
fn mph_hashes_to_rank() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = path(dir.path(), "c.txt");
    std::fs::write(&corpus, WORDS).unwrap();
    for flat in [false, true] {
        let out = path(dir.path(), "m.pdt");
        let mut args = vec!["mph-build", &corpus, &out];
        if flat {
            args.push("--flat");
        }
        ok(&args, b"");
        let got = ok(&["mph-hash", &out], b"alpha\nbar\nbarn\nfoo\nfoobar\nzeta\n");
        assert_eq!(got, "0\n1\n2\n3\n4\n5\n");
        let other: u64 = ok(&["mph-hash", &out], b"qqq\n").trim().parse().unwrap();
        assert!(other < 6);
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = path(dir.path(), "c.txt");
    let dict = path(dir.path(), "d.pdt");
    std::fs::write(&corpus, WORDS).unwrap();
    ok(&["build", &corpus, &dict], b"");

    assert_eq!(pdt(&["lookup", &dict], b"ok\nbad\0\n").status.code(), Some(1));
    assert_eq!(pdt(&["access", &dict], b"99\n").status.code(), Some(1));
    assert_eq!(pdt(&["access", &dict], b"x\n").status.code(), Some(1));
    assert_eq!(
        pdt(&["lookup", &path(dir.path(), "none.pdt")], b"").status.code(),
        Some(1)
    );
    assert_eq!(pdt(&["frobnicate"], b"").status.code(), Some(1));

    let bytes = std::fs::read(&dict).unwrap();
    let truncated = path(dir.path(), "t.pdt");
    std::fs::write(&truncated, &bytes[..bytes.len() / 2]).unwrap();
    assert_eq!(pdt(&["lookup", &truncated], b"foo\n").status.code(), Some(2));
    let mut flipped = bytes.clone();
    let last = flipped.len() - 1;
    flipped[last] ^= 0xff;
    let corrupt = path(dir.path(), "x.pdt");
    std::fs::write(&corrupt, &flipped).unwrap();
    let out = pdt(&["lookup", &corrupt], b"foo\n");
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(pdt(&["mph-hash", &dict], b"foo\n").status.code(), Some(2));
}

#[test]
fn stats_and_synthetic() {
    let dir = tempfile::tempdir().unwrap();
    let syn = path(dir.path(), "s.txt");
    ok(
        &["gen-synthetic", "--i", "2", "--j", "2", "--t", "1", "--k", "2", &syn],
        b"",
    );
    assert_eq!(std::fs::read(&syn).unwrap(), b"!\"\nc!\"\nd!\"\ndc!\"\n");

    ok(
        &["gen-synthetic", "--i", "20", "--j", "20", "--t", "3", "--k", "10", &syn],
        b"",
    );
    let report: serde_json::Value = serde_json::from_str(&ok(&["stats", &syn], b"")).unwrap();
    assert_eq!(report["kind"], "corpus");
    assert_eq!(report["strings"], 1200);
    assert_eq!(report["input_sorted"], true);
    assert!(report["height"]["centroid"]["max"].as_u64().unwrap() <= 10);

    let dict = path(dir.path(), "d.pdt");
    ok(&["build", "--compress", &syn, &dict], b"");
    let s: serde_json::Value = serde_json::from_str(&ok(&["stats", &dict, "--corpus", &syn], b"")).unwrap();
    assert_eq!(s["strategy"], "centroid");
    assert_eq!(s["compressed"], true);
    assert!(s["space"]["ratio"].as_f64().unwrap() > 0.0);

    let b: serde_json::Value =
        serde_json::from_str(&ok(&["bench", &dict, "--queries", "500", "--runs", "2"], b"")).unwrap();
    assert_eq!(b["queries"], 500);
    assert!(b["mean_ns"].as_f64().unwrap() > 0.0);

    let mph = path(dir.path(), "m.pdt");
    ok(&["mph-build", &syn, &mph], b"");
    assert_eq!(pdt(&["bench", &mph], b"").status.code(), Some(1));
    let b: serde_json::Value = serde_json::from_str(&ok(
        &["bench", &mph, "--corpus", &syn, "--queries", "500", "--runs", "2"],
        b"",
    ))
    .unwrap();
    assert_eq!(b["operation"], "hash");
}
