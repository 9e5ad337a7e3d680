mod common;

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;
use tsrack::cli::{compute, load_link, load_rack, Cache, InvariantKind};

const Z12: &str = r#"{"type":"linear","n":12,"t":11,"s":2}"#;
const Z4: &str = r#"{"type":"linear","n":4,"t":1,"s":2}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsrack"))
        .args(args)
        .env_remove("TSRACK_CACHE_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn corpus_path() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data/links.tsv")
        .display()
        .to_string()
}

fn corpus_spec(name: &str) -> String {
    let text = std::fs::read_to_string(corpus_path()).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{name}\t")).map(str::to_string))
        .unwrap()
}

#[test]
fn invariant_prints_polynomial() {
    let o = run(&[
        "invariant",
        "--rack",
        Z12,
        "--link",
        &corpus_spec("4_1"),
        "--kind",
        "additive",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o).lines().next().unwrap(),
        "u + u^2 + 2u^3 + 2u^4 + 2u^6 + 4u^12"
    );
}

#[test]
fn json_record_is_self_describing() {
    let o = run(&[
        "--format",
        "json",
        "invariant",
        "--rack",
        Z4,
        "--link",
        "braid: 2: 1 1 1 1",
        "--kind",
        "additive",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["invariant"], "additive");
    assert_eq!(v["rack_spec"], Z4);
    assert_eq!(v["link_spec"], "braid: 2: 1 1 1 1");
    assert_eq!(v["polynomial"], "4u + 12u^2 + 20u^4");
    assert_eq!(v["counting_value"], 36);
    assert_eq!(v["rack_spec_hash"].as_str().unwrap().len(), 64);
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);
    assert_eq!(v["multiset"]["kind"], "invariant-factors");
}

#[test]
fn iso_check_prints_certificate() {
    let o = run(&[
        "iso-check",
        "--rack",
        Z4,
        "--rack2",
        r#"{"type":"quotient","n":2,"p":[1,1]}"#,
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("isomorphic\n"));
    assert!(out.contains("h on sX:") && out.contains("phi:"));
    let o = run(&[
        "iso-check",
        "--rack",
        Z4,
        "--rack2",
        r#"{"type":"linear","n":4,"t":3,"s":2}"#,
    ]);
    assert_eq!(stdout(&o), "not isomorphic\n");
}

#[test]
fn exit_codes() {
    let o = run(&[
        "invariant",
        "--rack",
        Z4,
        "--link",
        "pd: X[1,4,2,5] X[3,6,4,1] X[5,2,6,9]",
        "--kind",
        "count",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("X[3,6,4,1]"), "{}", stderr(&o));

    let o = run(&["validate-rack", "--rack", r#"{"type":"linear","n":4,"t":2,"s":2}"#]);
    assert_eq!(o.status.code(), Some(3));

    let o = run(&["validate-rack", "--rack", r#"{"type":"linear","n":4}"#]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["validate-rack", "--rack", "/no/such/file"]);
    assert_eq!(o.status.code(), Some(5));

    let dir = TempDir::new().unwrap();
    let m = dir.path().join("swap.txt");
    std::fs::write(&m, "2\n2 2\n1 1\n").unwrap();
    let m = m.to_str().unwrap();
    let o = run(&["invariant", "--rack", m, "--link", "unknots: 2", "--kind", "s-enh"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["invariant", "--rack", m, "--link", "unknots: 2", "--kind", "count"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next().unwrap(), "4");

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "2\n1 1\n1 1\n").unwrap();
    let o = run(&["validate-rack", "--rack", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn rack_verbs() {
    let o = run(&["rack-rank", "--rack", Z4]);
    assert_eq!(stdout(&o), "rank 2\nper element: 1 2 1 2\n");
    let o = run(&["make-tsrack", "--rack", Z4]);
    // residues in order 0, 1, 2, 3
    assert_eq!(stdout(&o), "4\n1 3 1 3\n2 4 2 4\n3 1 3 1\n4 2 4 2\n");
    let dir = TempDir::new().unwrap();
    let m = dir.path().join("m.txt");
    // the same rack listed as residues 1, 2, 3, 0
    std::fs::write(&m, "4\n3 1 3 1\n4 2 4 2\n1 3 1 3\n2 4 2 4\n").unwrap();
    let o = run(&["iso-check", "--rack", m.to_str().unwrap(), "--rack2", Z4]);
    assert!(stdout(&o).starts_with("isomorphic\nphi: "), "{}", stdout(&o));
    let o = run(&["validate-rack", "--rack", Z12]);
    assert!(stdout(&o).starts_with("valid quandle of order 12"));
}

#[test]
fn warm_cache_output_is_identical() {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = [
        "--cache-dir",
        cache,
        "invariant",
        "--rack",
        Z12,
        "--link",
        "braid: 3: 1 -2 1 -2",
        "--kind",
        "additive",
    ];
    let cold = run(&args);
    let warm = run(&args);
    assert!(cold.status.success());
    assert_eq!(cold.stdout, warm.stdout);
    let entries: Vec<_> = std::fs::read_dir(cache).unwrap().collect();
    assert_eq!(entries.len(), 1);

    let entry = entries.into_iter().next().unwrap().unwrap().path();
    std::fs::write(&entry, "{ not json").unwrap();
    let repaired = run(&args);
    assert_eq!(repaired.stdout, cold.stdout);
    assert!(stderr(&repaired).contains("corrupt cache entry"));
    let fixed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&entry).unwrap()).unwrap();
    assert_eq!(fixed["invariant"], "additive");
}

#[test]
fn cache_round_trip_and_versioning() {
    let dir = TempDir::new().unwrap();
    let rack = load_rack(Z4).unwrap();
    let link = load_link("braid: 2: 1 1").unwrap();
    let rec = compute(&rack, &link, InvariantKind::SEnh).unwrap();
    let cache = Cache::with_version(dir.path(), "1").unwrap();
    let key = cache.key(&rack.canonical(), &link.text, InvariantKind::SEnh);
    assert_eq!(cache.lookup(&key), None);
    cache.store(&key, &rec).unwrap();
    assert_eq!(cache.lookup(&key), Some(rec.clone()));
    assert_ne!(key, cache.key(&rack.canonical(), &link.text, InvariantKind::Additive));
    let bumped = Cache::with_version(dir.path(), "2").unwrap();
    let key2 = bumped.key(&rack.canonical(), &link.text, InvariantKind::SEnh);
    assert_ne!(key, key2);
    assert_eq!(bumped.lookup(&key2), None);
}

#[test]
fn table_groups_corpus() {
    let o = run(&["table", "--rack", Z12, "--link", &corpus_path()]);
    assert!(o.status.success());
    let out = stdout(&o);
    let row = |p: &str| {
        out.lines()
            .find(|l| l.starts_with(p))
            .map(|l| l.split(" | ").nth(1).unwrap().to_string())
    };
    assert_eq!(row("u + u^2 + 26u^3 ").unwrap(), "8_18");
    assert!(row("u + u^2 + 2u^3 ").unwrap().starts_with("4_1, 5_1, 5_2,"));
    assert!(row("u + u^2 + 8u^3 ").unwrap().starts_with("3_1, 6_1,"));
    assert!(out.contains("order (weak):"));
}

#[test]
fn table_is_independent_of_line_order() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(corpus_path()).unwrap();
    let mut lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    let forward = dir.path().join("forward.tsv");
    std::fs::write(&forward, lines.join("\n")).unwrap();
    lines.reverse();
    lines.swap(3, 17);
    let shuffled = dir.path().join("shuffled.tsv");
    std::fs::write(&shuffled, lines.join("\n")).unwrap();
    let rack = r#"{"type":"linear","n":4,"t":3,"s":2}"#;
    let a = run(&[
        "table",
        "--rack",
        rack,
        "--kind",
        "s-enh",
        "--link",
        forward.to_str().unwrap(),
    ]);
    let b = run(&[
        "table",
        "--rack",
        rack,
        "--kind",
        "s-enh",
        "--link",
        shuffled.to_str().unwrap(),
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn table_reports_failures_and_empty_input() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.tsv");
    std::fs::write(&empty, "# nothing here\n").unwrap();
    let o = run(&["table", "--rack", Z4, "--link", empty.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains(" | u"));

    let mixed = dir.path().join("mixed.tsv");
    std::fs::write(
        &mixed,
        "T24\tbraid: 2: 1 1 1 1\nbroken\tpd: X[1,2,3,4]\nU\tunknots: 1\n",
    )
    .unwrap();
    let o = run(&["table", "--rack", Z4, "--link", mixed.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("4u + 12u^2 + 20u^4 | T24"), "{out}");
    assert!(out.contains("1 link(s) failed:"));
    assert!(out.contains("broken (line 2)"));
}

#[test]
fn strict_order_flag() {
    let dir = TempDir::new().unwrap();
    let list = dir.path().join("knots.tsv");
    let body: String = ["3_1", "4_1", "8_18"]
        .iter()
        .map(|n| format!("{n}\t{}\n", corpus_spec(n)))
        .collect();
    std::fs::write(&list, body).unwrap();
    let weak = stdout(&run(&["table", "--rack", Z12, "--link", list.to_str().unwrap()]));
    assert!(
        weak.contains("{4_1} < {3_1}") && weak.contains("{3_1} < {8_18}"),
        "{weak}"
    );
    let strict = stdout(&run(&[
        "table",
        "--rack",
        Z12,
        "--link",
        list.to_str().unwrap(),
        "--strict-order",
    ]));
    assert!(!strict.contains("{4_1} < {3_1}"), "{strict}");
}
