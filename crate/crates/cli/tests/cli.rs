//! End-to-end runs of the `semdep` binary against files in a scratch
//! directory.

use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    doc: Option<Value>,
    stdout: String,
    stderr: String,
}

fn semdep(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_semdep"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    Run {
        code: out.status.code().expect("exited normally"),
        doc: serde_json::from_str(&stdout).ok(),
        stdout,
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn ok(dir: &Path, args: &[&str]) -> Value {
    let run = semdep(dir, args);
    assert_eq!(run.code, 0, "{args:?} failed: {}", run.stderr);
    run.doc.expect("stdout is a result document")
}

fn scratch(files: &[(&str, &str)]) -> TempDir {
    let dir = TempDir::new().unwrap();
    for (name, text) in files {
        fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

#[test]
fn parse_reports_counts_and_status() {
    let dir = scratch(&[("open.sys", "p = !m\nm = q | r\n")]);
    let d = dir.path();
    for n in [3usize, 5, 8] {
        let file = format!("y{n}.sys");
        ok(d, &["generate", "yablo", "--n", &n.to_string(), "-o", &file]);
        let doc = ok(d, &["parse", &file]);
        assert_eq!(doc["command"], "parse");
        assert_eq!(doc["payload"]["vertices"], n);
        assert_eq!(doc["payload"]["edges"], n * (n - 1) / 2);
        assert_eq!(doc["payload"]["status"], "closed");
    }
    let doc = ok(d, &["parse", "open.sys"]);
    assert_eq!(doc["payload"]["status"], "open");
    assert_eq!(doc["payload"]["free_vars"], serde_json::json!(["q", "r"]));
}

#[test]
fn input_errors_exit_2_and_name_the_line() {
    let dir = scratch(&[
        ("dup.sys", "a = b\nb = TRUE\na = !b\n"),
        ("bad.sys", "a = b &\n"),
        ("liar.sys", "L = !L\n"),
    ]);
    let d = dir.path();
    let run = semdep(d, &["parse", "dup.sys"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("dup.sys:3"), "{}", run.stderr);
    assert!(run.stdout.is_empty());
    assert_eq!(semdep(d, &["parse", "bad.sys"]).code, 2);
    assert_eq!(semdep(d, &["parse", "missing.sys"]).code, 2);
    // a self-reference needs --allow-loops
    assert_eq!(semdep(d, &["parse", "liar.sys"]).code, 2);
    assert_eq!(semdep(d, &["--allow-loops", "parse", "liar.sys"]).code, 0);
}

#[test]
fn solve_auto_picks_the_most_specific_method() {
    let dir = scratch(&[
        ("chain.sys", "a = !b\nb = c\nc = FALSE\n"),
        ("tree.sys", "a = !b & c\nb = TRUE\nc = !b\n"),
        ("cycle.sys", "a = !b\nb = !a\n"),
    ]);
    let d = dir.path();
    ok(d, &["generate", "yablo", "--n", "5", "-o", "y5.sys"]);
    let doc = ok(d, &["solve", "y5.sys"]);
    assert_eq!(doc["payload"]["status"], "acceptable");
    assert_eq!(doc["payload"]["method"], "topo");
    let keys: Vec<&String> = doc["payload"]["valuation"].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["Y1", "Y2", "Y3", "Y4", "Y5"]);
    assert_eq!(doc["payload"]["valuation"]["Y5"], true);

    assert_eq!(ok(d, &["solve", "chain.sys"])["payload"]["method"], "chain");
    // b -> a is absent, but a -> b, a -> c, c -> b close an undirected cycle
    assert_eq!(ok(d, &["solve", "tree.sys"])["payload"]["method"], "topo");
    assert_eq!(ok(d, &["solve", "cycle.sys"])["payload"]["method"], "brute");
}

#[test]
fn chain_and_brute_agree() {
    let dir = scratch(&[]);
    let d = dir.path();
    ok(
        d,
        &["generate", "chain", "--spec", "not,next,not,const_false", "-o", "c.sys"],
    );
    let chain = ok(d, &["solve", "c.sys", "--method", "chain"]);
    let brute = ok(d, &["solve", "c.sys", "--method", "brute"]);
    assert_eq!(chain["payload"]["valuation"], brute["payload"]["valuation"]);
    assert_eq!(chain["payload"]["method"], "chain");
}

#[test]
fn paradox_exit_code_and_preconditions() {
    let dir = scratch(&[("liar.sys", "L = !L\n")]);
    let d = dir.path();
    let run = semdep(
        d,
        &[
            "--allow-loops",
            "solve",
            "liar.sys",
            "--method",
            "brute",
            "--fail-on-paradox",
        ],
    );
    assert_eq!(run.code, 3);
    assert_eq!(run.doc.unwrap()["payload"]["status"], "paradoxical");
    // without the flag a paradox is still a successful run
    assert_eq!(
        semdep(d, &["--allow-loops", "solve", "liar.sys", "--method", "brute"]).code,
        0
    );

    ok(d, &["generate", "yablo", "--n", "4", "-o", "y4.sys"]);
    let run = semdep(d, &["solve", "y4.sys", "--method", "chain"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("`chain`"), "{}", run.stderr);
    let run = semdep(d, &["--allow-loops", "solve", "liar.sys", "--method", "topo"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("`topo`"), "{}", run.stderr);
}

#[test]
fn yablo_like_method() {
    let dir = scratch(&[
        ("loop.g", "x -> x\nx -> y\ny -> z\n"),
        ("not-andnot.sys", "a = b\nb = TRUE\n"),
    ]);
    let d = dir.path();
    ok(d, &["generate", "yablo", "--n", "6", "-o", "y6.sys"]);
    let doc = ok(d, &["solve", "y6.sys", "--method", "yablo-like"]);
    assert_eq!(doc["payload"]["status"], "acceptable");
    assert_eq!(doc["payload"]["valuation"]["Y6"], true);
    assert_eq!(doc["payload"]["valuation"]["Y5"], false);

    // a graph file is read as its negated-conjunction system
    let run = semdep(d, &["solve", "loop.g", "--method", "yablo-like", "--fail-on-paradox"]);
    assert_eq!(run.code, 2, "the closure requirement fails: {}", run.stderr);
    assert_eq!(
        semdep(d, &["solve", "not-andnot.sys", "--method", "yablo-like"]).code,
        2
    );

    fs::write(d.join("tloop.g"), "x -> x\nx -> y\ny -> y\n").unwrap();
    let run = semdep(d, &["solve", "tloop.g", "--method", "yablo-like", "--fail-on-paradox"]);
    assert_eq!(run.code, 3, "{}", run.stderr);
    assert_eq!(run.doc.unwrap()["payload"]["witness"], "x");
}

#[test]
fn danger_and_orientations() {
    let dir = scratch(&[
        ("tri.g", "a -> b\nb -> c\nc -> a\n"),
        ("path.g", "a -> b\nb -> c\nc -> d\n"),
        ("tri.u", "a -- b\nb -- c\nc -- a\n"),
        ("star.u", "a -- b\na -- c\na -- d\n"),
        ("big.g", "a -> b\nb -> c\nc -> d\nd -> e\ne -> f\n"),
    ]);
    let d = dir.path();
    let doc = ok(d, &["danger", "tri.g"]);
    assert_eq!(doc["payload"]["dangerous"], true);
    let witness = doc["payload"]["witness"].as_object().unwrap();
    assert_eq!(witness.len(), 3);
    for entry in witness.values() {
        let bits = entry["table"].as_str().unwrap();
        assert!(bits.len() == 2 && bits.chars().all(|c| c == '0' || c == '1'));
    }
    assert_eq!(semdep(d, &["danger", "tri.g", "--fail-on-danger"]).code, 3);

    let doc = ok(d, &["danger", "path.g", "--fail-on-danger"]);
    assert_eq!(doc["payload"]["dangerous"], false);
    assert!(doc["payload"]["witness"].is_null());

    assert_eq!(ok(d, &["orientations", "tri.u"])["payload"]["exists"], true);
    assert_eq!(ok(d, &["orientations", "star.u"])["payload"]["exists"], false);
    assert_eq!(semdep(d, &["orientations", "tri.u", "--fail-on-danger"]).code, 3);

    // six vertices exceed the default budget of five
    assert_eq!(semdep(d, &["danger", "big.g"]).code, 2);
    assert_eq!(
        ok(d, &["--budget-vertices", "6", "danger", "big.g"])["payload"]["dangerous"],
        false
    );
    // orientations needs an undirected file
    assert_eq!(semdep(d, &["orientations", "tri.g"]).code, 2);
}

#[test]
fn generate_families() {
    let dir = scratch(&[]);
    let d = dir.path();
    let doc = ok(
        d,
        &["generate", "yablo", "--n", "5", "--policy", "clip", "-o", "y5.sys"],
    );
    assert_eq!(doc["payload"]["vertices"], 5);
    let text = fs::read_to_string(d.join("y5.sys")).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains('=')).count(), 5);

    let doc = ok(d, &["generate", "ygprime", "--n", "4", "-o", "yg4.sys"]);
    assert_eq!(doc["payload"]["vertices"], 8);
    let text = fs::read_to_string(d.join("yg4.sys")).unwrap();
    for t in ["(Y1,Y3,Y2)", "(Y1,Y4,Y2)", "(Y1,Y4,Y3)", "(Y2,Y4,Y3)"] {
        assert!(text.contains(&format!("\"{t}\" =")), "{t} missing from\n{text}");
    }

    let doc = ok(d, &["generate", "chain", "--spec", "not,const_true", "-o", "c.sys"]);
    assert_eq!(doc["payload"]["vertices"], 2);
    assert_eq!(doc["payload"]["edges"], 1);

    assert_eq!(
        ok(
            d,
            &["generate", "tree", "--branching", "3", "--depth", "2", "-o", "t.sys"]
        )["payload"]["vertices"],
        13
    );
    assert_eq!(
        ok(d, &["generate", "only-negative", "--n", "5", "-o", "on.sys"])["payload"]["vertices"],
        8
    );
    assert_eq!(
        ok(d, &["generate", "random-sc", "--n", "7", "--seed", "11", "-o", "r.sys"])["payload"]["vertices"],
        7
    );

    assert_eq!(semdep(d, &["generate", "yablo", "--n", "0", "-o", "bad.sys"]).code, 2);
    assert_eq!(semdep(d, &["generate", "yablo", "-o", "bad.sys"]).code, 2);
    assert_eq!(
        semdep(d, &["generate", "chain", "--spec", "next", "-o", "bad.sys"]).code,
        2
    );
}

#[test]
fn homomorphism_and_collapse() {
    let dir = scratch(&[("bad.map", "")]);
    let d = dir.path();
    ok(
        d,
        &[
            "generate",
            "ygprime",
            "--n",
            "4",
            "-o",
            "yg4.sys",
            "--map-out",
            "yg4.map",
        ],
    );
    ok(d, &["generate", "ygpp", "--n", "4", "-o", "ygpp4.sys"]);
    let doc = ok(d, &["check-hom", "yg4.sys", "ygpp4.sys", "yg4.map"]);
    assert_eq!(doc["payload"]["homomorphism"], true);

    let doc = ok(d, &["collapse", "yg4.sys", "yg4.map", "-o", "image.g"]);
    assert_eq!(doc["payload"]["vertices"], 4);
    assert_eq!(doc["payload"]["edges"], 3);
    let image = fs::read_to_string(d.join("image.g")).unwrap();
    assert_eq!(
        image,
        "\"<Y1>\" -> \"<Y2>\"\n\"<Y2>\" -> \"<Y3>\"\n\"<Y3>\" -> \"<Y4>\"\n"
    );

    // Y1 -> Y2 is an edge, <Y1> -> <Y3> is not
    let map = fs::read_to_string(d.join("yg4.map"))
        .unwrap()
        .replace("Y2 => \"<Y2>\"", "Y2 => \"<Y3>\"");
    fs::write(d.join("skew.map"), map).unwrap();
    let doc = ok(d, &["check-hom", "yg4.sys", "ygpp4.sys", "skew.map"]);
    assert_eq!(doc["payload"]["homomorphism"], false);
    let v = &doc["payload"]["violation"];
    assert_eq!((v["from"].as_str(), v["to"].as_str()), (Some("Y1"), Some("Y2")));

    // a partial map
    fs::write(d.join("partial.map"), "Y1 => \"<Y1>\"\n").unwrap();
    assert_eq!(semdep(d, &["check-hom", "yg4.sys", "ygpp4.sys", "partial.map"]).code, 2);
    assert_eq!(semdep(d, &["collapse", "yg4.sys", "partial.map", "-o", "x.g"]).code, 2);
    // merging adjacent vertices would create a loop
    fs::write(d.join("loop.g"), "a -> b\n").unwrap();
    fs::write(d.join("merge.map"), "a => m\nb => m\n").unwrap();
    assert_eq!(semdep(d, &["collapse", "loop.g", "merge.map", "-o", "x.g"]).code, 2);
}

fn marked_edges(dot: &str) -> usize {
    dot.lines()
        .filter(|l| l.contains("->") && l.contains("arrowhead=tee"))
        .count()
}

#[test]
fn export_dot_marks_negated_edges() {
    let dir = scratch(&[("g.g", "a -> b\n")]);
    let d = dir.path();
    ok(d, &["generate", "yablo", "--n", "3", "-o", "y3.sys"]);
    let doc = ok(d, &["export-dot", "y3.sys", "-o", "y3.dot", "--negation-marks"]);
    assert_eq!(
        (doc["payload"]["nodes"].as_u64(), doc["payload"]["edges"].as_u64()),
        (Some(3), Some(3))
    );
    assert_eq!(doc["payload"]["negation_marked"], 3);
    let dot = fs::read_to_string(d.join("y3.dot")).unwrap();
    assert!(dot.starts_with("digraph "));
    assert_eq!(marked_edges(&dot), 3);

    ok(d, &["generate", "ygpp", "--n", "5", "-o", "ygpp.sys"]);
    let doc = ok(d, &["export-dot", "ygpp.sys", "-o", "ygpp.dot", "--negation-marks"]);
    assert_eq!(doc["payload"]["negation_marked"], 0);

    // d(Y1) negates Y2 and (Y1,Y3,Y2); d(Y2) negates Y3
    ok(d, &["generate", "ygprime", "--n", "3", "-o", "yg3.sys"]);
    let doc = ok(d, &["export-dot", "yg3.sys", "-o", "yg3.dot", "--negation-marks"]);
    assert_eq!(doc["payload"]["negation_marked"], 3);
    let dot = fs::read_to_string(d.join("yg3.dot")).unwrap();
    assert_eq!(marked_edges(&dot), 3);
    assert!(dot.contains("\"Y1\" -> \"(Y1,Y3,Y2)\" [color=red"));

    let doc = ok(d, &["export-dot", "y3.sys", "-o", "plain.dot"]);
    assert_eq!(doc["payload"]["negation_marked"], 0);
    let doc = ok(d, &["export-dot", "g.g", "-o", "g.dot"]);
    assert_eq!(doc["payload"]["edges"], 1);
}

#[test]
fn relevance_separates_occurring_from_relevant() {
    let dir = scratch(&[("r.sys", "p = q & (r | !r)\nq = s | !s\nr = TRUE\ns = FALSE\n")]);
    let doc = ok(dir.path(), &["relevance", "r.sys"]);
    let p = &doc["payload"]["vertices"]["p"];
    assert_eq!(p["occurring"], serde_json::json!(["q", "r"]));
    assert_eq!(p["relevant"], serde_json::json!(["q"]));
    assert_eq!(p["irrelevant"], serde_json::json!(["r"]));
    assert_eq!(doc["payload"]["vertices"]["q"]["relevant"], serde_json::json!([]));
}

fn without_timing(mut doc: Value) -> Value {
    doc.as_object_mut().unwrap().remove("timing_ms");
    doc
}

#[test]
fn identical_runs_give_identical_documents() {
    let dir = scratch(&[("tri.g", "a -> b\nb -> c\nc -> a\n")]);
    let d = dir.path();
    ok(d, &["generate", "ygprime", "--n", "5", "-o", "yg5.sys"]);
    let commands: [&[&str]; 4] = [
        &["solve", "yg5.sys"],
        &["parse", "yg5.sys"],
        &["danger", "tri.g"],
        &["generate", "random-sc", "--n", "9", "--seed", "4", "-o", "r.sys"],
    ];
    for args in commands {
        let a = without_timing(ok(d, args));
        let b = without_timing(ok(d, args));
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap(),
            "{args:?}"
        );
    }
    // the digest covers content, not paths
    fs::copy(d.join("yg5.sys"), d.join("copy.sys")).unwrap();
    assert_eq!(
        ok(d, &["parse", "yg5.sys"])["input_digest"],
        ok(d, &["parse", "copy.sys"])["input_digest"]
    );
}

#[test]
fn generated_files_round_trip_through_parse() {
    let dir = scratch(&[]);
    let d = dir.path();
    let families: [&[&str]; 8] = [
        &["yablo", "--n", "7", "--policy", "ground-false"],
        &["ygprime", "--n", "5"],
        &["ygpp", "--n", "6"],
        &["only-negative", "--n", "6", "--policy", "ground-true"],
        &["chain", "--spec", "next,not_next,const_false"],
        &["chain", "--spec", "not_next,next", "--open-end"],
        &["tree", "--branching", "2", "--depth", "3"],
        &["random-sc", "--n", "10", "--seed", "77"],
    ];
    for family in families {
        let mut args = vec!["generate"];
        args.extend_from_slice(family);
        args.extend_from_slice(&["-o", "out.sys"]);
        ok(d, &args);
        let written = fs::read_to_string(d.join("out.sys")).unwrap();
        let doc = ok(d, &["parse", "out.sys"]);
        assert_eq!(doc["payload"]["source"].as_str(), Some(written.as_str()), "{family:?}");
    }
}
