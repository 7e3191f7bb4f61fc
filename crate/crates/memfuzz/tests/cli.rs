//! End-to-end checks of the command-line driver.

mod common;

use std::path::Path;
use std::process::{Command, Output};

use memfuzz::fuzzy::Grade;
use memfuzz::textio::parse;

fn memfuzz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_memfuzz"))
        .args(args)
        .env_remove("MEMFUZZ_MAX_DEPTH")
        .env_remove("MEMFUZZ_MAX_CONFIGS")
        .env_remove("MEMFUZZ_MAX_TRANS")
        .output()
        .expect("failed to run the binary")
}

fn corpus(name: &str) -> String {
    common::corpus_path(name).display().to_string()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn validate_accepts_the_valid_corpus() {
    let out = memfuzz(&["validate", &corpus("toy_antiport.psys")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "ok\n");
}

#[test]
fn validate_rejects_bad_environment_supply() {
    let out = memfuzz(&["validate", &corpus("bad_env.psys")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("violation"), "{}", stderr_of(&out));
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = memfuzz(&["validate", "no_such_file.psys"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = memfuzz(&["gen", &corpus("toy_antiport.psys"), "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_prints_the_generated_set() {
    let out = memfuzz(&["gen", &corpus("toy_antiport.psys")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("system toy_antiport"), "{text}");
    assert!(text.contains("exhausted true"), "{text}");
    assert!(text.contains("gen { 0 : 1, 1 : 1, 2 : 1 }"), "{text}");
    let histograms: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("histogram"))
        .collect();
    assert_eq!(histograms.len(), 3, "{text}");

    let restricted = memfuzz(&["gen", &corpus("toy_antiport.psys"), "--restrict-positive"]);
    assert!(stdout_of(&restricted).contains("gen { 1 : 1, 2 : 1 }"));
}

#[test]
fn gen_is_byte_deterministic() {
    let a = memfuzz(&["gen", &corpus("three_grades.psys")]);
    let b = memfuzz(&["gen", &corpus("three_grades.psys")]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn explore_writes_a_reloadable_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace_path = dir.path().join("toy.trace");
    let run = |path: &Path| {
        memfuzz(&[
            "explore",
            &corpus("toy_antiport.psys"),
            "--trace",
            path.to_str().unwrap(),
        ])
    };
    let out = run(&trace_path);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("visited 4"), "{text}");
    assert!(text.contains("halting 3"), "{text}");
    assert!(text.contains("exhausted true"), "{text}");

    let written = std::fs::read_to_string(&trace_path).unwrap();
    let doc = memfuzz::trace::parse_trace(&written).unwrap();
    assert_eq!(doc.system, "toy_antiport");
    assert_eq!(doc.resummarize(), doc.gen);
    assert_eq!(memfuzz::trace::render_trace(&doc), written);

    // A second run produces the identical file and summary.
    let second = dir.path().join("toy2.trace");
    let out2 = run(&second);
    let summary = |o: &Output| -> Vec<String> {
        stdout_of(o)
            .lines()
            .filter(|l| !l.starts_with("trace "))
            .map(str::to_string)
            .collect()
    };
    assert_eq!(summary(&out), summary(&out2));
    assert_eq!(written, std::fs::read_to_string(&second).unwrap());
}

#[test]
fn step_prints_the_first_layer() {
    let out = memfuzz(&["step", &corpus("toy_antiport.psys")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("layer 0: 3 transitions"), "{text}");
    assert!(text.contains("c0 -> c1"), "{text}");
}

#[test]
fn embed_emits_a_valid_fuzzy_system() {
    let out = memfuzz(&["embed", &corpus("move_three.psys"), "--grades", "0,1/2,1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let doc = parse(&stdout_of(&out)).expect("embed output must parse");
    assert_eq!(doc.name, "move_three_embedded");
    assert!(doc.system.validate().is_valid());
    assert_eq!(doc.system.grades.positive().len(), 2);
}

#[test]
fn embed_agrees_with_the_crisp_run_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["move_three.psys", "swap_stop.psys", "two_or_four.psys"] {
        let crisp_out = memfuzz(&["gen", &corpus(name), "--restrict-positive"]);
        assert_eq!(crisp_out.status.code(), Some(0));
        let crisp_gen = stdout_of(&crisp_out)
            .lines()
            .find(|l| l.starts_with("gen "))
            .unwrap()
            .to_string();

        let embedded = memfuzz(&["embed", &corpus(name)]);
        assert_eq!(embedded.status.code(), Some(0));
        let path = dir.path().join(name);
        std::fs::write(&path, embedded.stdout).unwrap();
        let fuzzy_out = memfuzz(&["gen", path.to_str().unwrap(), "--restrict-positive"]);
        assert_eq!(fuzzy_out.status.code(), Some(0));
        let fuzzy_gen = stdout_of(&fuzzy_out)
            .lines()
            .find(|l| l.starts_with("gen "))
            .unwrap()
            .to_string();
        assert_eq!(crisp_gen, fuzzy_gen, "{name}");
    }
}

#[test]
fn slice_writes_one_file_per_positive_grade() {
    let dir = tempfile::tempdir().unwrap();
    let out = memfuzz(&[
        "slice",
        &corpus("toy_antiport.psys"),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));

    let half = dir.path().join("toy_antiport.slice-1_2.psys");
    let one = dir.path().join("toy_antiport.slice-1.psys");
    let half_text = std::fs::read_to_string(&half).unwrap();
    let one_text = std::fs::read_to_string(&one).unwrap();
    for text in [&half_text, &one_text] {
        let doc = parse(text).expect("slice output must parse");
        assert!(doc.system.validate().is_valid());
    }
    // The two slices differ only in their name and output reactives.
    let differing: Vec<(&str, &str)> = half_text
        .lines()
        .zip(one_text.lines())
        .filter(|(a, b)| a != b)
        .collect();
    assert!(!differing.is_empty());
    for (a, b) in differing {
        assert!(
            a.starts_with("system ") && b.starts_with("system ")
                || a.starts_with("outputs ") && b.starts_with("outputs "),
            "unexpected difference: `{a}` vs `{b}`"
        );
    }
}

#[test]
fn compose_emits_a_valid_composite() {
    let out = memfuzz(&[
        "compose",
        &corpus("gen_one_two.psys"),
        &corpus("gen_one.psys"),
        "--grades",
        "0,1/2,1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let doc = parse(&stdout_of(&out)).expect("compose output must parse");
    assert!(doc.system.validate().is_valid());
    assert_eq!(doc.system.structure.len(), 3);

    // The composite runs and generates the expected level-1 slice.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("composite.psys");
    std::fs::write(&path, render_of(&doc)).unwrap();
    let gen_out = memfuzz(&["gen", path.to_str().unwrap(), "--restrict-positive"]);
    assert_eq!(gen_out.status.code(), Some(0));
    let text = stdout_of(&gen_out);
    let gen_line = text.lines().find(|l| l.starts_with("gen ")).unwrap();
    let report = parse_gen_line(gen_line);
    assert_eq!(report.get(&1), Some(&Grade::one()));
    assert_eq!(report.get(&2), Some(&Grade::new(1, 2).unwrap()));
}

fn render_of(doc: &memfuzz::textio::SystemDocument) -> String {
    memfuzz::textio::render(doc)
}

fn parse_gen_line(line: &str) -> std::collections::BTreeMap<u64, Grade> {
    let inner = line
        .trim_start_matches("gen")
        .trim()
        .trim_start_matches('{')
        .trim_end_matches('}');
    inner
        .split(',')
        .filter_map(|entry| {
            let (n, g) = entry.split_once(':')?;
            Some((
                n.trim().parse::<u64>().unwrap(),
                g.trim().parse::<Grade>().unwrap(),
            ))
        })
        .collect()
}

#[test]
fn check_shape_distinguishes_generators() {
    let good = memfuzz(&["check-shape", &corpus("two_or_four.psys")]);
    assert_eq!(good.status.code(), Some(0));
    let text = stdout_of(&good);
    assert!(text.contains("conforms true"), "{text}");
    assert!(text.contains("alpha alpha"), "{text}");
    assert!(text.contains("sole-entrant assumed"), "{text}");

    let bad = memfuzz(&["check-shape", &corpus("move_three.psys")]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr_of(&bad).contains("conforms false"));
}

#[test]
fn bounds_come_from_environment_variables() {
    let out = Command::new(env!("CARGO_BIN_EXE_memfuzz"))
        .args(["explore", &corpus("counter_unbounded.psys")])
        .env("MEMFUZZ_MAX_DEPTH", "3")
        .env("MEMFUZZ_MAX_CONFIGS", "100000")
        .env("MEMFUZZ_MAX_TRANS", "10000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("exhausted false"), "{text}");
    assert!(text.contains("truncation depth-limit"), "{text}");
}

#[test]
fn flags_override_environment_variables() {
    let out = Command::new(env!("CARGO_BIN_EXE_memfuzz"))
        .args(["explore", &corpus("toy_antiport.psys"), "--max-depth", "64"])
        .env("MEMFUZZ_MAX_DEPTH", "0")
        .output()
        .unwrap();
    let text = stdout_of(&out);
    assert!(text.contains("exhausted true"), "{text}");
}
