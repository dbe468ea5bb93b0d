//! End-to-end runs of the installed binary against the shipped corpus.

use std::io::Write;
use std::process::{Command, Output};

use zrec::samples;
use zrec::RecurrenceMatrix;

fn corpus(name: &str) -> String {
    format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn zrec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zrec"))
        .args(args)
        .env_remove("ZREC_FUEL")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn parse_roundtrips_the_corpus() {
    let out = zrec(&["parse", &corpus("fib.zrec")]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let m = RecurrenceMatrix::from_json_str(stdout(&out).trim()).unwrap();
    assert!(m.semantic_eq(&samples::fibonacci()));

    let out = zrec(&["parse", &corpus("pivots.json")]);
    assert_eq!(code(&out), 0);
    let m = RecurrenceMatrix::from_json_str(stdout(&out).trim()).unwrap();
    assert!(m.semantic_eq(&samples::pivots()));
    assert_eq!(stdout(&out).trim(), samples::pivots().canonical().to_json_string());

    let out = zrec(&["parse", &corpus("cover.zrec")]);
    let m = RecurrenceMatrix::from_json_str(stdout(&out).trim()).unwrap();
    assert!(m.semantic_eq(&samples::cover()));
}

#[test]
fn dim_matches_the_known_kernels() {
    for (file, dim) in [
        ("fib.zrec", "2"),
        ("linrec2.zrec", "3"),
        ("cover.zrec", "4"),
        ("id.zrec", "0"),
        ("pivots.json", "2"),
    ] {
        let out = zrec(&["dim", &corpus(file)]);
        assert_eq!(code(&out), 0, "{file}: {}", stderr(&out));
        assert_eq!(stdout(&out).trim(), dim, "{file}");
    }
}

#[test]
fn schedules_list_the_determining_indices() {
    let out = zrec(&["schedule", "--at", "0", &corpus("fib.zrec")]);
    assert_eq!(stdout(&out).trim(), "-1 0");

    let out = zrec(&["schedule", "--at", "0", &corpus("pivots.json")]);
    assert_eq!(stdout(&out).trim(), "-2 -1");

    let out = zrec(&["schedule", "--at", "1000", &corpus("pivots.json")]);
    assert_eq!(stdout(&out).trim(), "-2 1000");

    let out = zrec(&["schedule", "--at", "0", &corpus("id.zrec")]);
    assert_eq!(stdout(&out).trim(), "");
}

#[test]
fn dump_prints_stable_golden_windows() {
    let args = [
        "dump", "--matrix", "adj", "--rows", "0:6", "--cols", "0:0",
        &corpus("fib.zrec"),
    ];
    let first = zrec(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(
        stdout(&first),
        "row\\col,0\n0,1\n1,1\n2,2\n3,3\n4,5\n5,8\n6,13\n"
    );
    // Byte stability across runs.
    let second = zrec(&args);
    assert_eq!(first.stdout, second.stdout);

    let out = zrec(&[
        "dump", "--matrix", "sol", "--rows", "-2:2", "--cols", "0:0",
        "--format", "json", &corpus("fib.zrec"),
    ]);
    assert_eq!(
        stdout(&out).trim(),
        r#"{"rows":[-2,2],"cols":[0,0],"entries":[["1"],["0"],["1"],["1"],["2"]]}"#
    );

    let out = zrec(&[
        "dump", "--matrix", "spl", "--rows", "-7:-3", "--cols", "-1:-1",
        &corpus("fib.zrec"),
    ]);
    assert_eq!(
        stdout(&out),
        "row\\col,-1\n-7,-5\n-6,3\n-5,-2\n-4,1\n-3,-1\n"
    );
}

#[test]
fn check_reports_verdicts_through_the_exit_code() {
    let out = zrec(&["check", "--reduced", &corpus("id.zrec")]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "reduced"));

    let out = zrec(&["check", "--reduced", &corpus("onesided_fib.json")]);
    assert_eq!((code(&out), stdout(&out).trim()), (1, "not reduced"));

    let out = zrec(&["check", "--trivial", &corpus("id.zrec")]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "trivial"));

    let out = zrec(&["check", "--trivial", &corpus("fib.zrec")]);
    assert_eq!((code(&out), stdout(&out).trim()), (1, "not trivial"));

    let out = zrec(&[
        "check", "--equivalent", &corpus("fib.zrec"), &corpus("fib.zrec"),
    ]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "equivalent"));

    let out = zrec(&[
        "check", "--equivalent", &corpus("fib.zrec"), &corpus("id.zrec"),
    ]);
    assert_eq!((code(&out), stdout(&out).trim()), (1, "not equivalent"));

    // Flag misuse is a usage error, not a verdict.
    let out = zrec(&["check", "--reduced", "--trivial", &corpus("id.zrec")]);
    assert_eq!(code(&out), 2);
    let out = zrec(&["check", "--equivalent", &corpus("fib.zrec")]);
    assert_eq!(code(&out), 2);
}

#[test]
fn solve_modes_produce_exact_values() {
    let out = zrec(&[
        "solve", "--from-schedule", "-1=0,0=1", "--window", "0:6",
        &corpus("fib.zrec"),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "1 1 2 3 5 8 13");

    let out = zrec(&[
        "solve", "--from-schedule", "-3=0,-1=2,0=1", "--window", "-6:8",
        &corpus("linrec2.zrec"),
    ]);
    assert_eq!(stdout(&out).trim(), "1 0 -1 0 1 2 1 0 -1 0 1 2 1 0 -1");

    let out = zrec(&[
        "solve", "--one-sided", "0=2,1=3", "--n", "8",
        &corpus("onesided_fib.json"),
    ]);
    assert_eq!(stdout(&out).trim(), "2 3 5 8 13 21 34 55 89");

    let out = zrec(&[
        "solve", "--affine", "--window", "-4:6", &corpus("affine_fib.zrec"),
    ]);
    assert_eq!(stdout(&out).trim(), "0 0 0 0 1 1 2 3 5 8 13");

    // A wrong-sized seed set cannot be a schedule.
    let out = zrec(&[
        "solve", "--from-schedule", "0=1", "--window", "0:4",
        &corpus("fib.zrec"),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).starts_with("error[E05]"), "{}", stderr(&out));
}

#[test]
fn rank_counts_independent_kernel_restrictions() {
    for (interval, rank) in [("-4:4", "2"), ("0:0", "1"), ("-1:0", "2")] {
        let out = zrec(&["rank", "--interval", interval, &corpus("fib.zrec")]);
        assert_eq!(stdout(&out).trim(), rank, "{interval}");
    }
    let out = zrec(&["rank", "--interval", "0:0", &corpus("pivots.json")]);
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn frieze_subcommands_cover_the_sample() {
    let file = corpus("frieze_sl2.txt");
    let out = zrec(&["frieze", "validate", &file]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "tame"));

    let out = zrec(&["frieze", "superperiod", &file]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "n=8 s=1"));

    let out = zrec(&["frieze", "convert", &file]);
    assert_eq!(code(&out), 0);
    let m = RecurrenceMatrix::from_json_str(stdout(&out).trim()).unwrap();
    assert!(m.is_reduced());
    assert_eq!(m.band_width(), 6);
    assert_eq!(m.left_period(), 8);

    // A single bumped entry breaks a diamond determinant.
    let broken = std::fs::read_to_string(&file)
        .unwrap()
        .replacen("3 2 2 1 4 3 1 2", "4 2 2 1 4 3 1 2", 1);
    let mut tmp = tempfile::NamedTempFile::with_suffix(".txt").unwrap();
    tmp.write_all(broken.as_bytes()).unwrap();
    let out = zrec(&["frieze", "validate", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("determinant"), "{}", stdout(&out));
}

#[test]
fn juggle_draws_one_polyline_per_ball() {
    let svg = stdout(&zrec(&["juggle", "--window", "-6:6", &corpus("fib.zrec")]));
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert_eq!(svg.matches("stroke-dasharray").count(), 0);

    let svg = stdout(&zrec(&["juggle", "--window", "-6:6", &corpus("id.zrec")]));
    assert_eq!(svg.matches("<polyline").count(), 0);
    assert_eq!(svg.matches("stroke-dasharray").count(), 13);

    // Two periods of the eight-periodic sample cross all four balls.
    let svg = stdout(&zrec(&["juggle", "--window", "0:15", &corpus("cover.zrec")]));
    assert_eq!(svg.matches("<polyline").count(), 4);

    // Unreduced input: the diagram refuses rather than reducing silently.
    let out = zrec(&["juggle", "--window", "0:4", &corpus("onesided_fib.json")]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).starts_with("error[E05]"), "{}", stderr(&out));
}

#[test]
fn verify_passes_on_the_shipped_corpus() {
    let files: Vec<String> = [
        "fib.zrec",
        "linrec2.zrec",
        "cover.zrec",
        "id.zrec",
        "pivots.json",
        "onesided_fib.json",
        "affine_fib.zrec",
    ]
    .iter()
    .map(|f| corpus(f))
    .collect();
    let args: Vec<&str> = std::iter::once("verify")
        .chain(files.iter().map(String::as_str))
        .collect();
    let out = zrec(&args);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(!stdout(&out).contains("DISCREPANCY"));
}

#[test]
fn diagnostics_are_numbered_and_exit_codes_split_usage_from_domain() {
    let out = zrec(&["dim", &corpus("no_such_file.zrec")]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).starts_with("error[E01]"), "{}", stderr(&out));

    let mut tmp = tempfile::NamedTempFile::with_suffix(".zrec").unwrap();
    tmp.write_all(b"x[i] = y[i-1] for all i;\n").unwrap();
    let out = zrec(&["parse", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).starts_with("error[E02]"), "{}", stderr(&out));

    let out = Command::new(env!("CARGO_BIN_EXE_zrec"))
        .args(["reduce", &corpus("onesided_fib.json")])
        .env("ZREC_FUEL", "1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).starts_with("error[E04]"), "{}", stderr(&out));

    let out = zrec(&["rank", "--interval", "4:1", &corpus("fib.zrec")]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).starts_with("error[E09]"), "{}", stderr(&out));

    let out = Command::new(env!("CARGO_BIN_EXE_zrec"))
        .args(["reduce", &corpus("fib.zrec")])
        .env("ZREC_FUEL", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Unknown flags and missing arguments are clap usage errors.
    let out = zrec(&["dim"]);
    assert_eq!(code(&out), 2);
    let out = zrec(&["--bogus"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn reduce_is_idempotent_on_canonical_output() {
    let first = zrec(&["reduce", &corpus("linrec2.zrec")]);
    assert_eq!(code(&first), 0);
    let mut tmp = tempfile::NamedTempFile::with_suffix(".json").unwrap();
    tmp.write_all(first.stdout.as_slice()).unwrap();
    let second = zrec(&["reduce", tmp.path().to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout);

    let out = zrec(&["check", "--reduced", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}
