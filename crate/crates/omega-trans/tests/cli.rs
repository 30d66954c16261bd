use std::path::PathBuf;
use std::process::{Command, Output};

fn example(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omega-trans")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn run_prints_the_prefix() {
    let o = cli(&["run", &example("f1.sst"), "abbb#ba#(ab)^w", "-k", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "bbbaabbb#abba#ababab\n");
    let o = cli(&["run", &example("f1.2wst"), "abbb#ba#(ab)^w", "-k", "20"]);
    assert_eq!(stdout(&o), "bbbaabbb#abba#ababab\n");
    let o = cli(&["run", &example("f1.fot"), "ab#(a)^w", "-k", "10"]);
    assert_eq!(stdout(&o), "baab#aaaaa\n");
}

#[test]
fn run_outside_the_domain_exits_1() {
    let o = cli(&["run", &example("f1.sst"), "(a#)^w"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "rejected\n");
}

#[test]
fn aperiodicity_verdicts_and_exit_codes() {
    let o = cli(&["check-aperiodic", &example("muller_ex1.dma")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("aperiodic: false"), "{}", stdout(&o));
    assert!(stdout(&o).contains("witness: "));
    let o = cli(&["check-aperiodic", &example("f1.2wst")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("aperiodic: true"));
    let o = cli(&["check-aperiodic", &example("parity.2wst")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn one_boundedness() {
    let o = cli(&["check-1bounded", &example("f1.sst")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1-bounded: true\n");
}

#[test]
fn monoid_listing() {
    let o = cli(&["monoid", &example("muller_ex1.dma")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let n: usize = text.split_whitespace().next().unwrap().parse().unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with('#')).count(), n);
}

#[test]
fn anchored_behaviour() {
    let o = cli(&["behavior", &example("f1.2wst"), "ab#", "--right", "(a)^w"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lr = text.lines().find(|l| l.starts_with("lr: ")).unwrap();
    for pair in ["(t,t)", "(p,t)", "(q,t)"] {
        assert!(lr.contains(pair), "{lr}");
    }
    assert_eq!(lr.matches('(').count(), 3);
}

#[test]
fn graph_dot_output() {
    let o = cli(&["graph", &example("f1.sst"), "ab#(a)^w", "--horizon", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let expected = include_str!("data/f1_ab#a_h4.dot");
    assert_eq!(stdout(&o), expected);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.dot");
    let o = cli(&["graph", &example("f1.sst"), "ab#(a)^w", "--horizon", "4", "--dot", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(path).unwrap(), expected);
}

#[test]
fn compare_agreeing_machines_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.tsv");
    let corpus = dir.path().join("c.txt");
    std::fs::write(&corpus, "// f1 words\nab#(a)^w\n(ab)^w\n(#a)^w\n").unwrap();
    let o = cli(&[
        "compare",
        &example("f1.sst"),
        &example("f1.2wst"),
        "--corpus",
        corpus.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
        "-k",
        "50",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let tsv = std::fs::read_to_string(&report).unwrap();
    let lines: Vec<&str> = tsv.lines().collect();
    assert_eq!(lines[0], "word\tverdict\tdivergence-index");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].ends_with("\tequal\t-"));
    assert!(lines[3].ends_with("\tboth-rejected\t-"));
}

#[test]
fn compare_reports_a_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let other = dir.path().join("other.sst");
    let text = std::fs::read_to_string(example("f1.sst")).unwrap();
    std::fs::write(&other, text.replace("y := aya", "y := bya")).unwrap();
    let o = cli(&["compare", &example("f1.sst"), other.to_str().unwrap(), "--samples", "20", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\tmismatch\t"));
}

#[test]
fn sampled_runs_are_deterministic() {
    let args = ["compare", &example("f1.sst"), &example("f1.fot"), "--samples", "15", "--seed", "9"];
    let a = cli(&args);
    let b = cli(&args);
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(a.stdout, b.stdout);
    let args = ["eliminate-la", &example("f1.2wst")];
    assert_eq!(cli(&args).stdout, cli(&args).stdout);
}

#[test]
fn compile_and_eliminate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let sf = dir.path().join("f1.sstsf");
    let sst = dir.path().join("f1_plain.sst");
    let o = cli(&["compile", "2wst-to-sst", &example("f1.2wst"), "-o", sf.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = cli(&["run", sf.to_str().unwrap(), "abbb#ba#(ab)^w", "-k", "20"]);
    assert_eq!(stdout(&o), "bbbaabbb#abba#ababab\n");
    let o = cli(&["eliminate-la", sf.to_str().unwrap(), "-o", sst.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("variables"));
    let o = cli(&["check-aperiodic", sst.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn parse_errors_exit_2_with_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dma");
    std::fs::write(&bad, "kind: dma\nstates: q\ninitial: q\nalphabet: a\ndelta: q,a -> nowhere\nmuller: {q}\n").unwrap();
    let o = cli(&["run", bad.to_str().unwrap(), "(a)^w"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 5"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cli(&["run"]).status.code(), Some(2));
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
    let o = cli(&["run", "/nonexistent/file.sst", "(a)^w"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: "));
}

#[test]
fn example_files_round_trip() {
    for name in ["after_a.2wst", "f1.2wst", "f1.fot", "f1.sst", "muller_ex1.dma", "parity.2wst"] {
        let text = std::fs::read_to_string(example(name)).unwrap();
        let m = omega_trans::parse_machine(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = omega_trans::print_machine(&m);
        assert_eq!(omega_trans::parse_machine(&again).unwrap(), m, "{name}");
    }
}
