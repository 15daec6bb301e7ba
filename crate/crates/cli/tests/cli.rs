use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn semdense() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_semdense"));
    c.env("SEMDENSE_VOCAB", root().join("data/cl100k_base.tiktoken"));
    c
}

fn run(args: &[&str]) -> Output {
    semdense().args(args).output().unwrap()
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    semdense().current_dir(dir).args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = semdense()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn ok(o: &Output) -> &[u8] {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    &o.stdout
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

const SUBCOMMANDS: [&str; 10] = [
    "gen-logs", "encode", "decode", "query", "tokens", "codemap", "ceremony", "density", "report", "sessions",
];

#[test]
fn help_everywhere_exits_zero() {
    let top = run(&["--help"]);
    assert_eq!(code(&top), 0);
    let text = String::from_utf8_lossy(&top.stdout).to_string();
    for sub in SUBCOMMANDS {
        assert!(text.contains(sub), "{sub} missing from help");
        let o = run(&[sub, "--help"]);
        assert_eq!(code(&o), 0, "{sub}");
        assert!(String::from_utf8_lossy(&o.stdout).contains("Usage: semdense"), "{sub}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["tokens", "--bogus"])), 2);
    assert_eq!(code(&run(&["encode", "--format", "z"])), 2);
    assert_eq!(code(&run(&["gen-logs", "--weight", "nonsense"])), 2);
    assert_eq!(code(&run(&["gen-logs", "--count", "x"])), 2);
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a"), "x").unwrap();
    assert_eq!(code(&run_in(dir.path(), &["tokens", "a", "--label", "A", "--label", "B"])), 2);
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run_in(d, &["tokens", "missing.log"])), 1);
    assert_eq!(code(&run_in(d, &["--vocab", "nope.tiktoken", "tokens"])), 1);
    assert_eq!(code(&run_in(d, &["codemap", "no-such-root"])), 1);
    std::fs::write(
        d.join("s.jsonl"),
        "{\"format\":\"A\",\"session_tokens\":10,\"baseline_tokens\":20,\"file_tokens\":5}\n",
    )
    .unwrap();
    let o = run_in(d, &["sessions", "s.jsonl"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    assert_eq!(code(&run_stdin(&["encode", "--format", "a"], b"not json\n")), 1);
    assert_eq!(code(&run_stdin(&["decode"], b"1|E|XX|yy\n")), 1);
}

#[test]
fn piped_run_equals_staged_run() {
    let events = ok(&run(&["gen-logs", "--seed", "42", "--count", "200"])).to_vec();
    let encoded = ok(&run_stdin(&["encode", "--format", "c"], &events)).to_vec();
    let piped = ok(&run_stdin(&["tokens"], &encoded)).to_vec();

    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&run_in(d, &["gen-logs", "--seed", "42", "--count", "200", "-o", "events.jsonl"]));
    ok(&run_in(d, &["encode", "--format", "c", "events.jsonl", "-o", "c.log"]));
    let staged = ok(&run_in(d, &["tokens", "c.log"])).to_vec();
    assert_eq!(piped, staged);
    assert_eq!(std::fs::read(d.join("c.log")).unwrap(), encoded);
    assert_eq!(String::from_utf8(staged).unwrap(), "tokens=12239 lines=205 tok/line=59.70\n");
}

#[test]
fn query_returns_payment_errors_only() {
    let events = ok(&run(&["gen-logs"])).to_vec();
    let c = ok(&run_stdin(&["encode", "--format", "c"], &events)).to_vec();
    let out = ok(&run_stdin(&["query", "--level", "ERROR", "--service", "payment-service"], &c)).to_vec();
    let text = String::from_utf8(out).unwrap();
    // Error events of payment-service in the seed-42 corpus, counted by the oracle.
    assert_eq!(text.lines().count(), 10);
    assert!(text.lines().all(|l| l.contains(" ERROR [payment-service] ")));
    let decoded = ok(&run_stdin(&["decode"], &c)).to_vec();
    assert_eq!(String::from_utf8(decoded).unwrap().lines().count(), 200);
}

#[test]
fn codemap_check_detects_staleness() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let src = root().join("fixtures/go_orders");
    for f in ["main.go", "handlers.go", "CODEMAP.md"] {
        std::fs::copy(src.join(f), d.join(f)).unwrap();
    }
    let name = ["--name", "go_orders"];
    let check = |extra: &[&str]| code(&run(&[&["codemap", d.to_str().unwrap(), "--check"], &name[..], extra].concat()));
    assert_eq!(check(&[]), 0);
    let mut handlers = std::fs::read_to_string(d.join("handlers.go")).unwrap();
    handlers.push_str("\n// Ping reports liveness.\nfunc Ping() string {\n\treturn \"ok\"\n}\n");
    std::fs::write(d.join("handlers.go"), handlers).unwrap();
    assert_eq!(check(&[]), 3);
    ok(&run(&[&["codemap", d.to_str().unwrap()], &name[..]].concat()));
    assert_eq!(check(&[]), 0);
    std::fs::remove_file(d.join("CODEMAP.md")).unwrap();
    assert_eq!(check(&[]), 3);
}

#[test]
fn codemap_output_is_pinned_by_flags() {
    let fixture = root().join("fixtures/spring_orders");
    let args = [
        "codemap",
        fixture.to_str().unwrap(),
        "--out",
        "-",
        "--name",
        "spring_orders",
        "--generated-at",
        "1767225600",
    ];
    let a = ok(&run(&args)).to_vec();
    assert_eq!(a, ok(&run(&args)));
    assert_eq!(a, std::fs::read(fixture.join("CODEMAP.md")).unwrap());
}

#[test]
fn ceremony_and_density_json_feed_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let fixture = root().join("fixtures/spring_orders");
    let f = fixture.to_str().unwrap();
    let cer = ok(&run(&["ceremony", f, "--json"])).to_vec();
    assert_eq!(
        String::from_utf8(cer.clone()).unwrap(),
        "{\"scope\":\"spring_orders\",\"ceremony_lines\":170,\"logic_lines\":17,\"documentation_lines\":3,\"blank_lines\":56,\"ratio\":10.0}\n"
    );
    std::fs::write(d.join("c.jsonl"), cer).unwrap();
    std::fs::write(d.join("d.jsonl"), ok(&run(&["density", f, "--json"]))).unwrap();
    let report = ok(&run_in(
        d,
        &["report", "--ceremony", "c.jsonl", "--density", "d.jsonl", "--csv-dir", "csv"],
    ))
    .to_vec();
    let text = String::from_utf8(report).unwrap();
    assert!(text.contains("| spring_orders |      170 |    17 |    3 |    56 |           10.0 |            214 |        1,198 |   17.9% |"), "{text}");
    assert!(d.join("csv/density.csv").is_file());
}

#[test]
fn reference_report_matches_golden() {
    let r = root().join("data/reference");
    let out = ok(&run(&[
        "report",
        "--stats",
        r.join("file_stats.jsonl").to_str().unwrap(),
        "--sessions",
        r.join("sessions.jsonl").to_str().unwrap(),
    ]))
    .to_vec();
    assert_eq!(out, std::fs::read(r.join("report.md")).unwrap());
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let vocab = root().join("data/cl100k_base.tiktoken");
    std::fs::write(
        d.join("semdense.toml"),
        format!("vocab = {:?}\nseed = 7\noutput_dir = \"out\"\n", vocab.to_str().unwrap()),
    )
    .unwrap();
    let cfg = ["--config", "semdense.toml"];
    ok(&run_in(d, &[&cfg[..], &["gen-logs", "--count", "20", "-o", "ev.jsonl"]].concat()));
    let seven = std::fs::read(d.join("out/ev.jsonl")).unwrap();
    let explicit = ok(&run(&["gen-logs", "--count", "20", "--seed", "7"])).to_vec();
    assert_eq!(seven, explicit);
    let tok = semdense()
        .env_remove("SEMDENSE_VOCAB")
        .current_dir(d)
        .args([&cfg[..], &["tokens", "out/ev.jsonl"]].concat())
        .output()
        .unwrap();
    ok(&tok);
    std::fs::write(d.join("bad.toml"), "unknown_key = 1\n").unwrap();
    assert_eq!(code(&run_in(d, &["--config", "bad.toml", "tokens"])), 1);
}

#[test]
fn tokens_jsonl_labels_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("x.log"), "hello world\n").unwrap();
    let out = ok(&run_in(d, &["tokens", "x.log", "--label", "A", "--jsonl"])).to_vec();
    assert_eq!(String::from_utf8(out).unwrap(), "{\"format\":\"A\",\"tokens\":3,\"lines\":1}\n");
}
