//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero when
//! any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use semdense::density::{delta_vs_baseline, format_delta, ingest_session_records, session_to_file_ratio};
use semdense::logcodecs::{decode_c_line, encode_event, render_log, FormatId};
use semdense::logmodel::{generate_corpus, CodeRegistry, CorpusSpec};
use semdense::skeleton::{build_codemap, render_codemap, CodeMapOptions};
use semdense::source::{scan_project, LineClass, ScanConfig, SourceModel};
use semdense::tokenizer::{count_lines, Vocabulary};

type Outcome = Result<String, String>;

const FIXTURES: [&str; 3] = ["spring_orders", "go_orders", "angular_orders"];
const PINNED: i64 = 1_767_225_600;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn vocab_path() -> PathBuf {
    std::env::var_os("SEMDENSE_VOCAB")
        .map(PathBuf::from)
        .unwrap_or_else(|| root().join("data/cl100k_base.tiktoken"))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn scan(fixture: &str) -> Result<SourceModel, String> {
    scan_project(root().join("fixtures").join(fixture), &ScanConfig::default()).map_err(err)
}

fn tokenizer_vectors() -> Outcome {
    #[derive(serde::Deserialize)]
    struct Vectors {
        vectors: Vec<Vector>,
    }
    #[derive(serde::Deserialize)]
    struct Vector {
        text: String,
        ids: Vec<u32>,
    }
    let start = Instant::now();
    let vocab = Vocabulary::load(vocab_path()).map_err(err)?;
    let text = std::fs::read_to_string(root().join("crates/core/tests/data/tokenizer_vectors.json")).map_err(err)?;
    let file: Vectors = serde_json::from_str(&text).map_err(err)?;
    let matched = file.vectors.iter().filter(|v| vocab.encode(&v.text) == v.ids).count();
    let elapsed = start.elapsed();
    ensure(file.vectors.len() == 50, format!("{} vectors, expected 50", file.vectors.len()))?;
    ensure(matched == 50, format!("{matched}/50 vectors match"))?;
    ensure(elapsed.as_secs_f64() < 5.0, format!("took {elapsed:?}"))?;
    Ok(format!("50/50 vectors in {:.2}s", elapsed.as_secs_f64()))
}

fn codec_round_trip() -> Outcome {
    let start = Instant::now();
    let reg = CodeRegistry::builtin();
    let mut checked = 0;
    let mut seed = 1000;
    while checked < 1000 {
        let spec = CorpusSpec {
            seed,
            event_count: 200,
            ..CorpusSpec::default()
        };
        for e in generate_corpus(&spec, &reg).map_err(err)? {
            if checked == 1000 || e.stack_trace.is_some() {
                continue;
            }
            let line = &encode_event(&e, FormatId::C, &reg).map_err(err)?[0];
            let back = decode_c_line(line, &reg).map_err(|x| format!("{line}: {x}"))?;
            ensure(back == e, format!("mismatch on {line}"))?;
            checked += 1;
        }
        seed += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed.as_secs_f64() < 10.0, format!("took {elapsed:?}"))?;
    Ok(format!("1000/1000 trace-free events in {:.2}s", elapsed.as_secs_f64()))
}

fn token_ordering() -> Outcome {
    let vocab = Vocabulary::load(vocab_path()).map_err(err)?;
    let reg = CodeRegistry::builtin();
    let events = generate_corpus(&CorpusSpec::default(), &reg).map_err(err)?;
    let mut tokens = Vec::new();
    let mut b_lines = 0;
    for f in FormatId::ALL {
        let text = render_log(&events, f, &reg).map_err(err)?;
        if f == FormatId::B {
            b_lines = count_lines(&text);
        }
        tokens.push(vocab.count(&text));
    }
    let (a, b, c) = (tokens[0], tokens[1], tokens[2]);
    let db = delta_vs_baseline(b, a).map_err(err)?;
    let dc = delta_vs_baseline(c, a).map_err(err)?;
    ensure(c < b && b < a, format!("order violated: A {a}, B {b}, C {c}"))?;
    ensure((-20.0..=-5.0).contains(&db), format!("ΔB {db:.1}% outside [-20, -5]"))?;
    ensure((-25.0..=-10.0).contains(&dc), format!("ΔC {dc:.1}% outside [-25, -10]"))?;
    ensure(b_lines == 200, format!("B has {b_lines} lines"))?;
    Ok(format!(
        "A {a} > B {b} ({}) > C {c} ({}); B lines 200",
        format_delta(db),
        format_delta(dc)
    ))
}

fn ceremony_ratios() -> Outcome {
    #[derive(serde::Deserialize)]
    struct Manifest {
        file: Vec<ManifestFile>,
    }
    #[derive(serde::Deserialize)]
    struct ManifestFile {
        path: String,
        lines: String,
    }
    let mut labelled = 0;
    let mut agreed = 0;
    let mut ratios = Vec::new();
    for fixture in FIXTURES {
        let model = scan(fixture)?;
        let text = std::fs::read_to_string(root().join("fixtures").join(fixture).join("MANIFEST.toml")).map_err(err)?;
        let manifest: Manifest = toml::from_str(&text).map_err(err)?;
        for mf in &manifest.file {
            let file = model.file(&mf.path).ok_or(format!("{fixture}/{} not scanned", mf.path))?;
            let expected: Vec<char> = mf.lines.lines().map(|l| l.chars().next().unwrap_or('?')).collect();
            ensure(expected.len() == file.line_classes.len(), format!("{fixture}/{}: line count", mf.path))?;
            labelled += expected.len();
            agreed += expected.iter().zip(&file.line_classes).filter(|(e, g)| **e == g.letter()).count();
        }
        ratios.push(semdense::density::ceremony_for(&model, None).ratio.unwrap_or(f64::NAN));
    }
    ensure(agreed == labelled, format!("{agreed}/{labelled} labelled lines agree"))?;
    ensure(ratios[0] >= 8.0, format!("Spring ratio {:.2} < 8.0", ratios[0]))?;
    ensure(ratios[1] <= 3.0, format!("Go ratio {:.2} > 3.0", ratios[1]))?;
    Ok(format!(
        "Spring {:.1}, Go {:.1}; {agreed}/{labelled} lines agree",
        ratios[0], ratios[1]
    ))
}

fn skeleton_properties() -> Outcome {
    let vocab = Vocabulary::load(vocab_path()).map_err(err)?;
    let mut summary = Vec::new();
    for fixture in FIXTURES {
        let dir = root().join("fixtures").join(fixture);
        let model = scan(fixture)?;
        let options = CodeMapOptions {
            project_name: fixture.into(),
            generated_at: PINNED,
            ..CodeMapOptions::default()
        };
        let map = build_codemap(&model, &options);
        let text = render_codemap(&map);
        ensure(text == render_codemap(&build_codemap(&scan(fixture)?, &options)), format!("{fixture}: not idempotent"))?;
        let mut src_tokens = 0;
        for f in &model.files {
            let source = std::fs::read_to_string(dir.join(&f.path)).map_err(err)?;
            src_tokens += vocab.count(&source);
            for (line, class) in source.lines().zip(&f.line_classes) {
                let line = line.trim();
                ensure(
                    !(*class == LineClass::Logic && line.len() >= 8 && text.contains(line)),
                    format!("{fixture}: body line `{line}` in map"),
                )?;
            }
        }
        let map_tokens = vocab.count(&text);
        ensure(map_tokens < src_tokens, format!("{fixture}: map {map_tokens} >= source {src_tokens}"))?;
        if fixture == "spring_orders" {
            ensure(map_tokens * 2 < src_tokens, format!("Spring map {map_tokens} >= 0.5 x {src_tokens}"))?;
        }
        let exported: Vec<_> = model.declarations.iter().filter(|d| d.exported).collect();
        for d in &exported {
            let n = map.declaration_index.iter().filter(|e| e.id == d.id).count();
            ensure(n == 1, format!("{fixture}: {} indexed {n} times", d.label()))?;
        }
        ensure(
            map.declaration_index.len() == exported.len(),
            format!("{fixture}: index has non-exported entries"),
        )?;
        summary.push(format!("{fixture} {map_tokens}/{src_tokens}"));
    }
    Ok(format!("map/source tokens: {}", summary.join(", ")))
}

fn session_arithmetic() -> Outcome {
    let sessions = ingest_session_records(root().join("data/reference/sessions.jsonl")).map_err(err)?;
    let find = |f: char| sessions.iter().find(|s| s.format == f).ok_or(format!("no {f} record"));
    let a = session_to_file_ratio(find('A')?).map_err(err)?;
    let c = session_to_file_ratio(find('C')?).map_err(err)?;
    ensure((a - 2.3).abs() <= 0.05, format!("A ratio {a:.3}"))?;
    ensure((c - 4.7).abs() <= 0.05, format!("C ratio {c:.3}"))?;
    let db = format_delta(delta_vs_baseline(7106, 8072).map_err(err)?);
    let dc = format_delta(delta_vs_baseline(6695, 8072).map_err(err)?);
    ensure(db == "-12.0%" && dc == "-17.1%", format!("deltas {db}, {dc}"))?;
    Ok(format!("ratios A {a:.2}, C {c:.2}; deltas {db}, {dc}"))
}

fn semdense(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_semdense"))
        .current_dir(dir)
        .env("SEMDENSE_VOCAB", vocab_path())
        .args(args)
        .output()
        .map_err(err)?;
    if !out.status.success() {
        return Err(format!("semdense {}: {}", args.join(" "), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn report_golden() -> Outcome {
    let r = root().join("data/reference");
    let out = semdense(
        &r,
        &["report", "--stats", "file_stats.jsonl", "--sessions", "sessions.jsonl"],
    )?;
    let golden = std::fs::read(r.join("report.md")).map_err(err)?;
    ensure(out == golden, "report differs from data/reference/report.md")?;
    Ok(format!("{} bytes identical", golden.len()))
}

/// gen-logs → encode×3 → tokens → codemap → ceremony → density → report.
fn pipeline(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let fixture = root().join("fixtures/spring_orders");
    let fx = fixture.to_str().unwrap();
    semdense(dir, &["gen-logs", "--seed", "42", "--count", "200", "-o", "events.jsonl"])?;
    for f in ["a", "b", "c"] {
        semdense(dir, &["encode", "--format", f, "events.jsonl", "-o", &format!("{f}.log")])?;
    }
    let stats = semdense(
        dir,
        &["tokens", "a.log", "b.log", "c.log", "--label", "A", "--label", "B", "--label", "C", "--jsonl"],
    )?;
    std::fs::write(dir.join("stats.jsonl"), stats).map_err(err)?;
    semdense(dir, &["codemap", fx, "--out", "CODEMAP.md", "--name", "spring_orders", "--generated-at", "1767225600"])?;
    std::fs::write(dir.join("ceremony.jsonl"), semdense(dir, &["ceremony", fx, "--per-file", "--json"])?).map_err(err)?;
    std::fs::write(dir.join("density.jsonl"), semdense(dir, &["density", fx, "--per-file", "--json"])?).map_err(err)?;
    let sessions = root().join("data/reference/sessions.jsonl");
    semdense(
        dir,
        &[
            "report",
            "--stats",
            "stats.jsonl",
            "--sessions",
            sessions.to_str().unwrap(),
            "--ceremony",
            "ceremony.jsonl",
            "--density",
            "density.jsonl",
            "--out",
            "report.md",
            "--csv-dir",
            "csv",
        ],
    )?;
    let mut artifacts = Vec::new();
    for name in [
        "events.jsonl",
        "a.log",
        "b.log",
        "c.log",
        "stats.jsonl",
        "CODEMAP.md",
        "ceremony.jsonl",
        "density.jsonl",
        "report.md",
        "csv/file_tokens.csv",
        "csv/sessions.csv",
        "csv/density.csv",
    ] {
        artifacts.push((name.to_string(), std::fs::read(dir.join(name)).map_err(|e| format!("{name}: {e}"))?));
    }
    Ok(artifacts)
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let (d1, d2) = (tempfile::tempdir().map_err(err)?, tempfile::tempdir().map_err(err)?);
    let first = pipeline(d1.path())?;
    let second = pipeline(d2.path())?;
    for ((name, a), (_, b)) in first.iter().zip(&second) {
        ensure(a == b, format!("{name} differs between runs"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed.as_secs_f64() < 60.0, format!("took {elapsed:?}"))?;
    Ok(format!("{} artifacts identical in {:.2}s", first.len(), elapsed.as_secs_f64()))
}

fn main() {
    let suite_start = Instant::now();
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("tokenizer vectors", tokenizer_vectors),
        ("format C round-trip", codec_round_trip),
        ("token ordering and delta bands", token_ordering),
        ("ceremony ratios and line classes", ceremony_ratios),
        ("skeleton properties", skeleton_properties),
        ("session ratio arithmetic", session_arithmetic),
        ("report golden", report_golden),
        ("pipeline determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name} — {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} — {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/8 passed in {:.2}s",
        8 - failed,
        suite_start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
