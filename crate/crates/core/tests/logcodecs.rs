mod common;

use std::io::BufReader;

use proptest::prelude::*;
use semdense::logcodecs::{
    decode_c_line, encode_event, parse_schema_header, query_compressed_log, render_log,
    undeclared_codes, write_log_file, FormatId, QueryFilter,
};
use semdense::logmodel::{
    generate_corpus, read_events, write_events, CodeRegistry, CorpusSpec, Level, LogEvent,
};
use serde::Deserialize;
use sha2::{Digest, Sha256};

#[derive(Deserialize)]
struct Rendered {
    tokens: usize,
    lines: usize,
    body_lines: usize,
    sha256: String,
}

#[derive(Deserialize)]
struct Oracle {
    events: usize,
    error_events: usize,
    trace_frames: usize,
    a: Rendered,
    b: Rendered,
    c: Rendered,
}

// Produced by scripts/oracles/log_formats.py from the frozen corpus.
fn oracle() -> Oracle {
    let text = include_str!("data/log_formats_seed42.json");
    serde_json::from_str(text).unwrap()
}

fn frozen_corpus() -> Vec<LogEvent> {
    let text = include_str!("data/corpus_seed42.jsonl");
    read_events(BufReader::new(text.as_bytes())).unwrap()
}

fn sha256(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn corpus(seed: u64, count: usize) -> Vec<LogEvent> {
    let spec = CorpusSpec {
        seed,
        event_count: count,
        ..CorpusSpec::default()
    };
    generate_corpus(&spec, &CodeRegistry::builtin()).unwrap()
}

#[test]
fn generator_reproduces_frozen_corpus() {
    let mut buf = Vec::new();
    write_events(&mut buf, &corpus(42, 200)).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), include_str!("data/corpus_seed42.jsonl"));
}

#[test]
fn renderings_match_independent_renderer() {
    let reg = CodeRegistry::builtin();
    let events = frozen_corpus();
    let o = oracle();
    assert_eq!(events.len(), o.events);
    for (format, want) in [(FormatId::A, &o.a), (FormatId::B, &o.b), (FormatId::C, &o.c)] {
        let text = render_log(&events, format, &reg).unwrap();
        assert_eq!(sha256(&text), want.sha256, "format {format:?}");
        assert_eq!(text.lines().count(), want.lines);
        assert_eq!(common::vocab().count(&text), want.tokens, "format {format:?}");
    }
}

#[test]
fn line_counts_follow_the_layouts() {
    let reg = CodeRegistry::builtin();
    let events = frozen_corpus();
    let o = oracle();
    let a = render_log(&events, FormatId::A, &reg).unwrap();
    assert_eq!(a.lines().count(), 200 + o.trace_frames);
    let b = render_log(&events, FormatId::B, &reg).unwrap();
    assert_eq!(b.lines().count(), 200);
    assert_eq!(o.b.body_lines, 200);
    let c = render_log(&events, FormatId::C, &reg).unwrap();
    assert_eq!(c.lines().filter(|l| !l.starts_with('#')).count(), 200);
    assert_eq!(o.c.body_lines, 200);
}

#[test]
fn token_ordering_and_bands() {
    let o = oracle();
    let (a, b, c) = (o.a.tokens as f64, o.b.tokens as f64, o.c.tokens as f64);
    assert!(c < b && b < a);
    let db = (b - a) / a * 100.0;
    let dc = (c - a) / a * 100.0;
    assert!((-20.0..=-5.0).contains(&db), "{db}");
    assert!((-25.0..=-10.0).contains(&dc), "{dc}");
}

#[test]
fn ordering_holds_across_seeds() {
    let reg = CodeRegistry::builtin();
    for seed in [1, 7, 99, 2024] {
        let events = corpus(seed, 200);
        let counts: Vec<usize> = FormatId::ALL
            .iter()
            .map(|f| common::vocab().count(&render_log(&events, *f, &reg).unwrap()))
            .collect();
        assert!(counts[2] < counts[1] && counts[1] < counts[0], "seed {seed}: {counts:?}");
    }
}

#[test]
fn thousand_trace_free_events_round_trip() {
    let reg = CodeRegistry::builtin();
    let start = std::time::Instant::now();
    let mut checked = 0;
    let mut seed = 1000;
    while checked < 1000 {
        for e in corpus(seed, 200).into_iter().filter(|e| e.stack_trace.is_none()) {
            if checked == 1000 {
                break;
            }
            let line = &encode_event(&e, FormatId::C, &reg).unwrap()[0];
            assert_eq!(decode_c_line(line, &reg).unwrap(), e, "{line}");
            checked += 1;
        }
        seed += 1;
    }
    assert!(start.elapsed().as_secs() < 10);
}

#[test]
fn traced_events_decode_with_collapsed_trace() {
    let reg = CodeRegistry::builtin();
    let e = frozen_corpus()
        .into_iter()
        .find(|e| e.stack_trace.is_some())
        .unwrap();
    let line = &encode_event(&e, FormatId::C, &reg).unwrap()[0];
    let back = decode_c_line(line, &reg).unwrap();
    assert_eq!(back.stack_trace, None);
    let collapsed = back.attr("trace").unwrap();
    let frames = e.stack_trace.as_ref().unwrap();
    assert!(collapsed.ends_with(&format!("@{}+{}", frames[0].symbol, frames.len())));
    assert_eq!(&back.attributes[..e.attributes.len()], &e.attributes[..]);
}

#[test]
fn compressed_files_declare_every_code() {
    let reg = CodeRegistry::builtin();
    for seed in [42, 3, 17] {
        let text = render_log(&corpus(seed, 200), FormatId::C, &reg).unwrap();
        assert_eq!(undeclared_codes(&text).unwrap(), vec![]);
        // The header alone is enough to decode the body.
        let declared = parse_schema_header(&text).unwrap();
        for line in text.lines().filter(|l| !l.starts_with('#')) {
            decode_c_line(line, &declared).unwrap();
        }
    }
}

#[test]
fn error_query_returns_every_error_event() {
    let reg = CodeRegistry::builtin();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("events.c.log");
    write_log_file(&frozen_corpus(), FormatId::C, &reg, &path).unwrap();
    let filter = QueryFilter {
        level: Some(Level::Error),
        ..Default::default()
    };
    let lines = query_compressed_log(&path, &reg, &filter).unwrap();
    assert_eq!(lines.len(), oracle().error_events);
    assert!(lines.iter().all(|l| l.contains(" ERROR [")));
    let all = query_compressed_log(&path, &reg, &QueryFilter::default()).unwrap();
    assert_eq!(all.len(), 200);
}

#[test]
fn sample_event_is_found_by_service_and_value() {
    let reg = CodeRegistry::builtin();
    let mut events = corpus(42, 50);
    let sample = decode_c_line("1736936002|E|PS|pf|o=4521|rs=insuf_funds", &reg).unwrap();
    let at = events.partition_point(|e| e.timestamp_ms <= sample.timestamp_ms);
    events.insert(at, sample);
    let text = render_log(&events, FormatId::C, &reg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.log");
    std::fs::write(&path, text).unwrap();
    let filter = QueryFilter {
        service: Some("payment-service".into()),
        value_substring: Some("4521".into()),
        ..Default::default()
    };
    let lines = query_compressed_log(&path, &reg, &filter).unwrap();
    assert!(lines
        .iter()
        .any(|l| l.ends_with("Payment failed for order #4521: insufficient funds")));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn seeded_corpora_round_trip(seed in any::<u64>(), count in 6usize..120) {
        let reg = CodeRegistry::builtin();
        for e in corpus(seed, count).into_iter().filter(|e| e.stack_trace.is_none()) {
            let line = &encode_event(&e, FormatId::C, &reg).unwrap()[0];
            prop_assert_eq!(decode_c_line(line, &reg).unwrap(), e);
        }
    }

    #[test]
    fn free_text_values_survive(value in "[ -~\\n|\\\\]{0,40}") {
        let reg = CodeRegistry::builtin();
        let mut e = corpus(5, 6).into_iter().find(|e| e.stack_trace.is_none()).unwrap();
        e.attributes[0].1 = value;
        let line = &encode_event(&e, FormatId::C, &reg).unwrap()[0];
        prop_assert!(!line.contains('\n'));
        prop_assert_eq!(decode_c_line(line, &reg).unwrap(), e);
    }
}
