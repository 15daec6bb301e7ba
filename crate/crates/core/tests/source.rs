mod common;

use std::collections::BTreeSet;

use common::{fixtures_dir, manifest, FIXTURES};
use semdense::source::{scan_project, scan_source, CallTarget, LineClass, Profile, ScanConfig, SourceModel};

fn scan(fixture: &str) -> SourceModel {
    scan_project(fixtures_dir().join(fixture), &ScanConfig::default()).unwrap()
}

#[test]
fn line_classes_match_manifests() {
    for fixture in FIXTURES {
        let model = scan(fixture);
        let m = manifest(fixture);
        assert_eq!(model.files.len(), m.file.len(), "{fixture}: file count");
        for mf in &m.file {
            let file = model.file(&mf.path).unwrap_or_else(|| panic!("{fixture}: {} not scanned", mf.path));
            let labelled = mf.labelled_lines();
            let source = std::fs::read_to_string(fixtures_dir().join(fixture).join(&mf.path)).unwrap();
            let texts: Vec<&str> = source.lines().collect();
            assert_eq!(texts.len(), labelled.len(), "{}: manifest out of sync", mf.path);
            for (i, ((letter, text), got)) in labelled.iter().zip(&file.line_classes).enumerate() {
                assert_eq!(texts[i], text, "{}:{} text drift", mf.path, i + 1);
                assert_eq!(
                    got.letter(),
                    *letter,
                    "{}:{} `{}`",
                    mf.path,
                    i + 1,
                    text
                );
            }
        }
    }
}

#[test]
fn declarations_match_manifests() {
    for fixture in FIXTURES {
        let model = scan(fixture);
        for mf in &manifest(fixture).file {
            let expected: Vec<String> = mf.declarations.clone();
            let got: Vec<String> = model
                .declarations
                .iter()
                .filter(|d| d.path == mf.path)
                .map(|d| {
                    format!(
                        "{} {} {} {}",
                        d.kind.name(),
                        d.name,
                        d.span.0,
                        if d.exported { "exported" } else { "internal" }
                    )
                })
                .collect();
            assert_eq!(got, expected, "{fixture}/{}", mf.path);
        }
    }
}

#[test]
fn resolved_calls_match_manifests() {
    for fixture in FIXTURES {
        let model = scan(fixture);
        let label = |id: &str| model.declaration(id).unwrap().label();
        let got: BTreeSet<String> = model
            .call_edges
            .iter()
            .filter_map(|e| match &e.target {
                CallTarget::Resolved(id) => Some(format!("{} -> {}", label(&e.caller), label(id))),
                _ => None,
            })
            .collect();
        let expected: BTreeSet<String> = manifest(fixture).expect.calls.into_iter().collect();
        assert_eq!(got, expected, "{fixture}");
    }
}

#[test]
fn spring_chain_reaches_the_repository() {
    let model = scan("spring_orders");
    let find = |label: &str| model.declarations.iter().find(|d| d.label() == label).unwrap();
    let handler = find("OrderController.handleCreateOrder");
    let service = find("OrderServiceImpl.createOrder");
    assert!(service.has_body);
    let repo = find("OrderRepository.save");
    let edge = |from: &str, to: &str| {
        model
            .call_edges
            .iter()
            .any(|e| e.caller == from && e.target == CallTarget::Resolved(to.to_string()))
    };
    assert!(edge(&handler.id, &service.id));
    assert!(edge(&service.id, &repo.id));
}

#[test]
fn invariants_hold_on_fixtures() {
    for fixture in FIXTURES {
        let model = scan(fixture);
        for f in &model.files {
            let total: usize = LineClass::ALL.iter().map(|c| f.count(*c)).sum();
            assert_eq!(total, f.line_count);
        }
        for d in &model.declarations {
            let f = model.file(&d.path).unwrap();
            assert!(d.span.0 <= d.span.1 && d.span.1 <= f.line_count, "{}", d.id);
            assert!(!d.signature_text.is_empty(), "{}", d.id);
        }
        // Spans nest or are disjoint.
        for a in &model.declarations {
            for b in model.declarations.iter().filter(|b| b.path == a.path && b.id != a.id) {
                let disjoint = a.span.1 < b.span.0 || b.span.1 < a.span.0;
                let nested = (a.span.0 <= b.span.0 && b.span.1 <= a.span.1) || (b.span.0 <= a.span.0 && a.span.1 <= b.span.1);
                assert!(disjoint || nested, "{} / {}", a.id, b.id);
            }
        }
        for e in &model.call_edges {
            if let CallTarget::Resolved(id) = &e.target {
                assert!(model.declaration(id).is_some());
            }
        }
        assert_eq!(model, scan(fixture), "{fixture}: scan is deterministic");
    }
}

#[test]
fn empty_and_missing_roots() {
    let dir = tempfile::tempdir().unwrap();
    let model = scan_project(dir.path(), &ScanConfig::default()).unwrap();
    assert_eq!(model, SourceModel::default());
    assert!(scan_project(dir.path().join("nope"), &ScanConfig::default()).is_err());
}

#[test]
fn binary_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("blob.c");
    std::fs::write(&p, b"int x;\0\0\x01").unwrap();
    assert!(semdense::source::scan_file(&p, Profile::CFamily).is_err());
}

#[test]
fn jsonl_round_trips_line_classes() {
    let model = scan("go_orders");
    let text = model.to_jsonl();
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["record"], "file");
    let letters = first["line_classes"].as_str().unwrap();
    assert_eq!(letters.len(), model.files[0].line_count);
    assert_eq!(text.lines().count(), model.files.len() + model.declarations.len() + model.call_edges.len());
    assert_eq!(scan_source("x.go", "", Profile::GoStyle).to_jsonl().lines().count(), 1);
}
