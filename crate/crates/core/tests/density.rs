mod common;

use common::{fixtures_dir, vocab, workspace_root, FIXTURES};
use proptest::prelude::*;
use semdense::density::{
    ceremony_for, delta_vs_baseline, density_for, format_delta, ingest_session_records, render_csv, render_report,
    semantic_density, session_to_file_ratio, FileStatRecord, ReportInputs, Scoped, SessionRecord,
};
use semdense::source::{scan_project, scan_source, LineClass, Profile, ScanConfig, SourceModel};

#[derive(serde::Deserialize)]
struct OracleRow {
    scope: String,
    ceremony_lines: usize,
    logic_lines: usize,
    documentation_lines: usize,
    blank_lines: usize,
    meaning_tokens: usize,
    total_tokens: usize,
}

fn oracle() -> Vec<OracleRow> {
    include_str!("data/density_oracle.jsonl")
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn scan(fixture: &str) -> SourceModel {
    scan_project(fixtures_dir().join(fixture), &ScanConfig::default()).unwrap()
}

fn reference_inputs() -> ReportInputs {
    let dir = workspace_root().join("data/reference");
    let stats = std::fs::read_to_string(dir.join("file_stats.jsonl")).unwrap();
    ReportInputs {
        file_stats: stats.lines().map(|l| serde_json::from_str(l).unwrap()).collect(),
        sessions: ingest_session_records(dir.join("sessions.jsonl")).unwrap(),
        ..Default::default()
    }
}

fn session(format: char, sessions: &[SessionRecord]) -> &SessionRecord {
    sessions.iter().find(|s| s.format == format).unwrap()
}

#[test]
fn ceremony_counts_match_oracle() {
    for row in oracle() {
        let r = ceremony_for(&scan(&row.scope), None);
        assert_eq!(
            (r.ceremony_lines, r.logic_lines, r.documentation_lines, r.blank_lines),
            (row.ceremony_lines, row.logic_lines, row.documentation_lines, row.blank_lines),
            "{}",
            row.scope
        );
    }
}

#[test]
fn fixture_ratio_bounds() {
    let spring = ceremony_for(&scan("spring_orders"), None).ratio.unwrap();
    let go = ceremony_for(&scan("go_orders"), None).ratio.unwrap();
    assert!(spring >= 8.0, "{spring}");
    assert!(go <= 3.0, "{go}");
}

#[test]
fn scopes_partition_the_project() {
    let model = scan("spring_orders");
    let total = ceremony_for(&model, None);
    let base = "src/main/java/com/shop/orders";
    let parts: Vec<_> = ["api", "domain", "service"]
        .iter()
        .map(|m| ceremony_for(&model, Some(&format!("{base}/{m}"))))
        .collect();
    assert_eq!(parts.iter().map(|p| p.total_lines()).sum::<usize>(), total.total_lines());
    assert_eq!(parts.iter().map(|p| p.logic_lines).sum::<usize>(), total.logic_lines);
    let one = ceremony_for(&model, Some(&format!("{base}/domain/Order.java")));
    assert_eq!(one.total_lines(), model.file(&format!("{base}/domain/Order.java")).unwrap().line_count);
    assert_eq!(ceremony_for(&model, Some("nope")).total_lines(), 0);
}

#[test]
fn density_matches_oracle() {
    for row in oracle() {
        let model = scan(&row.scope);
        let d = density_for(vocab(), &fixtures_dir().join(&row.scope), &model, None).unwrap();
        assert_eq!((d.meaning_tokens, d.total_tokens), (row.meaning_tokens, row.total_tokens), "{}", row.scope);
        assert!((0.0..=1.0).contains(&d.density));
    }
    assert_eq!(oracle().len(), FIXTURES.len());
}

#[test]
fn density_bounds() {
    let logic = "let a = f(1);\nlet b = g(a);\n";
    let d = semantic_density(vocab(), logic, &[LineClass::Logic, LineClass::Logic]);
    assert_eq!(d.density, 1.0);
    let imports = "import java.util.List;\nimport java.util.Map;\n";
    let model = SourceModel::merge(vec![scan_source("I.java", imports, Profile::CFamily)]);
    let classes = &model.files[0].line_classes;
    assert_eq!(classes, &[LineClass::Ceremony, LineClass::Ceremony]);
    assert_eq!(semantic_density(vocab(), imports, classes).density, 0.0);
    assert_eq!(semantic_density(vocab(), "", &[]).density, 0.0);
}

#[test]
fn reference_session_ratios_and_deltas() {
    let inputs = reference_inputs();
    let s = &inputs.sessions;
    assert_eq!(s.len(), 4);
    let a = session_to_file_ratio(session('A', s)).unwrap();
    let c = session_to_file_ratio(session('C', s)).unwrap();
    assert!((a - 2.3).abs() <= 0.05, "{a}");
    assert!((c - 4.7).abs() <= 0.05, "{c}");
    assert_eq!(format!("{a:.1}"), "2.3");
    assert_eq!(format!("{c:.1}"), "4.7");
    let tokens = |f: &str| inputs.file_stats.iter().find(|r| r.format == f).unwrap().tokens;
    assert_eq!(format_delta(delta_vs_baseline(tokens("B"), tokens("A")).unwrap()), "-12.0%");
    assert_eq!(format_delta(delta_vs_baseline(tokens("C"), tokens("A")).unwrap()), "-17.1%");
}

#[test]
fn reference_report_matches_golden() {
    let path = workspace_root().join("data/reference/report.md");
    let text = render_report(&reference_inputs());
    if std::env::var_os("SEMDENSE_BLESS").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    for header in [
        "| Format             | Tokens | Lines | Tok/Line | Δ vs. A |",
        "| Metric                    | A (Human) | B (Struct.) | C (Compr.) | D (C+Tool) |",
    ] {
        assert!(text.contains(header), "missing {header}\n{text}");
    }
}

#[test]
fn report_sections_follow_inputs() {
    let model = scan("go_orders");
    let inputs = ReportInputs {
        ceremony: vec![Scoped {
            scope: "go_orders".into(),
            report: ceremony_for(&model, None),
        }],
        ..Default::default()
    };
    let text = render_report(&inputs);
    assert!(text.contains("## Ceremony and semantic density"));
    assert!(text.contains("| go_orders |       33 |    17 |    3 |     8 |            1.9 |"), "{text}");
    assert!(!text.contains("File-level"));
    let csv = render_csv(&inputs);
    assert_eq!(csv.len(), 1);
    assert_eq!(csv[0].0, "density.csv");
    assert!(csv[0].1.contains("go_orders,33,17,3,8,1.94,,,"), "{}", csv[0].1);
}

#[test]
fn reference_csv_has_raw_values() {
    let csv = render_csv(&reference_inputs());
    let names: Vec<&str> = csv.iter().map(|(n, _)| *n).collect();
    assert_eq!(names, ["file_tokens.csv", "sessions.csv"]);
    assert!(csv[0].1.contains("B,7106,200,35.53,-12.0\n"));
    assert!(csv[1].1.contains("C,31600,15100,6695,4.7,67.2,420,1,5/5,3/5\n"));
    assert!(csv[1].1.contains("D,28300,15100,6695,4.2,49.7,245,~5-7,5/5,4/5\n"));
}

#[test]
fn file_stat_records_reject_unknown_fields() {
    assert!(serde_json::from_str::<FileStatRecord>(r#"{"format":"A","tokens":1,"lines":1,"x":0}"#).is_err());
}

proptest! {
    #[test]
    fn delta_identity_and_sign(a in 1usize..1_000_000, x in 0usize..1_000_000) {
        prop_assert_eq!(delta_vs_baseline(a, a).unwrap(), 0.0);
        let d = delta_vs_baseline(x, a).unwrap();
        prop_assert_eq!(d < 0.0, x < a);
    }

    #[test]
    fn session_ratio_is_monotone(file in 1u64..100_000, s1 in 0u64..1_000_000, s2 in 0u64..1_000_000) {
        let rec = |session_tokens| SessionRecord {
            format: 'A',
            session_tokens,
            baseline_tokens: 0,
            file_tokens: file,
            wall_clock_s: None,
            tool_calls: None,
            correctness: None,
            confidence_high: None,
        };
        let (lo, hi) = (s1.min(s2), s1.max(s2));
        prop_assert!(session_to_file_ratio(&rec(lo)).unwrap() <= session_to_file_ratio(&rec(hi)).unwrap());
        prop_assert_eq!(session_to_file_ratio(&rec(file)).unwrap(), 1.0);
    }
}
