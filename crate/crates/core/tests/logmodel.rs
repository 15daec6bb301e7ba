use std::collections::BTreeMap;

use proptest::prelude::*;
use semdense::logmodel::{
    draw_categories, generate_corpus, Category, CodeRegistry, CorpusSpec, Level, Namespace,
};

fn histogram(spec: &CorpusSpec) -> BTreeMap<&'static str, usize> {
    let mut h = BTreeMap::new();
    for c in Category::ALL {
        h.insert(c.name(), 0);
    }
    for c in draw_categories(spec) {
        *h.get_mut(c.name()).unwrap() += 1;
    }
    h
}

// Frozen from scripts/oracles/corpus_categories.py
#[test]
fn seed_42_histogram_matches_oracle() {
    let h = histogram(&CorpusSpec::default());
    let expected = BTreeMap::from([
        ("http_request", 72),
        ("db_query", 40),
        ("auth", 27),
        ("business", 28),
        ("error_with_trace", 22),
        ("warning", 11),
    ]);
    assert_eq!(h, expected);

    let first: Vec<_> = draw_categories(&CorpusSpec::default())
        .into_iter()
        .take(6)
        .map(Category::name)
        .collect();
    assert_eq!(
        first,
        ["business", "http_request", "db_query", "http_request", "http_request", "http_request"]
    );
}

#[test]
fn seed_7_fifty_events_matches_oracle() {
    let spec = CorpusSpec {
        seed: 7,
        event_count: 50,
        ..CorpusSpec::default()
    };
    let h = histogram(&spec);
    assert_eq!(
        h.values().copied().collect::<Vec<_>>(),
        // auth, business, db_query, error_with_trace, http_request, warning
        vec![3, 4, 12, 7, 20, 4]
    );
}

#[test]
fn generated_events_use_the_histogram() {
    let events = generate_corpus(&CorpusSpec::default(), &CodeRegistry::builtin()).unwrap();
    assert_eq!(events.len(), 200);
    let mut h = BTreeMap::new();
    for e in &events {
        *h.entry(Category::of_kind(&e.kind).unwrap().name()).or_insert(0) += 1;
    }
    assert_eq!(h["error_with_trace"], 22);
    assert_eq!(h["http_request"], 72);
}

#[test]
fn corpus_invariants() {
    let spec = CorpusSpec::default();
    let reg = CodeRegistry::builtin();
    let events = generate_corpus(&spec, &reg).unwrap();
    let start = spec.window_start * 1000;
    let end = (spec.window_start + spec.window_length as i64) * 1000;
    for w in events.windows(2) {
        assert!(w[0].timestamp_ms <= w[1].timestamp_ms);
    }
    for e in &events {
        assert!((start..end).contains(&e.timestamp_ms));
        e.validate().unwrap();
        reg.resolve_code(Namespace::Service, &e.service).unwrap();
        reg.resolve_code(Namespace::Kind, &e.kind).unwrap();
        if let Some(trace) = &e.stack_trace {
            assert_eq!(e.level, Level::Error);
            assert!((8..=20).contains(&trace.len()));
        }
    }
    assert!(events
        .iter()
        .any(|e| e.kind == "payment_failed" || e.kind == "payment_authorized"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generation_is_deterministic(seed in any::<u64>(), count in 0usize..120) {
        let spec = CorpusSpec { seed, event_count: count, ..CorpusSpec::default() };
        let reg = CodeRegistry::builtin();
        let a = generate_corpus(&spec, &reg).unwrap();
        let b = generate_corpus(&spec, &reg).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.windows(2).all(|w| w[0].timestamp_ms <= w[1].timestamp_ms));
    }

    #[test]
    fn default_weights_cover_all_categories(seed in any::<u64>(), count in 50usize..260) {
        let spec = CorpusSpec { seed, event_count: count, ..CorpusSpec::default() };
        let slots = draw_categories(&spec);
        for c in Category::ALL {
            prop_assert!(slots.contains(&c), "{} missing", c);
        }
    }
}
