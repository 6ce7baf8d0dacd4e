//! Frozen corpus: files on disk must match the generators, and the stored
//! results must match fresh runs.

use std::path::PathBuf;

use scanwatch::corpus::{compute_expected, generate, load_corpus, write_corpus, PolygonFile};
use scanwatch::simulator::{events_to_jsonl, new_world, CostModel, World};
use scanwatch::strategies::{run_strategy, StrategyContext};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn fig12_log() -> String {
    let entry = load_corpus(&corpus_dir().join("fig12/polygon.json")).unwrap().remove(0);
    let poly = entry.instance.polygon;
    let ctx = StrategyContext::new(poly.a_min().clone(), scanwatch::corpus::corridor_width(&poly)).unwrap();
    let mut w = new_world(poly, entry.instance.start, CostModel::default()).unwrap();
    run_strategy("scansearch", &mut w, &ctx).unwrap();
    events_to_jsonl(w.events())
}

/// Rewrites the corpus and the golden log. Run by hand after reviewing a change:
/// `cargo test -p scanwatch --test corpus -- --ignored regenerate`
#[test]
#[ignore]
fn regenerate() {
    write_corpus(&corpus_dir()).unwrap();
    std::fs::write(corpus_dir().join("fig12/events.jsonl"), fig12_log()).unwrap();
}

#[test]
fn files_match_generators() {
    let entries = load_corpus(&corpus_dir()).unwrap();
    assert!(entries.len() >= 40, "{} entries", entries.len());
    for e in &entries {
        let exp = e.expected.as_ref().expect("expected.json present");
        let fresh = generate(&exp.spec).unwrap();
        assert_eq!(PolygonFile::from(&fresh), PolygonFile::from(&e.instance), "{}", e.name);
    }
}

#[test]
fn frozen_results_hold() {
    for e in load_corpus(&corpus_dir()).unwrap() {
        let exp = e.expected.unwrap();
        let now = compute_expected(&exp.name, &exp.spec, &e.instance, &exp.note).unwrap();
        assert_eq!(now, exp, "{}", e.name);
    }
}

#[test]
fn fig12_golden_log() {
    let golden = std::fs::read_to_string(corpus_dir().join("fig12/events.jsonl")).unwrap();
    assert_eq!(fig12_log(), golden);
}
