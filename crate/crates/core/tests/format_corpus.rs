//! Golden-document corpus: every model file under tests/models parses,
//! validates, and survives a canonical round trip.

use std::fs;
use std::path::PathBuf;

use si_core::format::{model_digest, parse_model, serialize_model};
use si_core::model::{outcome_distribution, validate_model};
use si_core::Rational;

fn corpus() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/models");
    let mut docs: Vec<(String, String)> = fs::read_dir(&dir)
        .expect("corpus directory exists")
        .map(|entry| entry.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .map(|p| {
            (p.file_stem().unwrap().to_string_lossy().into_owned(), fs::read_to_string(p).unwrap())
        })
        .collect();
    docs.sort();
    assert!(!docs.is_empty(), "corpus must not be empty");
    docs
}

#[test]
fn corpus_parses_and_round_trips() {
    for (name, text) in corpus() {
        let model = parse_model(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(validate_model(&model).is_valid(), "{name}");
        let canonical = serialize_model(&model);
        let reparsed = parse_model(&canonical).unwrap();
        assert_eq!(reparsed, model, "{name}: round trip must be identity");
        assert_eq!(serialize_model(&reparsed), canonical, "{name}: canonical form must be stable");
        assert_eq!(model_digest(&model), model_digest(&reparsed), "{name}");
    }
}

#[test]
fn tie_document_yields_the_exact_split() {
    let (_, text) = corpus().into_iter().find(|(n, _)| n == "tie_break").unwrap();
    let model = parse_model(&text).unwrap();
    let dist = outcome_distribution(&model, &"ideal".into(), &"tied".into()).unwrap();
    assert_eq!(dist.get("a"), Some(&Rational::new(1, 2)));
    assert_eq!(dist.get("b"), Some(&Rational::new(1, 2)));
    let major = outcome_distribution(&model, &"ideal".into(), &"majority_a".into()).unwrap();
    assert_eq!(major.get("a"), Some(&Rational::one()));
    assert_eq!(major.get("b"), Some(&Rational::zero()));
}

#[test]
fn digests_distinguish_the_corpus_documents() {
    let digests: Vec<String> = corpus()
        .into_iter()
        .map(|(_, text)| model_digest(&parse_model(&text).unwrap()))
        .collect();
    let mut unique = digests.clone();
    unique.sort();
    unique.dedup();
    assert_eq!(unique.len(), digests.len(), "distinct models must have distinct digests");
}
