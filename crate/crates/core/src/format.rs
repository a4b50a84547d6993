//! The on-disk model document format, schema `si-model/1`.
//!
//! A model document is a UTF-8 JSON object with a mandatory
//! `schema_version` field and top-level sections `outcomes`, `variants`,
//! `inputs`, `executions`, `audits`. Probabilities are written as `"p/q"`
//! strings or bare integers; decimal floats are rejected so no binary
//! rounding can leak into the semantics.
//!
//! Serialization is canonical: keys sorted, entity lists sorted by id,
//! rationals in lowest terms, two-space pretty printing, trailing newline.
//! Structurally equal models serialize to identical bytes, and the hex
//! SHA-256 of those bytes serves as the model digest in reports.
//!
//! Exemplar parameter files follow the same conventions under schema
//! `si-exemplar/1`, with fields `exemplar`, `parameters`, and an optional
//! `seed` for the random generator.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::EngineError;
use crate::exemplars::ExemplarParams;
use crate::model::{
    validate_model, AuditFunction, ElectionInput, Execution, InputId, OutcomeId, SoftwareVariant,
    SystemModel, ValidationReport, VariantId,
};
use crate::rational::Rational;

/// Schema tag every model document must declare.
pub const MODEL_SCHEMA: &str = "si-model/1";

/// Schema tag every exemplar parameter document must declare.
pub const EXEMPLAR_SCHEMA: &str = "si-exemplar/1";

/// Why a document failed to parse.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported schema_version {found:?}, expected {expected:?}")]
    SchemaVersion { expected: &'static str, found: Option<String> },
    #[error("model failed validation:\n{0}")]
    Validation(ValidationReport),
    #[error("{0}")]
    Exemplar(String),
}

fn syntax_error(e: serde_json::Error) -> ParseError {
    ParseError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
}

#[derive(Deserialize)]
struct VersionProbe {
    #[serde(default)]
    schema_version: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDocument {
    schema_version: String,
    outcomes: Vec<OutcomeId>,
    variants: Vec<SoftwareVariant>,
    inputs: Vec<ElectionInput>,
    executions: BTreeMap<VariantId, BTreeMap<InputId, Vec<Execution>>>,
    audits: Vec<AuditFunction>,
}

/// Parses a model document, normalizes it, and runs full validation.
pub fn parse_model(text: &str) -> Result<SystemModel, ParseError> {
    let probe: VersionProbe = serde_json::from_str(text).map_err(syntax_error)?;
    if probe.schema_version.as_deref() != Some(MODEL_SCHEMA) {
        return Err(ParseError::SchemaVersion { expected: MODEL_SCHEMA, found: probe.schema_version });
    }
    let doc: ModelDocument = serde_json::from_str(text).map_err(syntax_error)?;
    let mut model = SystemModel {
        outcomes: doc.outcomes,
        variants: doc.variants,
        inputs: doc.inputs,
        exec_table: doc.executions,
        audits: doc.audits,
    };
    model.normalize();
    let report = validate_model(&model);
    if !report.is_valid() {
        return Err(ParseError::Validation(report));
    }
    Ok(model)
}

/// Serializes a valid model to its canonical document bytes.
pub fn serialize_model(model: &SystemModel) -> String {
    let mut m = model.clone();
    m.normalize();
    let doc = ModelDocument {
        schema_version: MODEL_SCHEMA.to_string(),
        outcomes: m.outcomes,
        variants: m.variants,
        inputs: m.inputs,
        executions: m.exec_table,
        audits: m.audits,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("valid model serializes");
    text.push('\n');
    text
}

/// Hex SHA-256 of the canonical serialization.
pub fn model_digest(model: &SystemModel) -> String {
    let mut hasher = Sha256::new();
    hasher.update(serialize_model(model).as_bytes());
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExemplarDocument {
    schema_version: String,
    exemplar: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    parameters: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

/// Assembles exemplar parameters from a name, a key-value map, and an
/// optional seed, filling canonical defaults for omitted keys: P_weak is
/// (ballots 100, altered 10, sample 1), the risk limit is 1/20, and the
/// random seed is 0.
pub fn exemplar_params_from_parts(
    name: &str,
    parameters: &BTreeMap<String, serde_json::Value>,
    seed: Option<u64>,
) -> Result<ExemplarParams, EngineError> {
    let bad = EngineError::InvalidExemplarParams;
    let allow = |keys: &[&str]| -> Result<(), EngineError> {
        for k in parameters.keys() {
            if !keys.contains(&k.as_str()) {
                return Err(bad(format!("unknown parameter {k:?} for exemplar {name:?}")));
            }
        }
        Ok(())
    };
    let count = |key: &str, default: u64| -> Result<u64, EngineError> {
        match parameters.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .ok_or_else(|| bad(format!("parameter {key:?} must be a nonnegative integer, got {v}"))),
        }
    };
    if seed.is_some() && name != "random" {
        return Err(bad(format!("seed applies only to the random exemplar, not {name:?}")));
    }
    let params = match name {
        "dre" => {
            allow(&[])?;
            ExemplarParams::Dre
        }
        "pweak" => {
            allow(&["ballots", "altered", "sample"])?;
            ExemplarParams::Pweak {
                ballots: count("ballots", 100)?,
                altered: count("altered", 10)?,
                sample: count("sample", 1)?,
            }
        }
        "trusted_individual" => {
            allow(&[])?;
            ExemplarParams::TrustedIndividual
        }
        "paper_rla" => {
            allow(&["alpha"])?;
            let alpha = match parameters.get("alpha") {
                None => Rational::new(1, 20),
                Some(v) => serde_json::from_value::<Rational>(v.clone())
                    .map_err(|e| bad(format!("parameter \"alpha\": {e}")))?,
            };
            ExemplarParams::PaperRla { alpha }
        }
        "random" => {
            allow(&["seed"])?;
            let from_map = parameters
                .get("seed")
                .map(|v| {
                    v.as_u64().ok_or_else(|| {
                        bad(format!("parameter \"seed\" must be a nonnegative integer, got {v}"))
                    })
                })
                .transpose()?;
            if seed.is_some() && from_map.is_some() {
                return Err(bad("seed given both at top level and as a parameter".into()));
            }
            ExemplarParams::Random { seed: seed.or(from_map).unwrap_or(0) }
        }
        other => return Err(bad(format!("unknown exemplar {other:?}"))),
    };
    params.validate()?;
    Ok(params)
}

/// Parses an exemplar parameter document, schema `si-exemplar/1`.
pub fn parse_exemplar_params(text: &str) -> Result<ExemplarParams, ParseError> {
    let probe: VersionProbe = serde_json::from_str(text).map_err(syntax_error)?;
    if probe.schema_version.as_deref() != Some(EXEMPLAR_SCHEMA) {
        return Err(ParseError::SchemaVersion {
            expected: EXEMPLAR_SCHEMA,
            found: probe.schema_version,
        });
    }
    let doc: ExemplarDocument = serde_json::from_str(text).map_err(syntax_error)?;
    exemplar_params_from_parts(&doc.exemplar, &doc.parameters, doc.seed)
        .map_err(|e| ParseError::Exemplar(e.to_string()))
}

/// Serializes exemplar parameters to their canonical document bytes.
pub fn serialize_exemplar_params(params: &ExemplarParams) -> String {
    let mut parameters = BTreeMap::new();
    let mut seed = None;
    match params {
        ExemplarParams::Dre | ExemplarParams::TrustedIndividual => {}
        ExemplarParams::Pweak { ballots, altered, sample } => {
            parameters.insert("ballots".to_string(), serde_json::json!(ballots));
            parameters.insert("altered".to_string(), serde_json::json!(altered));
            parameters.insert("sample".to_string(), serde_json::json!(sample));
        }
        ExemplarParams::PaperRla { alpha } => {
            parameters.insert(
                "alpha".to_string(),
                serde_json::to_value(alpha).expect("rationals serialize"),
            );
        }
        ExemplarParams::Random { seed: s } => seed = Some(*s),
    }
    let doc = ExemplarDocument {
        schema_version: EXEMPLAR_SCHEMA.to_string(),
        exemplar: params.name().to_string(),
        parameters,
        seed,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("parameters serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{outcome_distribution, VariantKind};
    use crate::testutil::*;

    const MINIMAL: &str = r#"{
        "schema_version": "si-model/1",
        "outcomes": ["a"],
        "variants": [{"id": "ideal", "kind": "ideal"}],
        "inputs": [{"id": "v1"}],
        "executions": {"ideal": {"v1": [
            {"id": "e1", "probability": 1, "outcome_dist": {"a": "1"}}
        ]}},
        "audits": []
    }"#;

    #[test]
    fn parses_minimal_document() {
        let model = parse_model(MINIMAL).unwrap();
        assert_eq!(model.variants.len(), 1);
        assert_eq!(model.inputs.len(), 1);
        assert_eq!(model.executions(&"ideal".into(), &"v1".into()).unwrap().len(), 1);
    }

    #[test]
    fn parses_tie_document_exactly() {
        let text = r#"{
            "schema_version": "si-model/1",
            "outcomes": ["a", "b"],
            "variants": [{"id": "ideal", "kind": "ideal"}],
            "inputs": [{"id": "tied"}],
            "executions": {"ideal": {"tied": [
                {"id": "e1", "probability": "1", "outcome_dist": {"a": "1/2", "b": "1/2"}}
            ]}},
            "audits": []
        }"#;
        let model = parse_model(text).unwrap();
        let dist = outcome_distribution(&model, &"ideal".into(), &"tied".into()).unwrap();
        assert_eq!(dist.get("a"), Some(&r(1, 2)));
        assert_eq!(dist.get("b"), Some(&r(1, 2)));
    }

    #[test]
    fn missing_audit_entry_names_audit_and_execution() {
        let text = r#"{
            "schema_version": "si-model/1",
            "outcomes": ["a"],
            "variants": [{"id": "ideal", "kind": "ideal"}],
            "inputs": [{"id": "v1"}],
            "executions": {"ideal": {"v1": [
                {"id": "e1", "probability": "1/2", "outcome_dist": {"a": 1}},
                {"id": "e2", "probability": "1/2", "outcome_dist": {"a": 1}}
            ]}},
            "audits": [{"id": "a1", "reject_prob": {"e1": 0}}]
        }"#;
        let err = parse_model(text).unwrap_err();
        let ParseError::Validation(report) = err else {
            panic!("expected validation error, got {err}");
        };
        let rendered = report.to_string();
        assert!(rendered.contains("a1"), "{rendered}");
        assert!(rendered.contains("\"e2\""), "{rendered}");
    }

    #[test]
    fn rejects_unknown_schema_version() {
        let text = MINIMAL.replace("si-model/1", "si-model/9");
        assert_eq!(
            parse_model(&text).unwrap_err(),
            ParseError::SchemaVersion { expected: MODEL_SCHEMA, found: Some("si-model/9".into()) }
        );
        assert!(matches!(
            parse_model("{}").unwrap_err(),
            ParseError::SchemaVersion { found: None, .. }
        ));
    }

    #[test]
    fn syntax_errors_carry_location() {
        let err = parse_model("{\n  \"schema_version\": ").unwrap_err();
        let ParseError::Syntax { line, .. } = err else {
            panic!("expected syntax error, got {err}");
        };
        assert_eq!(line, 2);
    }

    #[test]
    fn rejects_float_probability_literal() {
        let text = MINIMAL.replace("\"probability\": 1", "\"probability\": 0.5");
        let err = parse_model(&text).unwrap_err();
        assert!(err.to_string().contains("not an exact probability"), "{err}");
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = MINIMAL.replace("\"id\": \"v1\"", "\"id\": \"v1\", \"color\": \"red\"");
        let err = parse_model(&text).unwrap_err();
        assert!(err.to_string().contains("color"), "{err}");
    }

    #[test]
    fn round_trip_is_identity_on_valid_models() {
        for model in [point_mass_model(), tie_model(), sr_separation_model(), split_coverage_model()] {
            let text = serialize_model(&model);
            let back = parse_model(&text).unwrap();
            assert_eq!(back, model);
            assert_eq!(serialize_model(&back), text);
        }
    }

    #[test]
    fn canonical_bytes_ignore_insertion_order() {
        let forward = ModelBuilder::new(&["a", "b"])
            .variant("ideal", VariantKind::Ideal)
            .input("v1")
            .input("v2")
            .execution("ideal", "v1", exec("e1", r(1, 1), &[], &[("a", r(1, 1))]))
            .execution("ideal", "v2", exec("e2", r(1, 1), &[], &[("b", r(1, 1))]))
            .build_unchecked();
        let backward = ModelBuilder::new(&["b", "a"])
            .variant("ideal", VariantKind::Ideal)
            .input("v2")
            .input("v1")
            .execution("ideal", "v2", exec("e2", r(1, 1), &[], &[("b", r(1, 1))]))
            .execution("ideal", "v1", exec("e1", r(1, 1), &[], &[("a", r(1, 1))]))
            .build_unchecked();
        assert_eq!(serialize_model(&forward), serialize_model(&backward));
        assert_eq!(model_digest(&forward), model_digest(&backward));
    }

    #[test]
    fn digest_is_hex_of_canonical_bytes() {
        let digest = model_digest(&point_mass_model());
        assert_eq!(digest.len(), 64);
        assert!(digest.bytes().all(|b| b.is_ascii_hexdigit()));
    }

    #[test]
    fn exemplar_params_round_trip() {
        let all = [
            ExemplarParams::Dre,
            ExemplarParams::Pweak { ballots: 100, altered: 10, sample: 5 },
            ExemplarParams::TrustedIndividual,
            ExemplarParams::PaperRla { alpha: r(1, 20) },
            ExemplarParams::Random { seed: 42 },
        ];
        for params in all {
            let text = serialize_exemplar_params(&params);
            assert_eq!(parse_exemplar_params(&text).unwrap(), params);
        }
    }

    #[test]
    fn exemplar_document_applies_defaults() {
        let text = r#"{"schema_version": "si-exemplar/1", "exemplar": "pweak"}"#;
        assert_eq!(
            parse_exemplar_params(text).unwrap(),
            ExemplarParams::Pweak { ballots: 100, altered: 10, sample: 1 }
        );
        let text = r#"{"schema_version": "si-exemplar/1", "exemplar": "random"}"#;
        assert_eq!(parse_exemplar_params(text).unwrap(), ExemplarParams::Random { seed: 0 });
    }

    #[test]
    fn exemplar_document_rejects_bad_input() {
        let cases = [
            (r#"{"schema_version": "si-model/1", "exemplar": "dre"}"#, "schema_version"),
            (r#"{"schema_version": "si-exemplar/1", "exemplar": "punchcard"}"#, "unknown exemplar"),
            (
                r#"{"schema_version": "si-exemplar/1", "exemplar": "dre", "parameters": {"x": 1}}"#,
                "unknown parameter",
            ),
            (
                r#"{"schema_version": "si-exemplar/1", "exemplar": "dre", "seed": 3}"#,
                "only to the random exemplar",
            ),
            (
                r#"{"schema_version": "si-exemplar/1", "exemplar": "paper_rla",
                    "parameters": {"alpha": "3/2"}}"#,
                "0 < alpha < 1",
            ),
            (
                r#"{"schema_version": "si-exemplar/1", "exemplar": "pweak",
                    "parameters": {"ballots": "many"}}"#,
                "nonnegative integer",
            ),
            (
                r#"{"schema_version": "si-exemplar/1", "exemplar": "random",
                    "parameters": {"seed": 1}, "seed": 2}"#,
                "both at top level",
            ),
        ];
        for (text, needle) in cases {
            let err = parse_exemplar_params(text).unwrap_err();
            assert!(err.to_string().contains(needle), "{err} should mention {needle:?}");
        }
    }
}
