//! Shared model builders for unit tests.

use std::collections::BTreeMap;

use crate::model::{
    validate_model, AuditFunction, ElectionInput, Execution, SoftwareVariant, SystemModel,
    VariantKind,
};
use crate::rational::Rational;

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn exec(id: &str, p: Rational, evidence: &[(&str, &str)], dist: &[(&str, Rational)]) -> Execution {
    Execution {
        id: id.into(),
        probability: p,
        evidence: evidence.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        outcome_dist: dist.iter().map(|(o, p)| ((*o).into(), p.clone())).collect(),
    }
}

pub fn audit(id: &str, rejects: &[(&str, Rational)]) -> AuditFunction {
    AuditFunction {
        id: id.into(),
        reject_prob: rejects.iter().map(|(e, p)| ((*e).into(), p.clone())).collect(),
    }
}

pub struct ModelBuilder {
    model: SystemModel,
}

impl ModelBuilder {
    pub fn new(outcomes: &[&str]) -> Self {
        ModelBuilder {
            model: SystemModel {
                outcomes: outcomes.iter().map(|o| (*o).into()).collect(),
                variants: Vec::new(),
                inputs: Vec::new(),
                exec_table: BTreeMap::new(),
                audits: Vec::new(),
            },
        }
    }

    pub fn variant(mut self, id: &str, kind: VariantKind) -> Self {
        self.model.variants.push(SoftwareVariant { id: id.into(), kind, description: None });
        self
    }

    pub fn input(mut self, id: &str) -> Self {
        self.model.inputs.push(ElectionInput { id: id.into(), description: None });
        self
    }

    pub fn execution(mut self, variant: &str, input: &str, e: Execution) -> Self {
        self.model
            .exec_table
            .entry(variant.into())
            .or_default()
            .entry(input.into())
            .or_default()
            .push(e);
        self
    }

    pub fn audit(mut self, a: AuditFunction) -> Self {
        self.model.audits.push(a);
        self
    }

    /// Normalizes and asserts validity.
    pub fn build(self) -> SystemModel {
        let mut m = self.model;
        m.normalize();
        let report = validate_model(&m);
        assert!(report.is_valid(), "builder produced invalid model:\n{report}");
        m
    }

    pub fn build_unchecked(self) -> SystemModel {
        self.model
    }
}

/// One outcome, one input, one certain execution.
pub fn point_mass_model() -> SystemModel {
    ModelBuilder::new(&["a"])
        .variant("ideal", VariantKind::Ideal)
        .input("v1")
        .execution("ideal", "v1", exec("e1", r(1, 1), &[], &[("a", r(1, 1))]))
        .build()
}

/// Ideal-only two-candidate model: a tied input announcing a or b with
/// probability 1/2 each, and a strict-majority input announcing a surely.
pub fn tie_model() -> SystemModel {
    ModelBuilder::new(&["a", "b"])
        .variant("ideal", VariantKind::Ideal)
        .input("tied")
        .input("majority_a")
        .execution("ideal", "tied", exec("e_tie", r(1, 1), &[], &[("a", r(1, 2)), ("b", r(1, 2))]))
        .execution("ideal", "majority_a", exec("e_maj", r(1, 1), &[], &[("a", r(1, 1))]))
        .build()
}

/// Tie-dropping mutation under a blind audit: the mutation always announces
/// a, silently removing the admissible outcome b. Accepted-result sets are
/// {a} versus {a, b}, so SI3 holds while SR fails.
pub fn sr_separation_model() -> SystemModel {
    ModelBuilder::new(&["a", "b"])
        .variant("ideal", VariantKind::Ideal)
        .variant("drop_b", VariantKind::SoftwareMutation)
        .input("tied")
        .execution("ideal", "tied", exec("e_tie", r(1, 1), &[], &[("a", r(1, 2)), ("b", r(1, 2))]))
        .execution("drop_b", "tied", exec("e_drop", r(1, 1), &[], &[("a", r(1, 1))]))
        .audit(audit("blind", &[("e_tie", r(0, 1)), ("e_drop", r(0, 1))]))
        .build()
}

/// Two audits, each catching the mutation on one input only. No single
/// audit works for both inputs, so SI1 at the system level fails while SI2
/// holds everywhere.
pub fn split_coverage_model() -> SystemModel {
    ModelBuilder::new(&["a", "b"])
        .variant("ideal", VariantKind::Ideal)
        .variant("bad", VariantKind::SoftwareMutation)
        .input("v1")
        .input("v2")
        .execution("ideal", "v1", exec("e_i1", r(1, 1), &[("run", "ideal1")], &[("a", r(1, 1))]))
        .execution("ideal", "v2", exec("e_i2", r(1, 1), &[("run", "ideal2")], &[("a", r(1, 1))]))
        .execution("bad", "v1", exec("e_m1", r(1, 1), &[("run", "bad1")], &[("b", r(1, 1))]))
        .execution("bad", "v2", exec("e_m2", r(1, 1), &[("run", "bad2")], &[("b", r(1, 1))]))
        .audit(audit(
            "audit1",
            &[("e_i1", r(0, 1)), ("e_i2", r(0, 1)), ("e_m1", r(1, 1)), ("e_m2", r(0, 1))],
        ))
        .audit(audit(
            "audit2",
            &[("e_i1", r(0, 1)), ("e_i2", r(0, 1)), ("e_m1", r(0, 1)), ("e_m2", r(1, 1))],
        ))
        .build()
}

/// One mutation with a detectable wrong run and an undetectable wrong run
/// whose evidence matches the ideal run. SI1 holds, SI1 strong fails.
pub fn partial_detection_model() -> SystemModel {
    ModelBuilder::new(&["a", "b"])
        .variant("ideal", VariantKind::Ideal)
        .variant("bad", VariantKind::SoftwareMutation)
        .input("v1")
        .execution("ideal", "v1", exec("e_i", r(1, 1), &[("t", "ok")], &[("a", r(1, 1))]))
        .execution("bad", "v1", exec("e_d", r(1, 2), &[("t", "tamper")], &[("b", r(1, 1))]))
        .execution("bad", "v1", exec("e_u", r(1, 2), &[("t", "ok")], &[("b", r(1, 1))]))
        .audit(audit("check", &[("e_i", r(0, 1)), ("e_d", r(1, 1)), ("e_u", r(0, 1))]))
        .build()
}
