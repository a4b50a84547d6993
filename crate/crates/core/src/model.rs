//! Finite election-system models.
//!
//! A [`SystemModel`] enumerates every execution of every software variant on
//! every input, with exact rational probabilities and per-execution evidence.
//! Fixing this enumerated representation makes each software-independence
//! definition a finite quantifier sweep, so every check in this crate is
//! decidable by direct evaluation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::rational::Rational;

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                $name(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_string())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(s)
            }
        }

        impl std::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

id_type!(
    /// Identifier of an outcome in the finite outcome set.
    OutcomeId
);
id_type!(
    /// Identifier of a software variant (the ideal system or a mutation).
    VariantId
);
id_type!(
    /// Identifier of an election input.
    InputId
);
id_type!(
    /// Identifier of an execution, unique model-wide.
    ExecutionId
);
id_type!(
    /// Identifier of an audit function.
    AuditId
);

/// Role a variant plays in the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantKind {
    /// The intended system; exactly one per model.
    Ideal,
    /// A variant that differs from the ideal only in software behavior.
    SoftwareMutation,
    /// A variant where non-software context misbehaves. Quantified only by
    /// end-to-end verifiability checks, never by SI checks.
    ContextMutation,
}

/// A system variant: the ideal software or one mutation of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SoftwareVariant {
    pub id: VariantId,
    pub kind: VariantKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

/// One election input (a full sequence of cast votes and context choices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectionInput {
    pub id: InputId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

/// One possible run of a variant on an input.
///
/// `probability` is the chance this run occurs given the (variant, input)
/// pair; `evidence` is the record an audit may inspect; `outcome_dist` gives
/// the distribution of announced outcomes for this run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Execution {
    pub id: ExecutionId,
    pub probability: Rational,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub evidence: BTreeMap<String, String>,
    pub outcome_dist: BTreeMap<OutcomeId, Rational>,
}

/// An audit: for each execution, the probability of returning judgment F.
///
/// The table must be total over every execution id in the model, and two
/// executions with identical evidence must receive identical values, since
/// an audit sees only the evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditFunction {
    pub id: AuditId,
    pub reject_prob: BTreeMap<ExecutionId, Rational>,
}

impl AuditFunction {
    /// True iff every reject probability is 0 or 1.
    pub fn is_deterministic(&self) -> bool {
        self.reject_prob.values().all(|p| p.is_zero() || p.is_one())
    }
}

/// The complete finite model of a voting system and its audit set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemModel {
    pub outcomes: Vec<OutcomeId>,
    pub variants: Vec<SoftwareVariant>,
    pub inputs: Vec<ElectionInput>,
    pub exec_table: BTreeMap<VariantId, BTreeMap<InputId, Vec<Execution>>>,
    pub audits: Vec<AuditFunction>,
}

impl SystemModel {
    /// Sorts every list by id so structurally equal models compare and
    /// serialize identically.
    pub fn normalize(&mut self) {
        self.outcomes.sort();
        self.variants.sort_by(|a, b| a.id.cmp(&b.id));
        self.inputs.sort_by(|a, b| a.id.cmp(&b.id));
        self.audits.sort_by(|a, b| a.id.cmp(&b.id));
        for by_input in self.exec_table.values_mut() {
            for execs in by_input.values_mut() {
                execs.sort_by(|a, b| a.id.cmp(&b.id));
            }
        }
    }

    /// The unique ideal variant. Panics on models that failed validation.
    pub fn ideal_variant(&self) -> &SoftwareVariant {
        let mut ideals = self.variants.iter().filter(|v| v.kind == VariantKind::Ideal);
        let first = ideals.next().expect("valid model has an ideal variant");
        assert!(ideals.next().is_none(), "valid model has exactly one ideal variant");
        first
    }

    pub fn variant(&self, id: &VariantId) -> Option<&SoftwareVariant> {
        self.variants.iter().find(|v| &v.id == id)
    }

    pub fn input(&self, id: &InputId) -> Option<&ElectionInput> {
        self.inputs.iter().find(|i| &i.id == id)
    }

    pub fn audit(&self, id: &AuditId) -> Option<&AuditFunction> {
        self.audits.iter().find(|a| &a.id == id)
    }

    /// Variants with kind `software_mutation`, in id order: the set m(P)
    /// that every SI definition quantifies over.
    pub fn software_mutations(&self) -> Vec<&SoftwareVariant> {
        let mut muts: Vec<_> = self
            .variants
            .iter()
            .filter(|v| v.kind == VariantKind::SoftwareMutation)
            .collect();
        muts.sort_by(|a, b| a.id.cmp(&b.id));
        muts
    }

    /// Execution list for one (variant, input) cell.
    pub fn executions(&self, variant: &VariantId, input: &InputId) -> Result<&[Execution], EngineError> {
        let by_input = self
            .exec_table
            .get(variant)
            .ok_or_else(|| EngineError::UnknownVariant(variant.clone()))?;
        let execs = by_input
            .get(input)
            .ok_or_else(|| EngineError::UnknownInput(input.clone()))?;
        Ok(execs)
    }

    /// All (variant, input, executions) cells in key order.
    pub fn cells(&self) -> impl Iterator<Item = (&VariantId, &InputId, &[Execution])> {
        self.exec_table.iter().flat_map(|(v, by_input)| {
            by_input.iter().map(move |(i, execs)| (v, i, execs.as_slice()))
        })
    }

    /// Locates an execution by its model-wide unique id.
    pub fn find_execution(&self, id: &ExecutionId) -> Option<(&VariantId, &InputId, &Execution)> {
        self.cells()
            .find_map(|(v, i, execs)| execs.iter().find(|e| &e.id == id).map(|e| (v, i, e)))
    }
}

/// One broken invariant, with a path locating it in the model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Every invariant violation found in a model; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("model is valid");
        }
        for (n, v) in self.violations.iter().enumerate() {
            if n > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn check_id(report: &mut Vec<Violation>, path: String, id: &str, refinement_separator: bool) {
    if id.is_empty() {
        report.push(Violation { path: path.clone(), message: "id must be nonempty".into() });
    }
    if refinement_separator && id.contains('#') {
        report.push(Violation {
            path,
            message: "id must not contain '#' (reserved for refined execution ids)".into(),
        });
    }
}

fn check_duplicates<'a>(
    report: &mut Vec<Violation>,
    path: &str,
    ids: impl Iterator<Item = &'a str>,
) {
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            report.push(Violation {
                path: path.to_string(),
                message: format!("duplicate id {id:?}"),
            });
        }
    }
}

/// Checks every structural invariant and reports all violations found.
///
/// Violations are data, not failures: an invalid model yields a nonempty
/// report, never a panic.
pub fn validate_model(model: &SystemModel) -> ValidationReport {
    let mut v: Vec<Violation> = Vec::new();

    if model.outcomes.is_empty() {
        v.push(Violation { path: "outcomes".into(), message: "outcome set must be nonempty".into() });
    }
    for o in &model.outcomes {
        check_id(&mut v, format!("outcomes[{:?}]", o.as_str()), o.as_str(), true);
    }
    check_duplicates(&mut v, "outcomes", model.outcomes.iter().map(|o| o.as_str()));
    let outcome_set: BTreeSet<&OutcomeId> = model.outcomes.iter().collect();

    let ideal_count = model.variants.iter().filter(|x| x.kind == VariantKind::Ideal).count();
    if ideal_count != 1 {
        v.push(Violation {
            path: "variants".into(),
            message: format!("model must have exactly one ideal variant, found {ideal_count}"),
        });
    }
    for var in &model.variants {
        check_id(&mut v, format!("variants[{:?}]", var.id.as_str()), var.id.as_str(), false);
    }
    check_duplicates(&mut v, "variants", model.variants.iter().map(|x| x.id.as_str()));

    if model.inputs.is_empty() {
        v.push(Violation { path: "inputs".into(), message: "input set must be nonempty".into() });
    }
    for input in &model.inputs {
        check_id(&mut v, format!("inputs[{:?}]", input.id.as_str()), input.id.as_str(), false);
    }
    check_duplicates(&mut v, "inputs", model.inputs.iter().map(|x| x.id.as_str()));

    for a in &model.audits {
        check_id(&mut v, format!("audits[{:?}]", a.id.as_str()), a.id.as_str(), false);
    }
    check_duplicates(&mut v, "audits", model.audits.iter().map(|x| x.id.as_str()));

    let variant_ids: BTreeSet<&VariantId> = model.variants.iter().map(|x| &x.id).collect();
    let input_ids: BTreeSet<&InputId> = model.inputs.iter().map(|x| &x.id).collect();

    for variant in &variant_ids {
        let by_input = match model.exec_table.get(*variant) {
            Some(m) => m,
            None => {
                v.push(Violation {
                    path: format!("exec_table[{:?}]", variant.as_str()),
                    message: "missing execution table for variant".into(),
                });
                continue;
            }
        };
        for input in &input_ids {
            if !by_input.contains_key(*input) {
                v.push(Violation {
                    path: format!("exec_table[{:?}][{:?}]", variant.as_str(), input.as_str()),
                    message: "missing execution list for (variant, input)".into(),
                });
            }
        }
    }
    for (variant, by_input) in &model.exec_table {
        if !variant_ids.contains(variant) {
            v.push(Violation {
                path: format!("exec_table[{:?}]", variant.as_str()),
                message: "execution table references an undeclared variant".into(),
            });
        }
        for input in by_input.keys() {
            if !input_ids.contains(input) {
                v.push(Violation {
                    path: format!("exec_table[{:?}][{:?}]", variant.as_str(), input.as_str()),
                    message: "execution table references an undeclared input".into(),
                });
            }
        }
    }

    let mut exec_ids: BTreeMap<&ExecutionId, String> = BTreeMap::new();
    for (variant, input, execs) in model.cells() {
        let cell = format!("exec_table[{:?}][{:?}]", variant.as_str(), input.as_str());
        if execs.is_empty() {
            v.push(Violation { path: cell.clone(), message: "execution list must be nonempty".into() });
            continue;
        }
        let total: Rational = execs.iter().map(|e| &e.probability).sum();
        if !total.is_one() {
            v.push(Violation {
                path: cell.clone(),
                message: format!("execution probabilities sum to {total}, expected 1"),
            });
        }
        for e in execs {
            let path = format!("{cell}.executions[{:?}]", e.id.as_str());
            check_id(&mut v, path.clone(), e.id.as_str(), true);
            if let Some(prev) = exec_ids.insert(&e.id, cell.clone()) {
                v.push(Violation {
                    path: path.clone(),
                    message: format!("execution id also used in {prev}; ids must be unique model-wide"),
                });
            }
            if !e.probability.is_positive() || !e.probability.is_probability() {
                v.push(Violation {
                    path: path.clone(),
                    message: format!(
                        "execution probability {} must lie in (0, 1]; omit zero-probability executions",
                        e.probability
                    ),
                });
            }
            if e.outcome_dist.is_empty() {
                v.push(Violation {
                    path: format!("{path}.outcome_dist"),
                    message: "outcome distribution must be nonempty".into(),
                });
                continue;
            }
            let dist_total: Rational = e.outcome_dist.values().sum();
            if !dist_total.is_one() {
                v.push(Violation {
                    path: format!("{path}.outcome_dist"),
                    message: format!("outcome probabilities sum to {dist_total}, expected 1"),
                });
            }
            for (outcome, p) in &e.outcome_dist {
                if !outcome_set.contains(outcome) {
                    v.push(Violation {
                        path: format!("{path}.outcome_dist[{:?}]", outcome.as_str()),
                        message: "unknown outcome".into(),
                    });
                }
                if !p.is_probability() {
                    v.push(Violation {
                        path: format!("{path}.outcome_dist[{:?}]", outcome.as_str()),
                        message: format!("probability {p} must lie in [0, 1]"),
                    });
                }
            }
        }
    }

    for audit in &model.audits {
        let path = format!("audits[{:?}]", audit.id.as_str());
        for exec_id in exec_ids.keys() {
            if !audit.reject_prob.contains_key(*exec_id) {
                v.push(Violation {
                    path: path.clone(),
                    message: format!(
                        "audit table missing execution {:?}; tables must be total",
                        exec_id.as_str()
                    ),
                });
            }
        }
        for (exec_id, p) in &audit.reject_prob {
            if !exec_ids.contains_key(exec_id) {
                v.push(Violation {
                    path: format!("{path}.reject_prob[{:?}]", exec_id.as_str()),
                    message: "unknown execution".into(),
                });
            }
            if !p.is_probability() {
                v.push(Violation {
                    path: format!("{path}.reject_prob[{:?}]", exec_id.as_str()),
                    message: format!("probability {p} must lie in [0, 1]"),
                });
            }
        }
    }

    let mut by_evidence: BTreeMap<&BTreeMap<String, String>, &Execution> = BTreeMap::new();
    for (_, _, execs) in model.cells() {
        for e in execs {
            let representative = *by_evidence.entry(&e.evidence).or_insert(e);
            if representative.id == e.id {
                continue;
            }
            for audit in &model.audits {
                let a = audit.reject_prob.get(&representative.id);
                let b = audit.reject_prob.get(&e.id);
                if let (Some(a), Some(b)) = (a, b) {
                    if a != b {
                        v.push(Violation {
                            path: format!("audits[{:?}]", audit.id.as_str()),
                            message: format!(
                                "executions {:?} and {:?} have identical evidence but reject \
                                 probabilities {a} and {b}; audits may depend only on evidence",
                                representative.id.as_str(),
                                e.id.as_str()
                            ),
                        });
                    }
                }
            }
        }
    }

    ValidationReport { violations: v }
}

/// One single-outcome branch of an execution.
///
/// Splitting each execution at its outcome distribution makes the announced
/// result single-valued, which is what the possibilistic definitions
/// quantify over. Branches inherit the parent's evidence, so every audit
/// judges a branch exactly as it judges the parent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinedExecution {
    /// `"<execution id>#<outcome id>"`.
    pub refined_id: String,
    /// Parent execution id; audit tables are keyed by this.
    pub execution: ExecutionId,
    pub outcome: OutcomeId,
    pub evidence: BTreeMap<String, String>,
    /// Parent probability times the outcome's weight; always positive.
    pub probability: Rational,
}

/// Splits every execution of (variant, input) into single-outcome branches,
/// one per outcome with positive weight, ordered by (execution id, outcome id).
pub fn refine_executions(
    model: &SystemModel,
    variant: &VariantId,
    input: &InputId,
) -> Result<Vec<RefinedExecution>, EngineError> {
    let mut refined: Vec<RefinedExecution> = Vec::new();
    for e in model.executions(variant, input)? {
        for (outcome, weight) in &e.outcome_dist {
            if !weight.is_positive() {
                continue;
            }
            refined.push(RefinedExecution {
                refined_id: format!("{}#{}", e.id, outcome),
                execution: e.id.clone(),
                outcome: outcome.clone(),
                evidence: e.evidence.clone(),
                probability: &e.probability * weight,
            });
        }
    }
    refined.sort_by(|a, b| (&a.execution, &a.outcome).cmp(&(&b.execution, &b.outcome)));
    Ok(refined)
}

/// Outcomes some execution of the ideal variant can announce on this input:
/// the support of the ideal system, read possibilistically.
pub fn ideal_outcomes(model: &SystemModel, input: &InputId) -> Result<BTreeSet<OutcomeId>, EngineError> {
    let ideal = model.ideal_variant().id.clone();
    let refined = refine_executions(model, &ideal, input)?;
    Ok(refined.into_iter().map(|r| r.outcome).collect())
}

/// Exact announced-outcome distribution of (variant, input): the sum over
/// executions of execution probability times outcome weight. Every outcome
/// in the model appears, zero-probability ones included.
pub fn outcome_distribution(
    model: &SystemModel,
    variant: &VariantId,
    input: &InputId,
) -> Result<BTreeMap<OutcomeId, Rational>, EngineError> {
    let mut dist: BTreeMap<OutcomeId, Rational> =
        model.outcomes.iter().map(|o| (o.clone(), Rational::zero())).collect();
    for e in model.executions(variant, input)? {
        for (outcome, weight) in &e.outcome_dist {
            let mass = &e.probability * weight;
            if let Some(slot) = dist.get_mut(outcome) {
                *slot = slot.clone() + mass;
            }
        }
    }
    Ok(dist)
}

/// The admissible set W: outcomes with strictly positive probability under
/// the ideal variant on this input. Computed from the exact distribution and
/// cross-asserted against [`ideal_outcomes`].
pub fn admissible_outcomes(
    model: &SystemModel,
    input: &InputId,
) -> Result<BTreeSet<OutcomeId>, EngineError> {
    let ideal = model.ideal_variant().id.clone();
    let dist = outcome_distribution(model, &ideal, input)?;
    let support: BTreeSet<OutcomeId> =
        dist.into_iter().filter(|(_, p)| p.is_positive()).map(|(o, _)| o).collect();
    let from_refinement = ideal_outcomes(model, input)?;
    assert_eq!(
        support, from_refinement,
        "admissible set must equal the ideal refinement support"
    );
    Ok(support)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    #[test]
    fn minimal_model_is_valid() {
        let model = ModelBuilder::new(&["a"])
            .variant("ideal", VariantKind::Ideal)
            .input("v1")
            .execution("ideal", "v1", exec("e1", r(1, 1), &[], &[("a", r(1, 1))]))
            .build_unchecked();
        assert!(validate_model(&model).is_valid());
    }

    #[test]
    fn probability_sum_violation_names_the_cell() {
        let model = ModelBuilder::new(&["a"])
            .variant("ideal", VariantKind::Ideal)
            .input("v1")
            .execution("ideal", "v1", exec("e1", r(3, 4), &[], &[("a", r(1, 1))]))
            .build_unchecked();
        let report = validate_model(&model);
        assert!(!report.is_valid());
        let hit = report
            .violations
            .iter()
            .find(|x| x.message.contains("sum to 3/4"))
            .expect("sum violation");
        assert_eq!(hit.path, "exec_table[\"ideal\"][\"v1\"]");
    }

    #[test]
    fn evidence_compatibility_violation() {
        let model = ModelBuilder::new(&["a", "b"])
            .variant("ideal", VariantKind::Ideal)
            .input("v1")
            .execution("ideal", "v1", exec("e1", r(1, 2), &[("trace", "t")], &[("a", r(1, 1))]))
            .execution("ideal", "v1", exec("e2", r(1, 2), &[("trace", "t")], &[("b", r(1, 1))]))
            .audit(audit("a1", &[("e1", r(0, 1)), ("e2", r(1, 2))]))
            .build_unchecked();
        let report = validate_model(&model);
        let hit = report
            .violations
            .iter()
            .find(|x| x.message.contains("identical evidence"))
            .expect("evidence violation");
        assert_eq!(hit.path, "audits[\"a1\"]");
    }

    #[test]
    fn audit_totality_violation_names_audit_and_execution() {
        let model = ModelBuilder::new(&["a"])
            .variant("ideal", VariantKind::Ideal)
            .input("v1")
            .execution("ideal", "v1", exec("e1", r(1, 1), &[], &[("a", r(1, 1))]))
            .audit(audit("a1", &[]))
            .build_unchecked();
        let report = validate_model(&model);
        let hit = report
            .violations
            .iter()
            .find(|x| x.message.contains("missing execution"))
            .expect("totality violation");
        assert_eq!(hit.path, "audits[\"a1\"]");
        assert!(hit.message.contains("\"e1\""));
    }

    #[test]
    fn two_ideals_rejected() {
        let model = ModelBuilder::new(&["a"])
            .variant("ideal", VariantKind::Ideal)
            .variant("ideal2", VariantKind::Ideal)
            .input("v1")
            .execution("ideal", "v1", exec("e1", r(1, 1), &[], &[("a", r(1, 1))]))
            .execution("ideal2", "v1", exec("e2", r(1, 1), &[], &[("a", r(1, 1))]))
            .build_unchecked();
        let report = validate_model(&model);
        assert!(report.violations.iter().any(|x| x.message.contains("exactly one ideal")));
    }

    #[test]
    fn refinement_of_point_mass() {
        let model = point_mass_model();
        let refined = refine_executions(&model, &"ideal".into(), &"v1".into()).unwrap();
        assert_eq!(refined.len(), 1);
        assert_eq!(refined[0].refined_id, "e1#a");
        assert_eq!(refined[0].outcome, "a".into());
        assert_eq!(refined[0].probability, r(1, 1));
    }

    #[test]
    fn refinement_of_tie() {
        let model = tie_model();
        let refined = refine_executions(&model, &"ideal".into(), &"tied".into()).unwrap();
        let got: Vec<_> = refined
            .iter()
            .map(|x| (x.refined_id.as_str(), x.outcome.as_str(), x.probability.clone()))
            .collect();
        assert_eq!(
            got,
            vec![("e_tie#a", "a", r(1, 2)), ("e_tie#b", "b", r(1, 2))]
        );
    }

    #[test]
    fn refinement_preserves_total_probability() {
        let model = tie_model();
        for (variant, input, _) in model.cells() {
            let refined = refine_executions(&model, variant, input).unwrap();
            let total: Rational = refined.iter().map(|x| &x.probability).sum();
            assert!(total.is_one(), "{variant}/{input} refined mass {total}");
        }
    }

    #[test]
    fn tie_distribution_is_half_half() {
        let model = tie_model();
        let dist = outcome_distribution(&model, &"ideal".into(), &"tied".into()).unwrap();
        assert_eq!(dist.get("a"), Some(&r(1, 2)));
        assert_eq!(dist.get("b"), Some(&r(1, 2)));
    }

    #[test]
    fn majority_distribution_is_point_mass_with_explicit_zero() {
        let model = tie_model();
        let dist = outcome_distribution(&model, &"ideal".into(), &"majority_a".into()).unwrap();
        assert_eq!(dist.get("a"), Some(&r(1, 1)));
        assert_eq!(dist.get("b"), Some(&r(0, 1)));
    }

    #[test]
    fn mixture_distribution_is_linear() {
        let model = ModelBuilder::new(&["a", "b"])
            .variant("ideal", VariantKind::Ideal)
            .input("v1")
            .execution("ideal", "v1", exec("e1", r(1, 3), &[], &[("a", r(1, 1))]))
            .execution("ideal", "v1", exec("e2", r(2, 3), &[], &[("b", r(1, 1))]))
            .build();
        let dist = outcome_distribution(&model, &"ideal".into(), &"v1".into()).unwrap();
        assert_eq!(dist.get("a"), Some(&r(1, 3)));
        assert_eq!(dist.get("b"), Some(&r(2, 3)));
    }

    #[test]
    fn admissible_equals_ideal_support() {
        let model = tie_model();
        let adm = admissible_outcomes(&model, &"tied".into()).unwrap();
        let ideal = ideal_outcomes(&model, &"tied".into()).unwrap();
        assert_eq!(adm, ideal);
        assert_eq!(adm.len(), 2);

        let adm = admissible_outcomes(&model, &"majority_a".into()).unwrap();
        assert_eq!(adm.into_iter().collect::<Vec<_>>(), vec![OutcomeId::from("a")]);
    }

    #[test]
    fn unknown_ids_are_reported() {
        let model = point_mass_model();
        assert_eq!(
            refine_executions(&model, &"nope".into(), &"v1".into()),
            Err(EngineError::UnknownVariant("nope".into()))
        );
        assert_eq!(
            refine_executions(&model, &"ideal".into(), &"nope".into()),
            Err(EngineError::UnknownInput("nope".into()))
        );
    }

    #[test]
    fn normalize_sorts_every_list() {
        let mut model = ModelBuilder::new(&["b", "a"])
            .variant("ideal", VariantKind::Ideal)
            .input("v2")
            .input("v1")
            .execution("ideal", "v1", exec("e2", r(1, 2), &[], &[("a", r(1, 1))]))
            .execution("ideal", "v1", exec("e1", r(1, 2), &[], &[("a", r(1, 1))]))
            .execution("ideal", "v2", exec("e3", r(1, 1), &[], &[("a", r(1, 1))]))
            .build_unchecked();
        model.normalize();
        assert_eq!(model.outcomes, vec![OutcomeId::from("a"), OutcomeId::from("b")]);
        assert_eq!(model.inputs[0].id, "v1".into());
        let execs = model.executions(&"ideal".into(), &"v1".into()).unwrap();
        assert_eq!(execs[0].id, "e1".into());
    }
}
