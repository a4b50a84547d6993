//! The possibilistic and threshold software-independence checks.
//!
//! Each operation sweeps the finite quantifiers of one definition and
//! returns a [`CheckVerdict`] whose witness makes the answer auditable: a
//! failing verdict carries the violating tuple, a holding existential
//! verdict names the audit that works, and [`replay_witness`] re-evaluates
//! either against the model.
//!
//! Soundness is a gate, not a convention. A single-audit check refuses to
//! run against an audit that can reject an ideal run; the audit-set checks
//! exclude such audits and say so in the verdict's warnings.
//!
//! Witness tie-breaking is the lexicographically least violating tuple, so
//! verdicts are byte-stable regardless of evaluation order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::model::{
    admissible_outcomes, refine_executions, AuditFunction, AuditId, ExecutionId, InputId,
    OutcomeId, SystemModel, VariantId, VariantKind,
};
use crate::rational::Rational;

/// Which definition a verdict speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Definition {
    #[serde(rename = "SOUND")]
    Sound,
    #[serde(rename = "SI1")]
    Si1,
    #[serde(rename = "SI1_STRONG")]
    Si1Strong,
    #[serde(rename = "SI1_SYSTEM")]
    Si1System,
    #[serde(rename = "SI2")]
    Si2,
    #[serde(rename = "SI2_SYSTEM")]
    Si2System,
    #[serde(rename = "SI3")]
    Si3,
    #[serde(rename = "SI3_SYSTEM")]
    Si3System,
    #[serde(rename = "SI4")]
    Si4,
    #[serde(rename = "SI4_SYSTEM")]
    Si4System,
    #[serde(rename = "SR")]
    Sr,
    #[serde(rename = "SR_SYSTEM")]
    SrSystem,
    #[serde(rename = "E2EV")]
    E2ev,
}

impl Definition {
    pub fn as_str(self) -> &'static str {
        match self {
            Definition::Sound => "SOUND",
            Definition::Si1 => "SI1",
            Definition::Si1Strong => "SI1_STRONG",
            Definition::Si1System => "SI1_SYSTEM",
            Definition::Si2 => "SI2",
            Definition::Si2System => "SI2_SYSTEM",
            Definition::Si3 => "SI3",
            Definition::Si3System => "SI3_SYSTEM",
            Definition::Si4 => "SI4",
            Definition::Si4System => "SI4_SYSTEM",
            Definition::Sr => "SR",
            Definition::SrSystem => "SR_SYSTEM",
            Definition::E2ev => "E2EV",
        }
    }
}

impl fmt::Display for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which way an accepted-result set diverges from the ideal's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MismatchDirection {
    /// The mutation surely-accepts an outcome the ideal cannot produce.
    Added,
    /// An admissible outcome is missing from the mutation's accepted set.
    Removed,
}

/// Replayable evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// The audit satisfying an existential audit quantifier.
    Audit { audit: AuditId },
    /// Soundness failure: an ideal run this audit rejects.
    RejectedIdeal { input: InputId, execution: ExecutionId, reject_prob: Rational },
    /// SI1 failure: no run of this mutation is ever rejected, yet the named
    /// branch announces an inadmissible outcome.
    MutationUndetected {
        input: InputId,
        mutation: VariantId,
        execution: ExecutionId,
        outcome: OutcomeId,
    },
    /// Strong-SI1 failure: this wrong-outcome branch has zero reject probability.
    ExecutionUndetected {
        input: InputId,
        mutation: VariantId,
        execution: ExecutionId,
        outcome: OutcomeId,
    },
    /// SI2 failure: as [`Witness::MutationUndetected`], under every sound audit at once.
    MutationUndetectedBySet {
        input: InputId,
        mutation: VariantId,
        execution: ExecutionId,
        outcome: OutcomeId,
    },
    /// SI3 or SR failure: an outcome on the wrong side of the accepted-set relation.
    AccMismatch {
        input: InputId,
        mutation: VariantId,
        outcome: OutcomeId,
        direction: MismatchDirection,
    },
    /// SI4 failure: a wrong-outcome branch rejected with probability below p0.
    DetectionBelowThreshold {
        input: InputId,
        mutation: VariantId,
        execution: ExecutionId,
        outcome: OutcomeId,
        reject_prob: Rational,
    },
    /// E2E-V failure: a branch that passes every verification audit surely
    /// yet announces an inadmissible outcome.
    UnverifiedOutcome {
        input: InputId,
        variant: VariantId,
        execution: ExecutionId,
        outcome: OutcomeId,
    },
    /// System-level failure of an ∃-audit definition: every sound audit
    /// fails somewhere, each with its own witness.
    AllAuditsFail { failures: BTreeMap<AuditId, Witness> },
}

/// Outcome of one check, with enough context to replay it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckVerdict {
    pub definition: Definition,
    pub holds: bool,
    /// Audit the election-level check ran against, if it takes one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditId>,
    /// Input the election-level check ran against, if it takes one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputId>,
    /// Detection threshold, for SI4 forms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Election-level truth per input, for system forms. For definitions
    /// quantifying ∃audit, an input counts as true when some sound audit
    /// works for it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_input: Option<BTreeMap<InputId, bool>>,
    /// For SI2 forms: per mutation, every sound audit with positive
    /// rejection probability on some run of that mutation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attribution: Option<BTreeMap<VariantId, BTreeSet<AuditId>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl CheckVerdict {
    pub(crate) fn new(definition: Definition, holds: bool) -> Self {
        CheckVerdict {
            definition,
            holds,
            audit: None,
            input: None,
            p0: None,
            witness: None,
            per_input: None,
            attribution: None,
            warnings: Vec::new(),
        }
    }
}

fn resolve_audit<'a>(model: &'a SystemModel, id: &AuditId) -> Result<&'a AuditFunction, EngineError> {
    model.audit(id).ok_or_else(|| EngineError::UnknownAudit(id.clone()))
}

fn resolve_input(model: &SystemModel, id: &InputId) -> Result<(), EngineError> {
    model.input(id).map(|_| ()).ok_or_else(|| EngineError::UnknownInput(id.clone()))
}

fn reject<'a>(audit: &'a AuditFunction, execution: &ExecutionId) -> &'a Rational {
    audit.reject_prob.get(execution).expect("audit tables are total on valid models")
}

fn sorted_input_ids(model: &SystemModel) -> Vec<&InputId> {
    let mut ids: Vec<&InputId> = model.inputs.iter().map(|i| &i.id).collect();
    ids.sort();
    ids
}

/// Least (input, execution) of the ideal variant this audit rejects with
/// positive probability, or None for a sound audit.
pub(crate) fn soundness_failure_of(
    model: &SystemModel,
    audit: &AuditFunction,
) -> Option<(InputId, ExecutionId, Rational)> {
    let ideal = model.ideal_variant().id.clone();
    sorted_input_ids(model)
        .into_iter()
        .flat_map(|input| {
            let mut execs: Vec<_> = model
                .executions(&ideal, input)
                .expect("ideal cells exist on valid models")
                .iter()
                .collect();
            execs.sort_by(|a, b| a.id.cmp(&b.id));
            execs.into_iter().map(move |e| (input, e))
        })
        .find(|(_, e)| reject(audit, &e.id).is_positive())
        .map(|(input, e)| (input.clone(), e.id.clone(), reject(audit, &e.id).clone()))
}

fn require_sound(model: &SystemModel, audit: &AuditFunction) -> Result<(), EngineError> {
    match soundness_failure_of(model, audit) {
        None => Ok(()),
        Some((input, execution, _)) => Err(EngineError::UnsoundAudit {
            audit: audit.id.clone(),
            input,
            execution,
        }),
    }
}

/// Sound audits in id order, plus one warning per excluded unsound audit.
/// Errors with NoSoundAudit when nothing survives.
pub(crate) fn sound_audits(
    model: &SystemModel,
) -> Result<(Vec<&AuditFunction>, Vec<String>), EngineError> {
    let mut audits: Vec<&AuditFunction> = model.audits.iter().collect();
    audits.sort_by(|a, b| a.id.cmp(&b.id));
    let mut sound = Vec::new();
    let mut warnings = Vec::new();
    for audit in audits {
        match soundness_failure_of(model, audit) {
            None => sound.push(audit),
            Some((input, execution, p)) => warnings.push(format!(
                "excluded unsound audit {:?}: rejects ideal execution {:?} on input {:?} \
                 with probability {}",
                audit.id.as_str(),
                execution.as_str(),
                input.as_str(),
                p
            )),
        }
    }
    if sound.is_empty() {
        return Err(EngineError::NoSoundAudit);
    }
    Ok((sound, warnings))
}

/// Zero probability of rejecting any ideal run.
pub fn check_soundness(model: &SystemModel, audit: &AuditId) -> Result<CheckVerdict, EngineError> {
    let audit_fn = resolve_audit(model, audit)?;
    let failure = soundness_failure_of(model, audit_fn);
    let mut verdict = CheckVerdict::new(Definition::Sound, failure.is_none());
    verdict.audit = Some(audit.clone());
    if let Some((input, execution, reject_prob)) = failure {
        verdict.witness = Some(Witness::RejectedIdeal { input, execution, reject_prob });
    }
    Ok(verdict)
}

/// SI1 on one input with one audit: every mutation either announces only
/// admissible outcomes or has some run the audit rejects with positive
/// probability.
pub fn check_si1(
    model: &SystemModel,
    input: &InputId,
    audit: &AuditId,
) -> Result<CheckVerdict, EngineError> {
    let audit_fn = resolve_audit(model, audit)?;
    resolve_input(model, input)?;
    require_sound(model, audit_fn)?;
    let admissible = admissible_outcomes(model, input)?;
    let mut candidates = Vec::new();
    for mutation in model.software_mutations() {
        let refined = refine_executions(model, &mutation.id, input)?;
        if refined.iter().any(|r| reject(audit_fn, &r.execution).is_positive()) {
            continue;
        }
        if let Some(r) = refined.iter().find(|r| !admissible.contains(&r.outcome)) {
            candidates.push((mutation.id.clone(), r.execution.clone(), r.outcome.clone()));
        }
    }
    let mut verdict = CheckVerdict::new(Definition::Si1, candidates.is_empty());
    verdict.audit = Some(audit.clone());
    verdict.input = Some(input.clone());
    if let Some((mutation, execution, outcome)) = candidates.into_iter().min() {
        verdict.witness = Some(Witness::MutationUndetected {
            input: input.clone(),
            mutation,
            execution,
            outcome,
        });
    }
    Ok(verdict)
}

/// The strong SI1 variant: every wrong-outcome branch of every mutation is
/// individually rejected with positive probability.
pub fn check_si1_strong(
    model: &SystemModel,
    input: &InputId,
    audit: &AuditId,
) -> Result<CheckVerdict, EngineError> {
    let audit_fn = resolve_audit(model, audit)?;
    resolve_input(model, input)?;
    require_sound(model, audit_fn)?;
    let admissible = admissible_outcomes(model, input)?;
    let mut candidates = Vec::new();
    for mutation in model.software_mutations() {
        let refined = refine_executions(model, &mutation.id, input)?;
        if let Some(r) = refined
            .iter()
            .find(|r| !admissible.contains(&r.outcome) && reject(audit_fn, &r.execution).is_zero())
        {
            candidates.push((mutation.id.clone(), r.execution.clone(), r.outcome.clone()));
        }
    }
    let mut verdict = CheckVerdict::new(Definition::Si1Strong, candidates.is_empty());
    verdict.audit = Some(audit.clone());
    verdict.input = Some(input.clone());
    if let Some((mutation, execution, outcome)) = candidates.into_iter().min() {
        verdict.witness = Some(Witness::ExecutionUndetected {
            input: input.clone(),
            mutation,
            execution,
            outcome,
        });
    }
    Ok(verdict)
}

/// SI2 on one input: detection may come from any sound audit in the set.
/// The verdict's attribution table lists, per mutation, every sound audit
/// with a positive chance of rejecting one of its runs.
pub fn check_si2(model: &SystemModel, input: &InputId) -> Result<CheckVerdict, EngineError> {
    resolve_input(model, input)?;
    let (sound, warnings) = sound_audits(model)?;
    let admissible = admissible_outcomes(model, input)?;
    let mut attribution: BTreeMap<VariantId, BTreeSet<AuditId>> = BTreeMap::new();
    let mut candidates = Vec::new();
    for mutation in model.software_mutations() {
        let refined = refine_executions(model, &mutation.id, input)?;
        let detectors: BTreeSet<AuditId> = sound
            .iter()
            .filter(|a| refined.iter().any(|r| reject(a, &r.execution).is_positive()))
            .map(|a| a.id.clone())
            .collect();
        let detected = !detectors.is_empty();
        attribution.insert(mutation.id.clone(), detectors);
        if detected {
            continue;
        }
        if let Some(r) = refined.iter().find(|r| !admissible.contains(&r.outcome)) {
            candidates.push((mutation.id.clone(), r.execution.clone(), r.outcome.clone()));
        }
    }
    let mut verdict = CheckVerdict::new(Definition::Si2, candidates.is_empty());
    verdict.input = Some(input.clone());
    verdict.attribution = Some(attribution);
    verdict.warnings = warnings;
    if let Some((mutation, execution, outcome)) = candidates.into_iter().min() {
        verdict.witness = Some(Witness::MutationUndetectedBySet {
            input: input.clone(),
            mutation,
            execution,
            outcome,
        });
    }
    Ok(verdict)
}

/// SI2 over every input.
pub fn check_si2_system(model: &SystemModel) -> Result<CheckVerdict, EngineError> {
    let mut verdict = CheckVerdict::new(Definition::Si2System, true);
    let mut per_input = BTreeMap::new();
    let mut attribution: BTreeMap<VariantId, BTreeSet<AuditId>> = BTreeMap::new();
    for input in sorted_input_ids(model) {
        let v = check_si2(model, input)?;
        per_input.insert(input.clone(), v.holds);
        for (mutation, detectors) in v.attribution.unwrap_or_default() {
            attribution.entry(mutation).or_default().extend(detectors);
        }
        if !v.holds && verdict.holds {
            verdict.holds = false;
            verdict.witness = v.witness;
        }
        if verdict.warnings.is_empty() {
            verdict.warnings = v.warnings;
        }
    }
    verdict.per_input = Some(per_input);
    verdict.attribution = Some(attribution);
    Ok(verdict)
}

/// Surely accepted results: outcomes some run of the variant announces with
/// zero probability of rejection by this audit.
pub fn acc_results(
    model: &SystemModel,
    variant: &VariantId,
    audit: &AuditId,
    input: &InputId,
) -> Result<BTreeSet<OutcomeId>, EngineError> {
    let audit_fn = resolve_audit(model, audit)?;
    if model.variant(variant).is_none() {
        return Err(EngineError::UnknownVariant(variant.clone()));
    }
    let refined = refine_executions(model, variant, input)?;
    Ok(refined
        .iter()
        .filter(|r| reject(audit_fn, &r.execution).is_zero())
        .map(|r| r.outcome.clone())
        .collect())
}

fn acc_against_ideal(
    model: &SystemModel,
    input: &InputId,
    audit: &AuditId,
) -> Result<BTreeSet<OutcomeId>, EngineError> {
    let ideal = model.ideal_variant().id.clone();
    let ideal_acc = acc_results(model, &ideal, audit, input)?;
    let admissible = admissible_outcomes(model, input)?;
    assert_eq!(
        ideal_acc, admissible,
        "a sound audit surely accepts exactly the admissible set"
    );
    Ok(ideal_acc)
}

/// SI3 on one input: every mutation's surely-accepted set is contained in
/// the ideal's.
pub fn check_si3(
    model: &SystemModel,
    input: &InputId,
    audit: &AuditId,
) -> Result<CheckVerdict, EngineError> {
    let audit_fn = resolve_audit(model, audit)?;
    resolve_input(model, input)?;
    require_sound(model, audit_fn)?;
    let ideal_acc = acc_against_ideal(model, input, audit)?;
    let mut candidates = Vec::new();
    for mutation in model.software_mutations() {
        let acc = acc_results(model, &mutation.id, audit, input)?;
        if let Some(outcome) = acc.difference(&ideal_acc).next() {
            candidates.push((mutation.id.clone(), outcome.clone()));
        }
    }
    let mut verdict = CheckVerdict::new(Definition::Si3, candidates.is_empty());
    verdict.audit = Some(audit.clone());
    verdict.input = Some(input.clone());
    if let Some((mutation, outcome)) = candidates.into_iter().min() {
        verdict.witness = Some(Witness::AccMismatch {
            input: input.clone(),
            mutation,
            outcome,
            direction: MismatchDirection::Added,
        });
    }
    Ok(verdict)
}

/// Software resilience on one input: every mutation's surely-accepted set
/// equals the ideal's.
pub fn check_sr(
    model: &SystemModel,
    input: &InputId,
    audit: &AuditId,
) -> Result<CheckVerdict, EngineError> {
    let audit_fn = resolve_audit(model, audit)?;
    resolve_input(model, input)?;
    require_sound(model, audit_fn)?;
    let ideal_acc = acc_against_ideal(model, input, audit)?;
    let mut candidates = Vec::new();
    for mutation in model.software_mutations() {
        let acc = acc_results(model, &mutation.id, audit, input)?;
        let added = acc.difference(&ideal_acc).next();
        let removed = ideal_acc.difference(&acc).next();
        let least = match (added, removed) {
            (Some(a), Some(r)) if r < a => Some((r, MismatchDirection::Removed)),
            (Some(a), _) => Some((a, MismatchDirection::Added)),
            (None, Some(r)) => Some((r, MismatchDirection::Removed)),
            (None, None) => None,
        };
        if let Some((outcome, direction)) = least {
            candidates.push((mutation.id.clone(), outcome.clone(), direction));
        }
    }
    let mut verdict = CheckVerdict::new(Definition::Sr, candidates.is_empty());
    verdict.audit = Some(audit.clone());
    verdict.input = Some(input.clone());
    if let Some((mutation, outcome, direction)) = candidates.into_iter().min() {
        verdict.witness = Some(Witness::AccMismatch {
            input: input.clone(),
            mutation,
            outcome,
            direction,
        });
    }
    Ok(verdict)
}

/// SI4 on one input: every wrong-outcome branch of every mutation is
/// rejected with probability at least p0.
pub fn check_si4(
    model: &SystemModel,
    input: &InputId,
    audit: &AuditId,
    p0: &Rational,
) -> Result<CheckVerdict, EngineError> {
    if !p0.is_positive() || !p0.is_probability() {
        return Err(EngineError::InvalidThreshold(p0.clone()));
    }
    let audit_fn = resolve_audit(model, audit)?;
    resolve_input(model, input)?;
    require_sound(model, audit_fn)?;
    let admissible = admissible_outcomes(model, input)?;
    let mut candidates = Vec::new();
    for mutation in model.software_mutations() {
        let refined = refine_executions(model, &mutation.id, input)?;
        if let Some(r) = refined
            .iter()
            .find(|r| !admissible.contains(&r.outcome) && reject(audit_fn, &r.execution) < p0)
        {
            candidates.push((
                mutation.id.clone(),
                r.execution.clone(),
                r.outcome.clone(),
                reject(audit_fn, &r.execution).clone(),
            ));
        }
    }
    let mut verdict = CheckVerdict::new(Definition::Si4, candidates.is_empty());
    verdict.audit = Some(audit.clone());
    verdict.input = Some(input.clone());
    verdict.p0 = Some(p0.clone());
    if let Some((mutation, execution, outcome, reject_prob)) =
        candidates.into_iter().min_by(|a, b| (&a.0, &a.1, &a.2).cmp(&(&b.0, &b.1, &b.2)))
    {
        verdict.witness = Some(Witness::DetectionBelowThreshold {
            input: input.clone(),
            mutation,
            execution,
            outcome,
            reject_prob,
        });
    }
    Ok(verdict)
}

/// Shared ∃audit ∀input quantifier for the system forms, optionally
/// restricted to a single input for the election-level existential reading.
/// The full (audit × input) matrix is evaluated, in parallel, so the
/// verdict can report per-input coverage even when no single audit works
/// everywhere.
fn exists_audit_forall_inputs<F>(
    model: &SystemModel,
    definition: Definition,
    restrict: Option<&InputId>,
    check: F,
) -> Result<CheckVerdict, EngineError>
where
    F: Fn(&InputId, &AuditId) -> Result<CheckVerdict, EngineError> + Sync,
{
    let (sound, warnings) = sound_audits(model)?;
    let inputs = match restrict {
        Some(input) => {
            resolve_input(model, input)?;
            vec![input]
        }
        None => sorted_input_ids(model),
    };
    let pairs: Vec<(&AuditFunction, &InputId)> = sound
        .iter()
        .flat_map(|a| inputs.iter().map(move |i| (*a, *i)))
        .collect();
    let cells: Vec<((&AuditId, &InputId), CheckVerdict)> = pairs
        .par_iter()
        .map(|(a, i)| check(i, &a.id).map(|v| ((&a.id, *i), v)))
        .collect::<Result<_, _>>()?;
    let matrix: BTreeMap<(&AuditId, &InputId), CheckVerdict> = cells.into_iter().collect();

    let mut verdict = CheckVerdict::new(definition, false);
    verdict.input = restrict.cloned();
    verdict.warnings = warnings;
    if let Some(winner) = sound
        .iter()
        .find(|a| inputs.iter().all(|i| matrix[&(&a.id, *i)].holds))
    {
        verdict.holds = true;
        verdict.witness = Some(Witness::Audit { audit: winner.id.clone() });
        verdict.per_input = Some(inputs.iter().map(|i| ((*i).clone(), true)).collect());
        return Ok(verdict);
    }

    let mut failures = BTreeMap::new();
    for a in &sound {
        let failing = inputs
            .iter()
            .find(|i| !matrix[&(&a.id, **i)].holds)
            .expect("audit without an all-true row fails somewhere");
        let witness = matrix[&(&a.id, *failing)]
            .witness
            .clone()
            .expect("failing verdicts carry witnesses");
        failures.insert(a.id.clone(), witness);
    }
    verdict.witness = Some(Witness::AllAuditsFail { failures });
    verdict.per_input = Some(
        inputs
            .iter()
            .map(|i| ((*i).clone(), sound.iter().any(|a| matrix[&(&a.id, *i)].holds)))
            .collect(),
    );
    Ok(verdict)
}

/// ∀input merge of one election check against a fixed audit: holds iff the
/// check holds on every input, with per-input truth and the least failing
/// input's witness.
fn forall_inputs_for_audit<F>(
    model: &SystemModel,
    definition: Definition,
    audit: &AuditId,
    check: F,
) -> Result<CheckVerdict, EngineError>
where
    F: Fn(&InputId) -> Result<CheckVerdict, EngineError>,
{
    let mut verdict = CheckVerdict::new(definition, true);
    verdict.audit = Some(audit.clone());
    let mut per_input = BTreeMap::new();
    for input in sorted_input_ids(model) {
        let v = check(input)?;
        per_input.insert(input.clone(), v.holds);
        if !v.holds && verdict.holds {
            verdict.holds = false;
            verdict.witness = v.witness;
        }
    }
    verdict.per_input = Some(per_input);
    Ok(verdict)
}

/// ∃ sound audit working for every input, in the SI1 sense.
pub fn check_si1_system(model: &SystemModel) -> Result<CheckVerdict, EngineError> {
    exists_audit_forall_inputs(model, Definition::Si1System, None, |i, a| check_si1(model, i, a))
}

/// ∃ sound audit working for every input, in the SI3 sense.
pub fn check_si3_system(model: &SystemModel) -> Result<CheckVerdict, EngineError> {
    exists_audit_forall_inputs(model, Definition::Si3System, None, |i, a| check_si3(model, i, a))
}

/// ∃ sound audit working for every input, in the SR sense.
pub fn check_sr_system(model: &SystemModel) -> Result<CheckVerdict, EngineError> {
    exists_audit_forall_inputs(model, Definition::SrSystem, None, |i, a| check_sr(model, i, a))
}

/// ∃ sound audit working for every input, in the SI4 sense at threshold p0.
pub fn check_si4_system(model: &SystemModel, p0: &Rational) -> Result<CheckVerdict, EngineError> {
    if !p0.is_positive() || !p0.is_probability() {
        return Err(EngineError::InvalidThreshold(p0.clone()));
    }
    let mut verdict = exists_audit_forall_inputs(model, Definition::Si4System, None, |i, a| {
        check_si4(model, i, a, p0)
    })?;
    verdict.p0 = Some(p0.clone());
    Ok(verdict)
}

/// ∃ sound audit satisfying weak SI1 on this input alone.
pub fn check_si1_for_input(model: &SystemModel, input: &InputId) -> Result<CheckVerdict, EngineError> {
    exists_audit_forall_inputs(model, Definition::Si1, Some(input), |i, a| check_si1(model, i, a))
}

/// ∃ sound audit satisfying SI3 on this input alone.
pub fn check_si3_for_input(model: &SystemModel, input: &InputId) -> Result<CheckVerdict, EngineError> {
    exists_audit_forall_inputs(model, Definition::Si3, Some(input), |i, a| check_si3(model, i, a))
}

/// ∃ sound audit satisfying SR on this input alone.
pub fn check_sr_for_input(model: &SystemModel, input: &InputId) -> Result<CheckVerdict, EngineError> {
    exists_audit_forall_inputs(model, Definition::Sr, Some(input), |i, a| check_sr(model, i, a))
}

/// ∃ sound audit satisfying SI4 at threshold p0 on this input alone.
pub fn check_si4_for_input(
    model: &SystemModel,
    input: &InputId,
    p0: &Rational,
) -> Result<CheckVerdict, EngineError> {
    if !p0.is_positive() || !p0.is_probability() {
        return Err(EngineError::InvalidThreshold(p0.clone()));
    }
    let mut verdict = exists_audit_forall_inputs(model, Definition::Si4, Some(input), |i, a| {
        check_si4(model, i, a, p0)
    })?;
    verdict.p0 = Some(p0.clone());
    Ok(verdict)
}

/// Weak SI1 against one audit on every input.
pub fn check_si1_all_inputs(model: &SystemModel, audit: &AuditId) -> Result<CheckVerdict, EngineError> {
    forall_inputs_for_audit(model, Definition::Si1, audit, |i| check_si1(model, i, audit))
}

/// Strong SI1 against one audit on every input.
pub fn check_si1_strong_all_inputs(
    model: &SystemModel,
    audit: &AuditId,
) -> Result<CheckVerdict, EngineError> {
    forall_inputs_for_audit(model, Definition::Si1Strong, audit, |i| {
        check_si1_strong(model, i, audit)
    })
}

/// SI3 against one audit on every input.
pub fn check_si3_all_inputs(model: &SystemModel, audit: &AuditId) -> Result<CheckVerdict, EngineError> {
    forall_inputs_for_audit(model, Definition::Si3, audit, |i| check_si3(model, i, audit))
}

/// SR against one audit on every input.
pub fn check_sr_all_inputs(model: &SystemModel, audit: &AuditId) -> Result<CheckVerdict, EngineError> {
    forall_inputs_for_audit(model, Definition::Sr, audit, |i| check_sr(model, i, audit))
}

/// SI4 at threshold p0 against one audit on every input.
pub fn check_si4_all_inputs(
    model: &SystemModel,
    audit: &AuditId,
    p0: &Rational,
) -> Result<CheckVerdict, EngineError> {
    if !p0.is_positive() || !p0.is_probability() {
        return Err(EngineError::InvalidThreshold(p0.clone()));
    }
    let mut verdict = forall_inputs_for_audit(model, Definition::Si4, audit, |i| {
        check_si4(model, i, audit, p0)
    })?;
    verdict.p0 = Some(p0.clone());
    Ok(verdict)
}

fn refined_branch_exists(
    model: &SystemModel,
    variant: &VariantId,
    input: &InputId,
    execution: &ExecutionId,
    outcome: &OutcomeId,
) -> Result<bool, EngineError> {
    let refined = refine_executions(model, variant, input)?;
    Ok(refined.iter().any(|r| &r.execution == execution && &r.outcome == outcome))
}

fn replay_one(
    model: &SystemModel,
    audit: Option<&AuditId>,
    p0: Option<&Rational>,
    witness: &Witness,
) -> Result<bool, EngineError> {
    let audit_fn = |id: &AuditId| resolve_audit(model, id);
    let lookup_reject = |id: &AuditId, e: &ExecutionId| -> Result<Rational, EngineError> {
        audit_fn(id)?
            .reject_prob
            .get(e)
            .cloned()
            .ok_or_else(|| EngineError::UnknownExecution(e.clone()))
    };
    let is_mutation = |id: &VariantId| -> Result<bool, EngineError> {
        let v = model.variant(id).ok_or_else(|| EngineError::UnknownVariant(id.clone()))?;
        Ok(v.kind == VariantKind::SoftwareMutation)
    };
    match witness {
        Witness::Audit { .. } => {
            unreachable!("existential audit witnesses are replayed by replay_witness")
        }
        Witness::RejectedIdeal { input, execution, reject_prob } => {
            let audit = audit.ok_or(EngineError::NoSoundAudit)?;
            let ideal = model.ideal_variant().id.clone();
            let on_ideal = model
                .executions(&ideal, input)?
                .iter()
                .any(|e| &e.id == execution);
            let p = lookup_reject(audit, execution)?;
            Ok(on_ideal && p.is_positive() && &p == reject_prob)
        }
        Witness::MutationUndetected { input, mutation, execution, outcome } => {
            let audit = audit.ok_or(EngineError::NoSoundAudit)?;
            if !is_mutation(mutation)? {
                return Ok(false);
            }
            let branch = refined_branch_exists(model, mutation, input, execution, outcome)?;
            let wrong = !admissible_outcomes(model, input)?.contains(outcome);
            let audit_fn = audit_fn(audit)?;
            let all_silent = refine_executions(model, mutation, input)?
                .iter()
                .all(|r| reject(audit_fn, &r.execution).is_zero());
            Ok(branch && wrong && all_silent)
        }
        Witness::ExecutionUndetected { input, mutation, execution, outcome } => {
            let audit = audit.ok_or(EngineError::NoSoundAudit)?;
            if !is_mutation(mutation)? {
                return Ok(false);
            }
            let branch = refined_branch_exists(model, mutation, input, execution, outcome)?;
            let wrong = !admissible_outcomes(model, input)?.contains(outcome);
            Ok(branch && wrong && lookup_reject(audit, execution)?.is_zero())
        }
        Witness::MutationUndetectedBySet { input, mutation, execution, outcome } => {
            if !is_mutation(mutation)? {
                return Ok(false);
            }
            let branch = refined_branch_exists(model, mutation, input, execution, outcome)?;
            let wrong = !admissible_outcomes(model, input)?.contains(outcome);
            let (sound, _) = sound_audits(model)?;
            let all_silent = refine_executions(model, mutation, input)?.iter().all(|r| {
                sound.iter().all(|a| reject(a, &r.execution).is_zero())
            });
            Ok(branch && wrong && all_silent)
        }
        Witness::AccMismatch { input, mutation, outcome, direction } => {
            let audit = audit.ok_or(EngineError::NoSoundAudit)?;
            if !is_mutation(mutation)? {
                return Ok(false);
            }
            let ideal = model.ideal_variant().id.clone();
            let ideal_acc = acc_results(model, &ideal, audit, input)?;
            let mutation_acc = acc_results(model, mutation, audit, input)?;
            Ok(match direction {
                MismatchDirection::Added => {
                    mutation_acc.contains(outcome) && !ideal_acc.contains(outcome)
                }
                MismatchDirection::Removed => {
                    ideal_acc.contains(outcome) && !mutation_acc.contains(outcome)
                }
            })
        }
        Witness::DetectionBelowThreshold { input, mutation, execution, outcome, reject_prob } => {
            let audit = audit.ok_or(EngineError::NoSoundAudit)?;
            let p0 = p0.ok_or_else(|| EngineError::InvalidThreshold(Rational::zero()))?;
            if !is_mutation(mutation)? {
                return Ok(false);
            }
            let branch = refined_branch_exists(model, mutation, input, execution, outcome)?;
            let wrong = !admissible_outcomes(model, input)?.contains(outcome);
            let p = lookup_reject(audit, execution)?;
            Ok(branch && wrong && &p == reject_prob && &p < p0)
        }
        Witness::UnverifiedOutcome { input, variant, execution, outcome } => {
            if model.variant(variant).is_none() {
                return Err(EngineError::UnknownVariant(variant.clone()));
            }
            let branch = refined_branch_exists(model, variant, input, execution, outcome)?;
            let wrong = !admissible_outcomes(model, input)?.contains(outcome);
            let verifiers: Vec<&AuditFunction> = model
                .audits
                .iter()
                .filter(|a| a.id.as_str().starts_with("verify_"))
                .collect();
            if verifiers.is_empty() {
                return Err(EngineError::NoVerificationAudits);
            }
            let passes_all = verifiers
                .iter()
                .all(|a| lookup_reject(&a.id, execution).map(|p| p.is_zero()).unwrap_or(false));
            Ok(branch && wrong && passes_all)
        }
        Witness::AllAuditsFail { failures } => {
            let (sound, _) = sound_audits(model)?;
            let sound_ids: BTreeSet<&AuditId> = sound.iter().map(|a| &a.id).collect();
            let failure_ids: BTreeSet<&AuditId> = failures.keys().collect();
            if sound_ids != failure_ids {
                return Ok(false);
            }
            for (audit_id, inner) in failures {
                if !replay_one(model, Some(audit_id), p0, inner)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Re-evaluates a verdict's witness against the model.
///
/// Returns true when the witness still demonstrates what the verdict
/// claims: for failures, that the violated clause violates; for holding
/// existential verdicts, that the named audit works on every input. A
/// verdict without a witness replays as its own `holds` flag.
pub fn replay_witness(model: &SystemModel, verdict: &CheckVerdict) -> Result<bool, EngineError> {
    let Some(witness) = &verdict.witness else {
        return Ok(verdict.holds);
    };
    if let Witness::Audit { audit } = witness {
        let inputs = match &verdict.input {
            Some(input) => vec![input],
            None => sorted_input_ids(model),
        };
        for input in inputs {
            let v = match verdict.definition {
                Definition::Si1 | Definition::Si1System => check_si1(model, input, audit)?,
                Definition::Si3 | Definition::Si3System => check_si3(model, input, audit)?,
                Definition::Sr | Definition::SrSystem => check_sr(model, input, audit)?,
                Definition::Si4 | Definition::Si4System => {
                    let p0 = verdict
                        .p0
                        .as_ref()
                        .ok_or_else(|| EngineError::InvalidThreshold(Rational::zero()))?;
                    check_si4(model, input, audit, p0)?
                }
                _ => return Ok(false),
            };
            if !v.holds {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    replay_one(model, verdict.audit.as_ref(), verdict.p0.as_ref(), witness)
}
