//! Exact game-theoretic evaluation of attack and defense strategies.
//!
//! The attacker picks a variant to run (the ideal or any software mutation),
//! the defender picks an audit from the model or the synthetic coin toss
//! that rejects with a fixed probability regardless of evidence. For each
//! pairing the engine computes the exact joint probability of a judgment
//! together with an announced-outcome event, and from those the worst-case
//! rates: ε, the largest chance of rejecting an admissible outcome, and δ,
//! the largest chance of accepting an inadmissible one.
//!
//! Suprema over attacks are taken over pure variant choices only. The
//! objective is linear in any randomization across variants, so a mixture
//! can never beat the best pure attack; tests spot-check this.
//!
//! Attacks whose announced outcome never lands in the conditioning event
//! are skipped: the conditional probability does not exist there. When
//! every attack is skipped, δ is reported as 0 with an explicit vacuous
//! flag so that vacuity is never mistaken for safety.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::checks::sound_audits;
use crate::error::EngineError;
use crate::model::{
    admissible_outcomes, AuditFunction, AuditId, InputId, OutcomeId, SystemModel, VariantId,
    VariantKind,
};
use crate::rational::Rational;

/// A pure attack strategy: which variant the attacker runs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AttackStrategy {
    pub variant: VariantId,
}

impl fmt::Display for AttackStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.variant.as_str())
    }
}

/// A defense strategy: one of the model's audits, or the evidence-blind
/// coin toss rejecting with probability p.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DefenseStrategy {
    Audit { audit: AuditId },
    CoinToss { p: Rational },
}

impl fmt::Display for DefenseStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefenseStrategy::Audit { audit } => f.write_str(audit.as_str()),
            DefenseStrategy::CoinToss { p } => write!(f, "coin:{p}"),
        }
    }
}

/// An audit judgment: T accepts the run, F rejects it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Judgment {
    #[serde(rename = "T")]
    Accept,
    #[serde(rename = "F")]
    Reject,
}

/// A joint probability together with the probability of its conditioning
/// event, both exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptanceProbability {
    /// Pr(judgment ∧ announced outcome in the condition set).
    pub joint: Rational,
    /// Pr(announced outcome in the condition set).
    pub conditioner: Rational,
}

impl AcceptanceProbability {
    /// The conditional probability, defined only for a positive conditioner.
    pub fn conditional(&self) -> Result<Rational, EngineError> {
        if self.conditioner.is_zero() {
            return Err(EngineError::ZeroConditioner);
        }
        Ok(&self.joint / &self.conditioner)
    }
}

enum ResolvedDefense<'a> {
    Audit(&'a AuditFunction),
    Coin(&'a Rational),
}

impl ResolvedDefense<'_> {
    fn reject_prob(&self, execution: &crate::model::ExecutionId) -> Rational {
        match self {
            ResolvedDefense::Audit(a) => a
                .reject_prob
                .get(execution)
                .expect("audit tables are total on valid models")
                .clone(),
            ResolvedDefense::Coin(p) => (*p).clone(),
        }
    }
}

fn resolve_defense<'a>(
    model: &'a SystemModel,
    defense: &'a DefenseStrategy,
) -> Result<ResolvedDefense<'a>, EngineError> {
    match defense {
        DefenseStrategy::Audit { audit } => {
            let audit_fn = model
                .audit(audit)
                .ok_or_else(|| EngineError::UnknownAudit(audit.clone()))?;
            if let Some((input, execution, _)) = crate::checks::soundness_failure_of(model, audit_fn)
            {
                return Err(EngineError::UnsoundAudit { audit: audit.clone(), input, execution });
            }
            Ok(ResolvedDefense::Audit(audit_fn))
        }
        DefenseStrategy::CoinToss { p } => {
            if !p.is_probability() {
                return Err(EngineError::InvalidThreshold(p.clone()));
            }
            Ok(ResolvedDefense::Coin(p))
        }
    }
}

fn resolve_attack<'a>(
    model: &'a SystemModel,
    attack: &AttackStrategy,
) -> Result<&'a crate::model::SoftwareVariant, EngineError> {
    let variant = model
        .variant(&attack.variant)
        .ok_or_else(|| EngineError::UnknownVariant(attack.variant.clone()))?;
    if variant.kind == VariantKind::ContextMutation {
        return Err(EngineError::InvalidAttack(attack.variant.clone()));
    }
    Ok(variant)
}

/// The feasible pure attacks: the ideal variant plus every software
/// mutation, in id order.
pub fn attack_strategies(model: &SystemModel) -> Vec<AttackStrategy> {
    let mut ids: Vec<VariantId> = model
        .variants
        .iter()
        .filter(|v| v.kind != VariantKind::ContextMutation)
        .map(|v| v.id.clone())
        .collect();
    ids.sort();
    ids.into_iter().map(|variant| AttackStrategy { variant }).collect()
}

/// Exact Pr(judgment ∧ outcome ∈ condition) and Pr(outcome ∈ condition)
/// when the attacker runs `attack` against `defense` on `input`: the sum
/// over the attack's executions of execution probability, outcome weight
/// inside the condition, and the defense's judgment probability.
///
/// An empty or unreachable condition yields a zero conditioner; the caller
/// decides what that means.
pub fn audit_acceptance(
    model: &SystemModel,
    attack: &AttackStrategy,
    defense: &DefenseStrategy,
    input: &InputId,
    condition: &BTreeSet<OutcomeId>,
    judgment: Judgment,
) -> Result<AcceptanceProbability, EngineError> {
    let variant = resolve_attack(model, attack)?;
    let defense = resolve_defense(model, defense)?;
    let mut joint = Rational::zero();
    let mut conditioner = Rational::zero();
    for e in model.executions(&variant.id, input)? {
        let in_condition: Rational = e
            .outcome_dist
            .iter()
            .filter(|(o, _)| condition.contains(*o))
            .map(|(_, p)| p)
            .sum();
        if in_condition.is_zero() {
            continue;
        }
        let mass = &e.probability * &in_condition;
        let reject = defense.reject_prob(&e.id);
        let judged = match judgment {
            Judgment::Reject => reject,
            Judgment::Accept => Rational::one() - reject,
        };
        joint = joint + &mass * &judged;
        conditioner = conditioner + mass;
    }
    Ok(AcceptanceProbability { joint, conditioner })
}

/// Worst-case probability of rejecting an admissible outcome, with the
/// attack attaining it (least variant id on ties). Attacks that never
/// announce an admissible outcome are skipped; the ideal attack always
/// qualifies, so the supremum exists.
pub fn epsilon(
    model: &SystemModel,
    defense: &DefenseStrategy,
    input: &InputId,
) -> Result<(Rational, AttackStrategy), EngineError> {
    let admissible = admissible_outcomes(model, input)?;
    let mut best: Option<(Rational, AttackStrategy)> = None;
    for attack in attack_strategies(model) {
        let acc = audit_acceptance(model, &attack, defense, input, &admissible, Judgment::Reject)?;
        if acc.conditioner.is_zero() {
            continue;
        }
        let value = acc.conditional()?;
        if best.as_ref().is_none_or(|(b, _)| &value > b) {
            best = Some((value, attack));
        }
    }
    Ok(best.expect("the ideal attack announces an admissible outcome surely"))
}

/// δ evaluation: the value, the attaining attack when one exists, and
/// whether the supremum was vacuous because no attack can announce an
/// inadmissible outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaResult {
    pub value: Rational,
    pub witness: Option<AttackStrategy>,
    pub vacuous: bool,
}

/// Worst-case probability of accepting an inadmissible outcome, over
/// attacks under which some inadmissible outcome is announced with positive
/// probability.
pub fn delta(
    model: &SystemModel,
    defense: &DefenseStrategy,
    input: &InputId,
) -> Result<DeltaResult, EngineError> {
    let admissible = admissible_outcomes(model, input)?;
    let inadmissible: BTreeSet<OutcomeId> = model
        .outcomes
        .iter()
        .filter(|o| !admissible.contains(*o))
        .cloned()
        .collect();
    let mut best: Option<(Rational, AttackStrategy)> = None;
    for attack in attack_strategies(model) {
        let acc = audit_acceptance(model, &attack, defense, input, &inadmissible, Judgment::Accept)?;
        if acc.conditioner.is_zero() {
            continue;
        }
        let value = acc.conditional()?;
        if best.as_ref().is_none_or(|(b, _)| &value > b) {
            best = Some((value, attack));
        }
    }
    Ok(match best {
        Some((value, witness)) => DeltaResult { value, witness: Some(witness), vacuous: false },
        None => DeltaResult { value: Rational::zero(), witness: None, vacuous: true },
    })
}

/// Which SI labels a (defense, input) pairing earns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// ε = δ = 0.
    pub strict: bool,
    /// ε + δ < 1: strictly better than every coin toss.
    pub loose: bool,
    /// ε ≤ ε0 and δ ≤ δ0 for the requested bounds, when bounds were given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meets: Option<MeetsBound>,
}

/// Whether the requested (ε0, δ0) bound is met.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeetsBound {
    pub eps0: Rational,
    pub delta0: Rational,
    pub satisfied: bool,
}

/// Exact ε and δ for one defense on one input, with attaining attacks and
/// classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameResult {
    pub defense: DefenseStrategy,
    pub input: InputId,
    pub epsilon: Rational,
    pub delta: Rational,
    pub epsilon_witness: AttackStrategy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_witness: Option<AttackStrategy>,
    /// True when no attack can announce an inadmissible outcome, making the
    /// reported δ = 0 vacuous rather than a detection guarantee.
    pub delta_vacuous: bool,
    pub classification: Classification,
}

fn validate_bounds(bounds: &Option<(Rational, Rational)>) -> Result<(), EngineError> {
    if let Some((eps0, delta0)) = bounds {
        for b in [eps0, delta0] {
            if !b.is_probability() {
                return Err(EngineError::InvalidThreshold(b.clone()));
            }
        }
    }
    Ok(())
}

/// Computes ε and δ for one defense on one input and classifies the result.
pub fn classify_si(
    model: &SystemModel,
    defense: &DefenseStrategy,
    input: &InputId,
    bounds: Option<(Rational, Rational)>,
) -> Result<GameResult, EngineError> {
    validate_bounds(&bounds)?;
    if model.input(input).is_none() {
        return Err(EngineError::UnknownInput(input.clone()));
    }
    let (eps, epsilon_witness) = epsilon(model, defense, input)?;
    let del = delta(model, defense, input)?;
    let classification = Classification {
        strict: eps.is_zero() && del.value.is_zero(),
        loose: &eps + &del.value < Rational::one(),
        meets: bounds.map(|(eps0, delta0)| MeetsBound {
            satisfied: eps <= eps0 && del.value <= delta0,
            eps0,
            delta0,
        }),
    };
    Ok(GameResult {
        defense: defense.clone(),
        input: input.clone(),
        epsilon: eps,
        delta: del.value,
        epsilon_witness,
        delta_witness: del.witness,
        delta_vacuous: del.vacuous,
        classification,
    })
}

/// System-level verdict: does one defense meet the bound on every input?
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemVerdict {
    pub eps0: Rational,
    pub delta0: Rational,
    pub holds: bool,
    /// Least defense meeting the bound everywhere, when the verdict holds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<DefenseStrategy>,
}

/// The full game table for a model's sound audits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemEvaluation {
    /// One result per (defense, input), defense-major in id order.
    pub results: Vec<GameResult>,
    /// Per input, the defenses not dominated in (ε, δ).
    pub pareto: BTreeMap<InputId, Vec<DefenseStrategy>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system_verdict: Option<SystemVerdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Evaluates every sound audit on every input; unsound audits are excluded
/// with a warning. When bounds are given, also decides the system-level
/// (ε0, δ0)-SI verdict.
pub fn evaluate_system(
    model: &SystemModel,
    bounds: Option<(Rational, Rational)>,
) -> Result<SystemEvaluation, EngineError> {
    validate_bounds(&bounds)?;
    let (sound, warnings) = sound_audits(model)?;
    let defenses: Vec<DefenseStrategy> = sound
        .iter()
        .map(|a| DefenseStrategy::Audit { audit: a.id.clone() })
        .collect();
    let mut input_ids: Vec<InputId> = model.inputs.iter().map(|i| i.id.clone()).collect();
    input_ids.sort();

    let mut results = Vec::new();
    for defense in &defenses {
        for input in &input_ids {
            results.push(classify_si(model, defense, input, bounds.clone())?);
        }
    }

    let mut pareto: BTreeMap<InputId, Vec<DefenseStrategy>> = BTreeMap::new();
    for input in &input_ids {
        let here: Vec<&GameResult> = results.iter().filter(|r| &r.input == input).collect();
        let non_dominated = here
            .iter()
            .filter(|r| {
                !here.iter().any(|other| {
                    other.epsilon <= r.epsilon
                        && other.delta <= r.delta
                        && (other.epsilon < r.epsilon || other.delta < r.delta)
                })
            })
            .map(|r| r.defense.clone())
            .collect();
        pareto.insert(input.clone(), non_dominated);
    }

    let system_verdict = bounds.map(|(eps0, delta0)| {
        let witness = defenses.iter().find(|d| {
            results
                .iter()
                .filter(|r| &&r.defense == d)
                .all(|r| r.classification.meets.as_ref().is_some_and(|m| m.satisfied))
        });
        SystemVerdict {
            eps0,
            delta0,
            holds: witness.is_some(),
            witness: witness.cloned(),
        }
    });

    Ok(SystemEvaluation { results, pareto, system_verdict, warnings })
}

/// Re-evaluates a game result's witnesses: the reported ε must equal the
/// conditional rejection probability at the ε witness, and likewise for δ,
/// whose vacuous form is checked by confirming no attack reaches an
/// inadmissible outcome.
pub fn replay_game_result(model: &SystemModel, result: &GameResult) -> Result<bool, EngineError> {
    let admissible = admissible_outcomes(model, &result.input)?;
    let inadmissible: BTreeSet<OutcomeId> = model
        .outcomes
        .iter()
        .filter(|o| !admissible.contains(*o))
        .cloned()
        .collect();
    let eps_at_witness = audit_acceptance(
        model,
        &result.epsilon_witness,
        &result.defense,
        &result.input,
        &admissible,
        Judgment::Reject,
    )?
    .conditional()?;
    if eps_at_witness != result.epsilon {
        return Ok(false);
    }
    match (&result.delta_witness, result.delta_vacuous) {
        (Some(witness), false) => {
            let del_at_witness = audit_acceptance(
                model,
                witness,
                &result.defense,
                &result.input,
                &inadmissible,
                Judgment::Accept,
            )?
            .conditional()?;
            Ok(del_at_witness == result.delta)
        }
        (None, true) => {
            if !result.delta.is_zero() {
                return Ok(false);
            }
            for attack in attack_strategies(model) {
                let acc = audit_acceptance(
                    model,
                    &attack,
                    &result.defense,
                    &result.input,
                    &inadmissible,
                    Judgment::Accept,
                )?;
                if !acc.conditioner.is_zero() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::VariantKind;
    use crate::testutil::*;

    fn coin(n: i64, d: i64) -> DefenseStrategy {
        DefenseStrategy::CoinToss { p: r(n, d) }
    }

    fn audit_defense(id: &str) -> DefenseStrategy {
        DefenseStrategy::Audit { audit: id.into() }
    }

    /// Ideal announces a; the mutation announces b; one blind audit and one
    /// audit detecting the mutation with the given probability.
    fn flip_model(detect: Rational) -> crate::model::SystemModel {
        ModelBuilder::new(&["a", "b"])
            .variant("ideal", VariantKind::Ideal)
            .variant("flip", VariantKind::SoftwareMutation)
            .input("v1")
            .execution("ideal", "v1", exec("e_i", r(1, 1), &[("t", "ok")], &[("a", r(1, 1))]))
            .execution("flip", "v1", exec("e_f", r(1, 1), &[("t", "flip")], &[("b", r(1, 1))]))
            .audit(audit("blind", &[("e_i", r(0, 1)), ("e_f", r(0, 1))]))
            .audit(audit("detect", &[("e_i", r(0, 1)), ("e_f", detect)]))
            .build()
    }

    #[test]
    fn acceptance_is_one_for_sound_audit_on_ideal() {
        let model = flip_model(r(1, 1));
        let all: std::collections::BTreeSet<_> = model.outcomes.iter().cloned().collect();
        let acc = audit_acceptance(
            &model,
            &AttackStrategy { variant: "ideal".into() },
            &audit_defense("detect"),
            &"v1".into(),
            &all,
            Judgment::Accept,
        )
        .unwrap();
        assert_eq!(acc.conditional().unwrap(), r(1, 1));
    }

    #[test]
    fn acceptance_matches_hand_computed_joint_sum() {
        let model = ModelBuilder::new(&["a", "b"])
            .variant("ideal", VariantKind::Ideal)
            .variant("twist", VariantKind::SoftwareMutation)
            .input("v1")
            .execution("ideal", "v1", exec("e_i", r(1, 1), &[("t", "ok")], &[("a", r(1, 1))]))
            .execution(
                "twist",
                "v1",
                exec("e1", r(1, 3), &[("t", "x")], &[("a", r(1, 2)), ("b", r(1, 2))]),
            )
            .execution("twist", "v1", exec("e2", r(2, 3), &[("t", "y")], &[("b", r(1, 1))]))
            .audit(audit("rand", &[("e_i", r(0, 1)), ("e1", r(1, 4)), ("e2", r(1, 10))]))
            .build();
        let condition: std::collections::BTreeSet<_> = [crate::model::OutcomeId::from("b")].into();
        let acc = audit_acceptance(
            &model,
            &AttackStrategy { variant: "twist".into() },
            &audit_defense("rand"),
            &"v1".into(),
            &condition,
            Judgment::Reject,
        )
        .unwrap();
        assert_eq!(acc.joint, r(13, 120));
        assert_eq!(acc.conditioner, r(5, 6));
        assert_eq!(acc.conditional().unwrap(), r(13, 100));
    }

    #[test]
    fn coin_toss_epsilon_and_delta() {
        let model = flip_model(r(1, 1));
        for p in [r(0, 1), r(1, 4), r(1, 2), r(1, 1)] {
            let g = DefenseStrategy::CoinToss { p: p.clone() };
            let (eps, _) = epsilon(&model, &g, &"v1".into()).unwrap();
            let del = delta(&model, &g, &"v1".into()).unwrap();
            assert_eq!(eps, p);
            assert_eq!(del.value, Rational::one() - p);
            assert!(!del.vacuous);
            assert_eq!(&eps + &del.value, Rational::one());
        }
    }

    #[test]
    fn coin_toss_is_never_loose() {
        let model = flip_model(r(1, 1));
        for p in [r(0, 1), r(1, 4), r(1, 2), r(1, 1)] {
            let result =
                classify_si(&model, &DefenseStrategy::CoinToss { p }, &"v1".into(), None).unwrap();
            assert!(!result.classification.loose);
        }
    }

    #[test]
    fn blind_audit_always_accepts_the_wrong_outcome() {
        let model = flip_model(r(1, 1));
        let (eps, _) = epsilon(&model, &audit_defense("blind"), &"v1".into()).unwrap();
        let del = delta(&model, &audit_defense("blind"), &"v1".into()).unwrap();
        assert_eq!(eps, r(0, 1));
        assert_eq!(del.value, r(1, 1));
        assert_eq!(del.witness, Some(AttackStrategy { variant: "flip".into() }));
    }

    #[test]
    fn risk_limited_audit_meets_zero_alpha_bound_and_recount_is_strict() {
        let model = flip_model(r(19, 20));
        let rla = classify_si(
            &model,
            &audit_defense("detect"),
            &"v1".into(),
            Some((r(0, 1), r(1, 20))),
        )
        .unwrap();
        assert_eq!(rla.epsilon, r(0, 1));
        assert_eq!(rla.delta, r(1, 20));
        assert!(rla.classification.meets.as_ref().unwrap().satisfied);
        assert!(rla.classification.loose);
        assert!(!rla.classification.strict);
        assert!(replay_game_result(&model, &rla).unwrap());

        let full = flip_model(r(1, 1));
        let recount = classify_si(&full, &audit_defense("detect"), &"v1".into(), None).unwrap();
        assert!(recount.classification.strict);
        assert!(replay_game_result(&full, &recount).unwrap());
    }

    #[test]
    fn delta_is_vacuous_when_no_attack_reaches_an_inadmissible_outcome() {
        let model = ModelBuilder::new(&["a", "b"])
            .variant("ideal", VariantKind::Ideal)
            .input("tied")
            .execution(
                "ideal",
                "tied",
                exec("e_tie", r(1, 1), &[], &[("a", r(1, 2)), ("b", r(1, 2))]),
            )
            .audit(audit("blind", &[("e_tie", r(0, 1))]))
            .build();
        let result = classify_si(&model, &coin(1, 4), &"tied".into(), None).unwrap();
        assert_eq!(result.epsilon, r(1, 4));
        assert_eq!(result.delta, r(0, 1));
        assert!(result.delta_vacuous);
        assert!(result.delta_witness.is_none());
        assert!(replay_game_result(&model, &result).unwrap());
    }

    #[test]
    fn unsound_audit_defense_is_rejected() {
        let model = ModelBuilder::new(&["a"])
            .variant("ideal", VariantKind::Ideal)
            .input("v1")
            .execution("ideal", "v1", exec("e1", r(1, 1), &[], &[("a", r(1, 1))]))
            .audit(audit("jumpy", &[("e1", r(1, 10))]))
            .build();
        let err = epsilon(&model, &audit_defense("jumpy"), &"v1".into()).unwrap_err();
        assert!(matches!(err, EngineError::UnsoundAudit { .. }));
    }

    #[test]
    fn context_mutations_are_not_feasible_attacks() {
        let model = ModelBuilder::new(&["a", "b"])
            .variant("ideal", VariantKind::Ideal)
            .variant("liar", VariantKind::ContextMutation)
            .input("v1")
            .execution("ideal", "v1", exec("e_i", r(1, 1), &[], &[("a", r(1, 1))]))
            .execution("liar", "v1", exec("e_l", r(1, 1), &[], &[("b", r(1, 1))]))
            .build();
        assert!(!attack_strategies(&model)
            .iter()
            .any(|f| f.variant == VariantId::from("liar")));
        let all: std::collections::BTreeSet<_> = model.outcomes.iter().cloned().collect();
        let err = audit_acceptance(
            &model,
            &AttackStrategy { variant: "liar".into() },
            &coin(1, 2),
            &"v1".into(),
            &all,
            Judgment::Accept,
        )
        .unwrap_err();
        assert_eq!(err, EngineError::InvalidAttack("liar".into()));
    }

    #[test]
    fn evaluate_system_reports_pareto_and_verdict() {
        let model = flip_model(r(19, 20));
        let eval = evaluate_system(&model, Some((r(0, 1), r(1, 20)))).unwrap();
        assert_eq!(eval.results.len(), 2);
        let verdict = eval.system_verdict.unwrap();
        assert!(verdict.holds);
        assert_eq!(verdict.witness, Some(audit_defense("detect")));
        let frontier = &eval.pareto[&crate::model::InputId::from("v1")];
        assert_eq!(frontier, &vec![audit_defense("detect")]);
    }

    #[test]
    fn per_input_specialists_do_not_make_a_system_verdict() {
        let model = split_coverage_model();
        let eval = evaluate_system(&model, Some((r(0, 1), r(0, 1)))).unwrap();
        let verdict = eval.system_verdict.unwrap();
        assert!(!verdict.holds);
        for input in ["v1", "v2"] {
            let meets_here = eval
                .results
                .iter()
                .filter(|r| r.input == input.into())
                .any(|r| r.classification.meets.as_ref().unwrap().satisfied);
            assert!(meets_here, "input {input} has a specialist audit");
        }
    }

    #[test]
    fn results_serialize_round_trip() {
        let model = flip_model(r(19, 20));
        let result =
            classify_si(&model, &audit_defense("detect"), &"v1".into(), Some((r(0, 1), r(1, 20))))
                .unwrap();
        let json = serde_json::to_string(&result).unwrap();
        let back: GameResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back, result);
    }
}
