//! Generators for the worked example systems, a seeded random-model
//! generator, and the end-to-end-verifiability separation check.
//!
//! Four fixed exemplars cover the canonical cases: a paperless DRE that no
//! audit can catch, the weak-audit scan system P_weak with hypergeometric
//! detection, the trusted-individual system that is software independent
//! but not end-to-end verifiable, and a hand-marked paper system with a
//! risk-limiting audit. The random generator produces small well-formed
//! models for property sweeps, byte-reproducible per seed.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::checks::{CheckVerdict, Definition, Witness};
use crate::error::EngineError;
use crate::model::{
    validate_model, AuditFunction, ElectionInput, Execution, ExecutionId, InputId, OutcomeId,
    SoftwareVariant, SystemModel, VariantId, VariantKind,
};
use crate::model::{admissible_outcomes, refine_executions};
use crate::rational::{binomial, Rational};

/// Parameters selecting and configuring one exemplar system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExemplarParams {
    Dre,
    Pweak { ballots: u64, altered: u64, sample: u64 },
    TrustedIndividual,
    PaperRla { alpha: Rational },
    Random { seed: u64 },
}

impl ExemplarParams {
    pub fn name(&self) -> &'static str {
        match self {
            ExemplarParams::Dre => "dre",
            ExemplarParams::Pweak { .. } => "pweak",
            ExemplarParams::TrustedIndividual => "trusted_individual",
            ExemplarParams::PaperRla { .. } => "paper_rla",
            ExemplarParams::Random { .. } => "random",
        }
    }

    /// Checks the per-exemplar parameter ranges.
    pub fn validate(&self) -> Result<(), EngineError> {
        match self {
            ExemplarParams::Dre | ExemplarParams::TrustedIndividual | ExemplarParams::Random { .. } => Ok(()),
            ExemplarParams::Pweak { ballots, altered, sample } => {
                if *ballots < 1 {
                    return Err(EngineError::InvalidExemplarParams(
                        "pweak needs at least one ballot".into(),
                    ));
                }
                if altered > ballots {
                    return Err(EngineError::InvalidExemplarParams(format!(
                        "cannot alter {altered} of {ballots} ballots"
                    )));
                }
                if *sample < 1 || sample > ballots {
                    return Err(EngineError::InvalidExemplarParams(format!(
                        "sample size {sample} must be between 1 and {ballots}"
                    )));
                }
                Ok(())
            }
            ExemplarParams::PaperRla { alpha } => {
                if !alpha.is_positive() || alpha >= &Rational::one() {
                    return Err(EngineError::InvalidExemplarParams(format!(
                        "risk limit {alpha} must satisfy 0 < alpha < 1"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Builds the selected exemplar as a validated model.
pub fn build_exemplar(params: &ExemplarParams) -> Result<SystemModel, EngineError> {
    params.validate()?;
    let mut model = match params {
        ExemplarParams::Dre => dre(),
        ExemplarParams::Pweak { ballots, altered, sample } => pweak(*ballots, *altered, *sample),
        ExemplarParams::TrustedIndividual => trusted_individual(),
        ExemplarParams::PaperRla { alpha } => paper_rla(alpha),
        ExemplarParams::Random { seed } => random_model(*seed),
    };
    model.normalize();
    let report = validate_model(&model);
    assert!(report.violations.is_empty(), "generated exemplar must validate:\n{report}");
    Ok(model)
}

/// Probability that sampling `k` of `n` ballots without replacement hits at
/// least one of the `m` altered ones.
fn hypergeometric_reject(n: u64, m: u64, k: u64) -> Rational {
    Rational::one() - Rational::from_big(binomial(n - m, k), binomial(n, k))
}

fn variant(id: &str, kind: VariantKind, description: &str) -> SoftwareVariant {
    SoftwareVariant { id: id.into(), kind, description: Some(description.to_string()) }
}

fn input(id: &str, description: &str) -> ElectionInput {
    ElectionInput { id: id.into(), description: Some(description.to_string()) }
}

fn execution(
    id: &str,
    probability: Rational,
    evidence: &[(&str, &str)],
    dist: &[(&str, Rational)],
) -> Execution {
    Execution {
        id: id.into(),
        probability,
        evidence: evidence.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        outcome_dist: dist.iter().map(|(o, p)| ((*o).into(), p.clone())).collect(),
    }
}

fn audit_table(id: &str, rows: &[(&str, Rational)]) -> AuditFunction {
    AuditFunction {
        id: id.into(),
        reject_prob: rows.iter().map(|(e, p)| ((*e).into(), p.clone())).collect(),
    }
}

fn cell(
    table: &mut BTreeMap<VariantId, BTreeMap<InputId, Vec<Execution>>>,
    variant: &str,
    input: &str,
    execs: Vec<Execution>,
) {
    table.entry(variant.into()).or_default().insert(input.into(), execs);
}

fn rq(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Paperless touchscreen machine: the record is the software's own output,
/// so no audit has evidence to distinguish an honest tally from a flipped
/// one, and the only audit never rejects.
fn dre() -> SystemModel {
    let mut exec_table = BTreeMap::new();
    cell(
        &mut exec_table,
        "ideal",
        "cast_votes",
        vec![execution("honest_tally", rq(1, 1), &[], &[("alice_wins", rq(1, 1))])],
    );
    cell(
        &mut exec_table,
        "flip_winner",
        "cast_votes",
        vec![execution("flipped_tally", rq(1, 1), &[], &[("bob_wins", rq(1, 1))])],
    );
    SystemModel {
        outcomes: vec!["alice_wins".into(), "bob_wins".into()],
        variants: vec![
            variant("ideal", VariantKind::Ideal, "certified tallying software"),
            variant(
                "flip_winner",
                VariantKind::SoftwareMutation,
                "reports the loser as the winner; no paper trail records the difference",
            ),
        ],
        inputs: vec![input("cast_votes", "a vote profile with a clear majority for alice")],
        exec_table,
        audits: vec![audit_table(
            "blind_audit",
            &[("honest_tally", rq(0, 1)), ("flipped_tally", rq(0, 1))],
        )],
    }
}

/// Scan-based system with a weak audit: counts are checked, published scans
/// are retabulated, and `sample` ballots are compared against their linked
/// scans. Altering `altered` of `ballots` scans escapes with probability
/// C(ballots-altered, sample) / C(ballots, sample).
fn pweak(ballots: u64, altered: u64, sample: u64) -> SystemModel {
    let honest_evidence: Vec<(&str, String)> = vec![
        ("counts", "match".into()),
        ("tabulation", "matches_reported".into()),
        ("linked_mismatches", "0".into()),
    ];
    let altered_evidence: Vec<(&str, String)> = vec![
        ("counts", "match".into()),
        ("tabulation", "matches_reported".into()),
        ("linked_mismatches", altered.to_string()),
    ];
    let as_pairs = |ev: &[(&str, String)]| -> Vec<(String, String)> {
        ev.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    };

    let altered_outcome = if altered == 0 { "alice_wins" } else { "bob_wins" };
    let detect = hypergeometric_reject(ballots, altered, sample);

    let mut exec_table = BTreeMap::new();
    let make = |id: &str, ev: Vec<(String, String)>, outcome: &str| Execution {
        id: id.into(),
        probability: rq(1, 1),
        evidence: ev.into_iter().collect(),
        outcome_dist: [(OutcomeId::from(outcome), rq(1, 1))].into_iter().collect(),
    };
    cell(
        &mut exec_table,
        "ideal",
        "cast_ballots",
        vec![make("honest_run", as_pairs(&honest_evidence), "alice_wins")],
    );
    cell(
        &mut exec_table,
        "alter_scans",
        "cast_ballots",
        vec![make("altered_run", as_pairs(&altered_evidence), altered_outcome)],
    );

    let mut variants = vec![
        variant("ideal", VariantKind::Ideal, "faithful scanning, tabulation, and reporting"),
        variant(
            "alter_scans",
            VariantKind::SoftwareMutation,
            "alters some published scans and tabulates the altered set consistently",
        ),
    ];
    let mut rows = vec![("honest_run", rq(0, 1)), ("altered_run", detect)];

    if altered > 0 {
        variants.push(variant(
            "drop_scan",
            VariantKind::SoftwareMutation,
            "omits a scan, so the scan count no longer matches the ballot count",
        ));
        variants.push(variant(
            "misreport_total",
            VariantKind::SoftwareMutation,
            "announces a result that differs from tabulating the published scans",
        ));
        cell(
            &mut exec_table,
            "drop_scan",
            "cast_ballots",
            vec![make(
                "short_count_run",
                vec![
                    ("counts".into(), "mismatch".into()),
                    ("tabulation".into(), "matches_reported".into()),
                    ("linked_mismatches".into(), "0".into()),
                ],
                "bob_wins",
            )],
        );
        cell(
            &mut exec_table,
            "misreport_total",
            "cast_ballots",
            vec![make(
                "misreported_run",
                vec![
                    ("counts".into(), "match".into()),
                    ("tabulation".into(), "differs_from_reported".into()),
                    ("linked_mismatches".into(), "0".into()),
                ],
                "bob_wins",
            )],
        );
        rows.push(("short_count_run", rq(1, 1)));
        rows.push(("misreported_run", rq(1, 1)));
    }

    SystemModel {
        outcomes: vec!["alice_wins".into(), "bob_wins".into()],
        variants,
        inputs: vec![input(
            "cast_ballots",
            "hand-marked paper ballots, scanned and linked, with a majority for alice",
        )],
        exec_table,
        audits: vec![audit_table("paper_audit", &rows)],
    }
}

/// Ballot box, scanner, and a trusted individual who hand-counts and
/// compares against the software's tally. A software change either leaves
/// the result intact or raises an alarm, so every SI check passes; a
/// dishonest individual can misreport silently, so the e2ev check fails.
fn trusted_individual() -> SystemModel {
    let quiet: &[(&str, &str)] = &[("alarm", "none")];
    let mut exec_table = BTreeMap::new();
    cell(
        &mut exec_table,
        "ideal",
        "cast_ballots",
        vec![execution("honest_tally", rq(1, 1), quiet, &[("alice_wins", rq(1, 1))])],
    );
    cell(
        &mut exec_table,
        "scanner_misreads",
        "cast_ballots",
        vec![
            execution("misread_same_result", rq(1, 2), quiet, &[("alice_wins", rq(1, 1))]),
            execution(
                "misread_changes_result",
                rq(1, 2),
                &[("alarm", "raised")],
                &[("bob_wins", rq(1, 1))],
            ),
        ],
    );
    cell(
        &mut exec_table,
        "individual_misreports",
        "cast_ballots",
        vec![execution("silent_misreport", rq(1, 1), quiet, &[("bob_wins", rq(1, 1))])],
    );
    SystemModel {
        outcomes: vec!["alice_wins".into(), "bob_wins".into()],
        variants: vec![
            variant("ideal", VariantKind::Ideal, "honest software and an honest individual"),
            variant(
                "scanner_misreads",
                VariantKind::SoftwareMutation,
                "software tally differs from the hand count, so the individual raises the alarm",
            ),
            variant(
                "individual_misreports",
                VariantKind::ContextMutation,
                "the trusted individual reports a different result and raises no alarm",
            ),
        ],
        inputs: vec![input("cast_ballots", "paper ballots in the box with a majority for alice")],
        exec_table,
        audits: vec![audit_table(
            "verify_alarm",
            &[
                ("honest_tally", rq(0, 1)),
                ("misread_same_result", rq(0, 1)),
                ("misread_changes_result", rq(1, 1)),
                ("silent_misreport", rq(0, 1)),
            ],
        )],
    }
}

/// Hand-marked paper ballots kept secure, audited by a risk-limiting audit
/// with the given risk limit: a wrong announcement survives with
/// probability at most alpha. A full recount audit sits alongside it.
fn paper_rla(alpha: &Rational) -> SystemModel {
    let detect = Rational::one() - alpha.clone();
    let mut exec_table = BTreeMap::new();
    cell(
        &mut exec_table,
        "ideal",
        "cast_ballots",
        vec![execution(
            "honest_count",
            rq(1, 1),
            &[("paper_trail", "matches_announcement")],
            &[("alice_wins", rq(1, 1))],
        )],
    );
    cell(
        &mut exec_table,
        "flip_winner",
        "cast_ballots",
        vec![execution(
            "misreported_count",
            rq(1, 1),
            &[("paper_trail", "contradicts_announcement")],
            &[("bob_wins", rq(1, 1))],
        )],
    );
    SystemModel {
        outcomes: vec!["alice_wins".into(), "bob_wins".into()],
        variants: vec![
            variant("ideal", VariantKind::Ideal, "faithful count of the secure paper trail"),
            variant(
                "flip_winner",
                VariantKind::SoftwareMutation,
                "announces the loser; the secure paper trail contradicts it",
            ),
        ],
        inputs: vec![input("cast_ballots", "trustworthy hand-marked paper ballots, alice ahead")],
        exec_table,
        audits: vec![
            audit_table("rla", &[("honest_count", rq(0, 1)), ("misreported_count", detect)]),
            audit_table(
                "total_recount",
                &[("honest_count", rq(0, 1)), ("misreported_count", rq(1, 1))],
            ),
        ],
    }
}

const TOKENS: [&str; 4] = ["t1", "t2", "t3", "t4"];

/// Draws a small well-formed model. Same seed, same model, byte for byte.
///
/// Guarantees by construction: one ideal variant, distributions that sum to
/// one, audits keyed on the single evidence token so identical evidence
/// always gets identical reject probabilities, and a first audit named
/// `verify_outcome` that never rejects ideal evidence.
fn random_model(seed: u64) -> SystemModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_outcomes = rng.gen_range(2..=4usize);
    let outcomes: Vec<OutcomeId> = (1..=n_outcomes).map(|i| format!("o{i}").into()).collect();
    let n_inputs = rng.gen_range(1..=3usize);
    let inputs: Vec<ElectionInput> = (1..=n_inputs)
        .map(|i| ElectionInput { id: format!("v{i}").into(), description: None })
        .collect();

    let mut variants =
        vec![SoftwareVariant { id: "ideal".into(), kind: VariantKind::Ideal, description: None }];
    for i in 1..=rng.gen_range(0..=3usize) {
        let kind = if rng.gen_ratio(1, 4) {
            VariantKind::ContextMutation
        } else {
            VariantKind::SoftwareMutation
        };
        variants.push(SoftwareVariant { id: format!("mut{i}").into(), kind, description: None });
    }

    let mut exec_table: BTreeMap<VariantId, BTreeMap<InputId, Vec<Execution>>> = BTreeMap::new();
    let mut exec_tokens: Vec<(ExecutionId, &str)> = Vec::new();
    let mut ideal_tokens: BTreeSet<&str> = BTreeSet::new();
    let mut counter = 0u64;
    for v in &variants {
        let mut by_input = BTreeMap::new();
        for inp in &inputs {
            let n_exec = rng.gen_range(1..=5usize);
            let weights: Vec<i64> = (0..n_exec).map(|_| rng.gen_range(1..=4i64)).collect();
            let total: i64 = weights.iter().sum();
            let mut execs = Vec::new();
            for w in weights {
                counter += 1;
                let id = ExecutionId::from(format!("e{counter}"));
                let token = TOKENS[rng.gen_range(0..TOKENS.len())];
                if v.kind == VariantKind::Ideal {
                    ideal_tokens.insert(token);
                }
                exec_tokens.push((id.clone(), token));
                let support = rng.gen_range(1..=n_outcomes);
                let picked = rand::seq::index::sample(&mut rng, n_outcomes, support);
                let outcome_weights: Vec<(usize, i64)> =
                    picked.into_iter().map(|idx| (idx, rng.gen_range(1..=4i64))).collect();
                let outcome_total: i64 = outcome_weights.iter().map(|(_, w)| w).sum();
                execs.push(Execution {
                    id,
                    probability: rq(w, total),
                    evidence: [("trace".to_string(), token.to_string())].into_iter().collect(),
                    outcome_dist: outcome_weights
                        .into_iter()
                        .map(|(idx, w)| (outcomes[idx].clone(), rq(w, outcome_total)))
                        .collect(),
                });
            }
            by_input.insert(inp.id.clone(), execs);
        }
        exec_table.insert(v.id.clone(), by_input);
    }

    let reject_levels = [rq(0, 1), rq(1, 4), rq(1, 2), rq(1, 1)];
    let token_audit = |rng: &mut ChaCha8Rng, id: &str, sound: bool| -> AuditFunction {
        let mut by_token: BTreeMap<&str, Rational> = BTreeMap::new();
        for token in TOKENS {
            let p = if ideal_tokens.contains(token) {
                if !sound && Some(&token) == ideal_tokens.first() {
                    rq(1, 2)
                } else {
                    rq(0, 1)
                }
            } else {
                reject_levels[rng.gen_range(0..reject_levels.len())].clone()
            };
            by_token.insert(token, p);
        }
        AuditFunction {
            id: id.into(),
            reject_prob: exec_tokens
                .iter()
                .map(|(e, token)| (e.clone(), by_token[token].clone()))
                .collect(),
        }
    };

    let mut audits = vec![token_audit(&mut rng, "verify_outcome", true)];
    let extra_names = ["audit_a", "audit_b"];
    for name in extra_names.iter().take(rng.gen_range(0..=2usize)) {
        let sound = !rng.gen_ratio(1, 4);
        audits.push(token_audit(&mut rng, name, sound));
    }

    SystemModel { outcomes, variants, inputs, exec_table, audits }
}

/// Decides global verifiability: on every variant, software or context, a
/// branch that no designated verification audit can ever reject must
/// announce an admissible outcome. Verification audits are the ones whose
/// id starts with `verify_`.
pub fn check_e2ev(model: &SystemModel) -> Result<CheckVerdict, EngineError> {
    let verifiers: Vec<&AuditFunction> = model
        .audits
        .iter()
        .filter(|a| a.id.as_str().starts_with("verify_"))
        .collect();
    if verifiers.is_empty() {
        return Err(EngineError::NoVerificationAudits);
    }

    let mut input_ids: Vec<&InputId> = model.inputs.iter().map(|i| &i.id).collect();
    input_ids.sort();
    let mut per_input: BTreeMap<InputId, bool> = BTreeMap::new();
    let mut candidates: Vec<(InputId, VariantId, ExecutionId, OutcomeId)> = Vec::new();
    for input in input_ids {
        let admissible = admissible_outcomes(model, input)?;
        let mut ok = true;
        for v in &model.variants {
            for branch in refine_executions(model, &v.id, input)? {
                if admissible.contains(&branch.outcome) {
                    continue;
                }
                let unverified = verifiers.iter().all(|a| {
                    a.reject_prob
                        .get(&branch.execution)
                        .expect("audit tables are total on valid models")
                        .is_zero()
                });
                if unverified {
                    ok = false;
                    candidates.push((
                        input.clone(),
                        v.id.clone(),
                        branch.execution.clone(),
                        branch.outcome.clone(),
                    ));
                }
            }
        }
        per_input.insert(input.clone(), ok);
    }

    let mut verdict = CheckVerdict::new(Definition::E2ev, candidates.is_empty());
    verdict.per_input = Some(per_input);
    verdict.witness = candidates.into_iter().min().map(|(input, variant, execution, outcome)| {
        Witness::UnverifiedOutcome { input, variant, execution, outcome }
    });
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::{
        check_si1_strong, check_si1_system, check_si4, check_si4_system, check_sr_system,
        replay_witness,
    };
    use crate::format::serialize_model;
    use crate::game::{classify_si, evaluate_system, DefenseStrategy};
    use crate::model::VariantKind;
    use crate::testutil::{audit, exec, r, ModelBuilder};

    fn rational(text: &str) -> Rational {
        text.parse().unwrap()
    }

    #[test]
    fn dre_fails_si1_with_a_replayable_witness() {
        let model = build_exemplar(&ExemplarParams::Dre).unwrap();
        let verdict = check_si1_system(&model).unwrap();
        assert!(!verdict.holds);
        assert!(replay_witness(&model, &verdict).unwrap());
        let game = classify_si(
            &model,
            &DefenseStrategy::Audit { audit: "blind_audit".into() },
            &"cast_votes".into(),
            None,
        )
        .unwrap();
        assert_eq!(game.delta, r(1, 1));
        assert!(!game.classification.loose);
    }

    #[test]
    fn pweak_detection_matches_the_altered_fraction() {
        let model = build_exemplar(&ExemplarParams::Pweak { ballots: 100, altered: 10, sample: 1 })
            .unwrap();
        let audit = model.audit(&"paper_audit".into()).unwrap();
        assert_eq!(audit.reject_prob[&ExecutionId::from("altered_run")], r(1, 10));
    }

    #[test]
    fn pweak_larger_sample_matches_the_sequential_product_form() {
        let model = build_exemplar(&ExemplarParams::Pweak { ballots: 100, altered: 10, sample: 5 })
            .unwrap();
        let mut miss = Rational::one();
        for i in 0..5i64 {
            miss = miss * r(90 - i, 100 - i);
        }
        let audit = model.audit(&"paper_audit".into()).unwrap();
        assert_eq!(audit.reject_prob[&ExecutionId::from("altered_run")], Rational::one() - miss);
    }

    #[test]
    fn pweak_without_alterations_satisfies_every_check() {
        let model =
            build_exemplar(&ExemplarParams::Pweak { ballots: 50, altered: 0, sample: 3 }).unwrap();
        assert!(check_si1_system(&model).unwrap().holds);
        assert!(check_sr_system(&model).unwrap().holds);
        assert!(check_si4_system(&model, &r(1, 1)).unwrap().holds);
    }

    #[test]
    fn pweak_si4_threshold_sits_exactly_at_the_detection_probability() {
        let model = build_exemplar(&ExemplarParams::Pweak { ballots: 100, altered: 10, sample: 1 })
            .unwrap();
        let input = "cast_ballots".into();
        let audit_id = "paper_audit".into();
        assert!(check_si4(&model, &input, &audit_id, &r(1, 10)).unwrap().holds);
        let verdict = check_si4(&model, &input, &audit_id, &r(11, 100)).unwrap();
        assert!(!verdict.holds);
        assert!(replay_witness(&model, &verdict).unwrap());
    }

    #[test]
    fn trusted_individual_is_si_but_not_e2ev() {
        let model = build_exemplar(&ExemplarParams::TrustedIndividual).unwrap();
        assert!(check_si1_system(&model).unwrap().holds);
        assert!(check_si1_strong(&model, &"cast_ballots".into(), &"verify_alarm".into())
            .unwrap()
            .holds);
        assert!(check_sr_system(&model).unwrap().holds);
        assert!(check_si4_system(&model, &r(1, 1)).unwrap().holds);
        let verdict = check_e2ev(&model).unwrap();
        assert!(!verdict.holds);
        let Some(Witness::UnverifiedOutcome { variant, .. }) = &verdict.witness else {
            panic!("expected an unverified-outcome witness");
        };
        assert_eq!(variant.as_str(), "individual_misreports");
        assert_eq!(
            model.variant(variant).unwrap().kind,
            VariantKind::ContextMutation
        );
        assert!(replay_witness(&model, &verdict).unwrap());
    }

    #[test]
    fn paper_rla_meets_its_risk_limit_and_recount_is_strict() {
        let alpha = rational("1/20");
        let model = build_exemplar(&ExemplarParams::PaperRla { alpha: alpha.clone() }).unwrap();
        let input = "cast_ballots".into();
        let rla = classify_si(
            &model,
            &DefenseStrategy::Audit { audit: "rla".into() },
            &input,
            Some((Rational::zero(), alpha.clone())),
        )
        .unwrap();
        assert_eq!(rla.epsilon, Rational::zero());
        assert_eq!(rla.delta, alpha);
        assert!(rla.classification.loose);
        assert!(rla.classification.meets.as_ref().unwrap().satisfied);
        let recount = classify_si(
            &model,
            &DefenseStrategy::Audit { audit: "total_recount".into() },
            &input,
            None,
        )
        .unwrap();
        assert!(recount.classification.strict);
    }

    #[test]
    fn paper_rla_si1_witness_is_the_rla_audit() {
        let model =
            build_exemplar(&ExemplarParams::PaperRla { alpha: rational("1/20") }).unwrap();
        let verdict = check_si1_system(&model).unwrap();
        assert!(verdict.holds);
        assert_eq!(verdict.witness, Some(Witness::Audit { audit: "rla".into() }));
        let system = evaluate_system(&model, Some((Rational::zero(), rational("1/20")))).unwrap();
        assert!(system.system_verdict.unwrap().holds);
    }

    #[test]
    fn random_models_validate_and_keep_one_sound_verification_audit() {
        for seed in 0..60 {
            let model = build_exemplar(&ExemplarParams::Random { seed }).unwrap();
            assert!(validate_model(&model).violations.is_empty(), "seed {seed}");
            let verifiers: Vec<_> = model
                .audits
                .iter()
                .filter(|a| a.id.as_str().starts_with("verify_"))
                .collect();
            assert_eq!(verifiers.len(), 1, "seed {seed}");
            assert!(
                crate::checks::soundness_failure_of(&model, verifiers[0]).is_none(),
                "seed {seed}: verification audit must be sound"
            );
        }
    }

    #[test]
    fn random_generation_is_reproducible_per_seed() {
        let once = build_exemplar(&ExemplarParams::Random { seed: 11 }).unwrap();
        let again = build_exemplar(&ExemplarParams::Random { seed: 11 }).unwrap();
        assert_eq!(serialize_model(&once), serialize_model(&again));
        let other = build_exemplar(&ExemplarParams::Random { seed: 12 }).unwrap();
        assert_ne!(serialize_model(&once), serialize_model(&other));
    }

    #[test]
    fn e2ev_needs_a_designated_verification_audit() {
        let model = build_exemplar(&ExemplarParams::Dre).unwrap();
        assert!(matches!(check_e2ev(&model), Err(EngineError::NoVerificationAudits)));
    }

    #[test]
    fn e2ev_holds_vacuously_without_mutations() {
        let model = ModelBuilder::new(&["a"])
            .variant("ideal", VariantKind::Ideal)
            .input("v1")
            .execution("ideal", "v1", exec("e1", r(1, 1), &[], &[("a", r(1, 1))]))
            .audit(audit("verify_all", &[("e1", r(0, 1))]))
            .build();
        let verdict = check_e2ev(&model).unwrap();
        assert!(verdict.holds);
        assert_eq!(verdict.witness, None);
    }

    #[test]
    fn parameter_ranges_are_enforced() {
        let bad = [
            ExemplarParams::Pweak { ballots: 0, altered: 0, sample: 1 },
            ExemplarParams::Pweak { ballots: 10, altered: 11, sample: 1 },
            ExemplarParams::Pweak { ballots: 10, altered: 2, sample: 0 },
            ExemplarParams::Pweak { ballots: 10, altered: 2, sample: 11 },
            ExemplarParams::PaperRla { alpha: r(0, 1) },
            ExemplarParams::PaperRla { alpha: r(1, 1) },
            ExemplarParams::PaperRla { alpha: r(21, 20) },
        ];
        for params in bad {
            assert!(
                matches!(build_exemplar(&params), Err(EngineError::InvalidExemplarParams(_))),
                "{params:?} should be rejected"
            );
        }
    }
}
