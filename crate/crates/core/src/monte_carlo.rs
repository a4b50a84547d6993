//! Seeded Monte Carlo cross-checks of the exact game engine.
//!
//! Sampling follows the model's execution, outcome, and judgment
//! distributions and estimates the same two conditional probabilities the
//! exact engine computes: Pr(reject | admissible outcome) and
//! Pr(accept | inadmissible outcome). Every trial draws from its own
//! ChaCha8 stream derived from (seed, trial index), so results are byte
//! identical for a given seed no matter how trials are scheduled across
//! threads.
//!
//! Floating point is confined to this module by design; whether a
//! conditioning event is empty is still decided exactly.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::game::{audit_acceptance, AttackStrategy, DefenseStrategy, Judgment};
use crate::model::{admissible_outcomes, InputId, OutcomeId, SystemModel};

/// Sample mean and standard error of one conditional probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub point: f64,
    pub std_error: f64,
    /// Trials where both the judgment and the conditioning event occurred.
    pub hits: u64,
    /// Trials where the conditioning event occurred.
    pub conditioner_hits: u64,
}

/// One side of the estimate, or why it is undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SideEstimate {
    Estimated(Estimate),
    /// The conditioning event has exact probability zero under this attack.
    ZeroConditioner,
    /// The conditioning event has positive probability but no trial hit it.
    Unsampled,
}

/// A reproducible sampling run: both conditional estimates plus the
/// generator identity needed to reproduce them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub generator: String,
    pub seed: u64,
    pub trials: u64,
    pub reject_given_admissible: SideEstimate,
    pub accept_given_inadmissible: SideEstimate,
}

const GENERATOR: &str = "chacha8";

struct PreparedExecution {
    cumulative: f64,
    reject: f64,
    /// (cumulative outcome weight, outcome is admissible).
    outcomes: Vec<(f64, bool)>,
}

#[derive(Default, Clone, Copy)]
struct Counts {
    admissible: u64,
    rejected_admissible: u64,
    inadmissible: u64,
    accepted_inadmissible: u64,
}

impl Counts {
    fn merge(self, other: Counts) -> Counts {
        Counts {
            admissible: self.admissible + other.admissible,
            rejected_admissible: self.rejected_admissible + other.rejected_admissible,
            inadmissible: self.inadmissible + other.inadmissible,
            accepted_inadmissible: self.accepted_inadmissible + other.accepted_inadmissible,
        }
    }
}

fn side_estimate(exact_conditioner_positive: bool, conditioner_hits: u64, hits: u64) -> SideEstimate {
    if !exact_conditioner_positive {
        return SideEstimate::ZeroConditioner;
    }
    if conditioner_hits == 0 {
        return SideEstimate::Unsampled;
    }
    let n = conditioner_hits as f64;
    let point = hits as f64 / n;
    SideEstimate::Estimated(Estimate {
        point,
        std_error: (point * (1.0 - point) / n).sqrt(),
        hits,
        conditioner_hits,
    })
}

/// Samples `trials` runs of (attack, defense) on `input` under the given
/// seed. Trials must be at least 1.
pub fn monte_carlo_estimate(
    model: &SystemModel,
    attack: &AttackStrategy,
    defense: &DefenseStrategy,
    input: &InputId,
    trials: u64,
    seed: u64,
) -> Result<McEstimate, EngineError> {
    assert!(trials >= 1, "trials must be at least 1");
    let admissible = admissible_outcomes(model, input)?;
    let inadmissible: BTreeSet<OutcomeId> = model
        .outcomes
        .iter()
        .filter(|o| !admissible.contains(*o))
        .cloned()
        .collect();

    // Exact reachability decides whether a side is undefined; it also
    // validates the attack and defense before any sampling happens.
    let admissible_reachable =
        !audit_acceptance(model, attack, defense, input, &admissible, Judgment::Reject)?
            .conditioner
            .is_zero();
    let inadmissible_reachable =
        !audit_acceptance(model, attack, defense, input, &inadmissible, Judgment::Accept)?
            .conditioner
            .is_zero();

    let mut prepared: Vec<PreparedExecution> = Vec::new();
    let mut exec_cum = 0.0;
    for e in model.executions(&attack.variant, input)? {
        exec_cum += e.probability.to_f64();
        let reject = match defense {
            DefenseStrategy::Audit { audit } => model
                .audit(audit)
                .expect("defense was validated above")
                .reject_prob
                .get(&e.id)
                .expect("audit tables are total on valid models")
                .to_f64(),
            DefenseStrategy::CoinToss { p } => p.to_f64(),
        };
        let mut outcome_cum = 0.0;
        let outcomes = e
            .outcome_dist
            .iter()
            .map(|(o, p)| {
                outcome_cum += p.to_f64();
                (outcome_cum, admissible.contains(o))
            })
            .collect();
        prepared.push(PreparedExecution { cumulative: exec_cum, reject, outcomes });
    }

    let counts = (0..trials)
        .into_par_iter()
        .fold(Counts::default, |acc, trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let e = pick(&prepared, rng.gen::<f64>(), |p| p.cumulative);
            let (_, outcome_admissible) = *pick(&e.outcomes, rng.gen::<f64>(), |(cum, _)| *cum);
            let rejected = rng.gen::<f64>() < e.reject;
            let mut acc = acc;
            if outcome_admissible {
                acc.admissible += 1;
                if rejected {
                    acc.rejected_admissible += 1;
                }
            } else {
                acc.inadmissible += 1;
                if !rejected {
                    acc.accepted_inadmissible += 1;
                }
            }
            acc
        })
        .reduce(Counts::default, Counts::merge);

    Ok(McEstimate {
        generator: GENERATOR.to_string(),
        seed,
        trials,
        reject_given_admissible: side_estimate(
            admissible_reachable,
            counts.admissible,
            counts.rejected_admissible,
        ),
        accept_given_inadmissible: side_estimate(
            inadmissible_reachable,
            counts.inadmissible,
            counts.accepted_inadmissible,
        ),
    })
}

fn pick<T>(items: &[T], draw: f64, cumulative: impl Fn(&T) -> f64) -> &T {
    items
        .iter()
        .find(|item| draw < cumulative(item))
        .unwrap_or_else(|| items.last().expect("validated cells are nonempty"))
}
