//! The machine-readable report emitted by every checking subcommand.
//!
//! One [`Report`] carries everything a run produced: the verdicts, the game
//! table, the sampling estimate, any validation violations, and a mirror of
//! the process exit code, under the `si-report/1` schema. JSON output is the
//! canonical serde form; human output renders the same data as short
//! paragraphs with one-line witness descriptions.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use si_core::checks::{CheckVerdict, MismatchDirection, Witness};
use si_core::game::{DefenseStrategy, GameResult, SystemVerdict};
use si_core::model::{InputId, Violation};
use si_core::monte_carlo::{McEstimate, SideEstimate};

/// Schema tag for report documents.
pub const REPORT_SCHEMA: &str = "si-report/1";

/// The game-theoretic portion of a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameSection {
    pub results: Vec<GameResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pareto: Option<BTreeMap<InputId, Vec<DefenseStrategy>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system_verdict: Option<SystemVerdict>,
}

/// Everything one CLI invocation decided, in one serializable document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_digest: Option<String>,
    pub command: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<CheckVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game: Option<GameSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<McEstimate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub exit_code_mirror: u8,
}

impl Report {
    pub fn new(command: String) -> Self {
        Report {
            schema_version: REPORT_SCHEMA.to_string(),
            model_digest: None,
            command,
            verdicts: Vec::new(),
            game: None,
            estimate: None,
            violations: Vec::new(),
            warnings: Vec::new(),
            exit_code_mirror: 0,
        }
    }

    /// Canonical JSON rendering: pretty-printed, newline-terminated.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }

    /// Plain-text rendering of the same content.
    pub fn to_human(&self) -> String {
        let mut out = String::new();
        if let Some(digest) = &self.model_digest {
            let _ = writeln!(out, "model digest: {digest}");
        }
        for violation in &self.violations {
            let _ = writeln!(out, "violation: {violation}");
        }
        for verdict in &self.verdicts {
            render_verdict(&mut out, verdict);
        }
        if let Some(game) = &self.game {
            render_game(&mut out, game);
        }
        if let Some(estimate) = &self.estimate {
            render_estimate(&mut out, estimate);
        }
        for warning in &self.warnings {
            let _ = writeln!(out, "warning: {warning}");
        }
        let _ = writeln!(out, "exit code: {}", self.exit_code_mirror);
        out
    }
}

fn render_verdict(out: &mut String, verdict: &CheckVerdict) {
    let mut scope = String::new();
    if let Some(audit) = &verdict.audit {
        let _ = write!(scope, " audit={audit}");
    }
    if let Some(input) = &verdict.input {
        let _ = write!(scope, " input={input}");
    }
    if let Some(p0) = &verdict.p0 {
        let _ = write!(scope, " p0={p0}");
    }
    let state = if verdict.holds { "HOLDS" } else { "FAILS" };
    let _ = writeln!(out, "{}{scope}: {state}", verdict.definition);
    if let Some(witness) = &verdict.witness {
        for line in describe_witness(witness) {
            let _ = writeln!(out, "  {line}");
        }
    }
    if let Some(per_input) = &verdict.per_input {
        let mut parts = Vec::new();
        for (input, holds) in per_input {
            parts.push(format!("{input}={}", if *holds { "holds" } else { "fails" }));
        }
        let _ = writeln!(out, "  per input: {}", parts.join(", "));
    }
    if let Some(attribution) = &verdict.attribution {
        for (mutation, audits) in attribution {
            let names: Vec<String> = audits.iter().map(|a| a.to_string()).collect();
            let _ = writeln!(out, "  {mutation} detected by: {}", names.join(", "));
        }
    }
    for warning in &verdict.warnings {
        let _ = writeln!(out, "  warning: {warning}");
    }
}

fn describe_witness(witness: &Witness) -> Vec<String> {
    match witness {
        Witness::Audit { audit } => vec![format!("witness: audit {audit} works")],
        Witness::RejectedIdeal { input, execution, reject_prob } => vec![format!(
            "witness: ideal run {execution} on {input} rejected with probability {reject_prob}"
        )],
        Witness::MutationUndetected { input, mutation, execution, outcome } => vec![format!(
            "witness: {mutation} on {input} announces {outcome} via {execution} and no run of it is ever rejected"
        )],
        Witness::ExecutionUndetected { input, mutation, execution, outcome } => vec![format!(
            "witness: {mutation} on {input} announces {outcome} via {execution} with reject probability 0"
        )],
        Witness::MutationUndetectedBySet { input, mutation, execution, outcome } => vec![format!(
            "witness: no sound audit ever rejects {mutation} on {input}, which announces {outcome} via {execution}"
        )],
        Witness::AccMismatch { input, mutation, outcome, direction } => {
            let clause = match direction {
                MismatchDirection::Added => "surely accepted under the mutation but not the ideal",
                MismatchDirection::Removed => "surely accepted under the ideal but not the mutation",
            };
            vec![format!("witness: {mutation} on {input} makes {outcome} {clause}")]
        }
        Witness::DetectionBelowThreshold { input, mutation, execution, outcome, reject_prob } => {
            vec![format!(
                "witness: {mutation} on {input} announces {outcome} via {execution}, rejected only with probability {reject_prob}"
            )]
        }
        Witness::UnverifiedOutcome { input, variant, execution, outcome } => vec![format!(
            "witness: {variant} on {input} announces {outcome} via {execution} while passing every verification audit"
        )],
        Witness::AllAuditsFail { failures } => {
            let mut lines = vec!["witness: every sound audit fails somewhere:".to_string()];
            for (audit, inner) in failures {
                for line in describe_witness(inner) {
                    lines.push(format!("  {audit}: {}", line.trim_start_matches("witness: ")));
                }
            }
            lines
        }
    }
}

fn render_game(out: &mut String, game: &GameSection) {
    let _ = writeln!(out, "defense | input | epsilon | delta | strict | loose | meets");
    for result in &game.results {
        let meets = match &result.classification.meets {
            Some(bound) => {
                if bound.satisfied {
                    "yes".to_string()
                } else {
                    "no".to_string()
                }
            }
            None => "-".to_string(),
        };
        let delta = if result.delta_vacuous {
            format!("{} (vacuous)", result.delta)
        } else {
            result.delta.to_string()
        };
        let _ = writeln!(
            out,
            "{} | {} | {} | {} | {} | {} | {}",
            result.defense,
            result.input,
            result.epsilon,
            delta,
            yn(result.classification.strict),
            yn(result.classification.loose),
            meets
        );
        let _ = writeln!(out, "  worst false negative: attack {}", result.epsilon_witness);
        if let Some(attack) = &result.delta_witness {
            let _ = writeln!(out, "  worst false positive: attack {attack}");
        }
    }
    if let Some(pareto) = &game.pareto {
        for (input, defenses) in pareto {
            let names: Vec<String> = defenses.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "pareto {}: {}", input, names.join(", "));
        }
    }
    if let Some(verdict) = &game.system_verdict {
        let state = if verdict.holds { "HOLDS" } else { "FAILS" };
        let _ = writeln!(
            out,
            "({}, {})-SI system verdict: {state}",
            verdict.eps0, verdict.delta0
        );
        if let Some(defense) = &verdict.witness {
            let _ = writeln!(out, "  witness defense: {defense}");
        }
    }
}

fn render_estimate(out: &mut String, estimate: &McEstimate) {
    let _ = writeln!(
        out,
        "sampled {} trials with {} seed {}",
        estimate.trials, estimate.generator, estimate.seed
    );
    render_side(out, "P(reject | admissible announced)", &estimate.reject_given_admissible);
    render_side(out, "P(accept | inadmissible announced)", &estimate.accept_given_inadmissible);
}

fn render_side(out: &mut String, label: &str, side: &SideEstimate) {
    match side {
        SideEstimate::Estimated(est) => {
            let _ = writeln!(
                out,
                "{label} = {:.6} (std error {:.6}, {}/{} hits)",
                est.point, est.std_error, est.hits, est.conditioner_hits
            );
        }
        SideEstimate::ZeroConditioner => {
            let _ = writeln!(out, "{label}: conditioning event has probability zero");
        }
        SideEstimate::Unsampled => {
            let _ = writeln!(out, "{label}: conditioning event never sampled");
        }
    }
}

fn yn(value: bool) -> &'static str {
    if value {
        "yes"
    } else {
        "no"
    }
}
