//! The `si` command: validate models, decide independence definitions,
//! evaluate the detection game, sample acceptance probabilities, and
//! generate exemplar models.
//!
//! Exit codes are part of the interface: 0 when the command succeeds and
//! any checked property holds, 1 when a property fails (the witness is in
//! the report), 2 for usage or input errors, 3 for invalid models, and 4
//! when an audit precondition fails (unsound audit, no sound audit, no
//! verification audit).
//!
//! `SI_THREADS` caps internal parallelism; reports are byte-identical for
//! a given model, command line, and seed regardless of thread count.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use si_core::checks::{
    check_si1, check_si1_all_inputs, check_si1_for_input, check_si1_strong,
    check_si1_strong_all_inputs, check_si1_system, check_si2, check_si2_system, check_si3,
    check_si3_all_inputs, check_si3_for_input, check_si3_system, check_si4, check_si4_all_inputs,
    check_si4_for_input, check_si4_system, check_soundness, check_sr, check_sr_all_inputs,
    check_sr_for_input, check_sr_system, CheckVerdict,
};
use si_core::exemplars::{build_exemplar, check_e2ev, ExemplarParams};
use si_core::format::{
    exemplar_params_from_parts, model_digest, parse_exemplar_params, parse_model, serialize_model,
    ParseError,
};
use si_core::game::{classify_si, evaluate_system, AttackStrategy, DefenseStrategy, SystemVerdict};
use si_core::model::{AuditId, InputId, SystemModel};
use si_core::monte_carlo::monte_carlo_estimate;
use si_core::{EngineError, Rational};

use si_cli::report::{GameSection, Report};

#[derive(Parser)]
#[command(name = "si", version, about = "Software-independence checker for finite voting-system models")]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a model file and report any validation violations.
    Validate { model: PathBuf },
    /// Decide one independence definition, possibly restricted by flags.
    Check {
        model: PathBuf,
        /// Definition to decide.
        #[arg(long, value_enum)]
        definition: DefinitionArg,
        /// Restrict to one election input; omit for the system form.
        #[arg(long)]
        input: Option<String>,
        /// Fix the audit instead of quantifying over audits.
        #[arg(long)]
        audit: Option<String>,
        /// Detection threshold for si4, as "num/den" or an integer.
        #[arg(long)]
        p0: Option<String>,
    },
    /// Compute exact epsilon and delta against worst-case attacks.
    Game {
        model: PathBuf,
        /// Bound on epsilon, as "num/den" or an integer.
        #[arg(long, requires = "delta0")]
        eps0: Option<String>,
        /// Bound on delta, as "num/den" or an integer.
        #[arg(long, requires = "eps0")]
        delta0: Option<String>,
        /// Defense to evaluate: an audit id or "coin:p".
        #[arg(long)]
        defense: Option<String>,
        /// Restrict to one election input.
        #[arg(long)]
        input: Option<String>,
    },
    /// Sample acceptance probabilities and cross-check the exact engine.
    Estimate {
        model: PathBuf,
        /// Attacking software variant id.
        #[arg(long)]
        attack: String,
        /// Defense to sample: an audit id or "coin:p".
        #[arg(long)]
        defense: String,
        /// Election input to sample on.
        #[arg(long)]
        input: String,
        /// Number of trials, at least 1.
        #[arg(long)]
        trials: u64,
        /// Seed for the reproducible generator.
        #[arg(long)]
        seed: u64,
    },
    /// Generate one of the built-in exemplar models.
    Exemplar {
        /// Which exemplar to build.
        #[arg(long, value_enum, required_unless_present = "params_file", conflicts_with = "params_file")]
        name: Option<ExemplarName>,
        /// Exemplar parameter as key=value; repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE", conflicts_with = "params_file")]
        param: Vec<String>,
        /// Read an si-exemplar/1 parameter document instead of flags.
        #[arg(long)]
        params_file: Option<PathBuf>,
        /// Write the model here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DefinitionArg {
    Si1,
    Si1Strong,
    Si2,
    Si3,
    Si4,
    Sr,
    Soundness,
    E2ev,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExemplarName {
    Dre,
    Pweak,
    TrustedIndividual,
    PaperRla,
    Random,
}

impl ExemplarName {
    fn engine_name(self) -> &'static str {
        match self {
            ExemplarName::Dre => "dre",
            ExemplarName::Pweak => "pweak",
            ExemplarName::TrustedIndividual => "trusted_individual",
            ExemplarName::PaperRla => "paper_rla",
            ExemplarName::Random => "random",
        }
    }
}

/// A terminal failure: exit code plus the message for standard error.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

impl From<ParseError> for Failure {
    fn from(err: ParseError) -> Self {
        match err {
            ParseError::Validation(report) => Failure { code: 3, message: report.to_string() },
            other => Failure { code: 2, message: other.to_string() },
        }
    }
}

impl From<EngineError> for Failure {
    fn from(err: EngineError) -> Self {
        let code = match &err {
            EngineError::UnsoundAudit { .. }
            | EngineError::NoSoundAudit
            | EngineError::NoVerificationAudits => 4,
            _ => 2,
        };
        Failure { code, message: err.to_string() }
    }
}

fn main() -> ExitCode {
    if let Err(failure) = configure_threads() {
        eprintln!("error: {}", failure.message);
        return ExitCode::from(failure.code);
    }
    let cli = Cli::parse();
    let command: Vec<String> = std::env::args().collect();
    match run(cli, command.join(" ")) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Some(raw) = std::env::var_os("SI_THREADS") else {
        return Ok(());
    };
    let text = raw.to_string_lossy();
    let threads: usize = text
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| usage(format!("SI_THREADS must be a positive integer, got {text:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| usage(format!("cannot configure {threads} threads: {e}")))
}

fn run(cli: Cli, command: String) -> Result<u8, Failure> {
    match cli.command {
        Command::Validate { model } => cmd_validate(&model, cli.format, command),
        Command::Check { model, definition, input, audit, p0 } => {
            cmd_check(&model, definition, input, audit, p0, cli.format, command)
        }
        Command::Game { model, eps0, delta0, defense, input } => {
            cmd_game(&model, eps0, delta0, defense, input, cli.format, command)
        }
        Command::Estimate { model, attack, defense, input, trials, seed } => {
            cmd_estimate(&model, attack, defense, input, trials, seed, cli.format, command)
        }
        Command::Exemplar { name, param, params_file, out } => {
            cmd_exemplar(name, &param, params_file.as_deref(), out.as_deref())
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<SystemModel, Failure> {
    Ok(parse_model(&read_file(path)?)?)
}

fn parse_rational(text: &str, what: &str) -> Result<Rational, Failure> {
    text.parse::<Rational>()
        .map_err(|e| usage(format!("invalid {what}: {e}")))
}

fn parse_defense(text: &str) -> Result<DefenseStrategy, Failure> {
    match text.strip_prefix("coin:") {
        Some(prob) => {
            let p = parse_rational(prob, "coin probability")?;
            if !p.is_probability() {
                return Err(usage(format!("coin probability {p} is not in [0, 1]")));
            }
            Ok(DefenseStrategy::CoinToss { p })
        }
        None => Ok(DefenseStrategy::Audit { audit: AuditId::new(text) }),
    }
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Human => print!("{}", report.to_human()),
        Format::Json => print!("{}", report.to_json()),
    }
}

fn cmd_validate(path: &Path, format: Format, command: String) -> Result<u8, Failure> {
    let text = read_file(path)?;
    let mut report = Report::new(command);
    match parse_model(&text) {
        Ok(model) => {
            report.model_digest = Some(model_digest(&model));
            emit(&report, format);
            Ok(0)
        }
        Err(ParseError::Validation(validation)) => {
            report.violations = validation.violations;
            report.exit_code_mirror = 3;
            emit(&report, format);
            Ok(3)
        }
        Err(other) => Err(other.into()),
    }
}

fn cmd_check(
    path: &Path,
    definition: DefinitionArg,
    input: Option<String>,
    audit: Option<String>,
    p0: Option<String>,
    format: Format,
    command: String,
) -> Result<u8, Failure> {
    let model = load_model(path)?;
    let input = input.map(InputId::new);
    let audit = audit.map(AuditId::new);
    let p0 = match p0 {
        Some(text) => {
            if definition != DefinitionArg::Si4 {
                return Err(usage("--p0 only applies to --definition si4"));
            }
            Some(parse_rational(&text, "--p0")?)
        }
        None => None,
    };
    let verdict = dispatch_check(&model, definition, input.as_ref(), audit.as_ref(), p0.as_ref())?;
    let mut report = Report::new(command);
    report.model_digest = Some(model_digest(&model));
    report.exit_code_mirror = if verdict.holds { 0 } else { 1 };
    report.verdicts.push(verdict);
    emit(&report, format);
    Ok(report.exit_code_mirror)
}

fn dispatch_check(
    model: &SystemModel,
    definition: DefinitionArg,
    input: Option<&InputId>,
    audit: Option<&AuditId>,
    p0: Option<&Rational>,
) -> Result<CheckVerdict, Failure> {
    type Election = fn(&SystemModel, &InputId, &AuditId) -> Result<CheckVerdict, EngineError>;
    type ForInput = fn(&SystemModel, &InputId) -> Result<CheckVerdict, EngineError>;
    type AllInputs = fn(&SystemModel, &AuditId) -> Result<CheckVerdict, EngineError>;
    type System = fn(&SystemModel) -> Result<CheckVerdict, EngineError>;

    let four_way = |election: Election, for_input: ForInput, all_inputs: AllInputs, system: System| {
        Ok(match (input, audit) {
            (Some(v), Some(a)) => election(model, v, a)?,
            (Some(v), None) => for_input(model, v)?,
            (None, Some(a)) => all_inputs(model, a)?,
            (None, None) => system(model)?,
        })
    };

    match definition {
        DefinitionArg::Si1 => {
            four_way(check_si1, check_si1_for_input, check_si1_all_inputs, check_si1_system)
        }
        DefinitionArg::Si3 => {
            four_way(check_si3, check_si3_for_input, check_si3_all_inputs, check_si3_system)
        }
        DefinitionArg::Sr => {
            four_way(check_sr, check_sr_for_input, check_sr_all_inputs, check_sr_system)
        }
        DefinitionArg::Si4 => {
            let p0 = p0.ok_or_else(|| usage("--definition si4 requires --p0"))?;
            Ok(match (input, audit) {
                (Some(v), Some(a)) => check_si4(model, v, a, p0)?,
                (Some(v), None) => check_si4_for_input(model, v, p0)?,
                (None, Some(a)) => check_si4_all_inputs(model, a, p0)?,
                (None, None) => check_si4_system(model, p0)?,
            })
        }
        DefinitionArg::Si1Strong => {
            let a = audit
                .ok_or_else(|| usage("--definition si1-strong requires --audit: the strong form has no existential audit reading"))?;
            Ok(match input {
                Some(v) => check_si1_strong(model, v, a)?,
                None => check_si1_strong_all_inputs(model, a)?,
            })
        }
        DefinitionArg::Si2 => {
            if audit.is_some() {
                return Err(usage("--definition si2 quantifies over the audit set; drop --audit"));
            }
            Ok(match input {
                Some(v) => check_si2(model, v)?,
                None => check_si2_system(model)?,
            })
        }
        DefinitionArg::Soundness => {
            let a = audit.ok_or_else(|| usage("--definition soundness requires --audit"))?;
            if input.is_some() {
                return Err(usage("--definition soundness covers all inputs; drop --input"));
            }
            Ok(check_soundness(model, a)?)
        }
        DefinitionArg::E2ev => {
            if input.is_some() || audit.is_some() {
                return Err(usage("--definition e2ev takes neither --input nor --audit"));
            }
            Ok(check_e2ev(model)?)
        }
    }
}

fn cmd_game(
    path: &Path,
    eps0: Option<String>,
    delta0: Option<String>,
    defense: Option<String>,
    input: Option<String>,
    format: Format,
    command: String,
) -> Result<u8, Failure> {
    let model = load_model(path)?;
    let bounds = match (eps0, delta0) {
        (Some(e), Some(d)) => {
            Some((parse_rational(&e, "--eps0")?, parse_rational(&d, "--delta0")?))
        }
        _ => None,
    };
    let input = input.map(InputId::new);
    if let Some(v) = &input {
        if model.input(v).is_none() {
            return Err(EngineError::UnknownInput(v.clone()).into());
        }
    }

    let mut report = Report::new(command);
    report.model_digest = Some(model_digest(&model));
    let holds = match defense {
        Some(text) => {
            let defense = parse_defense(&text)?;
            let inputs: Vec<InputId> = match input {
                Some(v) => vec![v],
                None => {
                    let mut ids: Vec<InputId> =
                        model.inputs.iter().map(|i| i.id.clone()).collect();
                    ids.sort();
                    ids
                }
            };
            let mut results = Vec::new();
            for v in &inputs {
                results.push(classify_si(&model, &defense, v, bounds.clone())?);
            }
            let holds = results
                .iter()
                .all(|r| r.classification.meets.as_ref().is_none_or(|m| m.satisfied));
            report.game = Some(GameSection { results, pareto: None, system_verdict: None });
            holds
        }
        None => {
            let eval = evaluate_system(&model, bounds.clone())?;
            report.warnings = eval.warnings;
            match input {
                None => {
                    let holds = eval.system_verdict.as_ref().is_none_or(|v| v.holds);
                    report.game = Some(GameSection {
                        results: eval.results,
                        pareto: Some(eval.pareto),
                        system_verdict: eval.system_verdict,
                    });
                    holds
                }
                Some(v) => {
                    let results: Vec<_> =
                        eval.results.into_iter().filter(|r| r.input == v).collect();
                    let pareto: BTreeMap<_, _> =
                        eval.pareto.into_iter().filter(|(k, _)| *k == v).collect();
                    let verdict = bounds.map(|(eps0, delta0)| {
                        let witness = results
                            .iter()
                            .find(|r| r.classification.meets.as_ref().is_some_and(|m| m.satisfied))
                            .map(|r| r.defense.clone());
                        SystemVerdict { eps0, delta0, holds: witness.is_some(), witness }
                    });
                    let holds = verdict.as_ref().is_none_or(|v| v.holds);
                    report.game = Some(GameSection {
                        results,
                        pareto: Some(pareto),
                        system_verdict: verdict,
                    });
                    holds
                }
            }
        }
    };
    report.exit_code_mirror = if holds { 0 } else { 1 };
    emit(&report, format);
    Ok(report.exit_code_mirror)
}

#[allow(clippy::too_many_arguments)]
fn cmd_estimate(
    path: &Path,
    attack: String,
    defense: String,
    input: String,
    trials: u64,
    seed: u64,
    format: Format,
    command: String,
) -> Result<u8, Failure> {
    let model = load_model(path)?;
    if trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let attack = AttackStrategy { variant: attack.into() };
    let defense = parse_defense(&defense)?;
    let estimate =
        monte_carlo_estimate(&model, &attack, &defense, &InputId::new(input), trials, seed)?;
    let mut report = Report::new(command);
    report.model_digest = Some(model_digest(&model));
    report.estimate = Some(estimate);
    emit(&report, format);
    Ok(0)
}

fn cmd_exemplar(
    name: Option<ExemplarName>,
    param: &[String],
    params_file: Option<&Path>,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let params: ExemplarParams = match params_file {
        Some(path) => parse_exemplar_params(&read_file(path)?)?,
        None => {
            let name = name.expect("clap enforces --name without --params-file");
            let mut map = BTreeMap::new();
            for pair in param {
                let (key, value) = pair
                    .split_once('=')
                    .ok_or_else(|| usage(format!("--param expects key=value, got {pair:?}")))?;
                let value = serde_json::from_str(value)
                    .unwrap_or_else(|_| serde_json::Value::String(value.to_string()));
                map.insert(key.to_string(), value);
            }
            exemplar_params_from_parts(name.engine_name(), &map, None)?
        }
    };
    let model = build_exemplar(&params)?;
    let text = serialize_model(&model);
    match out {
        Some(path) => fs::write(path, &text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}
