use std::fmt;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::{Parser, Subcommand};
use qlogic::scenario::{self, QueryKind, QueryResult, Scenario, ScenarioError};

use qlogic_cli::report::{self, Payload, Report};

const MAX_DRAWS: u64 = 1_000_000_000;

#[derive(Parser, Debug)]
#[command(name = "qlogic", version, about = "Exact quantum-proposition reports for .scn scenarios")]
struct Cli {
    /// Emit a JSON report.
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit a text report (the default).
    #[arg(long, global = true)]
    text: bool,
    /// Digits after the decimal point in decimal renderings.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u16).range(0..=200))]
    decimals: u16,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Contradiction report for the built-in two-lab scenario.
    FrDemo,
    /// Evaluate a `prob` query.
    Prob {
        file: PathBuf,
        query: String,
    },
    /// Evaluate an `expand` query.
    Expand {
        file: PathBuf,
        query: String,
    },
    /// Certify and audit a chain.
    Audit {
        file: PathBuf,
        chain: String,
        /// State the chain is certified on; defaults to the first state.
        #[arg(long)]
        state: Option<String>,
    },
    /// Enumerate hidden-variable assignments for an `hv` query.
    Hv {
        file: PathBuf,
        query: String,
        /// State the chain is certified on; defaults to the first state.
        #[arg(long)]
        state: Option<String>,
    },
    /// Draw joint outcomes of commuting observables, e.g. `X,Y`.
    Sample {
        file: PathBuf,
        observables: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        seed: u64,
        /// State to sample; defaults to the first state.
        #[arg(long)]
        state: Option<String>,
    },
    /// Parse and validate a scenario file.
    Validate {
        file: PathBuf,
    },
}

/// Bad names or arguments that clap cannot check.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A scenario file that fails to parse or validate.
#[derive(Debug)]
struct InputError {
    path: PathBuf,
    error: ScenarioError,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = self.path.display();
        match &self.error {
            ScenarioError::Parse(e) => write!(f, "{path}:{e}"),
            ScenarioError::Validation { span: Some(s), error } => write!(f, "{path}:{s}: {error}"),
            ScenarioError::Validation { span: None, error } => write!(f, "{path}: {error}"),
        }
    }
}

impl std::error::Error for InputError {}

#[derive(Debug)]
struct ReadError(PathBuf);

impl fmt::Display for ReadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot read {}", self.0.display())
    }
}

impl std::error::Error for ReadError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<UsageError>().is_some() {
        64
    } else if e.downcast_ref::<InputError>().is_some() || e.downcast_ref::<ReadError>().is_some() {
        2
    } else {
        1
    }
}

fn load(path: &Path) -> Result<Scenario> {
    let bytes = std::fs::read(path).with_context(|| ReadError(path.to_path_buf()))?;
    scenario::parse_bytes(&bytes).map_err(|error| {
        InputError {
            path: path.to_path_buf(),
            error,
        }
        .into()
    })
}

fn pick_state<'a>(s: &'a Scenario, state: Option<&'a str>) -> Result<&'a str> {
    match state {
        Some(name) if s.state(name).is_some() => Ok(name),
        Some(name) => Err(usage(format!("no state `{name}`"))),
        None => s.default_state().ok_or_else(|| usage("the scenario declares no state")),
    }
}

fn query_kind<'a>(s: &'a Scenario, name: &str, want: &str) -> Result<&'a QueryKind> {
    let q = s.query(name).ok_or_else(|| usage(format!("no query `{name}`")))?;
    let actual = match q.kind {
        QueryKind::Prob { .. } => "prob",
        QueryKind::Expand { .. } => "expand",
        QueryKind::Audit { .. } => "audit",
        QueryKind::Hv { .. } => "hv",
    };
    if actual != want {
        return Err(usage(format!("query `{name}` has kind `{actual}`, expected `{want}`")));
    }
    Ok(&q.kind)
}

fn run(cli: &Cli, argv: Vec<String>) -> Result<Report> {
    let digits = usize::from(cli.decimals);
    let (scenario, payload, verdict) = match &cli.command {
        Command::FrDemo => {
            let s = scenario::builtin_scenario();
            let r = s.contradiction_report()?;
            let state = s.default_state().expect("built-in state").to_string();
            let chain = s
                .queries()
                .iter()
                .find_map(|q| match &q.kind {
                    QueryKind::Hv { chain, .. } => Some(chain.clone()),
                    _ => None,
                })
                .expect("built-in hv query");
            let verdict = r.verdict.clone();
            let payload = Payload::Demo(report::demo(&state, &chain, &r, digits));
            (s, payload, verdict)
        }
        Command::Prob { file, query } => {
            let s = load(file)?;
            query_kind(&s, query, "prob")?;
            let QueryResult::Probability { state, props, value } =
                s.evaluate(query, None).with_context(|| format!("query `{query}`"))?
            else {
                unreachable!("checked query kind")
            };
            let propositions: Vec<String> = props.iter().map(|p| p.to_string()).collect();
            let verdict = format!("Pr({}) = {} on state {state}", propositions.join(" ∧ "), report::exact(&value));
            let payload = Payload::Probability(report::Probability {
                query: query.clone(),
                state,
                propositions,
                probability: report::exact(&value),
                probability_decimal: report::decimal(&value, digits),
            });
            (s, payload, verdict)
        }
        Command::Expand { file, query } => {
            let s = load(file)?;
            query_kind(&s, query, "expand")?;
            let QueryResult::Expansion { state, observables, entries } =
                s.evaluate(query, None).with_context(|| format!("query `{query}`"))?
            else {
                unreachable!("checked query kind")
            };
            let nonzero = entries.iter().filter(|(_, c)| !c.is_zero()).count();
            let verdict = format!(
                "{state} has {nonzero} nonzero coefficients of {} in the {} basis",
                entries.len(),
                observables.join("–")
            );
            let payload = Payload::Expansion(report::expansion(query, &state, &observables, &entries, digits));
            (s, payload, verdict)
        }
        Command::Audit { file, chain, state } => {
            let s = load(file)?;
            if s.chain(chain).is_none() {
                return Err(usage(format!("no chain `{chain}`")));
            }
            let state = pick_state(&s, state.as_deref())?.to_string();
            let inference = s
                .certify_chain(&state, chain)
                .with_context(|| format!("chain `{chain}` on state `{state}`"))?;
            let r = qlogic::audit::audit(s.registry(), &inference)?;
            let verdict = audit_verdict(&r);
            let payload = Payload::Audit(report::audit(chain, &state, &inference, &r));
            (s, payload, verdict)
        }
        Command::Hv { file, query, state } => {
            let s = load(file)?;
            let QueryKind::Hv { chain, target } = query_kind(&s, query, "hv")?.clone() else {
                unreachable!("checked query kind")
            };
            let state = pick_state(&s, state.as_deref())?.to_string();
            let inference = s
                .certify_chain(&state, &chain)
                .with_context(|| format!("chain `{chain}` on state `{state}`"))?;
            let problem = qlogic::audit::HvProblem::from_chain(s.registry(), &inference, &target)?;
            let result = qlogic::audit::hv_enumerate(&problem);
            let verdict = format!(
                "{} of {} assignments satisfy chain {chain}; {} of them also satisfy the target",
                result.satisfying, result.total, result.target_satisfying
            );
            let payload = Payload::Hv(report::hv(query, &chain, &state, &problem, &result));
            (s, payload, verdict)
        }
        Command::Sample { file, observables, n, seed, state } => {
            let s = load(file)?;
            if *n > MAX_DRAWS {
                return Err(usage(format!("--n must be at most {MAX_DRAWS}")));
            }
            let names: Vec<&str> = observables.split(',').map(str::trim).collect();
            if names.iter().any(|n| n.is_empty()) {
                return Err(usage(format!("malformed observable list `{observables}`")));
            }
            let state = pick_state(&s, state.as_deref())?.to_string();
            let ket = s.state(&state).expect("picked state exists");
            let reg = s.registry();
            let context = reg.context(&names)?;
            let born = reg.expand(ket, &context)?;
            let table = reg.sample(ket, &context, *n, *seed)?;
            let verdict = format!("{n} draws from state {state} with seed {seed}");
            let payload = Payload::Sample(report::sample(&state, &table, &born, *seed, digits));
            (s, payload, verdict)
        }
        Command::Validate { file } => {
            let s = load(file)?;
            let count = |n: usize| n as u64;
            let payload = Payload::Validate(report::Validate {
                spaces: count(s.layout().subsystems().len()),
                states: count(s.states().len()),
                observables: count(s.registry().observables().len()),
                chains: count(s.chains().len()),
                queries: count(s.queries().len()),
                diagnostics: Vec::new(),
            });
            (s, payload, "valid".to_string())
        }
    };
    Ok(Report {
        command: argv,
        scenario_digest: report::digest(&scenario),
        payload,
        verdict,
    })
}

fn audit_verdict(r: &qlogic::audit::AuditReport) -> String {
    let (a, c) = &r.conclusion;
    if r.boolean_embeddable {
        format!("all chain observables commute; {a} → {c} is asserted within one context")
    } else {
        let pairs: Vec<String> = r.violating_pairs.iter().map(|(x, y)| format!("({x}, {y})")).collect();
        format!(
            "not Boolean-embeddable: {} do not commute; {a} → {c} combines {} mutually incompatible context pairs",
            pairs.join(", "),
            r.incompatible_context_pairs().len()
        )
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(&cli, argv) {
        Ok(r) => {
            let out = if cli.json {
                let mut s = serde_json::to_string_pretty(&r).expect("report serializes");
                s.push('\n');
                s
            } else {
                report::render_text(&r)
            };
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
