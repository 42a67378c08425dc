//! Scenarios: spaces, states, observables, aliases, chains and queries,
//! with the `.scn` text format.
//!
//! ```text
//! # comment
//! space <name> dim <n> basis { <label>, ... }
//! state <name> = <scalar> |<label>,<label>> + ...
//! observable <name> on <space> { <label> -> <ket-expr>, ... }
//! alias <name> of <observable> { <label> -> <label>, ... }
//! chain <name>: (<prop> -> <prop>), ...
//! query <name>: prob <state> [<prop>, ...]
//! query <name>: expand <state> in <observable>,<observable>
//! query <name>: audit <chain>
//! query <name>: hv <chain> target [<prop>, ...]
//! ```
//!
//! A prop is `<observable>=<label>`. Scalars are built from integers,
//! `sqrt(<rational>)`, `*`, `/`, unary `-` and parentheses. Statements end at
//! a newline unless a bracket is open. Product kets list one label per space
//! in declaration order; the first declared space is the slowest index.

mod builtin;
mod lexer;
mod parser;
mod serialize;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::audit::{self, AuditError, AuditReport, ContradictionReport, HvProblem, HvResult, InferenceChain};
use crate::field::{ExactScalar, FieldError};
use crate::linear::{Ket, LinearError, SpaceLayout};
use crate::propositions::{Alias, Observable, Proposition, PropositionError, Registry};

pub use builtin::builtin_scenario;
pub use parser::{parse, parse_bytes};
pub use serialize::serialize;

/// 1-based line and column of a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub found: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: found {}", self.span, self.found)?;
        match self.expected.as_slice() {
            [] => Ok(()),
            [one] => write!(f, ", expected {one}"),
            many => write!(f, ", expected one of {}", many.join(", ")),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Proposition(#[from] PropositionError),
    #[error("state `{name}` is not normalized: ⟨v|v⟩ = {norm}")]
    NotNormalized { name: String, norm: String },
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("`{0}` is not a valid name or label")]
    InvalidLabel(String),
    #[error("invalid query `{name}`: {reason}")]
    InvalidQuery { name: String, reason: String },
    #[error("chain `{0}` has no links")]
    EmptyChain(String),
    #[error("spaces must be declared before any other statement")]
    LayoutFrozen,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("parse error at {0}")]
    Parse(ParseError),
    #[error("{}invalid scenario: {error}", span.map(|s| format!("{s}: ")).unwrap_or_default())]
    Validation {
        span: Option<SourceSpan>,
        error: ValidationError,
    },
}

impl ScenarioError {
    pub fn span(&self) -> Option<SourceSpan> {
        match self {
            ScenarioError::Parse(e) => Some(e.span),
            ScenarioError::Validation { span, .. } => *span,
        }
    }
}

impl From<ParseError> for ScenarioError {
    fn from(e: ParseError) -> Self {
        ScenarioError::Parse(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedState {
    pub name: String,
    pub ket: Ket,
}

/// Conditionals as written, before certification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSpec {
    pub name: String,
    pub links: Vec<(Proposition, Proposition)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryKind {
    Prob { state: String, props: Vec<Proposition> },
    Expand { state: String, observables: Vec<String> },
    Audit { chain: String },
    Hv { chain: String, target: Vec<Proposition> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub name: String,
    pub kind: QueryKind,
}

/// A validated scenario. Every mutator validates its input, so a
/// `Scenario` value is always evaluable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    registry: Registry,
    states: Vec<NamedState>,
    chains: Vec<ChainSpec>,
    queries: Vec<Query>,
}

/// Identifier: `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Outcome labels are identifiers or signed rationals such as `+1/2`.
pub fn is_outcome_label(s: &str) -> bool {
    if is_identifier(s) {
        return true;
    }
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    digits(num) && den.is_none_or(digits)
}

fn check_name(name: &str) -> Result<(), ValidationError> {
    if is_identifier(name) {
        Ok(())
    } else {
        Err(ValidationError::InvalidLabel(name.to_string()))
    }
}

fn check_outcome(label: &str) -> Result<(), ValidationError> {
    if is_outcome_label(label) {
        Ok(())
    } else {
        Err(ValidationError::InvalidLabel(label.to_string()))
    }
}

impl Scenario {
    pub fn new(layout: SpaceLayout) -> Result<Self, ValidationError> {
        for s in layout.subsystems() {
            check_name(&s.name)?;
            for l in &s.labels {
                check_name(l)?;
            }
        }
        Ok(Scenario {
            registry: Registry::new(Arc::new(layout)),
            states: Vec::new(),
            chains: Vec::new(),
            queries: Vec::new(),
        })
    }

    pub fn layout(&self) -> &Arc<SpaceLayout> {
        self.registry.layout()
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn states(&self) -> &[NamedState] {
        &self.states
    }

    pub fn chains(&self) -> &[ChainSpec] {
        &self.chains
    }

    pub fn queries(&self) -> &[Query] {
        &self.queries
    }

    pub fn state(&self, name: &str) -> Option<&Ket> {
        self.states.iter().find(|s| s.name == name).map(|s| &s.ket)
    }

    pub fn chain(&self, name: &str) -> Option<&ChainSpec> {
        self.chains.iter().find(|c| c.name == name)
    }

    pub fn query(&self, name: &str) -> Option<&Query> {
        self.queries.iter().find(|q| q.name == name)
    }

    pub fn add_state(&mut self, name: &str, ket: Ket) -> Result<(), ValidationError> {
        check_name(name)?;
        if self.state(name).is_some() {
            return Err(ValidationError::Duplicate { kind: "state", name: name.into() });
        }
        if ket.layout().as_ref() != self.layout().as_ref() || ket.group() != self.layout().all() {
            return Err(LinearError::LayoutMismatch(format!("state `{name}` is not on the full layout")).into());
        }
        let norm = ket.norm_squared();
        if !norm.is_one() {
            return Err(ValidationError::NotNormalized {
                name: name.into(),
                norm: norm.to_string(),
            });
        }
        self.states.push(NamedState { name: name.into(), ket });
        Ok(())
    }

    pub fn add_observable(&mut self, observable: Observable) -> Result<(), ValidationError> {
        check_name(observable.name())?;
        for l in observable.labels() {
            check_outcome(l)?;
        }
        self.registry.add_observable(observable)?;
        Ok(())
    }

    pub fn add_alias(&mut self, observable: &str, alias: Alias) -> Result<(), ValidationError> {
        check_name(&alias.name)?;
        for (from, _) in &alias.labels {
            check_outcome(from)?;
        }
        self.registry.add_alias(observable, alias)?;
        Ok(())
    }

    pub fn add_chain(&mut self, chain: ChainSpec) -> Result<(), ValidationError> {
        check_name(&chain.name)?;
        if self.chain(&chain.name).is_some() {
            return Err(ValidationError::Duplicate { kind: "chain", name: chain.name });
        }
        if chain.links.is_empty() {
            return Err(ValidationError::EmptyChain(chain.name));
        }
        for (a, c) in &chain.links {
            self.registry.resolve_alias(a)?;
            self.registry.resolve_alias(c)?;
        }
        self.chains.push(chain);
        Ok(())
    }

    pub fn add_query(&mut self, query: Query) -> Result<(), ValidationError> {
        check_name(&query.name)?;
        if self.query(&query.name).is_some() {
            return Err(ValidationError::Duplicate { kind: "query", name: query.name });
        }
        let need_state = |s: &str| {
            self.state(s).map(|_| ()).ok_or_else(|| ValidationError::UnknownName {
                kind: "state",
                name: s.into(),
            })
        };
        let need_chain = |c: &str| {
            self.chain(c).map(|_| ()).ok_or_else(|| ValidationError::UnknownName {
                kind: "chain",
                name: c.into(),
            })
        };
        match &query.kind {
            QueryKind::Prob { state, props } => {
                need_state(state)?;
                for p in props {
                    self.registry.resolve_alias(p)?;
                }
            }
            QueryKind::Expand { state, observables } => {
                need_state(state)?;
                let names: Vec<&str> = observables.iter().map(String::as_str).collect();
                let context = self.registry.context(&names)?;
                if context.observables().len() != names.len() {
                    return Err(ValidationError::InvalidQuery {
                        name: query.name.clone(),
                        reason: "observable listed twice".into(),
                    });
                }
                self.registry.context_basis(&context)?;
            }
            QueryKind::Audit { chain } => need_chain(chain)?,
            QueryKind::Hv { chain, target } => {
                need_chain(chain)?;
                for p in target {
                    self.registry.resolve_alias(p)?;
                }
            }
        }
        self.queries.push(query);
        Ok(())
    }

    /// Certifies every link of a named chain against a named state.
    pub fn certify_chain(&self, state: &str, chain: &str) -> Result<InferenceChain, AuditError> {
        let ket = self.state_or_err(state)?;
        let spec = self
            .chain(chain)
            .ok_or_else(|| AuditError::IncompleteScenario(format!("no chain `{chain}`")))?;
        let links = spec
            .links
            .iter()
            .map(|(a, c)| self.registry.certify_conditional(ket, a, c))
            .collect::<Result<Vec<_>, _>>()?;
        audit::build_chain(links)
    }

    fn state_or_err(&self, name: &str) -> Result<&Ket, AuditError> {
        self.state(name)
            .ok_or_else(|| AuditError::IncompleteScenario(format!("no state `{name}`")))
    }

    /// The first declared state, the default for chain certification.
    pub fn default_state(&self) -> Option<&str> {
        self.states.first().map(|s| s.name.as_str())
    }

    /// Contradiction report for the first state and the first `hv` query.
    pub fn contradiction_report(&self) -> Result<ContradictionReport, AuditError> {
        let state = self
            .default_state()
            .ok_or_else(|| AuditError::IncompleteScenario("no state declared".into()))?;
        let (chain, target) = self
            .queries
            .iter()
            .find_map(|q| match &q.kind {
                QueryKind::Hv { chain, target } => Some((chain, target)),
                _ => None,
            })
            .ok_or_else(|| AuditError::IncompleteScenario("no hv query declared".into()))?;
        self.contradiction_report_for(state, chain, target)
    }

    pub fn contradiction_report_for(
        &self,
        state: &str,
        chain: &str,
        target: &[Proposition],
    ) -> Result<ContradictionReport, AuditError> {
        let inference = self.certify_chain(state, chain)?;
        audit::contradiction_report(&self.registry, self.state_or_err(state)?, &inference, target)
    }

    /// Evaluates a named query; chains are certified against `state`, or the
    /// first declared state when `None`.
    pub fn evaluate(&self, query: &str, state: Option<&str>) -> Result<QueryResult, AuditError> {
        let q = self
            .query(query)
            .ok_or_else(|| AuditError::IncompleteScenario(format!("no query `{query}`")))?;
        let chain_state = || {
            state
                .or_else(|| self.default_state())
                .ok_or_else(|| AuditError::IncompleteScenario("no state declared".into()))
        };
        Ok(match &q.kind {
            QueryKind::Prob { state, props } => {
                let ket = self.state_or_err(state)?;
                let resolved = props
                    .iter()
                    .map(|p| self.registry.resolve_alias(p))
                    .collect::<Result<Vec<_>, _>>()?;
                QueryResult::Probability {
                    state: state.clone(),
                    props: resolved.clone(),
                    value: self.registry.joint(ket, &resolved)?,
                }
            }
            QueryKind::Expand { state, observables } => {
                let ket = self.state_or_err(state)?;
                let names: Vec<&str> = observables.iter().map(String::as_str).collect();
                let context = self.registry.context(&names)?;
                QueryResult::Expansion {
                    state: state.clone(),
                    observables: context.observables().to_vec(),
                    entries: self.registry.expand(ket, &context)?,
                }
            }
            QueryKind::Audit { chain } => {
                let inference = self.certify_chain(chain_state()?, chain)?;
                QueryResult::Audit(Box::new(audit::audit(&self.registry, &inference)?))
            }
            QueryKind::Hv { chain, target } => {
                let inference = self.certify_chain(chain_state()?, chain)?;
                let problem = HvProblem::from_chain(&self.registry, &inference, target)?;
                let result = audit::hv_enumerate(&problem);
                QueryResult::Hv { problem, result }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryResult {
    Probability {
        state: String,
        props: Vec<Proposition>,
        value: ExactScalar,
    },
    Expansion {
        state: String,
        observables: Vec<String>,
        entries: Vec<(Vec<String>, ExactScalar)>,
    },
    Audit(Box<AuditReport>),
    Hv { problem: HvProblem, result: HvResult },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_classes() {
        assert!(is_identifier("ok_X"));
        assert!(is_identifier("_a1"));
        assert!(!is_identifier("1a"));
        assert!(!is_identifier(""));
        assert!(is_outcome_label("+1/2"));
        assert!(is_outcome_label("-1/2"));
        assert!(is_outcome_label("3"));
        assert!(!is_outcome_label("+"));
        assert!(!is_outcome_label("1/"));
        assert!(!is_outcome_label("a b"));
    }

    #[test]
    fn evaluate_builtin_queries() {
        let s = builtin_scenario();
        match s.evaluate("ok_ok", None).unwrap() {
            QueryResult::Probability { value, .. } => assert_eq!(value, ExactScalar::from_ratio(1, 12)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            s.evaluate("q_cross", None),
            Err(AuditError::Proposition(PropositionError::NonCommutingConjunction { .. }))
        ));
        assert!(matches!(s.evaluate("chain_audit", None).unwrap(), QueryResult::Audit(_)));
        assert!(matches!(s.evaluate("nope", None), Err(AuditError::IncompleteScenario(_))));
    }

    #[test]
    fn builtin_contradiction() {
        let r = builtin_scenario().contradiction_report().unwrap();
        assert_eq!(r.quantum_probability, ExactScalar::from_ratio(1, 12));
        assert_eq!(r.hv.satisfying, 5);
        assert_eq!(r.hv.target_satisfying, 0);
        assert!(!r.audit.boolean_embeddable);
    }

    #[test]
    fn incomplete_scenarios() {
        let layout = builtin_scenario().layout().as_ref().clone();
        let empty = Scenario::new(layout).unwrap();
        assert!(matches!(empty.contradiction_report(), Err(AuditError::IncompleteScenario(_))));
    }
}
