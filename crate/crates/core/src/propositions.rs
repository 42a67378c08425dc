//! Observables, quantum propositions `P: p`, contexts and the Born rule.
//!
//! A conjunction is only defined when the lifted eigenprojectors involved
//! commute; anything else is reported as [`PropositionError::NonCommutingConjunction`].
//! Conditionals `a → c` are read materially as `¬(a ∧ ¬c)` and are only
//! certified when `Pr(a ∧ ¬c)` is exactly zero.

use std::fmt;
use std::sync::Arc;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::ExactScalar;
use crate::linear::{self, Ket, LinearError, LinearOperator, SpaceLayout};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropositionError {
    #[error("unknown observable or alias `{0}`")]
    UnknownAlias(String),
    #[error("`{label}` is not an outcome of `{observable}`")]
    UnknownOutcome { observable: String, label: String },
    #[error("invalid observable `{name}`: {reason}")]
    InvalidObservable { name: String, reason: String },
    #[error("invalid alias `{name}`: {reason}")]
    InvalidAlias { name: String, reason: String },
    #[error("name `{0}` is already defined")]
    DuplicateName(String),
    #[error("conjunction across contexts: `{first}` and `{second}` do not commute")]
    NonCommutingConjunction { first: String, second: String },
    #[error("{antecedent} → {consequent} is not certified: Pr(antecedent ∧ ¬consequent) = {probability}")]
    NotCertified {
        antecedent: Proposition,
        consequent: Proposition,
        probability: ExactScalar,
    },
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error(transparent)]
    Linear(#[from] LinearError),
}

type Result<T, E = PropositionError> = std::result::Result<T, E>;

/// "observable has value outcome".
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Proposition {
    pub observable: String,
    pub outcome: String,
}

impl Proposition {
    pub fn new(observable: impl Into<String>, outcome: impl Into<String>) -> Self {
        Proposition {
            observable: observable.into(),
            outcome: outcome.into(),
        }
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.observable, self.outcome)
    }
}

/// "observable has one of these values".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disjunction {
    pub observable: String,
    pub outcomes: Vec<String>,
}

impl fmt::Display for Disjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∈{{{}}}", self.observable, self.outcomes.join(","))
    }
}

/// Result of negating a proposition: another outcome for binary observables,
/// a disjunction of the remaining outcomes otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Negation {
    Single(Proposition),
    AnyOf(Disjunction),
}

impl Negation {
    pub fn propositions(&self) -> Vec<Proposition> {
        match self {
            Negation::Single(p) => vec![p.clone()],
            Negation::AnyOf(d) => d
                .outcomes
                .iter()
                .map(|o| Proposition::new(&d.observable, o))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub label: String,
    pub eigenvector: Ket,
}

/// Relabeling of an observable's outcomes, e.g. `C` for `A` with `h ↦ H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alias {
    pub name: String,
    /// Pairs `(alias label, canonical label)`.
    pub labels: Vec<(String, String)>,
}

impl Alias {
    pub fn new(name: impl Into<String>, labels: &[(&str, &str)]) -> Self {
        Alias {
            name: name.into(),
            labels: labels
                .iter()
                .map(|(a, c)| (a.to_string(), c.to_string()))
                .collect(),
        }
    }
}

/// A nondegenerate observable on one subsystem, given by its labeled
/// orthonormal eigenbasis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observable {
    name: String,
    subsystem: usize,
    outcomes: Vec<Outcome>,
    alias: Option<Alias>,
}

impl Observable {
    pub fn new(
        layout: &Arc<SpaceLayout>,
        name: impl Into<String>,
        subsystem: &str,
        outcomes: Vec<(String, Ket)>,
    ) -> Result<Self> {
        let name = name.into();
        let invalid = |reason: String| PropositionError::InvalidObservable {
            name: name.clone(),
            reason,
        };
        let index = layout
            .subsystem_index(subsystem)
            .ok_or_else(|| invalid(format!("no subsystem `{subsystem}`")))?;
        for (i, (label, v)) in outcomes.iter().enumerate() {
            if outcomes[..i].iter().any(|(l, _)| l == label) {
                return Err(invalid(format!("duplicate outcome `{label}`")));
            }
            if v.group() != [index] || v.layout().as_ref() != layout.as_ref() {
                return Err(invalid(format!("eigenvector of `{label}` is not a ket on `{subsystem}`")));
            }
        }
        let vectors: Vec<Ket> = outcomes.iter().map(|(_, v)| v.clone()).collect();
        linear::check_orthonormal(&vectors)?;
        let dim = layout.subsystems()[index].dim();
        if vectors.len() != dim {
            return Err(LinearError::IncompleteBasis {
                expected: dim,
                found: vectors.len(),
            }
            .into());
        }
        Ok(Observable {
            name,
            subsystem: index,
            outcomes: outcomes
                .into_iter()
                .map(|(label, eigenvector)| Outcome { label, eigenvector })
                .collect(),
            alias: None,
        })
    }

    /// The observable whose eigenbasis is the subsystem's own basis.
    pub fn standard(layout: &Arc<SpaceLayout>, name: impl Into<String>, subsystem: &str) -> Result<Self> {
        let name = name.into();
        let index = layout.subsystem_index(subsystem).ok_or_else(|| PropositionError::InvalidObservable {
            name: name.clone(),
            reason: format!("no subsystem `{subsystem}`"),
        })?;
        let outcomes = layout.subsystems()[index]
            .labels
            .iter()
            .map(|l| Ok((l.clone(), Ket::basis(layout.clone(), index, l)?)))
            .collect::<Result<Vec<_>>>()?;
        Observable::new(layout, name, subsystem, outcomes)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn subsystem(&self) -> usize {
        self.subsystem
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.outcomes.iter().map(|o| o.label.as_str())
    }

    pub fn alias(&self) -> Option<&Alias> {
        self.alias.as_ref()
    }

    pub fn outcome(&self, label: &str) -> Result<&Outcome> {
        self.outcomes
            .iter()
            .find(|o| o.label == label)
            .ok_or_else(|| PropositionError::UnknownOutcome {
                observable: self.name.clone(),
                label: label.to_string(),
            })
    }

    /// Eigenprojector of `label` lifted to the whole layout.
    pub fn eigenprojector(&self, label: &str) -> Result<LinearOperator> {
        Ok(linear::projector(&self.outcome(label)?.eigenvector)?.lift())
    }

    pub fn eigenprojectors(&self) -> Vec<LinearOperator> {
        self.outcomes
            .iter()
            .map(|o| {
                linear::projector(&o.eigenvector)
                    .expect("eigenvectors are normalized on construction")
                    .lift()
            })
            .collect()
    }
}

/// A validated family of pairwise commuting observables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    observables: Vec<String>,
}

impl Context {
    pub fn observables(&self) -> &[String] {
        &self.observables
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.observables.join("–"))
    }
}

/// A conditional `a → c` certified by `Pr(a ∧ ¬c) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conditional {
    antecedent: Proposition,
    consequent: Proposition,
    certificate: ExactScalar,
    context: Context,
}

impl Conditional {
    pub fn antecedent(&self) -> &Proposition {
        &self.antecedent
    }

    pub fn consequent(&self) -> &Proposition {
        &self.consequent
    }

    /// Always exactly zero.
    pub fn certificate(&self) -> &ExactScalar {
        &self.certificate
    }

    pub fn context(&self) -> &Context {
        &self.context
    }
}

impl fmt::Display for Conditional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {}", self.antecedent, self.consequent)
    }
}

/// Sampled joint outcome counts for one context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    pub observables: Vec<String>,
    pub draws: u64,
    /// Observed joint outcomes in product-basis order, with their counts.
    pub entries: Vec<(Vec<String>, u64)>,
}

impl FrequencyTable {
    pub fn count(&self, labels: &[&str]) -> u64 {
        self.entries
            .iter()
            .find(|(l, _)| l.iter().map(String::as_str).eq(labels.iter().copied()))
            .map_or(0, |(_, c)| *c)
    }

    pub fn frequency(&self, labels: &[&str]) -> f64 {
        if self.draws == 0 {
            return 0.0;
        }
        self.count(labels) as f64 / self.draws as f64
    }

    /// Combines tables drawn for the same context, e.g. from partitioned
    /// runs with distinct seeds. Entries keep the order of first appearance.
    pub fn merge(&self, other: &FrequencyTable) -> Result<FrequencyTable> {
        if self.observables != other.observables {
            return Err(PropositionError::InvalidContext(
                "cannot merge tables of different contexts".into(),
            ));
        }
        let mut entries = self.entries.clone();
        for (labels, count) in &other.entries {
            match entries.iter_mut().find(|(l, _)| l == labels) {
                Some((_, c)) => *c += count,
                None => entries.push((labels.clone(), *count)),
            }
        }
        Ok(FrequencyTable {
            observables: self.observables.clone(),
            draws: self.draws + other.draws,
            entries,
        })
    }
}

/// The observables of a model together with their aliases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registry {
    layout: Arc<SpaceLayout>,
    observables: Vec<Observable>,
}

impl Registry {
    pub fn new(layout: Arc<SpaceLayout>) -> Self {
        Registry {
            layout,
            observables: Vec::new(),
        }
    }

    pub fn layout(&self) -> &Arc<SpaceLayout> {
        &self.layout
    }

    pub fn observables(&self) -> &[Observable] {
        &self.observables
    }

    fn name_taken(&self, name: &str) -> bool {
        self.observables
            .iter()
            .any(|o| o.name == name || o.alias.as_ref().is_some_and(|a| a.name == name))
    }

    pub fn add_observable(&mut self, observable: Observable) -> Result<()> {
        if self.name_taken(&observable.name) {
            return Err(PropositionError::DuplicateName(observable.name));
        }
        if observable.outcomes[0].eigenvector.layout().as_ref() != self.layout.as_ref() {
            return Err(LinearError::LayoutMismatch(format!(
                "observable `{}` belongs to another layout",
                observable.name
            ))
            .into());
        }
        self.observables.push(observable);
        Ok(())
    }

    /// Registers `alias` for `observable`. The label map must be a bijection
    /// onto the observable's outcomes.
    pub fn add_alias(&mut self, observable: &str, alias: Alias) -> Result<()> {
        if self.name_taken(&alias.name) {
            return Err(PropositionError::DuplicateName(alias.name));
        }
        let invalid = |reason: String| PropositionError::InvalidAlias {
            name: alias.name.clone(),
            reason,
        };
        let target = self
            .observables
            .iter_mut()
            .find(|o| o.name == observable)
            .ok_or_else(|| PropositionError::UnknownAlias(observable.to_string()))?;
        if let Some(existing) = &target.alias {
            return Err(invalid(format!("`{observable}` already has alias `{}`", existing.name)));
        }
        if alias.labels.len() != target.outcomes.len() {
            return Err(invalid(format!(
                "{} labels for {} outcomes",
                alias.labels.len(),
                target.outcomes.len()
            )));
        }
        for (i, (from, to)) in alias.labels.iter().enumerate() {
            if alias.labels[..i].iter().any(|(f, t)| f == from || t == to) {
                return Err(invalid("label map is not a bijection".into()));
            }
            if !target.outcomes.iter().any(|o| &o.label == to) {
                return Err(invalid(format!("`{to}` is not an outcome of `{observable}`")));
            }
        }
        target.alias = Some(alias);
        Ok(())
    }

    /// Canonical observable by name.
    pub fn observable(&self, name: &str) -> Result<&Observable> {
        self.observables
            .iter()
            .find(|o| o.name == name)
            .ok_or_else(|| PropositionError::UnknownAlias(name.to_string()))
    }

    /// Canonical observable for an observable or alias name.
    pub fn resolve_observable(&self, name: &str) -> Result<&Observable> {
        self.observables
            .iter()
            .find(|o| o.name == name || o.alias.as_ref().is_some_and(|a| a.name == name))
            .ok_or_else(|| PropositionError::UnknownAlias(name.to_string()))
    }

    /// Maps an alias proposition (`C:t`) to its canonical form (`A:T`);
    /// canonical propositions are returned unchanged after validation.
    pub fn resolve_alias(&self, p: &Proposition) -> Result<Proposition> {
        let obs = self.resolve_observable(&p.observable)?;
        let label = if obs.name == p.observable {
            p.outcome.clone()
        } else {
            let alias = obs.alias.as_ref().expect("resolved through the alias");
            alias
                .labels
                .iter()
                .find(|(from, _)| from == &p.outcome)
                .map(|(_, to)| to.clone())
                .ok_or_else(|| PropositionError::UnknownOutcome {
                    observable: p.observable.clone(),
                    label: p.outcome.clone(),
                })?
        };
        obs.outcome(&label)?;
        Ok(Proposition::new(&obs.name, label))
    }

    /// Lifted eigenprojector of a proposition.
    pub fn projector(&self, p: &Proposition) -> Result<LinearOperator> {
        let p = self.resolve_alias(p)?;
        self.observable(&p.observable)?.eigenprojector(&p.outcome)
    }

    /// Whether every eigenprojector of `a` commutes with every one of `b`.
    pub fn observables_commute(&self, a: &str, b: &str) -> Result<bool> {
        let (oa, ob) = (self.resolve_observable(a)?, self.resolve_observable(b)?);
        if oa.name == ob.name {
            return Ok(true);
        }
        for pa in oa.eigenprojectors() {
            for pb in ob.eigenprojectors() {
                if !linear::commute(&pa, &pb)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn check_state(&self, state: &Ket) -> Result<()> {
        if state.layout().as_ref() != self.layout.as_ref() || state.group() != self.layout.all() {
            return Err(LinearError::LayoutMismatch("state is not a ket on the full layout".into()).into());
        }
        state.check_normalized()?;
        Ok(())
    }

    /// `⟨Ψ|P|Ψ⟩`.
    pub fn born(&self, state: &Ket, p: &Proposition) -> Result<ExactScalar> {
        self.joint(state, std::slice::from_ref(p))
    }

    /// Probability that the observable takes one of the listed outcomes.
    pub fn born_any(&self, state: &Ket, d: &Disjunction) -> Result<ExactScalar> {
        let mut total = ExactScalar::zero();
        for label in &d.outcomes {
            total += &self.born(state, &Proposition::new(&d.observable, label))?;
        }
        Ok(total)
    }

    /// `⟨Ψ|P₁P₂…Pₖ|Ψ⟩` for pairwise commuting lifted projectors.
    pub fn joint(&self, state: &Ket, props: &[Proposition]) -> Result<ExactScalar> {
        self.check_state(state)?;
        let resolved = props
            .iter()
            .map(|p| self.resolve_alias(p))
            .collect::<Result<Vec<_>>>()?;
        let projectors = resolved
            .iter()
            .map(|p| self.projector(p))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..projectors.len() {
            for j in i + 1..projectors.len() {
                if !linear::commute(&projectors[i], &projectors[j])? {
                    return Err(PropositionError::NonCommutingConjunction {
                        first: resolved[i].observable.clone(),
                        second: resolved[j].observable.clone(),
                    });
                }
            }
        }
        let mut v = state.clone();
        for p in projectors.iter().rev() {
            v = linear::apply(p, &v)?;
        }
        Ok(linear::inner(state, &v)?)
    }

    /// Negation of `p` within its observable.
    pub fn negate(&self, p: &Proposition) -> Result<Negation> {
        let canonical = self.resolve_alias(p)?;
        let obs = self.observable(&canonical.observable)?;
        let rest: Vec<String> = obs
            .labels()
            .filter(|l| *l != canonical.outcome)
            .map(str::to_string)
            .collect();
        Ok(match rest.as_slice() {
            [only] => Negation::Single(Proposition::new(&obs.name, only.clone())),
            _ => Negation::AnyOf(Disjunction {
                observable: obs.name.clone(),
                outcomes: rest,
            }),
        })
    }

    /// Negation of an already negated proposition.
    pub fn complement(&self, n: &Negation) -> Result<Negation> {
        match n {
            Negation::Single(p) => self.negate(p),
            Negation::AnyOf(d) => {
                let obs = self.resolve_observable(&d.observable)?;
                let rest: Vec<String> = obs
                    .labels()
                    .filter(|l| !d.outcomes.iter().any(|o| o == l))
                    .map(str::to_string)
                    .collect();
                Ok(match rest.as_slice() {
                    [only] => Negation::Single(Proposition::new(&obs.name, only.clone())),
                    _ => Negation::AnyOf(Disjunction {
                        observable: obs.name.clone(),
                        outcomes: rest,
                    }),
                })
            }
        }
    }

    /// Lifted projector `I − P` of the negation, as the sum of the remaining
    /// eigenprojectors.
    pub fn negation_projector(&self, n: &Negation) -> Result<LinearOperator> {
        let mut acc = LinearOperator::zero(self.layout.clone(), self.layout.all())?;
        for p in n.propositions() {
            acc = acc.add(&self.projector(&p)?)?;
        }
        Ok(acc)
    }

    /// Validates a pairwise commuting family of observables.
    pub fn context(&self, names: &[&str]) -> Result<Context> {
        let mut observables: Vec<String> = Vec::new();
        for name in names {
            let canonical = self.resolve_observable(name)?.name.clone();
            if !observables.contains(&canonical) {
                observables.push(canonical);
            }
        }
        if observables.is_empty() {
            return Err(PropositionError::InvalidContext("empty context".into()));
        }
        for i in 0..observables.len() {
            for j in i + 1..observables.len() {
                if !self.observables_commute(&observables[i], &observables[j])? {
                    return Err(PropositionError::InvalidContext(format!(
                        "`{}` and `{}` do not commute",
                        observables[i], observables[j]
                    )));
                }
            }
        }
        Ok(Context { observables })
    }

    /// Product eigenbasis of a context with one observable per subsystem.
    /// Joint labels follow the context's observable order; vectors are
    /// enumerated with the first observable as the slowest index.
    pub fn context_basis(&self, context: &Context) -> Result<Vec<(Vec<String>, Ket)>> {
        let observables = context
            .observables
            .iter()
            .map(|n| self.observable(n))
            .collect::<Result<Vec<_>>>()?;
        let mut covered: Vec<usize> = observables.iter().map(|o| o.subsystem).collect();
        covered.sort_unstable();
        if covered != self.layout.all() {
            return Err(PropositionError::InvalidContext(format!(
                "`{context}` does not pick exactly one observable per subsystem"
            )));
        }
        let mut basis: Vec<(Vec<String>, Option<Ket>)> = vec![(Vec::new(), None)];
        for obs in observables {
            let mut next = Vec::with_capacity(basis.len() * obs.outcomes.len());
            for (labels, ket) in &basis {
                for o in &obs.outcomes {
                    let mut l = labels.clone();
                    l.push(o.label.clone());
                    let k = match ket {
                        None => o.eigenvector.clone(),
                        Some(k) => linear::tensor(k, &o.eigenvector)?,
                    };
                    next.push((l, Some(k)));
                }
            }
            basis = next;
        }
        Ok(basis
            .into_iter()
            .map(|(l, k)| (l, k.expect("context is non-empty")))
            .collect())
    }

    /// Coefficients of `state` in the product eigenbasis of `context`.
    pub fn expand(&self, state: &Ket, context: &Context) -> Result<Vec<(Vec<String>, ExactScalar)>> {
        let basis = self.context_basis(context)?;
        let vectors: Vec<Ket> = basis.iter().map(|(_, k)| k.clone()).collect();
        let coeffs = linear::expand_in_basis(state, &vectors)?;
        Ok(basis.into_iter().map(|(l, _)| l).zip(coeffs).collect())
    }

    /// Certifies `a → c` by checking `Pr(a ∧ ¬c) = 0` exactly on the
    /// uncollapsed state.
    pub fn certify_conditional(&self, state: &Ket, a: &Proposition, c: &Proposition) -> Result<Conditional> {
        let a = self.resolve_alias(a)?;
        let c = self.resolve_alias(c)?;
        if !self.observables_commute(&a.observable, &c.observable)? {
            return Err(PropositionError::NonCommutingConjunction {
                first: a.observable,
                second: c.observable,
            });
        }
        let mut residual = ExactScalar::zero();
        for other in self.negate(&c)?.propositions() {
            residual += &self.joint(state, &[a.clone(), other])?;
        }
        if !residual.is_zero() {
            return Err(PropositionError::NotCertified {
                antecedent: a,
                consequent: c,
                probability: residual,
            });
        }
        let context = self.context(&[&a.observable, &c.observable])?;
        Ok(Conditional {
            antecedent: a,
            consequent: c,
            certificate: residual,
            context,
        })
    }

    /// Draws `n` joint outcomes of a spanning context from the exact Born
    /// distribution. Probabilities become floating point only here.
    pub fn sample(&self, state: &Ket, context: &Context, n: u64, seed: u64) -> Result<FrequencyTable> {
        let expansion = self.expand(state, context)?;
        let mut table = FrequencyTable {
            observables: context.observables.clone(),
            draws: n,
            entries: Vec::new(),
        };
        if n == 0 {
            return Ok(table);
        }
        let weights: Vec<f64> = expansion.iter().map(|(_, c)| c.square().to_f64()).collect();
        let dist = WeightedIndex::new(&weights)
            .map_err(|e| PropositionError::InvalidContext(format!("degenerate distribution: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = vec![0u64; weights.len()];
        for _ in 0..n {
            counts[dist.sample(&mut rng)] += 1;
        }
        table.entries = expansion
            .into_iter()
            .zip(counts)
            .filter(|(_, c)| *c > 0)
            .map(|((labels, _), c)| (labels, c))
            .collect();
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::builtin_scenario;

    fn setup() -> (Registry, Ket) {
        let s = builtin_scenario();
        (s.registry().clone(), s.state("Psi").unwrap().clone())
    }

    fn p(o: &str, l: &str) -> Proposition {
        Proposition::new(o, l)
    }

    fn r(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_ratio(n, d)
    }

    #[test]
    fn born_values() {
        let (reg, psi) = setup();
        assert_eq!(reg.born(&psi, &p("A", "T")).unwrap(), r(2, 3));
        assert_eq!(reg.born(&psi, &p("Y", "ok_Y")).unwrap(), r(1, 6));
        let everything = Disjunction {
            observable: "A".into(),
            outcomes: vec!["H".into(), "T".into()],
        };
        assert_eq!(reg.born_any(&psi, &everything).unwrap(), r(1, 1));
    }

    #[test]
    fn joint_values() {
        let (reg, psi) = setup();
        assert_eq!(reg.joint(&psi, &[p("X", "ok_X"), p("Y", "ok_Y")]).unwrap(), r(1, 12));
        assert!(reg.joint(&psi, &[p("X", "ok_X"), p("B", "down")]).unwrap().is_zero());
        assert!(reg.joint(&psi, &[p("B", "up"), p("A", "H")]).unwrap().is_zero());
        assert!(reg.joint(&psi, &[p("A", "T"), p("Y", "ok_Y")]).unwrap().is_zero());
        assert_eq!(
            reg.joint(&psi, &[p("X", "ok_X"), p("A", "H")]),
            Err(PropositionError::NonCommutingConjunction {
                first: "X".into(),
                second: "A".into()
            })
        );
    }

    #[test]
    fn empty_conjunction_is_certain() {
        let (reg, psi) = setup();
        assert!(reg.joint(&psi, &[]).unwrap().is_one());
    }

    #[test]
    fn negation() {
        let (reg, _) = setup();
        assert_eq!(reg.negate(&p("Y", "fail_Y")).unwrap(), Negation::Single(p("Y", "ok_Y")));
        assert_eq!(reg.negate(&p("B", "up")).unwrap(), Negation::Single(p("B", "down")));
        assert_eq!(reg.negate(&p("S_z", "+1/2")).unwrap(), Negation::Single(p("B", "down")));
        let once = reg.negate(&p("X", "ok_X")).unwrap();
        assert_eq!(reg.complement(&once).unwrap(), Negation::Single(p("X", "ok_X")));
        let id = LinearOperator::identity(reg.layout().clone(), reg.layout().all()).unwrap();
        let complement = id.sub(&reg.projector(&p("X", "ok_X")).unwrap()).unwrap();
        assert_eq!(reg.negation_projector(&once).unwrap(), complement);
    }

    #[test]
    fn aliases_resolve() {
        let (reg, _) = setup();
        assert_eq!(reg.resolve_alias(&p("C", "t")).unwrap(), p("A", "T"));
        assert_eq!(reg.resolve_alias(&p("S_z", "+1/2")).unwrap(), p("B", "up"));
        assert_eq!(reg.resolve_alias(&p("A", "T")).unwrap(), p("A", "T"));
        assert!(matches!(reg.resolve_alias(&p("Q", "x")), Err(PropositionError::UnknownAlias(_))));
        assert!(matches!(
            reg.resolve_alias(&p("C", "T")),
            Err(PropositionError::UnknownOutcome { .. })
        ));
    }

    #[test]
    fn certification() {
        let (reg, psi) = setup();
        for (a, c) in [
            (p("X", "ok_X"), p("B", "up")),
            (p("B", "up"), p("A", "T")),
            (p("A", "T"), p("Y", "fail_Y")),
        ] {
            let cond = reg.certify_conditional(&psi, &a, &c).unwrap();
            assert!(cond.certificate().is_zero());
        }
        match reg.certify_conditional(&psi, &p("X", "ok_X"), &p("Y", "fail_Y")) {
            Err(PropositionError::NotCertified { probability, .. }) => assert_eq!(probability, r(1, 12)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            reg.certify_conditional(&psi, &p("X", "ok_X"), &p("A", "T")),
            Err(PropositionError::NonCommutingConjunction { .. })
        ));
        let via_alias = reg.certify_conditional(&psi, &p("S_z", "+1/2"), &p("C", "t")).unwrap();
        assert_eq!(via_alias.antecedent(), &p("B", "up"));
        assert_eq!(via_alias.context().observables(), &["B".to_string(), "A".to_string()]);
    }

    #[test]
    fn contexts() {
        let (reg, _) = setup();
        assert!(reg.context(&["X", "Y"]).is_ok());
        assert!(matches!(reg.context(&["X", "A"]), Err(PropositionError::InvalidContext(_))));
        let partial = reg.context(&["X"]).unwrap();
        assert!(reg.context_basis(&partial).is_err());
    }

    #[test]
    fn sampling_basics() {
        let (reg, psi) = setup();
        let ctx = reg.context(&["X", "Y"]).unwrap();
        let empty = reg.sample(&psi, &ctx, 0, 7).unwrap();
        assert!(empty.entries.is_empty());
        let a = reg.sample(&psi, &ctx, 2000, 7).unwrap();
        let b = reg.sample(&psi, &ctx, 2000, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.entries.iter().map(|(_, c)| c).sum::<u64>(), 2000);
        let merged = a.merge(&reg.sample(&psi, &ctx, 1000, 8).unwrap()).unwrap();
        assert_eq!(merged.draws, 3000);
        let xb = reg.context(&["X", "B"]).unwrap();
        let never = reg.sample(&psi, &xb, 5000, 1).unwrap();
        assert_eq!(never.count(&["ok_X", "down"]), 0);
    }
}
