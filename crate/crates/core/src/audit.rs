//! Inference chains over certified conditionals, Boolean-embeddability
//! audits, and exhaustive hidden-variable enumeration.
//!
//! A chain's transitive conclusion is only *asserted* when every observable
//! it references commutes with every other one; otherwise it stays a
//! proposal and the chain is flagged as cross-context.

use std::fmt;

use thiserror::Error;

use crate::field::ExactScalar;
use crate::linear::{self, Ket, LinearOperator};
use crate::propositions::{Conditional, Proposition, PropositionError, Registry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("broken chain at link {link}: expected antecedent {expected}, found {found}")]
    BrokenChain {
        link: usize,
        expected: Proposition,
        found: Proposition,
    },
    #[error("an inference chain needs at least one conditional")]
    EmptyChain,
    #[error("invalid hidden-variable problem: {0}")]
    InvalidProblem(String),
    #[error("invalid eigenvalue labels: {0}")]
    EigenvalueLabels(String),
    #[error("incomplete scenario: {0}")]
    IncompleteScenario(String),
    #[error(transparent)]
    Proposition(#[from] PropositionError),
}

impl From<linear::LinearError> for AuditError {
    fn from(e: linear::LinearError) -> Self {
        AuditError::Proposition(e.into())
    }
}

type Result<T, E = AuditError> = std::result::Result<T, E>;

/// Certified conditionals linked consequent-to-antecedent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceChain {
    links: Vec<Conditional>,
}

impl InferenceChain {
    pub fn links(&self) -> &[Conditional] {
        &self.links
    }

    /// The proposed transitive conclusion: first antecedent → last consequent.
    pub fn conclusion(&self) -> (&Proposition, &Proposition) {
        (
            self.links[0].antecedent(),
            self.links[self.links.len() - 1].consequent(),
        )
    }

    /// Observables in order of first appearance.
    pub fn observables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for link in &self.links {
            for p in [link.antecedent(), link.consequent()] {
                if !out.contains(&p.observable) {
                    out.push(p.observable.clone());
                }
            }
        }
        out
    }
}

/// Links conditionals into a chain. Conditionals carry canonical
/// (alias-resolved) propositions, so the check is on canonical forms.
pub fn build_chain(conds: Vec<Conditional>) -> Result<InferenceChain> {
    if conds.is_empty() {
        return Err(AuditError::EmptyChain);
    }
    for (i, pair) in conds.windows(2).enumerate() {
        if pair[0].consequent() != pair[1].antecedent() {
            return Err(AuditError::BrokenChain {
                link: i + 1,
                expected: pair[0].consequent().clone(),
                found: pair[1].antecedent().clone(),
            });
        }
    }
    Ok(InferenceChain { links: conds })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConclusionStatus {
    /// All referenced observables commute: classical transitivity applies.
    Asserted,
    /// The chain conjoins propositions from incompatible contexts.
    CrossContext,
}

impl fmt::Display for ConclusionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConclusionStatus::Asserted => "asserted",
            ConclusionStatus::CrossContext => "cross-context",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub observables: Vec<String>,
    /// `commutation[i][j]`: do the eigenprojector families of observables
    /// `i` and `j` commute.
    pub commutation: Vec<Vec<bool>>,
    pub boolean_embeddable: bool,
    pub violating_pairs: Vec<(String, String)>,
    pub link_contexts: Vec<Vec<String>>,
    pub conclusion_context: Vec<String>,
    /// Over `link_contexts` followed by `conclusion_context`.
    pub context_compatibility: Vec<Vec<bool>>,
    pub conclusion: (Proposition, Proposition),
    pub conclusion_status: ConclusionStatus,
}

impl AuditReport {
    /// Link contexts followed by the conclusion context, matching the rows of
    /// `context_compatibility`.
    pub fn contexts(&self) -> Vec<&[String]> {
        self.link_contexts
            .iter()
            .map(Vec::as_slice)
            .chain(std::iter::once(self.conclusion_context.as_slice()))
            .collect()
    }

    pub fn incompatible_context_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.context_compatibility.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.context_compatibility[i][j])
            .collect()
    }
}

/// `Σ_k λ_k Π_k` over the joint outcomes `k` of the given observables, where
/// `Π_k` is the product of the members' lifted eigenprojectors. For a context
/// with one observable per subsystem this is a nondegenerate observable whose
/// eigenvectors are the context's product basis.
pub fn context_operator(registry: &Registry, observables: &[String], eigenvalues: &[i64]) -> Result<LinearOperator> {
    let members = observables
        .iter()
        .map(|n| registry.observable(n))
        .collect::<Result<Vec<_>, _>>()?;
    let families: Vec<Vec<LinearOperator>> = members.iter().map(|o| o.eigenprojectors()).collect();
    let joint_count: usize = families.iter().map(Vec::len).product();
    if eigenvalues.len() != joint_count {
        return Err(AuditError::EigenvalueLabels(format!(
            "{} eigenvalues for {joint_count} joint outcomes",
            eigenvalues.len()
        )));
    }
    for (i, v) in eigenvalues.iter().enumerate() {
        if eigenvalues[..i].contains(v) {
            return Err(AuditError::EigenvalueLabels(format!("eigenvalue {v} repeated")));
        }
    }
    let layout = registry.layout();
    let mut total = LinearOperator::zero(layout.clone(), layout.all())?;
    for (k, &lambda) in eigenvalues.iter().enumerate() {
        // first member is the slowest index
        let mut rem = k;
        let mut digits = vec![0; families.len()];
        for (slot, fam) in families.iter().enumerate().rev() {
            digits[slot] = rem % fam.len();
            rem /= fam.len();
        }
        let mut product = LinearOperator::identity(layout.clone(), layout.all())?;
        for (fam, &d) in families.iter().zip(&digits) {
            product = product.compose(&fam[d])?;
        }
        total = total.add(&product.scale(&ExactScalar::from_integer(lambda)))?;
    }
    Ok(total)
}

fn joint_outcome_count(registry: &Registry, observables: &[String]) -> Result<usize> {
    observables.iter().try_fold(1usize, |acc, n| {
        Ok(acc * registry.observable(n)?.outcomes().len())
    })
}

/// Audit with context operators materialized using eigenvalues `1..=n`.
pub fn audit(registry: &Registry, chain: &InferenceChain) -> Result<AuditReport> {
    audit_with_labels(registry, chain, |_, n| (1..=n as i64).collect())
}

/// Audit with caller-chosen distinct eigenvalues for each context operator;
/// `labels(context_index, joint_outcome_count)` must return distinct values.
pub fn audit_with_labels(
    registry: &Registry,
    chain: &InferenceChain,
    labels: impl Fn(usize, usize) -> Vec<i64>,
) -> Result<AuditReport> {
    let observables = chain.observables();
    let n = observables.len();
    let mut commutation = vec![vec![true; n]; n];
    let mut violating_pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let ok = registry.observables_commute(&observables[i], &observables[j])?;
            commutation[i][j] = ok;
            commutation[j][i] = ok;
            if !ok {
                violating_pairs.push((observables[i].clone(), observables[j].clone()));
            }
        }
    }
    let boolean_embeddable = violating_pairs.is_empty();

    let link_contexts: Vec<Vec<String>> = chain
        .links()
        .iter()
        .map(|l| l.context().observables().to_vec())
        .collect();
    let (a, c) = chain.conclusion();
    let mut conclusion_context = vec![a.observable.clone()];
    if c.observable != a.observable {
        conclusion_context.push(c.observable.clone());
    }

    let all_contexts: Vec<&Vec<String>> = link_contexts.iter().chain([&conclusion_context]).collect();
    let operators = all_contexts
        .iter()
        .enumerate()
        .map(|(i, ctx)| {
            let count = joint_outcome_count(registry, ctx)?;
            context_operator(registry, ctx, &labels(i, count))
        })
        .collect::<Result<Vec<_>>>()?;
    let m = operators.len();
    let mut context_compatibility = vec![vec![true; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let ok = linear::commute(&operators[i], &operators[j])?;
            context_compatibility[i][j] = ok;
            context_compatibility[j][i] = ok;
        }
    }

    Ok(AuditReport {
        observables,
        commutation,
        boolean_embeddable,
        violating_pairs,
        link_contexts,
        conclusion_context,
        context_compatibility,
        conclusion: (a.clone(), c.clone()),
        conclusion_status: if boolean_embeddable {
            ConclusionStatus::Asserted
        } else {
            ConclusionStatus::CrossContext
        },
    })
}

/// Largest assignment space `hv_enumerate` accepts.
pub const MAX_ASSIGNMENTS: u64 = 1 << 20;

/// Global value assignments to finitely many observables, with forbidden
/// partial assignments and a target event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HvProblem {
    variables: Vec<(String, Vec<String>)>,
    forbidden: Vec<Vec<(String, String)>>,
    target: Vec<(String, String)>,
}

impl HvProblem {
    pub fn new(
        variables: Vec<(String, Vec<String>)>,
        forbidden: Vec<Vec<(String, String)>>,
        target: Vec<(String, String)>,
    ) -> Result<Self> {
        let mut size = 1u64;
        for (i, (name, values)) in variables.iter().enumerate() {
            if variables[..i].iter().any(|(n, _)| n == name) {
                return Err(AuditError::InvalidProblem(format!("duplicate variable `{name}`")));
            }
            if values.is_empty() {
                return Err(AuditError::InvalidProblem(format!("`{name}` has no values")));
            }
            size = size.saturating_mul(values.len() as u64);
        }
        if size > MAX_ASSIGNMENTS {
            return Err(AuditError::InvalidProblem(format!(
                "{size} assignments exceed the limit of {MAX_ASSIGNMENTS}"
            )));
        }
        let problem = HvProblem {
            variables,
            forbidden,
            target,
        };
        for (var, value) in problem.forbidden.iter().flatten().chain(&problem.target) {
            problem.locate(var, value)?;
        }
        Ok(problem)
    }

    /// Variables are the chain's observables plus any target observable;
    /// each link `a → c` forbids `a` together with every other outcome of `c`.
    pub fn from_chain(registry: &Registry, chain: &InferenceChain, target: &[Proposition]) -> Result<Self> {
        let target = target
            .iter()
            .map(|p| registry.resolve_alias(p))
            .collect::<Result<Vec<_>, _>>()?;
        let mut names = chain.observables();
        for p in &target {
            if !names.contains(&p.observable) {
                names.push(p.observable.clone());
            }
        }
        let variables = names
            .iter()
            .map(|n| {
                let obs = registry.observable(n)?;
                Ok((n.clone(), obs.labels().map(str::to_string).collect()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut forbidden = Vec::new();
        for link in chain.links() {
            let a = link.antecedent();
            for other in registry.negate(link.consequent())?.propositions() {
                forbidden.push(vec![
                    (a.observable.clone(), a.outcome.clone()),
                    (other.observable, other.outcome),
                ]);
            }
        }
        let target = target.into_iter().map(|p| (p.observable, p.outcome)).collect();
        HvProblem::new(variables, forbidden, target)
    }

    pub fn variables(&self) -> &[(String, Vec<String>)] {
        &self.variables
    }

    pub fn forbidden(&self) -> &[Vec<(String, String)>] {
        &self.forbidden
    }

    pub fn target(&self) -> &[(String, String)] {
        &self.target
    }

    pub fn space_size(&self) -> u64 {
        self.variables.iter().map(|(_, v)| v.len() as u64).product()
    }

    fn locate(&self, var: &str, value: &str) -> Result<(usize, usize)> {
        let (i, (_, values)) = self
            .variables
            .iter()
            .enumerate()
            .find(|(_, (n, _))| n == var)
            .ok_or_else(|| AuditError::InvalidProblem(format!("unknown variable `{var}`")))?;
        let j = values
            .iter()
            .position(|v| v == value)
            .ok_or_else(|| AuditError::InvalidProblem(format!("`{value}` is not a value of `{var}`")))?;
        Ok((i, j))
    }

    fn indexed(&self, constraint: &[(String, String)]) -> Vec<(usize, usize)> {
        constraint
            .iter()
            .map(|(v, x)| self.locate(v, x).expect("validated on construction"))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HvResult {
    pub total: u64,
    pub satisfying: u64,
    pub target_satisfying: u64,
    /// Satisfying assignments, values listed in variable order.
    pub satisfying_assignments: Vec<Vec<String>>,
    pub target_assignments: Vec<Vec<String>>,
}

/// Exhaustive enumeration of every global assignment, first variable
/// slowest.
pub fn hv_enumerate(problem: &HvProblem) -> HvResult {
    let forbidden: Vec<Vec<(usize, usize)>> = problem.forbidden.iter().map(|c| problem.indexed(c)).collect();
    let target = problem.indexed(&problem.target);
    let radices: Vec<usize> = problem.variables.iter().map(|(_, v)| v.len()).collect();
    let total = problem.space_size();
    let mut result = HvResult {
        total,
        satisfying: 0,
        target_satisfying: 0,
        satisfying_assignments: Vec::new(),
        target_assignments: Vec::new(),
    };
    let mut digits = vec![0usize; radices.len()];
    for _ in 0..total {
        let holds = |c: &[(usize, usize)]| c.iter().all(|&(v, x)| digits[v] == x);
        if !forbidden.iter().any(|c| holds(c)) {
            let named: Vec<String> = digits
                .iter()
                .zip(&problem.variables)
                .map(|(&d, (_, values))| values[d].clone())
                .collect();
            result.satisfying += 1;
            if holds(&target) {
                result.target_satisfying += 1;
                result.target_assignments.push(named.clone());
            }
            result.satisfying_assignments.push(named);
        }
        for slot in (0..digits.len()).rev() {
            digits[slot] += 1;
            if digits[slot] < radices[slot] {
                break;
            }
            digits[slot] = 0;
        }
    }
    result
}

/// How the probability-1 assertion rule classifies a probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assertability {
    Asserted,
    Denied,
    /// Strictly between 0 and 1: the rule neither asserts nor denies.
    Undetermined,
}

impl Assertability {
    pub fn of(p: &ExactScalar) -> Self {
        if p.is_one() {
            Assertability::Asserted
        } else if p.is_zero() {
            Assertability::Denied
        } else {
            Assertability::Undetermined
        }
    }
}

impl fmt::Display for Assertability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Assertability::Asserted => "asserted",
            Assertability::Denied => "denied",
            Assertability::Undetermined => "undetermined",
        })
    }
}

/// Quantum probability of a target event set against hidden-variable
/// satisfiability of the same event under the chain's certificates, plus the
/// audit of the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContradictionReport {
    pub chain: InferenceChain,
    pub target: Vec<Proposition>,
    pub quantum_probability: ExactScalar,
    pub assertability: Assertability,
    pub hv: HvResult,
    pub audit: AuditReport,
    /// Every satisfying assignment with the conclusion's antecedent value
    /// also has its consequent value.
    pub conclusion_holds_classically: bool,
    pub contradiction: bool,
    pub verdict: String,
}

pub fn contradiction_report(
    registry: &Registry,
    state: &Ket,
    chain: &InferenceChain,
    target: &[Proposition],
) -> Result<ContradictionReport> {
    if target.is_empty() {
        return Err(AuditError::IncompleteScenario("empty target event".into()));
    }
    let target = target
        .iter()
        .map(|p| registry.resolve_alias(p))
        .collect::<Result<Vec<_>, _>>()?;
    let quantum_probability = registry.joint(state, &target)?;
    let problem = HvProblem::from_chain(registry, chain, &target)?;
    let hv = hv_enumerate(&problem);
    let audit = audit(registry, chain)?;

    let (a, c) = chain.conclusion();
    let col = |name: &str| problem.variables.iter().position(|(n, _)| n == name).expect("chain observable");
    let (ia, ic) = (col(&a.observable), col(&c.observable));
    let conclusion_holds_classically = hv
        .satisfying_assignments
        .iter()
        .filter(|row| row[ia] == a.outcome)
        .all(|row| row[ic] == c.outcome);

    let contradiction = quantum_probability.is_positive() && hv.target_satisfying == 0;
    let verdict = verdict_text(&target, &quantum_probability, &hv, &audit, contradiction);
    Ok(ContradictionReport {
        chain: chain.clone(),
        target,
        assertability: Assertability::of(&quantum_probability),
        quantum_probability,
        hv,
        audit,
        conclusion_holds_classically,
        contradiction,
        verdict,
    })
}

fn verdict_text(
    target: &[Proposition],
    probability: &ExactScalar,
    hv: &HvResult,
    audit: &AuditReport,
    contradiction: bool,
) -> String {
    let event = target.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ∧ ");
    let (a, c) = &audit.conclusion;
    let pairs = audit
        .violating_pairs
        .iter()
        .map(|(x, y)| format!("({x}, {y})"))
        .collect::<Vec<_>>()
        .join(", ");
    match (contradiction, audit.boolean_embeddable) {
        (true, false) => format!(
            "Contradiction: Pr({event}) = {probability} > 0, but none of the {} hidden-variable \
             assignments allowed by the chain's zero-probability certificates realizes {event}. \
             The transitive conclusion {a} → {c} conjoins propositions from incompatible contexts; \
             non-commuting observable pairs: {pairs}. Either classical transitivity is not licensed \
             across these contexts and the step is illegitimate, or the argument rederives a \
             Kochen–Specker-type obstruction to noncontextual value assignments.",
            hv.satisfying
        ),
        (true, true) => format!(
            "Contradiction inside a single Boolean context: Pr({event}) = {probability} > 0 while \
             no admissible assignment realizes {event}. All referenced observables commute, so \
             this is not a cross-context effect."
        ),
        (false, embeddable) => {
            let mut s = if probability.is_zero() {
                format!("No contradiction: Pr({event}) = 0.")
            } else {
                format!(
                    "No contradiction: Pr({event}) = {probability} and {} admissible assignment(s) realize it.",
                    hv.target_satisfying
                )
            };
            if embeddable {
                s.push_str(&format!(" The conclusion {a} → {c} is asserted within one Boolean context."));
            } else {
                s.push_str(&format!(
                    " The conclusion {a} → {c} remains a proposal: the chain crosses contexts ({pairs})."
                ));
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::builtin_scenario;

    fn p(o: &str, l: &str) -> Proposition {
        Proposition::new(o, l)
    }

    fn chain_fixture() -> (Registry, Ket, InferenceChain) {
        let s = builtin_scenario();
        let reg = s.registry().clone();
        let psi = s.state("Psi").unwrap().clone();
        let links = [
            (p("X", "ok_X"), p("B", "up")),
            (p("B", "up"), p("A", "T")),
            (p("A", "T"), p("Y", "fail_Y")),
        ]
        .iter()
        .map(|(a, c)| reg.certify_conditional(&psi, a, c).unwrap())
        .collect();
        let chain = build_chain(links).unwrap();
        (reg, psi, chain)
    }

    #[test]
    fn chain_conclusion() {
        let (_, _, chain) = chain_fixture();
        assert_eq!(chain.conclusion(), (&p("X", "ok_X"), &p("Y", "fail_Y")));
        assert_eq!(chain.observables(), ["X", "B", "A", "Y"]);
    }

    #[test]
    fn unit_and_broken_chains() {
        let (reg, psi, chain) = chain_fixture();
        let first = chain.links()[0].clone();
        let unit = build_chain(vec![first.clone()]).unwrap();
        assert_eq!(unit.conclusion(), (first.antecedent(), first.consequent()));
        let last = reg.certify_conditional(&psi, &p("A", "T"), &p("Y", "fail_Y")).unwrap();
        assert_eq!(
            build_chain(vec![first, last]),
            Err(AuditError::BrokenChain {
                link: 1,
                expected: p("B", "up"),
                found: p("A", "T"),
            })
        );
        assert_eq!(build_chain(vec![]), Err(AuditError::EmptyChain));
    }

    #[test]
    fn builtin_audit() {
        let (reg, _, chain) = chain_fixture();
        let report = audit(&reg, &chain).unwrap();
        assert!(!report.boolean_embeddable);
        assert_eq!(
            report.violating_pairs,
            vec![("X".to_string(), "A".to_string()), ("B".to_string(), "Y".to_string())]
        );
        assert_eq!(report.conclusion_context, ["X", "Y"]);
        assert_eq!(report.incompatible_context_pairs().len(), 6);
        assert_eq!(report.conclusion_status, ConclusionStatus::CrossContext);
    }

    #[test]
    fn eigenvalue_labels_are_checked() {
        let (reg, _, chain) = chain_fixture();
        assert!(matches!(
            audit_with_labels(&reg, &chain, |_, n| vec![1; n]),
            Err(AuditError::EigenvalueLabels(_))
        ));
        assert!(matches!(
            audit_with_labels(&reg, &chain, |_, _| vec![1, 2]),
            Err(AuditError::EigenvalueLabels(_))
        ));
    }

    #[test]
    fn builtin_hidden_variables() {
        let (reg, _, chain) = chain_fixture();
        let okok = HvProblem::from_chain(&reg, &chain, &[p("X", "ok_X"), p("Y", "ok_Y")]).unwrap();
        let r = hv_enumerate(&okok);
        assert_eq!((r.total, r.satisfying, r.target_satisfying), (16, 5, 0));
        let ff = HvProblem::from_chain(&reg, &chain, &[p("X", "fail_X"), p("Y", "fail_Y")]).unwrap();
        assert_eq!(hv_enumerate(&ff).target_satisfying, 3);
    }

    #[test]
    fn vacuous_constraints() {
        let vars = ["X", "B", "A", "Y"]
            .iter()
            .map(|n| (n.to_string(), vec!["0".to_string(), "1".to_string()]))
            .collect();
        let r = hv_enumerate(&HvProblem::new(vars, vec![], vec![]).unwrap());
        assert_eq!((r.total, r.satisfying, r.target_satisfying), (16, 16, 16));
    }

    #[test]
    fn invalid_problems() {
        let vars = vec![("X".to_string(), vec!["0".to_string()])];
        assert!(HvProblem::new(vars.clone(), vec![vec![("Z".into(), "0".into())]], vec![]).is_err());
        assert!(HvProblem::new(vars.clone(), vec![], vec![("X".into(), "2".into())]).is_err());
        assert!(HvProblem::new(vec![("X".into(), vec![])], vec![], vec![]).is_err());
        let huge = (0..21).map(|i| (format!("v{i}"), vec!["0".into(), "1".into()])).collect();
        assert!(HvProblem::new(huge, vec![], vec![]).is_err());
    }

    #[test]
    fn builtin_contradiction() {
        let (reg, psi, chain) = chain_fixture();
        let r = contradiction_report(&reg, &psi, &chain, &[p("X", "ok_X"), p("Y", "ok_Y")]).unwrap();
        assert_eq!(r.quantum_probability, ExactScalar::from_ratio(1, 12));
        assert_eq!(r.assertability, Assertability::Undetermined);
        assert!(r.contradiction);
        assert!(r.conclusion_holds_classically);
        assert!(r.verdict.contains("Kochen–Specker"));

        let ff = contradiction_report(&reg, &psi, &chain, &[p("X", "fail_X"), p("Y", "fail_Y")]).unwrap();
        assert_eq!(ff.quantum_probability, ExactScalar::from_ratio(3, 4));
        assert_eq!(ff.hv.target_satisfying, 3);
        assert!(!ff.contradiction);
    }
}
