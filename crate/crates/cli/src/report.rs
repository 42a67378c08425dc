//! JSON and text reports. Exact values travel as canonical strings
//! (`a + b*sqrt(2) + c*sqrt(3) + d*sqrt(6)`, zero terms omitted) with a
//! `*_decimal` companion rounded to `--decimals` places.

use std::fmt::Write;

use qlogic::audit::{AuditReport, ContradictionReport, HvProblem, HvResult};
use qlogic::field::ExactScalar;
use qlogic::propositions::{FrequencyTable, Proposition};
use qlogic::scenario::{self, Scenario};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    /// Arguments after the program name.
    pub command: Vec<String>,
    /// `sha256:` of the canonical serialization of the scenario.
    pub scenario_digest: String,
    pub payload: Payload,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Demo(Demo),
    Probability(Probability),
    Expansion(Expansion),
    Audit(Audit),
    Hv(Hv),
    Sample(Sample),
    Validate(Validate),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub antecedent: String,
    pub consequent: String,
    pub context: Vec<String>,
    pub certificate: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Demo {
    pub state: String,
    pub chain: String,
    pub links: Vec<Link>,
    pub target: Vec<String>,
    pub quantum_prob: String,
    pub quantum_prob_decimal: String,
    pub assertability: String,
    pub hv_variables: Vec<String>,
    pub hv_total: u64,
    pub hv_satisfying: u64,
    pub hv_target: u64,
    pub hv_satisfying_assignments: Vec<Vec<String>>,
    pub boolean_embeddable: bool,
    pub violating_pairs: Vec<[String; 2]>,
    pub contexts: Vec<Vec<String>>,
    pub context_compatibility: Vec<Vec<bool>>,
    pub conclusion: [String; 2],
    pub conclusion_status: String,
    pub conclusion_holds_classically: bool,
    pub contradiction: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probability {
    pub query: String,
    pub state: String,
    pub propositions: Vec<String>,
    pub probability: String,
    pub probability_decimal: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionEntry {
    pub labels: Vec<String>,
    pub coefficient: String,
    pub coefficient_decimal: String,
    pub probability: String,
    pub probability_decimal: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    pub query: String,
    pub state: String,
    pub observables: Vec<String>,
    pub entries: Vec<ExpansionEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Audit {
    pub chain: String,
    pub state: String,
    pub links: Vec<Link>,
    pub observables: Vec<String>,
    pub commutation: Vec<Vec<bool>>,
    pub boolean_embeddable: bool,
    pub violating_pairs: Vec<[String; 2]>,
    pub contexts: Vec<Vec<String>>,
    pub context_compatibility: Vec<Vec<bool>>,
    pub conclusion: [String; 2],
    pub conclusion_status: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hv {
    pub query: String,
    pub chain: String,
    pub state: String,
    pub variables: Vec<String>,
    pub forbidden: Vec<Vec<String>>,
    pub target: Vec<String>,
    pub total: u64,
    pub satisfying: u64,
    pub target_satisfying: u64,
    pub satisfying_assignments: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleEntry {
    pub labels: Vec<String>,
    pub count: u64,
    pub frequency: String,
    pub born: String,
    pub born_decimal: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub state: String,
    pub observables: Vec<String>,
    pub n: u64,
    pub seed: u64,
    pub entries: Vec<SampleEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validate {
    pub spaces: u64,
    pub states: u64,
    pub observables: u64,
    pub chains: u64,
    pub queries: u64,
    pub diagnostics: Vec<String>,
}

pub fn digest(s: &Scenario) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(scenario::serialize(s).as_bytes())))
}

pub fn exact(x: &ExactScalar) -> String {
    x.to_canonical_string()
}

pub fn decimal(x: &ExactScalar, digits: usize) -> String {
    x.to_decimal_string(digits)
}

fn prop(p: &Proposition) -> String {
    p.to_string()
}

fn pairs(p: &[(String, String)]) -> Vec<[String; 2]> {
    p.iter().map(|(a, b)| [a.clone(), b.clone()]).collect()
}

fn links(chain: &qlogic::audit::InferenceChain) -> Vec<Link> {
    chain
        .links()
        .iter()
        .map(|l| Link {
            antecedent: prop(l.antecedent()),
            consequent: prop(l.consequent()),
            context: l.context().observables().to_vec(),
            certificate: exact(l.certificate()),
        })
        .collect()
}

pub fn demo(state: &str, chain: &str, r: &ContradictionReport, digits: usize) -> Demo {
    let (a, c) = r.chain.conclusion();
    let mut hv_variables = r.chain.observables();
    for p in &r.target {
        if !hv_variables.contains(&p.observable) {
            hv_variables.push(p.observable.clone());
        }
    }
    Demo {
        state: state.into(),
        chain: chain.into(),
        links: links(&r.chain),
        target: r.target.iter().map(prop).collect(),
        quantum_prob: exact(&r.quantum_probability),
        quantum_prob_decimal: decimal(&r.quantum_probability, digits),
        assertability: r.assertability.to_string(),
        hv_variables,
        hv_total: r.hv.total,
        hv_satisfying: r.hv.satisfying,
        hv_target: r.hv.target_satisfying,
        hv_satisfying_assignments: r.hv.satisfying_assignments.clone(),
        boolean_embeddable: r.audit.boolean_embeddable,
        violating_pairs: pairs(&r.audit.violating_pairs),
        contexts: r.audit.contexts().iter().map(|c| c.to_vec()).collect(),
        context_compatibility: r.audit.context_compatibility.clone(),
        conclusion: [prop(a), prop(c)],
        conclusion_status: r.audit.conclusion_status.to_string(),
        conclusion_holds_classically: r.conclusion_holds_classically,
        contradiction: r.contradiction,
    }
}

pub fn audit(chain: &str, state: &str, inference: &qlogic::audit::InferenceChain, r: &AuditReport) -> Audit {
    Audit {
        chain: chain.into(),
        state: state.into(),
        links: links(inference),
        observables: r.observables.clone(),
        commutation: r.commutation.clone(),
        boolean_embeddable: r.boolean_embeddable,
        violating_pairs: pairs(&r.violating_pairs),
        contexts: r.contexts().iter().map(|c| c.to_vec()).collect(),
        context_compatibility: r.context_compatibility.clone(),
        conclusion: [prop(&r.conclusion.0), prop(&r.conclusion.1)],
        conclusion_status: r.conclusion_status.to_string(),
    }
}

pub fn hv(query: &str, chain: &str, state: &str, problem: &HvProblem, result: &HvResult) -> Hv {
    let lit = |(v, x): &(String, String)| format!("{v}:{x}");
    Hv {
        query: query.into(),
        chain: chain.into(),
        state: state.into(),
        variables: problem.variables().iter().map(|(n, _)| n.clone()).collect(),
        forbidden: problem.forbidden().iter().map(|c| c.iter().map(lit).collect()).collect(),
        target: problem.target().iter().map(lit).collect(),
        total: result.total,
        satisfying: result.satisfying,
        target_satisfying: result.target_satisfying,
        satisfying_assignments: result.satisfying_assignments.clone(),
    }
}

pub fn expansion(
    query: &str,
    state: &str,
    observables: &[String],
    entries: &[(Vec<String>, ExactScalar)],
    digits: usize,
) -> Expansion {
    Expansion {
        query: query.into(),
        state: state.into(),
        observables: observables.to_vec(),
        entries: entries
            .iter()
            .map(|(labels, c)| {
                let p = c.square();
                ExpansionEntry {
                    labels: labels.clone(),
                    coefficient: exact(c),
                    coefficient_decimal: decimal(c, digits),
                    probability: exact(&p),
                    probability_decimal: decimal(&p, digits),
                }
            })
            .collect(),
    }
}

/// Every joint outcome of the context, with its observed count (possibly 0)
/// next to the exact Born weight.
pub fn sample(
    state: &str,
    table: &FrequencyTable,
    born: &[(Vec<String>, ExactScalar)],
    seed: u64,
    digits: usize,
) -> Sample {
    Sample {
        state: state.into(),
        observables: table.observables.clone(),
        n: table.draws,
        seed,
        entries: born
            .iter()
            .map(|(labels, c)| {
                let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
                let count = table.count(&refs);
                let p = c.square();
                SampleEntry {
                    labels: labels.clone(),
                    count,
                    frequency: frequency(count, table.draws, digits),
                    born: exact(&p),
                    born_decimal: decimal(&p, digits),
                }
            })
            .collect(),
    }
}

/// `count / n` rounded half-up to `digits` places, computed in integers.
fn frequency(count: u64, n: u64, digits: usize) -> String {
    let as_i64 = |v: u64| i64::try_from(v).expect("draw counts are capped well below i64::MAX");
    decimal(&ExactScalar::from_ratio(as_i64(count), as_i64(n.max(1))), digits)
}

fn join(items: &[String]) -> String {
    items.join(", ")
}

fn table(out: &mut String, header: &[String], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let _ = writeln!(out, "  {}", line(header));
    for row in rows {
        let _ = writeln!(out, "  {}", line(row));
    }
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn write_links(out: &mut String, links: &[Link]) {
    for (i, l) in links.iter().enumerate() {
        let _ = writeln!(
            out,
            "  {}. {} → {}  [context {}, Pr(antecedent ∧ ¬consequent) = {}]",
            i + 1,
            l.antecedent,
            l.consequent,
            l.context.join("–"),
            l.certificate
        );
    }
}

fn write_contexts(out: &mut String, contexts: &[Vec<String>], compat: &[Vec<bool>]) {
    let names: Vec<String> = contexts.iter().map(|c| c.join("–")).collect();
    let header: Vec<String> = std::iter::once(String::new()).chain(names.iter().cloned()).collect();
    let rows: Vec<Vec<String>> = names
        .iter()
        .zip(compat)
        .map(|(n, row)| {
            std::iter::once(n.clone())
                .chain(row.iter().map(|&b| if b { "commute" } else { "clash" }.to_string()))
                .collect()
        })
        .collect();
    table(out, &header, &rows);
}

fn write_pairs(pairs: &[[String; 2]]) -> String {
    if pairs.is_empty() {
        "none".into()
    } else {
        pairs.iter().map(|[a, b]| format!("({a}, {b})")).collect::<Vec<_>>().join(", ")
    }
}

/// Human-readable rendering; carries every number present in the JSON form.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "command: {}", r.command.join(" "));
    let _ = writeln!(out, "scenario: {}", r.scenario_digest);
    match &r.payload {
        Payload::Demo(d) => {
            let _ = writeln!(out, "state {}, chain {}:", d.state, d.chain);
            write_links(&mut out, &d.links);
            let _ = writeln!(out, "conclusion: {} → {} ({})", d.conclusion[0], d.conclusion[1], d.conclusion_status);
            let _ = writeln!(
                out,
                "Pr({}) = {} ≈ {} ({})",
                d.target.join(" ∧ "),
                d.quantum_prob,
                d.quantum_prob_decimal,
                d.assertability
            );
            let _ = writeln!(out, "hidden variables over ({}):", join(&d.hv_variables));
            let _ = writeln!(out, "  total assignments: {}", d.hv_total);
            let _ = writeln!(out, "  satisfying the chain: {}", d.hv_satisfying);
            let _ = writeln!(out, "  satisfying the chain and the target: {}", d.hv_target);
            table(&mut out, &d.hv_variables, &d.hv_satisfying_assignments);
            let _ = writeln!(out, "boolean embeddable: {}", d.boolean_embeddable);
            let _ = writeln!(out, "violating pairs: {}", write_pairs(&d.violating_pairs));
            let _ = writeln!(out, "context compatibility:");
            write_contexts(&mut out, &d.contexts, &d.context_compatibility);
            let _ = writeln!(out, "conclusion holds classically: {}", d.conclusion_holds_classically);
            let _ = writeln!(out, "contradiction: {}", d.contradiction);
        }
        Payload::Probability(p) => {
            let _ = writeln!(out, "query {} on state {}", p.query, p.state);
            let _ = writeln!(
                out,
                "Pr({}) = {} ≈ {}",
                p.propositions.join(" ∧ "),
                p.probability,
                p.probability_decimal
            );
        }
        Payload::Expansion(e) => {
            let _ = writeln!(out, "query {}: state {} in the {} basis", e.query, e.state, e.observables.join("–"));
            let mut header = e.observables.clone();
            header.extend(strings(&["coefficient", "≈", "probability", "≈"]));
            let rows: Vec<Vec<String>> = e
                .entries
                .iter()
                .map(|x| {
                    let mut row = x.labels.clone();
                    row.extend([
                        x.coefficient.clone(),
                        x.coefficient_decimal.clone(),
                        x.probability.clone(),
                        x.probability_decimal.clone(),
                    ]);
                    row
                })
                .collect();
            table(&mut out, &header, &rows);
        }
        Payload::Audit(a) => {
            let _ = writeln!(out, "chain {} certified on state {}:", a.chain, a.state);
            write_links(&mut out, &a.links);
            let _ = writeln!(out, "conclusion: {} → {} ({})", a.conclusion[0], a.conclusion[1], a.conclusion_status);
            let _ = writeln!(out, "observable commutation:");
            let header: Vec<String> = std::iter::once(String::new()).chain(a.observables.iter().cloned()).collect();
            let rows: Vec<Vec<String>> = a
                .observables
                .iter()
                .zip(&a.commutation)
                .map(|(n, row)| {
                    std::iter::once(n.clone())
                        .chain(row.iter().map(|&b| if b { "yes" } else { "no" }.to_string()))
                        .collect()
                })
                .collect();
            table(&mut out, &header, &rows);
            let _ = writeln!(out, "boolean embeddable: {}", a.boolean_embeddable);
            let _ = writeln!(out, "violating pairs: {}", write_pairs(&a.violating_pairs));
            let _ = writeln!(out, "context compatibility:");
            write_contexts(&mut out, &a.contexts, &a.context_compatibility);
        }
        Payload::Hv(h) => {
            let _ = writeln!(out, "query {}: chain {} certified on state {}", h.query, h.chain, h.state);
            for f in &h.forbidden {
                let _ = writeln!(out, "  forbidden: {}", f.join(" ∧ "));
            }
            let _ = writeln!(out, "target: {}", h.target.join(" ∧ "));
            let _ = writeln!(out, "total assignments: {}", h.total);
            let _ = writeln!(out, "satisfying the chain: {}", h.satisfying);
            let _ = writeln!(out, "satisfying the chain and the target: {}", h.target_satisfying);
            table(&mut out, &h.variables, &h.satisfying_assignments);
        }
        Payload::Sample(s) => {
            let _ = writeln!(
                out,
                "state {}: {} draws in the {} basis, seed {}",
                s.state,
                s.n,
                s.observables.join("–"),
                s.seed
            );
            let mut header = s.observables.clone();
            header.extend(strings(&["count", "frequency", "born", "≈"]));
            let rows: Vec<Vec<String>> = s
                .entries
                .iter()
                .map(|x| {
                    let mut row = x.labels.clone();
                    row.extend([x.count.to_string(), x.frequency.clone(), x.born.clone(), x.born_decimal.clone()]);
                    row
                })
                .collect();
            table(&mut out, &header, &rows);
        }
        Payload::Validate(v) => {
            let _ = writeln!(
                out,
                "spaces: {}, states: {}, observables: {}, chains: {}, queries: {}",
                v.spaces, v.states, v.observables, v.chains, v.queries
            );
            for d in &v.diagnostics {
                let _ = writeln!(out, "  {d}");
            }
        }
    }
    let _ = writeln!(out, "verdict: {}", r.verdict);
    out
}
