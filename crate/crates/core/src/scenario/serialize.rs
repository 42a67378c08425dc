use std::fmt::Write;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{QueryKind, Scenario};
use crate::field::RADICANDS;
use crate::linear::Ket;
use crate::propositions::Proposition;

/// Canonical text form: spaces, states, observables, aliases, chains and
/// queries, each in declaration order. `parse(&serialize(s)) == s`.
pub fn serialize(scenario: &Scenario) -> String {
    let mut out = String::new();
    let layout = scenario.layout();
    for s in layout.subsystems() {
        let _ = writeln!(out, "space {} dim {} basis {{ {} }}", s.name, s.dim(), s.labels.join(", "));
    }
    for s in scenario.states() {
        let _ = writeln!(out, "state {} = {}", s.name, ket_expr(&s.ket));
    }
    let observables = scenario.registry().observables();
    for o in observables {
        let space = &layout.subsystems()[o.subsystem()].name;
        let outcomes: Vec<String> = o
            .outcomes()
            .iter()
            .map(|oc| format!("{} -> {}", oc.label, ket_expr(&oc.eigenvector)))
            .collect();
        let _ = writeln!(out, "observable {} on {} {{ {} }}", o.name(), space, outcomes.join(", "));
    }
    for o in observables {
        if let Some(a) = o.alias() {
            let pairs: Vec<String> = a.labels.iter().map(|(x, y)| format!("{x} -> {y}")).collect();
            let _ = writeln!(out, "alias {} of {} {{ {} }}", a.name, o.name(), pairs.join(", "));
        }
    }
    for c in scenario.chains() {
        let links: Vec<String> = c.links.iter().map(|(a, b)| format!("({} -> {})", prop(a), prop(b))).collect();
        let _ = writeln!(out, "chain {}: {}", c.name, links.join(", "));
    }
    for q in scenario.queries() {
        let body = match &q.kind {
            QueryKind::Prob { state, props } => format!("prob {state} [{}]", prop_list(props)),
            QueryKind::Expand { state, observables } => format!("expand {state} in {}", observables.join(",")),
            QueryKind::Audit { chain } => format!("audit {chain}"),
            QueryKind::Hv { chain, target } => format!("hv {chain} target [{}]", prop_list(target)),
        };
        let _ = writeln!(out, "query {}: {}", q.name, body);
    }
    out
}

fn prop(p: &Proposition) -> String {
    format!("{}={}", p.observable, p.outcome)
}

fn prop_list(props: &[Proposition]) -> String {
    props.iter().map(prop).collect::<Vec<_>>().join(", ")
}

/// One term per nonzero radical component of each coefficient.
fn ket_expr(ket: &Ket) -> String {
    let layout = ket.layout();
    let mut out = String::new();
    for (i, c) in ket.coeffs().iter().enumerate() {
        let labels = layout.basis_labels(ket.group(), i).join(",");
        for (q, r) in c.parts().iter().zip(RADICANDS) {
            if q.is_zero() {
                continue;
            }
            let sign = if q.is_negative() { "-" } else { "+" };
            if out.is_empty() {
                if q.is_negative() {
                    out.push_str("-");
                }
            } else {
                let _ = write!(out, " {sign} ");
            }
            let magnitude = monomial(&q.abs(), r);
            if !magnitude.is_empty() {
                out.push_str(&magnitude);
                out.push(' ');
            }
            let _ = write!(out, "|{labels}>");
        }
    }
    if out.is_empty() {
        let labels = layout.basis_labels(ket.group(), 0).join(",");
        out = format!("0 |{labels}>");
    }
    out
}

/// `q*sqrt(r)` for positive `q`; empty when the product is 1.
fn monomial(q: &BigRational, r: u32) -> String {
    let radical = (r != 1).then(|| format!("sqrt({r})"));
    match (q.is_one(), radical) {
        (true, None) => String::new(),
        (true, Some(rad)) => rad,
        (false, None) => q.to_string(),
        (false, Some(rad)) => format!("{q}*{rad}"),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{builtin_scenario, parse};
    use super::*;

    #[test]
    fn round_trip_builtin() {
        let s = builtin_scenario();
        let text = serialize(&s);
        assert_eq!(parse(&text).unwrap(), s);
        assert_eq!(serialize(&parse(&text).unwrap()), text);
    }

    #[test]
    fn monomials() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(monomial(&q(1, 1), 1), "");
        assert_eq!(monomial(&q(1, 1), 6), "sqrt(6)");
        assert_eq!(monomial(&q(1, 3), 3), "1/3*sqrt(3)");
        assert_eq!(monomial(&q(2, 1), 1), "2");
    }
}
