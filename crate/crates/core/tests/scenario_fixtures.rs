mod common;

use proptest::prelude::*;
use qlogic::field::{ExactScalar, FieldError};
use qlogic::linear::LinearError;
use qlogic::propositions::{Proposition, PropositionError};
use qlogic::scenario::{builtin_scenario, parse, parse_bytes, serialize, ScenarioError, ValidationError};
use sha2::{Digest, Sha256};

const WIGNER_SHA256: &str = "422d93ad56466ac4e9f64db64189713e2b137e174447a81bdadc97a620a4c324";

fn wigner_bytes() -> Vec<u8> {
    std::fs::read(common::fixture_dir().join("wigner.scn")).unwrap()
}

#[test]
fn shipped_fixture_equals_builtin() {
    assert_eq!(parse_bytes(&wigner_bytes()).unwrap(), builtin_scenario());
}

#[test]
fn shipped_fixture_is_byte_stable() {
    assert_eq!(hex::encode(Sha256::digest(wigner_bytes())), WIGNER_SHA256);
}

#[test]
fn corpus_round_trips() {
    let paths = common::fixture_paths();
    assert!(paths.len() >= 10, "corpus has {} files", paths.len());
    for (name, s) in common::corpus() {
        let text = serialize(&s);
        let back = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
        assert_eq!(back, s, "{name}");
        assert_eq!(serialize(&back), text, "{name}");
    }
}

#[test]
fn every_corpus_query_evaluates_or_reports_cross_context() {
    for (name, s) in common::corpus() {
        for q in s.queries() {
            match s.evaluate(&q.name, None) {
                Ok(_) => {}
                Err(qlogic::audit::AuditError::Proposition(PropositionError::NonCommutingConjunction { .. })) => {}
                Err(qlogic::audit::AuditError::Proposition(PropositionError::NotCertified { .. })) => {}
                Err(e) => panic!("{name} {}: {e}", q.name),
            }
        }
    }
}

#[test]
fn builtin_in_lab_basis() {
    let s = builtin_scenario();
    let ctx = s.registry().context(&["A", "B"]).unwrap();
    let coeffs: Vec<(Vec<String>, ExactScalar)> = s.registry().expand(s.state("Psi").unwrap(), &ctx).unwrap();
    let expected = [("H", "up", "0"), ("H", "down", "1/3*sqrt(3)"), ("T", "up", "1/3*sqrt(3)"), ("T", "down", "1/3*sqrt(3)")];
    for ((labels, c), (a, b, v)) in coeffs.iter().zip(expected) {
        assert_eq!(labels, &[a, b]);
        assert_eq!(c.to_canonical_string(), v);
    }
    let y = s.registry().observable("Y").unwrap();
    let fail = &y.outcome("fail_Y").unwrap().eigenvector;
    let half_sqrt2: ExactScalar = "1/2*sqrt(2)".parse().unwrap();
    assert_eq!(fail.coeffs(), [half_sqrt2.clone(), half_sqrt2]);
}

#[test]
fn minimal_documents() {
    let s = parse("space Q dim 2 basis { a, b }").unwrap();
    assert_eq!(serialize(&s), "space Q dim 2 basis { a, b }\n");
    let with_alias = "space Q dim 2 basis { H, T }\n\
                      observable A on Q { H -> |H>, T -> |T> }\n\
                      alias C of A { h -> H, t -> T }\n";
    let text = serialize(&parse(with_alias).unwrap());
    assert!(text.contains("alias C of A { h -> H, t -> T }\n"));
}

fn validation(err: ScenarioError) -> ValidationError {
    match err {
        ScenarioError::Validation { error, span } => {
            assert!(span.is_some());
            error
        }
        other => panic!("expected a validation error, got {other}"),
    }
}

const HEADER: &str = "space L1 dim 2 basis { H, T }\nspace L2 dim 2 basis { up, down }\n";

#[test]
fn validation_errors() {
    let e = validation(parse(&format!("{HEADER}state S = (1/sqrt(5)) |H,down>\n")).unwrap_err());
    assert!(matches!(e, ValidationError::Field(FieldError::UnrepresentableRadical(_))));

    let e = validation(parse(&format!("{HEADER}observable A on L1 {{ H -> |H> }}\n")).unwrap_err());
    assert_eq!(
        e,
        ValidationError::Proposition(PropositionError::Linear(LinearError::IncompleteBasis { expected: 2, found: 1 }))
    );

    let e = validation(parse(&format!("{HEADER}observable A on L1 {{ H -> |H>, T -> |H> }}\n")).unwrap_err());
    assert!(matches!(e, ValidationError::Proposition(PropositionError::Linear(LinearError::NotOrthonormal(_)))));

    let e = validation(parse(&format!("{HEADER}state S = 1/2 |H,up>\n")).unwrap_err());
    assert!(matches!(e, ValidationError::NotNormalized { .. }));

    let e = validation(parse(&format!("{HEADER}state S = |H,up>\nquery q: prob Z [A=H]\n")).unwrap_err());
    assert!(matches!(e, ValidationError::UnknownName { kind: "state", .. }));

    let e = validation(parse(&format!("{HEADER}observable A on L3 {{ x -> |x> }}\n")).unwrap_err());
    assert!(matches!(e, ValidationError::UnknownName { kind: "space", .. }));

    let e = validation(parse(&format!("{HEADER}state S = |H,sideways>\n")).unwrap_err());
    assert!(matches!(e, ValidationError::UnknownName { .. }));

    let dup = format!("{HEADER}state S = |H,up>\nstate S = |T,up>\n");
    assert!(matches!(validation(parse(&dup).unwrap_err()), ValidationError::Duplicate { .. }));

    let bad_alias = format!("{HEADER}observable A on L1 {{ H -> |H>, T -> |T> }}\nalias C of A {{ h -> H, t -> H }}\n");
    assert!(matches!(validation(parse(&bad_alias).unwrap_err()), ValidationError::Proposition(_)));

    let cross = format!(
        "{HEADER}state S = |H,up>\nobservable A on L1 {{ H -> |H>, T -> |T> }}\n\
         observable X on L1 {{ p -> sqrt(1/2) |H> + sqrt(1/2) |T>, m -> sqrt(1/2) |H> - sqrt(1/2) |T> }}\n\
         query e: expand S in A,X\n"
    );
    assert!(matches!(validation(parse(&cross).unwrap_err()), ValidationError::Proposition(_)));

    let unknown_prop = format!("{HEADER}observable A on L1 {{ H -> |H>, T -> |T> }}\nchain c: (A=H -> A=Q)\n");
    assert!(matches!(
        validation(parse(&unknown_prop).unwrap_err()),
        ValidationError::Proposition(PropositionError::UnknownOutcome { .. })
    ));
}

#[test]
fn parse_errors_point_at_the_offending_token() {
    let cases = [
        ("space L1 dim two basis { H }", (1, 14)),
        ("space L1 dim 1 basis { H }\nstate S = 1.5 |H>", (2, 12)),
        ("space L1 dim 1 basis { H }\nstate S = |H", (2, 13)),
        ("space L1 dim 1 basis { H }\nquery q: sum S", (2, 10)),
        ("space L1 dim 1 basis { H } extra", (1, 28)),
    ];
    for (src, (line, column)) in cases {
        match parse(src) {
            Err(ScenarioError::Parse(e)) => {
                assert_eq!((e.span.line, e.span.column), (line, column), "{src}: {e}");
                assert!(!e.found.is_empty());
            }
            other => panic!("{src}: {other:?}"),
        }
    }
}

#[test]
fn builtin_queries_resolve_aliases() {
    let s = builtin_scenario();
    let chain = s.chain("wigner").unwrap();
    assert_eq!(chain.links[0].1, Proposition::new("S_z", "+1/2"));
    let certified = s.certify_chain("Psi", "wigner").unwrap();
    assert_eq!(certified.links()[0].consequent(), &Proposition::new("B", "up"));
}

/// Fragments of the grammar, so random documents reach deep parser states.
fn fragment() -> impl Strategy<Value = String> {
    prop::sample::select(vec![
        "space", "state", "observable", "alias", "chain", "query", "dim", "basis", "on", "of", "in", "prob", "expand",
        "audit", "hv", "target", "sqrt", "L1", "L2", "H", "T", "up", "down", "A", "X", "Psi", "2", "3", "0", "1/2",
        "{", "}", "(", ")", "[", "]", "|", ">", ",", ":", "=", "+", "-", "*", "/", "->", "\n", " ", "#", "+1/2",
    ])
    .prop_map(str::to_string)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn parser_is_total_on_bytes(bytes in prop::collection::vec(any::<u8>(), 0..256)) {
        if let Err(e) = parse_bytes(&bytes) {
            let span = e.span().expect("every failure carries a span");
            prop_assert!(span.line >= 1 && span.column >= 1);
        }
    }

    #[test]
    fn parser_is_total_on_token_soup(parts in prop::collection::vec(fragment(), 0..80)) {
        let text = format!("{HEADER}{}", parts.join(" "));
        match parse(&text) {
            Ok(s) => prop_assert_eq!(parse(&serialize(&s)).unwrap(), s),
            Err(e) => prop_assert!(e.span().is_some()),
        }
    }

    #[test]
    fn parser_is_total_on_mutated_fixture(pos in 0usize..2000, byte in any::<u8>(), cut in any::<bool>()) {
        let mut bytes = wigner_bytes();
        let pos = pos % bytes.len();
        if cut {
            bytes.truncate(pos);
        } else {
            bytes[pos] = byte;
        }
        match parse_bytes(&bytes) {
            Ok(s) => prop_assert_eq!(parse(&serialize(&s)).unwrap(), s),
            Err(e) => prop_assert!(e.span().is_some()),
        }
    }
}
