//! Recursive-descent parser with one token of lookahead.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::lexer::{tokenize, Tok, Token};
use super::{ChainSpec, ParseError, Query, QueryKind, Scenario, ScenarioError, SourceSpan, ValidationError};
use crate::field::{sqrt_rational, ExactScalar, FieldError};
use crate::linear::{Ket, LinearError, SpaceLayout, Subsystem};
use crate::propositions::{Alias, Observable, Proposition};

const MAX_NESTING: usize = 64;

type PResult<T> = Result<T, ScenarioError>;

/// Parses and validates a scenario document.
pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
    let tokens = tokenize(text)?;
    Parser { tokens, pos: 0, depth: 0 }.document()
}

/// Like [`parse`], for raw bytes; invalid UTF-8 is a parse error.
pub fn parse_bytes(bytes: &[u8]) -> Result<Scenario, ScenarioError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text),
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            let line = valid.iter().filter(|&&b| b == b'\n').count() + 1;
            let line_start = valid.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
            let column = std::str::from_utf8(&valid[line_start..]).map_or(1, |s| s.chars().count() + 1);
            Err(ParseError {
                span: SourceSpan { line, column },
                found: format!("invalid UTF-8 byte 0x{:02x}", bytes[e.valid_up_to()]),
                expected: vec!["UTF-8 text".into()],
            }
            .into())
        }
    }
}

fn invalid(span: SourceSpan, error: impl Into<ValidationError>) -> ScenarioError {
    ScenarioError::Validation {
        span: Some(span),
        error: error.into(),
    }
}

/// One parsed ket term: coefficient and the labels inside `|...>`.
struct Term {
    coeff: ExactScalar,
    labels: Vec<String>,
    span: SourceSpan,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ScenarioError {
        ParseError {
            span: self.span(),
            found: self.peek().describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
        .into()
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<SourceSpan> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            Err(self.error(&[what]))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&[what])),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error(&[&format!("`{kw}`")])),
        }
    }

    fn int(&mut self) -> PResult<(String, SourceSpan)> {
        match self.peek() {
            Tok::Int(s) => {
                let s = s.clone();
                Ok((s, self.bump().span))
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    fn end_of_statement(&mut self) -> PResult<()> {
        match self.peek() {
            Tok::Newline => {
                self.bump();
                Ok(())
            }
            Tok::Eof => Ok(()),
            _ => Err(self.error(&["end of line"])),
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(ParseError {
                span: self.span(),
                found: format!("nesting deeper than {MAX_NESTING}"),
                expected: vec![],
            }
            .into());
        }
        Ok(())
    }

    /// Comma-separated items between `open` and `close`; may be empty.
    fn list<T>(&mut self, open: Tok, close: Tok, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let (open_s, close_s) = (open.describe(), close.describe());
        self.expect(open, &open_s)?;
        let mut out = Vec::new();
        if self.eat(&close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(&close) {
                return Ok(out);
            }
            if !self.eat(&Tok::Comma) {
                return Err(self.error(&["`,`", &close_s]));
            }
        }
    }

    fn document(mut self) -> PResult<Scenario> {
        let mut spaces: Vec<Subsystem> = Vec::new();
        let mut scenario: Option<Scenario> = None;
        loop {
            while self.eat(&Tok::Newline) {}
            if *self.peek() == Tok::Eof {
                break;
            }
            let start = self.span();
            let kw = match self.peek() {
                Tok::Ident(s) if ["space", "state", "observable", "alias", "chain", "query"].contains(&s.as_str()) => {
                    s.clone()
                }
                _ => {
                    return Err(self.error(&[
                        "`space`",
                        "`state`",
                        "`observable`",
                        "`alias`",
                        "`chain`",
                        "`query`",
                    ]))
                }
            };
            self.bump();
            if kw == "space" {
                if scenario.is_some() {
                    return Err(invalid(start, ValidationError::LayoutFrozen));
                }
                spaces.push(self.space(start)?);
            } else {
                if scenario.is_none() {
                    let layout = SpaceLayout::new(std::mem::take(&mut spaces)).map_err(|e| invalid(start, e))?;
                    scenario = Some(Scenario::new(layout).map_err(|e| invalid(start, e))?);
                }
                let s = scenario.as_mut().expect("initialized above");
                match kw.as_str() {
                    "state" => self.state(s, start)?,
                    "observable" => self.observable(s, start)?,
                    "alias" => self.alias(s, start)?,
                    "chain" => self.chain(s, start)?,
                    _ => self.query(s, start)?,
                }
            }
            self.end_of_statement()?;
        }
        match scenario {
            Some(s) => Ok(s),
            None => {
                let start = self.span();
                let layout = SpaceLayout::new(spaces).map_err(|e| invalid(start, e))?;
                Scenario::new(layout).map_err(|e| invalid(start, e))
            }
        }
    }

    fn space(&mut self, start: SourceSpan) -> PResult<Subsystem> {
        let name = self.ident("space name")?;
        self.keyword("dim")?;
        let (dim, _) = self.int()?;
        self.keyword("basis")?;
        let labels = self.list(Tok::LBrace, Tok::RBrace, |p| p.ident("basis label"))?;
        if dim.parse::<usize>().ok() != Some(labels.len()) {
            return Err(invalid(
                start,
                LinearError::InvalidLayout(format!(
                    "space `{name}` declares dim {dim} but lists {} basis labels",
                    labels.len()
                )),
            ));
        }
        Ok(Subsystem { name, labels })
    }

    fn state(&mut self, s: &mut Scenario, start: SourceSpan) -> PResult<()> {
        let name = self.ident("state name")?;
        self.expect(Tok::Eq, "`=`")?;
        let terms = self.ket_expr()?;
        let layout = s.layout().clone();
        let subsystems = layout.subsystems();
        let mut coeffs = vec![ExactScalar::zero(); layout.dim()];
        for t in terms {
            if t.labels.len() != subsystems.len() {
                return Err(invalid(
                    t.span,
                    LinearError::LayoutMismatch(format!(
                        "ket has {} labels but the layout has {} spaces",
                        t.labels.len(),
                        subsystems.len()
                    )),
                ));
            }
            let mut index = 0;
            for (label, sub) in t.labels.iter().zip(subsystems) {
                let d = sub.labels.iter().position(|l| l == label).ok_or_else(|| {
                    invalid(
                        t.span,
                        ValidationError::UnknownName {
                            kind: "basis label",
                            name: format!("{label} (space {})", sub.name),
                        },
                    )
                })?;
                index = index * sub.dim() + d;
            }
            coeffs[index] += &t.coeff;
        }
        let ket = Ket::on_layout(layout, coeffs).map_err(|e| invalid(start, e))?;
        s.add_state(&name, ket).map_err(|e| invalid(start, e))
    }

    fn observable(&mut self, s: &mut Scenario, start: SourceSpan) -> PResult<()> {
        let name = self.ident("observable name")?;
        self.keyword("on")?;
        let space = self.ident("space name")?;
        let layout = s.layout().clone();
        let index = layout.subsystem_index(&space).ok_or_else(|| {
            invalid(start, ValidationError::UnknownName { kind: "space", name: space.clone() })
        })?;
        let sub = layout.subsystems()[index].clone();
        let entries = self.list(Tok::LBrace, Tok::RBrace, |p| {
            let label = p.outcome_label()?;
            p.expect(Tok::Arrow, "`->`")?;
            Ok((label, p.ket_expr()?))
        })?;
        let mut outcomes = Vec::with_capacity(entries.len());
        for (label, terms) in entries {
            let mut coeffs = vec![ExactScalar::zero(); sub.dim()];
            for t in terms {
                let pos = match t.labels.as_slice() {
                    [l] => sub.labels.iter().position(|x| x == l),
                    _ => None,
                }
                .ok_or_else(|| {
                    invalid(
                        t.span,
                        ValidationError::UnknownName {
                            kind: "basis ket",
                            name: format!("|{}> (space {})", t.labels.join(","), sub.name),
                        },
                    )
                })?;
                coeffs[pos] += &t.coeff;
            }
            let ket = Ket::new(layout.clone(), vec![index], coeffs).map_err(|e| invalid(start, e))?;
            outcomes.push((label, ket));
        }
        let observable = Observable::new(&layout, name, &space, outcomes).map_err(|e| invalid(start, e))?;
        s.add_observable(observable).map_err(|e| invalid(start, e))
    }

    fn alias(&mut self, s: &mut Scenario, start: SourceSpan) -> PResult<()> {
        let name = self.ident("alias name")?;
        self.keyword("of")?;
        let target = self.ident("observable name")?;
        let labels = self.list(Tok::LBrace, Tok::RBrace, |p| {
            let from = p.outcome_label()?;
            p.expect(Tok::Arrow, "`->`")?;
            Ok((from, p.outcome_label()?))
        })?;
        s.add_alias(&target, Alias { name, labels })
            .map_err(|e| invalid(start, e))
    }

    fn chain(&mut self, s: &mut Scenario, start: SourceSpan) -> PResult<()> {
        let name = self.ident("chain name")?;
        self.expect(Tok::Colon, "`:`")?;
        let mut links = Vec::new();
        loop {
            self.expect(Tok::LParen, "`(`")?;
            let a = self.prop()?;
            self.expect(Tok::Arrow, "`->`")?;
            let c = self.prop()?;
            self.expect(Tok::RParen, "`)`")?;
            links.push((a, c));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        s.add_chain(ChainSpec { name, links }).map_err(|e| invalid(start, e))
    }

    fn query(&mut self, s: &mut Scenario, start: SourceSpan) -> PResult<()> {
        let name = self.ident("query name")?;
        self.expect(Tok::Colon, "`:`")?;
        let kind = match self.peek() {
            Tok::Ident(k) if k == "prob" => {
                self.bump();
                let state = self.ident("state name")?;
                let props = self.list(Tok::LBracket, Tok::RBracket, Self::prop)?;
                QueryKind::Prob { state, props }
            }
            Tok::Ident(k) if k == "expand" => {
                self.bump();
                let state = self.ident("state name")?;
                self.keyword("in")?;
                let mut observables = vec![self.ident("observable name")?];
                while self.eat(&Tok::Comma) {
                    observables.push(self.ident("observable name")?);
                }
                QueryKind::Expand { state, observables }
            }
            Tok::Ident(k) if k == "audit" => {
                self.bump();
                QueryKind::Audit { chain: self.ident("chain name")? }
            }
            Tok::Ident(k) if k == "hv" => {
                self.bump();
                let chain = self.ident("chain name")?;
                self.keyword("target")?;
                let target = self.list(Tok::LBracket, Tok::RBracket, Self::prop)?;
                QueryKind::Hv { chain, target }
            }
            _ => return Err(self.error(&["`prob`", "`expand`", "`audit`", "`hv`"])),
        };
        s.add_query(Query { name, kind }).map_err(|e| invalid(start, e))
    }

    fn prop(&mut self) -> PResult<Proposition> {
        let observable = self.ident("observable name")?;
        self.expect(Tok::Eq, "`=`")?;
        Ok(Proposition::new(observable, self.outcome_label()?))
    }

    /// An identifier or a signed rational such as `+1/2`.
    fn outcome_label(&mut self) -> PResult<String> {
        let mut label = String::new();
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                return Ok(s);
            }
            Tok::Plus => label.push('+'),
            Tok::Minus => label.push('-'),
            Tok::Int(_) => {}
            _ => return Err(self.error(&["outcome label"])),
        }
        if !label.is_empty() {
            self.bump();
        }
        label.push_str(&self.int()?.0);
        if self.eat(&Tok::Slash) {
            label.push('/');
            label.push_str(&self.int()?.0);
        }
        Ok(label)
    }

    /// `[sign] term ((+|-) term)*` where a term is `[scalar] |labels>`.
    fn ket_expr(&mut self) -> PResult<Vec<Term>> {
        let mut terms = Vec::new();
        let mut negative = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let mut term = self.term()?;
            if negative {
                term.coeff = -term.coeff;
            }
            terms.push(term);
            negative = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(terms),
            };
            self.bump();
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let coeff = if *self.peek() == Tok::Pipe {
            ExactScalar::one()
        } else {
            self.scalar()?
        };
        let span = self.expect(Tok::Pipe, "`|`")?;
        let mut labels = vec![self.ident("basis label")?];
        while self.eat(&Tok::Comma) {
            labels.push(self.ident("basis label")?);
        }
        self.expect(Tok::Gt, "`>`")?;
        Ok(Term { coeff, labels, span })
    }

    fn scalar(&mut self) -> PResult<ExactScalar> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    let span = self.bump().span;
                    let rhs = self.unary()?;
                    acc = acc.checked_div(&rhs).map_err(|e| invalid(span, e))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult<ExactScalar> {
        self.enter()?;
        let out = if self.eat(&Tok::Minus) {
            self.unary().map(|x| -x)
        } else {
            self.primary()
        };
        self.depth -= 1;
        out
    }

    fn primary(&mut self) -> PResult<ExactScalar> {
        match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                Ok(ExactScalar::from_rational(BigRational::from_integer(int_value(&s))))
            }
            Tok::Ident(k) if k == "sqrt" => {
                let span = self.bump().span;
                self.expect(Tok::LParen, "`(`")?;
                let (num, _) = self.int()?;
                let den = if self.eat(&Tok::Slash) {
                    self.int()?.0
                } else {
                    "1".to_string()
                };
                self.expect(Tok::RParen, "`)`")?;
                let den = int_value(&den);
                if den.is_zero() {
                    return Err(invalid(span, FieldError::DivisionByZero));
                }
                let q = BigRational::new(int_value(&num), den);
                sqrt_rational(&q).map_err(|e| invalid(span, e))
            }
            Tok::LParen => {
                self.bump();
                let x = self.scalar()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(x)
            }
            _ => Err(self.error(&["integer", "`sqrt`", "`(`"])),
        }
    }
}

fn int_value(digits: &str) -> BigInt {
    digits.parse().expect("lexer only yields ASCII digits")
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "space L1 dim 2 basis { H, T }\nspace L2 dim 2 basis { up, down }\n";

    fn with_header(body: &str) -> Result<Scenario, ScenarioError> {
        parse(&format!("{HEADER}{body}"))
    }

    #[test]
    fn unrepresentable_literal() {
        let err = with_header("state S = (1/sqrt(5)) |H,down>\n").unwrap_err();
        assert!(matches!(
            err,
            ScenarioError::Validation {
                error: ValidationError::Field(FieldError::UnrepresentableRadical(_)),
                ..
            }
        ));
        assert_eq!(err.span(), Some(SourceSpan { line: 3, column: 14 }));
    }

    #[test]
    fn incomplete_eigenbasis() {
        let err = with_header("observable A on L1 { H -> |H> }\n").unwrap_err();
        match err {
            ScenarioError::Validation { error, span } => {
                assert_eq!(span, Some(SourceSpan { line: 3, column: 1 }));
                assert_eq!(
                    error,
                    ValidationError::Proposition(LinearError::IncompleteBasis { expected: 2, found: 1 }.into())
                );
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn not_normalized() {
        let err = with_header("state S = |H,down> + |T,up>\n").unwrap_err();
        assert!(matches!(
            err,
            ScenarioError::Validation { error: ValidationError::NotNormalized { .. }, .. }
        ));
    }

    #[test]
    fn scalar_grammar() {
        let s = with_header("state S = -(1/sqrt(2)) |H,up> + sqrt(1/2)*1 |T,down>\n").unwrap();
        let half = crate::field::sqrt_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(s.state("S").unwrap().coeffs()[0], -half.clone());
        assert_eq!(s.state("S").unwrap().coeffs()[3], half);
        assert!(with_header("state S = 1/0 |H,up>\n").is_err());
        assert!(with_header("state S = 2^2 |H,up>\n").is_err());
        assert!(with_header("state S = 1.5 |H,up>\n").is_err());
    }

    #[test]
    fn repeated_terms_accumulate() {
        let s = with_header("state S = 1/2 |H,up> + 1/2 |H,up>\n").unwrap();
        assert!(s.state("S").unwrap().coeffs()[0].is_one());
    }

    #[test]
    fn parse_errors_carry_spans() {
        let e = parse("space L1 dim 2 basis { H T }").unwrap_err();
        match e {
            ScenarioError::Parse(p) => {
                assert_eq!(p.span, SourceSpan { line: 1, column: 26 });
                assert_eq!(p.found, "`T`");
                assert!(p.expected.contains(&"`,`".to_string()));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("bogus"), Err(ScenarioError::Parse(_))));
    }

    #[test]
    fn layout_frozen_after_first_statement() {
        let e = parse("space L1 dim 1 basis { a }\nstate s = |a>\nspace L2 dim 1 basis { b }\n").unwrap_err();
        assert!(matches!(e, ScenarioError::Validation { error: ValidationError::LayoutFrozen, .. }));
    }

    #[test]
    fn dim_must_match_labels() {
        assert!(parse("space L1 dim 3 basis { a, b }").is_err());
        assert!(parse("space L1 dim 99999999999999999999999 basis { a }").is_err());
    }

    #[test]
    fn deep_nesting_is_rejected() {
        let deep = format!("{HEADER}state S = {}1{} |H,up>\n", "(".repeat(500), ")".repeat(500));
        assert!(matches!(parse(&deep), Err(ScenarioError::Parse(_))));
        let minus = format!("{HEADER}state S = {}1 |H,up>\n", "- ".repeat(500));
        assert!(matches!(parse(&minus), Err(ScenarioError::Parse(_))));
    }

    #[test]
    fn invalid_utf8() {
        let e = parse_bytes(b"space L1 dim 1 basis { a }\nst\xffate").unwrap_err();
        assert_eq!(e.span(), Some(SourceSpan { line: 2, column: 3 }));
    }

    #[test]
    fn empty_document() {
        let s = parse("# nothing\n\n").unwrap();
        assert!(s.layout().subsystems().is_empty());
    }
}
