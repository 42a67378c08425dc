use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Eq,
    Pipe,
    Gt,
    Plus,
    Minus,
    Star,
    Slash,
    Arrow,
    Newline,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Eq => "=",
            Tok::Pipe => "|",
            Tok::Gt => ">",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Arrow => "->",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

/// Splits the source into tokens. Newlines inside `()`, `[]` or `{}` are
/// dropped so bracketed lists may span lines.
pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut line = 1;
    let mut col = 1;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let span = SourceSpan { line, column: col };
        let mut push = |tok: Tok| out.push(Token { tok, span });
        match c {
            '\n' => {
                chars.next();
                if depth == 0 {
                    push(Tok::Newline);
                }
                line += 1;
                col = 1;
                continue;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                col += s.len();
                push(Tok::Ident(s));
                continue;
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                col += s.len();
                push(Tok::Int(s));
                continue;
            }
            _ => {}
        }
        chars.next();
        let tok = match c {
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '=' => Tok::Eq,
            '|' => Tok::Pipe,
            '>' => Tok::Gt,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '-' => {
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    Tok::Arrow
                } else {
                    Tok::Minus
                }
            }
            other => {
                return Err(ParseError {
                    span,
                    found: format!("unexpected character {other:?}"),
                    expected: vec!["a token".into()],
                })
            }
        };
        match tok {
            Tok::LBrace | Tok::LParen | Tok::LBracket => depth += 1,
            Tok::RBrace | Tok::RParen | Tok::RBracket => depth = depth.saturating_sub(1),
            _ => {}
        }
        col += 1;
        out.push(Token { tok, span });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan { line, column: col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn arrows_and_minus() {
        assert_eq!(
            toks("a -> -1"),
            vec![Tok::Ident("a".into()), Tok::Arrow, Tok::Minus, Tok::Int("1".into()), Tok::Eof]
        );
    }

    #[test]
    fn newlines_inside_brackets_are_dropped() {
        assert_eq!(
            toks("{\n}\n# c\nx"),
            vec![Tok::LBrace, Tok::RBrace, Tok::Newline, Tok::Newline, Tok::Ident("x".into()), Tok::Eof]
        );
    }

    #[test]
    fn spans() {
        let t = tokenize("ab\n  |x>").unwrap();
        assert_eq!(t[2].span, SourceSpan { line: 2, column: 3 });
        assert_eq!(t[3].span, SourceSpan { line: 2, column: 4 });
        let err = tokenize("a ↑").unwrap_err();
        assert_eq!(err.span, SourceSpan { line: 1, column: 3 });
    }
}
