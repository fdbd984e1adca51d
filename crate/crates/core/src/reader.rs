//! Text to atoms and back.
//!
//! Source is a sequence of top-level forms. A form prefixed with `!` is a
//! directive (evaluate now); anything else is stored. `;` starts a line
//! comment. Numbers and double-quoted strings become grounded atoms, `$name`
//! is a variable, every other token is a symbol.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::atom::{looks_numeric, Atom, Grounded, Symbol, Variable};

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{0}: unterminated string literal")]
    UnterminatedString(Span),
    #[error("{span}: unsupported escape sequence `\\{escape}`")]
    BadEscape { span: Span, escape: char },
    #[error("{0}: empty variable name")]
    EmptyVariable(Span),
    #[error("{0}: integer literal out of range")]
    IntegerOutOfRange(Span),
    #[error("{0}: unexpected `)`")]
    UnexpectedClose(Span),
    #[error("{0}: unclosed `(`")]
    Unclosed(Span),
    #[error("{0}: `!` must be followed by an expression")]
    DanglingBang(Span),
    #[error("{0}: directives are not allowed here")]
    UnexpectedDirective(Span),
    #[error("expected exactly one expression, found {0}")]
    NotSingleAtom(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum TokenKind {
    Open,
    Close,
    Bang,
    Symbol(String),
    Variable(String),
    Str(String),
    Int(i64),
    Float(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

/// One top-level form of a program.
#[derive(Clone, Debug, PartialEq)]
pub struct ProgramItem {
    pub atom: Atom,
    pub is_directive: bool,
    pub span: Span,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Lexer<'_> {
    fn span(&self) -> Span {
        Span {
            line: self.line,
            column: self.column,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn string(&mut self, start: Span) -> Result<TokenKind, ParseError> {
        let mut text = String::new();
        loop {
            let at = self.span();
            match self.bump() {
                None => return Err(ParseError::UnterminatedString(start)),
                Some('"') => return Ok(TokenKind::Str(text)),
                Some('\\') => match self.bump() {
                    Some(c @ ('"' | '\\')) => text.push(c),
                    Some(escape) => return Err(ParseError::BadEscape { span: at, escape }),
                    None => return Err(ParseError::UnterminatedString(start)),
                },
                Some(c) => text.push(c),
            }
        }
    }

    fn word(&mut self, start: Span) -> Result<TokenKind, ParseError> {
        let mut text = String::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';') {
                break;
            }
            text.push(c);
            self.bump();
        }
        if let Some(name) = text.strip_prefix('$') {
            if name.is_empty() {
                return Err(ParseError::EmptyVariable(start));
            }
            return Ok(TokenKind::Variable(name.to_string()));
        }
        if looks_numeric(&text) {
            if text.contains('.') {
                // digits with an optional sign always parse as f64
                return Ok(TokenKind::Float(text.parse().expect("numeric literal")));
            }
            return text
                .parse()
                .map(TokenKind::Int)
                .map_err(|_| ParseError::IntegerOutOfRange(start));
        }
        Ok(TokenKind::Symbol(text))
    }
}

/// Splits source text into tokens. Whitespace and comments are dropped.
pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut lx = Lexer {
        chars: src.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    while let Some(c) = lx.peek() {
        let span = lx.span();
        let kind = match c {
            c if c.is_whitespace() => {
                lx.bump();
                continue;
            }
            ';' => {
                while lx.peek().is_some_and(|c| c != '\n') {
                    lx.bump();
                }
                continue;
            }
            '(' => {
                lx.bump();
                TokenKind::Open
            }
            ')' => {
                lx.bump();
                TokenKind::Close
            }
            '!' => {
                lx.bump();
                TokenKind::Bang
            }
            '"' => {
                lx.bump();
                lx.string(span)?
            }
            _ => lx.word(span)?,
        };
        tokens.push(Token { kind, span });
    }
    Ok(tokens)
}

fn leaf(kind: TokenKind) -> Atom {
    match kind {
        TokenKind::Symbol(s) => Atom::Symbol(Symbol::new(&s)),
        TokenKind::Variable(v) => Atom::Variable(Variable::new(&v)),
        TokenKind::Str(s) => Atom::Grounded(Grounded::Text(Arc::from(s))),
        TokenKind::Int(i) => Atom::int(i),
        TokenKind::Float(x) => Atom::float(x),
        TokenKind::Open | TokenKind::Close | TokenKind::Bang => unreachable!("not a leaf"),
    }
}

/// Parses one form starting at `tokens[0]`, returning it and the number of
/// tokens consumed.
fn parse_form(tokens: &[Token]) -> Result<(Atom, usize), ParseError> {
    let mut stack: Vec<(Span, Vec<Atom>)> = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        let atom = match &tok.kind {
            TokenKind::Open => {
                stack.push((tok.span, Vec::new()));
                continue;
            }
            TokenKind::Close => match stack.pop() {
                Some((_, children)) => Atom::Expression(children),
                None => return Err(ParseError::UnexpectedClose(tok.span)),
            },
            TokenKind::Bang => return Err(ParseError::DanglingBang(tok.span)),
            other => leaf(other.clone()),
        };
        match stack.last_mut() {
            Some((_, children)) => children.push(atom),
            None => return Ok((atom, i + 1)),
        }
    }
    // only reachable with an open expression on the stack
    Err(ParseError::Unclosed(stack[0].0))
}

pub fn parse_program(src: &str) -> Result<Vec<ProgramItem>, ParseError> {
    let tokens = tokenize(src)?;
    let mut items = Vec::new();
    let mut pos = 0;
    while pos < tokens.len() {
        let span = tokens[pos].span;
        let is_directive = tokens[pos].kind == TokenKind::Bang;
        if is_directive {
            pos += 1;
            if pos == tokens.len() || tokens[pos].kind == TokenKind::Bang {
                return Err(ParseError::DanglingBang(span));
            }
        }
        let (atom, used) = parse_form(&tokens[pos..])?;
        pos += used;
        items.push(ProgramItem {
            atom,
            is_directive,
            span,
        });
    }
    Ok(items)
}

/// Parses text holding exactly one non-directive form.
pub fn parse_atom(src: &str) -> Result<Atom, ParseError> {
    let mut items = parse_program(src)?;
    if items.len() != 1 {
        return Err(ParseError::NotSingleAtom(items.len()));
    }
    let item = items.pop().expect("one item");
    if item.is_directive {
        return Err(ParseError::UnexpectedDirective(item.span));
    }
    Ok(item.atom)
}

/// One form per line, directives prefixed with `!`.
pub fn print_program(items: &[ProgramItem]) -> String {
    let mut out = String::new();
    for item in items {
        if item.is_directive {
            out.push('!');
        }
        out.push_str(&item.atom.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use TokenKind::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(
            kinds("(A $x)"),
            [Open, Symbol("A".into()), Variable("x".into()), Close]
        );
        assert_eq!(
            kinds("! (green Fritz)"),
            [
                Bang,
                Open,
                Symbol("green".into()),
                Symbol("Fritz".into()),
                Close
            ]
        );
        assert_eq!(
            kinds("(\"point\" (10 10))"),
            [
                Open,
                Str("point".into()),
                Open,
                Int(10),
                Int(10),
                Close,
                Close
            ]
        );
    }

    #[test]
    fn tokenize_numbers_and_comments() {
        assert_eq!(
            kinds("-3 +4 2.5 1. - ; trailing\n x"),
            [
                Int(-3),
                Int(4),
                Float(2.5),
                Symbol("1.".into()),
                Symbol("-".into()),
                Symbol("x".into())
            ]
        );
        assert_eq!(kinds("!(loop)"), [Bang, Open, Symbol("loop".into()), Close]);
    }

    #[test]
    fn spans_track_lines() {
        let toks = tokenize("(a\n  b)").unwrap();
        assert_eq!(toks[2].span, Span { line: 2, column: 3 });
    }

    #[test]
    fn lex_errors() {
        assert_eq!(
            tokenize("(a \"open").unwrap_err(),
            ParseError::UnterminatedString(Span { line: 1, column: 4 })
        );
        assert!(matches!(
            tokenize(r#""\n""#),
            Err(ParseError::BadEscape { escape: 'n', .. })
        ));
        assert!(matches!(tokenize("$ x"), Err(ParseError::EmptyVariable(_))));
        assert!(matches!(
            tokenize("99999999999999999999"),
            Err(ParseError::IntegerOutOfRange(_))
        ));
        assert_eq!(kinds(r#""a\"b\\""#), [Str("a\"b\\".into())]);
    }

    #[test]
    fn parse_robot_program() {
        let src = "(Sam is a frog)\n(Tom is a cat)\n(Sophia is a robot)\n\
                   ! (match &self ($x is a robot) (I know $x the robot))";
        let items = parse_program(src).unwrap();
        assert_eq!(items.len(), 4);
        assert!(items[..3].iter().all(|i| !i.is_directive));
        assert!(items[3].is_directive);
        assert_eq!(items[3].span, Span { line: 4, column: 1 });
        assert_eq!(
            items[3].atom.to_string(),
            "(match &self ($x is a robot) (I know $x the robot))"
        );
    }

    #[test]
    fn parse_rule() {
        assert!(parse_program("").unwrap().is_empty());
        let items = parse_program("(= (add Z $x) $x)").unwrap();
        assert_eq!(items.len(), 1);
        assert!(!items[0].is_directive);
        let children = items[0].atom.children().unwrap();
        assert_eq!(children.len(), 3);
        assert_eq!(children[0], Atom::sym("="));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_program("(a b").unwrap_err(),
            ParseError::Unclosed(Span { line: 1, column: 1 })
        );
        assert_eq!(
            parse_program("a)").unwrap_err(),
            ParseError::UnexpectedClose(Span { line: 1, column: 2 })
        );
        assert!(matches!(
            parse_program("(a) !"),
            Err(ParseError::DanglingBang(_))
        ));
        assert!(matches!(
            parse_program("! ! (a)"),
            Err(ParseError::DanglingBang(_))
        ));
        assert!(matches!(
            parse_program("(a (b !))"),
            Err(ParseError::DanglingBang(_))
        ));
        assert!(matches!(
            parse_atom("a b"),
            Err(ParseError::NotSingleAtom(2))
        ));
        assert!(matches!(
            parse_atom("!a"),
            Err(ParseError::UnexpectedDirective(_))
        ));
    }

    #[test]
    fn grounded_literals() {
        let atom = parse_atom("(\"point\" (10 -2.5))").unwrap();
        assert_eq!(
            atom,
            Atom::expr([
                Atom::text("point"),
                Atom::expr([Atom::int(10), Atom::float(-2.5)])
            ])
        );
        assert_eq!(parse_atom("()").unwrap(), Atom::unit());
        assert_eq!(parse_atom("&self").unwrap(), Atom::sym("&self"));
    }

    #[test]
    fn fritz_round_trip() {
        let src = "(= (croaks Fritz) True)\n(= (eat_flies Fritz) True)\n\
                   (= (frog $x)\n   (and (croaks $x)\n        (eat_flies $x)))\n\
                   (= (green $x)\n   (frog $x))\n! (green Fritz)\n";
        let items = parse_program(src).unwrap();
        let printed = print_program(&items);
        let again = parse_program(&printed).unwrap();
        let atoms = |v: &[ProgramItem]| {
            v.iter()
                .map(|i| (i.atom.clone(), i.is_directive))
                .collect::<Vec<_>>()
        };
        assert_eq!(atoms(&items), atoms(&again));
        assert_eq!(print_program(&[]), "");
    }
}
