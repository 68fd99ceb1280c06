//! Recursive-descent parser for the presentation text format.
//!
//! ```text
//! presentation := kind '<' genlist '|' rellist '>'
//! kind         := 'gp' | 'mon' | 'inv'
//! genlist      := ε | ident (',' ident)*
//! rellist      := ε | relation (',' relation)*
//! relation     := word '=' word
//! word         := '1' | term+
//! term         := ident ('^' nonzero-integer)?
//! ```
//!
//! Whitespace is free and `#` starts a comment running to the end of the line.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use super::{Presentation, PresentationKind, Relation};
use crate::words::{Alphabet, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownKind(String),
    UnknownGenerator(String),
    DuplicateGenerator(String),
    NegativeLetterInMonoid(String),
    ZeroExponent,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => f.write_str(msg),
            ParseErrorKind::UnknownKind(k) => {
                write!(f, "unknown presentation kind `{k}` (expected gp, mon or inv)")
            }
            ParseErrorKind::UnknownGenerator(name) => write!(f, "unknown generator `{name}`"),
            ParseErrorKind::DuplicateGenerator(name) => write!(f, "generator `{name}` declared twice"),
            ParseErrorKind::NegativeLetterInMonoid(name) => {
                write!(f, "negative power of `{name}` in a monoid presentation")
            }
            ParseErrorKind::ZeroExponent => f.write_str("exponent must be nonzero"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(u64),
    Minus,
    Caret,
    Lt,
    Gt,
    Pipe,
    Comma,
    Equals,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(n) => write!(f, "`{n}`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Pipe => f.write_str("`|`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (start_line, start_column) = (line, column);
        let mut advance = |chars: &mut core::iter::Peekable<core::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let tok = match c {
            c if c.is_whitespace() => {
                advance(&mut chars);
                continue;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    advance(&mut chars);
                }
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        advance(&mut chars);
                    } else {
                        break;
                    }
                }
                Tok::Ident(ident)
            }
            c if c.is_ascii_digit() => {
                let mut value: u64 = 0;
                while let Some(&c) = chars.peek() {
                    let Some(d) = c.to_digit(10) else { break };
                    value = value.checked_mul(10).and_then(|v| v.checked_add(d as u64)).ok_or(
                        ParseError {
                            line: start_line,
                            column: start_column,
                            kind: ParseErrorKind::Syntax("integer too large".to_string()),
                        },
                    )?;
                    advance(&mut chars);
                }
                Tok::Number(value)
            }
            _ => {
                advance(&mut chars);
                match c {
                    '-' => Tok::Minus,
                    '^' => Tok::Caret,
                    '<' => Tok::Lt,
                    '>' => Tok::Gt,
                    '|' => Tok::Pipe,
                    ',' => Tok::Comma,
                    '=' => Tok::Equals,
                    other => {
                        return Err(ParseError {
                            line: start_line,
                            column: start_column,
                            kind: ParseErrorKind::Syntax(alloc::format!("unexpected character `{other}`")),
                        })
                    }
                }
            }
        };
        out.push(Spanned { tok, line: start_line, column: start_column });
    }
    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    alphabet: Alphabet,
    monoid: bool,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0, alphabet: Alphabet::default(), monoid: false })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError { line: t.line, column: t.column, kind }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let msg = alloc::format!("expected {expected}, found {}", self.peek());
        self.error_here(ParseErrorKind::Syntax(msg))
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        if *self.peek() == Tok::Number(1) {
            self.bump();
            return Ok(Word::empty());
        }
        if !matches!(self.peek(), Tok::Ident(_)) {
            return Err(self.unexpected("a word"));
        }
        let mut letters = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            let start = self.bump();
            let Tok::Ident(name) = &start.tok else { unreachable!() };
            let index = self.alphabet.index_of(name).ok_or(ParseError {
                line: start.line,
                column: start.column,
                kind: ParseErrorKind::UnknownGenerator(name.clone()),
            })?;
            let mut exponent: i64 = 1;
            if *self.peek() == Tok::Caret {
                self.bump();
                let negative = if *self.peek() == Tok::Minus {
                    self.bump();
                    true
                } else {
                    false
                };
                match *self.peek() {
                    Tok::Number(0) => return Err(self.error_here(ParseErrorKind::ZeroExponent)),
                    Tok::Number(n) if n <= i64::MAX as u64 => {
                        self.bump();
                        exponent = if negative { -(n as i64) } else { n as i64 };
                    }
                    _ => return Err(self.unexpected("an exponent")),
                }
            }
            if exponent < 0 && self.monoid {
                return Err(ParseError {
                    line: start.line,
                    column: start.column,
                    kind: ParseErrorKind::NegativeLetterInMonoid(name.clone()),
                });
            }
            letters.extend(Word::power(Letter::pos(index), exponent).into_letters());
        }
        Ok(Word::from_letters(letters))
    }

    fn presentation(&mut self) -> Result<Presentation, ParseError> {
        let kind = match self.peek().clone() {
            Tok::Ident(k) => match PresentationKind::from_keyword(&k) {
                Some(kind) => {
                    self.bump();
                    kind
                }
                None => return Err(self.error_here(ParseErrorKind::UnknownKind(k))),
            },
            _ => return Err(self.unexpected("`gp`, `mon` or `inv`")),
        };
        self.expect(Tok::Lt, "`<`")?;
        if *self.peek() != Tok::Pipe {
            loop {
                match self.peek().clone() {
                    Tok::Ident(name) => {
                        if self.alphabet.index_of(&name).is_some() {
                            return Err(self.error_here(ParseErrorKind::DuplicateGenerator(name)));
                        }
                        self.alphabet.push(name).expect("lexer only yields identifiers");
                        self.bump();
                    }
                    _ => return Err(self.unexpected("a generator name")),
                }
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::Pipe, "`,` or `|`")?;
        self.monoid = kind == PresentationKind::Monoid;
        let relations = self.relations()?;
        self.expect(Tok::Gt, "`,` or `>`")?;
        self.expect(Tok::Eof, "end of input")?;
        Ok(Presentation::new(kind, core::mem::take(&mut self.alphabet), relations))
    }

    fn relations(&mut self) -> Result<Vec<Relation>, ParseError> {
        let mut relations = Vec::new();
        if *self.peek() == Tok::Gt {
            return Ok(relations);
        }
        loop {
            let lhs = self.word()?;
            self.expect(Tok::Equals, "`=`")?;
            let rhs = self.word()?;
            relations.push(Relation::new(lhs, rhs));
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        Ok(relations)
    }
}

/// Parses a presentation in the text format described in the module docs.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    Parser::new(text)?.presentation()
}

/// Parses a single word over `alphabet`.
pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word, ParseError> {
    let mut parser = Parser::new(text)?;
    parser.alphabet = alphabet.clone();
    let word = parser.word()?;
    parser.expect(Tok::Eof, "end of input")?;
    Ok(word)
}

/// Parses a comma-separated list of words; the empty string is the empty list.
pub fn parse_word_list(text: &str, alphabet: &Alphabet) -> Result<Vec<Word>, ParseError> {
    let mut parser = Parser::new(text)?;
    parser.alphabet = alphabet.clone();
    let mut words = Vec::new();
    if *parser.peek() == Tok::Eof {
        return Ok(words);
    }
    loop {
        words.push(parser.word()?);
        if *parser.peek() == Tok::Comma {
            parser.bump();
        } else {
            break;
        }
    }
    parser.expect(Tok::Eof, "`,` or end of input")?;
    Ok(words)
}

/// Generator names mentioned in a word text, in order of first appearance.
pub fn word_names(text: &str) -> Result<Vec<String>, ParseError> {
    let mut names: Vec<String> = Vec::new();
    for t in lex(text)? {
        if let Tok::Ident(name) = t.tok {
            if !names.contains(&name) {
                names.push(name);
            }
        }
    }
    Ok(names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn parses_group_example() {
        let p = parse_presentation("gp< a, b | a b a = 1 >").unwrap();
        assert_eq!(p.kind, PresentationKind::Group);
        assert_eq!(p.alphabet.names(), &["a", "b"]);
        assert_eq!(p.relations.len(), 1);
        let aba = Word::from_letters(vec![Letter::pos(0), Letter::pos(1), Letter::pos(0)]);
        assert_eq!(p.relations[0], Relation::relator(aba));
    }

    #[test]
    fn parses_free_monoid() {
        let p = parse_presentation("mon< a | >").unwrap();
        assert_eq!(p.kind, PresentationKind::Monoid);
        assert!(p.relations.is_empty());
    }

    #[test]
    fn parses_inverse_example() {
        let p = parse_presentation("inv< a, b, c | a a^-1 = 1, b b^-1 = 1, c c^-1 = 1, a b = a c >").unwrap();
        assert_eq!(p.kind, PresentationKind::InverseMonoid);
        assert_eq!(p.relations.len(), 4);
        assert!(!p.is_special());
        assert_eq!(p.relations[3].rhs, Word::from_letters(vec![Letter::pos(0), Letter::pos(2)]));
    }

    #[test]
    fn exponents_expand_per_letter() {
        let p = parse_presentation("gp< a, b | a^3 b^-2 = 1 >").unwrap();
        assert_eq!(p.to_string(), "gp< a, b | a a a b^-1 b^-1 = 1 >");
    }

    #[test]
    fn relators_are_not_reduced() {
        let p = parse_presentation("gp< a | a a^-1 a = 1 >").unwrap();
        assert_eq!(p.relations[0].lhs.len(), 3);
    }

    #[test]
    fn comments_and_whitespace() {
        let text = "# the two-generator example\ngp<a,b|\n  a b a = 1   # relator\n>\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.to_string(), "gp< a, b | a b a = 1 >");
    }

    #[test]
    fn error_positions() {
        let err = parse_presentation("gp< a, b |\n a c = 1 >").unwrap_err();
        assert_eq!((err.line, err.column), (2, 4));
        assert_eq!(err.kind, ParseErrorKind::UnknownGenerator("c".into()));

        let err = parse_presentation("mon< a, b | a b^-1 = 1 >").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NegativeLetterInMonoid("b".into()));
        assert_eq!((err.line, err.column), (1, 15));

        let err = parse_presentation("gp< a | a = >").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(err.column, 13);

        let err = parse_presentation("grp< a | >").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownKind("grp".into()));

        let err = parse_presentation("gp< a, a | >").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateGenerator("a".into()));

        let err = parse_presentation("gp< a | a^0 = 1 >").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ZeroExponent);

        let err = parse_presentation("gp< a | a = 1 > extra").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));

        let err = parse_presentation("gp< a | a $ 1 >").unwrap_err();
        assert_eq!(err.column, 11);
    }

    #[test]
    fn standalone_words() {
        let alphabet = Alphabet::new(["a", "b"]).unwrap();
        assert_eq!(parse_word("1", &alphabet).unwrap(), Word::empty());
        assert_eq!(
            parse_word("a b^-1", &alphabet).unwrap(),
            Word::from_letters(vec![Letter::pos(0), Letter::neg(1)])
        );
        assert!(parse_word("a 1", &alphabet).is_err());
        assert_eq!(parse_word_list("a, b^2, 1", &alphabet).unwrap().len(), 3);
        assert!(parse_word_list("", &alphabet).unwrap().is_empty());
        assert_eq!(word_names("t w t^-1 w").unwrap(), vec!["t".to_string(), "w".to_string()]);
    }

    fn arb_presentation() -> impl Strategy<Value = Presentation> {
        let kind = prop_oneof![
            Just(PresentationKind::Group),
            Just(PresentationKind::Monoid),
            Just(PresentationKind::InverseMonoid)
        ];
        (kind, 0usize..4).prop_flat_map(|(kind, n)| {
            let letter = (0..n.max(1), any::<bool>());
            let word = proptest::collection::vec(letter, 0..6);
            let relations = if n == 0 {
                Just(Vec::new()).boxed()
            } else {
                proptest::collection::vec((word.clone(), word), 0..4).boxed()
            };
            relations.prop_map(move |rels| {
                let alphabet = Alphabet::new((0..n).map(|i| alloc::format!("x{i}"))).unwrap();
                let to_word = |ls: Vec<(usize, bool)>| -> Word {
                    ls.into_iter()
                        .map(|(i, p)| Letter::new(i, p || kind == PresentationKind::Monoid))
                        .collect()
                };
                let relations =
                    rels.into_iter().map(|(l, r)| Relation::new(to_word(l), to_word(r))).collect();
                Presentation::new(kind, alphabet, relations)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn serialize_then_parse_is_identity(p in arb_presentation()) {
            prop_assert!(p.validate().is_empty());
            let text = p.to_string();
            let back = parse_presentation(&text).unwrap();
            prop_assert_eq!(&back, &p);
            prop_assert_eq!(back.to_string(), text);
        }
    }
}
