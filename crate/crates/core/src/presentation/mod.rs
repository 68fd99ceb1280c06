//! Presentations of groups, monoids and inverse monoids.
//!
//! Relations are always stored as pairs `lhs = rhs`; a group relator `w` is
//! the pair `(w, 1)`. Relation words are kept exactly as written: nothing is
//! reduced on parse, since prefix sets depend on the literal words.

mod parse;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::words::{is_identifier, Alphabet, Letter, Word};

pub use parse::{parse_presentation, parse_word, parse_word_list, word_names, ParseError, ParseErrorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresentationKind {
    Group,
    Monoid,
    InverseMonoid,
}

impl PresentationKind {
    pub fn keyword(self) -> &'static str {
        match self {
            PresentationKind::Group => "gp",
            PresentationKind::Monoid => "mon",
            PresentationKind::InverseMonoid => "inv",
        }
    }

    pub fn from_keyword(keyword: &str) -> Option<Self> {
        match keyword {
            "gp" => Some(PresentationKind::Group),
            "mon" => Some(PresentationKind::Monoid),
            "inv" => Some(PresentationKind::InverseMonoid),
            _ => None,
        }
    }
}

impl fmt::Display for PresentationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    pub fn new(lhs: Word, rhs: Word) -> Self {
        Relation { lhs, rhs }
    }

    /// The relation `w = 1`.
    pub fn relator(word: Word) -> Self {
        Relation { lhs: word, rhs: Word::empty() }
    }

    pub fn is_special(&self) -> bool {
        self.rhs.is_empty()
    }

    /// `lhs rhs^-1`.
    pub fn to_relator(&self) -> Word {
        self.lhs.concat(&self.rhs.invert())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    pub kind: PresentationKind,
    pub alphabet: Alphabet,
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn new(kind: PresentationKind, alphabet: Alphabet, relations: Vec<Relation>) -> Self {
        Presentation { kind, alphabet, relations }
    }

    /// Special iff every relation has the form `w = 1`.
    pub fn is_special(&self) -> bool {
        self.relations.iter().all(Relation::is_special)
    }

    /// Left-hand sides of a special presentation.
    pub fn relators(&self) -> impl Iterator<Item = &Word> {
        self.relations.iter().map(|r| &r.lhs)
    }

    pub fn display_word<'a>(&'a self, word: &'a Word) -> crate::words::DisplayWord<'a> {
        self.alphabet.display(word)
    }

    /// Checks every invariant of the data model. An empty result means the
    /// presentation is valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diagnostics = Vec::new();
        for (i, name) in self.alphabet.names().iter().enumerate() {
            if !is_identifier(name) {
                diagnostics.push(Diagnostic::InvalidName(name.clone()));
            }
            if self.alphabet.names()[..i].contains(name) {
                diagnostics.push(Diagnostic::DuplicateName(name.clone()));
            }
        }
        for (relation, r) in self.relations.iter().enumerate() {
            for (side, word) in [(Side::Left, &r.lhs), (Side::Right, &r.rhs)] {
                for letter in word.letters() {
                    if letter.index() >= self.alphabet.len() {
                        diagnostics.push(Diagnostic::UnknownGenerator {
                            relation,
                            side,
                            index: letter.index(),
                        });
                    } else if self.kind == PresentationKind::Monoid && !letter.is_positive() {
                        diagnostics.push(Diagnostic::NegativeLetter {
                            relation,
                            side,
                            name: self.alphabet.names()[letter.index()].clone(),
                        });
                    }
                }
            }
        }
        diagnostics
    }

    /// Eliminates the generator `generator` by substituting `replacement`
    /// for it in every relation, then freely reduces both sides.
    pub fn tietze_substitute(
        &self,
        generator: Letter,
        replacement: &Word,
    ) -> Result<Presentation, TietzeError> {
        if self.kind != PresentationKind::Group {
            return Err(TietzeError::NotGroup(self.kind));
        }
        if !generator.is_positive() {
            return Err(TietzeError::NegativeGenerator);
        }
        let removed = generator.index();
        if removed >= self.alphabet.len() {
            return Err(TietzeError::UnknownGenerator(removed));
        }
        if replacement.mentions(removed) {
            return Err(TietzeError::SelfReferential);
        }
        if let Some(bad) = replacement.max_index().filter(|&i| i >= self.alphabet.len()) {
            return Err(TietzeError::UnknownGenerator(bad));
        }
        let shift = |index: usize| if index > removed { index - 1 } else { index };
        let shifted_replacement: Word = replacement
            .letters()
            .iter()
            .map(|l| Letter::new(shift(l.index()), l.is_positive()))
            .collect();
        let image = |index: usize| {
            if index == removed {
                shifted_replacement.clone()
            } else {
                Word::letter(Letter::pos(shift(index)))
            }
        };
        let alphabet = Alphabet::new(
            self.alphabet
                .names()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != removed)
                .map(|(_, n)| n.clone()),
        )
        .expect("subset of a valid alphabet");
        let relations = self
            .relations
            .iter()
            .map(|r| {
                Relation::new(
                    r.lhs.substitute(image).free_reduce(),
                    r.rhs.substitute(image).free_reduce(),
                )
            })
            .collect();
        Ok(Presentation::new(PresentationKind::Group, alphabet, relations))
    }
}

/// Canonical text form; `parse_presentation` inverts it exactly.
impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}<", self.kind)?;
        if !self.alphabet.is_empty() {
            write!(f, " {}", self.alphabet.names().join(", "))?;
        }
        f.write_str(" |")?;
        for (i, r) in self.relations.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { ", " })?;
            write!(f, "{} = {}", self.alphabet.display(&r.lhs), self.alphabet.display(&r.rhs))?;
        }
        f.write_str(" >")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// A violated presentation invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    InvalidName(String),
    DuplicateName(String),
    UnknownGenerator { relation: usize, side: Side, index: usize },
    NegativeLetter { relation: usize, side: Side, name: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::InvalidName(name) => write!(f, "invalid generator name `{name}`"),
            Diagnostic::DuplicateName(name) => write!(f, "generator `{name}` declared twice"),
            Diagnostic::UnknownGenerator { relation, side, index } => write!(
                f,
                "relation {} ({side} side) uses undeclared generator #{index}",
                relation + 1
            ),
            Diagnostic::NegativeLetter { relation, side, name } => write!(
                f,
                "relation {} ({side} side) uses `{name}^-1` in a monoid presentation",
                relation + 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TietzeError {
    #[error("Tietze substitution needs a group presentation, got `{0}`")]
    NotGroup(PresentationKind),
    #[error("the eliminated generator must be given as a positive letter")]
    NegativeGenerator,
    #[error("generator #{0} is not in the alphabet")]
    UnknownGenerator(usize),
    #[error("the replacement word mentions the eliminated generator")]
    SelfReferential,
}
