//! Prefix generator extraction and presentation transformers.
//!
//! Fresh letters (`s`, `t`, `y`, `z`) take the requested name, or that name
//! followed by the smallest positive integer not already in the alphabet.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::presentation::{Presentation, PresentationKind, Relation};
use crate::words::{Alphabet, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("expected a `{expected}` presentation, got `{found}`")]
    WrongKind { expected: PresentationKind, found: PresentationKind },
    #[error("relation {0} is not of the form w = 1")]
    NotSpecial(usize),
    #[error("`{0}` is not a generator of the presentation")]
    NotInAlphabet(String),
    #[error("the word list must not be empty")]
    EmptyList,
}

/// Literal prefixes of the relators of a special presentation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GeneratorReport {
    /// Every prefix of every relator, the empty one and the relator itself
    /// included, deduplicated as words in order of first appearance.
    pub raw: Vec<Word>,
    /// `raw` without the freely trivial words.
    pub nontrivial: Vec<Word>,
    /// First relator (0-based) each raw word is a prefix of. The empty word
    /// is noted only when some relator exists.
    pub notes: BTreeMap<Word, usize>,
}

impl GeneratorReport {
    fn from_relators<'a>(relators: impl IntoIterator<Item = &'a Word>) -> Self {
        let mut report = GeneratorReport { raw: alloc::vec![Word::empty()], ..Default::default() };
        for (i, relator) in relators.into_iter().enumerate() {
            for prefix in relator.prefixes() {
                if !report.notes.contains_key(&prefix) {
                    report.notes.insert(prefix.clone(), i);
                    if !prefix.is_empty() {
                        report.raw.push(prefix);
                    }
                }
            }
        }
        report.nontrivial = report.raw.iter().filter(|w| !w.free_reduce().is_empty()).cloned().collect();
        report
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> DisplayReport<'a> {
        DisplayReport { report: self, alphabet }
    }
}

pub struct DisplayReport<'a> {
    report: &'a GeneratorReport,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayReport<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, label: &str, words: &[Word]| -> fmt::Result {
            f.write_str(label)?;
            f.write_str(":")?;
            for (i, w) in words.iter().enumerate() {
                f.write_str(if i == 0 { " " } else { ", " })?;
                write!(f, "{}", self.alphabet.display(w))?;
            }
            writeln!(f)
        };
        list(f, "raw", &self.report.raw)?;
        list(f, "nontrivial", &self.report.nontrivial)
    }
}

fn require_kind(p: &Presentation, expected: PresentationKind) -> Result<(), ConstructionError> {
    if p.kind != expected {
        return Err(ConstructionError::WrongKind { expected, found: p.kind });
    }
    Ok(())
}

fn require_special(p: &Presentation) -> Result<(), ConstructionError> {
    match p.relations.iter().position(|r| !r.is_special()) {
        Some(i) => Err(ConstructionError::NotSpecial(i)),
        None => Ok(()),
    }
}

fn special_of(p: &Presentation, kind: PresentationKind) -> Result<(), ConstructionError> {
    require_kind(p, kind)?;
    require_special(p)
}

/// Generators of the prefix monoid of a special group presentation.
pub fn prefix_generators(p: &Presentation) -> Result<GeneratorReport, ConstructionError> {
    special_of(p, PresentationKind::Group)?;
    Ok(GeneratorReport::from_relators(p.relators()))
}

/// Generators of the RU-monoid of a special inverse monoid presentation.
pub fn ru_generators(p: &Presentation) -> Result<GeneratorReport, ConstructionError> {
    special_of(p, PresentationKind::InverseMonoid)?;
    Ok(GeneratorReport::from_relators(p.relators()))
}

fn letter_word(index: usize, positive: bool) -> Word {
    Word::letter(Letter::new(index, positive))
}

/// `a a^-1` for every generator `a`.
fn unit_relators(alphabet: &Alphabet) -> impl Iterator<Item = Relation> + '_ {
    (0..alphabet.len()).map(|i| Relation::relator(letter_word(i, true).concat(&letter_word(i, false))))
}

/// `Gp<A | u_i v_i^-1 = 1, a a^-1 = 1>` for `Mon<A | u_i = v_i>`.
pub fn monoid_to_group(p: &Presentation) -> Result<Presentation, ConstructionError> {
    require_kind(p, PresentationKind::Monoid)?;
    let relations = p
        .relations
        .iter()
        .map(|r| Relation::relator(r.to_relator()))
        .chain(unit_relators(&p.alphabet))
        .collect();
    Ok(Presentation::new(PresentationKind::Group, p.alphabet.clone(), relations))
}

fn resolve(alphabet: &Alphabet, names: &[impl AsRef<str>]) -> Result<Vec<usize>, ConstructionError> {
    let mut indices = Vec::new();
    for name in names {
        let name = name.as_ref();
        let index = alphabet.index_of(name).ok_or_else(|| ConstructionError::NotInAlphabet(name.into()))?;
        if !indices.contains(&index) {
            indices.push(index);
        }
    }
    Ok(indices)
}

/// `Gp<A, s, t | s w_i s^-1 = 1, t b t^-1 t b^-1 t^-1 = 1 (b in B)>`.
pub fn star_construction(p: &Presentation, subset: &[impl AsRef<str>]) -> Result<Presentation, ConstructionError> {
    special_of(p, PresentationKind::Group)?;
    let subset = resolve(&p.alphabet, subset)?;
    let mut alphabet = p.alphabet.clone();
    let s = alphabet.push_fresh("s");
    let t = alphabet.push_fresh("t");
    let (s_pos, s_neg) = (letter_word(s, true), letter_word(s, false));
    let (t_pos, t_neg) = (letter_word(t, true), letter_word(t, false));
    let mut relations: Vec<Relation> = p
        .relators()
        .map(|w| Relation::relator(Word::concat_all([&s_pos, w, &s_neg])))
        .collect();
    for b in subset {
        let (b_pos, b_neg) = (letter_word(b, true), letter_word(b, false));
        relations.push(Relation::relator(Word::concat_all([&t_pos, &b_pos, &t_neg, &t_pos, &b_neg, &t_neg])));
    }
    Ok(Presentation::new(PresentationKind::Group, alphabet, relations))
}

/// Appends a fresh generator `y` with relator `y y^-1`.
pub fn add_free_generator(p: &Presentation) -> Result<Presentation, ConstructionError> {
    special_of(p, PresentationKind::Group)?;
    let mut alphabet = p.alphabet.clone();
    let y = alphabet.push_fresh("y");
    let mut relations = p.relations.clone();
    relations.push(Relation::relator(letter_word(y, true).concat(&letter_word(y, false))));
    Ok(Presentation::new(PresentationKind::Group, alphabet, relations))
}

/// Drops the generators that no relator mentions.
pub fn group_case_restriction(p: &Presentation) -> Result<Presentation, ConstructionError> {
    special_of(p, PresentationKind::Group)?;
    let used: Vec<usize> = (0..p.alphabet.len()).filter(|&i| p.relators().any(|w| w.mentions(i))).collect();
    let mut renumber = alloc::vec![usize::MAX; p.alphabet.len()];
    for (new, &old) in used.iter().enumerate() {
        renumber[old] = new;
    }
    let alphabet = Alphabet::new(used.iter().map(|&i| p.alphabet.names()[i].clone()).collect::<Vec<String>>())
        .expect("subset of a valid alphabet");
    let relations = p
        .relators()
        .map(|w| {
            Relation::relator(w.letters().iter().map(|l| Letter::new(renumber[l.index()], l.is_positive())).collect())
        })
        .collect();
    Ok(Presentation::new(PresentationKind::Group, alphabet, relations))
}

/// The two equivalent inverse monoid presentations built from an
/// RC-presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseOfRc {
    /// `Inv<A | a a^-1 = 1, u_i v_i^-1 = 1>`.
    pub special: Presentation,
    /// `Inv<A | a a^-1 = 1, u_i = v_i>`.
    pub relations: Presentation,
}

pub fn special_inverse_of_rc(p: &Presentation) -> Result<InverseOfRc, ConstructionError> {
    require_kind(p, PresentationKind::Monoid)?;
    let units: Vec<Relation> = unit_relators(&p.alphabet).collect();
    let special = units.iter().cloned().chain(p.relations.iter().map(|r| Relation::relator(r.to_relator())));
    let relations = units.iter().cloned().chain(p.relations.iter().cloned());
    Ok(InverseOfRc {
        special: Presentation::new(PresentationKind::InverseMonoid, p.alphabet.clone(), special.collect()),
        relations: Presentation::new(PresentationKind::InverseMonoid, p.alphabet.clone(), relations.collect()),
    })
}

/// `u_1 u_1^-1 u_2 u_2^-1 ... u_m u_m^-1`.
pub fn build_e_word(us: &[Word]) -> Result<Word, ConstructionError> {
    if us.is_empty() {
        return Err(ConstructionError::EmptyList);
    }
    Ok(Word::from_letters(us.iter().flat_map(|u| u.concat(&u.invert()).into_letters()).collect()))
}

/// Both forms of `M_{Q,W}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mqw {
    /// `Inv<A, t | f r_1 = 1, r_i = 1 (i >= 2)>`.
    pub compact: Presentation,
    /// `Inv<A, t | r_i = 1, a a^-1 = a^-1 a = 1, t w t^-1 t w^-1 t^-1 = 1>`.
    pub expanded: Presentation,
    /// `f = e(a_1, ..., a_n, t w_1 t^-1, ..., t w_k t^-1, a_1^-1, ..., a_n^-1)`.
    pub f: Word,
    /// Index of the stable letter `t`.
    pub stable: usize,
}

/// `q` and `w` are words over `alphabet`; the first word of `q` is the
/// distinguished relator `r_1`.
pub fn build_mqw(alphabet: &Alphabet, q: &[Word], w: &[Word]) -> Result<Mqw, ConstructionError> {
    let Some((r1, rest)) = q.split_first() else {
        return Err(ConstructionError::EmptyList);
    };
    let mut full = alphabet.clone();
    let t = full.push_fresh("t");
    let (t_pos, t_neg) = (letter_word(t, true), letter_word(t, false));
    let conjugates: Vec<Word> = w.iter().map(|w| Word::concat_all([&t_pos, w, &t_neg])).collect();
    let mut factors: Vec<Word> = (0..alphabet.len()).map(|i| letter_word(i, true)).collect();
    factors.extend(conjugates.iter().cloned());
    factors.extend((0..alphabet.len()).map(|i| letter_word(i, false)));
    let f = if factors.is_empty() { Word::empty() } else { build_e_word(&factors)? };

    let mut compact = alloc::vec![Relation::relator(f.concat(r1))];
    compact.extend(rest.iter().cloned().map(Relation::relator));

    let mut expanded: Vec<Relation> = q.iter().cloned().map(Relation::relator).collect();
    for i in 0..alphabet.len() {
        let (a, a_inv) = (letter_word(i, true), letter_word(i, false));
        expanded.push(Relation::relator(a.concat(&a_inv)));
        expanded.push(Relation::relator(a_inv.concat(&a)));
    }
    for c in &conjugates {
        expanded.push(Relation::relator(c.concat(&c.invert())));
    }
    Ok(Mqw {
        compact: Presentation::new(PresentationKind::InverseMonoid, full.clone(), compact),
        expanded: Presentation::new(PresentationKind::InverseMonoid, full, expanded),
        f,
        stable: t,
    })
}

/// Base relators plus `z^-1 w z w^-1` for every sampled `w`, with `z` a
/// fresh stable letter named after `stable`.
pub fn hnn_identity_extension(base: &Presentation, words: &[Word], stable: &str) -> Result<Presentation, ConstructionError> {
    require_kind(base, PresentationKind::Group)?;
    let mut alphabet = base.alphabet.clone();
    let z = alphabet.push_fresh(stable);
    let (z_pos, z_neg) = (letter_word(z, true), letter_word(z, false));
    let mut relations = base.relations.clone();
    for w in words {
        relations.push(Relation::relator(Word::concat_all([&z_neg, w, &z_pos, &w.invert()])));
    }
    Ok(Presentation::new(PresentationKind::Group, alphabet, relations))
}
