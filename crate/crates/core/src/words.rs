//! Alphabets, signed letters and words over the doubled alphabet.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("duplicate generator name `{0}`")]
    Duplicate(String),
}

/// Returns true for names of the form `[a-zA-Z_][a-zA-Z0-9_]*`.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An ordered list of distinct generator names.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut alphabet = Alphabet::default();
        for name in names {
            alphabet.push(name)?;
        }
        Ok(alphabet)
    }

    /// Appends a generator and returns its index.
    pub fn push(&mut self, name: impl Into<String>) -> Result<usize, AlphabetError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(AlphabetError::InvalidName(name));
        }
        if self.index_of(&name).is_some() {
            return Err(AlphabetError::Duplicate(name));
        }
        self.names.push(name);
        Ok(self.names.len() - 1)
    }

    /// Appends `base`, or `base1`, `base2`, ... for the first name not
    /// already taken, and returns the index of the new generator.
    pub fn push_fresh(&mut self, base: &str) -> usize {
        let name = self.fresh_name(base);
        self.push(name).expect("fresh names are valid and unused")
    }

    pub fn fresh_name(&self, base: &str) -> String {
        if self.index_of(base).is_none() {
            return base.to_string();
        }
        (1u64..)
            .map(|k| alloc::format!("{base}{k}"))
            .find(|candidate| self.index_of(candidate).is_none())
            .expect("unbounded search")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> Option<&str> {
        self.names.get(index).map(String::as_str)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// All signed letters in the order `a, a^-1, b, b^-1, ...`.
    pub fn signed_letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).flat_map(|i| [Letter::pos(i), Letter::neg(i)])
    }

    /// All positive letters in alphabet order.
    pub fn positive_letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(Letter::pos)
    }

    pub fn display<'a>(&'a self, word: &'a Word) -> DisplayWord<'a> {
        DisplayWord { alphabet: self, word }
    }
}

/// A generator or its formal inverse.
///
/// Ordered by generator index first, with `a < a^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    index: u32,
    inverse: bool,
}

impl Letter {
    pub fn pos(index: usize) -> Self {
        Letter { index: index as u32, inverse: false }
    }

    pub fn neg(index: usize) -> Self {
        Letter { index: index as u32, inverse: true }
    }

    pub fn new(index: usize, positive: bool) -> Self {
        Letter { index: index as u32, inverse: !positive }
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn is_positive(self) -> bool {
        !self.inverse
    }

    /// +1 or -1.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter { index: self.index, inverse: !self.inverse }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.index == other.index && self.inverse != other.inverse
    }

    /// Position in the order `a, a^-1, b, b^-1, ...`.
    pub fn ordinal(self) -> usize {
        2 * self.index() + usize::from(self.inverse)
    }

    pub fn from_ordinal(ordinal: usize) -> Self {
        Letter::new(ordinal / 2, ordinal.is_multiple_of(2))
    }
}

/// A finite sequence of signed letters. The empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn letter(letter: Letter) -> Self {
        Word { letters: alloc::vec![letter] }
    }

    /// `letter^exponent`; negative exponents give inverse letters.
    pub fn power(letter: Letter, exponent: i64) -> Self {
        let unit = if exponent < 0 { letter.inverse() } else { letter };
        Word { letters: alloc::vec![unit; exponent.unsigned_abs() as usize] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn concat_all<'a>(words: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut letters = Vec::new();
        for w in words {
            letters.extend_from_slice(&w.letters);
        }
        Word { letters }
    }

    /// The formal inverse: letters reversed, signs flipped.
    pub fn invert(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// The unique freely reduced word equal to `self` in the free group.
    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.len());
        for &letter in &self.letters {
            match stack.last() {
                Some(&top) if top.cancels(letter) => {
                    stack.pop();
                }
                _ => stack.push(letter),
            }
        }
        Word { letters: stack }
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|pair| !pair[0].cancels(pair[1]))
    }

    /// All `len + 1` prefixes, shortest first, including the empty word and
    /// the word itself.
    pub fn prefixes(&self) -> Vec<Word> {
        (0..=self.len()).map(|k| self.prefix(k)).collect()
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word { letters: self.letters[..len].to_vec() }
    }

    pub fn suffix_from(&self, start: usize) -> Word {
        Word { letters: self.letters[start..].to_vec() }
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.letters.starts_with(&other.letters)
    }

    /// Sum of the signs of all letters.
    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.sign()).sum()
    }

    /// Sum of the signs of the letters with the given generator index.
    pub fn exponent_sum_of(&self, index: usize) -> i64 {
        self.letters.iter().filter(|l| l.index() == index).map(|l| l.sign()).sum()
    }

    pub fn mentions(&self, index: usize) -> bool {
        self.letters.iter().any(|l| l.index() == index)
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| l.is_positive())
    }

    /// Largest generator index used, if any.
    pub fn max_index(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.index()).max()
    }

    /// Replaces every letter `x^e` by `image(x)^e`.
    pub fn substitute(&self, mut image: impl FnMut(usize) -> Word) -> Word {
        let mut letters = Vec::new();
        for &letter in &self.letters {
            let w = image(letter.index());
            if letter.is_positive() {
                letters.extend_from_slice(&w.letters);
            } else {
                letters.extend(w.letters.iter().rev().map(|l| l.inverse()));
            }
        }
        Word { letters }
    }

    /// Shortlex comparison: shorter words first, then lexicographic by
    /// letter order.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.letters.cmp(&other.letters))
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word { letters }
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word { letters: iter.into_iter().collect() }
    }
}

/// Text form of a word: space-separated terms, one per letter, `1` for the
/// empty word.
pub struct DisplayWord<'a> {
    alphabet: &'a Alphabet,
    word: &'a Word,
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, letter) in self.word.letters().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match self.alphabet.name(letter.index()) {
                Some(name) => f.write_str(name)?,
                None => write!(f, "#{}", letter.index())?,
            }
            if !letter.is_positive() {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn a() -> Letter {
        Letter::pos(0)
    }
    fn b() -> Letter {
        Letter::pos(1)
    }

    fn w(letters: &[Letter]) -> Word {
        Word::from_letters(letters.to_vec())
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(w(&[a(), a().inverse(), b()]).free_reduce(), w(&[b()]));
        assert_eq!(Word::empty().free_reduce(), Word::empty());
        assert_eq!(w(&[b(), a(), a().inverse(), a()]).free_reduce(), w(&[b(), a()]));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w(&[a(), b()]).invert(), w(&[b().inverse(), a().inverse()]));
        assert_eq!(Word::empty().invert(), Word::empty());
        assert_eq!(w(&[a().inverse()]).invert(), w(&[a()]));
    }

    #[test]
    fn prefixes_of_aba_and_aab() {
        let aba = w(&[a(), b(), a()]);
        assert_eq!(
            aba.prefixes(),
            vec![Word::empty(), w(&[a()]), w(&[a(), b()]), aba.clone()]
        );
        assert_eq!(Word::empty().prefixes(), vec![Word::empty()]);
        let aab = w(&[a(), a(), b()]);
        assert_eq!(
            aab.prefixes(),
            vec![Word::empty(), w(&[a()]), w(&[a(), a()]), aab.clone()]
        );
    }

    #[test]
    fn is_reduced_examples() {
        assert!(w(&[a(), b()]).is_reduced());
        assert!(!w(&[a(), a().inverse()]).is_reduced());
        assert!(Word::empty().is_reduced());
    }

    #[test]
    fn fresh_names_take_smallest_suffix() {
        let mut alphabet = Alphabet::new(["a", "t", "t1"]).unwrap();
        assert_eq!(alphabet.fresh_name("s"), "s");
        assert_eq!(alphabet.fresh_name("t"), "t2");
        assert_eq!(alphabet.push_fresh("y"), 3);
        assert_eq!(alphabet.push_fresh("y"), 4);
        assert_eq!(alphabet.name(4), Some("y1"));
    }

    #[test]
    fn alphabet_rejects_bad_names() {
        assert_eq!(
            Alphabet::new(["a", "a"]),
            Err(AlphabetError::Duplicate("a".into()))
        );
        assert!(matches!(Alphabet::new(["1x"]), Err(AlphabetError::InvalidName(_))));
        assert!(Alphabet::new(["_x9", "B"]).is_ok());
    }

    #[test]
    fn display_uses_one_term_per_letter() {
        let alphabet = Alphabet::new(["a", "b"]).unwrap();
        let word = w(&[a(), a(), b().inverse()]);
        assert_eq!(alphabet.display(&word).to_string(), "a a b^-1");
        assert_eq!(alphabet.display(&Word::empty()).to_string(), "1");
    }

    // Independent right-to-left reducer for the confluence check.
    fn reduce_right_to_left(word: &Word) -> Word {
        let mut stack: Vec<Letter> = Vec::new();
        for &letter in word.letters().iter().rev() {
            match stack.last() {
                Some(&top) if top.cancels(letter) => {
                    stack.pop();
                }
                _ => stack.push(letter),
            }
        }
        stack.reverse();
        Word::from_letters(stack)
    }

    fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec((0usize..3, any::<bool>()), 0..=max_len)
            .prop_map(|ls| ls.into_iter().map(|(i, p)| Letter::new(i, p)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn reduction_is_confluent(word in arb_word(20)) {
            prop_assert_eq!(word.free_reduce(), reduce_right_to_left(&word));
        }

        #[test]
        fn reduction_laws(word in arb_word(20)) {
            let reduced = word.free_reduce();
            prop_assert!(reduced.is_reduced());
            prop_assert_eq!(reduced.free_reduce(), reduced.clone());
            prop_assert_eq!(word.invert().free_reduce(), reduced.invert());
            prop_assert!(word.concat(&word.invert()).free_reduce().is_empty());
            prop_assert_eq!(word.is_reduced(), reduced == word);
            prop_assert_eq!(word.invert().invert(), word.clone());
        }

        #[test]
        fn prefixes_are_initial_segments(word in arb_word(12)) {
            let prefixes = word.prefixes();
            prop_assert_eq!(prefixes.len(), word.len() + 1);
            for (k, p) in prefixes.iter().enumerate() {
                prop_assert_eq!(p.len(), k);
                prop_assert!(word.starts_with(p));
            }
        }
    }
}
