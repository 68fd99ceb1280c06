//! Munn trees and the word problem of free inverse monoids.
//!
//! A word `w` over `A ∪ A^-1` traces a walk in the Cayley graph of the free
//! group; the set of reduced words it visits spans a finite subtree, and the
//! reduced form of `w` marks where the walk ends. Two words are equal in the
//! free inverse monoid iff both data coincide.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::words::{Alphabet, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MunnTree {
    vertices: BTreeSet<Word>,
    terminal: Word,
}

impl MunnTree {
    pub fn new(word: &Word) -> Self {
        let mut vertices = BTreeSet::new();
        vertices.insert(Word::empty());
        let mut current: Vec<Letter> = Vec::with_capacity(word.len());
        for &letter in word.letters() {
            if current.last().is_some_and(|last| last.cancels(letter)) {
                current.pop();
            } else {
                current.push(letter);
                vertices.insert(Word::from_letters(current.clone()));
            }
        }
        MunnTree { vertices, terminal: Word::from_letters(current) }
    }

    pub fn vertices(&self) -> &BTreeSet<Word> {
        &self.vertices
    }

    pub fn terminal(&self) -> &Word {
        &self.terminal
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Vertices in shortlex order.
    pub fn sorted_vertices(&self) -> Vec<&Word> {
        let mut sorted: Vec<&Word> = self.vertices.iter().collect();
        sorted.sort_by(|a, b| a.shortlex_cmp(b));
        sorted
    }

    pub fn is_idempotent(&self) -> bool {
        self.terminal.is_empty()
    }

    /// Every nonempty vertex has its parent (last letter removed) present.
    pub fn is_subtree(&self) -> bool {
        self.vertices.contains(&Word::empty())
            && self.vertices.contains(&self.terminal)
            && self
                .vertices
                .iter()
                .all(|v| v.is_empty() || (v.is_reduced() && self.vertices.contains(&v.prefix(v.len() - 1))))
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> DisplayTree<'a> {
        DisplayTree { tree: self, alphabet }
    }
}

pub fn munn_tree(word: &Word) -> MunnTree {
    MunnTree::new(word)
}

pub fn fim_equal(u: &Word, v: &Word) -> bool {
    MunnTree::new(u) == MunnTree::new(v)
}

pub fn fim_is_idempotent(word: &Word) -> bool {
    MunnTree::new(word).is_idempotent()
}

/// `vertices: 1, a, b` and `terminal: a` on two lines.
pub struct DisplayTree<'a> {
    tree: &'a MunnTree,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayTree<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("vertices:")?;
        for (i, v) in self.tree.sorted_vertices().into_iter().enumerate() {
            f.write_str(if i == 0 { " " } else { ", " })?;
            write!(f, "{}", self.alphabet.display(v))?;
        }
        writeln!(f)?;
        writeln!(f, "terminal: {}", self.alphabet.display(&self.tree.terminal))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_word;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    fn w(text: &str) -> Word {
        parse_word(text, &ab()).unwrap()
    }

    fn set(words: &[&str]) -> BTreeSet<Word> {
        words.iter().map(|t| w(t)).collect()
    }

    #[test]
    fn trees() {
        let t = munn_tree(&w("a"));
        assert_eq!(t.vertices(), &set(&["1", "a"]));
        assert_eq!(t.terminal(), &w("a"));
        assert_eq!(munn_tree(&w("a a^-1 a")), t);
        let t = munn_tree(&w("a a^-1 b b^-1"));
        assert_eq!(t.vertices(), &set(&["1", "a", "b"]));
        assert!(t.terminal().is_empty());
    }

    #[test]
    fn equality() {
        assert!(fim_equal(&w("a a^-1 a"), &w("a")));
        assert!(fim_equal(&w("a a^-1 b b^-1"), &w("b b^-1 a a^-1")));
        assert!(!fim_equal(&w("a a^-1"), &w("1")));
    }

    #[test]
    fn idempotents() {
        assert!(fim_is_idempotent(&w("a a^-1")));
        assert!(!fim_is_idempotent(&w("a")));
        assert!(fim_is_idempotent(&w("a a^-1 b b^-1")));
    }

    #[test]
    fn display() {
        let t = munn_tree(&w("b a a^-1 b^-1 a"));
        assert_eq!(t.display(&ab()).to_string(), "vertices: 1, a, b, b a\nterminal: a\n");
    }

    fn word(max: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0usize..3, any::<bool>()), 0..=max)
            .prop_map(|v| v.into_iter().map(|(i, p)| Letter::new(i, p)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn wagner_axioms(u in word(8), v in word(8)) {
            let ui = u.invert();
            let vi = v.invert();
            prop_assert!(fim_equal(&Word::concat_all([&u, &ui, &u]), &u));
            prop_assert!(fim_equal(&Word::concat_all([&u, &ui, &v, &vi]), &Word::concat_all([&v, &vi, &u, &ui])));
        }

        #[test]
        fn trees_are_subtrees(u in word(10)) {
            prop_assert!(munn_tree(&u).is_subtree());
        }

        #[test]
        fn group_image_agrees(u in word(4), v in word(4)) {
            if fim_equal(&u, &v) {
                prop_assert_eq!(u.free_reduce(), v.free_reduce());
            }
        }

        #[test]
        fn idempotent_iff_square_equal(u in word(6)) {
            prop_assert_eq!(fim_is_idempotent(&u), fim_equal(&u.concat(&u), &u));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn congruence(x in word(6), y in word(6), u in word(6)) {
            // Build a guaranteed-equal partner via a Wagner move.
            let v = Word::concat_all([&u, &u.invert(), &u]);
            prop_assert!(fim_equal(&Word::concat_all([&x, &u, &y]), &Word::concat_all([&x, &v, &y])));
        }

        #[test]
        fn congruence_on_equal_pairs(x in word(6), y in word(6), u in word(3), v in word(3)) {
            if fim_equal(&u, &v) {
                prop_assert!(fim_equal(&Word::concat_all([&x, &u, &y]), &Word::concat_all([&x, &v, &y])));
            }
        }
    }
}
