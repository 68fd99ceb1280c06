//! Word-problem oracles and exact normal forms.
//!
//! An oracle decides whether a word represents the identity of some group.
//! Decisive oracles compose: free products of decisive factors and HNN
//! extensions of a decisive base with decisive membership in the associated
//! subgroups are again decisive. Every oracle call is charged against a
//! caller-supplied [`Budget`]; running out yields [`OracleAnswer::Unknown`]
//! instead of looping.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::stallings::SubgroupAutomaton;
use crate::words::{Letter, Word};

/// Default step allowance for a single oracle query.
pub const DEFAULT_STEPS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleAnswer {
    Equal,
    NotEqual,
    /// The budget ran out after `steps` steps.
    Unknown { steps: u64 },
}

impl OracleAnswer {
    pub fn is_decisive(self) -> bool {
        !matches!(self, OracleAnswer::Unknown { .. })
    }
}

impl From<Result<bool, Exhausted>> for OracleAnswer {
    fn from(result: Result<bool, Exhausted>) -> Self {
        match result {
            Ok(true) => OracleAnswer::Equal,
            Ok(false) => OracleAnswer::NotEqual,
            Err(Exhausted { steps }) => OracleAnswer::Unknown { steps },
        }
    }
}

impl fmt::Display for OracleAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleAnswer::Equal => f.write_str("Equal"),
            OracleAnswer::NotEqual => f.write_str("NotEqual"),
            OracleAnswer::Unknown { steps } => write!(f, "Unknown (after {steps} steps)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("step budget exhausted after {steps} steps")]
pub struct Exhausted {
    pub steps: u64,
}

/// Step counter for one query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn charge(&mut self, steps: u64) -> Result<(), Exhausted> {
        if self.limit - self.used < steps {
            self.used = self.limit;
            return Err(Exhausted { steps: self.used });
        }
        self.used += steps;
        Ok(())
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.used
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_STEPS)
    }
}

/// Equality of words in a fixed group.
pub trait GroupOracle {
    /// `Ok(true)` iff `word` represents the identity.
    fn check_trivial(&self, word: &Word, budget: &mut Budget) -> Result<bool, Exhausted>;

    /// A canonical word for the element, when the oracle has one: two words
    /// are equal in the group iff their canonical words coincide.
    fn canonical(&self, _word: &Word) -> Option<Word> {
        None
    }

    fn is_trivial(&self, word: &Word, budget: &mut Budget) -> OracleAnswer {
        self.check_trivial(word, budget).into()
    }

    fn decide_within(&self, u: &Word, v: &Word, budget: &mut Budget) -> OracleAnswer {
        self.is_trivial(&u.concat(&v.invert()), budget)
    }

    fn decide(&self, u: &Word, v: &Word) -> OracleAnswer {
        self.decide_within(u, v, &mut Budget::default())
    }
}

impl<T: GroupOracle + ?Sized> GroupOracle for Box<T> {
    fn check_trivial(&self, word: &Word, budget: &mut Budget) -> Result<bool, Exhausted> {
        (**self).check_trivial(word, budget)
    }
    fn canonical(&self, word: &Word) -> Option<Word> {
        (**self).canonical(word)
    }
}

impl<T: GroupOracle + ?Sized> GroupOracle for &T {
    fn check_trivial(&self, word: &Word, budget: &mut Budget) -> Result<bool, Exhausted> {
        (**self).check_trivial(word, budget)
    }
    fn canonical(&self, word: &Word) -> Option<Word> {
        (**self).canonical(word)
    }
}

/// The free group on any alphabet: equality is equality of reduced forms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FreeGroupOracle;

impl GroupOracle for FreeGroupOracle {
    fn check_trivial(&self, word: &Word, budget: &mut Budget) -> Result<bool, Exhausted> {
        budget.charge(1)?;
        Ok(word.free_reduce().is_empty())
    }

    fn canonical(&self, word: &Word) -> Option<Word> {
        Some(word.free_reduce())
    }
}

/// `Gp<a | a^n>` on the single generator `generator`; decided by exponent
/// sum modulo `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicGroupOracle {
    order: u64,
    generator: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("cyclic group order must be at least 1")]
pub struct ZeroOrder;

impl CyclicGroupOracle {
    pub fn new(order: u64, generator: usize) -> Result<Self, ZeroOrder> {
        if order == 0 {
            return Err(ZeroOrder);
        }
        Ok(CyclicGroupOracle { order, generator })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    fn residue(&self, word: &Word) -> i64 {
        word.exponent_sum().rem_euclid(self.order as i64)
    }
}

impl GroupOracle for CyclicGroupOracle {
    fn check_trivial(&self, word: &Word, budget: &mut Budget) -> Result<bool, Exhausted> {
        budget.charge(1)?;
        Ok(self.residue(word) == 0)
    }

    fn canonical(&self, word: &Word) -> Option<Word> {
        Some(Word::power(Letter::pos(self.generator), self.residue(word)))
    }
}

/// One syllable of a free product normal form: a word of a single factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub factor: usize,
    pub word: Word,
}

/// Reduced sequence of nontrivial syllables from alternating factors.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FreeProductNF {
    pub syllables: Vec<Syllable>,
}

impl FreeProductNF {
    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn flatten(&self) -> Word {
        Word::concat_all(self.syllables.iter().map(|s| &s.word))
    }

    pub fn factor_sequence(&self) -> Vec<usize> {
        self.syllables.iter().map(|s| s.factor).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("letter #{} is not assigned to any factor", .0.index())]
    Unassigned(Letter),
    #[error(transparent)]
    Exhausted(#[from] Exhausted),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("letter #{letter} is assigned to factor {factor}, but there are only {count} factors")]
pub struct NoSuchFactor {
    pub letter: usize,
    pub factor: usize,
    pub count: usize,
}

/// A free product of groups, each letter belonging to exactly one factor.
pub struct FreeProduct {
    assignment: Vec<Option<usize>>,
    factors: Vec<Box<dyn GroupOracle>>,
}

impl FreeProduct {
    /// `assignment[i]` is the factor of generator `i`.
    pub fn new(assignment: Vec<Option<usize>>, factors: Vec<Box<dyn GroupOracle>>) -> Result<Self, NoSuchFactor> {
        for (letter, factor) in assignment.iter().enumerate() {
            if let Some(factor) = *factor {
                if factor >= factors.len() {
                    return Err(NoSuchFactor { letter, factor, count: factors.len() });
                }
            }
        }
        Ok(FreeProduct { assignment, factors })
    }

    pub fn factor_of(&self, letter: Letter) -> Result<usize, NormalFormError> {
        self.assignment
            .get(letter.index())
            .copied()
            .flatten()
            .ok_or(NormalFormError::Unassigned(letter))
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    /// Splits into maximal single-factor runs, then repeatedly deletes the
    /// leftmost syllable trivial in its factor and merges the neighbours it
    /// leaves adjacent.
    pub fn normal_form(&self, word: &Word, budget: &mut Budget) -> Result<FreeProductNF, NormalFormError> {
        let mut runs: Vec<(usize, Vec<Letter>)> = Vec::new();
        for &letter in word.letters() {
            let factor = self.factor_of(letter)?;
            match runs.last_mut() {
                Some((f, letters)) if *f == factor => letters.push(letter),
                _ => runs.push((factor, alloc::vec![letter])),
            }
        }
        // (syllable, known to be nontrivial)
        let mut syllables: Vec<(Syllable, bool)> = runs
            .into_iter()
            .map(|(factor, letters)| (Syllable { factor, word: Word::from_letters(letters).free_reduce() }, false))
            .collect();
        'scan: loop {
            for i in 0..syllables.len() {
                if syllables[i].1 {
                    continue;
                }
                let syllable = &syllables[i].0;
                let trivial = syllable.word.is_empty()
                    || self.factors[syllable.factor].check_trivial(&syllable.word, budget)?;
                if !trivial {
                    syllables[i].1 = true;
                    continue;
                }
                syllables.remove(i);
                if i > 0 && i < syllables.len() && syllables[i - 1].0.factor == syllables[i].0.factor {
                    let (right, _) = syllables.remove(i);
                    let left = &mut syllables[i - 1];
                    left.0.word = left.0.word.concat(&right.word).free_reduce();
                    left.1 = false;
                }
                continue 'scan;
            }
            break;
        }
        Ok(FreeProductNF { syllables: syllables.into_iter().map(|(s, _)| s).collect() })
    }

    /// Compares normal forms syllable by syllable with the factor oracles.
    pub fn fp_equal(&self, u: &Word, v: &Word, budget: &mut Budget) -> Result<OracleAnswer, NormalFormError> {
        let run = |budget: &mut Budget| -> Result<bool, NormalFormError> {
            let nu = self.normal_form(u, budget)?;
            let nv = self.normal_form(v, budget)?;
            if nu.factor_sequence() != nv.factor_sequence() {
                return Ok(false);
            }
            for (x, y) in nu.syllables.iter().zip(&nv.syllables) {
                let quotient = x.word.concat(&y.word.invert());
                if !self.factors[x.factor].check_trivial(&quotient, budget)? {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        match run(budget) {
            Ok(equal) => Ok(equal.into_answer()),
            Err(NormalFormError::Exhausted(e)) => Ok(OracleAnswer::Unknown { steps: e.steps }),
            Err(e) => Err(e),
        }
    }
}

trait IntoAnswer {
    fn into_answer(self) -> OracleAnswer;
}

impl IntoAnswer for bool {
    fn into_answer(self) -> OracleAnswer {
        if self {
            OracleAnswer::Equal
        } else {
            OracleAnswer::NotEqual
        }
    }
}

/// Words must only use assigned letters; an unassigned letter panics.
/// Use [`FreeProduct::normal_form`] for a checked entry point.
impl GroupOracle for FreeProduct {
    fn check_trivial(&self, word: &Word, budget: &mut Budget) -> Result<bool, Exhausted> {
        match self.normal_form(word, budget) {
            Ok(nf) => Ok(nf.is_empty()),
            Err(NormalFormError::Exhausted(e)) => Err(e),
            Err(e @ NormalFormError::Unassigned(_)) => panic!("{e}"),
        }
    }

    fn canonical(&self, word: &Word) -> Option<Word> {
        let nf = self.normal_form(word, &mut Budget::unlimited()).ok()?;
        let mut letters = Vec::new();
        for syllable in &nf.syllables {
            letters.extend(self.factors[syllable.factor].canonical(&syllable.word)?.into_letters());
        }
        Some(Word::from_letters(letters))
    }
}

/// Membership in a subgroup of the base group of an HNN extension.
pub trait SubgroupMembership {
    fn contains_within(&self, word: &Word, budget: &mut Budget) -> Result<bool, Exhausted>;
}

/// Exact membership in a subgroup of a free group.
impl SubgroupMembership for SubgroupAutomaton {
    fn contains_within(&self, word: &Word, budget: &mut Budget) -> Result<bool, Exhausted> {
        budget.charge(1)?;
        Ok(self.contains(word))
    }
}

/// The isomorphism `A -> B` between associated subgroups, `t^-1 a t = forward(a)`.
pub trait AssociatedIsomorphism {
    fn forward(&self, word: &Word) -> Word;
    fn backward(&self, word: &Word) -> Word;
}

/// The stable letter commutes with every element of the associated subgroup.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityIsomorphism;

impl AssociatedIsomorphism for IdentityIsomorphism {
    fn forward(&self, word: &Word) -> Word {
        word.clone()
    }
    fn backward(&self, word: &Word) -> Word {
        word.clone()
    }
}

/// `g_0 t^e_1 g_1 ... t^e_n g_n` with base words `g_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HnnWord {
    /// `n + 1` base words.
    pub bases: Vec<Word>,
    /// `n` stable letter signs, `true` for `t`.
    pub signs: Vec<bool>,
    /// Set once no pinch remains.
    pub reduced: bool,
}

impl HnnWord {
    pub fn split(word: &Word, stable: usize) -> Self {
        let mut bases = alloc::vec![Vec::new()];
        let mut signs = Vec::new();
        for &letter in word.letters() {
            if letter.index() == stable {
                signs.push(letter.is_positive());
                bases.push(Vec::new());
            } else {
                bases.last_mut().expect("nonempty").push(letter);
            }
        }
        HnnWord { bases: bases.into_iter().map(Word::from_letters).collect(), signs, reduced: false }
    }

    pub fn flatten(&self, stable: usize) -> Word {
        let mut letters: Vec<Letter> = self.bases[0].letters().to_vec();
        for (sign, base) in self.signs.iter().zip(&self.bases[1..]) {
            letters.push(Letter::new(stable, *sign));
            letters.extend_from_slice(base.letters());
        }
        Word::from_letters(letters)
    }

    pub fn stable_count(&self) -> usize {
        self.signs.len()
    }
}

/// An HNN extension `<G, t | t^-1 a t = phi(a), a in A>` of a base group.
pub struct HnnExtension {
    base: Box<dyn GroupOracle>,
    stable: usize,
    associated: Box<dyn SubgroupMembership>,
    image: Box<dyn SubgroupMembership>,
    iso: Box<dyn AssociatedIsomorphism>,
}

impl HnnExtension {
    pub fn new(
        base: Box<dyn GroupOracle>,
        stable: usize,
        associated: Box<dyn SubgroupMembership>,
        image: Box<dyn SubgroupMembership>,
        iso: Box<dyn AssociatedIsomorphism>,
    ) -> Self {
        HnnExtension { base, stable, associated, image, iso }
    }

    /// A free base group with the stable letter fixing `subgroup` pointwise.
    pub fn identity_over_free(stable: usize, subgroup: SubgroupAutomaton) -> Self {
        HnnExtension::new(
            Box::new(FreeGroupOracle),
            stable,
            Box::new(subgroup.clone()),
            Box::new(subgroup),
            Box::new(IdentityIsomorphism),
        )
    }

    pub fn stable(&self) -> usize {
        self.stable
    }

    /// Removes pinches `t^-1 g t` (g in A) and `t g t^-1` (g in B),
    /// leftmost first, until none remain.
    pub fn reduce(&self, word: &HnnWord, budget: &mut Budget) -> Result<HnnWord, Exhausted> {
        let mut bases: Vec<Word> = word.bases.iter().map(Word::free_reduce).collect();
        let mut signs = word.signs.clone();
        // Middles already known not to be pinches, keyed by position.
        let mut clean: Vec<bool> = alloc::vec![false; signs.len().saturating_sub(1)];
        'scan: loop {
            for j in 0..signs.len().saturating_sub(1) {
                if clean[j] || signs[j] == signs[j + 1] {
                    continue;
                }
                let middle = &bases[j + 1];
                let replacement = if signs[j] {
                    self.image.contains_within(middle, budget)?.then(|| self.iso.backward(middle))
                } else {
                    self.associated.contains_within(middle, budget)?.then(|| self.iso.forward(middle))
                };
                let Some(replacement) = replacement else {
                    clean[j] = true;
                    continue;
                };
                let merged = Word::concat_all([&bases[j], &replacement, &bases[j + 2]]).free_reduce();
                bases.splice(j..j + 3, [merged]);
                signs.drain(j..j + 2);
                clean.truncate(signs.len().saturating_sub(1));
                for c in clean.iter_mut().skip(j.saturating_sub(1)) {
                    *c = false;
                }
                continue 'scan;
            }
            break;
        }
        Ok(HnnWord { bases, signs, reduced: true })
    }

    pub fn reduce_word(&self, word: &Word, budget: &mut Budget) -> Result<HnnWord, Exhausted> {
        self.reduce(&HnnWord::split(word, self.stable), budget)
    }
}

/// Britton's lemma: a reduced word containing the stable letter is never
/// the identity.
impl GroupOracle for HnnExtension {
    fn check_trivial(&self, word: &Word, budget: &mut Budget) -> Result<bool, Exhausted> {
        let reduced = self.reduce_word(word, budget)?;
        if reduced.stable_count() > 0 {
            return Ok(false);
        }
        self.base.check_trivial(&reduced.bases[0], budget)
    }
}
