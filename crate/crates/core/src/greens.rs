//! Green's relations and Schützenberger groups of finitely generated
//! submonoids of groups.
//!
//! In a submonoid `M` of a group with group of units `U`, `L_x = Ux`,
//! `R_x = xU`, `H_x = Ux ∩ xU`, and the Schützenberger group of `H_x` is
//! `U ∩ x^-1 U x`. Everything here is checked inside a finite ball of
//! products of generators; right invertibility is only ever certified, never
//! refuted.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::oracle::{Budget, Exhausted, GroupOracle, OracleAnswer};
use crate::stallings::SubgroupAutomaton;
use crate::words::{Alphabet, Word};

/// Default ball radius.
pub const DEFAULT_RADIUS: usize = 6;

pub struct AmbientSubmonoid<O> {
    pub oracle: O,
    pub generators: Vec<Word>,
    /// The group of units, when the ambient group is free.
    pub units: Option<SubgroupAutomaton>,
}

/// An element of a ball together with the product that reaches it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallElement {
    /// Shortest reduced product word, ties broken lexicographically.
    pub word: Word,
    /// Generator indices whose product is `word`.
    pub factors: Vec<usize>,
}

impl BallElement {
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet, generators: &'a [Word]) -> DisplayWitness<'a> {
        DisplayWitness { element: self, alphabet, generators }
    }
}

/// `word <= (g_1) (g_2) ...`.
pub struct DisplayWitness<'a> {
    element: &'a BallElement,
    alphabet: &'a Alphabet,
    generators: &'a [Word],
}

impl fmt::Display for DisplayWitness<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <=", self.alphabet.display(&self.element.word))?;
        if self.element.factors.is_empty() {
            return f.write_str(" ()");
        }
        for &g in &self.element.factors {
            write!(f, " ({})", self.alphabet.display(&self.generators[g]))?;
        }
        Ok(())
    }
}

/// Distinct elements among all products of at most `radius` generators.
#[derive(Debug, Clone)]
pub struct Ball {
    pub radius: usize,
    /// In shortlex order of representatives.
    pub elements: Vec<BallElement>,
    /// False when the budget ran out before the enumeration finished.
    pub complete: bool,
    pub steps: u64,
    keys: Option<BTreeMap<Word, usize>>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.elements.iter().map(|e| &e.word)
    }

    /// Index of the element equal to `word`, if it lies in the ball.
    pub fn find(&self, oracle: &impl GroupOracle, word: &Word, budget: &mut Budget) -> Result<Option<usize>, Exhausted> {
        budget.charge(1)?;
        if let Some(keys) = &self.keys {
            let key = oracle.canonical(word).expect("oracle without canonical words keyed");
            return Ok(keys.get(&key).copied());
        }
        for (i, e) in self.elements.iter().enumerate() {
            match oracle.decide_within(&e.word, word, budget) {
                OracleAnswer::Equal => return Ok(Some(i)),
                OracleAnswer::NotEqual => {}
                OracleAnswer::Unknown { steps } => return Err(Exhausted { steps }),
            }
        }
        Ok(None)
    }

    fn sort(&mut self, oracle: &impl GroupOracle) {
        self.elements.sort_by(|a, b| a.word.shortlex_cmp(&b.word));
        if let Some(keys) = &mut self.keys {
            keys.clear();
            for (i, e) in self.elements.iter().enumerate() {
                keys.insert(oracle.canonical(&e.word).expect("keyed"), i);
            }
        }
    }
}

/// Outcome of a right-invertibility search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightUnit {
    /// `Equal` with a witness, or `Unknown`; never `NotEqual`.
    pub answer: OracleAnswer,
    pub witness: Option<BallElement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("the group of units is not known for this submonoid")]
pub struct MissingUnits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Green {
    L,
    R,
    H,
}

impl fmt::Display for Green {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Green::L => "L",
            Green::R => "R",
            Green::H => "H",
        })
    }
}

/// A ball element on exactly one side of a class formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub relation: Green,
    pub word: Word,
    /// True when the element is in the class but not in the formula's set.
    pub missing_from_formula: bool,
}

/// The classes of `x` inside a ball, next to the formula predictions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreensReport {
    pub x: Word,
    /// Ball elements with an inverse in the ball.
    pub units: Vec<Word>,
    /// `y` with `y x^-1` and `x y^-1` both in the ball.
    pub l_class: Vec<Word>,
    pub r_class: Vec<Word>,
    pub h_class: Vec<Word>,
    /// `u x` for certified units `u`, where it lies in the ball.
    pub ux: Vec<Word>,
    pub xu: Vec<Word>,
    pub ux_and_xu: Vec<Word>,
    pub counterexamples: Vec<Counterexample>,
}

impl<O: GroupOracle> AmbientSubmonoid<O> {
    pub fn new(oracle: O, generators: Vec<Word>) -> Self {
        AmbientSubmonoid { oracle, generators, units: None }
    }

    pub fn with_units(mut self, units: SubgroupAutomaton) -> Self {
        self.units = Some(units);
        self
    }

    pub fn ball(&self, radius: usize, budget: &mut Budget) -> Ball {
        let start = budget.used();
        let keyed = self.oracle.canonical(&Word::empty()).is_some();
        let mut ball = Ball {
            radius,
            elements: alloc::vec![BallElement { word: Word::empty(), factors: Vec::new() }],
            complete: true,
            steps: 0,
            keys: keyed.then(BTreeMap::new),
        };
        if let Some(keys) = &mut ball.keys {
            keys.insert(self.oracle.canonical(&Word::empty()).expect("keyed"), 0);
        }
        let mut frontier = alloc::vec![0usize];
        'layers: for _ in 0..radius {
            let mut next = Vec::new();
            for &i in &frontier {
                for (g, generator) in self.generators.iter().enumerate() {
                    let word = ball.elements[i].word.concat(generator).free_reduce();
                    let mut factors = ball.elements[i].factors.clone();
                    factors.push(g);
                    match ball.find(&self.oracle, &word, budget) {
                        Err(_) => {
                            ball.complete = false;
                            break 'layers;
                        }
                        Ok(Some(j)) => {
                            let existing = &mut ball.elements[j];
                            if word.shortlex_cmp(&existing.word).is_lt() {
                                *existing = BallElement { word, factors };
                            }
                        }
                        Ok(None) => {
                            if let Some(keys) = &mut ball.keys {
                                keys.insert(self.oracle.canonical(&word).expect("keyed"), ball.elements.len());
                            }
                            next.push(ball.elements.len());
                            ball.elements.push(BallElement { word, factors });
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        ball.sort(&self.oracle);
        ball.steps = budget.used() - start;
        ball
    }

    /// Searches the ball for `x` with `w x = 1`.
    pub fn is_right_unit_in_ball(&self, w: &Word, radius: usize, budget: &mut Budget) -> RightUnit {
        let ball = self.ball(radius, budget);
        for e in &ball.elements {
            match self.oracle.is_trivial(&w.concat(&e.word), budget) {
                OracleAnswer::Equal => return RightUnit { answer: OracleAnswer::Equal, witness: Some(e.clone()) },
                OracleAnswer::NotEqual => {}
                OracleAnswer::Unknown { .. } => break,
            }
        }
        RightUnit { answer: OracleAnswer::Unknown { steps: budget.used() }, witness: None }
    }

    /// Generators with a right inverse among the ball's elements.
    pub fn unit_generators_in_ball(&self, radius: usize, budget: &mut Budget) -> Result<Vec<usize>, Exhausted> {
        let ball = self.ball(radius, budget);
        if !ball.complete {
            return Err(Exhausted { steps: budget.used() });
        }
        let mut units = Vec::new();
        for (g, generator) in self.generators.iter().enumerate() {
            if ball.find(&self.oracle, &generator.invert(), budget)?.is_some() {
                units.push(g);
            }
        }
        Ok(units)
    }

    /// `U ∩ x^-1 U x`, exactly, from the unit subgroup automaton.
    pub fn schutz_free_ambient(&self, x: &Word) -> Result<SubgroupAutomaton, MissingUnits> {
        let units = self.units.as_ref().ok_or(MissingUnits)?;
        Ok(units.intersect(&units.conjugate(x)))
    }

    pub fn greens_class_check(&self, x: &Word, radius: usize, budget: &mut Budget) -> Result<GreensReport, Exhausted> {
        let ball = self.complete_ball(radius, budget)?;
        let x_inv = x.invert();
        let find = |w: Word, budget: &mut Budget| ball.find(&self.oracle, &w, budget);

        let mut units = BTreeSet::new();
        for (i, e) in ball.elements.iter().enumerate() {
            if find(e.word.invert(), budget)?.is_some() {
                units.insert(i);
            }
        }
        let (mut l_class, mut r_class) = (BTreeSet::new(), BTreeSet::new());
        for (i, e) in ball.elements.iter().enumerate() {
            let y_inv = e.word.invert();
            if find(e.word.concat(&x_inv), budget)?.is_some() && find(x.concat(&y_inv), budget)?.is_some() {
                l_class.insert(i);
            }
            if find(x_inv.concat(&e.word), budget)?.is_some() && find(y_inv.concat(x), budget)?.is_some() {
                r_class.insert(i);
            }
        }
        let (mut ux, mut xu) = (BTreeSet::new(), BTreeSet::new());
        for &u in &units {
            let u = &ball.elements[u].word;
            if let Some(i) = find(u.concat(x), budget)? {
                ux.insert(i);
            }
            if let Some(i) = find(x.concat(u), budget)? {
                xu.insert(i);
            }
        }
        let h_class: BTreeSet<usize> = l_class.intersection(&r_class).copied().collect();
        let ux_and_xu: BTreeSet<usize> = ux.intersection(&xu).copied().collect();

        let mut counterexamples = Vec::new();
        for (relation, class, formula) in
            [(Green::L, &l_class, &ux), (Green::R, &r_class, &xu), (Green::H, &h_class, &ux_and_xu)]
        {
            for &i in class.symmetric_difference(formula) {
                counterexamples.push(Counterexample {
                    relation,
                    word: ball.elements[i].word.clone(),
                    missing_from_formula: class.contains(&i),
                });
            }
        }
        let words = |set: &BTreeSet<usize>| set.iter().map(|&i| ball.elements[i].word.clone()).collect();
        Ok(GreensReport {
            x: x.free_reduce(),
            units: words(&units),
            l_class: words(&l_class),
            r_class: words(&r_class),
            h_class: words(&h_class),
            ux: words(&ux),
            xu: words(&xu),
            ux_and_xu: words(&ux_and_xu),
            counterexamples,
        })
    }

    /// Ball elements `g` with `x g` in the ball's H-class of `x`: the
    /// truncation of the Schützenberger group of `H_x`.
    pub fn right_stabilizer_in_ball(&self, x: &Word, radius: usize, budget: &mut Budget) -> Result<Vec<Word>, Exhausted> {
        let report = self.greens_class_check(x, radius, budget)?;
        let ball = self.complete_ball(radius, budget)?;
        let mut h = BTreeSet::new();
        for word in &report.h_class {
            h.insert(ball.find(&self.oracle, word, budget)?.expect("class taken from the ball"));
        }
        let mut stabilizer = Vec::new();
        for e in &ball.elements {
            if let Some(i) = ball.find(&self.oracle, &x.concat(&e.word), budget)? {
                if h.contains(&i) {
                    stabilizer.push(e.word.clone());
                }
            }
        }
        Ok(stabilizer)
    }

    fn complete_ball(&self, radius: usize, budget: &mut Budget) -> Result<Ball, Exhausted> {
        let ball = self.ball(radius, budget);
        if !ball.complete {
            return Err(Exhausted { steps: budget.used() });
        }
        Ok(ball)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{CyclicGroupOracle, FreeGroupOracle};
    use crate::presentation::{parse_word, parse_word_list};
    use alloc::string::ToString;
    use alloc::vec;

    /// Hides canonical words, forcing pairwise comparison.
    struct Pairwise<O>(O);

    impl<O: GroupOracle> GroupOracle for Pairwise<O> {
        fn check_trivial(&self, word: &Word, budget: &mut Budget) -> Result<bool, Exhausted> {
            self.0.check_trivial(word, budget)
        }
    }

    fn at() -> Alphabet {
        Alphabet::new(["a", "t"]).unwrap()
    }

    fn ws(text: &str) -> Vec<Word> {
        parse_word_list(text, &at()).unwrap()
    }

    fn w(text: &str) -> Word {
        parse_word(text, &at()).unwrap()
    }

    fn m(generators: &str) -> AmbientSubmonoid<FreeGroupOracle> {
        AmbientSubmonoid::new(FreeGroupOracle, ws(generators))
    }

    fn m_units() -> AmbientSubmonoid<FreeGroupOracle> {
        m("a, a^-1, t").with_units(SubgroupAutomaton::from_generators(2, &ws("a")))
    }

    fn ball_words(ball: &Ball) -> Vec<Word> {
        ball.words().cloned().collect()
    }

    #[test]
    fn ball_examples() {
        let ball = m("a").ball(3, &mut Budget::default());
        assert!(ball.complete);
        assert_eq!(ball_words(&ball), ws("1, a, a^2, a^3"));

        let ball = m("a, a^-1").ball(2, &mut Budget::default());
        assert_eq!(ball_words(&ball), ws("1, a, a^-1, a^2, a^-2"));

        let z = AmbientSubmonoid::new(CyclicGroupOracle::new(3, 0).unwrap(), ws("a"));
        assert_eq!(ball_words(&z.ball(5, &mut Budget::default())), ws("1, a, a^2"));
    }

    #[test]
    fn ball_over_integers() {
        let ball = m("a, a^2").ball(5, &mut Budget::default());
        let expected: Vec<Word> = (0..=10).map(|k| Word::power(crate::words::Letter::pos(0), k)).collect();
        assert_eq!(ball_words(&ball), expected);
        let e = &ball.elements[7];
        let gens = ws("a, a^2");
        let product = Word::concat_all(e.factors.iter().map(|&g| &gens[g])).free_reduce();
        assert_eq!(product, e.word);
        assert!(e.factors.len() <= 5);
    }

    #[test]
    fn pairwise_and_keyed_balls_agree() {
        let gens = ws("a t, t^-1, a^-1 a");
        let keyed = AmbientSubmonoid::new(FreeGroupOracle, gens.clone()).ball(4, &mut Budget::default());
        let pairwise = AmbientSubmonoid::new(Pairwise(FreeGroupOracle), gens).ball(4, &mut Budget::unlimited());
        assert_eq!(keyed.elements, pairwise.elements);
    }

    #[test]
    fn representatives_prefer_short_words() {
        let ball = m("a t, t^-1").ball(2, &mut Budget::default());
        let a = ball.elements.iter().find(|e| e.word == w("a")).unwrap();
        assert_eq!(a.factors, vec![0, 1]);
        assert!(ball.words().all(|word| word.is_reduced()));
    }

    #[test]
    fn partial_ball_is_flagged() {
        let ball = m("a, t").ball(6, &mut Budget::new(10));
        assert!(!ball.complete);
        assert!(ball.len() < 127);
    }

    #[test]
    fn witness_display() {
        let gens = ws("a, t");
        let ball = AmbientSubmonoid::new(FreeGroupOracle, gens.clone()).ball(2, &mut Budget::default());
        let at_elem = ball.elements.iter().find(|e| e.word == w("a t")).unwrap();
        assert_eq!(at_elem.display(&at(), &gens).to_string(), "a t <= (a) (t)");
        assert_eq!(ball.elements[0].display(&at(), &gens).to_string(), "1 <= ()");
    }

    #[test]
    fn right_units() {
        let m = m("a, a^-1, t");
        let r = m.is_right_unit_in_ball(&w("a"), 4, &mut Budget::default());
        assert_eq!(r.answer, OracleAnswer::Equal);
        assert_eq!(r.witness.unwrap().word, w("a^-1"));
        assert!(matches!(m.is_right_unit_in_ball(&w("t"), 6, &mut Budget::default()).answer, OracleAnswer::Unknown { .. }));
        let r = m.is_right_unit_in_ball(&Word::empty(), 0, &mut Budget::default());
        assert_eq!(r.answer, OracleAnswer::Equal);
        assert_eq!(r.witness.unwrap().word, Word::empty());
    }

    #[test]
    fn unit_generators() {
        assert_eq!(m("a, a^-1, t").unit_generators_in_ball(4, &mut Budget::default()), Ok(vec![0, 1]));
        assert_eq!(m("t").unit_generators_in_ball(4, &mut Budget::default()), Ok(vec![]));
        assert_eq!(m("a, a^-1").unit_generators_in_ball(4, &mut Budget::default()), Ok(vec![0, 1]));
    }

    #[test]
    fn schutz_examples() {
        let m1 = m_units();
        assert!(m1.schutz_free_ambient(&w("t")).unwrap().is_trivial());
        let u = m1.units.clone().unwrap();
        assert_eq!(m1.schutz_free_ambient(&w("a")).unwrap(), u);

        let u2 = SubgroupAutomaton::from_generators(2, &ws("a, t a t^-1"));
        let m2 = m("a, a^-1, t a t^-1, t a^-1 t^-1, t").with_units(u2);
        assert_eq!(m2.schutz_free_ambient(&w("t")).unwrap(), SubgroupAutomaton::from_generators(2, &ws("a")));

        assert_eq!(m("a").schutz_free_ambient(&w("a")), Err(MissingUnits));
    }

    #[test]
    fn class_check_for_t() {
        let report = m_units().greens_class_check(&w("t"), 5, &mut Budget::default()).unwrap();
        assert!(report.counterexamples.is_empty());
        assert_eq!(report.l_class, ws("t, a t, a^-1 t, a^2 t, a^-2 t, a^3 t, a^-3 t, a^4 t, a^-4 t"));
        assert_eq!(report.r_class, ws("t, t a, t a^-1, t a^2, t a^-2, t a^3, t a^-3, t a^4, t a^-4"));
        assert_eq!(report.h_class, ws("t"));
        assert_eq!(report.units.len(), 11);
    }

    #[test]
    fn class_check_for_units() {
        let m = m_units();
        for x in ["1", "a", "a^-2"] {
            let report = m.greens_class_check(&w(x), 4, &mut Budget::default()).unwrap();
            assert!(report.counterexamples.is_empty());
            assert!(report.h_class.iter().all(|h| report.units.contains(h)));
            assert_eq!(report.l_class, report.h_class);
            if x == "1" {
                assert_eq!(report.l_class, report.units);
            }
        }
    }

    #[test]
    fn stabilizers() {
        let m1 = m_units();
        assert_eq!(m1.right_stabilizer_in_ball(&w("t"), 6, &mut Budget::default()), Ok(ws("1")));

        let u2 = SubgroupAutomaton::from_generators(2, &ws("a, t a t^-1"));
        let m2 = m("a, a^-1, t a t^-1, t a^-1 t^-1, t").with_units(u2);
        let stab = m2.right_stabilizer_in_ball(&w("t"), 4, &mut Budget::default()).unwrap();
        let schutz = m2.schutz_free_ambient(&w("t")).unwrap();
        assert!(stab.iter().all(|g| schutz.contains(g)));
        assert!(stab.contains(&w("a^2")));
    }
}
