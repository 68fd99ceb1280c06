//! Stallings automata: folded core graphs of finitely generated subgroups
//! of free groups.
//!
//! Edges are stored with positive labels only; reading `a^-1` means walking
//! an `a`-edge backwards. Every automaton is kept folded, pruned to its core
//! and numbered canonically (breadth-first from the basepoint, trying
//! `a, a^-1, b, b^-1, ...` in order), so structural equality is isomorphism
//! of basepointed automata.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::words::{Alphabet, Letter, Word};

/// Basepoint is always state 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupAutomaton {
    alphabet_size: usize,
    out: Vec<BTreeMap<usize, usize>>,
    inc: Vec<BTreeMap<usize, usize>>,
}

/// An edge `source --letter--> target`, letter given by generator index.
pub type Edge = (usize, usize, usize);

impl SubgroupAutomaton {
    pub fn trivial(alphabet_size: usize) -> Self {
        SubgroupAutomaton { alphabet_size, out: vec![BTreeMap::new()], inc: vec![BTreeMap::new()] }
    }

    /// Folds the bouquet of the (freely reduced) generator words.
    pub fn build(alphabet: &Alphabet, generators: &[Word]) -> Self {
        Self::from_generators(alphabet.len(), generators)
    }

    pub fn from_generators(alphabet_size: usize, generators: &[Word]) -> Self {
        let mut states = 1;
        let mut edges = Vec::new();
        for generator in generators {
            let reduced = generator.free_reduce();
            debug_assert!(reduced.max_index().is_none_or(|i| i < alphabet_size));
            add_path(&mut states, &mut edges, 0, 0, reduced.letters());
        }
        Self::from_edges(alphabet_size, states, &edges, 0)
    }

    /// Folds an arbitrary labelled graph and keeps the core of the
    /// component of `basepoint`.
    pub fn from_edges(alphabet_size: usize, states: usize, edges: &[Edge], basepoint: usize) -> Self {
        let folded = fold(states, edges);
        let edges: BTreeSet<Edge> =
            edges.iter().map(|&(s, a, t)| (folded[s], a, folded[t])).collect();
        normalize(alphabet_size, edges, folded[basepoint])
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn num_states(&self) -> usize {
        self.out.len()
    }

    pub fn num_edges(&self) -> usize {
        self.out.iter().map(BTreeMap::len).sum()
    }

    /// Rank of the subgroup: `edges - states + 1`.
    pub fn rank(&self) -> usize {
        self.num_edges() + 1 - self.num_states()
    }

    pub fn is_trivial(&self) -> bool {
        self.num_edges() == 0
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(s, m)| m.iter().map(move |(&a, &t)| (s, a, t)))
    }

    fn step(&self, state: usize, letter: Letter) -> Option<usize> {
        let table = if letter.is_positive() { &self.out } else { &self.inc };
        table[state].get(&letter.index()).copied()
    }

    /// Follows `word` letter by letter from `state`.
    pub fn read(&self, state: usize, word: &Word) -> Option<usize> {
        word.letters().iter().try_fold(state, |s, &l| self.step(s, l))
    }

    /// Membership of the element represented by `word`.
    pub fn contains(&self, word: &Word) -> bool {
        self.read(0, &word.free_reduce()) == Some(0)
    }

    /// Fiber product restricted to the component of the paired basepoints.
    pub fn intersect(&self, other: &SubgroupAutomaton) -> SubgroupAutomaton {
        assert_eq!(self.alphabet_size, other.alphabet_size, "automata over different alphabets");
        let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut queue = VecDeque::new();
        let mut edges = BTreeSet::new();
        ids.insert((0, 0), 0);
        queue.push_back((0, 0));
        let mut id_of = |pair: (usize, usize), queue: &mut VecDeque<(usize, usize)>| {
            let next = ids.len();
            *ids.entry(pair).or_insert_with(|| {
                queue.push_back(pair);
                next
            })
        };
        while let Some((p, q)) = queue.pop_front() {
            let here = id_of((p, q), &mut queue);
            for a in 0..self.alphabet_size {
                if let (Some(&p2), Some(&q2)) = (self.out[p].get(&a), other.out[q].get(&a)) {
                    let there = id_of((p2, q2), &mut queue);
                    edges.insert((here, a, there));
                }
                if let (Some(&p0), Some(&q0)) = (self.inc[p].get(&a), other.inc[q].get(&a)) {
                    let there = id_of((p0, q0), &mut queue);
                    edges.insert((there, a, here));
                }
            }
        }
        normalize(self.alphabet_size, edges, 0)
    }

    /// The subgroup `x^-1 H x`.
    pub fn conjugate(&self, x: &Word) -> SubgroupAutomaton {
        let path = x.invert().free_reduce();
        if path.is_empty() {
            return self.clone();
        }
        let mut edges: Vec<Edge> = self.edges().collect();
        let mut states = self.num_states();
        let start = states;
        states += 1;
        add_path(&mut states, &mut edges, start, 0, path.letters());
        Self::from_edges(self.alphabet_size, states, &edges, start)
    }

    /// A free basis read off a breadth-first spanning tree: one reduced
    /// word per non-tree edge.
    pub fn basis(&self) -> Vec<Word> {
        let mut tree_path: Vec<Option<Word>> = vec![None; self.num_states()];
        let mut tree_edges = BTreeSet::new();
        tree_path[0] = Some(Word::empty());
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            for ordinal in 0..2 * self.alphabet_size {
                let letter = Letter::from_ordinal(ordinal);
                if let Some(t) = self.step(s, letter) {
                    if tree_path[t].is_none() {
                        let path = tree_path[s].as_ref().expect("visited").concat(&Word::letter(letter));
                        tree_path[t] = Some(path);
                        let edge = if letter.is_positive() { (s, letter.index(), t) } else { (t, letter.index(), s) };
                        tree_edges.insert(edge);
                        queue.push_back(t);
                    }
                }
            }
        }
        self.edges()
            .filter(|e| !tree_edges.contains(e))
            .map(|(s, a, t)| {
                let to_s = tree_path[s].as_ref().expect("connected");
                let to_t = tree_path[t].as_ref().expect("connected");
                Word::concat_all([to_s, &Word::letter(Letter::pos(a)), &to_t.invert()]).free_reduce()
            })
            .collect()
    }

    /// All reduced words of length at most `max_len` accepted at the
    /// basepoint, in shortlex order.
    pub fn accepted_words(&self, max_len: usize) -> Vec<Word> {
        let mut found = Vec::new();
        let mut stack = vec![(0usize, Vec::<Letter>::new())];
        while let Some((state, path)) = stack.pop() {
            if state == 0 {
                found.push(Word::from_letters(path.clone()));
            }
            if path.len() == max_len {
                continue;
            }
            for ordinal in 0..2 * self.alphabet_size {
                let letter = Letter::from_ordinal(ordinal);
                if path.last().is_some_and(|&l| l.cancels(letter)) {
                    continue;
                }
                if let Some(next) = self.step(state, letter) {
                    let mut extended = path.clone();
                    extended.push(letter);
                    stack.push((next, extended));
                }
            }
        }
        found.sort_by(Word::shortlex_cmp);
        found
    }

    /// One `source letter target` triple per line, canonical numbering.
    pub fn dump(&self, alphabet: &Alphabet) -> String {
        let mut text = String::new();
        for (s, a, t) in self.edges() {
            let name = alphabet.name(a).unwrap_or("?");
            let _ = writeln!(text, "{s} {name} {t}");
        }
        text
    }
}

fn add_path(states: &mut usize, edges: &mut Vec<Edge>, from: usize, to: usize, letters: &[Letter]) {
    if letters.is_empty() {
        return;
    }
    let mut current = from;
    for (i, &letter) in letters.iter().enumerate() {
        let next = if i + 1 == letters.len() {
            to
        } else {
            *states += 1;
            *states - 1
        };
        if letter.is_positive() {
            edges.push((current, letter.index(), next));
        } else {
            edges.push((next, letter.index(), current));
        }
        current = next;
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        true
    }
}

/// Identifies states until no state has two equally labelled outgoing or
/// incoming edges. Returns the representative of every state.
fn fold(states: usize, edges: &[Edge]) -> Vec<usize> {
    let mut uf = UnionFind::new(states);
    loop {
        let mut changed = false;
        let mut forward: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut backward: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &(s, a, t) in edges {
            let (s, t) = (uf.find(s), uf.find(t));
            match forward.get(&(s, a)) {
                Some(&t2) => changed |= uf.union(t, t2),
                None => {
                    forward.insert((s, a), t);
                }
            }
            let (s, t) = (uf.find(s), uf.find(t));
            match backward.get(&(t, a)) {
                Some(&s2) => changed |= uf.union(s, s2),
                None => {
                    backward.insert((t, a), s);
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..states).map(|s| uf.find(s)).collect()
}

/// Prunes to the core of the basepoint component and renumbers canonically.
/// `edges` must already be folded.
fn normalize(alphabet_size: usize, mut edges: BTreeSet<Edge>, basepoint: usize) -> SubgroupAutomaton {
    loop {
        let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
        for &(s, _, t) in &edges {
            *degree.entry(s).or_default() += 1;
            *degree.entry(t).or_default() += 1;
        }
        let leaves: BTreeSet<usize> =
            degree.iter().filter(|&(&v, &d)| v != basepoint && d <= 1).map(|(&v, _)| v).collect();
        if leaves.is_empty() {
            break;
        }
        edges.retain(|(s, _, t)| !leaves.contains(s) && !leaves.contains(t));
    }

    let mut out_raw: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
    let mut inc_raw: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
    for &(s, a, t) in &edges {
        out_raw.entry(s).or_default().insert(a, t);
        inc_raw.entry(t).or_default().insert(a, s);
    }
    let mut order: BTreeMap<usize, usize> = BTreeMap::new();
    order.insert(basepoint, 0);
    let mut queue = VecDeque::from([basepoint]);
    let mut visited = vec![basepoint];
    while let Some(s) = queue.pop_front() {
        for a in 0..alphabet_size {
            for table in [&out_raw, &inc_raw] {
                if let Some(&t) = table.get(&s).and_then(|m| m.get(&a)) {
                    if !order.contains_key(&t) {
                        order.insert(t, order.len());
                        visited.push(t);
                        queue.push_back(t);
                    }
                }
            }
        }
    }
    let n = visited.len();
    let mut out = vec![BTreeMap::new(); n];
    let mut inc = vec![BTreeMap::new(); n];
    for &(s, a, t) in &edges {
        if let (Some(&s2), Some(&t2)) = (order.get(&s), order.get(&t)) {
            out[s2].insert(a, t2);
            inc[t2].insert(a, s2);
        }
    }
    SubgroupAutomaton { alphabet_size, out, inc }
}
