//! Semidecision procedures and a fair scheduler for them.
//!
//! A [`SemidecisionTask`] advances one unit of work per [`step`] call. The
//! scheduler [`dovetail`] interleaves finitely many tasks round-robin;
//! [`Staircase`] interleaves an infinite family by spawning one new member
//! per round. Provers here accept with a derivation that can be replayed
//! independently of the search that found it.
//!
//! [`step`]: SemidecisionTask::step

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::oracle::{Budget, GroupOracle, OracleAnswer};
use crate::presentation::{Presentation, PresentationKind};
use crate::words::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepOutcome {
    Running,
    Accepted,
    Rejected,
}

pub trait SemidecisionTask {
    fn id(&self) -> &str;
    /// Deterministic given the task's prior steps. Once a task halts, further
    /// calls keep returning the same outcome.
    fn step(&mut self) -> StepOutcome;
}

impl<T: SemidecisionTask + ?Sized> SemidecisionTask for alloc::boxed::Box<T> {
    fn id(&self) -> &str {
        (**self).id()
    }
    fn step(&mut self) -> StepOutcome {
        (**self).step()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Accepted,
    Rejected,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Accepted => "Accepted",
            Outcome::Rejected => "Rejected",
            Outcome::Unknown => "Unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskReport {
    pub id: String,
    pub outcome: Outcome,
    pub steps: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DovetailReport {
    /// In input order.
    pub tasks: Vec<TaskReport>,
    pub total_steps: u64,
}

impl DovetailReport {
    pub fn outcome(&self, id: &str) -> Option<Outcome> {
        self.tasks.iter().find(|t| t.id == id).map(|t| t.outcome)
    }

    pub fn outcomes(&self) -> BTreeMap<String, Outcome> {
        self.tasks.iter().map(|t| (t.id.clone(), t.outcome)).collect()
    }
}

/// Round-robin over the live tasks, one step each per round, until every
/// task halts or `budget` steps have been spent.
pub fn dovetail<T: SemidecisionTask>(tasks: &mut [T], budget: u64) -> DovetailReport {
    let mut reports: Vec<TaskReport> =
        tasks.iter().map(|t| TaskReport { id: t.id().into(), outcome: Outcome::Unknown, steps: 0 }).collect();
    let mut live: Vec<usize> = (0..tasks.len()).collect();
    let mut total = 0;
    while !live.is_empty() && total < budget {
        let mut still = Vec::with_capacity(live.len());
        for &i in &live {
            if total == budget {
                still.push(i);
                continue;
            }
            total += 1;
            reports[i].steps += 1;
            match tasks[i].step() {
                StepOutcome::Running => still.push(i),
                StepOutcome::Accepted => reports[i].outcome = Outcome::Accepted,
                StepOutcome::Rejected => reports[i].outcome = Outcome::Rejected,
            }
        }
        live = still;
    }
    DovetailReport { tasks: reports, total_steps: total }
}

pub fn dovetail_run<'a>(mut tasks: Vec<alloc::boxed::Box<dyn SemidecisionTask + 'a>>, budget: u64) -> DovetailReport {
    dovetail(&mut tasks, budget)
}

/// Steps `task` until it halts or `budget` steps are spent.
pub fn run_task<T: SemidecisionTask + ?Sized>(task: &mut T, budget: u64) -> (Outcome, u64) {
    for used in 1..=budget {
        match task.step() {
            StepOutcome::Running => {}
            StepOutcome::Accepted => return (Outcome::Accepted, used),
            StepOutcome::Rejected => return (Outcome::Rejected, used),
        }
    }
    (Outcome::Unknown, budget)
}

/// Accepts once every member accepts; rejects as soon as one rejects.
pub struct AllOf<T> {
    id: String,
    members: Vec<(T, bool)>,
    cursor: usize,
    state: StepOutcome,
}

impl<T: SemidecisionTask> AllOf<T> {
    pub fn new(id: impl Into<String>, members: Vec<T>) -> Self {
        let state = if members.is_empty() { StepOutcome::Accepted } else { StepOutcome::Running };
        AllOf { id: id.into(), members: members.into_iter().map(|m| (m, false)).collect(), cursor: 0, state }
    }

    pub fn members(&self) -> impl Iterator<Item = &T> {
        self.members.iter().map(|(m, _)| m)
    }
}

impl<T: SemidecisionTask> SemidecisionTask for AllOf<T> {
    fn id(&self) -> &str {
        &self.id
    }

    fn step(&mut self) -> StepOutcome {
        if self.state != StepOutcome::Running {
            return self.state;
        }
        while self.members[self.cursor].1 {
            self.cursor = (self.cursor + 1) % self.members.len();
        }
        let (member, done) = &mut self.members[self.cursor];
        match member.step() {
            StepOutcome::Running => {}
            StepOutcome::Accepted => *done = true,
            StepOutcome::Rejected => self.state = StepOutcome::Rejected,
        }
        if self.members.iter().all(|(_, done)| *done) {
            self.state = StepOutcome::Accepted;
        }
        self.cursor = (self.cursor + 1) % self.members.len();
        self.state
    }
}

/// Dovetails a possibly infinite family: round `r` spawns member `r`, then
/// steps each live member once. Accepts when any member accepts; rejects
/// only when the family is exhausted and every member rejected.
pub struct Staircase<T, F> {
    id: String,
    spawn: F,
    spawned: usize,
    exhausted: bool,
    live: Vec<T>,
    cursor: usize,
    accepted: Option<T>,
    state: StepOutcome,
}

impl<T: SemidecisionTask, F: FnMut(usize) -> Option<T>> Staircase<T, F> {
    pub fn new(id: impl Into<String>, spawn: F) -> Self {
        Staircase {
            id: id.into(),
            spawn,
            spawned: 0,
            exhausted: false,
            live: Vec::new(),
            cursor: 0,
            accepted: None,
            state: StepOutcome::Running,
        }
    }

    pub fn spawned(&self) -> usize {
        self.spawned
    }

    pub fn live(&self) -> usize {
        self.live.len()
    }

    pub fn accepted(&self) -> Option<&T> {
        self.accepted.as_ref()
    }
}

impl<T: SemidecisionTask, F: FnMut(usize) -> Option<T>> SemidecisionTask for Staircase<T, F> {
    fn id(&self) -> &str {
        &self.id
    }

    fn step(&mut self) -> StepOutcome {
        if self.state != StepOutcome::Running {
            return self.state;
        }
        if self.cursor >= self.live.len() {
            self.cursor = 0;
            if !self.exhausted {
                match (self.spawn)(self.spawned) {
                    Some(member) => {
                        self.spawned += 1;
                        self.live.push(member);
                    }
                    None => self.exhausted = true,
                }
            }
            if self.live.is_empty() {
                self.state = StepOutcome::Rejected;
                return self.state;
            }
        }
        match self.live[self.cursor].step() {
            StepOutcome::Running => self.cursor += 1,
            StepOutcome::Accepted => {
                self.accepted = Some(self.live.swap_remove(self.cursor));
                self.state = StepOutcome::Accepted;
            }
            StepOutcome::Rejected => {
                self.live.remove(self.cursor);
            }
        }
        self.state
    }
}

/// Which rule family justifies a rewrite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// A pair derived from a defining relation.
    Relation,
    /// `a a^-1 <-> 1` (group kind).
    Free,
    /// `x x^-1 x <-> x` (inverse kind).
    WagnerRetract,
    /// `x x^-1 y y^-1 <-> y y^-1 x x^-1` (inverse kind).
    WagnerCommute,
}

/// Replaces the factor `from` at `pos` by `to`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rewrite {
    pub pos: usize,
    pub from: Word,
    pub to: Word,
    pub rule: RuleKind,
}

impl Rewrite {
    pub fn reversed(&self) -> Rewrite {
        Rewrite { pos: self.pos, from: self.to.clone(), to: self.from.clone(), rule: self.rule }
    }

    pub fn apply(&self, word: &Word) -> Option<Word> {
        let letters = word.letters();
        let end = self.pos.checked_add(self.from.len())?;
        if end > letters.len() || &letters[self.pos..end] != self.from.letters() {
            return None;
        }
        let mut out = Vec::with_capacity(letters.len() - self.from.len() + self.to.len());
        out.extend_from_slice(&letters[..self.pos]);
        out.extend_from_slice(self.to.letters());
        out.extend_from_slice(&letters[end..]);
        Some(Word::from_letters(out))
    }
}

/// The rewrite rules of a presentation.
///
/// Group kind: for every relator `r = lhs rhs^-1` and every cyclic conjugate
/// `c = p q` of `r` or `r^-1`, the pair `p -> q^-1`, plus free cancellation
/// and insertion. Monoid kind: `lhs <-> rhs`. Inverse kind: `lhs <-> rhs`,
/// `lhs^-1 <-> rhs^-1`, and both Wagner schemas.
#[derive(Debug, Clone)]
pub struct RuleSet {
    kind: PresentationKind,
    alphabet_size: usize,
    pairs: Vec<(Word, Word)>,
    lookup: BTreeSet<(Word, Word)>,
}

impl RuleSet {
    pub fn new(p: &Presentation) -> Self {
        let mut lookup = BTreeSet::new();
        let mut add = |from: Word, to: Word| {
            if from != to {
                lookup.insert((from, to));
            }
        };
        for r in &p.relations {
            match p.kind {
                PresentationKind::Group => {
                    let relator = r.to_relator();
                    for s in [relator.clone(), relator.invert()] {
                        let letters = s.letters();
                        for rot in 0..letters.len().max(1) {
                            let c: Word = letters[rot..].iter().chain(&letters[..rot]).copied().collect();
                            for split in 0..=c.len() {
                                add(c.prefix(split), c.suffix_from(split).invert());
                            }
                        }
                    }
                }
                PresentationKind::Monoid => {
                    add(r.lhs.clone(), r.rhs.clone());
                    add(r.rhs.clone(), r.lhs.clone());
                }
                PresentationKind::InverseMonoid => {
                    add(r.lhs.clone(), r.rhs.clone());
                    add(r.rhs.clone(), r.lhs.clone());
                    add(r.lhs.invert(), r.rhs.invert());
                    add(r.rhs.invert(), r.lhs.invert());
                }
            }
        }
        let pairs = lookup.iter().cloned().collect();
        RuleSet { kind: p.kind, alphabet_size: p.alphabet.len(), pairs, lookup }
    }

    pub fn kind(&self) -> PresentationKind {
        self.kind
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// Whether replacing `from` by `to` is an instance of a rule of the
    /// claimed family. Checked without reference to any search state.
    pub fn justifies(&self, rewrite: &Rewrite) -> bool {
        let (from, to) = (&rewrite.from, &rewrite.to);
        match rewrite.rule {
            RuleKind::Relation => self.lookup.contains(&(from.clone(), to.clone())),
            RuleKind::Free => {
                self.kind == PresentationKind::Group && (is_free_pair(from) && to.is_empty() || is_free_pair(to) && from.is_empty())
            }
            RuleKind::WagnerRetract => {
                self.kind == PresentationKind::InverseMonoid && (is_retract(from, to) || is_retract(to, from))
            }
            RuleKind::WagnerCommute => self.kind == PresentationKind::InverseMonoid && is_commute(from, to),
        }
    }

    /// Every single rewrite of `word`, skipping results longer than `cap`.
    /// Returns whether anything was skipped.
    fn neighbors(&self, word: &Word, cap: usize, out: &mut Vec<(Word, Rewrite)>) -> bool {
        let w = word.letters();
        let n = w.len();
        let mut clipped = false;
        let emit = |out: &mut Vec<(Word, Rewrite)>, pos: usize, from: &[Letter], to: Word, rule: RuleKind| {
            let mut letters = Vec::with_capacity(n - from.len() + to.len());
            letters.extend_from_slice(&w[..pos]);
            letters.extend_from_slice(to.letters());
            letters.extend_from_slice(&w[pos + from.len()..]);
            out.push((Word::from_letters(letters), Rewrite { pos, from: Word::from_letters(from.to_vec()), to, rule }));
        };
        for (from, to) in &self.pairs {
            let f = from.letters();
            if f.len() > n {
                continue;
            }
            if n - f.len() + to.len() > cap {
                clipped = true;
                continue;
            }
            for pos in 0..=n - f.len() {
                if &w[pos..pos + f.len()] == f {
                    emit(out, pos, f, to.clone(), RuleKind::Relation);
                }
            }
        }
        match self.kind {
            PresentationKind::Monoid => {}
            PresentationKind::Group => {
                for pos in 0..n.saturating_sub(1) {
                    if w[pos].cancels(w[pos + 1]) {
                        emit(out, pos, &w[pos..pos + 2], Word::empty(), RuleKind::Free);
                    }
                }
                if n + 2 > cap {
                    clipped |= self.alphabet_size > 0;
                } else {
                    for pos in 0..=n {
                        for i in 0..self.alphabet_size {
                            for positive in [true, false] {
                                let l = Letter::new(i, positive);
                                emit(out, pos, &[], Word::from_letters(alloc::vec![l, l.inverse()]), RuleKind::Free);
                            }
                        }
                    }
                }
            }
            PresentationKind::InverseMonoid => {
                for pos in 0..n {
                    for len in 1..=(n - pos) {
                        let x = &w[pos..pos + len];
                        // x x^-1 x -> x
                        if pos + 3 * len <= n && is_inverse_of(&w[pos + len..pos + 2 * len], x) && &w[pos + 2 * len..pos + 3 * len] == x {
                            emit(out, pos, &w[pos..pos + 3 * len], Word::from_letters(x.to_vec()), RuleKind::WagnerRetract);
                        }
                        // x -> x x^-1 x
                        if n + 2 * len > cap {
                            clipped = true;
                        } else {
                            let xw = Word::from_letters(x.to_vec());
                            emit(out, pos, x, Word::concat_all([&xw, &xw.invert(), &xw]), RuleKind::WagnerRetract);
                        }
                        // x x^-1 y y^-1 -> y y^-1 x x^-1
                        if pos + 2 * len < n && is_inverse_of(&w[pos + len..(pos + 2 * len).min(n)], x) {
                            let rest = n - pos - 2 * len;
                            for ylen in 1..=rest / 2 {
                                let y = &w[pos + 2 * len..pos + 2 * len + ylen];
                                if is_inverse_of(&w[pos + 2 * len + ylen..pos + 2 * len + 2 * ylen], y) && x != y {
                                    let yw = Word::from_letters(y.to_vec());
                                    let xw = Word::from_letters(x.to_vec());
                                    let to = Word::concat_all([&yw, &yw.invert(), &xw, &xw.invert()]);
                                    emit(out, pos, &w[pos..pos + 2 * len + 2 * ylen], to, RuleKind::WagnerCommute);
                                }
                            }
                        }
                    }
                }
            }
        }
        clipped
    }
}

fn is_inverse_of(candidate: &[Letter], x: &[Letter]) -> bool {
    candidate.len() == x.len() && candidate.iter().zip(x.iter().rev()).all(|(c, l)| *c == l.inverse())
}

fn is_free_pair(w: &Word) -> bool {
    w.len() == 2 && w.letters()[0].cancels(w.letters()[1])
}

/// `long = x x^-1 x` and `short = x` with `x` nonempty.
fn is_retract(long: &Word, short: &Word) -> bool {
    let (l, x) = (long.letters(), short.letters());
    !x.is_empty() && l.len() == 3 * x.len() && &l[..x.len()] == x && is_inverse_of(&l[x.len()..2 * x.len()], x) && &l[2 * x.len()..] == x
}

/// `from = x x^-1 y y^-1`, `to = y y^-1 x x^-1` for some nonempty `x`, `y`.
fn is_commute(from: &Word, to: &Word) -> bool {
    let (f, t) = (from.letters(), to.letters());
    if f.len() != t.len() || f.len() % 2 != 0 {
        return false;
    }
    let half = f.len() / 2;
    (1..half).any(|lx| {
        let ly = half - lx;
        let x = &f[..lx];
        let y = &f[2 * lx..2 * lx + ly];
        is_inverse_of(&f[lx..2 * lx], x)
            && is_inverse_of(&f[2 * lx + ly..], y)
            && &t[..ly] == y
            && is_inverse_of(&t[ly..2 * ly], y)
            && &t[2 * ly..2 * ly + lx] == x
            && is_inverse_of(&t[2 * ly + lx..], x)
    })
}

/// A chain of single rewrites from `words[0]` to the last word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub words: Vec<Word>,
    pub rewrites: Vec<Rewrite>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("derivation has {words} words but {rewrites} rewrites")]
    Shape { words: usize, rewrites: usize },
    #[error("step {0} does not apply to its word")]
    DoesNotApply(usize),
    #[error("step {0} is not an instance of its rule")]
    Unjustified(usize),
    #[error("derivation runs between the wrong endpoints")]
    Endpoints,
}

impl Derivation {
    pub fn len(&self) -> usize {
        self.rewrites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewrites.is_empty()
    }

    /// Re-checks every step against `rules` and the endpoints against `u`, `v`.
    pub fn replay(&self, rules: &RuleSet, u: &Word, v: &Word) -> Result<(), ReplayError> {
        if self.words.len() != self.rewrites.len() + 1 {
            return Err(ReplayError::Shape { words: self.words.len(), rewrites: self.rewrites.len() });
        }
        if self.words.first() != Some(u) || self.words.last() != Some(v) {
            return Err(ReplayError::Endpoints);
        }
        for (i, rewrite) in self.rewrites.iter().enumerate() {
            if !rules.justifies(rewrite) {
                return Err(ReplayError::Unjustified(i));
            }
            if rewrite.apply(&self.words[i]).as_ref() != Some(&self.words[i + 1]) {
                return Err(ReplayError::DoesNotApply(i));
            }
        }
        Ok(())
    }
}

struct Node {
    word: Word,
    parent: usize,
    rewrite: Option<Rewrite>,
    clipped: bool,
}

#[derive(Default)]
struct Side {
    nodes: Vec<Node>,
    index: BTreeMap<Word, usize>,
    frontier: VecDeque<usize>,
}

impl Side {
    fn rooted(word: Word) -> Self {
        let mut side = Side::default();
        side.index.insert(word.clone(), 0);
        side.nodes.push(Node { word, parent: usize::MAX, rewrite: None, clipped: false });
        side.frontier.push_back(0);
        side
    }

    /// Words and rewrites from the root to node `i`.
    fn path(&self, mut i: usize) -> (Vec<Word>, Vec<Rewrite>) {
        let mut words = Vec::new();
        let mut rewrites = Vec::new();
        loop {
            let node = &self.nodes[i];
            words.push(node.word.clone());
            match &node.rewrite {
                Some(r) => rewrites.push(r.clone()),
                None => break,
            }
            i = node.parent;
        }
        words.reverse();
        rewrites.reverse();
        (words, rewrites)
    }
}

/// Bidirectional breadth-first rewriting between `u` and `v`.
///
/// One step examines one neighbour of the word being expanded, so the cost
/// of a step stays proportional to the word length. Words longer than the current length cap are not visited; when both
/// frontiers run dry the cap grows by 2 and the words that skipped a
/// neighbour are expanded again. The cap starts at `max(|u|, |v|) + 2`.
/// When nothing was skipped the whole class of `u` has been visited without
/// meeting `v`, and the task rejects.
pub struct BruteForce {
    id: String,
    rules: RuleSet,
    u: Word,
    v: Word,
    sides: [Side; 2],
    cap: usize,
    state: StepOutcome,
    derivation: Option<Derivation>,
    /// Unexamined neighbours of `pending.0` on side `pending.1`.
    pending: (usize, usize),
    queue: VecDeque<(Word, Rewrite)>,
}

impl BruteForce {
    pub fn new(p: &Presentation, u: Word, v: Word) -> Self {
        Self::with_rules(RuleSet::new(p), u, v)
    }

    pub fn with_rules(rules: RuleSet, u: Word, v: Word) -> Self {
        let cap = u.len().max(v.len()) + 2;
        BruteForce {
            id: String::from("brute_force_equal"),
            rules,
            sides: [Side::rooted(u.clone()), Side::rooted(v.clone())],
            u,
            v,
            cap,
            state: StepOutcome::Running,
            derivation: None,
            pending: (0, 0),
            queue: VecDeque::new(),
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn endpoints(&self) -> (&Word, &Word) {
        (&self.u, &self.v)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn visited(&self) -> usize {
        self.sides[0].nodes.len() + self.sides[1].nodes.len()
    }

    /// Present once the task has accepted.
    pub fn derivation(&self) -> Option<&Derivation> {
        self.derivation.as_ref()
    }

    fn meet(&mut self, side: usize, from_node: usize, word: Word, rewrite: Rewrite, other_node: usize) {
        let (mut words, mut rewrites) = self.sides[side].path(from_node);
        words.push(word);
        rewrites.push(rewrite);
        let (mut back_words, mut back_rewrites) = self.sides[1 - side].path(other_node);
        back_words.pop();
        back_words.reverse();
        back_rewrites.reverse();
        words.extend(back_words);
        rewrites.extend(back_rewrites.iter().map(Rewrite::reversed));
        if side == 1 {
            words.reverse();
            rewrites.reverse();
            rewrites = rewrites.iter().map(Rewrite::reversed).collect();
        }
        self.derivation = Some(Derivation { words, rewrites });
        self.state = StepOutcome::Accepted;
    }

    fn regrow(&mut self) -> StepOutcome {
        let mut any = false;
        for side in &mut self.sides {
            for (i, node) in side.nodes.iter_mut().enumerate() {
                if node.clipped {
                    node.clipped = false;
                    side.frontier.push_back(i);
                    any = true;
                }
            }
        }
        if !any {
            self.state = StepOutcome::Rejected;
        } else {
            self.cap += 2;
        }
        self.state
    }
}

impl SemidecisionTask for BruteForce {
    fn id(&self) -> &str {
        &self.id
    }

    fn step(&mut self) -> StepOutcome {
        if self.state != StepOutcome::Running {
            return self.state;
        }
        if self.u == self.v {
            self.derivation = Some(Derivation { words: alloc::vec![self.u.clone()], rewrites: Vec::new() });
            self.state = StepOutcome::Accepted;
            return self.state;
        }
        if self.queue.is_empty() {
            let [a, b] = [self.sides[0].frontier.len(), self.sides[1].frontier.len()];
            let side = match (a, b) {
                (0, 0) => return self.regrow(),
                (0, _) => 1,
                (_, 0) => 0,
                _ if b < a => 1,
                _ => 0,
            };
            let node = self.sides[side].frontier.pop_front().expect("nonempty frontier");
            let mut found = Vec::new();
            let clipped = self.rules.neighbors(&self.sides[side].nodes[node].word, self.cap, &mut found);
            self.sides[side].nodes[node].clipped = clipped;
            self.pending = (node, side);
            self.queue.extend(found);
            if self.queue.is_empty() {
                return self.state;
            }
        }
        let (node, side) = self.pending;
        let (word, rewrite) = self.queue.pop_front().expect("nonempty queue");
        if let Some(&other) = self.sides[1 - side].index.get(&word) {
            self.queue.clear();
            self.meet(side, node, word, rewrite, other);
            return self.state;
        }
        let this = &mut self.sides[side];
        if !this.index.contains_key(&word) {
            this.index.insert(word.clone(), this.nodes.len());
            this.frontier.push_back(this.nodes.len());
            this.nodes.push(Node { word, parent: node, rewrite: Some(rewrite), clipped: false });
        }
        self.state
    }
}

pub fn brute_force_equal(p: &Presentation, u: Word, v: Word) -> BruteForce {
    BruteForce::new(p, u, v)
}

/// Result of running a prover to a budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Proof {
    Accepted(Derivation),
    Rejected,
    Unknown,
}

/// Runs [`brute_force_equal`] for at most `budget` steps.
pub fn prove_equal(p: &Presentation, u: &Word, v: &Word, budget: u64) -> (Proof, u64) {
    let mut task = BruteForce::new(p, u.clone(), v.clone());
    let (outcome, steps) = run_task(&mut task, budget);
    let proof = match outcome {
        Outcome::Accepted => Proof::Accepted(task.derivation.expect("accepted with derivation")),
        Outcome::Rejected => Proof::Rejected,
        Outcome::Unknown => Proof::Unknown,
    };
    (proof, steps)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RcError {
    #[error("right cancellative closure needs a monoid presentation")]
    NotMonoid,
    #[error("words must be positive")]
    NegativeLetter,
    #[error("word uses a letter outside the alphabet")]
    UnknownLetter,
}

/// Why two words were merged by [`RcClose`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RcReason {
    /// The `i`-th defining relation.
    Relation(usize),
    /// `x = p a`, `y = q a` with `p = q` already derived.
    Right,
    /// `x = a p`, `y = a q` with `p = q` already derived.
    Left,
    /// `x a = y a` already derived.
    Cancel(Letter),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RcEdge {
    pub x: Word,
    pub y: Word,
    pub reason: RcReason,
}

/// The merges performed by [`RcClose`], in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RcCertificate {
    pub edges: Vec<RcEdge>,
}

impl RcCertificate {
    /// Rebuilds the equivalence from scratch, checking every merge against
    /// the merges before it, then checks `u = v`.
    pub fn replay(&self, p: &Presentation, u: &Word, v: &Word) -> bool {
        let mut uf: BTreeMap<Word, Word> = BTreeMap::new();
        fn find(uf: &mut BTreeMap<Word, Word>, w: &Word) -> Word {
            let mut root = w.clone();
            while let Some(parent) = uf.get(&root) {
                root = parent.clone();
            }
            root
        }
        for edge in &self.edges {
            let (x, y) = (&edge.x, &edge.y);
            let valid = match edge.reason {
                RcReason::Relation(i) => p
                    .relations
                    .get(i)
                    .is_some_and(|r| (&r.lhs == x && &r.rhs == y) || (&r.lhs == y && &r.rhs == x)),
                RcReason::Right => {
                    !x.is_empty()
                        && !y.is_empty()
                        && x.letters().last() == y.letters().last()
                        && find(&mut uf, &x.prefix(x.len() - 1)) == find(&mut uf, &y.prefix(y.len() - 1))
                }
                RcReason::Left => {
                    !x.is_empty()
                        && !y.is_empty()
                        && x.letters()[0] == y.letters()[0]
                        && find(&mut uf, &x.suffix_from(1)) == find(&mut uf, &y.suffix_from(1))
                }
                RcReason::Cancel(a) => {
                    let (xa, ya) = (x.concat(&Word::letter(a)), y.concat(&Word::letter(a)));
                    find(&mut uf, &xa) == find(&mut uf, &ya)
                }
            };
            if !valid {
                return false;
            }
            let (rx, ry) = (find(&mut uf, x), find(&mut uf, y));
            if rx != ry {
                uf.insert(rx, ry);
            }
        }
        u == v || find(&mut uf, u) == find(&mut uf, v)
    }
}

const NONE: u32 = u32::MAX;

/// Closure of the defining relations of a monoid presentation under
/// congruence and right cancellation (`x z = y z` implies `x = y`).
///
/// Positive words are added one per step in shortlex order; each class keeps,
/// per letter, one right extension `p a`, one left extension `a p` and one
/// right quotient `p` (with `p a` in the class), and merging two classes
/// merges the corresponding entries. Every step adds one word or performs
/// one pending merge.
pub struct RcClose {
    id: String,
    k: usize,
    /// `offsets[n]` is the id of the first word of length `n`.
    offsets: Vec<u64>,
    relations: Vec<(u64, u64)>,
    triggers: BTreeMap<u64, Vec<usize>>,
    u: u64,
    v: u64,
    parent: Vec<u32>,
    size: Vec<u32>,
    ext_right: Vec<u32>,
    ext_left: Vec<u32>,
    cancel: Vec<u32>,
    queue: VecDeque<(u32, u32, RcReason)>,
    log: Vec<(u32, u32, RcReason)>,
    state: StepOutcome,
    steps: u64,
}

impl RcClose {
    pub fn new(p: &Presentation, u: &Word, v: &Word) -> Result<Self, RcError> {
        if p.kind != PresentationKind::Monoid {
            return Err(RcError::NotMonoid);
        }
        let k = p.alphabet.len();
        let mut rc = RcClose {
            id: String::from("rc_close"),
            k,
            offsets: alloc::vec![0, 1],
            relations: Vec::new(),
            triggers: BTreeMap::new(),
            u: 0,
            v: 0,
            parent: Vec::new(),
            size: Vec::new(),
            ext_right: Vec::new(),
            ext_left: Vec::new(),
            cancel: Vec::new(),
            queue: VecDeque::new(),
            log: Vec::new(),
            state: StepOutcome::Running,
            steps: 0,
        };
        rc.u = rc.encode(u)?;
        rc.v = rc.encode(v)?;
        for (i, r) in p.relations.iter().enumerate() {
            let (l, r) = (rc.encode(&r.lhs)?, rc.encode(&r.rhs)?);
            rc.relations.push((l, r));
            rc.triggers.entry(l.max(r)).or_default().push(i);
        }
        if rc.u == rc.v {
            rc.state = StepOutcome::Accepted;
        }
        Ok(rc)
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn words_added(&self) -> usize {
        self.parent.len()
    }

    /// Length of the longest word added so far.
    pub fn length_bound(&self) -> usize {
        match self.parent.len() {
            0 => 0,
            n => self.length_of(n as u64 - 1),
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn certificate(&self) -> RcCertificate {
        RcCertificate {
            edges: self
                .log
                .iter()
                .map(|&(x, y, reason)| RcEdge { x: self.decode(x as u64), y: self.decode(y as u64), reason })
                .collect(),
        }
    }

    fn offset(&mut self, n: usize) -> u64 {
        while self.offsets.len() <= n {
            let last = self.offsets.len() - 1;
            let count = (self.k as u64).saturating_pow(last as u32);
            let next = self.offsets[last].saturating_add(count);
            self.offsets.push(next);
        }
        self.offsets[n]
    }

    fn encode(&mut self, w: &Word) -> Result<u64, RcError> {
        let mut value: u64 = 0;
        for l in w.letters() {
            if !l.is_positive() {
                return Err(RcError::NegativeLetter);
            }
            if l.index() >= self.k {
                return Err(RcError::UnknownLetter);
            }
            value = value * self.k as u64 + l.index() as u64;
        }
        Ok(self.offset(w.len()) + value)
    }

    fn length_of(&self, id: u64) -> usize {
        self.offsets.iter().rposition(|&o| o <= id).expect("offsets start at 0")
    }

    fn decode(&self, id: u64) -> Word {
        let n = self.length_of(id);
        let mut value = id - self.offsets[n];
        let mut letters = alloc::vec![Letter::pos(0); n];
        for slot in letters.iter_mut().rev() {
            *slot = Letter::pos((value % self.k as u64) as usize);
            value /= self.k as u64;
        }
        Word::from_letters(letters)
    }

    fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    fn add_word(&mut self) {
        let id = self.parent.len() as u64;
        let n = self.length_of_growing(id);
        let node = id as u32;
        self.parent.push(node);
        self.size.push(1);
        let k = self.k;
        self.ext_right.extend(core::iter::repeat_n(NONE, k));
        self.ext_left.extend(core::iter::repeat_n(NONE, k));
        self.cancel.extend(core::iter::repeat_n(NONE, k));
        if n > 0 {
            let value = id - self.offsets[n];
            let base = self.offsets[n - 1];
            let high = (k as u64).pow(n as u32 - 1);
            let (prefix, last) = ((base + value / k as u64) as u32, (value % k as u64) as usize);
            let (suffix, first) = ((base + value % high) as u32, (value / high) as usize);
            self.cancel[node as usize * k + last] = prefix;
            let rp = self.find(prefix) as usize * k + last;
            match self.ext_right[rp] {
                NONE => self.ext_right[rp] = node,
                other => self.queue.push_back((node, other, RcReason::Right)),
            }
            let ls = self.find(suffix) as usize * k + first;
            match self.ext_left[ls] {
                NONE => self.ext_left[ls] = node,
                other => self.queue.push_back((node, other, RcReason::Left)),
            }
        }
        if let Some(relations) = self.triggers.remove(&id) {
            for i in relations {
                let (l, r) = self.relations[i];
                self.queue.push_back((l as u32, r as u32, RcReason::Relation(i)));
            }
        }
    }

    fn length_of_growing(&mut self, id: u64) -> usize {
        let mut n = 0;
        while self.offset(n + 1) <= id {
            n += 1;
        }
        n
    }

    fn union(&mut self, x: u32, y: u32, reason: RcReason) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return;
        }
        self.log.push((x, y, reason));
        let (root, other) = if self.size[rx as usize] >= self.size[ry as usize] { (rx, ry) } else { (ry, rx) };
        self.parent[other as usize] = root;
        self.size[root as usize] += self.size[other as usize];
        let k = self.k;
        for a in 0..k {
            let (r, o) = (root as usize * k + a, other as usize * k + a);
            for (table, reason) in [
                (&mut self.ext_right, RcReason::Right),
                (&mut self.ext_left, RcReason::Left),
                (&mut self.cancel, RcReason::Cancel(Letter::pos(a))),
            ] {
                match (table[r], table[o]) {
                    (_, NONE) => {}
                    (NONE, b) => table[r] = b,
                    (a, b) => self.queue.push_back((a, b, reason)),
                }
            }
        }
    }

    fn settled(&mut self) -> bool {
        let (u, v) = (self.u, self.v);
        let n = self.parent.len() as u64;
        u < n && v < n && self.find(u as u32) == self.find(v as u32)
    }
}

impl SemidecisionTask for RcClose {
    fn id(&self) -> &str {
        &self.id
    }

    fn step(&mut self) -> StepOutcome {
        if self.state != StepOutcome::Running {
            return self.state;
        }
        self.steps += 1;
        match self.queue.pop_front() {
            Some((x, y, reason)) => {
                self.union(x, y, reason);
                if self.settled() {
                    self.state = StepOutcome::Accepted;
                }
            }
            None => {
                if self.k > 0 || self.parent.is_empty() {
                    self.add_word();
                }
            }
        }
        self.state
    }
}

pub fn rc_close(p: &Presentation, u: &Word, v: &Word) -> Result<RcClose, RcError> {
    RcClose::new(p, u, v)
}

/// Triples of positive words by total length, then by the lengths of the
/// three parts, then lexicographically.
#[derive(Debug, Clone)]
pub struct TripleEnumeration {
    k: usize,
    total: usize,
    split: (usize, usize),
    counter: u64,
    done: bool,
}

impl TripleEnumeration {
    pub fn new(alphabet_size: usize) -> Self {
        TripleEnumeration { k: alphabet_size, total: 0, split: (0, 0), counter: 0, done: false }
    }

    fn advance_split(&mut self) {
        let (a, b) = self.split;
        if b + a < self.total {
            self.split = (a, b + 1);
        } else if a < self.total {
            self.split = (a + 1, 0);
        } else {
            self.total += 1;
            self.split = (0, 0);
        }
        self.counter = 0;
    }
}

impl Iterator for TripleEnumeration {
    type Item = (Word, Word, Word);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if self.k == 0 {
            self.done = true;
            return Some((Word::empty(), Word::empty(), Word::empty()));
        }
        let combos = (self.k as u64).checked_pow(self.total as u32)?;
        let mut value = self.counter;
        let mut letters = alloc::vec![Letter::pos(0); self.total];
        for slot in letters.iter_mut().rev() {
            *slot = Letter::pos((value % self.k as u64) as usize);
            value /= self.k as u64;
        }
        let (a, b) = self.split;
        let word = |range: core::ops::Range<usize>| Word::from_letters(letters[range].to_vec());
        let triple = (word(0..a), word(a..a + b), word(a + b..self.total));
        self.counter += 1;
        if self.counter == combos {
            self.advance_split();
        }
        Some(triple)
    }
}

/// The four equalities `u v = 1`, `v u = 1`, `u w = w p`, `w p q = w` for
/// one triple.
pub struct TripleTask {
    pub v: Word,
    pub p: Word,
    pub q: Word,
    checks: AllOf<BruteForce>,
}

impl TripleTask {
    pub fn derivations(&self) -> Vec<Option<&Derivation>> {
        self.checks.members().map(BruteForce::derivation).collect()
    }
}

impl SemidecisionTask for TripleTask {
    fn id(&self) -> &str {
        self.checks.id()
    }
    fn step(&mut self) -> StepOutcome {
        self.checks.step()
    }
}

type Spawner = alloc::boxed::Box<dyn FnMut(usize) -> Option<TripleTask>>;

/// Semidecides whether the unit `u` stabilizes the H-class of `w` on the
/// right, by searching for a triple `(v, p, q)` as in [`TripleTask`].
pub struct SchutzMembership {
    inner: Staircase<TripleTask, Spawner>,
}

impl SchutzMembership {
    pub fn new(p: &Presentation, u: Word, w: Word) -> Self {
        let rules = RuleSet::new(p);
        let mut triples = TripleEnumeration::new(p.alphabet.len());
        let spawn: Spawner = alloc::boxed::Box::new(move |_| {
            let (v, pp, q) = triples.next()?;
            let task = |x: Word, y: Word| BruteForce::with_rules(rules.clone(), x, y);
            let checks = AllOf::new(
                "triple",
                alloc::vec![
                    task(u.concat(&v), Word::empty()),
                    task(v.concat(&u), Word::empty()),
                    task(u.concat(&w), w.concat(&pp)),
                    task(Word::concat_all([&w, &pp, &q]), w.clone()),
                ],
            );
            Some(TripleTask { v, p: pp, q, checks })
        });
        SchutzMembership { inner: Staircase::new("schutz_membership", spawn) }
    }

    pub fn accepted(&self) -> Option<&TripleTask> {
        self.inner.accepted()
    }

    pub fn spawned(&self) -> usize {
        self.inner.spawned()
    }
}

impl SemidecisionTask for SchutzMembership {
    fn id(&self) -> &str {
        self.inner.id()
    }
    fn step(&mut self) -> StepOutcome {
        self.inner.step()
    }
}

pub fn schutz_membership_semidecide(p: &Presentation, u: Word, w: Word) -> SchutzMembership {
    SchutzMembership::new(p, u, w)
}

/// Outcome of [`two_sided_inverse_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseSearch {
    /// `Equal` when an inverse was proved, `Unknown` otherwise.
    pub answer: OracleAnswer,
    pub inverse: Option<Word>,
    /// Derivations of `x y = 1` and `y x = 1`.
    pub derivations: Option<(Derivation, Derivation)>,
    /// Candidates discarded because `x y` or `y x` is nontrivial in the
    /// group image.
    pub refuted: usize,
    pub steps: u64,
}

/// Looks for `y` among `candidates` with `x y = 1 = y x`, dovetailing the
/// two provers of every candidate that survives the `image` oracle.
pub fn two_sided_inverse_search(
    p: &Presentation,
    x: &Word,
    candidates: &[Word],
    image: Option<&dyn GroupOracle>,
    budget: u64,
) -> InverseSearch {
    let rules = RuleSet::new(p);
    let mut refuted = 0;
    let mut survivors = Vec::new();
    for y in candidates {
        if let Some(oracle) = image {
            let mut b = Budget::default();
            let both = [x.concat(y), y.concat(x)];
            if both.iter().any(|w| oracle.is_trivial(w, &mut b) == OracleAnswer::NotEqual) {
                refuted += 1;
                continue;
            }
        }
        let task = |w: Word| BruteForce::with_rules(rules.clone(), w, Word::empty());
        survivors.push((y.clone(), AllOf::new("inverse", alloc::vec![task(x.concat(y)), task(y.concat(x))])));
    }
    let mut tasks: Vec<AllOf<BruteForce>> = Vec::new();
    let mut ys = Vec::new();
    for (y, t) in survivors {
        ys.push(y);
        tasks.push(t);
    }
    let report = dovetail(&mut tasks, budget);
    let found = report.tasks.iter().position(|t| t.outcome == Outcome::Accepted);
    match found {
        Some(i) => {
            let mut d = tasks[i].members().map(|m| m.derivation().expect("accepted").clone());
            let right = d.next().expect("two provers");
            let left = d.next().expect("two provers");
            InverseSearch {
                answer: OracleAnswer::Equal,
                inverse: Some(ys[i].clone()),
                derivations: Some((right, left)),
                refuted,
                steps: report.total_steps,
            }
        }
        None => InverseSearch {
            answer: OracleAnswer::Unknown { steps: report.total_steps },
            inverse: None,
            derivations: None,
            refuted,
            steps: report.total_steps,
        },
    }
}
