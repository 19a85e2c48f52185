//! Finite automata: ε-NFAs, total DFAs, the closure operators on NFAs and
//! the small DFAs for the sub- and superwords of a single word.
//!
//! Letters are names (strings) kept in an ordered alphabet table; transitions
//! refer to them by index. Alphabets of different automata are matched by
//! name.

mod dfa;
pub(crate) mod stateset;
mod text;

use std::collections::HashMap;

pub use dfa::{prefix_dfa, word_down_dfa, word_up_dfa, Dfa, DEFAULT_SUBSET_LIMIT};

use crate::graph;
use crate::{Error, Result, Word};
use stateset::StateSet;

pub type State = usize;

/// A transition label: ε or an index into the automaton's alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Eps,
    Letter(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Vec<String>,
    edges: Vec<Vec<(Label, State)>>,
    initial: Vec<State>,
    finals: Vec<bool>,
    entry: Option<State>,
    exit: Option<State>,
}

pub(crate) fn merge_alphabets<S: AsRef<str>>(base: &[String], extra: &[S]) -> Vec<String> {
    let mut out = base.to_vec();
    for l in extra {
        if !out.iter().any(|x| x == l.as_ref()) {
            out.push(l.as_ref().to_string());
        }
    }
    out
}

impl Nfa {
    /// An automaton without states over `alphabet` (duplicates dropped).
    pub fn new<S: AsRef<str>>(alphabet: &[S]) -> Nfa {
        Nfa {
            alphabet: merge_alphabets(&[], alphabet),
            edges: Vec::new(),
            initial: Vec::new(),
            finals: Vec::new(),
            entry: None,
            exit: None,
        }
    }

    /// The chain automaton accepting exactly `{w}`: `|w| + 1` states.
    pub fn chain<S: AsRef<str>>(w: &Word, alphabet: &[S]) -> Nfa {
        let mut a = Nfa::new(alphabet);
        let mut q = a.add_state();
        a.set_initial(q);
        for l in w.iter() {
            let x = a.add_letter(l);
            let r = a.add_state();
            a.add_transition(q, Label::Letter(x), r);
            q = r;
        }
        a.set_final(q, true);
        a
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn letter_index(&self, letter: &str) -> Option<u32> {
        self.alphabet.iter().position(|l| l == letter).map(|i| i as u32)
    }

    /// Index of `letter`, appending it to the alphabet if needed.
    pub fn add_letter(&mut self, letter: &str) -> u32 {
        match self.letter_index(letter) {
            Some(i) => i,
            None => {
                self.alphabet.push(letter.to_string());
                (self.alphabet.len() - 1) as u32
            }
        }
    }

    /// The same automaton over the alphabet extended by `letters`.
    pub fn with_alphabet<S: AsRef<str>>(&self, letters: &[S]) -> Nfa {
        let mut a = self.clone();
        a.alphabet = merge_alphabets(&a.alphabet, letters);
        a
    }

    pub fn state_count(&self) -> usize {
        self.edges.len()
    }

    pub fn add_state(&mut self) -> State {
        self.edges.push(Vec::new());
        self.finals.push(false);
        self.edges.len() - 1
    }

    /// Adds `p --label--> q`; returns `false` if it was already present.
    pub fn add_transition(&mut self, p: State, label: Label, q: State) -> bool {
        assert!(p < self.state_count() && q < self.state_count(), "state out of range");
        if let Label::Letter(x) = label {
            assert!((x as usize) < self.alphabet.len(), "letter out of range");
        }
        if self.edges[p].contains(&(label, q)) {
            return false;
        }
        self.edges[p].push((label, q));
        true
    }

    /// Adds a transition without the duplicate check; callers guarantee
    /// freshness.
    pub(crate) fn push_transition(&mut self, p: State, label: Label, q: State) {
        debug_assert!(!self.edges[p].contains(&(label, q)));
        self.edges[p].push((label, q));
    }

    pub fn set_initial(&mut self, q: State) {
        assert!(q < self.state_count(), "state out of range");
        if let Err(i) = self.initial.binary_search(&q) {
            self.initial.insert(i, q);
        }
    }

    pub fn set_final(&mut self, q: State, is_final: bool) {
        self.finals[q] = is_final;
    }

    pub fn set_entry(&mut self, q: Option<State>) {
        self.entry = q;
    }

    pub fn set_exit(&mut self, q: Option<State>) {
        self.exit = q;
    }

    /// Initial states, sorted.
    pub fn initial(&self) -> &[State] {
        &self.initial
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = State> + '_ {
        (0..self.state_count()).filter(|&q| self.finals[q])
    }

    pub fn entry(&self) -> Option<State> {
        self.entry
    }

    pub fn exit(&self) -> Option<State> {
        self.exit
    }

    /// Outgoing transitions of `q`, in insertion order.
    pub fn transitions_from(&self, q: State) -> &[(Label, State)] {
        &self.edges[q]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (State, Label, State)> + '_ {
        self.edges.iter().enumerate().flat_map(|(p, out)| out.iter().map(move |&(l, q)| (p, l, q)))
    }

    pub fn transition_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn label_name(&self, label: Label) -> &str {
        match label {
            Label::Eps => "ε",
            Label::Letter(x) => &self.alphabet[x as usize],
        }
    }

    /// Copies every state and transition of `other` into `self` (letters
    /// matched by name); returns the offset of the copied states. Initial
    /// and final markings are not copied.
    pub(crate) fn embed(&mut self, other: &Nfa) -> State {
        let letters: Vec<u32> = other.alphabet.iter().map(|l| self.add_letter(l)).collect();
        let offset = self.state_count();
        for out in &other.edges {
            let moved = out
                .iter()
                .map(|&(l, q)| {
                    let l = match l {
                        Label::Eps => Label::Eps,
                        Label::Letter(x) => Label::Letter(letters[x as usize]),
                    };
                    (l, q + offset)
                })
                .collect();
            self.edges.push(moved);
            self.finals.push(false);
        }
        offset
    }

    /// Membership by subset simulation with ε-closures.
    pub fn accepts(&self, w: &Word) -> Result<bool> {
        let letters = w
            .iter()
            .map(|l| self.letter_index(l).ok_or_else(|| Error::ForeignLetter(l.clone())))
            .collect::<Result<Vec<_>>>()?;
        let sim = Stepper::new(self, &self.alphabet);
        let mut s = sim.start();
        for x in letters {
            if s.is_empty() {
                return Ok(false);
            }
            s = sim.step(&s, x as usize);
        }
        Ok(sim.accepting(&s))
    }

    /// `A^↓`: an ε-copy of every letter transition.
    pub fn close_down(&self) -> Nfa {
        let mut a = self.clone();
        for p in 0..a.state_count() {
            let extra: Vec<State> =
                self.edges[p].iter().filter(|(l, _)| *l != Label::Eps).map(|&(_, q)| q).collect();
            for q in extra {
                a.add_transition(p, Label::Eps, q);
            }
        }
        a
    }

    /// `A^↑`: a loop on every letter at every state.
    pub fn close_up(&self) -> Nfa {
        let mut a = self.clone();
        for q in 0..a.state_count() {
            for x in 0..a.alphabet.len() {
                a.add_transition(q, Label::Letter(x as u32), q);
            }
        }
        a
    }

    /// Successor lists ignoring labels.
    pub(crate) fn graph(&self) -> Vec<Vec<usize>> {
        self.edges.iter().map(|out| out.iter().map(|&(_, q)| q).collect()).collect()
    }

    /// States reachable from an initial state and co-reachable to a final one.
    pub fn useful_states(&self) -> Vec<bool> {
        let adj = self.graph();
        let fwd = graph::reachable(&adj, self.initial.iter().copied());
        let back = graph::reachable(&graph::transpose(&adj), self.finals());
        fwd.iter().zip(back).map(|(&f, b)| f && b).collect()
    }

    /// Determinizes with the default subset-state limit.
    pub fn determinize(&self) -> Result<Dfa> {
        self.determinize_with_limit(DEFAULT_SUBSET_LIMIT)
    }

    pub fn determinize_with_limit(&self, limit: usize) -> Result<Dfa> {
        dfa::subset_construction(self, limit).map(|(d, _)| d)
    }

    /// Like [`Nfa::determinize_with_limit`], also returning the (ε-closed)
    /// NFA state set behind every DFA state.
    pub fn determinize_traced(&self, limit: usize) -> Result<(Dfa, Vec<Vec<State>>)> {
        dfa::subset_construction(self, limit)
    }

    /// Parses the text format (see [`Nfa::write_text`]).
    pub fn parse(text: &str) -> Result<Nfa> {
        text::parse(text)
    }

    /// Serializes to the text format:
    ///
    /// ```text
    /// nfa states:3 alphabet:a b
    /// initial: 0
    /// final: 2
    /// trans: 0 a 1
    /// trans: 1 eps 2
    /// ```
    ///
    /// Optional `entry:` / `exit:` lines carry the designated fragment states.
    pub fn write_text(&self) -> String {
        text::write(self)
    }

    /// Graphviz rendering.
    pub fn to_dot(&self) -> String {
        text::dot(self)
    }
}

/// `L(a) = Σ*` for an automaton recognizing a subword-closed language: some
/// useful SCC reads every letter on its internal transitions.
pub fn universal_down(a: &Nfa) -> bool {
    let useful = a.useful_states();
    let comps = graph::tarjan(&a.graph());
    let mut comp_of = vec![0; a.state_count()];
    for (c, members) in comps.iter().enumerate() {
        for &q in members {
            comp_of[q] = c;
        }
    }
    let sigma = a.alphabet().len();
    comps.iter().enumerate().any(|(c, members)| {
        if !useful[members[0]] {
            return false;
        }
        let mut seen = vec![false; sigma];
        for &p in members {
            for &(l, q) in a.transitions_from(p) {
                if let Label::Letter(x) = l {
                    if comp_of[q] == c {
                        seen[x as usize] = true;
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    })
}

/// `L(a) = Σ*` for an automaton recognizing a superword-closed language:
/// `ε ∈ L(a)`.
pub fn universal_up(a: &Nfa) -> bool {
    let sim = Stepper::new(a, a.alphabet());
    sim.accepting(&sim.start())
}

/// Subset simulation of an NFA against a (possibly larger) alphabet given
/// by name. Letters unknown to the automaton have no transitions.
pub(crate) struct Stepper {
    n: usize,
    eps: Vec<Vec<u32>>,
    /// `by_letter[x][q]`: successors of `q` on letter `x` of the target
    /// alphabet.
    by_letter: Vec<Vec<Vec<u32>>>,
    finals: Vec<bool>,
    initial: Vec<State>,
}

impl Stepper {
    pub fn new(a: &Nfa, alphabet: &[String]) -> Stepper {
        let index: HashMap<&str, usize> = alphabet.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let map: Vec<Option<usize>> = a.alphabet.iter().map(|l| index.get(l.as_str()).copied()).collect();
        let n = a.state_count();
        let mut eps = vec![Vec::new(); n];
        let mut by_letter = vec![vec![Vec::new(); n]; alphabet.len()];
        for (p, l, q) in a.transitions() {
            match l {
                Label::Eps => eps[p].push(q as u32),
                Label::Letter(x) => {
                    if let Some(y) = map[x as usize] {
                        by_letter[y][p].push(q as u32);
                    }
                }
            }
        }
        Stepper { n, eps, by_letter, finals: a.finals.clone(), initial: a.initial.clone() }
    }

    fn eps_close(&self, s: &mut StateSet) {
        let mut stack: Vec<usize> = s.iter().collect();
        while let Some(p) = stack.pop() {
            for &q in &self.eps[p] {
                if s.insert(q as usize) {
                    stack.push(q as usize);
                }
            }
        }
    }

    pub fn start(&self) -> StateSet {
        let mut s = StateSet::new(self.n);
        for &q in &self.initial {
            s.insert(q);
        }
        self.eps_close(&mut s);
        s
    }

    pub fn step(&self, s: &StateSet, letter: usize) -> StateSet {
        let mut t = StateSet::new(self.n);
        let succ = &self.by_letter[letter];
        for p in s.iter() {
            for &q in &succ[p] {
                t.insert(q as usize);
            }
        }
        self.eps_close(&mut t);
        t
    }

    pub fn accepting(&self, s: &StateSet) -> bool {
        s.iter().any(|q| self.finals[q])
    }
}
