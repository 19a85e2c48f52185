use std::collections::{HashMap, VecDeque};

use super::stateset::StateSet;
use super::{merge_alphabets, Label, Nfa, State, Stepper};
use crate::{Error, Result, Word};

/// Default cap on subset states for determinization.
pub const DEFAULT_SUBSET_LIMIT: usize = 1_000_000;

/// A total deterministic automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<String>,
    /// `delta[q][x]`
    delta: Vec<Vec<State>>,
    initial: State,
    finals: Vec<bool>,
}

impl Dfa {
    /// Panics unless `delta` is total over `alphabet` and all indices are in
    /// range.
    pub fn new(alphabet: Vec<String>, delta: Vec<Vec<State>>, initial: State, finals: Vec<bool>) -> Dfa {
        let n = delta.len();
        assert!(initial < n, "initial state out of range");
        assert_eq!(finals.len(), n, "final marking has wrong length");
        for row in &delta {
            assert_eq!(row.len(), alphabet.len(), "transition function is not total");
            assert!(row.iter().all(|&q| q < n), "state out of range");
        }
        Dfa { alphabet, delta, initial, finals }
    }

    /// The one-state automaton for `Σ*`.
    pub fn universal<S: AsRef<str>>(alphabet: &[S]) -> Dfa {
        let alphabet = merge_alphabets(&[], alphabet);
        let k = alphabet.len();
        Dfa::new(alphabet, vec![vec![0; k]], 0, vec![true])
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn letter_index(&self, letter: &str) -> Option<usize> {
        self.alphabet.iter().position(|l| l == letter)
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals[q]
    }

    pub fn next(&self, q: State, letter: usize) -> State {
        self.delta[q][letter]
    }

    pub fn accepts(&self, w: &Word) -> Result<bool> {
        let mut q = self.initial;
        for l in w.iter() {
            let x = self.letter_index(l).ok_or_else(|| Error::ForeignLetter(l.clone()))?;
            q = self.delta[q][x];
        }
        Ok(self.finals[q])
    }

    /// States from which a final state is reachable.
    pub fn live_states(&self) -> Vec<bool> {
        let rev = crate::graph::transpose(&self.delta);
        crate::graph::reachable(&rev, (0..self.state_count()).filter(|&q| self.finals[q]))
    }

    /// Number of states that can still reach a final state (the count
    /// without a sink).
    pub fn live_state_count(&self) -> usize {
        self.live_states().into_iter().filter(|&l| l).count()
    }

    pub fn complement(&self) -> Dfa {
        let mut d = self.clone();
        for f in &mut d.finals {
            *f = !*f;
        }
        d
    }

    /// The minimal DFA (Moore partition refinement). States are numbered
    /// in breadth-first order from the initial state, so equal languages
    /// over the same alphabet yield equal values.
    pub fn minimize(&self) -> Dfa {
        let order = self.bfs_order();
        let k = self.alphabet.len();
        let mut class: Vec<usize> = vec![usize::MAX; self.state_count()];
        for &q in &order {
            class[q] = self.finals[q] as usize;
        }
        let mut count = 0;
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = vec![usize::MAX; self.state_count()];
            for &q in &order {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[q]);
                sig.extend(self.delta[q].iter().map(|&r| class[r]));
                let fresh = ids.len();
                next[q] = *ids.entry(sig).or_insert(fresh);
            }
            let new_count = ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        let mut delta = vec![Vec::new(); count];
        let mut finals = vec![false; count];
        for &q in &order {
            let c = class[q];
            if delta[c].is_empty() && k > 0 {
                delta[c] = self.delta[q].iter().map(|&r| class[r]).collect();
            }
            finals[c] = self.finals[q];
        }
        let quotient = Dfa { alphabet: self.alphabet.clone(), delta, initial: class[self.initial], finals };
        quotient.renumbered()
    }

    fn bfs_order(&self) -> Vec<State> {
        let mut seen = vec![false; self.state_count()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            for &r in &self.delta[order[i]] {
                if !seen[r] {
                    seen[r] = true;
                    order.push(r);
                }
            }
            i += 1;
        }
        order
    }

    fn renumbered(&self) -> Dfa {
        let order = self.bfs_order();
        let mut id = vec![usize::MAX; self.state_count()];
        for (i, &q) in order.iter().enumerate() {
            id[q] = i;
        }
        let delta = order.iter().map(|&q| self.delta[q].iter().map(|&r| id[r]).collect()).collect();
        let finals = order.iter().map(|&q| self.finals[q]).collect();
        Dfa { alphabet: self.alphabet.clone(), delta, initial: 0, finals }
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut a = Nfa::new(&self.alphabet);
        for _ in 0..self.state_count() {
            a.add_state();
        }
        a.set_initial(self.initial);
        for q in 0..self.state_count() {
            a.set_final(q, self.finals[q]);
            for (x, &r) in self.delta[q].iter().enumerate() {
                a.push_transition(q, Label::Letter(x as u32), r);
            }
        }
        a
    }
}

/// Subset construction after ε-closure; the empty set becomes the sink.
pub(super) fn subset_construction(a: &Nfa, limit: usize) -> Result<(Dfa, Vec<Vec<State>>)> {
    let sim = Stepper::new(a, a.alphabet());
    let k = a.alphabet().len();
    let mut ids: HashMap<StateSet, usize> = HashMap::new();
    let mut sets: Vec<StateSet> = Vec::new();
    let mut delta: Vec<Vec<State>> = Vec::new();
    let mut queue = VecDeque::new();

    let start = sim.start();
    ids.insert(start.clone(), 0);
    sets.push(start);
    queue.push_back(0);
    while let Some(i) = queue.pop_front() {
        let mut row = Vec::with_capacity(k);
        for x in 0..k {
            let t = sim.step(&sets[i], x);
            let j = match ids.get(&t) {
                Some(&j) => j,
                None => {
                    if sets.len() >= limit {
                        return Err(Error::BudgetExceeded { what: "subset states", limit });
                    }
                    let j = sets.len();
                    ids.insert(t.clone(), j);
                    sets.push(t);
                    queue.push_back(j);
                    j
                }
            };
            row.push(j);
        }
        if delta.len() <= i {
            delta.resize(i + 1, Vec::new());
        }
        delta[i] = row;
    }
    let finals = sets.iter().map(|s| sim.accepting(s)).collect();
    let traced = sets.iter().map(|s| s.iter().collect()).collect();
    Ok((Dfa::new(a.alphabet().to_vec(), delta, 0, finals), traced))
}

fn letters_of(w: &Word, alphabet: &[String]) -> (Vec<String>, Vec<usize>) {
    let alphabet = merge_alphabets(alphabet, w.letters());
    let idx = w.iter().map(|l| alphabet.iter().position(|x| x == l).unwrap()).collect();
    (alphabet, idx)
}

/// `↓{w}` over `alphabet ∪ letters(w)`: greedy matching positions
/// `0..=|w|` plus a sink, `|w| + 2` states.
pub fn word_down_dfa<S: AsRef<str>>(w: &Word, alphabet: &[S]) -> Dfa {
    let (alphabet, w) = letters_of(w, &merge_alphabets(&[], alphabet));
    let n = w.len();
    let sink = n + 1;
    let mut delta = Vec::with_capacity(n + 2);
    for i in 0..=n {
        delta.push(
            (0..alphabet.len())
                .map(|x| w[i..].iter().position(|&y| y == x).map_or(sink, |j| i + j + 1))
                .collect(),
        );
    }
    delta.push(vec![sink; alphabet.len()]);
    let mut finals = vec![true; n + 2];
    finals[sink] = false;
    Dfa::new(alphabet, delta, 0, finals)
}

/// `↑{w}` over `alphabet ∪ letters(w)`: subsequence progress `0..=|w|`,
/// `|w| + 1` states.
pub fn word_up_dfa<S: AsRef<str>>(w: &Word, alphabet: &[S]) -> Dfa {
    let (alphabet, w) = letters_of(w, &merge_alphabets(&[], alphabet));
    let n = w.len();
    let delta = (0..=n)
        .map(|i| (0..alphabet.len()).map(|x| if i < n && w[i] == x { i + 1 } else { i }).collect())
        .collect();
    let mut finals = vec![false; n + 1];
    finals[n] = true;
    Dfa::new(alphabet, delta, 0, finals)
}

/// `pΣ*` over `alphabet ∪ letters(p)`: `|p| + 2` states.
pub fn prefix_dfa<S: AsRef<str>>(p: &Word, alphabet: &[S]) -> Dfa {
    let (alphabet, p) = letters_of(p, &merge_alphabets(&[], alphabet));
    let n = p.len();
    let sink = n + 1;
    let mut delta: Vec<Vec<State>> = (0..n)
        .map(|i| (0..alphabet.len()).map(|x| if p[i] == x { i + 1 } else { sink }).collect())
        .collect();
    delta.push(vec![n; alphabet.len()]);
    delta.push(vec![sink; alphabet.len()]);
    let mut finals = vec![false; n + 2];
    finals[n] = true;
    Dfa::new(alphabet, delta, 0, finals)
}
