//! Equivalence of subword- or superword-closed NFA languages.
//!
//! Both automata are closed structurally (`A^↓` or `A^↑`) over the union of
//! their alphabets, and the product of their subset automata is explored
//! breadth-first on the fly. In a structurally closed automaton every
//! letter step can only shrink (down) or grow (up) the current subset, so
//! steps that change neither component are skipped. The first pair with
//! exactly one accepting component gives a shortest separating word.

use std::collections::HashMap;
use std::time::Instant;

use crate::nfa::stateset::StateSet;
use crate::nfa::{merge_alphabets, Nfa, Stepper};
use crate::{Direction, Error, Result, Side, Word};

/// Default cap on explored product pairs.
pub const DEFAULT_PAIR_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Separated { witness: Word, side: Side },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EquivOptions {
    /// Maximum number of product pairs to visit.
    pub pair_budget: usize,
    pub deadline: Option<Instant>,
}

impl Default for EquivOptions {
    fn default() -> Self {
        EquivOptions { pair_budget: DEFAULT_PAIR_BUDGET, deadline: None }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EquivStats {
    pub pairs: usize,
}

/// `A^↓` or `A^↑` over `alphabet` (a superset of `a`'s own).
pub fn close(a: &Nfa, dir: Direction, alphabet: &[String]) -> Nfa {
    let a = a.with_alphabet(alphabet);
    match dir {
        Direction::Down => a.close_down(),
        Direction::Up => a.close_up(),
    }
}

/// Decides `↓L(a) = ↓L(b)` (or `↑`, per `dir`) with the default budget.
pub fn equiv_closed(a: &Nfa, b: &Nfa, dir: Direction) -> Result<Verdict> {
    equiv_closed_with(a, b, dir, &EquivOptions::default()).map(|(v, _)| v)
}

pub fn equiv_closed_with(a: &Nfa, b: &Nfa, dir: Direction, opts: &EquivOptions) -> Result<(Verdict, EquivStats)> {
    let alphabet = merge_alphabets(a.alphabet(), b.alphabet());
    let (ca, cb) = (close(a, dir, &alphabet), close(b, dir, &alphabet));
    let (sa, sb) = (Stepper::new(&ca, &alphabet), Stepper::new(&cb, &alphabet));

    type Pair = (StateSet, StateSet);
    let mut index: HashMap<Pair, usize> = HashMap::new();
    let mut nodes: Vec<Pair> = Vec::new();
    let mut parent: Vec<Option<(usize, usize)>> = Vec::new();

    let separated = |p: &Pair| -> Option<Side> {
        match (sa.accepting(&p.0), sb.accepting(&p.1)) {
            (true, false) => Some(Side::LeftOnly),
            (false, true) => Some(Side::RightOnly),
            _ => None,
        }
    };
    let witness = |parent: &[Option<(usize, usize)>], mut i: usize| -> Word {
        let mut letters = Vec::new();
        while let Some((p, x)) = parent[i] {
            letters.push(alphabet[x].clone());
            i = p;
        }
        letters.reverse();
        Word::new(letters)
    };

    let start = (sa.start(), sb.start());
    if let Some(side) = separated(&start) {
        return Ok((Verdict::Separated { witness: Word::empty(), side }, EquivStats { pairs: 1 }));
    }
    index.insert(start.clone(), 0);
    nodes.push(start);
    parent.push(None);

    let mut head = 0;
    while head < nodes.len() {
        if head % 256 == 0 {
            if let Some(d) = opts.deadline {
                if Instant::now() >= d {
                    return Err(Error::Timeout);
                }
            }
        }
        for x in 0..alphabet.len() {
            let (s, r) = &nodes[head];
            let t = (sa.step(s, x), sb.step(r, x));
            if &t.0 == s && &t.1 == r {
                continue;
            }
            debug_assert!(
                match dir {
                    Direction::Down => t.0.is_subset(s) && t.1.is_subset(r),
                    Direction::Up => s.is_subset(&t.0) && r.is_subset(&t.1),
                },
                "subset step is not monotone"
            );
            if index.contains_key(&t) {
                continue;
            }
            if nodes.len() >= opts.pair_budget {
                return Err(Error::BudgetExceeded { what: "product pairs", limit: opts.pair_budget });
            }
            let i = nodes.len();
            let side = separated(&t);
            index.insert(t.clone(), i);
            nodes.push(t);
            parent.push(Some((head, x)));
            if let Some(side) = side {
                let w = witness(&parent, i);
                return Ok((Verdict::Separated { witness: w, side }, EquivStats { pairs: nodes.len() }));
            }
        }
        head += 1;
    }
    Ok((Verdict::Equal, EquivStats { pairs: nodes.len() }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(w: &str) -> Nfa {
        Nfa::chain(&Word::from_chars(w), &["a", "b"])
    }

    fn sep(v: Verdict) -> (String, Side) {
        match v {
            Verdict::Separated { witness, side } => (witness.to_string(), side),
            Verdict::Equal => panic!("expected a separation"),
        }
    }

    #[test]
    fn down_examples() {
        assert_eq!(sep(equiv_closed(&chain("ab"), &chain("a"), Direction::Down).unwrap()), ("b".into(), Side::LeftOnly));
        assert_eq!(equiv_closed(&chain("ab"), &chain("ab"), Direction::Down).unwrap(), Verdict::Equal);
        let (w, _) = sep(equiv_closed(&chain("ab"), &chain("ba"), Direction::Down).unwrap());
        assert!(w == "ab" || w == "ba");
    }

    #[test]
    fn up_examples() {
        assert_eq!(sep(equiv_closed(&chain("a"), &chain("b"), Direction::Up).unwrap()), ("a".into(), Side::LeftOnly));
        assert_eq!(sep(equiv_closed(&chain("ab"), &chain(""), Direction::Up).unwrap()), ("ε".into(), Side::RightOnly));
    }

    #[test]
    fn alphabets_are_united() {
        let a = Nfa::chain(&Word::from_chars("a"), &["a"]);
        let c = Nfa::chain(&Word::from_chars("c"), &["c"]);
        assert_eq!(sep(equiv_closed(&a, &c, Direction::Down).unwrap()), ("a".into(), Side::LeftOnly));
        // ↑{a} over {a,c} contains "ca"
        let (_, side) = sep(equiv_closed(&a, &c, Direction::Up).unwrap());
        assert_eq!(side, Side::LeftOnly);
    }

    #[test]
    fn pair_budget() {
        let opts = EquivOptions { pair_budget: 1, deadline: None };
        let r = equiv_closed_with(&chain("aaa"), &chain("aaa"), Direction::Down, &opts);
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }
}
