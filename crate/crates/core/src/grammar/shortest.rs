//! Shortest derivable words (Knuth's generalization of Dijkstra).
//!
//! Candidates are ordered by length, then lexicographically by terminal
//! index. Concatenation is monotone and never smaller than any of its
//! parts in that order, so the first value popped for a nonterminal is
//! final.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{Grammar, Symbol, Term};

pub(super) fn shortest_word(g: &Grammar) -> Option<Vec<Term>> {
    let n = g.nonterminals().len();
    let prods = g.productions();
    let mut best: Vec<Option<Vec<Term>>> = vec![None; n];
    let mut pending: Vec<usize> = prods.iter().map(|p| p.rhs.iter().filter(|s| s.as_nt().is_some()).count()).collect();
    let mut occurs_in: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, p) in prods.iter().enumerate() {
        for m in p.rhs.iter().filter_map(|s| s.as_nt()) {
            occurs_in[m.index()].push(i);
        }
    }

    let candidate = |best: &[Option<Vec<Term>>], i: usize| -> Vec<Term> {
        let mut w = Vec::new();
        for s in &prods[i].rhs {
            match *s {
                Symbol::T(t) => w.push(t),
                Symbol::N(m) => w.extend_from_slice(best[m.index()].as_ref().expect("rhs not final")),
            }
        }
        w
    };

    let mut heap = BinaryHeap::new();
    for (i, p) in prods.iter().enumerate() {
        if pending[i] == 0 {
            let w = candidate(&best, i);
            heap.push(Reverse((w.len(), w, p.lhs)));
        }
    }
    while let Some(Reverse((_, w, lhs))) = heap.pop() {
        if best[lhs.index()].is_some() {
            continue;
        }
        best[lhs.index()] = Some(w);
        if lhs == g.start() {
            break;
        }
        for &i in &occurs_in[lhs.index()] {
            pending[i] -= 1;
            if pending[i] == 0 && best[prods[i].lhs.index()].is_none() {
                let w = candidate(&best, i);
                heap.push(Reverse((w.len(), w, prods[i].lhs)));
            }
        }
    }
    best[g.start().index()].take()
}

#[cfg(test)]
mod tests {
    use crate::grammar::Grammar;
    use crate::nfa::word_up_dfa;
    use crate::Word;

    fn shortest(text: &str) -> Option<String> {
        Grammar::parse(text).unwrap().shortest_word().map(|w| w.to_string())
    }

    #[test]
    fn basics() {
        assert_eq!(shortest("start: S\nS -> a S b |").as_deref(), Some("ε"));
        assert_eq!(shortest("start: S\nS -> a S b | a b").as_deref(), Some("ab"));
        assert_eq!(shortest("start: S\nS -> S a"), None);
    }

    #[test]
    fn ties_follow_terminal_order() {
        // terminals declared b then a
        assert_eq!(shortest("start: S\nS -> b | a").as_deref(), Some("b"));
        assert_eq!(shortest("start: S\nS -> A A\nA -> b | a").as_deref(), Some("bb"));
        assert_eq!(shortest("start: S\nS -> x b | x a | y").as_deref(), Some("y"));
    }

    #[test]
    fn shortest_superword_in_anbn() {
        let g = Grammar::parse("start: S\nS -> a S b |").unwrap();
        let d = word_up_dfa(&Word::from_chars("aab"), g.terminals());
        let w = g.intersect_dfa(&d).unwrap().shortest_word().unwrap();
        assert_eq!(w.to_string(), "aabb");
    }

    #[test]
    fn start_multiple_occurrences_of_same_nonterminal() {
        assert_eq!(shortest("start: S\nS -> A A A\nA -> a a | b").as_deref(), Some("bbb"));
    }
}
