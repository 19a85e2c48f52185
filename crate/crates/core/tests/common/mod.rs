#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subword_closure::generators::{gen_lk, gen_pow2};
use subword_closure::grammar::{Grammar, Symbol};
use subword_closure::nfa::{Dfa, Label, Nfa};
use subword_closure::Word;

pub const EXAMPLE: &str = "\
start: S
S -> X a U | U a U | X
X -> Z b Y |
Y -> X Y a | b
U -> V Z | a c b
V -> Z U |
Z -> c Z | b c
";

pub const LETTERS: [&str; 3] = ["a", "b", "c"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A reduced random grammar with at most `max_nts` nonterminals over at
/// most `max_letters` letters, retrying until the language is nonempty.
pub fn random_grammar(r: &mut impl Rng, max_nts: usize, max_letters: usize) -> Grammar {
    loop {
        let n = r.gen_range(1..=max_nts);
        let k = r.gen_range(1..=max_letters);
        let mut text = String::from("start: N0\n");
        for i in 0..n {
            let alts: Vec<String> = (0..r.gen_range(1..=3))
                .map(|_| {
                    (0..r.gen_range(0..=3))
                        .map(|_| {
                            if r.gen_bool(0.55) {
                                LETTERS[r.gen_range(0..k)].to_string()
                            } else {
                                format!("N{}", r.gen_range(0..n))
                            }
                        })
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            text.push_str(&format!("N{i} -> {}\n", alts.join(" | ")));
        }
        let g = Grammar::parse(&text).unwrap();
        if let Ok(g) = g.reduce() {
            return g;
        }
    }
}

/// A random NFA with `1..=max_states` states over `alphabet`.
pub fn random_nfa(r: &mut impl Rng, max_states: usize, alphabet: &[&str], eps: bool) -> Nfa {
    let n = r.gen_range(1..=max_states);
    let mut a = Nfa::new(alphabet);
    for _ in 0..n {
        a.add_state();
    }
    a.set_initial(r.gen_range(0..n));
    for q in 0..n {
        if r.gen_bool(0.35) {
            a.set_final(q, true);
        }
    }
    let edges = r.gen_range(0..=2 * n + 1);
    for _ in 0..edges {
        let (p, q) = (r.gen_range(0..n), r.gen_range(0..n));
        let label = if eps && r.gen_bool(0.15) {
            Label::Eps
        } else {
            Label::Letter(r.gen_range(0..alphabet.len()) as u32)
        };
        a.add_transition(p, label, q);
    }
    a
}

/// The grammars used for the closure bound and correctness checks.
pub fn closure_corpus(random: usize) -> Vec<Grammar> {
    let mut out = vec![Grammar::parse(EXAMPLE).unwrap()];
    out.extend((0..=8).map(gen_pow2));
    out.extend((1..=2).map(gen_lk));
    let mut r = rng(0x5eed);
    out.extend((0..random).map(|_| random_grammar(&mut r, 6, 3)));
    out
}

/// All words over `alphabet` of length at most `max`, shortest first.
pub fn words<S: AsRef<str>>(alphabet: &[S], max: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Vec::<String>::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &layer {
            for l in alphabet {
                let mut v = w.clone();
                v.push(l.as_ref().to_string());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Word::new));
        layer = next;
    }
    out
}

pub fn words_of_len<S: AsRef<str>>(alphabet: &[S], len: usize) -> Vec<Word> {
    words(alphabet, len).into_iter().filter(|w| w.len() == len).collect()
}

/// All scattered subwords of `w`.
pub fn subwords(w: &[String]) -> BTreeSet<Vec<String>> {
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << w.len()) {
        out.insert(w.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, l)| l.clone()).collect());
    }
    out
}

fn concat_upto(xs: &BTreeSet<Vec<String>>, ys: &BTreeSet<Vec<String>>, k: usize) -> BTreeSet<Vec<String>> {
    let mut out = BTreeSet::new();
    for x in xs {
        for y in ys.iter().filter(|y| x.len() + y.len() <= k) {
            let mut v = x.clone();
            v.extend(y.iter().cloned());
            out.insert(v);
        }
    }
    out
}

/// Least fixpoint of the language equations truncated at length `k`, with
/// `letter(x)` the set standing for terminal `x`.
fn fixpoint(g: &Grammar, k: usize, letter: impl Fn(&str) -> BTreeSet<Vec<String>>) -> BTreeSet<Vec<String>> {
    let n = g.nonterminals().len();
    let mut sets: Vec<BTreeSet<Vec<String>>> = vec![BTreeSet::new(); n];
    loop {
        let mut changed = false;
        for p in g.productions() {
            let mut acc: BTreeSet<Vec<String>> = [Vec::new()].into();
            for &s in &p.rhs {
                let part = match s {
                    Symbol::T(t) => letter(g.term_name(t)),
                    Symbol::N(y) => sets[y.index()].clone(),
                };
                acc = concat_upto(&acc, &part, k);
                if acc.is_empty() {
                    break;
                }
            }
            for w in acc {
                changed |= sets[p.lhs.index()].insert(w);
            }
        }
        if !changed {
            return std::mem::take(&mut sets[g.start().index()]);
        }
    }
}

/// `L(g) ∩ Σ^{≤k}`, independent of the library's membership code.
pub fn language_upto(g: &Grammar, k: usize) -> BTreeSet<Vec<String>> {
    fixpoint(g, k, |x| [vec![x.to_string()]].into())
}

/// `↓L(g) ∩ Σ^{≤k}` from `↓(uv) = ↓u·↓v`.
pub fn down_closure_upto(g: &Grammar, k: usize) -> BTreeSet<Vec<String>> {
    fixpoint(g, k, |x| [vec![], vec![x.to_string()]].into())
}

/// Exact `↓L(g)` membership via `L(g) ∩ ↑{w} ≠ ∅`.
pub fn in_down_closure(g: &Grammar, w: &Word) -> bool {
    let d = subword_closure::nfa::word_up_dfa(w, g.terminals());
    g.intersect_dfa(&d).and_then(|h| h.reduce().ok()).is_some()
}

/// Plain ε-NFA simulation written independently of the library's stepper.
pub fn nfa_accepts(a: &Nfa, w: &[String]) -> bool {
    let close = |set: &mut BTreeSet<usize>| {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(p) = stack.pop() {
            for &(l, q) in a.transitions_from(p) {
                if l == Label::Eps && set.insert(q) {
                    stack.push(q);
                }
            }
        }
    };
    let mut cur: BTreeSet<usize> = a.initial().iter().copied().collect();
    close(&mut cur);
    for letter in w {
        let Some(x) = a.letter_index(letter) else { return false };
        let mut next = BTreeSet::new();
        for &p in &cur {
            for &(l, q) in a.transitions_from(p) {
                if l == Label::Letter(x) {
                    next.insert(q);
                }
            }
        }
        close(&mut next);
        cur = next;
    }
    cur.iter().any(|&q| a.is_final(q))
}

/// `L(a) ∩ Σ^{≤k}` by simulation.
pub fn nfa_language_upto(a: &Nfa, k: usize) -> BTreeSet<Vec<String>> {
    words(a.alphabet(), k).into_iter().map(Word::into_letters).filter(|w| nfa_accepts(a, w)).collect()
}

/// Letter `x` of `a` as an index of `b`; both DFAs must share the alphabet
/// as a set.
fn letter_map(a: &Dfa, b: &Dfa) -> Vec<usize> {
    assert_eq!(a.alphabet().len(), b.alphabet().len());
    a.alphabet().iter().map(|l| b.letter_index(l).expect("same alphabet")).collect()
}

/// Whether two total DFAs over the same alphabet accept the same language,
/// by search of their product.
pub fn dfa_equivalent(a: &Dfa, b: &Dfa) -> bool {
    shortest_difference(a, b).is_none()
}

/// Length of the shortest word accepted by exactly one of two total DFAs,
/// by BFS over their product; `None` when equivalent.
pub fn shortest_difference(a: &Dfa, b: &Dfa) -> Option<usize> {
    let map = letter_map(a, b);
    let mut dist = HashMap::new();
    let mut queue = VecDeque::from([(a.initial(), b.initial())]);
    dist.insert((a.initial(), b.initial()), 0usize);
    while let Some((p, q)) = queue.pop_front() {
        let d = dist[&(p, q)];
        if a.is_final(p) != b.is_final(q) {
            return Some(d);
        }
        for (x, &y) in map.iter().enumerate() {
            let t = (a.next(p, x), b.next(q, y));
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(t) {
                e.insert(d + 1);
                queue.push_back(t);
            }
        }
    }
    None
}

pub fn w(s: &str) -> Word {
    Word::from_chars(s)
}

pub fn letters(w: &Word) -> Vec<String> {
    w.letters().to_vec()
}
