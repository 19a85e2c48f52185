mod common;

use std::collections::{BTreeSet, HashSet, VecDeque};

use common::*;
use proptest::prelude::*;
use subword_closure::nfa::{prefix_dfa, universal_down, universal_up, word_down_dfa, word_up_dfa, Dfa, Label, Nfa};
use subword_closure::{is_subsequence, Word};

const AB: [&str; 2] = ["a", "b"];

/// Some run of `a` in lockstep with `d` reaches a pair of final states.
fn product_nonempty(a: &Nfa, d: &Dfa) -> bool {
    let mut seen = HashSet::new();
    let mut queue: VecDeque<(usize, usize)> = a.initial().iter().map(|&q| (q, d.initial())).collect();
    seen.extend(queue.iter().copied());
    while let Some((p, s)) = queue.pop_front() {
        if a.is_final(p) && d.is_final(s) {
            return true;
        }
        for &(l, q) in a.transitions_from(p) {
            let t = match l {
                Label::Eps => s,
                Label::Letter(x) => d.next(s, d.letter_index(a.label_name(Label::Letter(x))).unwrap()),
            };
            if seen.insert((q, t)) {
                queue.push_back((q, t));
            }
        }
    }
    false
}

/// Longest path in the subset DAG avoiding the empty set and self loops.
fn longest_nonempty_path(d: &Dfa, sets: &[Vec<usize>]) -> usize {
    let n = d.state_count();
    let mut memo = vec![None; n];
    fn go(q: usize, d: &Dfa, sets: &[Vec<usize>], memo: &mut Vec<Option<usize>>) -> usize {
        if let Some(v) = memo[q] {
            return v;
        }
        let mut best = 0;
        for x in 0..d.alphabet().len() {
            let t = d.next(q, x);
            if t != q && !sets[t].is_empty() {
                best = best.max(1 + go(t, d, sets, memo));
            }
        }
        memo[q] = Some(best);
        best
    }
    (0..n).filter(|&q| !sets[q].is_empty()).map(|q| go(q, d, sets, &mut memo)).max().unwrap_or(0)
}

fn is_universal_dfa(d: &Dfa) -> bool {
    let c = d.complement();
    c.live_state_count() == 0
}

#[test]
fn chain_examples() {
    let ab = Nfa::chain(&w("ab"), &AB);
    assert!(ab.accepts(&w("ab")).unwrap());
    assert!(!ab.accepts(&w("ba")).unwrap());
    assert_eq!(nfa_language_upto(&ab.close_down(), 3), [vec![], letters(&w("a")), letters(&w("b")), letters(&w("ab"))].into());
    let up = ab.close_up();
    assert!(up.accepts(&w("aabb")).unwrap());
    assert!(!up.accepts(&w("ba")).unwrap());
    let d = ab.close_down().determinize().unwrap().minimize();
    assert_eq!(d.state_count(), 4);
    assert_eq!(d.live_state_count(), 3);
}

#[test]
fn epsilon_language_closes_up_to_everything() {
    let mut a = Nfa::new(&AB);
    let q = a.add_state();
    a.set_initial(q);
    a.set_final(q, true);
    assert!(is_universal_dfa(&a.close_up().determinize().unwrap()));
    assert!(universal_up(&a.close_up()));
    assert!(!universal_up(&Nfa::chain(&w("a"), &AB).close_up()));
}

#[test]
fn universal_loop_state() {
    let mut a = Nfa::new(&AB);
    let q = a.add_state();
    a.set_initial(q);
    a.set_final(q, true);
    a.add_transition(q, Label::Letter(0), q);
    a.add_transition(q, Label::Letter(1), q);
    assert!(universal_down(&a));
    assert!(!universal_down(&Nfa::chain(&w("ab"), &AB).close_down()));
}

#[test]
fn word_dfa_sizes() {
    assert!(word_down_dfa(&Word::empty(), &AB).state_count() <= 2);
    assert_eq!(word_up_dfa(&w("ab"), &AB).state_count(), 3);
    let aa = word_down_dfa(&w("aa"), &AB);
    let accepted: Vec<String> = words(&AB, 3).into_iter().filter(|v| aa.accepts(v).unwrap()).map(|v| v.to_string()).collect();
    assert_eq!(accepted, ["ε", "a", "aa"]);
    let b = word_up_dfa(&w("b"), &AB);
    for v in words(&AB, 4) {
        assert_eq!(b.accepts(&v).unwrap(), v.iter().any(|l| l == "b"));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn close_down_matches_product_oracle(seed in any::<u64>()) {
        let a = random_nfa(&mut rng(seed), 5, &AB, true);
        let c = a.close_down();
        prop_assert!(c.transition_count() - a.transition_count() <= a.transition_count());
        for v in words(&AB, 5) {
            prop_assert_eq!(c.accepts(&v).unwrap(), product_nonempty(&a, &word_up_dfa(&v, &AB)), "{}", v);
        }
    }

    #[test]
    fn close_up_matches_subword_oracle(seed in any::<u64>()) {
        let a = random_nfa(&mut rng(seed), 5, &AB, true);
        let c = a.close_up();
        for v in words(&AB, 5) {
            let expect = subwords(v.letters()).iter().any(|u| nfa_accepts(&a, u));
            prop_assert_eq!(c.accepts(&v).unwrap(), expect, "{}", v);
        }
        prop_assert_eq!(c.accepts(&Word::empty()).unwrap(), a.accepts(&Word::empty()).unwrap());
    }

    #[test]
    fn powerset_monotonicity(seed in any::<u64>()) {
        let a = random_nfa(&mut rng(seed), 6, &["a", "b", "c"], true);
        let (d, sets) = a.close_down().determinize_traced(1 << 20).unwrap();
        for s in 0..d.state_count() {
            for x in 0..d.alphabet().len() {
                let t = d.next(s, x);
                prop_assert!(is_subsequence(&sets[t], &sets[s]), "{:?} -> {:?}", sets[s], sets[t]);
            }
        }
        prop_assert!(longest_nonempty_path(&d, &sets) < a.state_count());

        let (d, sets) = a.close_up().determinize_traced(1 << 20).unwrap();
        for s in 0..d.state_count() {
            for x in 0..d.alphabet().len() {
                let t = d.next(s, x);
                prop_assert!(is_subsequence(&sets[s], &sets[t]));
            }
        }
    }

    #[test]
    fn determinize_preserves_language(seed in any::<u64>()) {
        let a = random_nfa(&mut rng(seed), 5, &AB, true);
        let d = a.determinize().unwrap();
        let m = d.minimize();
        for v in words(&AB, 5) {
            let expect = nfa_accepts(&a, v.letters());
            prop_assert_eq!(d.accepts(&v).unwrap(), expect);
            prop_assert_eq!(m.accepts(&v).unwrap(), expect);
            prop_assert_eq!(d.complement().accepts(&v).unwrap(), !expect);
        }
        prop_assert!(dfa_equivalent(&d, &m));
        prop_assert!(dfa_equivalent(&d, &d.complement().complement()));
        prop_assert!(m.state_count() <= d.state_count());
        prop_assert_eq!(m.minimize(), m.clone());
    }

    #[test]
    fn minimize_is_canonical(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_nfa(&mut r, 4, &AB, false);
        // a disjoint copy of `a` next to itself changes nothing
        let mut b = a.clone();
        let off = b.state_count();
        for _ in 0..off {
            b.add_state();
        }
        for (p, l, q) in a.transitions() {
            b.add_transition(p + off, l, q + off);
        }
        for q in a.finals() {
            b.set_final(q + off, true);
        }
        for &q in a.initial() {
            b.set_initial(q + off);
        }
        let (ma, mb) = (a.determinize().unwrap().minimize(), b.determinize().unwrap().minimize());
        prop_assert_eq!(ma, mb);
    }

    #[test]
    fn universality_shortcuts(seed in any::<u64>()) {
        let a = random_nfa(&mut rng(seed), 5, &AB, true);
        let down = a.close_down();
        prop_assert_eq!(universal_down(&down), is_universal_dfa(&down.determinize().unwrap()));
        let up = a.close_up();
        prop_assert_eq!(universal_up(&up), is_universal_dfa(&up.determinize().unwrap()));
    }

    #[test]
    fn word_dfas(letters in proptest::collection::vec(0usize..3, 0..6)) {
        let sigma = ["a", "b", "c"];
        let u: Word = letters.iter().map(|&i| sigma[i].to_string()).collect();
        let (down, up, pre) = (word_down_dfa(&u, &sigma), word_up_dfa(&u, &sigma), prefix_dfa(&u, &sigma));
        prop_assert!(down.state_count() <= u.len() + 2);
        prop_assert!(up.state_count() <= u.len() + 2);
        prop_assert_eq!(pre.state_count(), u.len() + 2);
        for v in words(&sigma, u.len().min(4) + 1) {
            prop_assert_eq!(down.accepts(&v).unwrap(), is_subsequence(&v, &u));
            prop_assert_eq!(up.accepts(&v).unwrap(), is_subsequence(&u, &v));
            prop_assert_eq!(pre.accepts(&v).unwrap(), v.starts_with(&u));
        }
    }

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let mut a = random_nfa(&mut rng(seed), 6, &["a", "b", "if"], true);
        if seed % 2 == 0 {
            a.set_entry(Some(0));
            a.set_exit(Some(a.state_count() - 1));
        }
        let back = Nfa::parse(&a.write_text()).unwrap();
        prop_assert_eq!(&back, &a);
        let labels: BTreeSet<String> = back.transitions().map(|(_, l, _)| back.label_name(l).to_string()).collect();
        prop_assert!(labels.iter().all(|l| l == "ε" || back.letter_index(l).is_some()));
    }
}
