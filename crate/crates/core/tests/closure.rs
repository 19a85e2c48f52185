mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use subword_closure::closure::{
    build_closure_nfa, build_closure_nfa_naive, closure_nfa_size, coefficient_sets, downward_nfa,
    naive_closure_nfa_size, reachable_nonterminal_count, state_bound, DEFAULT_NAIVE_CAP,
};
use subword_closure::generators::{gen_blowup, gen_lk, gen_pow2};
use subword_closure::grammar::{Grammar, Nt};
use subword_closure::nfa::universal_down;
use subword_closure::qnf::to_simple_qnf;
use subword_closure::Word;

fn naive_recurrence(n: usize) -> Vec<u128> {
    let mut a = vec![2u128];
    for k in 1..=n {
        let s: u128 = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| a[i] + a[j]).sum();
        a.push(2 + s);
    }
    a
}

#[test]
fn corpus_within_bound_and_exact() {
    for g in closure_corpus(100) {
        let q = to_simple_qnf(&g).unwrap();
        let a = build_closure_nfa(&q);
        let n = q.grammar().nonterminals().len();
        assert!(a.state_count() as u128 <= state_bound(n));
        assert_eq!(a.state_count() as u128, closure_nfa_size(&q));
        let k = if g.terminals().len() > 2 { 4 } else { 5 };
        assert_eq!(nfa_language_upto(&a, k), down_closure_upto(&g, k), "{g}");
    }
}

#[test]
fn example_closure() {
    let g = Grammar::parse(EXAMPLE).unwrap();
    let a = downward_nfa(&g).unwrap();
    assert!(a.state_count() as u128 <= 2 * 3u128.pow(9));
    for w in words(&LETTERS, 3) {
        assert!(a.accepts(&w).unwrap(), "{w}");
    }
    assert!(universal_down(&a));
}

#[test]
fn example_coefficients() {
    let q = to_simple_qnf(&Grammar::parse(EXAMPLE).unwrap()).unwrap();
    let g = q.grammar();
    let n = |s: &str| g.find_nonterminal(s).unwrap();
    let t = |s: &str| g.find_terminal(s).unwrap();
    let c = coefficient_sets(&q, n("U"));
    assert_eq!(c.quad, [(n("A_a"), n("U#1"))].into());
    assert_eq!(c.lin, [n("A_ε")].into());
    assert_eq!(c.left_coef, [n("Z")].into());
    assert_eq!(c.right_coef, [n("Z")].into());
    assert_eq!(c.left_alpha, [t("b"), t("c")].into());
    assert_eq!(c.right_alpha, c.left_alpha);

    let w = coefficient_sets(&q, n("S#1"));
    assert_eq!(w.quad, [(n("A_a"), n("U"))].into());
    assert!(w.lin.is_empty() && w.left_coef.is_empty() && w.right_coef.is_empty());
    assert!(w.left_alpha.is_empty() && w.right_alpha.is_empty());
}

#[test]
fn single_letter() {
    let a = downward_nfa(&Grammar::parse("start: S\nS -> a\n").unwrap()).unwrap();
    assert!(a.state_count() <= 18);
    assert_eq!(nfa_language_upto(&a, 3), [vec![], vec!["a".to_string()]].into());
}

#[test]
fn pow2_prefix_of_powers() {
    let a = downward_nfa(&gen_pow2(3)).unwrap();
    for i in 0..=12 {
        assert_eq!(a.accepts(&w(&"a".repeat(i))).unwrap(), i <= 8, "{i}");
    }
}

#[test]
fn anbn_closure_is_astar_bstar() {
    let g = Grammar::parse("start: S\nS -> a S b |\n").unwrap();
    let a = downward_nfa(&g).unwrap();
    for v in words(&["a", "b"], 4) {
        let s = v.to_string();
        let expect = v.is_empty() || !s.contains("ba");
        assert_eq!(a.accepts(&v).unwrap(), expect, "{s}");
    }
}

#[test]
fn lk1_closure_matches_subwords() {
    let g = gen_lk(1);
    let a = downward_nfa(&g).unwrap();
    let mut expect = BTreeSet::new();
    for v in language_upto(&g, 5) {
        expect.extend(subwords(&v));
    }
    assert_eq!(nfa_language_upto(&a, 5), expect);
}

#[test]
fn naive_versus_shared() {
    let a = naive_recurrence(6);
    for (n, &expect) in a.iter().enumerate() {
        let q = to_simple_qnf(&gen_blowup(n)).unwrap();
        let m = q.grammar().nonterminals().len();
        let shared = build_closure_nfa(&q);
        let naive = build_closure_nfa_naive(&q, DEFAULT_NAIVE_CAP).unwrap();
        assert_eq!(naive.state_count() as u128, expect, "n = {n}");
        assert_eq!(naive_closure_nfa_size(&q), expect);
        assert!(shared.state_count() as u128 <= state_bound(m));
        for v in words(&["a"], 6) {
            assert_eq!(shared.accepts(&v).unwrap(), naive.accepts(&v).unwrap(), "n = {n}, {v}");
        }
    }
}

#[test]
fn naive_cap_is_enforced() {
    let q = to_simple_qnf(&gen_blowup(5)).unwrap();
    assert!(build_closure_nfa_naive(&q, 1000).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_under_deletion(seed in any::<u64>()) {
        let g = random_grammar(&mut rng(seed), 6, 3);
        let a = downward_nfa(&g).unwrap();
        prop_assert!(a.accepts(&Word::empty()).unwrap());
        for v in nfa_language_upto(&a, 4) {
            for i in 0..v.len() {
                let mut d = v.clone();
                d.remove(i);
                prop_assert!(nfa_accepts(&a, &d));
            }
        }
    }

    #[test]
    fn coefficient_invariants(seed in any::<u64>()) {
        let g = random_grammar(&mut rng(seed), 6, 3);
        let q = to_simple_qnf(&g).unwrap();
        let gr = q.grammar();
        let scc = gr.dependency_sccs();
        let below = |x: Nt, y: Nt| !scc.same_component(x, y) && scc.component(y) < scc.component(x);
        for x in gr.nonterminal_ids().filter(|&x| q.terminal_of(x).is_none()) {
            let c = coefficient_sets(&q, x);
            for &(y, z) in &c.quad {
                prop_assert!(below(x, y) && below(x, z));
            }
            for &y in c.lin.iter().chain(&c.left_coef).chain(&c.right_coef) {
                prop_assert!(below(x, y));
            }
            let left: BTreeSet<_> = c.left_coef.iter().flat_map(|&y| gr.reachable_terminals(y)).collect();
            let right: BTreeSet<_> = c.right_coef.iter().flat_map(|&y| gr.reachable_terminals(y)).collect();
            prop_assert_eq!(&c.left_alpha, &left);
            prop_assert_eq!(&c.right_alpha, &right);
            prop_assert!(reachable_nonterminal_count(gr, x) >= 1);
        }
    }

    #[test]
    fn random_pow2_lengths(n in 0usize..6) {
        let a = downward_nfa(&gen_pow2(n)).unwrap();
        let m = 1usize << n;
        prop_assert!(a.accepts(&w(&"a".repeat(m))).unwrap());
        prop_assert!(!a.accepts(&w(&"a".repeat(m + 1))).unwrap());
    }
}
