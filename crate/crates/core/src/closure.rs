//! NFAs for the subword closure of a grammar in simple QNF.
//!
//! Every nonterminal `X` gets a fragment with an entry state `q_en` and an
//! exit state `q_ex`. For `A_x` the fragment is `q_en --x,ε--> q_ex`. For
//! any other `X` the fragment holds at most two copies of each child
//! fragment: copy 1 for left factors of quadratic monomials, copy 2 for
//! right factors and linear monomials. It wires
//!
//! * `q_en -ε-> en(Y¹)`, `ex(Y¹) -ε-> en(Z²)`, `ex(Z²) -ε-> q_ex` for `X -> Y Z`,
//! * `q_en -ε-> en(Y²)`, `ex(Y²) -ε-> q_ex` for `X -> Y`,
//!
//! and adds `a`-loops on `q_en` for the letters reachable from left
//! coefficients (`X -> Y X`) and on `q_ex` for those reachable from right
//! coefficients (`X -> X Y`). The whole automaton has at most `2·3^{n-1}`
//! states for `n` nonterminals.

use std::collections::BTreeSet;

use crate::grammar::{Grammar, Nt, Symbol, Term};
use crate::nfa::{Label, Nfa};
use crate::qnf::{to_simple_qnf, SimpleQnfGrammar};
use crate::{graph, Error, Result};

/// Default cap on states for [`build_closure_nfa_naive`].
pub const DEFAULT_NAIVE_CAP: usize = 1_000_000;

/// The monomials of `X` and its coefficient alphabets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoefficientSets {
    /// `Q(X)`: pairs `(Y, Z)` with `X -> Y Z`, `Y, Z ≠ X`.
    pub quad: BTreeSet<(Nt, Nt)>,
    /// `L(X)`: `Y` with `X -> Y`.
    pub lin: BTreeSet<Nt>,
    /// `C_l(X)`: `Y` with `X -> Y X`.
    pub left_coef: BTreeSet<Nt>,
    /// `C_r(X)`: `Y` with `X -> X Y`.
    pub right_coef: BTreeSet<Nt>,
    /// `Σ_l(X)`: letters reachable from `C_l(X)`.
    pub left_alpha: BTreeSet<Term>,
    /// `Σ_r(X)`: letters reachable from `C_r(X)`.
    pub right_alpha: BTreeSet<Term>,
}

pub fn coefficient_sets(g: &SimpleQnfGrammar, x: Nt) -> CoefficientSets {
    let gr = g.grammar();
    let mut c = CoefficientSets::default();
    if g.terminal_of(x).is_some() {
        return c;
    }
    for p in gr.productions_of(x) {
        match p.rhs[..] {
            [Symbol::N(y)] => {
                c.lin.insert(y);
            }
            [Symbol::N(y), Symbol::N(z)] if z == x => {
                c.left_coef.insert(y);
            }
            [Symbol::N(y), Symbol::N(z)] if y == x => {
                c.right_coef.insert(z);
            }
            [Symbol::N(y), Symbol::N(z)] => {
                c.quad.insert((y, z));
            }
            _ => unreachable!("validated QNF has no other shapes"),
        }
    }
    for &y in &c.left_coef {
        c.left_alpha.extend(gr.reachable_terminals(y));
    }
    for &y in &c.right_coef {
        c.right_alpha.extend(gr.reachable_terminals(y));
    }
    c
}

/// `n(X)`: the number of nonterminals reachable from `x`, `x` included.
pub fn reachable_nonterminal_count(g: &Grammar, x: Nt) -> usize {
    g.reachable_nonterminals(x).len()
}

/// `2·3^{n-1}` (saturating), the state bound for `n` nonterminals.
pub fn state_bound(n: usize) -> u128 {
    if n == 0 {
        return 0;
    }
    3u128.checked_pow(n as u32 - 1).and_then(|p| p.checked_mul(2)).unwrap_or(u128::MAX)
}

/// Nonterminals of a QNF grammar, children before parents.
fn bottom_up(g: &Grammar) -> Vec<Nt> {
    graph::tarjan(&g.dependency_graph())
        .into_iter()
        .map(|c| {
            debug_assert_eq!(c.len(), 1, "simple QNF has only trivial components");
            Nt(c[0] as u32)
        })
        .collect()
}

enum Sharing {
    /// Two copies per child, shared by all monomials of the parent.
    Shared,
    /// A fresh copy per monomial occurrence.
    Naive,
}

/// Fragment sizes without building anything.
fn fragment_sizes(g: &SimpleQnfGrammar, sharing: &Sharing) -> Vec<u128> {
    let gr = g.grammar();
    let mut size = vec![0u128; gr.nonterminals().len()];
    for x in bottom_up(gr) {
        if g.terminal_of(x).is_some() {
            size[x.index()] = 2;
            continue;
        }
        let c = coefficient_sets(g, x);
        let s = |y: Nt| size[y.index()];
        size[x.index()] = match sharing {
            Sharing::Shared => {
                let copy1: BTreeSet<Nt> = c.quad.iter().map(|&(y, _)| y).collect();
                let copy2: BTreeSet<Nt> = c.quad.iter().map(|&(_, z)| z).chain(c.lin.iter().copied()).collect();
                2 + copy1.iter().chain(copy2.iter()).map(|&y| s(y)).fold(0u128, u128::saturating_add)
            }
            Sharing::Naive => {
                2 + c.quad.iter().map(|&(y, z)| s(y).saturating_add(s(z))).chain(c.lin.iter().map(|&y| s(y))).fold(0u128, u128::saturating_add)
            }
        };
    }
    size
}

/// Number of states [`build_closure_nfa`] would produce.
pub fn closure_nfa_size(g: &SimpleQnfGrammar) -> u128 {
    fragment_sizes(g, &Sharing::Shared)[g.grammar().start().index()]
}

/// Number of states [`build_closure_nfa_naive`] would produce.
pub fn naive_closure_nfa_size(g: &SimpleQnfGrammar) -> u128 {
    fragment_sizes(g, &Sharing::Naive)[g.grammar().start().index()]
}

fn build(g: &SimpleQnfGrammar, sharing: Sharing, cap: usize) -> Result<Nfa> {
    let gr = g.grammar();
    let total = fragment_sizes(g, &sharing)[gr.start().index()];
    if total > cap as u128 {
        return Err(Error::BudgetExceeded { what: "closure NFA states", limit: cap });
    }
    let alphabet = gr.terminals();
    let mut frags: Vec<Option<Nfa>> = vec![None; gr.nonterminals().len()];

    for x in bottom_up(gr) {
        let mut a = Nfa::new(alphabet);
        let en = a.add_state();
        let ex = a.add_state();
        a.set_entry(Some(en));
        a.set_exit(Some(ex));
        if let Some(t) = g.terminal_of(x) {
            a.push_transition(en, Label::Eps, ex);
            if let Some(t) = t {
                a.push_transition(en, Label::Letter(t.0), ex);
            }
            frags[x.index()] = Some(a);
            continue;
        }

        let c = coefficient_sets(g, x);
        let place = |a: &mut Nfa, y: Nt| -> (usize, usize) {
            let f = frags[y.index()].as_ref().expect("child fragment built first");
            let off = a.embed(f);
            (off + f.entry().unwrap(), off + f.exit().unwrap())
        };
        match sharing {
            Sharing::Shared => {
                let mut copy1 = std::collections::BTreeMap::new();
                let mut copy2 = std::collections::BTreeMap::new();
                for &(y, z) in &c.quad {
                    copy1.entry(y).or_insert_with(|| place(&mut a, y));
                    copy2.entry(z).or_insert_with(|| place(&mut a, z));
                }
                for &y in &c.lin {
                    copy2.entry(y).or_insert_with(|| place(&mut a, y));
                }
                for &(y, z) in &c.quad {
                    let (y_en, y_ex) = copy1[&y];
                    let (z_en, z_ex) = copy2[&z];
                    a.add_transition(en, Label::Eps, y_en);
                    a.add_transition(y_ex, Label::Eps, z_en);
                    a.add_transition(z_ex, Label::Eps, ex);
                }
                for &y in &c.lin {
                    let (y_en, y_ex) = copy2[&y];
                    a.add_transition(en, Label::Eps, y_en);
                    a.add_transition(y_ex, Label::Eps, ex);
                }
            }
            Sharing::Naive => {
                for &(y, z) in &c.quad {
                    let (y_en, y_ex) = place(&mut a, y);
                    let (z_en, z_ex) = place(&mut a, z);
                    a.add_transition(en, Label::Eps, y_en);
                    a.add_transition(y_ex, Label::Eps, z_en);
                    a.add_transition(z_ex, Label::Eps, ex);
                }
                for &y in &c.lin {
                    let (y_en, y_ex) = place(&mut a, y);
                    a.add_transition(en, Label::Eps, y_en);
                    a.add_transition(y_ex, Label::Eps, ex);
                }
            }
        }
        for t in &c.left_alpha {
            a.add_transition(en, Label::Letter(t.0), en);
        }
        for t in &c.right_alpha {
            a.add_transition(ex, Label::Letter(t.0), ex);
        }
        if let Sharing::Shared = sharing {
            debug_assert!(a.state_count() as u128 <= state_bound(reachable_nonterminal_count(gr, x)));
        }
        frags[x.index()] = Some(a);
    }

    let mut a = frags[gr.start().index()].take().expect("start fragment");
    let (en, ex) = (a.entry().unwrap(), a.exit().unwrap());
    a.set_initial(en);
    a.set_final(en, true);
    a.set_final(ex, true);
    debug_assert_eq!(a.state_count() as u128, total);
    Ok(a)
}

/// The closure NFA with shared copies; `L = ↓L(g)`.
///
/// Panics if the result exceeds `2·3^{n-1}` states (`n` nonterminals).
pub fn build_closure_nfa(g: &SimpleQnfGrammar) -> Nfa {
    let a = build(g, Sharing::Shared, usize::MAX).expect("no cap");
    let n = g.grammar().nonterminals().len();
    assert!(
        a.state_count() as u128 <= state_bound(n),
        "closure NFA has {} states, bound 2·3^{} exceeded",
        a.state_count(),
        n - 1
    );
    a
}

/// Like [`build_closure_nfa`], failing instead of building more than `cap`
/// states.
pub fn build_closure_nfa_capped(g: &SimpleQnfGrammar, cap: usize) -> Result<Nfa> {
    if closure_nfa_size(g) > cap as u128 {
        return Err(Error::BudgetExceeded { what: "closure NFA states", limit: cap });
    }
    Ok(build_closure_nfa(g))
}

/// The bottom-up construction without sharing: every monomial occurrence
/// gets its own copy of the child fragment.
pub fn build_closure_nfa_naive(g: &SimpleQnfGrammar, cap: usize) -> Result<Nfa> {
    build(g, Sharing::Naive, cap)
}

/// An NFA for `↓L(g)`: the closure NFA of `to_simple_qnf(g)`, over the full
/// terminal alphabet of `g`.
pub fn downward_nfa(g: &Grammar) -> Result<Nfa> {
    Ok(build_closure_nfa(&to_simple_qnf(g)?))
}

/// [`downward_nfa`] with a state cap.
pub fn downward_nfa_capped(g: &Grammar, cap: usize) -> Result<Nfa> {
    build_closure_nfa_capped(&to_simple_qnf(g)?, cap)
}
