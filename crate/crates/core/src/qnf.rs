//! Simple quadratic normal form (QNF), preserving the subword closure.
//!
//! A grammar is in QNF when every terminal `x` (and ε) has a dedicated
//! nonterminal `A_x` whose only production is `A_x -> x`, and every other
//! production is `X -> Y X`, `X -> X Y`, `X -> Y` or `X -> Y Z` with
//! `Y, Z ≠ X`. It is *simple* when, in addition, the dependency graph has
//! no cycles apart from self-loops.
//!
//! [`to_simple_qnf`] chains four rewriting steps and a final reduction:
//! [`lift_terminals`], [`collapse_double_recursion`], [`binarize`] and
//! [`contract_sccs`]. Only the first and third preserve the language; all
//! of them preserve its subword closure.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::grammar::{Grammar, GrammarBuilder, Nt, Symbol, Term};
use crate::{graph, Error, Result};

/// The growth contract: `size(to_simple_qnf(g)) ≤ C·size(g) + C`.
pub const GROWTH_CONSTANT: usize = 12;

/// A terminal or ε (`None`).
pub type TerminalKey = Option<Term>;

/// A grammar validated to be in simple QNF, with its `A_x` family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleQnfGrammar {
    underlying: Grammar,
    terminal_nt: BTreeMap<TerminalKey, Nt>,
}

impl SimpleQnfGrammar {
    /// Validates `g`; fails with [`Error::InvalidQnf`] listing the first
    /// violation.
    pub fn new(g: Grammar) -> Result<SimpleQnfGrammar> {
        let violations = qnf_violations(&g);
        if let Some(v) = violations.first() {
            return Err(Error::InvalidQnf(v.to_string()));
        }
        let terminal_nt = terminal_nonterminals(&g);
        Ok(SimpleQnfGrammar { underlying: g, terminal_nt })
    }

    pub fn grammar(&self) -> &Grammar {
        &self.underlying
    }

    pub fn into_grammar(self) -> Grammar {
        self.underlying
    }

    /// `A_x` for a terminal or ε, if present.
    pub fn terminal_nt(&self, x: TerminalKey) -> Option<Nt> {
        self.terminal_nt.get(&x).copied()
    }

    pub fn terminal_nts(&self) -> &BTreeMap<TerminalKey, Nt> {
        &self.terminal_nt
    }

    /// The `x` that `n` stands for, if `n` is some `A_x`.
    pub fn terminal_of(&self, n: Nt) -> Option<TerminalKey> {
        self.terminal_nt.iter().find(|&(_, &m)| m == n).map(|(&k, _)| k)
    }
}

/// For each terminal key, the first nonterminal whose only production is
/// `-> x`.
fn terminal_nonterminals(g: &Grammar) -> BTreeMap<TerminalKey, Nt> {
    let rules = g.rules_by_lhs();
    let mut map = BTreeMap::new();
    for x in g.nonterminal_ids() {
        if let [i] = rules[x.index()][..] {
            let key = match g.productions()[i].rhs[..] {
                [] => Some(None),
                [Symbol::T(t)] => Some(Some(t)),
                _ => None,
            };
            if let Some(k) = key {
                map.entry(k).or_insert(x);
            }
        }
    }
    map
}

fn terminal_rhs(x: TerminalKey) -> Vec<Symbol> {
    x.map(Symbol::T).into_iter().collect()
}

/// `A_x` from `ax`, or a fresh one (with its production) added to `b`.
fn ensure_terminal_nt(
    g: &Grammar,
    b: &mut GrammarBuilder,
    ax: &mut BTreeMap<TerminalKey, Nt>,
    x: TerminalKey,
) -> Nt {
    if let Some(&n) = ax.get(&x) {
        return n;
    }
    let name = match x {
        Some(t) => format!("A_{}", g.term_name(t)),
        None => "A_ε".to_string(),
    };
    let n = b.fresh_nonterminal(&name);
    b.add(n, terminal_rhs(x));
    ax.insert(x, n);
    n
}

/// Replaces every terminal occurrence (and every empty right-hand side) by
/// the matching `A_x`, adding `A_x -> x` for every terminal and for ε.
///
/// A nonterminal whose only production is already `-> x` serves as `A_x`.
pub fn lift_terminals(g: &Grammar) -> Grammar {
    let mut ax = terminal_nonterminals(g);
    let is_ax: Vec<bool> = {
        let mut v = vec![false; g.nonterminals().len()];
        for &n in ax.values() {
            v[n.index()] = true;
        }
        v
    };
    let mut b = GrammarBuilder::with_symbols_of(g);
    let keys = (0..g.terminals().len() as u32).map(|i| Some(Term(i))).chain([None]);
    for x in keys {
        ensure_terminal_nt(g, &mut b, &mut ax, x);
    }
    for p in g.productions() {
        if is_ax[p.lhs.index()] {
            b.add(p.lhs, p.rhs.clone());
            continue;
        }
        let rhs = if p.rhs.is_empty() {
            vec![Symbol::N(ax[&None])]
        } else {
            p.rhs
                .iter()
                .map(|&s| match s {
                    Symbol::T(t) => Symbol::N(ax[&Some(t)]),
                    n => n,
                })
                .collect()
        };
        b.add(p.lhs, rhs);
    }
    b.build(g.start())
}

/// `true` iff some production with its left-hand side in `members` has two
/// or more right-hand side occurrences of members.
fn doubly_recursive(g: &Grammar, in_comp: impl Fn(Nt) -> bool) -> bool {
    g.productions()
        .iter()
        .filter(|p| in_comp(p.lhs))
        .any(|p| p.rhs.iter().filter(|s| s.as_nt().is_some_and(&in_comp)).count() >= 2)
}

fn least_by_name(g: &Grammar, members: &[Nt]) -> Nt {
    *members.iter().min_by(|a, b| g.nt_name(**a).cmp(g.nt_name(**b))).expect("empty component")
}

/// Replaces every doubly recursive SCC by one representative `X` (the
/// member with the least name) with productions `X -> A_x X` for
/// `x ∈ Σ_X` and `X -> A_ε`.
pub fn collapse_double_recursion(g: &Grammar) -> Grammar {
    let sccs = g.dependency_sccs();
    let mut rep: Vec<Option<Nt>> = vec![None; g.nonterminals().len()];
    let mut reps = Vec::new();
    for (c, members) in sccs.components.iter().enumerate() {
        if doubly_recursive(g, |n| sccs.component(n) == c) {
            let r = least_by_name(g, members);
            for &m in members {
                rep[m.index()] = Some(r);
            }
            reps.push(r);
        }
    }
    if reps.is_empty() {
        return g.clone();
    }

    let mut ax = terminal_nonterminals(g);
    let mut b = GrammarBuilder::with_symbols_of(g);
    let renamed = |n: Nt| rep[n.index()].unwrap_or(n);
    for p in g.productions() {
        if rep[p.lhs.index()].is_some() {
            continue;
        }
        let rhs = p
            .rhs
            .iter()
            .map(|&s| match s {
                Symbol::N(n) => Symbol::N(renamed(n)),
                t => t,
            })
            .collect();
        b.add(p.lhs, rhs);
    }
    for &x in &reps {
        for t in g.reachable_terminals(x) {
            let a = ensure_terminal_nt(g, &mut b, &mut ax, Some(t));
            b.add(x, vec![Symbol::N(a), Symbol::N(x)]);
        }
        let eps = ensure_terminal_nt(g, &mut b, &mut ax, None);
        b.add(x, vec![Symbol::N(eps)]);
    }
    b.build(renamed(g.start())).without_orphans()
}

/// Splits right-hand sides longer than two into chains `X -> Y X#1`,
/// `X#1 -> Z X#2`, ... Chains for equal suffixes are shared. Unit and ε
/// productions are kept. The language is unchanged.
pub fn binarize(g: &Grammar) -> Grammar {
    if g.productions().iter().all(|p| p.rhs.len() <= 2) {
        return g.clone();
    }
    struct Chains<'a> {
        g: &'a Grammar,
        b: GrammarBuilder,
        memo: HashMap<Vec<Symbol>, Nt>,
        counter: HashMap<Nt, usize>,
    }
    impl Chains<'_> {
        fn chain(&mut self, owner: Nt, suffix: &[Symbol]) -> Symbol {
            if let Some(&n) = self.memo.get(suffix) {
                return Symbol::N(n);
            }
            let k = self.counter.entry(owner).or_insert(0);
            *k += 1;
            let n = self.b.fresh_nonterminal(&format!("{}#{}", self.g.nt_name(owner), k));
            self.memo.insert(suffix.to_vec(), n);
            let rhs = if suffix.len() == 2 {
                suffix.to_vec()
            } else {
                vec![suffix[0], self.chain(owner, &suffix[1..])]
            };
            self.b.add(n, rhs);
            Symbol::N(n)
        }
    }

    let mut c = Chains { g, b: GrammarBuilder::with_symbols_of(g), memo: HashMap::new(), counter: HashMap::new() };
    for p in g.productions() {
        if p.rhs.len() <= 2 {
            c.b.add(p.lhs, p.rhs.clone());
        } else {
            let tail = c.chain(p.lhs, &p.rhs[1..]);
            c.b.add(p.lhs, vec![p.rhs[0], tail]);
        }
    }
    c.b.build(g.start())
}

/// Contracts every SCC into its member with the least name and drops unit
/// self-loops `X -> X`.
///
/// Fails with [`Error::Internal`] if some production has two occurrences
/// of members of its own SCC.
pub fn contract_sccs(g: &Grammar) -> Result<Grammar> {
    let sccs = g.dependency_sccs();
    let mut rep: Vec<Nt> = g.nonterminal_ids().collect();
    for (c, members) in sccs.components.iter().enumerate() {
        if doubly_recursive(g, |n| sccs.component(n) == c) {
            return Err(Error::Internal(format!(
                "component of `{}` is not linear",
                g.nt_name(members[0])
            )));
        }
        if members.len() > 1 {
            let r = least_by_name(g, members);
            for &m in members {
                rep[m.index()] = r;
            }
        }
    }
    let mut b = GrammarBuilder::with_symbols_of(g);
    for p in g.productions() {
        let lhs = rep[p.lhs.index()];
        let rhs: Vec<Symbol> = p
            .rhs
            .iter()
            .map(|&s| match s {
                Symbol::N(n) => Symbol::N(rep[n.index()]),
                t => t,
            })
            .collect();
        if rhs == [Symbol::N(lhs)] {
            continue;
        }
        b.add(lhs, rhs);
    }
    Ok(b.build(rep[g.start().index()]).without_orphans())
}

/// `reduce ∘ contract_sccs ∘ binarize ∘ collapse_double_recursion ∘
/// lift_terminals` applied to `reduce(g)`.
///
/// `A_x` nonterminals for letters that no longer occur are removed by the
/// final reduction.
pub fn to_simple_qnf(g: &Grammar) -> Result<SimpleQnfGrammar> {
    let g = g.reduce()?;
    let out = contract_sccs(&binarize(&collapse_double_recursion(&lift_terminals(&g))))?.reduce()?;
    SimpleQnfGrammar::new(out).map_err(|e| Error::Internal(format!("QNF transformation produced invalid output: {e}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// A terminal or ε outside the unique `A_x -> x` production.
    TerminalPlacement,
    /// Right-hand side longer than two, `X -> X X` or `X -> X`.
    Shape,
    /// A right-hand side nonterminal other than `X` reaches `X` back.
    NotSimple,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// The offending production, rendered `X -> α`.
    pub production: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::TerminalPlacement => "terminal outside an A_x production",
            ViolationKind::Shape => "not of QNF shape",
            ViolationKind::NotSimple => "cycle through a non-self occurrence",
        };
        write!(f, "{what}: {}", self.production)
    }
}

fn render(g: &Grammar, lhs: Nt, rhs: &[Symbol]) -> String {
    let mut s = format!("{} ->", g.nt_name(lhs));
    for &x in rhs {
        s.push(' ');
        s.push_str(g.symbol_name(x));
    }
    s
}

fn qnf_violations(g: &Grammar) -> Vec<Violation> {
    let ax = terminal_nonterminals(g);
    let mut is_ax = vec![false; g.nonterminals().len()];
    for &n in ax.values() {
        is_ax[n.index()] = true;
    }
    let adj = g.dependency_graph();
    let reaches = |from: Nt, to: Nt| graph::reachable(&adj, [from.index()])[to.index()];
    let mut out = Vec::new();
    for p in g.productions() {
        if is_ax[p.lhs.index()] {
            continue;
        }
        let x = p.lhs;
        let mut flag = |kind| out.push(Violation { kind, production: render(g, x, &p.rhs) });
        if p.rhs.is_empty() || p.rhs.iter().any(|s| s.as_nt().is_none()) {
            flag(ViolationKind::TerminalPlacement);
            continue;
        }
        let others: Vec<Nt> = p.rhs.iter().filter_map(|s| s.as_nt()).filter(|&n| n != x).collect();
        let selfs = p.rhs.len() - others.len();
        if p.rhs.len() > 2 || selfs == p.rhs.len() {
            flag(ViolationKind::Shape);
            continue;
        }
        if others.iter().any(|&y| reaches(y, x)) {
            flag(ViolationKind::NotSimple);
        }
    }
    out
}

/// Checks the simple-QNF conditions; the list names every offending
/// production.
pub fn is_simple_qnf(g: &Grammar) -> (bool, Vec<Violation>) {
    let v = qnf_violations(g);
    (v.is_empty(), v)
}
