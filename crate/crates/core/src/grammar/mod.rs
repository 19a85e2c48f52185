//! Context-free grammars.
//!
//! A [`Grammar`] keeps its terminal alphabet and its nonterminals in two
//! separate, ordered tables; right-hand sides refer to them through
//! [`Symbol`]. The terminal order is significant: it is the alphabet order
//! used for tie-breaking (shortest words, prefix enumeration) everywhere in
//! the crate.
//!
//! # Text format
//!
//! ```text
//! # optional comment lines
//! start: S
//! S -> a S b |
//! ```
//!
//! The first non-comment line names the start symbol. Each further line is
//! `<lhs> -> alt | alt | ...`; an alternative is a whitespace-separated token
//! sequence and may be empty (ε). A token is a nonterminal iff it appears as
//! the left-hand side of some line; every other token is a terminal.

mod bar_hillel;
mod cyk;
mod shortest;
mod text;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

pub use cyk::Recognizer;

use crate::graph;
use crate::{Error, Result, Word};

/// Index of a nonterminal in its grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Nt(pub(crate) u32);

impl Nt {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index of a terminal in its grammar's alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term(pub(crate) u32);

impl Term {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    T(Term),
    N(Nt),
}

impl Symbol {
    pub fn as_nt(self) -> Option<Nt> {
        match self {
            Symbol::N(n) => Some(n),
            Symbol::T(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Production {
    pub lhs: Nt,
    pub rhs: Vec<Symbol>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    terminals: Vec<String>,
    nonterminals: Vec<String>,
    productions: Vec<Production>,
    start: Nt,
}

impl Grammar {
    /// Assembles a grammar, grouping productions by left-hand side (stable)
    /// and dropping exact duplicates.
    pub(crate) fn from_parts(
        terminals: Vec<String>,
        nonterminals: Vec<String>,
        productions: Vec<Production>,
        start: Nt,
    ) -> Grammar {
        assert!(start.index() < nonterminals.len(), "start symbol out of range");
        let mut seen = HashSet::new();
        let mut productions: Vec<Production> =
            productions.into_iter().filter(|p| seen.insert(p.clone())).collect();
        productions.sort_by_key(|p| p.lhs);
        for p in &productions {
            debug_assert!(p.lhs.index() < nonterminals.len());
            for s in &p.rhs {
                match *s {
                    Symbol::T(t) => debug_assert!(t.index() < terminals.len()),
                    Symbol::N(n) => debug_assert!(n.index() < nonterminals.len()),
                }
            }
        }
        Grammar { terminals, nonterminals, productions, start }
    }

    /// Parses the text format described in the module documentation.
    pub fn parse(text: &str) -> Result<Grammar> {
        text::parse(text)
    }

    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn start(&self) -> Nt {
        self.start
    }

    pub fn nt_name(&self, n: Nt) -> &str {
        &self.nonterminals[n.index()]
    }

    pub fn term_name(&self, t: Term) -> &str {
        &self.terminals[t.index()]
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        match s {
            Symbol::T(t) => self.term_name(t),
            Symbol::N(n) => self.nt_name(n),
        }
    }

    pub fn find_nonterminal(&self, name: &str) -> Option<Nt> {
        self.nonterminals.iter().position(|n| n == name).map(|i| Nt(i as u32))
    }

    pub fn find_terminal(&self, name: &str) -> Option<Term> {
        self.terminals.iter().position(|n| n == name).map(|i| Term(i as u32))
    }

    pub fn nonterminal_ids(&self) -> impl Iterator<Item = Nt> {
        (0..self.nonterminals.len() as u32).map(Nt)
    }

    /// Productions of `n`, in order.
    pub fn productions_of(&self, n: Nt) -> impl Iterator<Item = &Production> + '_ {
        self.productions.iter().filter(move |p| p.lhs == n)
    }

    /// For every nonterminal, the indices of its productions.
    pub(crate) fn rules_by_lhs(&self) -> Vec<Vec<usize>> {
        let mut by_lhs = vec![Vec::new(); self.nonterminals.len()];
        for (i, p) in self.productions.iter().enumerate() {
            by_lhs[p.lhs.index()].push(i);
        }
        by_lhs
    }

    /// Total number of symbols on right-hand sides.
    pub fn size(&self) -> usize {
        self.productions.iter().map(|p| p.rhs.len()).sum()
    }

    /// Maps a word onto terminal indices of this grammar.
    pub fn encode(&self, w: &Word) -> Result<Vec<Term>> {
        let index: HashMap<&str, Term> =
            self.terminals.iter().enumerate().map(|(i, t)| (t.as_str(), Term(i as u32))).collect();
        w.iter()
            .map(|l| index.get(l.as_str()).copied().ok_or_else(|| Error::ForeignLetter(l.clone())))
            .collect()
    }

    pub fn decode(&self, w: &[Term]) -> Word {
        w.iter().map(|&t| self.terminals[t.index()].clone()).collect()
    }

    /// The same grammar over the alphabet extended by `letters` (appended in
    /// order, skipping letters already present).
    ///
    /// Panics if a letter collides with a nonterminal name.
    pub fn with_alphabet<S: AsRef<str>>(&self, letters: &[S]) -> Grammar {
        let mut g = self.clone();
        for l in letters {
            let l = l.as_ref();
            if g.terminals.iter().any(|t| t == l) {
                continue;
            }
            assert!(
                !g.nonterminals.iter().any(|n| n == l),
                "letter `{l}` is a nonterminal of the grammar"
            );
            g.terminals.push(l.to_string());
        }
        g
    }

    /// Successor lists of the dependency graph (edge `X -> Y` iff `Y` occurs
    /// on a right-hand side of `X`).
    pub(crate) fn dependency_graph(&self) -> Vec<Vec<usize>> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.nonterminals.len()];
        for p in &self.productions {
            for s in &p.rhs {
                if let Symbol::N(n) = *s {
                    adj[p.lhs.index()].push(n.index());
                }
            }
        }
        for succ in &mut adj {
            succ.sort_unstable();
            succ.dedup();
        }
        adj
    }

    /// Strongly connected components of the dependency graph.
    pub fn dependency_sccs(&self) -> SccDecomposition {
        let adj = self.dependency_graph();
        let comps = graph::tarjan(&adj);
        let mut component_of = vec![0; adj.len()];
        for (c, members) in comps.iter().enumerate() {
            for &v in members {
                component_of[v] = c;
            }
        }
        let self_loop = (0..adj.len()).map(|v| adj[v].binary_search(&v).is_ok()).collect();
        SccDecomposition {
            components: comps
                .into_iter()
                .map(|c| c.into_iter().map(|v| Nt(v as u32)).collect())
                .collect(),
            component_of,
            self_loop,
        }
    }

    /// Nonterminals reachable from `x` in the dependency graph, `x` included.
    pub fn reachable_nonterminals(&self, x: Nt) -> Vec<Nt> {
        let adj = self.dependency_graph();
        graph::reachable(&adj, [x.index()])
            .into_iter()
            .enumerate()
            .filter(|&(_, r)| r)
            .map(|(i, _)| Nt(i as u32))
            .collect()
    }

    /// `Σ_x`: terminals occurring in productions of nonterminals reachable
    /// from `x`.
    pub fn reachable_terminals(&self, x: Nt) -> BTreeSet<Term> {
        let adj = self.dependency_graph();
        let reach = graph::reachable(&adj, [x.index()]);
        let mut out = BTreeSet::new();
        for p in &self.productions {
            if reach[p.lhs.index()] {
                out.extend(p.rhs.iter().filter_map(|s| match *s {
                    Symbol::T(t) => Some(t),
                    Symbol::N(_) => None,
                }));
            }
        }
        out
    }

    /// Nonterminals that derive at least one terminal word.
    pub fn productive(&self) -> Vec<bool> {
        let mut productive = vec![false; self.nonterminals.len()];
        loop {
            let mut changed = false;
            for p in &self.productions {
                if productive[p.lhs.index()] {
                    continue;
                }
                let ok = p.rhs.iter().all(|s| match *s {
                    Symbol::T(_) => true,
                    Symbol::N(n) => productive[n.index()],
                });
                if ok {
                    productive[p.lhs.index()] = true;
                    changed = true;
                }
            }
            if !changed {
                return productive;
            }
        }
    }

    /// Removes unproductive, then unreachable nonterminals. The terminal
    /// alphabet is kept as is.
    pub fn reduce(&self) -> Result<Grammar> {
        let productive = self.productive();
        if !productive[self.start.index()] {
            return Err(Error::EmptyLanguage);
        }
        let useful_rule = |p: &Production| {
            productive[p.lhs.index()]
                && p.rhs.iter().all(|s| s.as_nt().is_none_or(|n| productive[n.index()]))
        };
        let mut adj = vec![Vec::new(); self.nonterminals.len()];
        for p in self.productions.iter().filter(|p| useful_rule(p)) {
            for n in p.rhs.iter().filter_map(|s| s.as_nt()) {
                adj[p.lhs.index()].push(n.index());
            }
        }
        let reachable = graph::reachable(&adj, [self.start.index()]);
        let keep: Vec<bool> = (0..self.nonterminals.len()).map(|i| reachable[i] && productive[i]).collect();
        Ok(self.restrict(&keep, useful_rule).without_unused_terminals())
    }

    /// Drops terminals that occur on no right-hand side and orders the rest
    /// by first occurrence, as the parser would.
    fn without_unused_terminals(self) -> Grammar {
        let mut renumber = vec![None; self.terminals.len()];
        let mut terminals = Vec::new();
        for p in &self.productions {
            for s in &p.rhs {
                if let Symbol::T(t) = *s {
                    if renumber[t.index()].is_none() {
                        renumber[t.index()] = Some(terminals.len() as u32);
                        terminals.push(self.terminals[t.index()].clone());
                    }
                }
            }
        }
        if terminals.len() == self.terminals.len() && renumber.iter().enumerate().all(|(i, r)| *r == Some(i as u32)) {
            return self;
        }
        let productions = self
            .productions
            .iter()
            .map(|p| Production {
                lhs: p.lhs,
                rhs: p
                    .rhs
                    .iter()
                    .map(|s| match *s {
                        Symbol::T(t) => Symbol::T(Term(renumber[t.index()].unwrap())),
                        n => n,
                    })
                    .collect(),
            })
            .collect();
        Grammar::from_parts(terminals, self.nonterminals, productions, self.start)
    }

    /// Keeps the nonterminals marked in `keep` (renumbering them in order) and
    /// the productions accepted by `filter` whose symbols are all kept.
    fn restrict(&self, keep: &[bool], filter: impl Fn(&Production) -> bool) -> Grammar {
        let mut renumber = vec![None; self.nonterminals.len()];
        let mut names = Vec::new();
        for (i, name) in self.nonterminals.iter().enumerate() {
            if keep[i] {
                renumber[i] = Some(Nt(names.len() as u32));
                names.push(name.clone());
            }
        }
        let productions = self
            .productions
            .iter()
            .filter(|p| filter(p))
            .filter_map(|p| {
                let lhs = renumber[p.lhs.index()]?;
                let rhs = p
                    .rhs
                    .iter()
                    .map(|s| match *s {
                        Symbol::T(t) => Some(Symbol::T(t)),
                        Symbol::N(n) => renumber[n.index()].map(Symbol::N),
                    })
                    .collect::<Option<Vec<_>>>()?;
                Some(Production { lhs, rhs })
            })
            .collect();
        let start = renumber[self.start.index()].expect("start symbol removed");
        Grammar::from_parts(self.terminals.clone(), names, productions, start)
    }

    /// Drops nonterminals that have no productions and occur nowhere
    /// (the start symbol is always kept).
    pub(crate) fn without_orphans(&self) -> Grammar {
        let mut keep = vec![false; self.nonterminals.len()];
        keep[self.start.index()] = true;
        for p in &self.productions {
            keep[p.lhs.index()] = true;
            for n in p.rhs.iter().filter_map(|s| s.as_nt()) {
                keep[n.index()] = true;
            }
        }
        self.restrict(&keep, |_| true)
    }

    /// `true` iff `w ∈ L(self)`.
    pub fn member(&self, w: &Word) -> Result<bool> {
        let word = self.encode(w)?;
        Ok(cyk::Recognizer::new(self).accepts(&word))
    }

    /// A recognizer that can be reused across many membership queries.
    pub fn recognizer(&self) -> Recognizer {
        cyk::Recognizer::new(self)
    }

    /// Bar-Hillel product with a total DFA: a reduced grammar for
    /// `L(self) ∩ L(dfa)`, or `None` when the intersection is empty.
    ///
    /// Letters are matched by name; grammar terminals outside the DFA
    /// alphabet never match.
    pub fn intersect_dfa(&self, dfa: &crate::nfa::Dfa) -> Option<Grammar> {
        bar_hillel::intersect(self, dfa)
    }

    /// `true` iff `L(self) ∩ L(dfa) ≠ ∅`, without building the product grammar.
    pub fn intersects_dfa(&self, dfa: &crate::nfa::Dfa) -> bool {
        bar_hillel::intersects(self, dfa)
    }

    /// A shortest word of `L(self)`; among those, the least one in the
    /// order induced by the terminal table. `None` iff the language is empty.
    pub fn shortest_word(&self) -> Option<Word> {
        shortest::shortest_word(self).map(|w| self.decode(&w))
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write(self, f)
    }
}

/// Incremental construction of a [`Grammar`].
#[derive(Clone, Debug, Default)]
pub struct GrammarBuilder {
    terminals: Vec<String>,
    term_index: HashMap<String, Term>,
    nonterminals: Vec<String>,
    nt_index: HashMap<String, Nt>,
    productions: Vec<Production>,
    seen: HashSet<Production>,
}

impl GrammarBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// A builder pre-loaded with `g`: terminal and nonterminal indices
    /// are preserved.
    pub fn from_grammar(g: &Grammar) -> Self {
        let mut b = GrammarBuilder::new();
        for t in &g.terminals {
            b.terminal(t);
        }
        for n in &g.nonterminals {
            b.nonterminal(n);
        }
        for p in &g.productions {
            b.add(p.lhs, p.rhs.clone());
        }
        b
    }

    /// Builder with the terminals and nonterminals of `g` (indices
    /// preserved) but no productions.
    pub fn with_symbols_of(g: &Grammar) -> Self {
        let mut b = GrammarBuilder::with_alphabet_of(g);
        for n in &g.nonterminals {
            b.nonterminal(n);
        }
        b
    }

    /// Builder with the same alphabet as `g` and no nonterminals.
    pub fn with_alphabet_of(g: &Grammar) -> Self {
        let mut b = GrammarBuilder::new();
        for t in &g.terminals {
            b.terminal(t);
        }
        b
    }

    pub fn terminal(&mut self, name: &str) -> Term {
        if let Some(&t) = self.term_index.get(name) {
            return t;
        }
        assert!(!self.nt_index.contains_key(name), "`{name}` is already a nonterminal");
        let t = Term(self.terminals.len() as u32);
        self.terminals.push(name.to_string());
        self.term_index.insert(name.to_string(), t);
        t
    }

    pub fn nonterminal(&mut self, name: &str) -> Nt {
        if let Some(&n) = self.nt_index.get(name) {
            return n;
        }
        assert!(!self.term_index.contains_key(name), "`{name}` is already a terminal");
        let n = Nt(self.nonterminals.len() as u32);
        self.nonterminals.push(name.to_string());
        self.nt_index.insert(name.to_string(), n);
        n
    }

    /// A new nonterminal named `base`, or `base'`, `base''`, ... if taken.
    pub fn fresh_nonterminal(&mut self, base: &str) -> Nt {
        let mut name = base.to_string();
        while self.nt_index.contains_key(&name) || self.term_index.contains_key(&name) {
            name.push('\'');
        }
        self.nonterminal(&name)
    }

    pub fn t(&mut self, name: &str) -> Symbol {
        Symbol::T(self.terminal(name))
    }

    pub fn n(&mut self, name: &str) -> Symbol {
        Symbol::N(self.nonterminal(name))
    }

    pub fn nt_name(&self, n: Nt) -> &str {
        &self.nonterminals[n.index()]
    }

    /// Adds `lhs -> rhs`; returns `false` if it was already present.
    pub fn add(&mut self, lhs: Nt, rhs: Vec<Symbol>) -> bool {
        let p = Production { lhs, rhs };
        if self.seen.contains(&p) {
            return false;
        }
        self.seen.insert(p.clone());
        self.productions.push(p);
        true
    }

    pub fn build(self, start: Nt) -> Grammar {
        Grammar::from_parts(self.terminals, self.nonterminals, self.productions, start)
    }
}

/// SCCs of a dependency graph in reverse topological order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDecomposition {
    pub components: Vec<Vec<Nt>>,
    pub component_of: Vec<usize>,
    /// `self_loop[x]`: `x` occurs on one of its own right-hand sides.
    pub self_loop: Vec<bool>,
}

impl SccDecomposition {
    pub fn component(&self, x: Nt) -> usize {
        self.component_of[x.index()]
    }

    pub fn same_component(&self, x: Nt, y: Nt) -> bool {
        self.component(x) == self.component(y)
    }

    /// A component without cycles: a single member and no self-loop.
    pub fn is_trivial(&self, c: usize) -> bool {
        let members = &self.components[c];
        members.len() == 1 && !self.self_loop[members[0].index()]
    }
}
