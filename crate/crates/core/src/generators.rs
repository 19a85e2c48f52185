//! Grammar and automaton families for tests and benchmarks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::grammar::{Grammar, GrammarBuilder, Production, Symbol};
use crate::nfa::{Label, Nfa};
use crate::{Error, Result};

/// `{a^(2^n)}` by repeated squaring: `Xn -> X(n-1) X(n-1)`, ..., `X0 -> a`.
pub fn gen_pow2(n: usize) -> Grammar {
    let mut b = GrammarBuilder::new();
    let names: Vec<String> = (0..=n).rev().map(|i| format!("X{i}")).collect();
    for name in &names {
        b.nonterminal(name);
    }
    for i in 1..=n {
        let lhs = b.nonterminal(&format!("X{i}"));
        let child = b.n(&format!("X{}", i - 1));
        b.add(lhs, vec![child, child]);
    }
    let x0 = b.nonterminal("X0");
    let a = b.t("a");
    b.add(x0, vec![a]);
    let start = b.nonterminal(&names[0]);
    b.build(start)
}

/// The words of `{0,1}^(2k+1)`, `k = 2^n`, with two `0`s exactly `k`
/// letters apart, the first one among the first `k` positions.
///
/// `Xi'` inserts a block `0 {0,1}^k 0` into a word of `{0,1}^(2^i - 1)`,
/// `Xi` and `Yi` generate `{0,1}^(2^i)`. Panics if `n = 0`.
pub fn gen_lk(n: usize) -> Grammar {
    assert!(n >= 1, "gen_lk needs n ≥ 1");
    let mut b = GrammarBuilder::new();
    for i in (0..=n).rev() {
        b.nonterminal(&format!("X{i}'"));
    }
    for i in (0..n).rev() {
        b.nonterminal(&format!("X{i}"));
    }
    for i in (0..=n).rev() {
        b.nonterminal(&format!("Y{i}"));
    }
    let zero = b.t("0");
    let one = b.t("1");
    for i in 1..=n {
        let lhs = b.nonterminal(&format!("X{i}'"));
        let x = b.n(&format!("X{}", i - 1));
        let xp = b.n(&format!("X{}'", i - 1));
        b.add(lhs, vec![x, xp]);
        b.add(lhs, vec![xp, x]);
    }
    for i in 1..n {
        let lhs = b.nonterminal(&format!("X{i}"));
        let x = b.n(&format!("X{}", i - 1));
        b.add(lhs, vec![x, x]);
    }
    let x0p = b.nonterminal("X0'");
    let yn = b.n(&format!("Y{n}"));
    b.add(x0p, vec![zero, yn, zero]);
    let x0 = b.nonterminal("X0");
    b.add(x0, vec![zero]);
    b.add(x0, vec![one]);
    for i in 1..=n {
        let lhs = b.nonterminal(&format!("Y{i}"));
        let y = b.n(&format!("Y{}", i - 1));
        b.add(lhs, vec![y, y]);
    }
    let y0 = b.nonterminal("Y0");
    b.add(y0, vec![zero]);
    b.add(y0, vec![one]);
    let start = b.nonterminal(&format!("X{n}'"));
    b.build(start)
}

/// `A0 -> a` and `Ak -> Ai Aj` for all `i, j < k`, start `An`.
pub fn gen_blowup(n: usize) -> Grammar {
    let mut b = GrammarBuilder::new();
    for k in (0..=n).rev() {
        b.nonterminal(&format!("A{k}"));
    }
    let a0 = b.nonterminal("A0");
    let a = b.t("a");
    b.add(a0, vec![a]);
    for k in 1..=n {
        let lhs = b.nonterminal(&format!("A{k}"));
        for i in 0..k {
            for j in 0..k {
                let (yi, yj) = (b.n(&format!("A{i}")), b.n(&format!("A{j}")));
                b.add(lhs, vec![yi, yj]);
            }
        }
    }
    let start = b.nonterminal(&format!("A{n}"));
    b.build(start)
}

/// A propositional formula in disjunctive normal form over `x0..x(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DnfFormula {
    var_count: usize,
    /// Each clause maps a variable to its required value.
    clauses: Vec<BTreeMap<usize, bool>>,
}

impl DnfFormula {
    /// Clauses are lists of literals `(variable, polarity)`. A clause that
    /// assigns both polarities to a variable, or a variable out of range,
    /// is an error.
    pub fn new(var_count: usize, clauses: &[Vec<(usize, bool)>]) -> Result<DnfFormula> {
        let mut out = Vec::with_capacity(clauses.len());
        for c in clauses {
            let mut m = BTreeMap::new();
            for &(v, pol) in c {
                if v >= var_count {
                    return Err(Error::Usage(format!("variable x{v} out of range (n = {var_count})")));
                }
                if m.insert(v, pol).is_some_and(|old| old != pol) {
                    return Err(Error::Usage(format!("clause assigns both polarities to x{v}")));
                }
            }
            out.push(m);
        }
        Ok(DnfFormula { var_count, clauses: out })
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn clauses(&self) -> &[BTreeMap<usize, bool>] {
        &self.clauses
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().any(|c| c.iter().all(|(&v, &pol)| assignment[v] == pol))
    }

    /// Truth-table check.
    pub fn is_tautology(&self) -> bool {
        let n = self.var_count;
        assert!(n < 32, "truth table too large");
        (0u32..1 << n).all(|bits| {
            let a: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            self.evaluate(&a)
        })
    }
}

impl fmt::Display for DnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "⊥");
        }
        let clauses: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                if c.is_empty() {
                    return "⊤".to_string();
                }
                let lits: Vec<String> =
                    c.iter().map(|(&v, &pol)| if pol { format!("x{v}") } else { format!("¬x{v}") }).collect();
                format!("({})", lits.join(" ∧ "))
            })
            .collect();
        write!(f, "{}", clauses.join(" ∨ "))
    }
}

fn bits_alphabet() -> [&'static str; 2] {
    ["0", "1"]
}

/// An NFA over `{0,1}` accepting exactly the satisfying assignments of `f`
/// as words `a0 a1 ... a(n-1)`: one chain per clause from a shared initial
/// state.
pub fn gen_dnf_nfa(f: &DnfFormula) -> Nfa {
    let mut a = Nfa::new(&bits_alphabet());
    let q0 = a.add_state();
    a.set_initial(q0);
    for c in &f.clauses {
        let mut q = q0;
        for v in 0..f.var_count {
            let r = a.add_state();
            match c.get(&v) {
                Some(&pol) => {
                    a.add_transition(q, Label::Letter(pol as u32), r);
                }
                None => {
                    a.add_transition(q, Label::Letter(0), r);
                    a.add_transition(q, Label::Letter(1), r);
                }
            }
            q = r;
        }
        a.set_final(q, true);
    }
    a
}

/// The chain automaton for `{0,1}^n`.
pub fn gen_cube_nfa(n: usize) -> Nfa {
    let mut a = Nfa::new(&bits_alphabet());
    let mut q = a.add_state();
    a.set_initial(q);
    for _ in 0..n {
        let r = a.add_state();
        a.add_transition(q, Label::Letter(0), r);
        a.add_transition(q, Label::Letter(1), r);
        q = r;
    }
    a.set_final(q, true);
    a
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    Add,
    Delete,
    Mutate,
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "add" => Ok(Scenario::Add),
            "delete" => Ok(Scenario::Delete),
            "mutate" => Ok(Scenario::Mutate),
            other => Err(Error::Usage(format!("unknown scenario `{other}` (add|delete|mutate)"))),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Add => "add",
            Scenario::Delete => "delete",
            Scenario::Mutate => "mutate",
        })
    }
}

/// SplitMix64 stream: the seed drives every choice below by modular
/// reduction of successive outputs.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

/// A seed-determined single-rule edit, followed by reduction.
///
/// * `Add`: a new production for a random nonterminal with up to three
///   random symbols.
/// * `Delete`: removes one production.
/// * `Mutate`: replaces one right-hand side symbol by a different symbol.
///
/// Fails with [`Error::EmptyLanguage`] when the edit empties the language
/// (try the next seed), and with [`Error::Usage`] when there is nothing to
/// edit.
pub fn mutate(g: &Grammar, scenario: Scenario, seed: u64) -> Result<Grammar> {
    let mut rng = SplitMix64(seed);
    let symbols: Vec<Symbol> = g
        .terminals()
        .iter()
        .filter_map(|t| g.find_terminal(t).map(Symbol::T))
        .chain(g.nonterminal_ids().map(Symbol::N))
        .collect();
    let mut prods: Vec<Production> = g.productions().to_vec();
    match scenario {
        Scenario::Add => {
            let lhs = g.nonterminal_ids().nth(rng.below(g.nonterminals().len())).unwrap();
            let len = rng.below(4);
            let rhs = (0..len).map(|_| symbols[rng.below(symbols.len())]).collect();
            prods.push(Production { lhs, rhs });
        }
        Scenario::Delete => {
            if prods.is_empty() {
                return Err(Error::Usage("no production to delete".into()));
            }
            prods.remove(rng.below(prods.len()));
        }
        Scenario::Mutate => {
            let candidates: Vec<usize> = (0..prods.len()).filter(|&i| !prods[i].rhs.is_empty()).collect();
            if candidates.is_empty() || symbols.len() < 2 {
                return Err(Error::Usage("no symbol to mutate".into()));
            }
            let i = candidates[rng.below(candidates.len())];
            let pos = rng.below(prods[i].rhs.len());
            let old = prods[i].rhs[pos];
            let others: Vec<Symbol> = symbols.iter().copied().filter(|&s| s != old).collect();
            prods[i].rhs[pos] = others[rng.below(others.len())];
        }
    }
    let mut b = GrammarBuilder::with_symbols_of(g);
    for p in prods {
        b.add(p.lhs, p.rhs);
    }
    b.build(g.start()).reduce()
}
