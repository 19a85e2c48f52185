//! Membership by dynamic programming over a binarized copy of the grammar
//! (right-hand sides of length at most two, ε- and unit rules kept).

use super::{Grammar, Symbol, Term};
use crate::qnf::binarize;

/// Symbols are numbered nonterminals first, then terminals.
#[derive(Clone, Debug)]
pub struct Recognizer {
    nonterminals: usize,
    symbols: usize,
    start: usize,
    nullable: Vec<bool>,
    /// `unit_parents[y]`: nonterminals `A` with a rule `A -> y`, `A -> y C`
    /// or `A -> C y` where `C` is nullable.
    unit_parents: Vec<Vec<usize>>,
    binary: Vec<(usize, usize, usize)>,
}

impl Recognizer {
    pub(crate) fn new(g: &Grammar) -> Recognizer {
        let g = binarize(g);
        let nts = g.nonterminals().len();
        let symbols = nts + g.terminals().len();
        let id = |s: Symbol| match s {
            Symbol::N(n) => n.index(),
            Symbol::T(t) => nts + t.index(),
        };

        let mut nullable = vec![false; symbols];
        loop {
            let mut changed = false;
            for p in g.productions() {
                if !nullable[p.lhs.index()] && p.rhs.iter().all(|&s| nullable[id(s)]) {
                    nullable[p.lhs.index()] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        let mut unit_parents = vec![Vec::new(); symbols];
        let mut binary = Vec::new();
        for p in g.productions() {
            let a = p.lhs.index();
            match p.rhs[..] {
                [] => {}
                [y] => unit_parents[id(y)].push(a),
                [y, z] => {
                    let (y, z) = (id(y), id(z));
                    if nullable[z] {
                        unit_parents[y].push(a);
                    }
                    if nullable[y] {
                        unit_parents[z].push(a);
                    }
                    binary.push((a, y, z));
                }
                _ => unreachable!("binarized grammar has a long rule"),
            }
        }
        for parents in &mut unit_parents {
            parents.sort_unstable();
            parents.dedup();
        }

        Recognizer { nonterminals: nts, symbols, start: g.start().index(), nullable, unit_parents, binary }
    }

    fn close_units(&self, cell: &mut [bool]) {
        let mut todo: Vec<usize> = (0..self.symbols).filter(|&s| cell[s]).collect();
        while let Some(y) = todo.pop() {
            for &a in &self.unit_parents[y] {
                if !cell[a] {
                    cell[a] = true;
                    todo.push(a);
                }
            }
        }
    }

    /// Membership of a word given as terminal indices of the original grammar.
    pub fn accepts(&self, w: &[Term]) -> bool {
        let n = w.len();
        if n == 0 {
            return self.nullable[self.start];
        }
        // chart[i][len - 1]: symbols deriving w[i..i + len]
        let mut chart: Vec<Vec<Vec<bool>>> = vec![Vec::with_capacity(n); n];
        for (i, &t) in w.iter().enumerate() {
            let mut cell = vec![false; self.symbols];
            cell[self.nonterminals + t.index()] = true;
            self.close_units(&mut cell);
            chart[i].push(cell);
        }
        for len in 2..=n {
            for i in 0..=n - len {
                let mut cell = vec![false; self.symbols];
                for &(a, y, z) in &self.binary {
                    if cell[a] {
                        continue;
                    }
                    for left in 1..len {
                        if chart[i][left - 1][y] && chart[i + left][len - left - 1][z] {
                            cell[a] = true;
                            break;
                        }
                    }
                }
                self.close_units(&mut cell);
                chart[i].push(cell);
            }
        }
        chart[0][n - 1][self.start]
    }
}
