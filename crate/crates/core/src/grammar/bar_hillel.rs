//! Bar-Hillel product of a grammar with a total DFA.
//!
//! Product nonterminals are triples `[p, X, q]` deriving the words of `L(X)`
//! that lead the DFA from `p` to `q`. Only productive triples are ever
//! materialized: they are found bottom-up by a worklist fixpoint, then the
//! productions are generated top-down from the start triples.

use std::collections::{HashMap, HashSet, VecDeque};

use super::{Grammar, GrammarBuilder, Nt, Symbol};
use crate::nfa::Dfa;
use crate::qnf::binarize;

type Fact = (u32, u32, u32);

struct Saturation {
    g: Grammar,
    nts: usize,
    facts: HashSet<Fact>,
    /// `(X, p) -> [q]` for every fact `(p, X, q)`.
    from: HashMap<(u32, u32), Vec<u32>>,
    /// `(X, q) -> [p]` for every fact `(p, X, q)`.
    until: HashMap<(u32, u32), Vec<u32>>,
    work: Vec<Fact>,
}

impl Saturation {
    fn id(&self, s: Symbol) -> u32 {
        match s {
            Symbol::N(n) => n.0,
            Symbol::T(t) => (self.nts + t.index()) as u32,
        }
    }

    fn add(&mut self, f: Fact) {
        if self.facts.insert(f) {
            let (p, x, q) = f;
            self.from.entry((x, p)).or_default().push(q);
            self.until.entry((x, q)).or_default().push(p);
            self.work.push(f);
        }
    }

    fn run(g: &Grammar, dfa: &Dfa) -> Saturation {
        let g = binarize(g);
        let nts = g.nonterminals().len();
        let symbols = nts + g.terminals().len();
        let mut s = Saturation {
            g,
            nts,
            facts: HashSet::new(),
            from: HashMap::new(),
            until: HashMap::new(),
            work: Vec::new(),
        };

        let mut units: Vec<Vec<u32>> = vec![Vec::new(); symbols];
        let mut first_of: Vec<Vec<(u32, u32)>> = vec![Vec::new(); symbols];
        let mut second_of: Vec<Vec<(u32, u32)>> = vec![Vec::new(); symbols];
        let mut nullable_rules = Vec::new();
        for p in s.g.productions() {
            let a = p.lhs.0;
            match p.rhs[..] {
                [] => nullable_rules.push(a),
                [x] => units[s.id(x) as usize].push(a),
                [x, y] => {
                    let (x, y) = (s.id(x), s.id(y));
                    first_of[x as usize].push((a, y));
                    second_of[y as usize].push((a, x));
                }
                _ => unreachable!("binarized grammar has a long rule"),
            }
        }

        let states = dfa.state_count() as u32;
        for &a in &nullable_rules {
            for p in 0..states {
                s.add((p, a, p));
            }
        }
        for t in 0..s.g.terminals().len() {
            if let Some(letter) = dfa.letter_index(&s.g.terminals()[t]) {
                let x = (nts + t) as u32;
                for p in 0..states {
                    s.add((p, x, dfa.next(p as usize, letter) as u32));
                }
            }
        }

        while let Some((p, x, q)) = s.work.pop() {
            for &a in &units[x as usize] {
                s.add((p, a, q));
            }
            for &(a, y) in &first_of[x as usize] {
                let ends = s.from.get(&(y, q)).cloned().unwrap_or_default();
                for r in ends {
                    s.add((p, a, r));
                }
            }
            for &(a, y) in &second_of[x as usize] {
                let starts = s.until.get(&(y, p)).cloned().unwrap_or_default();
                for o in starts {
                    s.add((o, a, q));
                }
            }
        }
        s
    }

    fn start_triples(&self, dfa: &Dfa) -> Vec<Fact> {
        let start = self.g.start().0;
        let q0 = dfa.initial() as u32;
        (0..dfa.state_count())
            .filter(|&f| dfa.is_final(f) && self.facts.contains(&(q0, start, f as u32)))
            .map(|f| (q0, start, f as u32))
            .collect()
    }
}

pub(super) fn intersects(g: &Grammar, dfa: &Dfa) -> bool {
    !Saturation::run(g, dfa).start_triples(dfa).is_empty()
}

pub(super) fn intersect(g: &Grammar, dfa: &Dfa) -> Option<Grammar> {
    let sat = Saturation::run(g, dfa);
    let roots = sat.start_triples(dfa);
    if roots.is_empty() {
        return None;
    }

    let bg = &sat.g;
    let rules = bg.rules_by_lhs();
    let mut out = GrammarBuilder::with_alphabet_of(bg);
    let start = out.fresh_nonterminal(bg.nt_name(bg.start()));
    let mut ids: HashMap<Fact, Nt> = HashMap::new();
    let mut queue: VecDeque<Fact> = VecDeque::new();

    let mut symbol = |out: &mut GrammarBuilder, queue: &mut VecDeque<Fact>, f: Fact| -> Symbol {
        let (p, x, q) = f;
        if x as usize >= sat.nts {
            return Symbol::T(super::Term(x - sat.nts as u32));
        }
        let n = *ids.entry(f).or_insert_with(|| {
            queue.push_back(f);
            out.fresh_nonterminal(&format!("[{p},{},{q}]", bg.nt_name(Nt(x))))
        });
        Symbol::N(n)
    };

    for &root in &roots {
        let s = symbol(&mut out, &mut queue, root);
        out.add(start, vec![s]);
    }
    while let Some(f) = queue.pop_front() {
        let (p, a, r) = f;
        let lhs = match symbol(&mut out, &mut queue, f) {
            Symbol::N(n) => n,
            Symbol::T(_) => unreachable!(),
        };
        for &i in &rules[a as usize] {
            match bg.productions()[i].rhs[..] {
                [] => {
                    if p == r {
                        out.add(lhs, vec![]);
                    }
                }
                [x] => {
                    let x = sat.id(x);
                    if sat.facts.contains(&(p, x, r)) {
                        let s = symbol(&mut out, &mut queue, (p, x, r));
                        out.add(lhs, vec![s]);
                    }
                }
                [x, y] => {
                    let (x, y) = (sat.id(x), sat.id(y));
                    let mids = sat.from.get(&(x, p)).cloned().unwrap_or_default();
                    for q in mids {
                        if sat.facts.contains(&(q, y, r)) {
                            let sx = symbol(&mut out, &mut queue, (p, x, q));
                            let sy = symbol(&mut out, &mut queue, (q, y, r));
                            out.add(lhs, vec![sx, sy]);
                        }
                    }
                }
                _ => unreachable!("binarized grammar has a long rule"),
            }
        }
    }
    out.build(start).reduce().ok()
}
