use std::fmt::Write;
use std::time::Instant;

use clap::ValueEnum;
use subword_closure::closure::{build_closure_nfa_capped, build_closure_nfa_naive, state_bound, DEFAULT_NAIVE_CAP};
use subword_closure::generators::{gen_blowup, gen_lk, gen_pow2};
use subword_closure::grammar::Grammar;
use subword_closure::qnf::to_simple_qnf;
use subword_closure::Result;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    Pow2,
    Lk,
    Blowup,
}

impl Family {
    fn first(self) -> usize {
        match self {
            Family::Lk => 1,
            _ => 0,
        }
    }

    fn grammar(self, n: usize) -> Grammar {
        match self {
            Family::Pow2 => gen_pow2(n),
            Family::Lk => gen_lk(n),
            Family::Blowup => gen_blowup(n),
        }
    }
}

pub struct Row {
    pub n: usize,
    pub size: usize,
    pub qnf_nonterminals: usize,
    pub qnf_ratio: f64,
    pub shared: Result<usize>,
    pub bound: u128,
    pub naive: Result<usize>,
    /// `None` when `n` is above the DFA limit.
    pub min_dfa: Option<Result<usize>>,
    pub millis: f64,
}

fn row(family: Family, n: usize, dfa_max_n: usize) -> Result<Row> {
    let g = family.grammar(n);
    let t = Instant::now();
    let q = to_simple_qnf(&g)?;
    let shared = build_closure_nfa_capped(&q, DEFAULT_NAIVE_CAP);
    let millis = t.elapsed().as_secs_f64() * 1000.0;
    let m = q.grammar().nonterminals().len();
    let naive = build_closure_nfa_naive(&q, DEFAULT_NAIVE_CAP).map(|a| a.state_count());
    let min_dfa = (n <= dfa_max_n).then(|| {
        let a = shared.as_ref().map_err(Clone::clone)?;
        Ok(a.determinize()?.minimize().state_count())
    });
    Ok(Row {
        n,
        size: g.size(),
        qnf_nonterminals: m,
        qnf_ratio: q.grammar().size() as f64 / g.size().max(1) as f64,
        shared: shared.map(|a| a.state_count()),
        bound: state_bound(m),
        naive,
        min_dfa,
        millis,
    })
}

pub fn run(family: Family, n_max: usize, dfa_max_n: usize) -> Vec<Result<Row>> {
    (family.first()..=n_max).map(|n| row(family, n, dfa_max_n)).collect()
}

fn cell(r: &Result<usize>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(_) => "over-budget".into(),
    }
}

const HEADER: [&str; 9] =
    ["n", "grammar_size", "qnf_nonterminals", "qnf_size_ratio", "shared_states", "bound", "naive_states", "min_dfa_states", "millis"];

pub fn render(rows: &[Result<Row>], csv: bool) -> String {
    let mut table: Vec<Vec<String>> = vec![HEADER.iter().map(|s| s.to_string()).collect()];
    for r in rows {
        table.push(match r {
            Ok(r) => vec![
                r.n.to_string(),
                r.size.to_string(),
                r.qnf_nonterminals.to_string(),
                format!("{:.2}", r.qnf_ratio),
                cell(&r.shared),
                r.bound.to_string(),
                cell(&r.naive),
                r.min_dfa.as_ref().map_or("-".into(), cell),
                format!("{:.3}", r.millis),
            ],
            Err(e) => vec![format!("error: {e}")],
        });
    }
    let mut out = String::new();
    if csv {
        for line in &table {
            writeln!(out, "{}", line.join(",")).unwrap();
        }
        return out;
    }
    let widths: Vec<usize> =
        (0..HEADER.len()).map(|i| table.iter().filter_map(|l| l.get(i)).map(|c| c.len()).max().unwrap_or(0)).collect();
    for line in &table {
        let cells: Vec<String> = line.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
    }
    out
}
