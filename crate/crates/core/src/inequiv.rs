//! Semi-deciding inequivalence of two grammars through their subword
//! closures.
//!
//! Depth 0 compares `↓L(G₁)` and `↓L(G₂)`. Depth `d > 0` splits both
//! languages by the live prefixes `p` of length `d` and compares
//! `↓(Gᵢ ∩ pΣ*)` per prefix. Words shorter than the current depth are
//! covered by an exhaustive membership scan. Any separating word of the
//! closures is lifted to a word of the grammar language that contains it,
//! and checked by membership in both grammars before it is reported.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::closure::downward_nfa_capped;
use crate::equiv::{equiv_closed_with, EquivOptions, Verdict};
use crate::grammar::{Grammar, Term};
use crate::nfa::stateset::StateSet;
use crate::nfa::{prefix_dfa, word_up_dfa, Nfa, Stepper};
use crate::{graph, Direction, Error, Result, Side, Word};

#[derive(Clone, Debug)]
pub struct InequivConfig {
    /// Largest prefix length `d` to refine to.
    pub max_depth: usize,
    /// Wall-clock budget for the whole run.
    pub time_budget: Option<Duration>,
    /// Product-pair budget for each closure comparison.
    pub node_budget: usize,
    /// State cap for each closure NFA.
    pub closure_state_cap: usize,
    /// Scan all words up to the current depth by membership.
    pub scan_short_words: bool,
    /// Longest word length the scan will ever enumerate.
    pub scan_limit: usize,
    /// Worker threads for the prefix tasks of one depth.
    pub parallel_tasks: usize,
}

impl Default for InequivConfig {
    fn default() -> Self {
        InequivConfig {
            max_depth: 4,
            time_budget: Some(Duration::from_secs(60)),
            node_budget: 1_000_000,
            closure_state_cap: 1_000_000,
            scan_short_words: true,
            scan_limit: 8,
            parallel_tasks: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InequivStatus {
    Inequivalent { witness: Word, side: Side },
    MaybeEqual,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InequivStats {
    /// Deepest refinement level started.
    pub depth_reached: usize,
    pub closure_checks: usize,
    pub prefix_tasks: usize,
    pub product_pairs: usize,
    pub words_scanned: usize,
    pub elapsed: Duration,
    /// Set when a budget stopped the search early.
    pub exhausted: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequivReport {
    pub status: InequivStatus,
    pub stats: InequivStats,
}

impl fmt::Display for InequivStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "depth={} closure_checks={} prefix_tasks={} product_pairs={} words_scanned={} elapsed_ms={}",
            self.depth_reached,
            self.closure_checks,
            self.prefix_tasks,
            self.product_pairs,
            self.words_scanned,
            self.elapsed.as_millis()
        )?;
        if let Some(e) = &self.exhausted {
            write!(f, " exhausted=\"{e}\"")?;
        }
        Ok(())
    }
}

/// A shortest word of `L(g)` having `w` as a subword.
///
/// Fails with [`Error::Internal`] when there is none, i.e. `w ∉ ↓L(g)`.
pub fn lift_witness(g: &Grammar, w: &Word) -> Result<Word> {
    let d = word_up_dfa(w, g.terminals());
    g.intersect_dfa(&d)
        .and_then(|i| i.shortest_word())
        .ok_or_else(|| Error::Internal(format!("`{w}` is not a subword of any word of the grammar")))
}

/// All words of length `depth` that are prefixes of some word of `L(a)`,
/// in lexicographic order of the automaton's alphabet.
pub fn live_prefixes(a: &Nfa, depth: usize) -> Vec<Word> {
    let sim = Stepper::new(a, a.alphabet());
    let back = graph::reachable(&graph::transpose(&a.graph()), a.finals());
    let live = |s: &StateSet| s.iter().any(|q| back[q]);
    let mut out = Vec::new();
    let mut path = Vec::new();
    fn go(
        sim: &Stepper,
        alphabet: &[String],
        live: &dyn Fn(&StateSet) -> bool,
        s: StateSet,
        left: usize,
        path: &mut Vec<String>,
        out: &mut Vec<Word>,
    ) {
        if left == 0 {
            out.push(Word::new(path.clone()));
            return;
        }
        for (x, l) in alphabet.iter().enumerate() {
            let t = sim.step(&s, x);
            if live(&t) {
                path.push(l.clone());
                go(sim, alphabet, live, t, left - 1, path, out);
                path.pop();
            }
        }
    }
    let start = sim.start();
    if live(&start) {
        go(&sim, a.alphabet(), &live, start, depth, &mut path, &mut out);
    }
    out
}

struct Scanner {
    alphabet: Vec<String>,
    r1: crate::grammar::Recognizer,
    r2: crate::grammar::Recognizer,
    map1: Vec<Option<Term>>,
    map2: Vec<Option<Term>>,
}

impl Scanner {
    fn new(g1: &Grammar, g2: &Grammar, alphabet: Vec<String>) -> Scanner {
        let map1 = alphabet.iter().map(|l| g1.find_terminal(l)).collect();
        let map2 = alphabet.iter().map(|l| g2.find_terminal(l)).collect();
        Scanner { r1: g1.recognizer(), r2: g2.recognizer(), map1, map2, alphabet }
    }

    fn member(r: &crate::grammar::Recognizer, map: &[Option<Term>], w: &[usize]) -> bool {
        match w.iter().map(|&x| map[x]).collect::<Option<Vec<Term>>>() {
            Some(word) => r.accepts(&word),
            None => false,
        }
    }

    /// First word of length exactly `len` (lexicographic) in the symmetric
    /// difference.
    fn scan_length(&self, len: usize, deadline: Option<Instant>, scanned: &mut usize) -> Result<Option<(Word, Side)>> {
        let k = self.alphabet.len();
        if k == 0 && len > 0 {
            return Ok(None);
        }
        let mut w = vec![0usize; len];
        loop {
            *scanned += 1;
            if scanned.is_multiple_of(1024) && deadline.is_some_and(|d| Instant::now() >= d) {
                return Err(Error::Timeout);
            }
            let in1 = Self::member(&self.r1, &self.map1, &w);
            let in2 = Self::member(&self.r2, &self.map2, &w);
            if in1 != in2 {
                let word = w.iter().map(|&x| self.alphabet[x].clone()).collect();
                let side = if in1 { Side::LeftOnly } else { Side::RightOnly };
                return Ok(Some((word, side)));
            }
            let mut i = len;
            loop {
                if i == 0 {
                    return Ok(None);
                }
                i -= 1;
                w[i] += 1;
                if w[i] < k {
                    break;
                }
                w[i] = 0;
            }
        }
    }
}

fn union_alphabet(g1: &Grammar, g2: &Grammar) -> Vec<String> {
    crate::nfa::merge_alphabets(g1.terminals(), g2.terminals())
}

/// The least word of length at most `maxlen` (length, then lexicographic
/// in the order of `g1`'s terminals followed by `g2`'s) that lies in
/// exactly one of the languages.
pub fn short_word_scan(g1: &Grammar, g2: &Grammar, maxlen: usize) -> Option<(Word, Side)> {
    let s = Scanner::new(g1, g2, union_alphabet(g1, g2));
    let mut scanned = 0;
    (0..=maxlen).find_map(|len| s.scan_length(len, None, &mut scanned).expect("no deadline"))
}

enum TaskOutcome {
    Equal,
    Witness(Word, Side),
}

struct Ctx<'a> {
    g1: &'a Grammar,
    g2: &'a Grammar,
    alphabet: &'a [String],
    cfg: &'a InequivConfig,
    deadline: Option<Instant>,
}

struct TaskStats {
    closure_checks: usize,
    pairs: usize,
}

impl Ctx<'_> {
    fn verify(&self, w: Word, side: Side) -> Result<TaskOutcome> {
        let in1 = self.g1.member(&w).unwrap_or(false);
        let in2 = self.g2.member(&w).unwrap_or(false);
        let expected = matches!((side, in1, in2), (Side::LeftOnly, true, false) | (Side::RightOnly, false, true));
        if !expected {
            return Err(Error::Internal(format!("witness `{w}` failed verification ({side})")));
        }
        Ok(TaskOutcome::Witness(w, side))
    }

    /// Compares the closures of `t1` and `t2` (the task languages, `None`
    /// when empty).
    fn compare(&self, t1: Option<&Grammar>, t2: Option<&Grammar>, stats: &mut TaskStats) -> Result<TaskOutcome> {
        let (t1, t2) = match (t1, t2) {
            (None, None) => return Ok(TaskOutcome::Equal),
            (Some(t), None) => return self.verify(t.shortest_word().expect("nonempty"), Side::LeftOnly),
            (None, Some(t)) => return self.verify(t.shortest_word().expect("nonempty"), Side::RightOnly),
            (Some(a), Some(b)) => (a, b),
        };
        let a1 = downward_nfa_capped(t1, self.cfg.closure_state_cap)?;
        let a2 = downward_nfa_capped(t2, self.cfg.closure_state_cap)?;
        let opts = EquivOptions { pair_budget: self.cfg.node_budget, deadline: self.deadline };
        stats.closure_checks += 1;
        let (verdict, es) = equiv_closed_with(&a1, &a2, Direction::Down, &opts)?;
        stats.pairs += es.pairs;
        match verdict {
            Verdict::Equal => Ok(TaskOutcome::Equal),
            Verdict::Separated { witness, side } => {
                let source = if side == Side::LeftOnly { t1 } else { t2 };
                let lifted = lift_witness(source, &witness)?;
                debug_assert!(crate::is_subsequence(&witness, &lifted));
                self.verify(lifted, side)
            }
        }
    }

    fn prefix_task(&self, p: &Word, stats: &mut TaskStats) -> Result<TaskOutcome> {
        let d = prefix_dfa(p, self.alphabet);
        let t1 = self.g1.intersect_dfa(&d);
        let t2 = self.g2.intersect_dfa(&d);
        self.compare(t1.as_ref(), t2.as_ref(), stats)
    }
}

fn is_budget(e: &Error) -> bool {
    matches!(e, Error::BudgetExceeded { .. } | Error::Timeout)
}

/// Runs the refinement loop up to `cfg.max_depth`.
///
/// Both grammars are reduced first; if exactly one language is empty, a
/// shortest word of the other is the witness. Budget exhaustion ends the
/// search with [`InequivStatus::MaybeEqual`] and the reason in the stats.
pub fn check_inequiv(g1: &Grammar, g2: &Grammar, cfg: &InequivConfig) -> Result<InequivReport> {
    let started = Instant::now();
    let deadline = cfg.time_budget.map(|t| started + t);
    let mut stats = InequivStats::default();
    let finish = |status: InequivStatus, mut stats: InequivStats| {
        stats.elapsed = started.elapsed();
        Ok(InequivReport { status, stats })
    };

    let alphabet = union_alphabet(g1, g2);
    let r1 = g1.reduce().ok();
    let r2 = g2.reduce().ok();
    let ctx_grammars = (r1.clone().unwrap_or_else(|| g1.clone()), r2.clone().unwrap_or_else(|| g2.clone()));
    let ctx = Ctx { g1: &ctx_grammars.0, g2: &ctx_grammars.1, alphabet: &alphabet, cfg, deadline };
    let scanner = cfg.scan_short_words.then(|| Scanner::new(ctx.g1, ctx.g2, alphabet.clone()));

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallel_tasks.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;

    let mut a1: Option<Nfa> = None;
    for depth in 0..=cfg.max_depth {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            stats.exhausted = Some(Error::Timeout.to_string());
            return finish(InequivStatus::MaybeEqual, stats);
        }
        stats.depth_reached = depth;

        let outcome: Result<Option<TaskOutcome>> = if depth == 0 {
            let mut ts = TaskStats { closure_checks: 0, pairs: 0 };
            let r = ctx.compare(r1.as_ref(), r2.as_ref(), &mut ts);
            stats.closure_checks += ts.closure_checks;
            stats.product_pairs += ts.pairs;
            r.map(Some)
        } else {
            let Some(r1) = r1.as_ref() else {
                // both languages are empty
                return finish(InequivStatus::MaybeEqual, stats);
            };
            if a1.is_none() {
                match downward_nfa_capped(r1, cfg.closure_state_cap) {
                    Ok(a) => a1 = Some(a.with_alphabet(&alphabet)),
                    Err(e) if is_budget(&e) => {
                        stats.exhausted = Some(e.to_string());
                        return finish(InequivStatus::MaybeEqual, stats);
                    }
                    Err(e) => return Err(e),
                }
            }
            let prefixes = live_prefixes(a1.as_ref().unwrap(), depth);
            stats.prefix_tasks += prefixes.len();
            let results: Vec<(Result<TaskOutcome>, TaskStats)> = pool.install(|| {
                prefixes
                    .par_iter()
                    .map(|p| {
                        let mut ts = TaskStats { closure_checks: 0, pairs: 0 };
                        let r = ctx.prefix_task(p, &mut ts);
                        (r, ts)
                    })
                    .collect()
            });
            let mut first_err = None;
            let mut found = None;
            for (r, ts) in results {
                stats.closure_checks += ts.closure_checks;
                stats.product_pairs += ts.pairs;
                match r {
                    Ok(TaskOutcome::Witness(w, s)) if found.is_none() => found = Some(TaskOutcome::Witness(w, s)),
                    Ok(_) => {}
                    Err(e) if first_err.is_none() => first_err = Some(e),
                    Err(_) => {}
                }
            }
            match (found, first_err) {
                (Some(w), _) => Ok(Some(w)),
                (None, Some(e)) => Err(e),
                (None, None) => Ok(None),
            }
        };

        match outcome {
            Ok(Some(TaskOutcome::Witness(witness, side))) => {
                return finish(InequivStatus::Inequivalent { witness, side }, stats);
            }
            Ok(_) => {}
            Err(e) if is_budget(&e) => {
                stats.exhausted = Some(e.to_string());
                return finish(InequivStatus::MaybeEqual, stats);
            }
            Err(e) => return Err(e),
        }

        if let Some(s) = scanner.as_ref().filter(|_| depth <= cfg.scan_limit) {
            match s.scan_length(depth, deadline, &mut stats.words_scanned) {
                Ok(Some((witness, side))) => return finish(InequivStatus::Inequivalent { witness, side }, stats),
                Ok(None) => {}
                Err(e) => {
                    stats.exhausted = Some(e.to_string());
                    return finish(InequivStatus::MaybeEqual, stats);
                }
            }
        }
    }
    finish(InequivStatus::MaybeEqual, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::downward_nfa;

    fn g(text: &str) -> Grammar {
        Grammar::parse(text).unwrap()
    }

    fn cfg(depth: usize) -> InequivConfig {
        InequivConfig { max_depth: depth, ..InequivConfig::default() }
    }

    fn witness(r: &InequivReport) -> (String, Side) {
        match &r.status {
            InequivStatus::Inequivalent { witness, side } => (witness.to_string(), *side),
            InequivStatus::MaybeEqual => panic!("no witness: {}", r.stats),
        }
    }

    #[test]
    fn lift_examples() {
        let anbn = g("start: S\nS -> a S b |");
        assert_eq!(lift_witness(&anbn, &Word::from_chars("aab")).unwrap().to_string(), "aabb");
        assert_eq!(lift_witness(&g("start: S\nS -> a b"), &Word::from_chars("b")).unwrap().to_string(), "ab");
        assert_eq!(lift_witness(&anbn, &Word::from_chars("ab")).unwrap().to_string(), "ab");
        assert!(lift_witness(&anbn, &Word::from_chars("ba")).is_err());
    }

    #[test]
    fn live_prefix_examples() {
        let a = downward_nfa(&g("start: S\nS -> a S b |")).unwrap();
        let p: Vec<String> = live_prefixes(&a, 2).iter().map(|w| w.to_string()).collect();
        assert_eq!(p, ["aa", "ab", "bb"]);
        assert_eq!(live_prefixes(&a, 0), [Word::empty()]);
        let eps = downward_nfa(&g("start: S\nS ->").with_alphabet(&["a"])).unwrap();
        assert!(live_prefixes(&eps, 1).is_empty());
    }

    #[test]
    fn scan_examples() {
        let w = short_word_scan(&g("start: S\nS -> a S b |"), &g("start: S\nS -> a S b | a b"), 4).unwrap();
        assert_eq!((w.0.to_string(), w.1), ("ε".into(), Side::LeftOnly));
        let x = g("start: S\nS -> a S b |");
        assert_eq!(short_word_scan(&x, &x, 5), None);
        let w = short_word_scan(&g("start: S\nS -> a | b"), &g("start: S\nS -> a"), 3).unwrap();
        assert_eq!((w.0.to_string(), w.1), ("b".into(), Side::LeftOnly));
    }

    #[test]
    fn anbn_against_anb2n() {
        let r = check_inequiv(&g("start: S\nS -> a S b |"), &g("start: S\nS -> a S b b |"), &cfg(3)).unwrap();
        assert_eq!(witness(&r), ("abb".into(), Side::RightOnly));
        assert!(r.stats.depth_reached <= 3);
    }

    #[test]
    fn anbn_against_astar_bstar() {
        let r = check_inequiv(
            &g("start: S\nS -> a S b |"),
            &g("start: S\nS -> A B\nA -> a A |\nB -> b B |"),
            &cfg(3),
        )
        .unwrap();
        let (w, side) = witness(&r);
        assert_eq!(side, Side::RightOnly);
        assert!(g("start: S\nS -> A B\nA -> a A |\nB -> b B |").member(&Word::parse(&w)).unwrap());
    }

    #[test]
    fn depth_zero_witness_is_lifted() {
        let r = check_inequiv(&g("start: S\nS -> a b"), &g("start: S\nS -> a"), &cfg(0)).unwrap();
        assert_eq!(witness(&r), ("ab".into(), Side::LeftOnly));
    }

    #[test]
    fn identical_grammars_maybe_equal() {
        let x = g("start: S\nS -> a S b |");
        let r = check_inequiv(&x, &x, &cfg(3)).unwrap();
        assert_eq!(r.status, InequivStatus::MaybeEqual);
        assert_eq!(r.stats.depth_reached, 3);
        assert!(r.stats.exhausted.is_none());
    }

    #[test]
    fn empty_languages() {
        let empty = g("start: S\nS -> S a");
        let r = check_inequiv(&empty, &g("start: S\nS -> b"), &cfg(2)).unwrap();
        assert_eq!(witness(&r), ("b".into(), Side::RightOnly));
        let r = check_inequiv(&empty, &empty, &cfg(2)).unwrap();
        assert_eq!(r.status, InequivStatus::MaybeEqual);
    }

    #[test]
    fn parallel_tasks_give_the_same_answer() {
        let a = g("start: S\nS -> a S b |");
        let b = g("start: S\nS -> a S b b |");
        let seq = check_inequiv(&a, &b, &cfg(4)).unwrap();
        let par = check_inequiv(&a, &b, &InequivConfig { parallel_tasks: 4, ..cfg(4) }).unwrap();
        assert_eq!(seq.status, par.status);
    }

    #[test]
    fn node_budget_folds_into_maybe_equal() {
        let x = g("start: S\nS -> a S b |");
        let r = check_inequiv(&x, &x, &InequivConfig { node_budget: 1, ..cfg(2) }).unwrap();
        assert_eq!(r.status, InequivStatus::MaybeEqual);
        assert!(r.stats.exhausted.is_some());
    }
}
