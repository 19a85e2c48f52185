//! Finite automata for the subword (downward) and superword (upward) closures
//! of context-free languages.
//!
//! The crate is organized bottom-up:
//!
//! * [`grammar`]: context-free grammars, the text format, reduction, SCCs,
//!   membership, intersection with a DFA and shortest words.
//! * [`qnf`]: the closure-preserving transformation into simple quadratic
//!   normal form.
//! * [`closure`]: the closure NFA construction over simple-QNF grammars,
//!   with at most `2·3^(n-1)` states for `n` nonterminals.
//! * [`nfa`]: NFA/DFA machinery, closure operators on automata, word-closure
//!   DFAs and the usual determinize/minimize/complement oracles.
//! * [`equiv`]: equivalence of sub-/superword-closed NFA languages with a
//!   shortest separating word.
//! * [`inequiv`]: semi-decision of grammar inequivalence via closure
//!   overapproximation and prefix refinement.
//! * [`generators`]: grammar and automaton families used by tests and benches.
//!
//! ```
//! use subword_closure::{closure::downward_nfa, grammar::Grammar, Word};
//!
//! let g = Grammar::parse("start: S\nS -> a S b |\n").unwrap();
//! let nfa = downward_nfa(&g).unwrap();
//! assert!(nfa.accepts(&Word::from_chars("aab")).unwrap());
//! assert!(!nfa.accepts(&Word::from_chars("ba")).unwrap());
//! ```

pub mod closure;
pub mod equiv;
mod error;
pub mod generators;
pub mod grammar;
mod graph;
pub mod inequiv;
pub mod nfa;
pub mod qnf;
mod word;

pub use error::{Error, Result};
pub use word::{is_subsequence, Word};

/// Which closure a computation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Subword (downward) closure.
    Down,
    /// Superword (upward) closure.
    Up,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Direction::Down => f.write_str("down"),
            Direction::Up => f.write_str("up"),
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "down" => Ok(Direction::Down),
            "up" => Ok(Direction::Up),
            other => Err(Error::Usage(format!("unknown direction `{other}`"))),
        }
    }
}

/// The side of a comparison a distinguishing word belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// In the left language only.
    LeftOnly,
    /// In the right language only.
    RightOnly,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::LeftOnly => f.write_str("left-only"),
            Side::RightOnly => f.write_str("right-only"),
        }
    }
}
