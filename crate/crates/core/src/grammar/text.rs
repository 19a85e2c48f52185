use std::collections::HashSet;
use std::fmt;

use super::{Grammar, GrammarBuilder, Symbol};
use crate::{Error, Result};

struct RuleLine<'a> {
    lhs: &'a str,
    alternatives: Vec<Vec<&'a str>>,
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, message: message.into() }
}

fn is_token(s: &str) -> bool {
    !s.is_empty() && !s.contains('|') && !s.chars().any(char::is_whitespace)
}

pub(super) fn parse(text: &str) -> Result<Grammar> {
    let mut start: Option<(usize, &str)> = None;
    let mut rules: Vec<RuleLine<'_>> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if start.is_none() {
            let Some(rest) = line.strip_prefix("start:") else {
                return Err(syntax(line_no, "expected `start: <symbol>`"));
            };
            let name = rest.trim();
            if !is_token(name) {
                return Err(syntax(line_no, format!("invalid start symbol `{name}`")));
            }
            start = Some((line_no, name));
            continue;
        }
        let Some((lhs, rhs)) = line.split_once("->") else {
            return Err(syntax(line_no, "expected `<lhs> -> <alternatives>`"));
        };
        let lhs = lhs.trim();
        if !is_token(lhs) {
            return Err(syntax(line_no, format!("invalid left-hand side `{lhs}`")));
        }
        let alternatives = rhs.split('|').map(|alt| alt.split_whitespace().collect()).collect();
        rules.push(RuleLine { lhs, alternatives });
    }

    let Some((_, start)) = start else {
        return Err(syntax(text.lines().count().max(1), "missing `start:` line"));
    };

    let lhs_set: HashSet<&str> = rules.iter().map(|r| r.lhs).collect();
    if !lhs_set.contains(start) {
        return Err(Error::UndeclaredStart(start.to_string()));
    }

    // Nonterminals are numbered by first appearance as a left-hand side;
    // terminals by first occurrence once productions are grouped by lhs
    // (the order `Display` writes them back in).
    let mut b = GrammarBuilder::new();
    for r in &rules {
        b.nonterminal(r.lhs);
    }
    let mut grouped: Vec<&RuleLine<'_>> = rules.iter().collect();
    grouped.sort_by_key(|r| b.nonterminal(r.lhs));
    for r in grouped {
        let lhs = b.nonterminal(r.lhs);
        for alt in &r.alternatives {
            let rhs = alt
                .iter()
                .map(|&tok| if lhs_set.contains(tok) { b.n(tok) } else { b.t(tok) })
                .collect();
            b.add(lhs, rhs);
        }
    }
    let start = b.nonterminal(start);
    Ok(b.build(start))
}

pub(super) fn write(g: &Grammar, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    writeln!(f, "start: {}", g.nt_name(g.start()))?;
    let prods = g.productions();
    let mut i = 0;
    while i < prods.len() {
        let lhs = prods[i].lhs;
        let mut alts = Vec::new();
        while i < prods.len() && prods[i].lhs == lhs {
            let alt: Vec<&str> = prods[i]
                .rhs
                .iter()
                .map(|&s| match s {
                    Symbol::T(t) => g.term_name(t),
                    Symbol::N(n) => g.nt_name(n),
                })
                .collect();
            alts.push(alt.join(" "));
            i += 1;
        }
        let line = format!("{} -> {}", g.nt_name(lhs), alts.join(" | "));
        writeln!(f, "{}", line.trim_end())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::tests::WORKED_EXAMPLE;
    use super::*;

    #[test]
    fn epsilon_alternative() {
        let g = Grammar::parse("start: S\nS -> a S |").unwrap();
        assert_eq!(g.productions().len(), 2);
        assert!(g.productions().iter().any(|p| p.rhs.is_empty()));
        assert_eq!(g.terminals(), ["a"]);
    }

    #[test]
    fn worked_example_counts() {
        let g = Grammar::parse(WORKED_EXAMPLE).unwrap();
        assert_eq!(g.nonterminals().len(), 6);
        // S:3, X:2, Y:2, U:2, V:2, Z:2
        assert_eq!(g.productions().len(), 13);
        assert_eq!(g.terminals(), ["a", "b", "c"]);
    }

    #[test]
    fn token_without_rule_is_terminal() {
        let g = Grammar::parse("start: S\nS -> T").unwrap();
        assert_eq!(g.terminals(), ["T"]);
        assert_eq!(g.nonterminals(), ["S"]);
    }

    #[test]
    fn comments_blank_lines_and_repeated_lhs() {
        let g = Grammar::parse("# c\n\nstart: S\n# x\nS -> a\nT -> b\nS -> T T\n").unwrap();
        assert_eq!(g.productions().len(), 3);
        assert_eq!(g.productions_of(g.start()).count(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            Grammar::parse("# c\nS -> a"),
            Err(Error::Syntax { line: 2, message: "expected `start: <symbol>`".into() })
        );
        assert!(matches!(Grammar::parse("start: S\nS a"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(Grammar::parse("start: S\na b -> c"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(Grammar::parse(""), Err(Error::Syntax { .. })));
        assert_eq!(Grammar::parse("start: S\nT -> a"), Err(Error::UndeclaredStart("S".into())));
    }

    #[test]
    fn duplicates_are_dropped() {
        let g = Grammar::parse("start: S\nS -> a | a\nS -> a").unwrap();
        assert_eq!(g.productions().len(), 1);
    }

    #[test]
    fn round_trip() {
        for text in [WORKED_EXAMPLE, "start: S\nS -> T\nT -> a\nS -> b\n", "start: E\nE -> E + T | T\nT -> ( E ) | id |"] {
            let g = Grammar::parse(text).unwrap();
            let again = Grammar::parse(&g.to_string()).unwrap();
            assert_eq!(again, g, "{text}");
            assert_eq!(again.to_string(), g.to_string());
        }
    }
}
