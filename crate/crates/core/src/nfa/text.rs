use std::fmt::Write as _;

use super::{Label, Nfa};
use crate::{Error, Result};

const EPS: &str = "eps";

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, message: message.into() }
}

fn state(tok: &str, n: usize, line: usize) -> Result<usize> {
    let q: usize = tok.parse().map_err(|_| syntax(line, format!("invalid state `{tok}`")))?;
    if q >= n {
        return Err(syntax(line, format!("state {q} out of range (states:{n})")));
    }
    Ok(q)
}

pub(super) fn parse(text: &str) -> Result<Nfa> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let Some((hl, header)) = lines.next() else {
        return Err(syntax(1, "missing `nfa` header"));
    };
    let rest = header.strip_prefix("nfa").ok_or_else(|| syntax(hl, "expected `nfa states:<n> alphabet:<letters>`"))?;
    let rest = rest.trim_start();
    let rest = rest.strip_prefix("states:").ok_or_else(|| syntax(hl, "expected `states:<n>`"))?;
    let (count, rest) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
    let n: usize = count.parse().map_err(|_| syntax(hl, format!("invalid state count `{count}`")))?;
    let letters = rest.trim().strip_prefix("alphabet:").ok_or_else(|| syntax(hl, "expected `alphabet:`"))?;
    let letters: Vec<&str> = letters.split_whitespace().collect();
    if letters.contains(&EPS) {
        return Err(syntax(hl, "`eps` is reserved for ε"));
    }

    let mut a = Nfa::new(&letters);
    for _ in 0..n {
        a.add_state();
    }
    for (ln, line) in lines {
        let (key, body) = line.split_once(':').ok_or_else(|| syntax(ln, "expected `<key>: ...`"))?;
        let toks: Vec<&str> = body.split_whitespace().collect();
        match key.trim() {
            "initial" => {
                for t in toks {
                    a.set_initial(state(t, n, ln)?);
                }
            }
            "final" => {
                for t in toks {
                    a.set_final(state(t, n, ln)?, true);
                }
            }
            "trans" => {
                let [p, l, q] = toks[..] else {
                    return Err(syntax(ln, "expected `trans: <p> <label|eps> <q>`"));
                };
                let label = if l == EPS {
                    Label::Eps
                } else {
                    Label::Letter(a.letter_index(l).ok_or_else(|| syntax(ln, format!("letter `{l}` not in alphabet")))?)
                };
                a.add_transition(state(p, n, ln)?, label, state(q, n, ln)?);
            }
            "entry" | "exit" => {
                let [t] = toks[..] else {
                    return Err(syntax(ln, format!("expected `{key}: <state>`")));
                };
                let q = Some(state(t, n, ln)?);
                if key.trim() == "entry" {
                    a.set_entry(q);
                } else {
                    a.set_exit(q);
                }
            }
            other => return Err(syntax(ln, format!("unknown key `{other}`"))),
        }
    }
    Ok(a)
}

fn label_token(a: &Nfa, l: Label) -> &str {
    match l {
        Label::Eps => EPS,
        Label::Letter(_) => a.label_name(l),
    }
}

pub(super) fn write(a: &Nfa) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "nfa states:{} alphabet:{}", a.state_count(), a.alphabet().join(" "));
    let list = |it: &mut dyn Iterator<Item = usize>| it.map(|q| q.to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "{}", format!("initial: {}", list(&mut a.initial().iter().copied())).trim_end());
    let _ = writeln!(out, "{}", format!("final: {}", list(&mut a.finals())).trim_end());
    if let Some(q) = a.entry() {
        let _ = writeln!(out, "entry: {q}");
    }
    if let Some(q) = a.exit() {
        let _ = writeln!(out, "exit: {q}");
    }
    for (p, l, q) in a.transitions() {
        let _ = writeln!(out, "trans: {p} {} {q}", label_token(a, l));
    }
    out
}

pub(super) fn dot(a: &Nfa) -> String {
    let mut out = String::from("digraph nfa {\n  rankdir=LR;\n  node [shape=circle];\n");
    for q in 0..a.state_count() {
        let shape = if a.is_final(q) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  q{q} [shape={shape}];");
    }
    for (i, &q) in a.initial().iter().enumerate() {
        let _ = writeln!(out, "  init{i} [shape=point];\n  init{i} -> q{q};");
    }
    for (p, l, q) in a.transitions() {
        let _ = writeln!(out, "  q{p} -> q{q} [label=\"{}\"];", a.label_name(l).replace('"', "\\\""));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Word;

    const SAMPLE: &str = "\
nfa states:3 alphabet:a b
initial: 0
final: 2
trans: 0 a 1
trans: 1 eps 2
trans: 2 b 2
";

    #[test]
    fn parse_sample() {
        let a = Nfa::parse(SAMPLE).unwrap();
        assert_eq!(a.state_count(), 3);
        assert_eq!(a.alphabet(), ["a", "b"]);
        assert!(a.accepts(&Word::from_chars("abb")).unwrap());
        assert!(!a.accepts(&Word::from_chars("b")).unwrap());
    }

    #[test]
    fn round_trip() {
        let mut a = Nfa::parse(SAMPLE).unwrap();
        a.set_entry(Some(0));
        a.set_exit(Some(2));
        let text = a.write_text();
        assert_eq!(Nfa::parse(&text).unwrap(), a);
        assert_eq!(Nfa::parse(SAMPLE).unwrap().write_text(), SAMPLE);
    }

    #[test]
    fn empty_sets_round_trip() {
        let a = Nfa::new(&["x"]);
        assert_eq!(Nfa::parse(&a.write_text()).unwrap(), a);
    }

    #[test]
    fn errors() {
        assert!(matches!(Nfa::parse(""), Err(Error::Syntax { .. })));
        assert!(matches!(Nfa::parse("start: S"), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(Nfa::parse("nfa states:1 alphabet:a\ntrans: 0 b 0"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(Nfa::parse("nfa states:1 alphabet:a\nfinal: 3"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(Nfa::parse("nfa states:1 alphabet:a eps"), Err(Error::Syntax { line: 1, .. })));
    }

    #[test]
    fn dot_mentions_every_transition() {
        let d = Nfa::parse(SAMPLE).unwrap().to_dot();
        assert!(d.starts_with("digraph"));
        assert_eq!(d.matches("->").count(), 3 + 1);
    }
}
