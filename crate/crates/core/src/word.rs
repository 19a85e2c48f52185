use std::fmt;
use std::ops::Deref;

/// A finite word over string-valued letters.
///
/// Letters are arbitrary whitespace-free tokens, so `"if"` is a single
/// letter. [`Word::from_chars`] is a shortcut for one-character alphabets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<String>);

impl Word {
    pub fn new(letters: Vec<String>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Splits `s` into one letter per `char`.
    pub fn from_chars(s: &str) -> Self {
        Word(s.chars().map(String::from).collect())
    }

    /// Parses the textual form produced by `Display`: `ε` is the empty word,
    /// `·` separates multi-character letters, anything else is split per `char`.
    pub fn parse(s: &str) -> Self {
        let s = s.trim();
        if s.is_empty() || s == "ε" {
            Word::empty()
        } else if s.contains('·') {
            Word(s.split('·').map(String::from).collect())
        } else {
            Word::from_chars(s)
        }
    }

    pub fn letters(&self) -> &[String] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<String> {
        self.0
    }
}

impl Deref for Word {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

impl From<Vec<String>> for Word {
    fn from(letters: Vec<String>) -> Self {
        Word(letters)
    }
}

impl From<&[&str]> for Word {
    fn from(letters: &[&str]) -> Self {
        Word(letters.iter().map(|s| s.to_string()).collect())
    }
}

impl FromIterator<String> for Word {
    fn from_iter<I: IntoIterator<Item = String>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        if self.0.iter().all(|l| l.chars().count() == 1) {
            for l in &self.0 {
                f.write_str(l)?;
            }
            Ok(())
        } else {
            f.write_str(&self.0.join("·"))
        }
    }
}

/// `true` iff `sub` is a scattered subword of `sup`.
pub fn is_subsequence<T: PartialEq>(sub: &[T], sup: &[T]) -> bool {
    let mut it = sup.iter();
    sub.iter().all(|x| it.any(|y| y == x))
}
