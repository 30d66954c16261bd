//! Finite and ultimately periodic words.
//!
//! Positions are 1-based throughout: `letter_at(1)` is the first letter.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A finite, non-empty, duplicate-free set of symbols with a fixed order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(symbols: I) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::Invalid("empty alphabet".into()));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(Error::Invalid(alloc::format!("duplicate symbol `{c}`")));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.symbols.iter().position(|&s| s == c)
    }

    pub fn contains(&self, c: char) -> bool {
        self.symbols.contains(&c)
    }

    pub fn check_word(&self, w: &[char]) -> Result<()> {
        match w.iter().find(|c| !self.contains(**c)) {
            Some(c) => Err(Error::Invalid(alloc::format!("symbol `{c}` is not in the alphabet"))),
            None => Ok(()),
        }
    }
}

/// An ultimately periodic word `prefix · period^ω` in canonical form.
///
/// The period is primitive and the prefix does not end with the period's last
/// letter, so two values are equal exactly when they denote the same word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UpWord {
    prefix: Vec<char>,
    period: Vec<char>,
}

impl UpWord {
    pub fn new(prefix: Vec<char>, period: Vec<char>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Invalid("empty period".into()));
        }
        let mut w = UpWord { prefix, period };
        w.canonicalize();
        Ok(w)
    }

    /// Builds a word from string slices, panicking on an empty period.
    pub fn from_strs(prefix: &str, period: &str) -> Self {
        UpWord::new(prefix.chars().collect(), period.chars().collect()).expect("non-empty period")
    }

    fn canonicalize(&mut self) {
        let n = self.period.len();
        for d in 1..=n {
            if n.is_multiple_of(d) && (d..n).all(|i| self.period[i] == self.period[i - d]) {
                self.period.truncate(d);
                break;
            }
        }
        while let (Some(&a), Some(&b)) = (self.prefix.last(), self.period.last()) {
            if a != b {
                break;
            }
            self.prefix.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn prefix(&self) -> &[char] {
        &self.prefix
    }

    pub fn period(&self) -> &[char] {
        &self.period
    }

    /// Letter at 1-based position `i`.
    pub fn letter_at(&self, i: usize) -> char {
        assert!(i >= 1, "positions are 1-based");
        let u = self.prefix.len();
        if i <= u {
            self.prefix[i - 1]
        } else {
            self.period[(i - u - 1) % self.period.len()]
        }
    }

    /// The suffix starting at position `i`.
    pub fn suffix(&self, i: usize) -> UpWord {
        assert!(i >= 1, "positions are 1-based");
        let u = self.prefix.len();
        if i <= u {
            UpWord { prefix: self.prefix[i - 1..].to_vec(), period: self.period.clone() }
        } else {
            let mut period = self.period.clone();
            period.rotate_left((i - u - 1) % self.period.len());
            UpWord { prefix: Vec::new(), period }
        }
    }

    /// The word `u · self`.
    pub fn prepend(&self, u: &[char]) -> UpWord {
        let mut prefix = u.to_vec();
        prefix.extend_from_slice(&self.prefix);
        let mut w = UpWord { prefix, period: self.period.clone() };
        w.canonicalize();
        w
    }

    /// The first `n` letters.
    pub fn take(&self, n: usize) -> Vec<char> {
        (1..=n).map(|i| self.letter_at(i)).collect()
    }

    /// The same word written as `prefix · period^copies · period^ω`.
    pub fn unroll(&self, copies: usize) -> (Vec<char>, Vec<char>) {
        let mut p = self.prefix.clone();
        for _ in 0..copies {
            p.extend_from_slice(&self.period);
        }
        (p, self.period.clone())
    }

    /// The word as a lasso of letters.
    pub fn lasso(&self) -> Lasso<char> {
        Lasso { prefix: self.prefix.clone(), period: self.period.clone() }
    }

    /// Parses `PREFIX(PERIOD)^w`; `\(`, `\)` and `\\` escape literal brackets.
    pub fn parse(text: &str) -> Result<UpWord> {
        let mut prefix = Vec::new();
        let mut period = Vec::new();
        let mut stage = 0;
        let mut chars = text.trim().chars();
        let bad = |m: &str| Error::Invalid(alloc::format!("word `{text}`: {m}"));
        while let Some(c) = chars.next() {
            let (c, escaped) = if c == '\\' { (chars.next().ok_or_else(|| bad("dangling escape"))?, true) } else { (c, false) };
            match (stage, c, escaped) {
                (0, '(', false) => stage = 1,
                (1, ')', false) => {
                    let rest: String = chars.by_ref().collect();
                    if rest != "^w" && rest != "^ω" {
                        return Err(bad("expected `^w` after the period"));
                    }
                    stage = 2;
                }
                (0, c, _) => prefix.push(c),
                (1, c, _) => period.push(c),
                _ => return Err(bad("unexpected text")),
            }
        }
        if stage != 2 {
            return Err(bad("missing `(PERIOD)^w`"));
        }
        UpWord::new(prefix, period)
    }
}

fn write_escaped(f: &mut fmt::Formatter<'_>, w: &[char]) -> fmt::Result {
    for &c in w {
        if matches!(c, '(' | ')' | '\\') {
            write!(f, "\\")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

impl fmt::Display for UpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_escaped(f, &self.prefix)?;
        write!(f, "(")?;
        write_escaped(f, &self.period)?;
        write!(f, ")^w")
    }
}

/// Smallest 1-based index where the words differ, searching up to `bound`.
pub fn first_divergence(w1: &UpWord, w2: &UpWord, bound: usize) -> Option<usize> {
    (1..=bound).find(|&i| w1.letter_at(i) != w2.letter_at(i))
}

/// A lasso over an arbitrary letter type, not necessarily canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso<T> {
    pub prefix: Vec<T>,
    pub period: Vec<T>,
}

impl<T> Lasso<T> {
    pub fn at(&self, i: usize) -> &T {
        let u = self.prefix.len();
        if i <= u {
            &self.prefix[i - 1]
        } else {
            &self.period[(i - u - 1) % self.period.len()]
        }
    }
}

/// An output letter; `Bot` pads outputs that are finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutSym {
    Sym(char),
    Bot,
}

impl fmt::Display for OutSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutSym::Sym(c) => write!(f, "{c}"),
            OutSym::Bot => write!(f, "⊥"),
        }
    }
}

/// Result of running a transducer on one word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunResult {
    /// The first `k` output letters.
    Output(Vec<OutSym>),
    Rejected,
    /// A two-way run blocked or looped without progress.
    Stuck,
}

impl RunResult {
    pub fn output(&self) -> Option<&[OutSym]> {
        match self {
            RunResult::Output(o) => Some(o),
            _ => None,
        }
    }

    pub fn is_accepted(&self) -> bool {
        matches!(self, RunResult::Output(_))
    }
}

/// Renders output letters, `⊥` included.
pub fn render(out: &[OutSym]) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    for o in out {
        let _ = write!(s, "{o}");
    }
    s
}

/// Output letters from a finite string.
pub fn syms(s: &str) -> Vec<OutSym> {
    s.chars().map(OutSym::Sym).collect()
}

/// Pads `out` to length `k` from a periodic tail, or with `⊥` if the tail is empty.
pub fn extend_periodic(mut out: Vec<char>, cycle: &[char], k: usize) -> Vec<OutSym> {
    if !cycle.is_empty() {
        let mut i = 0;
        while out.len() < k {
            out.push(cycle[i % cycle.len()]);
            i += 1;
        }
    }
    let mut res: Vec<OutSym> = out.into_iter().take(k).map(OutSym::Sym).collect();
    res.resize(k, OutSym::Bot);
    res
}

/// Smallest 0-based index where two output prefixes differ.
pub fn first_difference(a: &[OutSym], b: &[OutSym]) -> Option<usize> {
    let n = a.len().max(b.len());
    (0..n).find(|&i| a.get(i) != b.get(i))
}
