//! Reduced words in finitely generated free groups.
//!
//! Words are kept in free-reduction normal form at all times; equality of
//! `ReducedWord`s is equality in the free group. Generators are printed
//! `a, b, c, ...` with a `^-1` suffix for inverses, and the empty word is
//! spelled `e`.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;

/// A single signed generator occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gen < 26 {
            write!(f, "{}", (b'a' + self.gen as u8) as char)?;
        } else {
            write!(f, "g{}", self.gen)?;
        }
        if self.inverse {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

/// A freely reduced word; the unique normal form of a free group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ReducedWord {
    letters: Vec<Letter>,
}

impl ReducedWord {
    /// The empty word, i.e. the group identity.
    pub fn identity() -> Self {
        ReducedWord::default()
    }

    /// The single-letter word for generator `i`.
    pub fn generator(i: usize) -> Self {
        ReducedWord {
            letters: vec![Letter::new(i, false)],
        }
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce(raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in raw {
            match stack.last() {
                Some(&top) if top.cancels(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        ReducedWord { letters: stack }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index occurring in the word.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }

    /// True when every letter lies in the rank-`rank` alphabet.
    pub fn fits_rank(&self, rank: usize) -> bool {
        self.letters.iter().all(|l| l.gen < rank)
    }

    pub fn concat(&self, other: &ReducedWord) -> ReducedWord {
        ReducedWord::reduce(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord {
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    /// Substitution homomorphism: replace generator `i` by `images[i]`.
    pub fn substitute(&self, images: &[ReducedWord]) -> Result<ReducedWord> {
        let mut acc = ReducedWord::identity();
        for l in &self.letters {
            let img = images.get(l.gen).ok_or_else(|| {
                Error::domain(format!("letter {} outside image alphabet of rank {}", l, images.len()))
            })?;
            let piece = if l.inverse { img.inverse() } else { img.clone() };
            acc = acc.concat(&piece);
        }
        Ok(acc)
    }

    /// Parses the CLI word syntax: whitespace-separated letters such as
    /// `a b^-1 a`; the empty word is spelled `e`.
    pub fn parse(s: &str) -> Result<ReducedWord> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(ReducedWord::identity());
        }
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let (head, inverse) = match tok.strip_suffix("^-1") {
                Some(h) => (h, true),
                None => (tok, false),
            };
            let gen = if let Some(rest) = head.strip_prefix('g') {
                rest.parse::<usize>()
                    .map_err(|_| Error::domain(format!("bad letter token `{tok}`")))?
            } else if head.len() == 1 && head.as_bytes()[0].is_ascii_lowercase() {
                (head.as_bytes()[0] - b'a') as usize
            } else {
                return Err(Error::domain(format!("bad letter token `{tok}`")));
            };
            letters.push(Letter::new(gen, inverse));
        }
        Ok(ReducedWord::reduce(letters))
    }
}

/// Shortlex: first by length, then lexicographically by letters.
impl Ord for ReducedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}
