//! Words over a free-group alphabet.
//!
//! A rank-`r` free group uses the first `r` lowercase ASCII letters as
//! generators and their uppercase forms as inverses, so `"abA"` is
//! `a·b·a⁻¹`. The text `"1"` denotes the empty word.

use std::fmt;
use thiserror::Error;

/// Errors from parsing or printing words.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("empty word text at position 0 (write \"1\" for the identity)")]
    EmptyText,
    #[error("invalid character {ch:?} at position {pos}")]
    InvalidChar { ch: char, pos: usize },
    #[error("letter {ch:?} at position {pos} is outside the rank-{rank} alphabet")]
    OutOfAlphabet { ch: char, pos: usize, rank: usize },
    #[error("generator index {index} has no single-letter spelling")]
    Unprintable { index: usize },
}

/// The alphabet of a free group of a given rank (between 1 and 26).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Alphabet {
    rank: usize,
}

impl Alphabet {
    pub const MAX_RANK: usize = 26;

    /// Panics unless `1 <= rank <= 26`.
    pub fn new(rank: usize) -> Self {
        assert!(
            (1..=Self::MAX_RANK).contains(&rank),
            "alphabet rank must be between 1 and {}, got {rank}",
            Self::MAX_RANK
        );
        Alphabet { rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.generator() < self.rank
    }
}

/// A single letter: a generator index plus an inversion flag.
///
/// `Letter::new(0, false)` prints as `a`, `Letter::new(0, true)` as `A`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    generator: u8,
    inverse: bool,
}

impl Letter {
    pub fn new(generator: u8, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    /// Zero-based generator index.
    pub fn generator(&self) -> usize {
        self.generator as usize
    }

    pub fn is_inverse(&self) -> bool {
        self.inverse
    }

    /// The same generator with the inversion flag flipped.
    pub fn inverted(&self) -> Letter {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    fn from_char(ch: char) -> Option<Letter> {
        match ch {
            'a'..='z' => Some(Letter::new(ch as u8 - b'a', false)),
            'A'..='Z' => Some(Letter::new(ch as u8 - b'A', true)),
            _ => None,
        }
    }

    fn to_char(self) -> Option<char> {
        if self.generator() >= Alphabet::MAX_RANK {
            return None;
        }
        let base = if self.inverse { b'A' } else { b'a' };
        Some((base + self.generator) as char)
    }
}

/// A word in the free group. Not necessarily freely reduced; see
/// [`Word::reduced`].
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word { letters }
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

    /// Parses lowercase/uppercase letter notation; `"1"` is the empty word.
    /// Every letter must lie inside `alphabet`.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Word, WordError> {
        if text.is_empty() {
            return Err(WordError::EmptyText);
        }
        if text == "1" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::with_capacity(text.len());
        for (pos, ch) in text.chars().enumerate() {
            let letter = Letter::from_char(ch).ok_or(WordError::InvalidChar { ch, pos })?;
            if !alphabet.contains(letter) {
                return Err(WordError::OutOfAlphabet { ch, pos, rank: alphabet.rank() });
            }
            letters.push(letter);
        }
        Ok(Word { letters })
    }

    /// Free reduction: repeatedly cancels adjacent `x·x⁻¹` pairs.
    pub fn reduced(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &letter in &self.letters {
            if stack.last() == Some(&letter.inverted()) {
                stack.pop();
            } else {
                stack.push(letter);
            }
        }
        Word { letters: stack }
    }

    /// The formal inverse: letters reversed, each inverted.
    pub fn inverted(&self) -> Word {
        let letters = self.letters.iter().rev().map(|l| l.inverted()).collect();
        Word { letters }
    }

    /// `self` followed by `other`, without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Letter notation; the empty word prints as `"1"`. Fails only for
    /// generator indices past `z`.
    pub fn format(&self) -> Result<String, WordError> {
        if self.letters.is_empty() {
            return Ok("1".to_string());
        }
        let mut out = String::with_capacity(self.letters.len());
        for letter in &self.letters {
            match letter.to_char() {
                Some(ch) => out.push(ch),
                None => return Err(WordError::Unprintable { index: letter.generator() }),
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Word {
    /// Same notation as [`Word::format`]; unprintable letters appear as `#<index>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for letter in &self.letters {
            match letter.to_char() {
                Some(ch) => write!(f, "{ch}")?,
                None => write!(f, "#{}", letter.generator())?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(2)
    }

    #[test]
    fn parses_letter_notation() {
        let w = Word::parse("abba", ab()).unwrap();
        assert_eq!(
            w.letters(),
            &[
                Letter::new(0, false),
                Letter::new(1, false),
                Letter::new(1, false),
                Letter::new(0, false),
            ]
        );
        let w = Word::parse("Aba", ab()).unwrap();
        assert_eq!(
            w.letters(),
            &[Letter::new(0, true), Letter::new(1, false), Letter::new(0, false)]
        );
    }

    #[test]
    fn one_is_the_empty_word() {
        let w = Word::parse("1", ab()).unwrap();
        assert!(w.is_empty());
        assert_eq!(w.format().unwrap(), "1");
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Word::parse("", ab()), Err(WordError::EmptyText));
        assert_eq!(
            Word::parse("a7b", ab()),
            Err(WordError::InvalidChar { ch: '7', pos: 1 })
        );
        assert_eq!(
            Word::parse("xyz", ab()),
            Err(WordError::OutOfAlphabet { ch: 'x', pos: 0, rank: 2 })
        );
        assert_eq!(
            Word::parse("abc", ab()),
            Err(WordError::OutOfAlphabet { ch: 'c', pos: 2, rank: 2 })
        );
    }

    #[test]
    fn free_reduction() {
        let alphabet = Alphabet::new(3);
        let w = Word::parse("abBA", alphabet).unwrap();
        assert!(w.reduced().is_empty());
        assert_eq!(w.reduced().format().unwrap(), "1");

        let w = Word::parse("abBc", alphabet).unwrap();
        assert_eq!(w.reduced().format().unwrap(), "ac");

        // Reduction cascades through nested cancellations.
        let w = Word::parse("abBAab", alphabet).unwrap();
        assert_eq!(w.reduced().format().unwrap(), "ab");
    }

    #[test]
    fn inversion_reverses_and_flips() {
        let alphabet = Alphabet::new(3);
        let w = Word::parse("aBc", alphabet).unwrap();
        assert_eq!(w.inverted().format().unwrap(), "CbA");
        let w = Word::parse("Aba", alphabet).unwrap();
        assert_eq!(w.inverted().format().unwrap(), "ABa");
        // w · w⁻¹ reduces to the identity.
        assert!(w.concat(&w.inverted()).reduced().is_empty());
    }

    #[test]
    fn display_matches_format() {
        let w = Word::parse("aBa", ab()).unwrap();
        assert_eq!(w.to_string(), "aBa");
        assert_eq!(w.to_string(), w.format().unwrap());
        assert_eq!(Word::empty().to_string(), "1");
    }

    #[test]
    fn format_rejects_unspellable_generators() {
        let w = Word::from_letters(vec![Letter::new(26, false)]);
        assert_eq!(w.format(), Err(WordError::Unprintable { index: 26 }));
    }

    #[test]
    #[should_panic(expected = "alphabet rank")]
    fn alphabet_rank_zero_rejected() {
        Alphabet::new(0);
    }

    #[test]
    fn parse_format_roundtrip_is_stable() {
        let alphabet = Alphabet::new(4);
        for text in ["a", "abcd", "DCba", "aBaBaB", "1"] {
            let w = Word::parse(text, alphabet).unwrap();
            assert_eq!(w.format().unwrap(), *text);
        }
    }
}
