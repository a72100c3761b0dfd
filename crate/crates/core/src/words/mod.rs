//! Exact free-group arithmetic.
//!
//! [`Word`] is a freely reduced word; [`PowerWord`] is a compressed product
//! of powers with arbitrary-precision exponents. Text syntax: lowercase
//! letters are generators, uppercase letters their inverses (`aB` is
//! `a b^-1`), `1` is the identity, and power words are whitespace-separated
//! factors `word` or `(word)^exp`.

mod parse;
mod power;
mod word;

pub use power::{Factor, PowerWord};
pub use word::{free_reduce, CyclicForm, Letter, Word};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_RANK: usize = 26;

/// The ambient free group: rank, letter names and hyperbolicity constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    rank: usize,
    letter_names: Vec<char>,
    delta: u64,
}

impl GroupDescriptor {
    /// Free group of the given rank over `a, b, c, ...`. Its Cayley graph is
    /// a tree, so `delta = 0`.
    pub fn free(rank: usize) -> Result<GroupDescriptor> {
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::Descriptor(format!("rank must be in 1..={MAX_RANK}, got {rank}")));
        }
        Ok(GroupDescriptor {
            rank,
            letter_names: (0..rank).map(|i| (b'a' + i as u8) as char).collect(),
            delta: 0,
        })
    }

    /// Free group with custom lowercase letter names.
    pub fn free_with_letters(names: &[char]) -> Result<GroupDescriptor> {
        let mut d = GroupDescriptor::free(names.len())?;
        for (i, &c) in names.iter().enumerate() {
            if !c.is_ascii_lowercase() {
                return Err(Error::Descriptor(format!("letter name `{c}` is not a lowercase ASCII letter")));
            }
            if names[..i].contains(&c) {
                return Err(Error::Descriptor(format!("letter name `{c}` is repeated")));
            }
        }
        d.letter_names = names.to_vec();
        Ok(d)
    }

    pub(crate) fn default_alphabet() -> GroupDescriptor {
        GroupDescriptor::free(MAX_RANK).expect("max rank is valid")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn letter_names(&self) -> &[char] {
        &self.letter_names
    }

    /// All `2k` letters in code order `a, A, b, B, ...`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..2 * self.rank).map(Letter::from_code)
    }

    /// Checks that every letter of `w` belongs to this alphabet.
    pub fn check(&self, w: &Word) -> Result<()> {
        match w.max_index() {
            Some(index) if index >= self.rank => Err(Error::DescriptorMismatch { index, rank: self.rank }),
            _ => Ok(()),
        }
    }

    pub fn check_power(&self, p: &PowerWord) -> Result<()> {
        p.factors().iter().try_for_each(|f| self.check(&f.base))
    }

    pub fn parse_letter(&self, symbol: char, column: usize) -> Result<Letter> {
        let lower = symbol.to_ascii_lowercase();
        match self.letter_names.iter().position(|&c| c == lower) {
            Some(i) => Ok(Letter::new(i, symbol.is_ascii_uppercase())),
            None => Err(Error::UnknownLetter { symbol, column }),
        }
    }

    /// Parses and freely reduces a word. `1`, `ε` and the empty string
    /// denote the identity.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        parse::parse_word(self, text, 1)
    }

    pub fn parse_power_word(&self, text: &str) -> Result<PowerWord> {
        parse::parse_power_word(self, text)
    }

    pub fn render(&self, w: &Word) -> String {
        w.to_string_with(&self.letter_names)
    }

    pub fn render_power(&self, p: &PowerWord) -> String {
        p.to_string_with(&self.letter_names)
    }
}

/// Every reduced word of length at most `max_len` over `rank` generators,
/// shortest first and in letter-code order within a length.
pub fn all_reduced_words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut layer_start = 0;
    for _ in 0..max_len {
        let layer_end = out.len();
        for i in layer_start..layer_end {
            for code in 0..2 * rank {
                let l = Letter::from_code(code);
                if out[i].last() != Some(l.inverse()) {
                    let next = out[i].multiply(&Word::letter(l));
                    out.push(next);
                }
            }
        }
        layer_start = layer_end;
    }
    out
}
