use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A signed generator. The code is `2 * index + inverse`, so the derived
/// ordering is `a < A < b < B < ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u32);

impl Letter {
    pub fn new(index: usize, inverse: bool) -> Letter {
        Letter((index as u32) << 1 | inverse as u32)
    }

    pub fn generator(index: usize) -> Letter {
        Letter::new(index, false)
    }

    pub fn from_code(code: usize) -> Letter {
        Letter(code as u32)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn index(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// Character in the default alphabet (`a`, `b`, ... and upper case for
    /// inverses).
    pub fn default_char(self) -> char {
        let c = (b'a' + self.index() as u8) as char;
        if self.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }
}

/// A freely reduced word. In a free group its length is exactly the word
/// metric `|w|`, since the Cayley graph is a tree.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Decomposition `w = u c u^-1` with `c` cyclically reduced and no
/// cancellation, so `|w| = 2|u| + |c|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicForm {
    pub conjugator: Word,
    pub core: Word,
}

/// Appends `letter` to a reduced stack, cancelling against the top.
#[inline]
fn push_reduced(stack: &mut Vec<Letter>, letter: Letter) {
    if stack.last() == Some(&letter.inverse()) {
        stack.pop();
    } else {
        stack.push(letter);
    }
}

pub fn free_reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
    let mut letters = Vec::new();
    for l in raw {
        push_reduced(&mut letters, l);
    }
    Word { letters }
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
        free_reduce(raw)
    }

    pub fn letter(l: Letter) -> Word {
        Word { letters: vec![l] }
    }

    /// Caller guarantees the slice is already reduced.
    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|w| w[0] != w[1].inverse()));
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

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Largest letter index used, if any.
    pub fn max_index(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.index()).max()
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `self^n` for a machine-sized exponent, fully expanded.
    pub fn pow(&self, n: i64) -> Word {
        if n == 0 || self.is_empty() {
            return Word::identity();
        }
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let form = base.cyclic_form();
        let reps = n.unsigned_abs() as usize;
        let mut letters =
            Vec::with_capacity(2 * form.conjugator.len() + reps * form.core.len());
        letters.extend_from_slice(form.conjugator.letters());
        for _ in 0..reps {
            letters.extend_from_slice(form.core.letters());
        }
        letters.extend(form.conjugator.inverse().letters);
        Word::from_reduced(letters)
    }

    /// First and last letters are not mutually inverse.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => f != l.inverse(),
            _ => true,
        }
    }

    pub fn cyclic_form(&self) -> CyclicForm {
        let n = self.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inverse() {
            k += 1;
        }
        CyclicForm {
            conjugator: Word::from_reduced(self.letters[..k].to_vec()),
            core: Word::from_reduced(self.letters[k..n - k].to_vec()),
        }
    }

    /// Returns `(r, k)` with `self = r^k`, `k >= 1` and `r` not a proper
    /// power.
    pub fn primitive_root(&self) -> Result<(Word, usize)> {
        if self.is_empty() {
            return Err(Error::TrivialElement);
        }
        let CyclicForm { conjugator, core } = self.cyclic_form();
        let c = core.letters();
        let period = smallest_period(c);
        let root_core = Word::from_reduced(c[..period].to_vec());
        let root = conjugator.multiply(&root_core).multiply(&conjugator.inverse());
        Ok((root, c.len() / period))
    }

    pub fn to_string_with(&self, names: &[char]) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|l| {
                let c = names[l.index()];
                if l.is_inverse() {
                    c.to_ascii_uppercase()
                } else {
                    c
                }
            })
            .collect()
    }
}

/// Smallest `p` dividing `s.len()` such that `s` is a repetition of its
/// first `p` letters.
fn smallest_period(s: &[Letter]) -> usize {
    let n = s.len();
    (1..=n)
        .filter(|p| n % p == 0)
        .find(|&p| (p..n).all(|i| s[i] == s[i - p]))
        .unwrap_or(n)
}

impl std::ops::Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.multiply(rhs)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for l in &self.letters {
            write!(f, "{}", l.default_char())?;
        }
        Ok(())
    }
}

/// Parses in the default alphabet `a..z`. Use
/// [`GroupDescriptor::parse_word`](super::GroupDescriptor::parse_word) for
/// custom letter names or rank checks.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        super::GroupDescriptor::default_alphabet().parse_word(s)
    }
}
