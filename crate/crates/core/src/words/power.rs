use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::word::{Letter, Word};
use crate::error::{Error, Result};

/// One factor `base^exponent` of a [`PowerWord`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub base: Word,
    pub exponent: BigInt,
}

/// A group element stored as a product of powers.
///
/// Values produced by [`PowerWord::normalize`] (and by every arithmetic
/// method) satisfy:
///
/// - every exponent is positive and every base nonempty;
/// - a factor with exponent at least 2 has a cyclically reduced, primitive
///   base;
/// - concatenating the expansions performs no cancellation, so the length
///   is `sum(exponent * |base|)`.
///
/// Structural equality (`==`) compares factor lists; use
/// [`PowerWord::equals`] for equality in the group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PowerWord {
    factors: Vec<Factor>,
}

/// Internal segment: `period` repeated `count` times. With `count == 1` the
/// period is any reduced word; otherwise it is cyclically reduced.
#[derive(Clone, Debug)]
struct Piece {
    period: Vec<Letter>,
    count: BigUint,
    cut: Cut,
}

/// Records that a run was rotated when letters were cut from one of its
/// ends, so the final pass can restore the original period.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cut {
    None,
    /// `s (t s)^m` produced from `(s t)^(m+1)` minus a right suffix.
    Right,
    /// `(s t)^m s` produced from `(t s)^(m+1)` minus a left prefix.
    Left,
}

impl Piece {
    fn plain(letters: Vec<Letter>) -> Piece {
        Piece { period: letters, count: BigUint::one(), cut: Cut::None }
    }

    /// Repeated cyclically reduced `period`, rewritten over its primitive
    /// root.
    fn power(period: Vec<Letter>, count: BigUint) -> Piece {
        if count.is_one() {
            return Piece::plain(period);
        }
        let p = smallest_period(&period);
        let reps = period.len() / p;
        let mut period = period;
        period.truncate(p);
        Piece { period, count: count * reps, cut: Cut::None }
    }

    fn with_cut(mut self, cut: Cut) -> Piece {
        self.cut = cut;
        self
    }

    fn len(&self) -> BigUint {
        &self.count * self.period.len()
    }

    fn inverse_period(&self) -> Vec<Letter> {
        self.period.iter().rev().map(|l| l.inverse()).collect()
    }

    /// Drops `n` letters from the right end; `n <= len`. A partially
    /// consumed power keeps its periodic part (rotated) at the right so the
    /// next boundary sees the whole run.
    fn drop_right(self, n: &BigUint) -> Vec<Piece> {
        let a = self.period.len();
        let (k, r) = n.div_rem(&BigUint::from(a));
        let r = r.to_usize().expect("remainder below period length");
        let rest = self.count - k;
        if r == 0 {
            return if rest.is_zero() { vec![] } else { vec![Piece::power(self.period, rest)] };
        }
        let keep = a - r;
        let mut out = vec![Piece::plain(self.period[..keep].to_vec())];
        let whole = rest - 1u32;
        if !whole.is_zero() {
            out.push(Piece::power(rotate(&self.period, keep), whole).with_cut(Cut::Right));
        }
        out
    }

    /// Drops `n` letters from the left end; `n <= len`. Mirror image of
    /// [`Piece::drop_right`].
    fn drop_left(self, n: &BigUint) -> Vec<Piece> {
        let a = self.period.len();
        let (k, r) = n.div_rem(&BigUint::from(a));
        let r = r.to_usize().expect("remainder below period length");
        let rest = self.count - k;
        if r == 0 {
            return if rest.is_zero() { vec![] } else { vec![Piece::power(self.period, rest)] };
        }
        let mut out = Vec::with_capacity(2);
        let whole = rest - 1u32;
        if !whole.is_zero() {
            out.push(Piece::power(rotate(&self.period, r), whole).with_cut(Cut::Left));
        }
        out.push(Piece::plain(self.period[r..].to_vec()));
        out
    }
}

/// `p[k..] p[..k]`
fn rotate(p: &[Letter], k: usize) -> Vec<Letter> {
    let mut v = p[k..].to_vec();
    v.extend_from_slice(&p[..k]);
    v
}

fn smallest_period(s: &[Letter]) -> usize {
    let n = s.len();
    (1..=n)
        .filter(|p| n % p == 0)
        .find(|&p| (p..n).all(|i| s[i] == s[i - p]))
        .unwrap_or(n)
}

/// Longest common prefix of `x^∞` truncated to `x_len` and `y^∞` truncated
/// to `y_len`. Two periodic sequences that agree on `|x| + |y|` letters
/// agree everywhere (Fine and Wilf), so at most that many letters are read.
fn periodic_lcp(x: &[Letter], x_len: &BigUint, y: &[Letter], y_len: &BigUint) -> BigUint {
    let cap = x_len.min(y_len).clone();
    let bound = x.len() + y.len();
    let limit = cap.to_usize().map_or(bound, |c| c.min(bound));
    for i in 0..limit {
        if x[i % x.len()] != y[i % y.len()] {
            return BigUint::from(i);
        }
    }
    cap
}

fn can_merge(left: &Piece, right: &Piece) -> bool {
    left.period == right.period || (left.count.is_one() && right.count.is_one())
}

fn merge(left: Piece, right: Piece) -> Piece {
    if left.period == right.period {
        Piece::power(left.period, left.count + right.count)
    } else {
        let mut period = left.period;
        period.extend(right.period);
        Piece::plain(period)
    }
}

fn push_merged(out: &mut Vec<Piece>, piece: Piece) {
    out.push(piece);
    while out.len() >= 2 && can_merge(&out[out.len() - 2], &out[out.len() - 1]) {
        let right = out.pop().unwrap();
        let left = out.pop().unwrap();
        out.push(merge(left, right));
    }
}

/// Undoes the rotations introduced by cuts, using `s (t s)^m = (s t)^m s`.
fn restore_alignment(pieces: Vec<Piece>) -> Vec<Piece> {
    let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
    let mut iter = pieces.into_iter().peekable();
    while let Some(p) = iter.next() {
        match p.cut {
            Cut::Right => {
                if let Some(top) = out.last() {
                    let s = &top.period;
                    if top.count.is_one() && s.len() < p.period.len() && p.period.ends_with(s) {
                        let s = out.pop().unwrap().period;
                        let shift = p.period.len() - s.len();
                        out.push(Piece::power(rotate(&p.period, shift), p.count));
                        out.push(Piece::plain(s));
                        continue;
                    }
                }
            }
            Cut::Left => {
                if let Some(next) = iter.peek() {
                    let s = &next.period;
                    if next.count.is_one() && s.len() < p.period.len() && p.period.starts_with(s) {
                        let s = iter.next().unwrap().period;
                        let shift = s.len();
                        out.push(Piece::plain(s));
                        out.push(Piece::power(rotate(&p.period, shift), p.count));
                        continue;
                    }
                }
            }
            Cut::None => {}
        }
        out.push(p);
    }
    out
}

fn factor_pieces(base: &Word, exponent: &BigInt, out: &mut Vec<Piece>) {
    if exponent.is_zero() || base.is_empty() {
        return;
    }
    let b = if exponent.sign() == Sign::Minus { base.inverse() } else { base.clone() };
    let magnitude = exponent.magnitude();
    if magnitude.is_one() {
        out.push(Piece::plain(b.letters().to_vec()));
        return;
    }
    let form = b.cyclic_form();
    if !form.conjugator.is_empty() {
        out.push(Piece::plain(form.conjugator.letters().to_vec()));
    }
    out.push(Piece::power(form.core.letters().to_vec(), magnitude.clone()));
    if !form.conjugator.is_empty() {
        out.push(Piece::plain(form.conjugator.inverse().letters().to_vec()));
    }
}

/// Left-to-right boundary resolution. `done` is a reduced stack; the
/// unconsumed remainder of a piece is re-queued at the front of `work` so it
/// meets the new top of the stack.
fn reduce_pieces(input: Vec<Piece>) -> Vec<Piece> {
    let mut work: Vec<Piece> = input;
    work.reverse();
    let mut done: Vec<Piece> = Vec::new();

    while let Some(cur) = work.pop() {
        let Some(top) = done.pop() else {
            done.push(cur);
            continue;
        };
        let cancel = periodic_lcp(&top.inverse_period(), &top.len(), &cur.period, &cur.len());
        if cancel.is_zero() {
            done.push(top);
            done.push(cur);
            continue;
        }
        done.extend(top.drop_right(&cancel));
        for p in cur.drop_left(&cancel).into_iter().rev() {
            work.push(p);
        }
    }

    let mut merged = Vec::with_capacity(done.len());
    for p in restore_alignment(done) {
        push_merged(&mut merged, p);
    }
    merged
}

impl PowerWord {
    pub fn identity() -> PowerWord {
        PowerWord::default()
    }

    /// Builds a power word from raw factors without normalizing. Factors with
    /// exponent 0 or empty base are dropped.
    pub fn from_factors<I, E>(factors: I) -> PowerWord
    where
        I: IntoIterator<Item = (Word, E)>,
        E: Into<BigInt>,
    {
        PowerWord {
            factors: factors
                .into_iter()
                .map(|(base, e)| Factor { base, exponent: e.into() })
                .filter(|f| !f.exponent.is_zero() && !f.base.is_empty())
                .collect(),
        }
    }

    pub fn from_word(w: &Word) -> PowerWord {
        PowerWord::from_factors([(w.clone(), 1)])
    }

    /// Normalized `base^exponent`.
    pub fn power(base: &Word, exponent: impl Into<BigInt>) -> PowerWord {
        PowerWord::from_factors([(base.clone(), exponent)]).normalize()
    }

    /// Normalized product of the given power words.
    pub fn product<'a, I: IntoIterator<Item = &'a PowerWord>>(parts: I) -> PowerWord {
        let factors = parts.into_iter().flat_map(|p| p.factors.iter().cloned()).collect();
        PowerWord { factors }.normalize()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn normalize(&self) -> PowerWord {
        let mut pieces = Vec::new();
        for f in &self.factors {
            factor_pieces(&f.base, &f.exponent, &mut pieces);
        }
        let factors = reduce_pieces(pieces)
            .into_iter()
            .map(|p| Factor {
                base: Word::from_reduced(p.period),
                exponent: BigInt::from(p.count),
            })
            .collect();
        PowerWord { factors }
    }

    /// Checks the normal-form invariants (not including positivity of
    /// exponents).
    pub fn is_normalized(&self) -> bool {
        let mut prev: Option<Letter> = None;
        for f in &self.factors {
            if f.exponent.is_zero() || f.base.is_empty() {
                return false;
            }
            let b = if f.exponent.sign() == Sign::Minus { f.base.inverse() } else { f.base.clone() };
            if b.letters().windows(2).any(|w| w[0] == w[1].inverse()) {
                return false;
            }
            if !f.exponent.magnitude().is_one() && !b.is_cyclically_reduced() {
                return false;
            }
            let first = b.first().unwrap();
            if prev == Some(first.inverse()) {
                return false;
            }
            prev = b.last();
        }
        true
    }

    /// Exact length of the reduced expansion.
    pub fn length(&self) -> BigUint {
        self.normalize()
            .factors
            .iter()
            .map(|f| f.exponent.magnitude() * f.base.len())
            .sum()
    }

    pub fn multiply(&self, other: &PowerWord) -> PowerWord {
        PowerWord::product([self, other])
    }

    pub fn inverse(&self) -> PowerWord {
        let factors = self
            .factors
            .iter()
            .rev()
            .map(|f| Factor { base: f.base.clone(), exponent: -f.exponent.clone() })
            .collect();
        PowerWord { factors }.normalize()
    }

    pub fn is_identity(&self) -> bool {
        self.normalize().factors.is_empty()
    }

    /// Equality in the group.
    pub fn equals(&self, other: &PowerWord) -> bool {
        self.multiply(&other.inverse()).factors.is_empty()
    }

    pub fn equals_word(&self, w: &Word) -> bool {
        self.equals(&PowerWord::from_word(w))
    }

    /// Expands to a plain reduced word, refusing when the length exceeds
    /// `limit`.
    pub fn expand(&self, limit: usize) -> Result<Word> {
        let normal = self.normalize();
        let length: BigUint = normal.factors.iter().map(|f| f.exponent.magnitude() * f.base.len()).sum();
        match length.to_usize() {
            Some(n) if n <= limit => {
                let mut letters = Vec::with_capacity(n);
                for f in &normal.factors {
                    let reps = f.exponent.magnitude().to_usize().expect("bounded by limit");
                    for _ in 0..reps {
                        letters.extend_from_slice(f.base.letters());
                    }
                }
                Ok(Word::from_reduced(letters))
            }
            _ => Err(Error::ExpansionLimit { length, limit: BigUint::from(limit) }),
        }
    }

    pub fn to_string_with(&self, names: &[char]) -> String {
        if self.factors.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|f| {
                let base = f.base.to_string_with(names);
                if f.exponent.is_one() {
                    base
                } else {
                    format!("({base})^{}", f.exponent)
                }
            })
            .collect();
        parts.join(" ")
    }
}

impl From<&Word> for PowerWord {
    fn from(w: &Word) -> PowerWord {
        PowerWord::from_word(w)
    }
}

impl fmt::Display for PowerWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<char> = (0..super::MAX_RANK).map(|i| (b'a' + i as u8) as char).collect();
        f.write_str(&self.to_string_with(&names))
    }
}

impl std::str::FromStr for PowerWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<PowerWord> {
        super::GroupDescriptor::default_alphabet().parse_power_word(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pw(s: &str) -> PowerWord {
        s.parse().unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(pw("(a)^2 (a)^3").normalize().to_string(), "(a)^5");
        assert!(pw("(ab)^2 (BA)^2").normalize().factors().is_empty());
        assert_eq!(pw("(ab)^3 (B)^1").normalize().to_string(), "(ab)^2 a");
    }

    #[test]
    fn length_examples() {
        assert_eq!(pw("(ab)^5").length(), BigUint::from(10u32));
        assert_eq!(pw("(Aba)^4").length(), BigUint::from(6u32));
        assert_eq!(pw("(ab)^3 (a)^1 (ab)^2").length(), BigUint::from(11u32));
    }

    #[test]
    fn equal_invert_expand_examples() {
        assert!(pw("(ab)^2").equals_word(&w("abab")));
        assert_eq!(pw("(ab)^3 a").inverse().to_string(), "A (BA)^3");
        let huge = PowerWord::power(&w("a"), BigInt::one() << 80);
        match huge.expand(1_000_000) {
            Err(Error::ExpansionLimit { length, .. }) => assert_eq!(length, BigUint::one() << 80),
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn conjugated_powers_split_into_plain_flanks() {
        let p = pw("(Aba)^4").normalize();
        assert_eq!(p.to_string(), "A (b)^4 a");
        assert!(p.is_normalized());
        assert!(!pw("(Aba)^4").is_normalized());
    }

    #[test]
    fn nonprimitive_bases_are_rewritten() {
        assert_eq!(pw("(abab)^3").normalize().to_string(), "(ab)^6");
        assert_eq!(pw("ab (ab)^2").normalize().to_string(), "(ab)^3");
    }

    #[test]
    fn partial_period_cancellation_between_powers() {
        // (ab)^5 (BABAB)^1 -> cancels five letters
        let p = pw("(ab)^5 BABAB").normalize();
        assert_eq!(p.to_string(), "(ab)^2 a");
        // huge exponents cancel exactly
        let big = BigInt::from(10u32).pow(30);
        let p = PowerWord::from_factors([(w("ab"), big.clone()), (w("BA"), big.clone() - 7)]);
        assert_eq!(p.normalize().to_string(), "(ab)^7");
        let p = PowerWord::from_factors([(w("ab"), big.clone()), (w("a"), BigInt::one()), (w("BA"), big.clone())]);
        assert_eq!(p.length(), BigUint::from(10u32).pow(30) * 4u32 + 1u32);
        // conjugate collapse: (ab)^n a (AB)^n = a, one period at a time if
        // the rotated run were not kept at the boundary
        let p = PowerWord::from_factors([(w("ab"), big.clone()), (w("a"), BigInt::one()), (w("AB"), big)]);
        assert_eq!(p.normalize().to_string(), "a");
    }

    #[test]
    fn requeue_after_exhausting_a_flank() {
        // b (a)^3 (A)^3 B collapses completely only if the remainder of the
        // right factor meets the earlier stack entry.
        assert!(pw("b (a)^3 (A)^3 B").is_identity());
        assert_eq!(pw("ab (a)^2 (A)^2 BA").normalize().to_string(), "1");
        assert_eq!(pw("ab (a)^2 (A)^4").normalize().to_string(), "ab (A)^2");
    }
}
