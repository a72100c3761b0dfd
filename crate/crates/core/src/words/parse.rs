use num_bigint::BigInt;

use super::{GroupDescriptor, PowerWord, Word};
use crate::error::{Error, Result};

fn is_identity_token(s: &str) -> bool {
    s.is_empty() || s == "1" || s == "ε"
}

/// `first_column` is the 1-based column of `text[0]` in the enclosing input.
pub(super) fn parse_word(d: &GroupDescriptor, text: &str, first_column: usize) -> Result<Word> {
    let lead = text.chars().take_while(|c| c.is_whitespace()).count();
    let body = text.trim();
    if is_identity_token(body) {
        return Ok(Word::identity());
    }
    let letters = body
        .chars()
        .enumerate()
        .map(|(i, c)| d.parse_letter(c, first_column + lead + i))
        .collect::<Result<Vec<_>>>()?;
    Ok(Word::from_letters(letters))
}

pub(super) fn parse_power_word(d: &GroupDescriptor, text: &str) -> Result<PowerWord> {
    let chars: Vec<char> = text.chars().collect();
    let mut factors: Vec<(Word, BigInt)> = Vec::new();
    let mut i = 0;
    let syntax = |column: usize, message: &str| Error::Syntax { column, message: message.to_string() };

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '1' || c == 'ε' {
            // identity factor
            i += 1;
            if i < chars.len() && !chars[i].is_whitespace() && chars[i] != '(' {
                return Err(syntax(i + 1, "identity token must stand alone"));
            }
        } else if c == '(' {
            let open = i;
            let close = chars[open..]
                .iter()
                .position(|&c| c == ')')
                .map(|p| open + p)
                .ok_or_else(|| syntax(open + 1, "unclosed `(`"))?;
            let inner: String = chars[open + 1..close].iter().collect();
            let base = parse_word(d, &inner, open + 2)?;
            i = close + 1;
            let exponent = if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                    i += 1;
                }
                let digits_start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i == digits_start {
                    return Err(syntax(start + 1, "expected an integer exponent after `^`"));
                }
                let digits: String = chars[start..i].iter().collect();
                digits.parse::<BigInt>().map_err(|_| syntax(start + 1, "bad exponent"))?
            } else {
                BigInt::from(1)
            };
            factors.push((base, exponent));
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_alphabetic() && chars[i] != 'ε' {
                i += 1;
            }
            let run: String = chars[start..i].iter().collect();
            factors.push((parse_word(d, &run, start + 1)?, BigInt::from(1)));
        } else {
            return Err(syntax(i + 1, &format!("unexpected character `{c}`")));
        }
    }
    Ok(PowerWord::from_factors(factors))
}
